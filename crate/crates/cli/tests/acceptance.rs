//! Acceptance criteria for gsh-shrink. Prints one PASS/FAIL line per
//! criterion (sub-criteria get their own line) and exits non-zero if any
//! fails. Tolerances are the constants below.

use std::f64::consts::PI;
use std::path::Path;
use std::process::Command;
use std::time::Instant;

use gsh_shrink::dwt::{daubechies_filter, forward, inverse};
use gsh_shrink::elicitation::{alpha_level, elicit_t, estimate_sigma, sample_kurtosis, ElicitationConfig};
use gsh_shrink::experiments::{run_experiment, AmseRecord, ExperimentConfig, Method};
use gsh_shrink::gsh_prior::{gsh_kurtosis, gsh_sample, GshParams, ShrinkagePrior};
use gsh_shrink::numerics::{sample_normal, sample_open01, QuadratureSpec, SeededRng};
use gsh_shrink::risk_analysis::{
    bayes_risk_with, default_moment_quadrature, default_risk_grid, risk_curve_with, BayesRiskMethod,
};
use gsh_shrink::shrinkage::ShrinkageRule;
use gsh_shrink::signals::TestFunction;
use gsh_shrink::Execution;

const NORMALIZATION_TOL: f64 = 1e-8;
const KURTOSIS_ROUND_TRIP_TOL: f64 = 1e-9;
const SAMPLE_KURTOSIS_TOL: f64 = 0.15;
const SAMPLE_KURTOSIS_DRAWS: usize = 1_000_000;
const RECONSTRUCTION_TOL: f64 = 1e-9;
const PARSEVAL_REL_TOL: f64 = 1e-10;
const VANISHING_MOMENT_TOL: f64 = 1e-8;
const RULE_ORACLE_TOL: f64 = 1e-6;
const RISK_DECOMPOSITION_TOL: f64 = 1e-8;
const RISK_EVEN_TOL: f64 = 1e-8;
const MC_DRAWS: usize = 100_000;
const MC_SIGMAS: f64 = 3.0;
const BAYES_TABLE_TOL: f64 = 0.15;
const AMSE_REL_TOL: f64 = 0.25;
const AMSE_REPLICATIONS: usize = 20;
const EXACT_TOL: f64 = 1e-12;

const T_GRID: [f64; 9] = [-3.0, -2.0, -1.0, -PI / 2.0, 0.1, 1.0, 2.0, 3.0, 10.0];
const D_GRID: [f64; 11] = [0.0, 0.5, -0.5, 1.0, -1.0, 3.0, -3.0, 6.0, -6.0, 10.0, -10.0];

/// Bayes risks at alpha = 0.9, tau = 1, by t.
const PAPER_BAYES_BY_T: [(f64, f64); 8] = [
    (-3.0, 0.125),
    (-2.0, 0.329),
    (-1.0, 0.223),
    (0.1, 0.235),
    (1.0, 0.183),
    (2.0, 0.221),
    (3.0, 0.240),
    (10.0, 0.247),
];

/// Bayes risks at t = 3, tau = 1, by alpha.
const PAPER_BAYES_BY_ALPHA: [(f64, f64); 5] =
    [(0.6, 0.744), (0.7, 0.762), (0.8, 0.129), (0.9, 0.245), (0.99, 0.03)];

/// GSH-rule AMSE (function, n, snr, value).
const PAPER_AMSE: [(TestFunction, usize, f64, f64); 8] = [
    (TestFunction::Doppler, 512, 3.0, 1.162),
    (TestFunction::Doppler, 512, 7.0, 0.264),
    (TestFunction::Doppler, 2048, 3.0, 0.423),
    (TestFunction::Doppler, 2048, 7.0, 0.104),
    (TestFunction::Heavisine, 512, 3.0, 0.472),
    (TestFunction::Heavisine, 512, 7.0, 0.159),
    (TestFunction::Heavisine, 2048, 3.0, 0.238),
    (TestFunction::Heavisine, 2048, 7.0, 0.069),
];

struct Report {
    lines: Vec<(bool, String, String)>,
}

impl Report {
    fn check(&mut self, id: &str, pass: bool, detail: impl Into<String>) {
        let detail = detail.into();
        println!("{}  {id:<3} {detail}", if pass { "PASS" } else { "FAIL" });
        self.lines.push((pass, id.to_string(), detail));
    }

    fn note(&self, text: impl AsRef<str>) {
        for line in text.as_ref().lines() {
            println!("          {line}");
        }
    }
}

fn rule(alpha: f64, t: f64, spec: Option<QuadratureSpec>) -> ShrinkageRule {
    let prior = ShrinkagePrior::new(alpha, GshParams::new(1.0, t).unwrap()).unwrap();
    match spec {
        Some(s) => ShrinkageRule::with_quadrature(prior, 1.0, s).unwrap(),
        None => ShrinkageRule::new(prior, 1.0).unwrap(),
    }
}

fn normal_pdf(x: f64) -> f64 {
    (-0.5 * x * x).exp() / (2.0 * PI).sqrt()
}

/// Plain trapezoid of the density on `+-L`, `L` being 45 decay lengths past
/// the shoulder at `max(t, 0) tau / c2`.
fn trapezoid_mass(g: &GshParams) -> f64 {
    let half = (45.0 + g.t().max(0.0)) * g.tau() / g.c2();
    let h = (g.pole_distance() / 8.0).min(g.tau() / 8.0);
    let m = (2.0 * half / h).ceil() as usize;
    let h = 2.0 * half / m as f64;
    let inner: f64 = (1..m).map(|i| g.density(-half + h * i as f64)).sum();
    h * (inner + 0.5 * (g.density(-half) + g.density(half)))
}

fn criterion_1(r: &mut Report) {
    let mut worst: f64 = 0.0;
    let mut count = 0;
    for t in T_GRID {
        for tau in [0.5, 1.0, 2.0] {
            worst = worst.max((trapezoid_mass(&GshParams::new(tau, t).unwrap()) - 1.0).abs());
            count += 1;
        }
    }
    let u = sample_open01(SeededRng::new(101, 1), 400);
    for pair in u.chunks(2) {
        let t = -3.1 + pair[0] * 33.1;
        let tau = 0.2 + pair[1] * 4.8;
        worst = worst.max((trapezoid_mass(&GshParams::new(tau, t).unwrap()) - 1.0).abs());
        count += 1;
    }
    r.check(
        "1",
        worst <= NORMALIZATION_TOL,
        format!("prior normalization: max |int g - 1| = {worst:.2e} over {count} (t, tau) (tol {NORMALIZATION_TOL:e})"),
    );
}

fn criterion_2(r: &mut Report) {
    let cfg = ElicitationConfig::default();
    let worst = [-2.0, -1.0, 0.5, 1.0, 3.0]
        .iter()
        .map(|&t| (elicit_t(gsh_kurtosis(t).unwrap(), &cfg) - t).abs())
        .fold(0.0, f64::max);
    r.check(
        "2a",
        worst <= KURTOSIS_ROUND_TRIP_TOL,
        format!("kurtosis round trip: max |t' - t| = {worst:.2e} (tol {KURTOSIS_ROUND_TRIP_TOL:e})"),
    );
    let mut pass = true;
    let mut parts = Vec::new();
    for (k, t) in [-1.0, 1.0, 3.0].into_iter().enumerate() {
        let g = GshParams::new(1.0, t).unwrap();
        let draws = gsh_sample(SeededRng::new(202, k as u64), &g, SAMPLE_KURTOSIS_DRAWS);
        let b = sample_kurtosis(&draws).unwrap();
        let target = gsh_kurtosis(t).unwrap();
        pass &= (b - target).abs() <= SAMPLE_KURTOSIS_TOL;
        parts.push(format!("t={t}: {b:.4} vs {target:.4}"));
    }
    r.check(
        "2b",
        pass,
        format!("sample kurtosis of 1e6 draws within {SAMPLE_KURTOSIS_TOL}: {}", parts.join(", ")),
    );
}

fn criterion_3(r: &mut Report) {
    let (mut rec, mut pars): (f64, f64) = (0.0, 0.0);
    for (k, n) in [64usize, 512, 2048].into_iter().enumerate() {
        let x = sample_normal(SeededRng::new(303, k as u64), 0.0, 1.0, n).unwrap();
        let energy: f64 = x.iter().map(|v| v * v).sum();
        for order in [1, 4, 10] {
            let f = daubechies_filter(order).unwrap();
            for j0 in [0, 3] {
                let dec = forward(&x, &f, j0).unwrap();
                pars = pars.max((dec.energy() - energy).abs() / energy);
                let back = inverse(&dec).unwrap();
                rec = rec.max(x.iter().zip(&back).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max));
            }
        }
    }
    r.check(
        "3a",
        rec <= RECONSTRUCTION_TOL && pars <= PARSEVAL_REL_TOL,
        format!(
            "DWT: reconstruction max-abs {rec:.2e} (tol {RECONSTRUCTION_TOL:e}), Parseval rel {pars:.2e} (tol {PARSEVAL_REL_TOL:e})"
        ),
    );
    let f = daubechies_filter(10).unwrap();
    let moment = (0..10)
        .map(|p| f.highpass.iter().enumerate().map(|(m, g)| g * (m as f64).powi(p)).sum::<f64>().abs())
        .fold(0.0, f64::max);
    // and on sampled polynomials of degree 9, away from the periodic seam
    let n = 512;
    let poly: Vec<f64> = (0..n)
        .map(|i| {
            let x = i as f64 / n as f64 - 0.5;
            (0..10).map(|p| x.powi(p)).sum()
        })
        .collect();
    let dec = forward(&poly, &f, 8).unwrap();
    let interior = dec.details[&8][..256 - 10].iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    r.check(
        "3b",
        moment <= VANISHING_MOMENT_TOL && interior <= VANISHING_MOMENT_TOL,
        format!(
            "Daub10 moments p=0..9: max |sum g m^p| = {moment:.2e}; interior details of a degree-9 polynomial {interior:.2e} (tol {VANISHING_MOMENT_TOL:e})"
        ),
    );
}

/// `E(theta | d)` by a fine trapezoid in `theta`, independent of the rule.
fn oracle_posterior_mean(d: f64, alpha: f64, g: &GshParams) -> f64 {
    let lo = d.min(0.0) - 12.0;
    let hi = d.max(0.0) + 12.0;
    let m = ((hi - lo) * 10_000.0).ceil() as usize;
    let h = (hi - lo) / m as f64;
    let (mut num, mut den) = (0.0, 0.0);
    for i in 0..=m {
        let theta = lo + h * i as f64;
        let end = if i == 0 || i == m { 0.5 } else { 1.0 };
        let w = end * g.density(theta) * normal_pdf(d - theta);
        num += w * theta;
        den += w;
    }
    let slab = (1.0 - alpha) * h;
    slab * num / (alpha * normal_pdf(d) + slab * den)
}

fn criterion_4(r: &mut Report) {
    let ts = [-3.0, 0.1, 3.0, 10.0];
    let alphas = [0.6, 0.9, 0.99];
    let gh64 = QuadratureSpec::gauss_hermite(64).unwrap();
    let mut default_worst: f64 = 0.0;
    let mut gh_worst_by_t = Vec::new();
    for t in ts {
        let g = GshParams::new(1.0, t).unwrap();
        let mut gh_worst: f64 = 0.0;
        for alpha in alphas {
            let base = rule(alpha, t, None);
            let literal = rule(alpha, t, Some(gh64));
            for d in D_GRID {
                let truth = oracle_posterior_mean(d, alpha, &g);
                default_worst = default_worst.max((base.shrink(d).unwrap() - truth).abs());
                gh_worst = gh_worst.max((literal.shrink(d).unwrap() - truth).abs());
            }
        }
        gh_worst_by_t.push((t, gh_worst));
    }
    r.check(
        "4a",
        default_worst <= RULE_ORACLE_TOL,
        format!("rule (default adaptive trapezoid) vs oracle: max error {default_worst:.2e} (tol {RULE_ORACLE_TOL:e})"),
    );
    let gh_pass = gh_worst_by_t.iter().all(|&(_, e)| e <= RULE_ORACLE_TOL);
    r.check(
        "4b",
        gh_pass,
        format!(
            "rule with 64-node Gauss-Hermite vs oracle: {} (tol {RULE_ORACLE_TOL:e})",
            gh_worst_by_t.iter().map(|(t, e)| format!("t={t}: {e:.2e}")).collect::<Vec<_>>().join(", ")
        ),
    );
    if !gh_pass {
        r.note(
            "64 Gauss-Hermite nodes cannot resolve the GSH poles nearest the real axis for\n\
             t = -3 (sharp peak) and t = 10 (steep shoulders); the library's rule uses the\n\
             adaptive trapezoid of 4a instead.",
        );
    }
    let (mut odd, mut shrinks, mut monotone) = (true, true, true);
    let grid: Vec<f64> = (0..=2000).map(|i| -10.0 + 0.01 * i as f64).collect();
    for t in ts {
        for alpha in alphas {
            let rl = rule(alpha, t, None);
            let v: Vec<f64> = grid.iter().map(|&d| rl.shrink(d).unwrap()).collect();
            for (i, &d) in grid.iter().enumerate() {
                odd &= v[i] == -rl.shrink(-d).unwrap();
                shrinks &= v[i].abs() <= d.abs();
                if i > 0 {
                    monotone &= v[i] >= v[i - 1];
                }
            }
        }
    }
    r.check(
        "4c",
        odd && shrinks && monotone,
        format!(
            "rule shape on d in [-10, 10] step 0.01: odd {odd}, |delta| <= |d| {shrinks}, nondecreasing {monotone}"
        ),
    );
}

/// `E[(delta(d) - theta)^2]` by a 6001-point trapezoid over `d in theta +- 12`.
fn direct_risk(rl: &ShrinkageRule, theta: f64) -> f64 {
    let m = 6000;
    let h = 24.0 / m as f64;
    (0..=m)
        .map(|i| {
            let u = -12.0 + h * i as f64;
            let end = if i == 0 || i == m { 0.5 } else { 1.0 };
            end * h * normal_pdf(u) * (rl.shrink(theta + u).unwrap() - theta).powi(2)
        })
        .sum()
}

fn criterion_5(r: &mut Report, exec: Execution) {
    let grid = default_risk_grid();
    let spec = default_moment_quadrature();
    let mut all_pass = true;
    let mut parts = Vec::new();
    for t in [-3.0, 3.0] {
        let rl = rule(0.9, t, None);
        let curve = risk_curve_with(&grid, &rl, &spec, exec).unwrap();
        let n = grid.len();
        let even = (0..n)
            .map(|i| (curve.classical_risk[i] - curve.classical_risk[n - 1 - i]).abs())
            .fold(0.0, f64::max);
        let decomp = (0..n)
            .step_by(16)
            .map(|i| {
                let b2v = curve.squared_bias[i] + curve.variance[i];
                (b2v - direct_risk(&rl, grid[i])).abs()
            })
            .fold(0.0, f64::max);
        let (imax, rmax) = curve
            .classical_risk
            .iter()
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |acc, (i, &v)| if v > acc.1 { (i, v) } else { acc });
        let peak = grid[imax].abs();
        let pass = even <= RISK_EVEN_TOL && decomp <= RISK_DECOMPOSITION_TOL && peak > 3.0 && peak < 4.0;
        all_pass &= pass;
        parts.push(format!(
            "t={t}: even {even:.1e}, bias^2+var vs direct {decomp:.1e}, max R = {rmax:.4} at |theta| = {peak}"
        ));
    }
    r.check(
        "5",
        all_pass,
        format!(
            "risk shape (alpha 0.9, peak required in 3 < |theta| < 4; tol {RISK_EVEN_TOL:e}): {}",
            parts.join("; ")
        ),
    );
    if !all_pass {
        r.note(
            "For large |theta| the rule behaves like d - sigma^2 c2 / tau, so R(theta) tends to\n\
             sigma^2 + (sigma^2 c2 / tau)^2. With t = 3 and sigma = 1 that plateau (7.29) exceeds\n\
             every interior value and the curve rises monotonically; an interior maximum between\n\
             3 and 4 exists only for t <= 2 at sigma = tau = 1.",
        );
    }
}

fn criterion_6(r: &mut Report, exec: Execution) {
    let spec = default_moment_quadrature();
    let mut rows = Vec::new();
    for &(t, paper) in &PAPER_BAYES_BY_T {
        rows.push((t, 0.9, paper));
    }
    for &(alpha, paper) in &PAPER_BAYES_BY_ALPHA {
        rows.push((3.0, alpha, paper));
    }
    let mut mc_pass = true;
    let mut table_pass = true;
    let mut lines = vec![format!(
        "{:>6} {:>5} {:>12} {:>12} {:>10} {:>7} {:>7}",
        "t", "alpha", "quadrature", "monte carlo", "z", "paper", "diff"
    )];
    for (k, &(t, alpha, paper)) in rows.iter().enumerate() {
        let rl = rule(alpha, t, None);
        let rng = SeededRng::new(606, k as u64);
        let q = bayes_risk_with(&rl, BayesRiskMethod::Quadrature, 0, rng, &spec, 1, exec).unwrap();
        let mc = bayes_risk_with(&rl, BayesRiskMethod::MonteCarlo, MC_DRAWS, rng, &spec, 1, exec).unwrap();
        let z = (q.value - mc.value) / mc.std_error;
        mc_pass &= z.abs() <= MC_SIGMAS;
        let diff = q.value - paper;
        table_pass &= diff.abs() <= BAYES_TABLE_TOL;
        lines.push(format!(
            "{t:>6} {alpha:>5} {:>12.6} {:>12.6} {z:>10.2} {paper:>7.3} {diff:>+7.3}",
            q.value, mc.value
        ));
    }
    r.check(
        "6a",
        mc_pass,
        format!("Bayes risk, quadrature vs Monte Carlo ({MC_DRAWS} draws) within {MC_SIGMAS} standard errors, sigma = 1"),
    );
    r.check("6b", table_pass, format!("Bayes risk vs the published tables within +-{BAYES_TABLE_TOL}"));
    r.note(lines.join("\n"));
    if !table_pass {
        let above: Vec<String> = rows
            .iter()
            .filter(|(_, alpha, paper)| *paper > 1.0 - alpha)
            .map(|(t, alpha, paper)| format!("(t={t}, alpha={alpha}): {paper} > {:.2}", 1.0 - alpha))
            .collect();
        r.note(format!(
            "The posterior mean's Bayes risk cannot exceed the prior variance (1 - alpha) tau^2\n\
             for any sigma. Published values above that bound: {}.",
            above.join(", ")
        ));
    }
}

fn amse(records: &[AmseRecord], f: TestFunction, n: usize, snr: f64, m: Method) -> f64 {
    records
        .iter()
        .find(|r| r.function == f && r.n == n && r.snr == snr && r.method == m)
        .map(|r| r.amse)
        .unwrap()
}

fn criterion_7(r: &mut Report, exec: Execution) {
    let cfg = ExperimentConfig {
        replications: AMSE_REPLICATIONS,
        methods: vec![Method::Gsh, Method::UniversalSoft],
        ..ExperimentConfig::default()
    };
    let start = Instant::now();
    let records = run_experiment(&cfg, exec).unwrap();
    let elapsed = start.elapsed().as_secs_f64();

    let mut pass_a = true;
    let mut lines = vec![format!(
        "{:<10} {:>5} {:>4} {:>10} {:>8} {:>7}",
        "function", "n", "snr", "GSH AMSE", "paper", "ratio"
    )];
    for &(f, n, snr, paper) in &PAPER_AMSE {
        let v = amse(&records, f, n, snr, Method::Gsh);
        let ratio = v / paper;
        pass_a &= (ratio - 1.0).abs() <= AMSE_REL_TOL;
        lines.push(format!("{:<10} {n:>5} {snr:>4} {v:>10.4} {paper:>8.3} {ratio:>7.3}", f.name()));
    }
    r.check(
        "7a",
        pass_a,
        format!(
            "GSH AMSE within +-{}% of the published values (M = {AMSE_REPLICATIONS}, seed {})",
            AMSE_REL_TOL * 100.0,
            cfg.base_seed
        ),
    );
    r.note(lines.join("\n"));

    let mut losses = Vec::new();
    let mut pairs = 0;
    for &f in &cfg.functions {
        for &n in &cfg.sizes {
            for &snr in &cfg.snrs {
                pairs += 1;
                let g = amse(&records, f, n, snr, Method::Gsh);
                let u = amse(&records, f, n, snr, Method::UniversalSoft);
                if g >= u {
                    losses.push(format!("{} n={n} snr={snr}: {g:.4} vs {u:.4}", f.name()));
                }
            }
        }
    }
    r.check(
        "7b",
        losses.is_empty(),
        format!(
            "GSH < Universal (soft) in {}/{pairs} cells{}",
            pairs - losses.len(),
            if losses.is_empty() { String::new() } else { format!("; losses: {}", losses.join(", ")) }
        ),
    );

    let mut violations = Vec::new();
    for &f in &cfg.functions {
        for &n in &cfg.sizes {
            for w in cfg.snrs.windows(2) {
                let (a, b) =
                    (amse(&records, f, n, w[0], Method::Gsh), amse(&records, f, n, w[1], Method::Gsh));
                if b >= a {
                    violations.push(format!("{} n={n} snr {}->{}", f.name(), w[0], w[1]));
                }
            }
        }
        for &snr in &cfg.snrs {
            for w in cfg.sizes.windows(2) {
                let (a, b) =
                    (amse(&records, f, w[0], snr, Method::Gsh), amse(&records, f, w[1], snr, Method::Gsh));
                if b >= a {
                    violations.push(format!("{} snr={snr} n {}->{}", f.name(), w[0], w[1]));
                }
            }
        }
    }
    r.check(
        "7c",
        violations.is_empty(),
        format!(
            "GSH AMSE strictly decreasing in SNR and in n{} (grid ran in {elapsed:.1} s)",
            if violations.is_empty() {
                String::new()
            } else {
                format!("; violations: {}", violations.join(", "))
            }
        ),
    );
}

fn criterion_8(r: &mut Report) {
    let cfg = ElicitationConfig::default();
    let j0 = cfg.primary_level;
    let checks = [
        ("alpha(J0)", alpha_level(j0, &cfg).unwrap(), 0.0),
        ("alpha(J0+1)", alpha_level(j0 + 1, &cfg).unwrap(), 0.75),
        ("sigma(|c|=2)", estimate_sigma(&[2.0, -2.0, 2.0, -2.0, 2.0]).unwrap(), 2.0 / 0.6745),
        ("t(4.2)", elicit_t(4.2, &cfg), 0.0),
        ("t(5)", elicit_t(5.0, &cfg), -PI / 2.0),
        ("t(3)", elicit_t(3.0, &cfg), PI),
    ];
    let worst = checks.iter().map(|(_, got, want)| (got - want).abs()).fold(0.0, f64::max);
    r.check(
        "8",
        worst <= EXACT_TOL,
        format!(
            "elicitation exactness: {} (max error {worst:.1e}, tol {EXACT_TOL:e})",
            checks.iter().map(|(k, got, _)| format!("{k} = {got}")).collect::<Vec<_>>().join(", ")
        ),
    );
}

fn cli(dir: &Path, args: &[&str]) -> bool {
    Command::new(env!("CARGO_BIN_EXE_gsh-shrink"))
        .current_dir(dir)
        .args(args)
        .output()
        .map(|o| o.status.success())
        .unwrap_or(false)
}

fn same_bytes(a: &Path, b: &Path) -> bool {
    matches!((std::fs::read(a), std::fs::read(b)), (Ok(x), Ok(y)) if x == y)
}

fn criterion_9(r: &mut Report) {
    let tmp = tempfile::tempdir().unwrap();
    let d = tmp.path();
    let mut ok = cli(
        d,
        &["signal", "--function", "doppler", "--n", "1024", "--snr", "5", "--seed", "9", "--out-dir", "s"],
    );
    for out in ["d1", "d2"] {
        ok &= cli(d, &["denoise", "--input", "s/signal.csv", "--out-dir", out]);
    }
    let sim = [
        "simulate",
        "--functions",
        "bumps,heavisine",
        "--n",
        "512",
        "--snr",
        "3,7",
        "--M",
        "3",
        "--seed",
        "99",
        "--out-dir",
    ];
    ok &= cli(d, &[&sim[..], &["m1"]].concat());
    ok &= cli(d, &[&["--jobs", "1"][..], &sim[..], &["m2"]].concat());
    let manifest = d.join("m1/manifest.json");
    ok &= cli(d, &["replay", "--manifest", manifest.to_str().unwrap(), "--out-dir", "m3"]);
    let files = [
        ("d1/denoised.csv", "d2/denoised.csv"),
        ("d1/coefficients.csv", "d2/coefficients.csv"),
        ("m1/amse.csv", "m2/amse.csv"),
        ("m1/amse.csv", "m3/amse.csv"),
        ("m1/amse_table.txt", "m3/amse_table.txt"),
    ];
    let identical = files.iter().all(|(a, b)| same_bytes(&d.join(a), &d.join(b)));
    r.check(
        "9",
        ok && identical,
        format!(
            "end-to-end determinism: denoise x2, simulate (parallel, --jobs 1, replay) byte-identical: {}",
            ok && identical
        ),
    );
}

fn main() {
    let exec = Execution::default();
    println!("gsh-shrink acceptance (parallel available: {})", Execution::parallel_available());
    let mut report = Report { lines: Vec::new() };
    let start = Instant::now();
    criterion_1(&mut report);
    criterion_2(&mut report);
    criterion_3(&mut report);
    criterion_4(&mut report);
    criterion_5(&mut report, exec);
    criterion_6(&mut report, exec);
    criterion_7(&mut report, exec);
    criterion_8(&mut report);
    criterion_9(&mut report);
    let failed: Vec<&str> = report.lines.iter().filter(|l| !l.0).map(|l| l.1.as_str()).collect();
    println!(
        "acceptance: {} of {} checks passed in {:.1} s{}",
        report.lines.len() - failed.len(),
        report.lines.len(),
        start.elapsed().as_secs_f64(),
        if failed.is_empty() { String::new() } else { format!("; failing: {}", failed.join(", ")) }
    );
    if !failed.is_empty() {
        std::process::exit(1);
    }
}
