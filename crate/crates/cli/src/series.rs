use std::path::Path;

use anyhow::Context;

use crate::UsageError;

/// Reads one numeric column from a CSV file with a header row. `column` is a
/// header name or a 0-based index; by default the last column is used, so a
/// leading date or index column is skipped.
pub fn read_series(path: &Path, column: Option<&str>) -> anyhow::Result<Vec<f64>> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_path(path)
        .with_context(|| format!("opening {}", path.display()))?;
    let headers =
        reader.headers().with_context(|| format!("reading the header of {}", path.display()))?.clone();
    if headers.is_empty() {
        return Err(UsageError(format!("{} has no columns", path.display())).into());
    }
    let idx = match column {
        None => headers.len() - 1,
        Some(c) => match headers.iter().position(|h| h == c) {
            Some(i) => i,
            None => match c.parse::<usize>() {
                Ok(i) if i < headers.len() => i,
                _ => {
                    return Err(UsageError(format!(
                        "column {c:?} not found in {}; header is {:?}",
                        path.display(),
                        headers.iter().collect::<Vec<_>>()
                    ))
                    .into())
                }
            },
        },
    };
    let mut values = Vec::new();
    for (row, record) in reader.records().enumerate() {
        let record = record.with_context(|| format!("reading {}", path.display()))?;
        let line = row + 2;
        let field = record
            .get(idx)
            .ok_or_else(|| UsageError(format!("{}:{line}: missing column {idx}", path.display())))?;
        let v: f64 = field
            .parse()
            .map_err(|_| UsageError(format!("{}:{line}: {field:?} is not a number", path.display())))?;
        if !v.is_finite() {
            return Err(UsageError(format!("{}:{line}: value {field} is not finite", path.display())).into());
        }
        values.push(v);
    }
    if values.is_empty() {
        return Err(UsageError(format!("{} has no data rows", path.display())).into());
    }
    Ok(values)
}

/// The powers of two just below and just above `n`.
pub fn nearest_dyadic_lengths(n: usize) -> (usize, usize) {
    let above = n.next_power_of_two();
    let below = if above == n { n } else { (above / 2).max(1) };
    (below, above)
}

/// Extends `x` to the next power of two by mirroring its end:
/// `x[n-1], x[n-2], ...`.
pub fn pad_symmetric(x: &[f64]) -> Vec<f64> {
    let n = x.len();
    let target = n.next_power_of_two();
    let mut out = x.to_vec();
    out.extend((0..target - n).map(|k| x[n - 1 - k % n]));
    out
}
