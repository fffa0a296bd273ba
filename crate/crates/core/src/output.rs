//! CSV and JSON artifacts. Every file carries the resolved run configuration.

use crate::analysis::{ConvergenceSweep, Quantity};
use crate::closed_forms::MeasureSolution;
use crate::error::{Error, Result};
use serde::Serialize;
use serde_json::Value;
use std::fmt::Write as _;
use std::path::Path;

/// `start:end:count`, inclusive at both ends.
pub fn parse_grid(spec: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = spec.split(':').collect();
    let bad = || Error::BadParameter(format!("grid '{spec}' is not start:end:count"));
    if parts.len() != 3 {
        return Err(bad());
    }
    let a: f64 = parts[0].trim().parse().map_err(|_| bad())?;
    let b: f64 = parts[1].trim().parse().map_err(|_| bad())?;
    let n: usize = parts[2].trim().parse().map_err(|_| bad())?;
    if n == 0 || !(a.is_finite() && b.is_finite()) || b < a || (n == 1 && a != b) {
        return Err(bad());
    }
    if n == 1 {
        return Ok(vec![a]);
    }
    Ok((0..n)
        .map(|i| if i + 1 == n { b } else { a + (b - a) * i as f64 / (n - 1) as f64 })
        .collect())
}

pub fn render_csv(config: &Value, header: &str, rows: &[Vec<f64>]) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "# config: {config}");
    let _ = writeln!(s, "{header}");
    for row in rows {
        let cells: Vec<String> = row.iter().map(|v| format!("{v:e}")).collect();
        let _ = writeln!(s, "{}", cells.join(","));
    }
    s
}

pub fn render_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| Error::BadParameter(format!("cannot write {}: {e}", path.display())))
}

pub fn solution_rows(sol: &MeasureSolution, grid: &[f64]) -> Result<Vec<Vec<f64>>> {
    sol.table(grid)?
        .into_iter()
        .map(|(x, r)| {
            let mut row = vec![x];
            row.extend(r.csv_values());
            Ok(row)
        })
        .collect()
}

pub const CONVERGENCE_HEADER: &str = "tau,sup_err_u,sup_err_v,sup_err_E,sup_err_density_ratio,sup_err_wp";

pub fn convergence_rows(sweep: &ConvergenceSweep) -> Vec<Vec<f64>> {
    let taus = &sweep.report(Quantity::UTrace).taus;
    taus.iter()
        .enumerate()
        .map(|(i, &t)| {
            let mut row = vec![t];
            row.extend(Quantity::ALL.iter().map(|&q| sweep.report(q).sup_errors[i]));
            row
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grids() {
        let g = parse_grid("0:5:101").unwrap();
        assert_eq!(g.len(), 101);
        assert_eq!(g[0], 0.0);
        assert_eq!(g[100], 5.0);
        assert_eq!(g[20], 1.0);
        assert_eq!(parse_grid("2:2:1").unwrap(), vec![2.0]);
        for bad in ["0:5", "a:1:3", "0:1:0", "1:0:4", "0:1:1"] {
            assert!(parse_grid(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn csv_layout() {
        let s = render_csv(&serde_json::json!({"k": 1}), "x,y", &[vec![0.5, 2.0]]);
        assert_eq!(s, "# config: {\"k\":1}\nx,y\n5e-1,2e0\n");
    }
}
