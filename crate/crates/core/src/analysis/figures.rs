//! Figure datasets. Every sweep runs through [`crate::par::map_indexed`], so
//! row order and values do not depend on the execution strategy.

use super::{
    mode_errors, omega_error_discriminant, overlap_batch, qu_decompose, reduced_relative_error, region_b,
    AnalysisError, Cell, ColumnKind, Dataset, OverlapRules,
};
use crate::bo;
use crate::exact;
use crate::par::{self, Exec};
use crate::params::{StateIndex, SystemParams};

use ColumnKind::{Int, Real};

/// Cells per axis of the `(δ, Ω̄)` region map.
pub const FIGURE1_RESOLUTION: usize = 400;
/// Lattice spacing of the `(n, l)` contour data on `[0, 10]²`.
pub const FIGURE2_STEP: f64 = 0.25;
const FIGURE2_MAX: f64 = 10.0;
pub const FIGURE3_DELTA_STEP: f64 = 0.005;
pub const FIGURE3_DELTA_MAX: f64 = 0.995;
/// Overlaps are tabulated for `n, l ≤ FIGURE3_MAX_INDEX`.
pub const FIGURE3_MAX_INDEX: usize = 5;

const MATRIX_SUFFIXES: [&str; 4] = ["11", "12", "21", "22"];

fn sign(v: f64) -> Cell {
    Cell::Int(if v > 0.0 {
        1
    } else if v < 0.0 {
        -1
    } else {
        0
    })
}

/// `start, start + step, …` up to `stop` inclusive (within rounding).
pub fn delta_grid(start: f64, stop: f64, step: f64) -> Result<Vec<f64>, AnalysisError> {
    if !(step > 0.0 && start.is_finite() && stop.is_finite() && stop >= start) {
        return Err(AnalysisError::InvalidArgument(format!("bad sweep {start}:{stop}:{step}")));
    }
    let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
    let grid: Vec<f64> = (0..count).map(|i| start + i as f64 * step).collect();
    if grid.iter().any(|d| d.abs() >= 1.0) {
        return Err(AnalysisError::InvalidArgument(format!("sweep {start}:{stop}:{step} leaves |δ| < 1")));
    }
    Ok(grid)
}

fn with_delta(p: &SystemParams, delta: f64) -> Result<SystemParams, AnalysisError> {
    p.with_delta(delta).map_err(|e| AnalysisError::InvalidArgument(e.to_string()))
}

/// Region map on cell centres of `(0, 1)²`: `𝓑`, its sign, and `ε_ω` with
/// its sign for comparison.
pub fn figure1(resolution: usize, exec: Exec) -> Dataset {
    let mut ds = Dataset::new(
        "figure1",
        &[
            ("delta", Real),
            ("Omega_bar", Real),
            ("B", Real),
            ("sign", Int),
            ("eps_omega", Real),
            ("sign_eps_omega", Int),
        ],
    );
    let res = resolution.max(1);
    ds.rows = par::map_indexed(exec, res * res, |k| {
        let d = ((k / res) as f64 + 0.5) / res as f64;
        let w = ((k % res) as f64 + 0.5) / res as f64;
        let b = region_b(d, w);
        let eps = mode_errors(d, w).eps_omega;
        vec![d.into(), w.into(), b.into(), sign(b), eps.into(), sign(eps)]
    });
    ds
}

/// Relative BO error on the real-valued `(n, l)` lattice `[0, 10]²`.
pub fn figure2(p: &SystemParams, exec: Exec) -> Dataset {
    let mut ds = Dataset::new("figure2", &[("n", Real), ("l", Real), ("eps_bo", Real)]);
    let per_axis = (FIGURE2_MAX / FIGURE2_STEP).round() as usize + 1;
    let (d, w) = (p.delta(), p.omega_bar());
    ds.rows = par::map_indexed(exec, per_axis * per_axis, |k| {
        let n = (k / per_axis) as f64 * FIGURE2_STEP;
        let l = (k % per_axis) as f64 * FIGURE2_STEP;
        vec![n.into(), l.into(), reduced_relative_error(d, w, n, l).into()]
    });
    ds
}

/// Default coupling grid of [`figure3`]: `0, 0.005, …, 0.995`.
pub fn figure3_deltas() -> Vec<f64> {
    delta_grid(0.0, FIGURE3_DELTA_MAX, FIGURE3_DELTA_STEP).expect("static grid")
}

/// Overlaps `σ_nl(δ)` for `n, l ≤ max_index`.
pub fn figure3(
    p: &SystemParams,
    deltas: &[f64],
    max_index: usize,
    nodes: usize,
    exec: Exec,
) -> Result<Dataset, AnalysisError> {
    let mut ds = Dataset::new("figure3", &[("delta", Real), ("n", Int), ("l", Int), ("sigma", Real)]);
    let states: Vec<StateIndex> =
        (0..=max_index).flat_map(|n| (0..=max_index).map(move |l| StateIndex::new(n, l))).collect();
    let rules = OverlapRules::new(nodes)?;
    let blocks = par::try_map_indexed(exec, deltas.len(), |k| {
        let overlaps = overlap_batch(&with_delta(p, deltas[k])?, &states, &rules)?;
        Ok::<_, AnalysisError>(
            states
                .iter()
                .zip(overlaps)
                .map(|(s, o)| vec![deltas[k].into(), s.n.into(), s.l.into(), o.sigma.into()])
                .collect::<Vec<_>>(),
        )
    })?;
    ds.rows = blocks.into_iter().flatten().collect();
    Ok(ds)
}

fn matrix_columns(prefix: &str) -> Vec<String> {
    MATRIX_SUFFIXES.iter().map(|s| format!("{prefix}{s}")).collect()
}

fn dataset_with_matrices(name: &str, prefixes: &[&str], extra: &[&str]) -> Dataset {
    let mut names = vec!["delta".to_string()];
    for p in prefixes {
        names.extend(matrix_columns(p));
    }
    names.extend(extra.iter().map(|s| s.to_string()));
    let cols: Vec<(&str, ColumnKind)> = names.iter().map(|n| (n.as_str(), Real)).collect();
    Dataset::new(name, &cols)
}

/// Exact `G` and BO `G̃` along a coupling sweep.
pub fn figure4(p: &SystemParams, deltas: &[f64], exec: Exec) -> Result<Dataset, AnalysisError> {
    let mut ds = dataset_with_matrices("figure4", &["G", "Gt"], &[]);
    ds.rows = par::try_map_indexed(exec, deltas.len(), |k| {
        let q = with_delta(p, deltas[k])?;
        let mut row: Vec<Cell> = vec![deltas[k].into()];
        row.extend(exact::g_matrix(&q).entries().map(Cell::from));
        row.extend(bo::g_tilde(&q).entries().map(Cell::from));
        Ok::<_, AnalysisError>(row)
    })?;
    Ok(ds)
}

/// `G̃` against `Ũ = −σ₃U` along a coupling sweep.
pub fn figure5(p: &SystemParams, deltas: &[f64], exec: Exec) -> Result<Dataset, AnalysisError> {
    qu_rows("figure5", p, deltas, false, exec)
}

/// As [`figure5`] plus the `max |G̃ − Ũ|` deviation column.
pub fn qu_sweep(p: &SystemParams, deltas: &[f64], exec: Exec) -> Result<Dataset, AnalysisError> {
    qu_rows("qu_sweep", p, deltas, true, exec)
}

fn qu_rows(name: &str, p: &SystemParams, deltas: &[f64], deviation: bool, exec: Exec) -> Result<Dataset, AnalysisError> {
    let extra: &[&str] = if deviation { &["deviation"] } else { &[] };
    let mut ds = dataset_with_matrices(name, &["Gt", "Ut"], extra);
    ds.rows = par::try_map_indexed(exec, deltas.len(), |k| {
        let q = with_delta(p, deltas[k])?;
        let f = qu_decompose(&q);
        let mut row: Vec<Cell> = vec![deltas[k].into()];
        row.extend(bo::g_tilde(&q).entries().map(Cell::from));
        row.extend(f.u_tilde.entries().map(Cell::from));
        if deviation {
            row.push(f.deviation.into());
        }
        Ok::<_, AnalysisError>(row)
    })?;
    Ok(ds)
}

/// Points of `(δ, Ω̄)` cell grid where `sign(𝓑) ≠ sign(ε_ω)` with `|𝓑|`
/// above `band`, and the same count for the corrected discriminant.
pub fn sign_disagreements(resolution: usize, band: f64, exec: Exec) -> (usize, usize) {
    let res = resolution.max(1);
    let flags = par::map_indexed(exec, res * res, |k| {
        let d = ((k / res) as f64 + 0.5) / res as f64;
        let w = ((k % res) as f64 + 0.5) / res as f64;
        let eps = mode_errors(d, w).eps_omega.signum();
        let b = region_b(d, w);
        let c = omega_error_discriminant(d, w);
        (b.abs() >= band && b.signum() != eps, c.abs() >= band && c.signum() != eps)
    });
    flags.iter().fold((0, 0), |(a, b), &(x, y)| (a + x as usize, b + y as usize))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn standard() -> SystemParams {
        SystemParams::reduced(0.2, 0.6).unwrap()
    }

    #[test]
    fn grid_construction() {
        assert_eq!(delta_grid(0.0, 0.99, 0.01).unwrap().len(), 100);
        assert_eq!(figure3_deltas().len(), 200);
        assert!((figure3_deltas()[199] - 0.995).abs() < 1e-12);
        assert!(delta_grid(0.0, 1.0, 0.1).is_err());
        assert!(delta_grid(0.5, 0.1, 0.1).is_err());
        assert!(delta_grid(0.0, 0.5, 0.0).is_err());
        assert_eq!(delta_grid(0.3, 0.3, 0.1).unwrap(), vec![0.3]);
    }

    #[test]
    fn figure1_shape() {
        let ds = figure1(20, Exec::Sequential);
        assert_eq!(ds.rows.len(), 400);
        ds.check_consistency().unwrap();
        let (lo, hi) = ds.column_range("delta").unwrap();
        assert!((lo - 0.025).abs() < 1e-15 && (hi - 0.975).abs() < 1e-15);
    }

    #[test]
    fn figure2_lattice() {
        let ds = figure2(&standard(), Exec::Sequential);
        assert_eq!(ds.rows.len(), 41 * 41);
        assert_eq!(ds.column_range("n"), Some((0.0, 10.0)));
        assert_eq!(ds.column_range("l"), Some((0.0, 10.0)));
        let eps = ds.column("eps_bo").unwrap();
        assert!(eps.iter().all(|e| e.abs() < 0.01));
    }

    #[test]
    fn figure3_small_sweep() {
        let ds = figure3(&standard(), &[0.0, 0.5], 1, 40, Exec::Parallel).unwrap();
        assert_eq!(ds.rows.len(), 8);
        ds.check_consistency().unwrap();
        for row in ds.rows.iter().take(4) {
            assert!((row[3].as_f64() - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn matrix_sweeps() {
        let deltas = delta_grid(0.0, 0.9, 0.1).unwrap();
        let f4 = figure4(&standard(), &deltas, Exec::Sequential).unwrap();
        assert_eq!(f4.columns.len(), 9);
        assert_eq!(f4.columns[5].name, "Gt11");
        f4.check_consistency().unwrap();
        let f5 = figure5(&standard(), &deltas, Exec::Sequential).unwrap();
        assert_eq!(f5.columns[8].name, "Ut22");
        let q = qu_sweep(&standard(), &deltas, Exec::Sequential).unwrap();
        assert_eq!(q.columns.last().unwrap().name, "deviation");
        assert_eq!(q.column("deviation").unwrap()[0], 0.0);
    }

    #[test]
    fn execution_modes_agree() {
        let deltas = delta_grid(0.0, 0.9, 0.05).unwrap();
        assert_eq!(figure1(30, Exec::Sequential), figure1(30, Exec::Parallel));
        assert_eq!(figure2(&standard(), Exec::Sequential), figure2(&standard(), Exec::Parallel));
        assert_eq!(
            figure3(&standard(), &deltas, 2, 40, Exec::Sequential).unwrap(),
            figure3(&standard(), &deltas, 2, 40, Exec::Parallel).unwrap()
        );
        assert_eq!(figure5(&standard(), &deltas, Exec::Sequential), figure5(&standard(), &deltas, Exec::Parallel));
    }

    #[test]
    fn sign_disagreement_counts() {
        let (published, corrected) = sign_disagreements(200, 1e-9, Exec::Parallel);
        assert_eq!(corrected, 0);
        assert!(published > 0);
    }
}
