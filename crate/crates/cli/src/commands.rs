//! Each subcommand turns validated parameters into one or more datasets.

use bopshox::analysis::{self, Cell, ColumnKind, Dataset};
use bopshox::par::Exec;
use bopshox::{bo, exact, phasespace, Error, StateIndex, SystemParams};

use crate::args::{Command, CommonArgs, StateArgs};
use crate::CliError;

use ColumnKind::{Int, Real};

pub fn run(cmd: &Command, common: &CommonArgs, p: &SystemParams, exec: Exec) -> Result<Vec<Dataset>, CliError> {
    match cmd {
        Command::Exact(s) => Ok(vec![exact_table(p, state(s))]),
        Command::Bo(s) => Ok(vec![bo_table(p, state(s))]),
        Command::Shoot { state: s, trajectory } => shoot(p, state(s), common.tol, *trajectory),
        Command::Errors { n_max, l_max } => Ok(errors(p, *n_max, *l_max)),
        Command::Overlap(s) => overlap(p, state(s), common.nodes),
        Command::Qu { sweep_delta } => match sweep_delta {
            Some(spec) => Ok(vec![analysis::qu_sweep(p, &parse_sweep(spec)?, exec).map_err(Error::from)?]),
            None => Ok(vec![qu_single(p)]),
        },
        Command::Figure { number, sweep_delta, resolution } => {
            figure(*number, sweep_delta.as_deref(), *resolution, common.nodes, p, exec).map(|d| vec![d])
        }
    }
}

fn state(s: &StateArgs) -> StateIndex {
    StateIndex::new(s.n, s.l)
}

/// Parses `start:stop:step`.
pub fn parse_sweep(spec: &str) -> Result<Vec<f64>, CliError> {
    let parts: Vec<&str> = spec.split(':').collect();
    let bad = || CliError::Config(format!("sweep must be start:stop:step, got '{spec}'"));
    if parts.len() != 3 {
        return Err(bad());
    }
    let nums: Vec<f64> = parts.iter().map(|s| s.trim().parse::<f64>()).collect::<Result<_, _>>().map_err(|_| bad())?;
    analysis::delta_grid(nums[0], nums[1], nums[2]).map_err(|e| CliError::Lib(e.into()))
}

fn exact_table(p: &SystemParams, s: StateIndex) -> Dataset {
    let modes = exact::NormalModes::new(p);
    let mut ds = Dataset::new(
        "exact",
        &[
            ("n", Int),
            ("l", Int),
            ("energy", Real),
            ("omega1", Real),
            ("omega2", Real),
            ("theta", Real),
            ("lambda1", Real),
            ("lambda2", Real),
        ],
    );
    ds.rows.push(vec![
        s.n.into(),
        s.l.into(),
        exact::exact_energy(p, s).into(),
        modes.omega1.into(),
        modes.omega2.into(),
        modes.theta.into(),
        modes.lambda1.into(),
        modes.lambda2.into(),
    ]);
    ds
}

fn bo_table(p: &SystemParams, s: StateIndex) -> Dataset {
    let energy = bo::bo_energy(p, s);
    // always defined: Ẽ_nl ≥ ω̃₁(n + ½)
    let (y_minus, y_plus) = phasespace::turning_points(s.n, energy, p).unwrap_or((0.0, 0.0));
    let mut ds = Dataset::new(
        "bo",
        &[
            ("n", Int),
            ("l", Int),
            ("energy", Real),
            ("omega1_tilde", Real),
            ("omega2_tilde", Real),
            ("beta_nn", Real),
            ("y_minus", Real),
            ("y_plus", Real),
        ],
    );
    ds.rows.push(vec![
        s.n.into(),
        s.l.into(),
        energy.into(),
        bo::omega1_tilde(p).into(),
        bo::omega2_tilde(p).into(),
        bo::beta_diag(s.n, p).into(),
        y_minus.into(),
        y_plus.into(),
    ]);
    ds
}

fn shoot(p: &SystemParams, s: StateIndex, tol: f64, with_trajectory: bool) -> Result<Vec<Dataset>, CliError> {
    if !(tol > 0.0 && tol < 1.0) {
        return Err(CliError::Config(format!("--tol must lie in (0, 1), got {tol}")));
    }
    let r = phasespace::shoot_eigenvalue(s, p, phasespace::default_bracket(s, p), tol).map_err(Error::from)?;
    let closed = bo::bo_energy(p, s);
    let mut ds = Dataset::new(
        "shoot",
        &[
            ("n", Int),
            ("l", Int),
            ("energy", Real),
            ("closed_form", Real),
            ("rel_error", Real),
            ("node_count", Int),
            ("iterations", Int),
        ],
    );
    ds.rows.push(vec![
        s.n.into(),
        s.l.into(),
        r.energy.into(),
        closed.into(),
        ((r.energy - closed) / closed).into(),
        r.trajectory.node_count.into(),
        r.iterations.into(),
    ]);
    let mut out = vec![ds];
    if with_trajectory {
        let mut t = Dataset::new("trajectory", &[("y", Real), ("phi", Real), ("vartheta", Real)]);
        t.rows = r.trajectory.samples.iter().map(|st| vec![st.y.into(), st.phi.into(), st.vartheta.into()]).collect();
        out.push(t);
    }
    Ok(out)
}

fn errors(p: &SystemParams, n_max: usize, l_max: usize) -> Vec<Dataset> {
    let mut ds = Dataset::new(
        "errors",
        &[
            ("n", Int),
            ("l", Int),
            ("eps_bo", Real),
            ("eps_bo_reduced", Real),
            ("eps_omega", Real),
            ("eps_Omega", Real),
            ("B", Real),
        ],
    );
    for n in 0..=n_max {
        for l in 0..=l_max {
            let b = analysis::error_breakdown(p, StateIndex::new(n, l));
            ds.rows.push(vec![
                n.into(),
                l.into(),
                b.eps_bo.into(),
                b.eps_bo_reduced.into(),
                b.eps_omega.into(),
                b.eps_big_omega.into(),
                b.region_b.into(),
            ]);
        }
    }
    let mut out = vec![ds];
    // the line is undefined in the uncoupled limit
    if let Ok(line) = analysis::zero_error_line(p) {
        let mut z = Dataset::new(
            "zero_line",
            &[("delta", Real), ("Omega_bar", Real), ("slope", Real), ("intercept", Real)],
        );
        z.rows.push(vec![p.delta().into(), p.omega_bar().into(), line.slope.into(), line.intercept.into()]);
        out.push(z);
    }
    out
}

fn overlap(p: &SystemParams, s: StateIndex, nodes: usize) -> Result<Vec<Dataset>, CliError> {
    let o = analysis::overlap_sigma(p, s, nodes).map_err(Error::from)?;
    let mut ds = Dataset::new(
        "overlap",
        &[("n", Int), ("l", Int), ("sigma", Real), ("estimate", Real), ("nodes", Int)],
    );
    ds.rows.push(vec![s.n.into(), s.l.into(), o.sigma.into(), o.estimate.into(), o.nodes.into()]);
    Ok(vec![ds])
}

fn qu_single(p: &SystemParams) -> Dataset {
    let f = analysis::qu_decompose(p);
    let mut names = vec!["delta".to_string()];
    for prefix in ["Q", "U", "Ut", "Gt"] {
        names.extend(["11", "12", "21", "22"].iter().map(|s| format!("{prefix}{s}")));
    }
    names.push("deviation".into());
    let cols: Vec<(&str, ColumnKind)> = names.iter().map(|n| (n.as_str(), Real)).collect();
    let mut ds = Dataset::new("qu", &cols);
    let mut row: Vec<Cell> = vec![p.delta().into()];
    for m in [f.q, f.u, f.u_tilde, bo::g_tilde(p)] {
        row.extend(m.entries().map(Cell::from));
    }
    row.push(f.deviation.into());
    ds.rows.push(row);
    ds
}

fn figure(
    number: u8,
    sweep: Option<&str>,
    resolution: usize,
    nodes: usize,
    p: &SystemParams,
    exec: Exec,
) -> Result<Dataset, CliError> {
    let deltas = |default: fn() -> Vec<f64>| -> Result<Vec<f64>, CliError> {
        match sweep {
            Some(spec) => parse_sweep(spec),
            None => Ok(default()),
        }
    };
    let fig = match number {
        1 => {
            if resolution == 0 {
                return Err(CliError::Config("--resolution must be positive".into()));
            }
            analysis::figure1(resolution, exec)
        }
        2 => analysis::figure2(p, exec),
        3 => analysis::figure3(p, &deltas(analysis::figure3_deltas)?, analysis::FIGURE3_MAX_INDEX, nodes, exec)
            .map_err(Error::from)?,
        4 => analysis::figure4(p, &deltas(default_matrix_sweep)?, exec).map_err(Error::from)?,
        5 => analysis::figure5(p, &deltas(default_matrix_sweep)?, exec).map_err(Error::from)?,
        _ => return Err(CliError::Config(format!("no figure {number}"))),
    };
    Ok(fig)
}

/// `0, 0.01, …, 0.99`
fn default_matrix_sweep() -> Vec<f64> {
    analysis::delta_grid(0.0, 0.99, 0.01).expect("static grid")
}
