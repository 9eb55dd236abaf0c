//! Column layouts every dataset must match before it is written.

use bopshox::analysis::{ColumnKind, Dataset};

use ColumnKind::{Int, Real};

pub struct Schema {
    pub name: &'static str,
    pub columns: &'static [(&'static str, ColumnKind)],
    /// Column reported in the run summary.
    pub key: &'static str,
}

const MATRIX_G_GT: &[(&str, ColumnKind)] = &[
    ("delta", Real),
    ("G11", Real),
    ("G12", Real),
    ("G21", Real),
    ("G22", Real),
    ("Gt11", Real),
    ("Gt12", Real),
    ("Gt21", Real),
    ("Gt22", Real),
];

const MATRIX_GT_UT: &[(&str, ColumnKind)] = &[
    ("delta", Real),
    ("Gt11", Real),
    ("Gt12", Real),
    ("Gt21", Real),
    ("Gt22", Real),
    ("Ut11", Real),
    ("Ut12", Real),
    ("Ut21", Real),
    ("Ut22", Real),
];

pub const SCHEMAS: &[Schema] = &[
    Schema {
        name: "exact",
        columns: &[
            ("n", Int),
            ("l", Int),
            ("energy", Real),
            ("omega1", Real),
            ("omega2", Real),
            ("theta", Real),
            ("lambda1", Real),
            ("lambda2", Real),
        ],
        key: "energy",
    },
    Schema {
        name: "bo",
        columns: &[
            ("n", Int),
            ("l", Int),
            ("energy", Real),
            ("omega1_tilde", Real),
            ("omega2_tilde", Real),
            ("beta_nn", Real),
            ("y_minus", Real),
            ("y_plus", Real),
        ],
        key: "energy",
    },
    Schema {
        name: "shoot",
        columns: &[
            ("n", Int),
            ("l", Int),
            ("energy", Real),
            ("closed_form", Real),
            ("rel_error", Real),
            ("node_count", Int),
            ("iterations", Int),
        ],
        key: "energy",
    },
    Schema { name: "trajectory", columns: &[("y", Real), ("phi", Real), ("vartheta", Real)], key: "phi" },
    Schema {
        name: "errors",
        columns: &[
            ("n", Int),
            ("l", Int),
            ("eps_bo", Real),
            ("eps_bo_reduced", Real),
            ("eps_omega", Real),
            ("eps_Omega", Real),
            ("B", Real),
        ],
        key: "eps_bo",
    },
    Schema {
        name: "zero_line",
        columns: &[("delta", Real), ("Omega_bar", Real), ("slope", Real), ("intercept", Real)],
        key: "intercept",
    },
    Schema {
        name: "overlap",
        columns: &[("n", Int), ("l", Int), ("sigma", Real), ("estimate", Real), ("nodes", Int)],
        key: "sigma",
    },
    Schema {
        name: "qu",
        columns: &[
            ("delta", Real),
            ("Q11", Real),
            ("Q12", Real),
            ("Q21", Real),
            ("Q22", Real),
            ("U11", Real),
            ("U12", Real),
            ("U21", Real),
            ("U22", Real),
            ("Ut11", Real),
            ("Ut12", Real),
            ("Ut21", Real),
            ("Ut22", Real),
            ("Gt11", Real),
            ("Gt12", Real),
            ("Gt21", Real),
            ("Gt22", Real),
            ("deviation", Real),
        ],
        key: "deviation",
    },
    Schema {
        name: "qu_sweep",
        columns: &[
            ("delta", Real),
            ("Gt11", Real),
            ("Gt12", Real),
            ("Gt21", Real),
            ("Gt22", Real),
            ("Ut11", Real),
            ("Ut12", Real),
            ("Ut21", Real),
            ("Ut22", Real),
            ("deviation", Real),
        ],
        key: "deviation",
    },
    Schema {
        name: "figure1",
        columns: &[
            ("delta", Real),
            ("Omega_bar", Real),
            ("B", Real),
            ("sign", Int),
            ("eps_omega", Real),
            ("sign_eps_omega", Int),
        ],
        key: "B",
    },
    Schema { name: "figure2", columns: &[("n", Real), ("l", Real), ("eps_bo", Real)], key: "eps_bo" },
    Schema {
        name: "figure3",
        columns: &[("delta", Real), ("n", Int), ("l", Int), ("sigma", Real)],
        key: "sigma",
    },
    Schema { name: "figure4", columns: MATRIX_G_GT, key: "G21" },
    Schema { name: "figure5", columns: MATRIX_GT_UT, key: "Ut12" },
];

pub fn lookup(name: &str) -> Option<&'static Schema> {
    SCHEMAS.iter().find(|s| s.name == name)
}

/// Checks `ds` against its registered schema: name, column names and kinds,
/// row widths, cell kinds, finiteness.
pub fn validate(ds: &Dataset) -> Result<&'static Schema, String> {
    let schema = lookup(&ds.name).ok_or_else(|| format!("no schema registered for dataset '{}'", ds.name))?;
    let names: Vec<(&str, ColumnKind)> = ds.columns.iter().map(|c| (c.name.as_str(), c.kind)).collect();
    if names != schema.columns {
        return Err(format!("dataset '{}' columns do not match its schema", ds.name));
    }
    ds.check_consistency().map_err(|e| format!("dataset '{}': {e}", ds.name))?;
    Ok(schema)
}
