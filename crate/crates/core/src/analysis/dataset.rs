//! Row-oriented tables handed to the output layer.

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ColumnKind {
    Int,
    Real,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Column {
    pub name: String,
    pub kind: ColumnKind,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Cell {
    Int(i64),
    Real(f64),
}

impl Cell {
    pub fn kind(&self) -> ColumnKind {
        match self {
            Cell::Int(_) => ColumnKind::Int,
            Cell::Real(_) => ColumnKind::Real,
        }
    }

    pub fn as_f64(&self) -> f64 {
        match *self {
            Cell::Int(v) => v as f64,
            Cell::Real(v) => v,
        }
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Real(v)
    }
}

impl From<i64> for Cell {
    fn from(v: i64) -> Self {
        Cell::Int(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub name: String,
    pub columns: Vec<Column>,
    pub rows: Vec<Vec<Cell>>,
}

impl Dataset {
    pub fn new(name: &str, columns: &[(&str, ColumnKind)]) -> Self {
        Dataset {
            name: name.to_string(),
            columns: columns.iter().map(|&(n, kind)| Column { name: n.to_string(), kind }).collect(),
            rows: Vec::new(),
        }
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c.name == name)
    }

    /// Values of one column as floats.
    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.column_index(name)?;
        Some(self.rows.iter().map(|r| r[i].as_f64()).collect())
    }

    /// `(min, max)` of a column, `None` when absent or empty.
    pub fn column_range(&self, name: &str) -> Option<(f64, f64)> {
        let values = self.column(name)?;
        if values.is_empty() {
            return None;
        }
        Some(values.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v))))
    }

    /// Checks row widths, cell kinds and finiteness against the header.
    pub fn check_consistency(&self) -> Result<(), String> {
        for (i, row) in self.rows.iter().enumerate() {
            if row.len() != self.columns.len() {
                return Err(format!("row {i} has {} cells, header has {}", row.len(), self.columns.len()));
            }
            for (cell, col) in row.iter().zip(&self.columns) {
                if cell.kind() != col.kind {
                    return Err(format!("row {i}, column {}: wrong cell kind", col.name));
                }
                if let Cell::Real(v) = cell {
                    if !v.is_finite() {
                        return Err(format!("row {i}, column {}: non-finite value", col.name));
                    }
                }
            }
        }
        Ok(())
    }
}
