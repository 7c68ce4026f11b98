use std::collections::BTreeMap;

use crate::error::{Error, Result};

use super::schema::{Schema, VariableKind};

/// A category index, or `None` for Missing.
pub type Level = Option<u32>;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Cell {
    Category(u32),
    Number(f64),
    Missing,
}

impl Cell {
    pub fn is_missing(&self) -> bool {
        matches!(self, Cell::Missing)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Column {
    Categorical(Vec<Option<u32>>),
    Numeric(Vec<Option<f64>>),
}

impl Column {
    pub fn len(&self) -> usize {
        match self {
            Column::Categorical(v) => v.len(),
            Column::Numeric(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn cell(&self, row: usize) -> Cell {
        match self {
            Column::Categorical(v) => v[row].map_or(Cell::Missing, Cell::Category),
            Column::Numeric(v) => v[row].map_or(Cell::Missing, Cell::Number),
        }
    }

    fn take(&self, rows: &[usize]) -> Column {
        match self {
            Column::Categorical(v) => Column::Categorical(rows.iter().map(|&r| v[r]).collect()),
            Column::Numeric(v) => Column::Numeric(rows.iter().map(|&r| v[r]).collect()),
        }
    }
}

/// Dense integer coding of a categorical column: categories keep their
/// dictionary index and Missing is the extra level `levels - 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factor {
    pub codes: Vec<u32>,
    pub levels: u32,
}

impl Factor {
    pub fn from_levels(cells: &[Option<u32>], n_categories: usize) -> Factor {
        let missing = n_categories as u32;
        Factor {
            codes: cells.iter().map(|c| c.unwrap_or(missing)).collect(),
            levels: missing + 1,
        }
    }

    pub fn missing_code(&self) -> u32 {
        self.levels - 1
    }

    pub fn len(&self) -> usize {
        self.codes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.codes.is_empty()
    }

    pub fn counts(&self) -> Vec<u64> {
        let mut counts = vec![0u64; self.levels as usize];
        for &c in &self.codes {
            counts[c as usize] += 1;
        }
        counts
    }
}

/// Schema-typed columnar microdata. Immutable once built.
#[derive(Debug, Clone, PartialEq)]
pub struct MicroTable {
    schema: Schema,
    columns: Vec<Column>,
    n_rows: usize,
}

impl MicroTable {
    pub fn new(schema: Schema, columns: Vec<Column>) -> Result<Self> {
        schema.validate()?;
        if columns.len() != schema.len() {
            return Err(Error::InvalidSchema(format!(
                "{} columns for {} variables",
                columns.len(),
                schema.len()
            )));
        }
        let n_rows = columns.first().map_or(0, Column::len);
        for (spec, col) in schema.variables.iter().zip(&columns) {
            if col.len() != n_rows {
                return Err(Error::InvalidSchema(format!(
                    "column `{}` has {} rows, expected {n_rows}",
                    spec.name,
                    col.len()
                )));
            }
            match (spec.kind, col) {
                (VariableKind::Categorical, Column::Categorical(cells)) => {
                    let k = spec.categories.len() as u32;
                    if let Some(bad) = cells.iter().flatten().find(|&&c| c >= k) {
                        return Err(Error::InvalidSchema(format!(
                            "code {bad} out of range for `{}`",
                            spec.name
                        )));
                    }
                }
                (VariableKind::Numeric, Column::Numeric(cells)) => {
                    if cells.iter().flatten().any(|x| !x.is_finite()) {
                        return Err(Error::InvalidSchema(format!(
                            "non-finite value in `{}`",
                            spec.name
                        )));
                    }
                }
                _ => {
                    return Err(Error::InvalidSchema(format!(
                        "column `{}` storage does not match its kind",
                        spec.name
                    )))
                }
            }
        }
        Ok(MicroTable {
            schema,
            columns,
            n_rows,
        })
    }

    pub fn schema(&self) -> &Schema {
        &self.schema
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn is_empty(&self) -> bool {
        self.n_rows == 0
    }

    pub fn columns(&self) -> &[Column] {
        &self.columns
    }

    pub fn column(&self, idx: usize) -> &Column {
        &self.columns[idx]
    }

    pub fn column_by_name(&self, name: &str) -> Result<&Column> {
        Ok(&self.columns[self.schema.index_of(name)?])
    }

    pub fn cell(&self, row: usize, var: usize) -> Cell {
        self.columns[var].cell(row)
    }

    pub fn row(&self, row: usize) -> Vec<Cell> {
        self.columns.iter().map(|c| c.cell(row)).collect()
    }

    /// New table holding `rows` (indices may repeat) in the given order.
    pub fn take_rows(&self, rows: &[usize]) -> MicroTable {
        MicroTable {
            schema: self.schema.clone(),
            columns: self.columns.iter().map(|c| c.take(rows)).collect(),
            n_rows: rows.len(),
        }
    }

    /// Same cells under a different (compatible) schema, e.g. a widened
    /// category dictionary. Codes must stay valid.
    pub fn with_schema(self, schema: Schema) -> Result<MicroTable> {
        MicroTable::new(schema, self.columns)
    }

    pub fn factor(&self, name: &str) -> Result<Factor> {
        let idx = self.schema.index_of(name)?;
        self.factor_at(idx)
    }

    pub fn factor_at(&self, idx: usize) -> Result<Factor> {
        match &self.columns[idx] {
            Column::Categorical(cells) => Ok(Factor::from_levels(
                cells,
                self.schema.variables[idx].categories.len(),
            )),
            Column::Numeric(_) => Err(Error::NotCategorical(
                self.schema.variables[idx].name.clone(),
            )),
        }
    }

    /// Label of a level of a categorical variable (`None` is Missing).
    pub fn level_label(&self, var: usize, level: Level) -> String {
        let spec = &self.schema.variables[var];
        match level {
            Some(c) => spec.categories[c as usize].clone(),
            None => "<missing>".to_string(),
        }
    }
}

/// Relative frequency of each level of a categorical variable.
///
/// With `include_missing` the Missing cells form their own level (keyed
/// `None`); otherwise they are dropped before normalising. Levels that never
/// occur are omitted.
pub fn column_proportions(
    table: &MicroTable,
    var: &str,
    include_missing: bool,
) -> Result<BTreeMap<Level, f64>> {
    let idx = table.schema().index_of(var)?;
    let cells = match table.column(idx) {
        Column::Categorical(cells) => cells,
        Column::Numeric(_) => return Err(Error::NotCategorical(var.to_string())),
    };
    let mut counts: BTreeMap<Level, u64> = BTreeMap::new();
    for &cell in cells {
        if cell.is_none() && !include_missing {
            continue;
        }
        *counts.entry(cell).or_default() += 1;
    }
    let total: u64 = counts.values().sum();
    Ok(counts
        .into_iter()
        .map(|(level, n)| (level, n as f64 / total as f64))
        .collect())
}
