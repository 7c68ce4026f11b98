//! Reference synthesizers and the adapter for externally generated files.

pub mod cart;

use std::path::Path;

use rand::Rng;

use crate::data::{load_csv, Cell, Column, MicroTable, Schema, VariableKind};
use crate::error::{Error, Result, ResultExt};
use crate::seed;

pub use cart::{cart_draw, cart_fit, goes_left, root_split, CartNode, CartParams, CartTree, PredValue, SplitChoice, SplitRule};

/// Order in which sequential synthesis visits variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VisitSequence(pub Vec<String>);

impl VisitSequence {
    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.0.iter().map(String::as_str)
    }
}

/// Numeric variables first (alphabetical), then categorical variables by
/// ascending number of categories, ties alphabetical.
pub fn visit_sequence(schema: &Schema) -> VisitSequence {
    let mut vars: Vec<_> = schema.variables.iter().collect();
    vars.sort_by(|a, b| {
        let rank = |v: &crate::data::VariableSpec| match v.kind {
            VariableKind::Numeric => (0, 0),
            VariableKind::Categorical => (1, v.categories.len()),
        };
        rank(a).cmp(&rank(b)).then_with(|| a.name.cmp(&b.name))
    });
    VisitSequence(vars.into_iter().map(|v| v.name.clone()).collect())
}

fn bootstrap_column<R: Rng>(col: &Column, n: usize, rng: &mut R) -> Column {
    let len = col.len();
    match col {
        Column::Categorical(v) => Column::Categorical((0..n).map(|_| v[rng.random_range(0..len)]).collect()),
        Column::Numeric(v) => Column::Numeric((0..n).map(|_| v[rng.random_range(0..len)]).collect()),
    }
}

/// Each variable resampled independently from its own empirical
/// distribution. Keeps marginals, destroys every association.
pub fn synth_independent(t: &MicroTable, n: usize, seed: u64) -> Result<MicroTable> {
    if t.is_empty() {
        return Err(Error::EmptyTable);
    }
    if n == 0 {
        return Err(Error::Config("synthetic row count must be >= 1".into()));
    }
    let columns = t
        .columns()
        .iter()
        .enumerate()
        .map(|(i, col)| bootstrap_column(col, n, &mut seed::rng(seed::derive(seed, i as u64))))
        .collect();
    MicroTable::new(t.schema().clone(), columns)
}

fn cell_into(col: &mut Column, cell: Cell) {
    match (col, cell) {
        (Column::Categorical(v), Cell::Category(c)) => v.push(Some(c)),
        (Column::Numeric(v), Cell::Number(x)) => v.push(Some(x)),
        (Column::Categorical(v), Cell::Missing) => v.push(None),
        (Column::Numeric(v), Cell::Missing) => v.push(None),
        _ => unreachable!("donor cell kind matches its column"),
    }
}

/// Sequential CART synthesis.
///
/// The first variable of the visit sequence is bootstrapped from the
/// original column. Every later variable gets a tree fitted on the original
/// data with all earlier variables as predictors; each synthetic row is
/// routed through it using its already-synthesised values and takes the
/// target of a random donor in the leaf.
pub fn synth_cart(t: &MicroTable, n: usize, seed: u64, params: &CartParams) -> Result<MicroTable> {
    if t.is_empty() {
        return Err(Error::EmptyTable);
    }
    if n == 0 {
        return Err(Error::Config("synthetic row count must be >= 1".into()));
    }
    params.validate()?;
    let schema = t.schema();
    let sequence = visit_sequence(schema);
    let order: Vec<usize> = sequence
        .names()
        .map(|name| schema.index_of(name))
        .collect::<Result<_>>()?;

    let mut generated: Vec<Option<Column>> = vec![None; schema.len()];
    let first = order[0];
    generated[first] = Some(bootstrap_column(t.column(first), n, &mut seed::rng(seed::derive(seed, 0))));

    for (step, &var) in order.iter().enumerate().skip(1) {
        let target = &schema.variables[var].name;
        let predictors: Vec<&str> = order[..step].iter().map(|&i| schema.variables[i].name.as_str()).collect();
        let tree = cart_fit(t, target, &predictors, params).context_with(|| format!("fitting {target}"))?;
        let mut rng = seed::rng(seed::derive(seed, step as u64));
        let mut out = match schema.variables[var].kind {
            VariableKind::Categorical => Column::Categorical(Vec::with_capacity(n)),
            VariableKind::Numeric => Column::Numeric(Vec::with_capacity(n)),
        };
        let mut cells = Vec::with_capacity(step);
        for row in 0..n {
            cells.clear();
            cells.extend(order[..step].iter().map(|&i| generated[i].as_ref().expect("visited").cell(row)));
            let input = tree.inputs(t, &cells);
            cell_into(&mut out, cart_draw(&tree, &input, t, &mut rng, params.numeric_jitter));
        }
        generated[var] = Some(out);
    }

    MicroTable::new(
        schema.clone(),
        generated.into_iter().map(|c| c.expect("every variable visited")).collect(),
    )
}

/// Load a synthetic file produced elsewhere against the original schema.
///
/// Every original variable must be present. Categories the original never
/// declared are appended to the dictionary (with a warning) so the file
/// still loads; comparisons match categories by label.
pub fn load_external_synth(path: impl AsRef<Path>, schema: &Schema) -> Result<MicroTable> {
    let path = path.as_ref();
    let widened = schema.clone().inferring(true);
    let table = load_csv(path, &widened)?;
    for (orig, got) in schema.variables.iter().zip(&table.schema().variables) {
        if got.categories.len() > orig.categories.len() {
            log::warn!(
                "{}: `{}` has categories not in the original: {:?}",
                path.display(),
                orig.name,
                &got.categories[orig.categories.len()..]
            );
        }
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::VariableSpec;

    #[test]
    fn visit_order_numeric_then_by_cardinality() {
        let schema = Schema::new(vec![
            VariableSpec::categorical("region", (0..10).map(|i| i.to_string())),
            VariableSpec::categorical("sex", ["M", "F"]),
            VariableSpec::numeric("age"),
        ])
        .unwrap();
        assert_eq!(visit_sequence(&schema).0, ["age", "sex", "region"]);
    }

    #[test]
    fn visit_order_ties_alphabetical() {
        let schema = Schema::new(vec![VariableSpec::numeric("b"), VariableSpec::numeric("a")]).unwrap();
        assert_eq!(visit_sequence(&schema).0, ["a", "b"]);
        let schema = Schema::new(vec![
            VariableSpec::categorical("z", ["1", "2"]),
            VariableSpec::categorical("m", ["1", "2"]),
            VariableSpec::categorical("c", ["1", "2"]),
        ])
        .unwrap();
        assert_eq!(visit_sequence(&schema).0, ["c", "m", "z"]);
    }

    fn small() -> MicroTable {
        let schema = Schema::new(vec![
            VariableSpec::categorical("a", ["x", "y"]),
            VariableSpec::numeric("n"),
        ])
        .unwrap();
        MicroTable::new(
            schema,
            vec![
                Column::Categorical(vec![Some(0), Some(1), None]),
                Column::Numeric(vec![Some(1.0), Some(2.0), Some(3.0)]),
            ],
        )
        .unwrap()
    }

    #[test]
    fn independent_single_row_and_determinism() {
        let t = small();
        let one = synth_independent(&t, 1, 9).unwrap();
        assert_eq!(one.n_rows(), 1);
        assert_eq!(synth_independent(&t, 50, 3).unwrap(), synth_independent(&t, 50, 3).unwrap());
        assert_ne!(synth_independent(&t, 50, 3).unwrap(), synth_independent(&t, 50, 4).unwrap());
    }

    #[test]
    fn cart_output_shape() {
        let t = small();
        let s = synth_cart(&t, 7, 1, &CartParams::default()).unwrap();
        assert_eq!(s.n_rows(), 7);
        assert_eq!(s.schema(), t.schema());
    }
}
