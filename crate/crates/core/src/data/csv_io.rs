use std::collections::HashMap;
use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use crate::error::{Error, Result};

use super::schema::{Schema, VariableKind, VariableSpec};
use super::table::{Column, MicroTable};

fn open(path: &Path) -> Result<File> {
    File::open(path).map_err(|e| Error::io(path, e))
}

/// Load a headered CSV file against `schema`.
pub fn load_csv(path: impl AsRef<Path>, schema: &Schema) -> Result<MicroTable> {
    let path = path.as_ref();
    read_csv(open(path)?, schema).map_err(|e| match e {
        Error::EmptyFile(_) => Error::EmptyFile(path.to_path_buf()),
        other => other,
    })
}

/// Parse CSV from any reader. Columns are matched by header name; extra
/// columns not declared in the schema are ignored.
pub fn read_csv<R: Read>(reader: R, schema: &Schema) -> Result<MicroTable> {
    schema.validate()?;
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).from_reader(reader);
    let headers = rdr.headers()?.clone();
    if headers.is_empty() || (headers.len() == 1 && headers[0].is_empty()) {
        return Err(Error::EmptyFile(Default::default()));
    }
    let mut position: HashMap<&str, usize> = HashMap::new();
    for (i, h) in headers.iter().enumerate() {
        if position.insert(h, i).is_some() {
            return Err(Error::DuplicateHeader(h.to_string()));
        }
    }
    let mut sources = Vec::with_capacity(schema.len());
    for v in &schema.variables {
        match position.get(v.name.as_str()) {
            Some(&i) => sources.push(i),
            None => return Err(Error::MissingColumn(v.name.clone())),
        }
    }
    for h in headers.iter() {
        if schema.index_of(h).is_err() {
            log::warn!("ignoring undeclared column `{h}`");
        }
    }

    let mut specs: Vec<VariableSpec> = schema.variables.clone();
    let mut lookup: Vec<HashMap<String, u32>> = specs
        .iter()
        .map(|s| {
            s.categories
                .iter()
                .enumerate()
                .map(|(i, c)| (c.clone(), i as u32))
                .collect()
        })
        .collect();
    let mut columns: Vec<Column> = specs
        .iter()
        .map(|s| match s.kind {
            VariableKind::Categorical => Column::Categorical(Vec::new()),
            VariableKind::Numeric => Column::Numeric(Vec::new()),
        })
        .collect();

    for (row, record) in rdr.records().enumerate() {
        let record = record?;
        for (var, &src) in sources.iter().enumerate() {
            let raw = record.get(src).unwrap_or("");
            let spec = &mut specs[var];
            let missing = spec.is_missing_code(raw);
            match &mut columns[var] {
                Column::Categorical(cells) => {
                    if missing {
                        cells.push(None);
                        continue;
                    }
                    let code = match lookup[var].get(raw) {
                        Some(&c) => c,
                        None if schema.infer_categories => {
                            let c = spec.categories.len() as u32;
                            spec.categories.push(raw.to_string());
                            lookup[var].insert(raw.to_string(), c);
                            c
                        }
                        None => {
                            return Err(Error::UnknownCategory {
                                variable: spec.name.clone(),
                                value: raw.to_string(),
                                row: row + 1,
                            })
                        }
                    };
                    cells.push(Some(code));
                }
                Column::Numeric(cells) => {
                    if missing {
                        cells.push(None);
                        continue;
                    }
                    match raw.trim().parse::<f64>() {
                        Ok(x) if x.is_finite() => cells.push(Some(x)),
                        _ => {
                            return Err(Error::MalformedNumeric {
                                variable: spec.name.clone(),
                                value: raw.to_string(),
                                row: row + 1,
                            })
                        }
                    }
                }
            }
        }
    }

    let schema = Schema {
        infer_categories: schema.infer_categories,
        variables: specs,
    };
    MicroTable::new(schema, columns)
}

/// Write `table` as CSV in schema order. Missing cells are written as the
/// variable's first missing code (empty when none is declared).
pub fn write_csv<W: Write>(table: &MicroTable, writer: W) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(writer);
    let schema = table.schema();
    wtr.write_record(schema.names())?;
    let mut record: Vec<String> = Vec::with_capacity(schema.len());
    for row in 0..table.n_rows() {
        record.clear();
        for (var, spec) in schema.variables.iter().enumerate() {
            let text = match table.column(var) {
                Column::Categorical(cells) => match cells[row] {
                    Some(c) => spec.categories[c as usize].clone(),
                    None => spec.missing_label().to_string(),
                },
                Column::Numeric(cells) => match cells[row] {
                    Some(x) => format!("{x}"),
                    None => spec.missing_label().to_string(),
                },
            };
            record.push(text);
        }
        wtr.write_record(&record)?;
    }
    wtr.flush().map_err(|e| Error::io("<csv writer>", e))?;
    Ok(())
}

pub fn save_csv(table: &MicroTable, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    write_csv(table, std::io::BufWriter::new(file))
}

/// Derive a schema from a CSV file: every column is categorical (categories
/// in first-seen order, empty cells treated as Missing) unless named in
/// `numeric_hint`.
pub fn infer_schema(path: impl AsRef<Path>, numeric_hint: &[&str]) -> Result<Schema> {
    let path = path.as_ref();
    infer_schema_from_reader(open(path)?, numeric_hint).map_err(|e| match e {
        Error::EmptyFile(_) => Error::EmptyFile(path.to_path_buf()),
        other => other,
    })
}

pub fn infer_schema_from_reader<R: Read>(reader: R, numeric_hint: &[&str]) -> Result<Schema> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).from_reader(reader);
    let headers = rdr.headers()?.clone();
    if headers.is_empty() || (headers.len() == 1 && headers[0].is_empty()) {
        return Err(Error::EmptyFile(Default::default()));
    }
    let mut variables: Vec<VariableSpec> = Vec::with_capacity(headers.len());
    for h in headers.iter() {
        if variables.iter().any(|v| v.name == h) {
            return Err(Error::DuplicateHeader(h.to_string()));
        }
        variables.push(if numeric_hint.contains(&h) {
            VariableSpec::numeric(h)
        } else {
            VariableSpec::categorical(h, Vec::<String>::new())
        });
    }
    let mut seen: Vec<HashMap<String, ()>> = vec![HashMap::new(); variables.len()];
    for record in rdr.records() {
        let record = record?;
        for (i, raw) in record.iter().enumerate().take(variables.len()) {
            let v = &mut variables[i];
            if v.kind == VariableKind::Categorical && !raw.is_empty() && !seen[i].contains_key(raw) {
                seen[i].insert(raw.to_string(), ());
                v.categories.push(raw.to_string());
            }
        }
    }
    let schema = Schema {
        infer_categories: false,
        variables,
    };
    schema.validate()?;
    Ok(schema)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::Cell;

    fn sex_age() -> Schema {
        Schema::new(vec![
            VariableSpec::categorical("sex", ["M", "F"]).with_missing_codes(["NA"]),
            VariableSpec::numeric("age").with_missing_codes(["NA"]),
        ])
        .unwrap()
    }

    #[test]
    fn loads_three_rows_any_column_order() {
        let t = read_csv("age,sex\n30,M\n41,F\n5,F\n".as_bytes(), &sex_age()).unwrap();
        assert_eq!(t.n_rows(), 3);
        assert_eq!(t.cell(0, 0), Cell::Category(0));
        assert_eq!(t.cell(1, 1), Cell::Number(41.0));
    }

    #[test]
    fn missing_code_maps_to_missing() {
        let t = read_csv("sex,age\nNA,NA\n".as_bytes(), &sex_age()).unwrap();
        assert_eq!(t.cell(0, 0), Cell::Missing);
        assert_eq!(t.cell(0, 1), Cell::Missing);
    }

    #[test]
    fn unknown_category_strict() {
        let err = read_csv("sex,age\nX,1\n".as_bytes(), &sex_age()).unwrap_err();
        assert!(matches!(err, Error::UnknownCategory { .. }));
    }

    #[test]
    fn unknown_category_infer_mode_extends() {
        let schema = sex_age().inferring(true);
        let t = read_csv("sex,age\nX,1\nM,2\nY,3\n".as_bytes(), &schema).unwrap();
        assert_eq!(t.schema().variables[0].categories, ["M", "F", "X", "Y"]);
        assert_eq!(t.cell(2, 0), Cell::Category(3));
    }

    #[test]
    fn missing_column_and_bad_numeric() {
        assert!(matches!(
            read_csv("sex\nM\n".as_bytes(), &sex_age()),
            Err(Error::MissingColumn(c)) if c == "age"
        ));
        assert!(matches!(
            read_csv("sex,age\nM,old\n".as_bytes(), &sex_age()),
            Err(Error::MalformedNumeric { .. })
        ));
        assert!(matches!(
            read_csv("sex,age\nM,inf\n".as_bytes(), &sex_age()),
            Err(Error::MalformedNumeric { .. })
        ));
    }

    #[test]
    fn empty_input() {
        assert!(matches!(
            read_csv("".as_bytes(), &sex_age()),
            Err(Error::EmptyFile(_))
        ));
    }

    #[test]
    fn infer_numeric_hint_and_first_seen_order() {
        let s = infer_schema_from_reader("a,b\n1,1\n2,2\n1,3\n".as_bytes(), &["b"]).unwrap();
        assert_eq!(s.variables[0].kind, VariableKind::Categorical);
        assert_eq!(s.variables[0].categories, ["1", "2"]);
        assert_eq!(s.variables[1].kind, VariableKind::Numeric);
    }

    #[test]
    fn infer_duplicate_header() {
        assert!(matches!(
            infer_schema_from_reader("a,a\n1,2\n".as_bytes(), &[]),
            Err(Error::DuplicateHeader(h)) if h == "a"
        ));
    }

    #[test]
    fn write_then_read_preserves_cells() {
        let t = read_csv("sex,age\nM,30.5\nNA,NA\nF,0.1\n".as_bytes(), &sex_age()).unwrap();
        let mut buf = Vec::new();
        write_csv(&t, &mut buf).unwrap();
        let back = read_csv(buf.as_slice(), t.schema()).unwrap();
        assert_eq!(t, back);
    }
}
