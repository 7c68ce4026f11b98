//! Microdata tables: schema declarations, columnar storage with explicit
//! Missing cells, and CSV ingestion.

mod csv_io;
mod schema;
mod table;

pub use csv_io::{
    infer_schema, infer_schema_from_reader, load_csv, read_csv, save_csv, write_csv,
};
pub use schema::{Schema, VariableKind, VariableSpec};
pub use table::{column_proportions, Cell, Column, Factor, Level, MicroTable};
