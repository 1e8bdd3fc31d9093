//! Command-line front end for the weighted moduli toolkit: expression
//! parsing, the JSON output schema, and the append-only curve store.

pub mod error;
pub mod parse;
pub mod response;
pub mod store;

pub use error::CliError;
pub use parse::{parse_form, ParseError};
pub use response::Response;
pub use store::{db_add, db_find, db_list, record_for_curve, AddOutcome, CurveRecord};
