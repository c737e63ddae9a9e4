//! The `orelab` calculator: expression parsing and evaluation over descriptor-built rings,
//! suite runs, module-map queries and finiteness demos.

pub mod app;
pub mod ast;
pub mod eval;
pub mod parser;

pub use app::run;
pub use ast::Ast;
pub use eval::{parse_expression, Context};
pub use parser::parse;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("syntax error at {position}: {message}")]
    Parse { position: usize, message: String },

    #[error("unbound symbol `{0}`")]
    Unbound(String),

    #[error("{0}")]
    Eval(String),

    #[error("{0}")]
    Usage(String),

    #[error(transparent)]
    Core(#[from] orelab_core::Error),

    #[error("{0}")]
    Io(#[from] std::io::Error),
}

/// Process exit codes.
pub mod exit {
    pub const PASS: i32 = 0;
    pub const CHECK_FAILED: i32 = 1;
    pub const USAGE: i32 = 2;
}
