//! Surface syntax for the `.stt` language: AST, parser, printer,
//! substitution.
//!
//! Files hold one declaration per `type`/`term`/`eq` keyword; comments run
//! from `--` to end of line.

mod ast;
mod lex;
mod parse;
mod print;
mod subst;

pub use ast::{is_reserved, BaseTy, Constant, Decl, DeclBody, TermExpr, TriContext, TypeExpr};
pub use parse::{parse, parse_term, parse_type};
pub use print::{print_ctx, print_decl, print_decls, print_term, print_type};
pub use subst::{
    alpha_eq_term, alpha_eq_type, free_vars_term, free_vars_type, fresh, subst_cube_in_term,
    subst_cube_in_type, subst_term, subst_type, Subst,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("syntax error at {line}:{col}: expected {}, found {found}", .expected.join(" or "))]
pub struct SyntaxError {
    pub line: usize,
    pub col: usize,
    pub expected: Vec<String>,
    pub found: String,
}
