//! Abstract syntax for the `.stt` surface language.

use crate::tope::{Cube, Tope};

/// Opaque base types with declared finite semantics.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum BaseTy {
    Unit,
    Bool,
    Three,
}

impl BaseTy {
    pub fn name(self) -> &'static str {
        match self {
            BaseTy::Unit => "Unit",
            BaseTy::Bool => "Bool",
            BaseTy::Three => "Three",
        }
    }

    pub fn parse(s: &str) -> Option<BaseTy> {
        match s {
            "Unit" => Some(BaseTy::Unit),
            "Bool" => Some(BaseTy::Bool),
            "Three" => Some(BaseTy::Three),
            _ => None,
        }
    }

    /// Size of the declared finite carrier.
    pub fn size(self) -> usize {
        match self {
            BaseTy::Unit => 1,
            BaseTy::Bool => 2,
            BaseTy::Three => 3,
        }
    }
}

/// Constants inhabiting the base types.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Constant {
    Star,
    Tt,
    Ff,
    C0,
    C1,
    C2,
}

impl Constant {
    pub fn name(self) -> &'static str {
        match self {
            Constant::Star => "star",
            Constant::Tt => "tt",
            Constant::Ff => "ff",
            Constant::C0 => "c0",
            Constant::C1 => "c1",
            Constant::C2 => "c2",
        }
    }

    pub fn parse(s: &str) -> Option<Constant> {
        match s {
            "star" => Some(Constant::Star),
            "tt" => Some(Constant::Tt),
            "ff" => Some(Constant::Ff),
            "c0" => Some(Constant::C0),
            "c1" => Some(Constant::C1),
            "c2" => Some(Constant::C2),
            _ => None,
        }
    }

    pub fn base_ty(self) -> BaseTy {
        match self {
            Constant::Star => BaseTy::Unit,
            Constant::Tt | Constant::Ff => BaseTy::Bool,
            Constant::C0 | Constant::C1 | Constant::C2 => BaseTy::Three,
        }
    }

    /// Canonical index in the carrier of its base type.
    pub fn index(self) -> usize {
        match self {
            Constant::Star => 0,
            Constant::Ff => 0,
            Constant::Tt => 1,
            Constant::C0 => 0,
            Constant::C1 => 1,
            Constant::C2 => 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TypeExpr {
    Base(BaseTy),
    /// `(x : A) -> B`; non-dependent arrows use the variable `_`.
    Pi {
        var: String,
        dom: Box<TypeExpr>,
        cod: Box<TypeExpr>,
    },
    /// `(x : A) * B`
    Sigma {
        var: String,
        fst: Box<TypeExpr>,
        snd: Box<TypeExpr>,
    },
    /// The reflected shape `{t : I | phi}`.
    Shape { var: String, tope: Tope },
    /// The extension type `<Pi_{t : I | psi} A |^ phi a>`: total sections
    /// of `A` over `psi` agreeing with the partial section `a` on `phi`.
    Ext {
        var: String,
        upper: Tope,
        lower: Tope,
        ty: Box<TypeExpr>,
        boundary: Box<TermExpr>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TermExpr {
    Var(String),
    Const(Constant),
    /// `\t^{I | psi}. b`
    ExtLam {
        var: String,
        shape: Tope,
        body: Box<TermExpr>,
    },
    /// `fn x. e`
    Lam { var: String, body: Box<TermExpr> },
    App {
        fun: Box<TermExpr>,
        arg: Box<TermExpr>,
    },
    Pair {
        fst: Box<TermExpr>,
        snd: Box<TermExpr>,
    },
    Fst(Box<TermExpr>),
    Snd(Box<TermExpr>),
    /// The endpoints `0` and `1` of the directed interval.
    Endpoint(bool),
    /// The unique partial section over the empty shape.
    EmptySection,
    /// `(e : A)`
    Ascribe {
        term: Box<TermExpr>,
        ty: Box<TypeExpr>,
    },
}

impl TermExpr {
    pub fn var(name: &str) -> TermExpr {
        TermExpr::Var(name.to_string())
    }

    pub fn app(fun: TermExpr, arg: TermExpr) -> TermExpr {
        TermExpr::App {
            fun: Box::new(fun),
            arg: Box::new(arg),
        }
    }
}

/// The three-part context `Xi | Phi | Gamma` of a judgment: a cube context,
/// a single tope (the conjunction of the tope context), and a type context.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TriContext {
    pub cube: Cube,
    pub tope: Tope,
    pub vars: Vec<(String, TypeExpr)>,
}

impl TriContext {
    pub fn empty() -> Self {
        TriContext {
            cube: Cube::empty(),
            tope: Tope::Top,
            vars: Vec::new(),
        }
    }

    pub fn lookup(&self, name: &str) -> Option<&TypeExpr> {
        self.vars
            .iter()
            .rev()
            .find(|(n, _)| n == name)
            .map(|(_, t)| t)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DeclBody {
    Type(TypeExpr),
    Term { ty: TypeExpr, term: TermExpr },
    Eq { ty: TypeExpr, lhs: TermExpr, rhs: TermExpr },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decl {
    pub name: String,
    pub ctx: TriContext,
    pub body: DeclBody,
}

/// Names that cannot be bound as variables.
pub fn is_reserved(name: &str) -> bool {
    matches!(
        name,
        "type" | "term" | "eq" | "fn" | "fst" | "snd" | "empty" | "TOP" | "BOT" | "I" | "Pi_"
    ) || BaseTy::parse(name).is_some()
        || Constant::parse(name).is_some()
}
