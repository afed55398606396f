//! Syntax tree of a model file.

use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Span {
    pub line: usize,
    pub col: usize,
}

impl Span {
    pub fn new(line: usize, col: usize) -> Self {
        Span { line, col }
    }
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

/// A source position that does not take part in structural equality.
#[derive(Debug, Clone, Copy, Default)]
pub struct At(pub Span);

impl PartialEq for At {
    fn eq(&self, _: &At) -> bool {
        true
    }
}

impl Eq for At {}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ident {
    pub name: String,
    pub at: At,
}

impl Ident {
    pub fn span(&self) -> Span {
        self.at.0
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModelFile {
    pub items: Vec<Item>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Item {
    Algebra(Block),
    Module(Block),
    Cdga(Block),
    Brackets(BracketsBlock),
    Morphism(MorphismBlock),
    Config(ConfigBlock),
}

/// `algebra A { … }`, `module L over A { … }` and
/// `cdga C over A cutoff W { … }` share one shape.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Block {
    pub name: Ident,
    pub over: Option<Ident>,
    pub cutoff: Option<u32>,
    pub stmts: Vec<Stmt>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Stmt {
    /// `x : -1;`
    Gen { name: Ident, degree: i32 },
    /// `d x = expr;`
    Diff { name: Ident, value: Expr },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BracketsBlock {
    pub module: Ident,
    pub stmts: Vec<BracketStmt>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BracketStmt {
    /// `[e1, e2] = expr;`
    Bracket { args: Vec<Ident>, value: Expr },
    /// `anchor(e1) = expr;` with `D[x]` marking derivations.
    Anchor { args: Vec<Ident>, value: Expr },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MorphismBlock {
    pub name: Ident,
    pub src: Ident,
    pub tgt: Ident,
    pub maps: Vec<(Ident, Expr)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigBlock {
    pub entries: Vec<(Ident, ConfigValue)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ConfigValue {
    Int(i64),
    Range(i32, i32),
}

/// A signed sum of products.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Expr {
    pub terms: Vec<Term>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Term {
    pub negative: bool,
    pub factors: Vec<Factor>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Factor {
    Number { num: u64, den: u64, at: At },
    Var { name: Ident, exp: u32 },
    Group { expr: Expr, exp: u32, at: At },
    /// `D[x]`: the derivation dual to base generator `x`.
    Deriv(Ident),
}
