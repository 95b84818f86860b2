//! Ring construction expressions.
//!
//! ```text
//! expr     := term ( "x" term )*
//! term     := "Z" INT | "UT2(" expr ")" | "Tri(" expr "," mspec "," expr ")" | "file(" PATH ")"
//! mspec    := "reg" | "nat(" grouptype ")" | "file(" PATH ")"
//! grouptype:= "C" INT ( "xC" INT )*
//! ```
//!
//! Whitespace may separate tokens but not split them: `Z 4` is an error.
//! `x` is a left-associative direct product.

use std::fmt;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use thiserror::Error;

use crate::bimodule::{enumerate_bimodules, Bimodule, BimoduleError, DEFAULT_BUDGET};
use crate::construct::{
    cyclic_ring, direct_product, triangular, ConstructionError, TriangularSpec,
};
use crate::group::{FinAbGroup, GroupError, GroupType};
use crate::io::{self, LoadError};
use crate::ring::{RingError, ValidatedRing};
use crate::theorems::CatalogEntry;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Expr {
    Cyclic(usize),
    Product(Box<Expr>, Box<Expr>),
    Ut2(Box<Expr>),
    Tri(Box<Expr>, ModuleSpec, Box<Expr>),
    File(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ModuleSpec {
    Reg,
    Nat(GroupType),
    File(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("parse error at byte {offset}: expected {expected}")]
pub struct ParseError {
    pub offset: usize,
    pub expected: String,
}

#[derive(Debug, Error)]
pub enum DslError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("elaboration error: {0}")]
    Elaboration(String),
    #[error(transparent)]
    Load(#[from] LoadError),
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Bimodule(#[from] BimoduleError),
    #[error(transparent)]
    Construction(#[from] ConstructionError),
}

impl DslError {
    /// True for axiom failures in otherwise well-formed input.
    pub fn is_axiom_violation(&self) -> bool {
        matches!(
            self,
            DslError::Ring(RingError::AxiomViolation { .. })
                | DslError::Group(GroupError::AxiomViolation { .. })
                | DslError::Bimodule(BimoduleError::AxiomViolation { .. })
                | DslError::Bimodule(BimoduleError::Group(GroupError::AxiomViolation { .. }))
                | DslError::Construction(ConstructionError::Ring(RingError::AxiomViolation { .. }))
        )
    }
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err<T>(&self, expected: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError {
            offset: self.pos,
            expected: expected.into(),
        })
    }

    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.src.len() - trimmed.len();
    }

    fn eat(&mut self, lit: &str) -> bool {
        self.skip_ws();
        if self.rest().starts_with(lit) {
            self.pos += lit.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, lit: &str) -> Result<(), ParseError> {
        if self.eat(lit) {
            Ok(())
        } else {
            self.err(format!("'{lit}'"))
        }
    }

    /// Digits immediately at the cursor, no leading whitespace.
    fn int(&mut self) -> Result<usize, ParseError> {
        let digits = self.rest().bytes().take_while(u8::is_ascii_digit).count();
        if digits == 0 {
            return self.err("an integer immediately after the prefix");
        }
        let value = self.rest()[..digits]
            .parse::<usize>()
            .ok()
            .filter(|&n| n >= 1);
        match value {
            Some(n) => {
                self.pos += digits;
                Ok(n)
            }
            None => self.err("a positive integer"),
        }
    }

    fn path(&mut self) -> Result<String, ParseError> {
        self.skip_ws();
        let Some(end) = self.rest().find(')') else {
            return self.err("')' closing the path");
        };
        let p = self.rest()[..end].trim();
        if p.is_empty() {
            return self.err("a path");
        }
        self.pos += end;
        let p = p.to_string();
        self.expect(")")?;
        Ok(p)
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        while self.eat("x") {
            let rhs = self.term()?;
            lhs = Expr::Product(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        self.skip_ws();
        if self.eat("UT2") {
            self.expect("(")?;
            let inner = self.expr()?;
            self.expect(")")?;
            Ok(Expr::Ut2(Box::new(inner)))
        } else if self.eat("Tri") {
            self.expect("(")?;
            let a = self.expr()?;
            self.expect(",")?;
            let m = self.mspec()?;
            self.expect(",")?;
            let b = self.expr()?;
            self.expect(")")?;
            Ok(Expr::Tri(Box::new(a), m, Box::new(b)))
        } else if self.eat("file") {
            self.expect("(")?;
            Ok(Expr::File(self.path()?))
        } else if self.eat("Z") {
            Ok(Expr::Cyclic(self.int()?))
        } else {
            self.err("'Z', 'UT2(', 'Tri(' or 'file('")
        }
    }

    fn mspec(&mut self) -> Result<ModuleSpec, ParseError> {
        if self.eat("reg") {
            Ok(ModuleSpec::Reg)
        } else if self.eat("nat") {
            self.expect("(")?;
            let t = self.group_type()?;
            self.expect(")")?;
            Ok(ModuleSpec::Nat(t))
        } else if self.eat("file") {
            self.expect("(")?;
            Ok(ModuleSpec::File(self.path()?))
        } else {
            self.err("'reg', 'nat(' or 'file('")
        }
    }

    fn group_type(&mut self) -> Result<GroupType, ParseError> {
        let mut orders = Vec::new();
        self.expect("C")?;
        orders.push(self.int()?);
        while self.eat("x") {
            if !self.rest().starts_with('C') {
                return self.err("'C' immediately after 'x'");
            }
            self.pos += 1;
            orders.push(self.int()?);
        }
        Ok(GroupType::from_cyclic_orders(&orders))
    }
}

pub fn parse(src: &str) -> Result<Expr, ParseError> {
    let mut p = Parser { src, pos: 0 };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos != src.len() {
        return p.err("end of input");
    }
    Ok(e)
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Cyclic(n) => write!(f, "Z{n}"),
            Expr::Product(l, r) => write!(f, "{l}x{r}"),
            Expr::Ut2(e) => write!(f, "UT2({e})"),
            Expr::Tri(a, m, b) => write!(f, "Tri({a}, {m}, {b})"),
            Expr::File(p) => write!(f, "file({p})"),
        }
    }
}

impl fmt::Display for ModuleSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModuleSpec::Reg => f.write_str("reg"),
            ModuleSpec::Nat(t) => write!(f, "nat({t})"),
            ModuleSpec::File(p) => write!(f, "file({p})"),
        }
    }
}

/// Where relative paths resolve and how much bimodule search is allowed.
#[derive(Debug, Clone)]
pub struct Context {
    pub base_dir: PathBuf,
    pub budget: u64,
}

impl Default for Context {
    fn default() -> Self {
        Context {
            base_dir: PathBuf::from("."),
            budget: DEFAULT_BUDGET,
        }
    }
}

impl Context {
    fn resolve(&self, p: &str) -> PathBuf {
        let path = Path::new(p);
        if path.is_absolute() {
            path.to_path_buf()
        } else {
            self.base_dir.join(path)
        }
    }
}

/// A built ring; `triangular` is kept when the outermost construction is
/// triangular so elements can be decoded.
#[derive(Debug, Clone)]
pub struct Elaborated {
    pub ring: Arc<ValidatedRing>,
    pub triangular: Option<TriangularSpec>,
}

impl Elaborated {
    fn plain(r: ValidatedRing) -> Self {
        Elaborated {
            ring: Arc::new(r),
            triangular: None,
        }
    }
}

pub fn elaborate(e: &Expr, ctx: &Context) -> Result<Elaborated, DslError> {
    match e {
        Expr::Cyclic(n) => Ok(Elaborated::plain(cyclic_ring(*n))),
        Expr::Product(l, r) => {
            let l = elaborate(l, ctx)?;
            let r = elaborate(r, ctx)?;
            Ok(Elaborated::plain(direct_product(&l.ring, &r.ring)))
        }
        Expr::Ut2(inner) => {
            let inner = elaborate(inner, ctx)?;
            let bm = Bimodule::regular(inner.ring.clone());
            tri(&inner.ring, &bm, &inner.ring)
        }
        Expr::Tri(a_expr, mspec, b_expr) => {
            let a = elaborate(a_expr, ctx)?.ring;
            let bm = match mspec {
                ModuleSpec::Reg => {
                    if a_expr != b_expr {
                        return Err(DslError::Elaboration(format!(
                            "'reg' needs identical rings on both sides, got {a_expr} and {b_expr}"
                        )));
                    }
                    Bimodule::regular(a.clone())
                }
                ModuleSpec::Nat(t) => {
                    let b = elaborate(b_expr, ctx)?.ring;
                    let mut found =
                        enumerate_bimodules(&a, &b, &FinAbGroup::from_type(t), ctx.budget)?;
                    match found.len() {
                        1 => found.pop().expect("one element"),
                        0 => {
                            return Err(DslError::Elaboration(format!(
                                "no {a_expr}-{b_expr}-bimodule structure on {t}"
                            )))
                        }
                        k => {
                            return Err(DslError::Elaboration(format!(
                                "nat({t}) is ambiguous: {k} bimodule structures; use file(...)"
                            )))
                        }
                    }
                }
                ModuleSpec::File(p) => {
                    let b = elaborate(b_expr, ctx)?.ring;
                    load_bimodule(&ctx.resolve(p), &a, &b)?
                }
            };
            let b = bm.right_ring().clone();
            tri(&a, &bm, &b)
        }
        Expr::File(p) => {
            let tables = io::load_ring_file(&ctx.resolve(p))?;
            Ok(Elaborated::plain(ValidatedRing::new(tables)?))
        }
    }
}

fn tri(
    a: &Arc<ValidatedRing>,
    bm: &Bimodule,
    b: &Arc<ValidatedRing>,
) -> Result<Elaborated, DslError> {
    let spec = triangular(a, bm, b)?;
    Ok(Elaborated {
        ring: Arc::new(spec.flattened().clone()),
        triangular: Some(spec),
    })
}

/// Loads a bimodule file and validates it against the given rings.
pub fn load_bimodule(
    path: &Path,
    a: &Arc<ValidatedRing>,
    b: &Arc<ValidatedRing>,
) -> Result<Bimodule, DslError> {
    let t = io::load_bimodule_file(path)?;
    if t.a_order != a.order() || t.b_order != b.order() {
        return Err(DslError::Elaboration(format!(
            "{} is a bimodule over rings of orders {} and {}, expected {} and {}",
            path.display(),
            t.a_order,
            t.b_order,
            a.order(),
            b.order()
        )));
    }
    let g = FinAbGroup::new(t.m_order, t.add)?;
    let mut bm = Bimodule::new(a.clone(), b.clone(), g, t.laction, t.raction)?;
    bm.set_provenance(format!("file({})", path.display()));
    Ok(bm)
}

/// Parse and elaborate relative to `ctx`.
pub fn build(src: &str, ctx: &Context) -> Result<Elaborated, DslError> {
    elaborate(&parse(src)?, ctx)
}

/// `Z2[x]/(x²)`, elements `0, 1, x, 1+x`.
pub const DUAL_NUMBERS_FIXTURE: &str = include_str!("../fixtures/z2_dual.ring");
pub const DUAL_NUMBERS_PATH: &str = "fixtures/z2_dual.ring";

/// The standard sweep catalog.
pub const DEFAULT_CATALOG: [&str; 7] = [
    "Z1",
    "Z2",
    "Z3",
    "Z4",
    "Z2xZ2",
    "file(fixtures/z2_dual.ring)",
    "UT2(Z2)",
];

pub fn default_catalog() -> Vec<CatalogEntry> {
    DEFAULT_CATALOG
        .iter()
        .map(|&label| {
            let ring = if label == format!("file({DUAL_NUMBERS_PATH})") {
                let t = io::parse_ring_file(DUAL_NUMBERS_FIXTURE).expect("fixture parses");
                Arc::new(ValidatedRing::new(t).expect("fixture validates"))
            } else {
                build(label, &Context::default())
                    .expect("catalog entry")
                    .ring
            };
            CatalogEntry {
                label: label.to_string(),
                ring,
            }
        })
        .collect()
}

/// One expression per line; `#` comments and blank lines skipped. Relative
/// paths resolve against the catalog file's directory.
pub fn load_catalog(path: &Path, budget: u64) -> Result<Vec<CatalogEntry>, DslError> {
    let text = std::fs::read_to_string(path).map_err(|source| LoadError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let ctx = Context {
        base_dir: path.parent().map(Path::to_path_buf).unwrap_or_default(),
        budget,
    };
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|l| {
            let e = parse(l)?;
            Ok(CatalogEntry {
                label: e.to_string(),
                ring: elaborate(&e, &ctx)?.ring,
            })
        })
        .collect()
}
