//! Scales, families of scales and the index sets they live on.

pub mod domination;
pub mod enumeration;
pub mod expr;
pub mod parse;
pub mod standard;

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::{Serialize, Serializer};

use crate::error::Error;
use crate::logvalue::LogValue;

pub use domination::{
    dominates, equivalent, family_dominates, power_domination, DominationReport, DominationVerdict,
    Equivalence, FamilyDominationEntry, PowerDomination, TrendPoint,
};
pub use enumeration::{Enumeration, EnumerationKind};
pub use expr::{Envelope, Expr, Monotonicity, PowerBound};
pub use standard::{scale_power, scale_product, standard_family, StandardVariant};

/// A point of `ℕ⁺`: either a machine integer or an astronomically large
/// index known only through its logarithm.
#[derive(Clone, Copy, Debug)]
pub enum Index {
    Exact(u64),
    Huge(LogValue),
}

impl Index {
    pub fn value(&self) -> LogValue {
        match self {
            Index::Exact(x) => LogValue::from_u64(*x),
            Index::Huge(v) => *v,
        }
    }

    pub fn exact(&self) -> Option<u64> {
        match self {
            Index::Exact(x) => Some(*x),
            Index::Huge(_) => None,
        }
    }
}

impl PartialEq for Index {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Index {}

impl PartialOrd for Index {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Index {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Index::Exact(a), Index::Exact(b)) => a.cmp(b),
            _ => self.value().cmp(&other.value()),
        }
    }
}

impl fmt::Display for Index {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Index::Exact(x) => write!(f, "{x}"),
            Index::Huge(v) => write!(f, "e^{}", v.ln()),
        }
    }
}

/// Exact indices serialize as integers, huge ones as `{"ln": x}`.
impl Serialize for Index {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Huge {
            ln: f64,
        }
        match self {
            Index::Exact(x) => s.serialize_u64(*x),
            Index::Huge(v) => Huge { ln: v.ln() }.serialize(s),
        }
    }
}

/// The finite part of `ℕ⁺` on which a check runs.
#[derive(Clone, Debug, PartialEq)]
pub enum Prefix {
    /// `1..=K`.
    Dense(u64),
    /// Strictly increasing explicit points.
    Points(Vec<Index>),
}

impl Prefix {
    pub fn points(points: Vec<Index>) -> Result<Prefix, Error> {
        if points.is_empty() {
            return Err(Error::InvalidArgument("empty prefix".into()));
        }
        if points.iter().any(|p| matches!(p, Index::Exact(0))) {
            return Err(Error::InvalidArgument("index 0 in prefix".into()));
        }
        if let Some(w) = points.windows(2).find(|w| w[0] >= w[1]) {
            return Err(Error::InvalidArgument(format!("prefix not increasing at {}", w[1])));
        }
        Ok(Prefix::Points(points))
    }

    pub fn len(&self) -> usize {
        match self {
            Prefix::Dense(k) => *k as usize,
            Prefix::Points(p) => p.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn iter(&self) -> Box<dyn Iterator<Item = Index> + '_> {
        match self {
            Prefix::Dense(k) => Box::new((1..=*k).map(Index::Exact)),
            Prefix::Points(p) => Box::new(p.iter().copied()),
        }
    }

    /// Largest index, if the prefix is nonempty.
    pub fn last(&self) -> Option<Index> {
        match self {
            Prefix::Dense(0) => None,
            Prefix::Dense(k) => Some(Index::Exact(*k)),
            Prefix::Points(p) => p.last().copied(),
        }
    }
}

/// A function `ℕ⁺ → [1, ∞)` given by a grammar expression.
#[derive(Clone, Debug)]
pub struct Scale {
    expr: Arc<Expr>,
    label: String,
}

impl Scale {
    pub fn from_expr(expr: Expr) -> Scale {
        let label = expr.to_string();
        Scale { expr: Arc::new(expr), label }
    }

    pub fn parse(src: &str, ctx: &ScaleContext) -> Result<Scale, Error> {
        let expr = parse::parse_expr(src, ctx)?;
        if expr.has_n() {
            return Err(Error::Parse { pos: 0, msg: "a single scale may not mention n".into() });
        }
        Ok(Scale { expr: Arc::new(expr), label: src.trim().to_string() })
    }

    pub fn identity() -> Scale {
        Scale::from_expr(Expr::K).with_label("k")
    }

    pub fn constant(c: f64) -> Scale {
        Scale::from_expr(Expr::Const(c))
    }

    pub fn enumeration(g: Arc<Enumeration>) -> Scale {
        Scale::from_expr(Expr::Enum(g))
    }

    /// Finite data `values[k - 1]`, defined for `k <= values.len()`.
    pub fn table(values: Vec<LogValue>) -> Scale {
        Scale::from_expr(Expr::Table(Arc::from(values)))
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Scale {
        self.label = label.into();
        self
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn expr(&self) -> &Expr {
        &self.expr
    }

    /// End of the finite domain for table-backed scales.
    pub fn domain_len(&self) -> Option<u64> {
        self.expr.table_len()
    }

    pub fn eval(&self, k: u64) -> Result<LogValue, Error> {
        self.eval_at(Index::Exact(k))
    }

    pub fn eval_at(&self, k: Index) -> Result<LogValue, Error> {
        if matches!(k, Index::Exact(0)) {
            return Err(Error::OutOfDomain("index 0".into()));
        }
        if let (Some(len), Some(x)) = (self.domain_len(), k.exact()) {
            if x > len {
                return Err(Error::OutOfDomain(format!("{x} beyond domain 1..={len} of {}", self.label)));
            }
        }
        let v = self.expr.eval(k)?;
        if v.is_zero() || v.ln() < -crate::logvalue::LOG_TOL {
            return Err(Error::InvalidScale { index: k.to_string(), value: v.to_string() });
        }
        Ok(v)
    }

    pub fn envelope(&self) -> Envelope {
        self.expr.envelope()
    }

    pub fn monotonicity(&self) -> Monotonicity {
        self.expr.monotonicity()
    }
}

impl fmt::Display for Scale {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label)
    }
}

/// `σ_0 ≤ σ_1 ≤ ...`, either an explicit list or a template in `n`.
#[derive(Clone, Debug)]
pub struct ScaleFamily {
    members: Members,
    label: String,
}

#[derive(Clone, Debug)]
enum Members {
    List(Vec<Scale>),
    Template(Arc<Expr>),
}

impl ScaleFamily {
    pub fn from_members(members: Vec<Scale>) -> Result<ScaleFamily, Error> {
        if members.is_empty() {
            return Err(Error::InvalidArgument("empty family".into()));
        }
        let label = members.iter().map(Scale::label).collect::<Vec<_>>().join(", ");
        Ok(ScaleFamily { members: Members::List(members), label: format!("[{label}]") })
    }

    /// Member `n` is `template` with `n` substituted; a template without `n`
    /// gives the constant family.
    pub fn from_template(template: Expr) -> ScaleFamily {
        let label = template.to_string();
        ScaleFamily { members: Members::Template(Arc::new(template)), label }
    }

    pub fn parse(src: &str, ctx: &ScaleContext) -> Result<ScaleFamily, Error> {
        let e = parse::parse_expr(src, ctx)?;
        Ok(ScaleFamily::from_template(e).with_label(src.trim()))
    }

    /// `σ_n = σ^n`.
    pub fn powers(scale: &Scale) -> ScaleFamily {
        let t = Expr::pow(scale.expr().clone(), Expr::N);
        ScaleFamily::from_template(t).with_label(format!("({})^n", scale.label()))
    }

    pub fn with_label(mut self, label: impl Into<String>) -> ScaleFamily {
        self.label = label.into();
        self
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// Number of members, `None` for templates (unbounded).
    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> Option<usize> {
        match &self.members {
            Members::List(v) => Some(v.len()),
            Members::Template(_) => None,
        }
    }

    pub fn member(&self, n: usize) -> Result<Scale, Error> {
        match &self.members {
            Members::List(v) => v
                .get(n)
                .cloned()
                .ok_or_else(|| Error::InvalidArgument(format!("family has no member {n}"))),
            Members::Template(t) => {
                let s = Scale::from_expr(t.bind_n(n as f64));
                let label = format!("{}|n={n}", self.label);
                Ok(s.with_label(label))
            }
        }
    }

    /// Whether `σ_0 ≡ 1`.
    pub fn unit_base(&self) -> bool {
        self.member(0)
            .ok()
            .and_then(|s| s.expr().constant_value())
            .is_some_and(|v| (v - 1.0).abs() <= crate::logvalue::LOG_TOL)
    }

    /// Checks `σ_n ≤ σ_{n+1}` for `n < n_max` on the prefix.
    pub fn check_increasing(&self, n_max: usize, prefix: &Prefix) -> Result<(), Error> {
        let members = (0..=n_max).map(|n| self.member(n)).collect::<Result<Vec<_>, _>>()?;
        for x in prefix.iter() {
            let mut prev = members[0].eval_at(x)?;
            for (n, s) in members.iter().enumerate().skip(1) {
                let v = s.eval_at(x)?;
                if !prev.approx_le(&v) {
                    return Err(Error::Precondition(format!(
                        "family {} not increasing: member {} exceeds member {n} at {x}",
                        self.label,
                        n - 1
                    )));
                }
                prev = v;
            }
        }
        Ok(())
    }
}

/// Named enumerations available to `enum(name)`.
#[derive(Clone, Debug)]
pub struct ScaleContext {
    enumerations: BTreeMap<String, Arc<Enumeration>>,
}

impl Default for ScaleContext {
    fn default() -> Self {
        let mut ctx = ScaleContext { enumerations: BTreeMap::new() };
        ctx.register(Enumeration::identity());
        ctx.register(Enumeration::skip());
        ctx
    }
}

impl ScaleContext {
    pub fn register(&mut self, g: Enumeration) -> Arc<Enumeration> {
        let g = Arc::new(g);
        self.enumerations.insert(g.name().to_string(), g.clone());
        g
    }

    pub fn enumeration(&self, name: &str) -> Option<Arc<Enumeration>> {
        self.enumerations.get(name).cloned()
    }

    pub fn scale(&self, src: &str) -> Result<Scale, Error> {
        Scale::parse(src, self)
    }

    pub fn family(&self, src: &str) -> Result<ScaleFamily, Error> {
        ScaleFamily::parse(src, self)
    }
}
