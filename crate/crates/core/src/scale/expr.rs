//! The closed scale grammar: expression tree, evaluation and the symbolic
//! power-law analysis used to certify tails.

use std::fmt;
use std::sync::Arc;

use crate::error::Error;
use crate::logvalue::LogValue;

use super::enumeration::Enumeration;
use super::Index;

#[derive(Clone, Debug)]
pub enum Expr {
    Const(f64),
    /// The index variable `k`.
    K,
    /// The family position `n`; only valid inside family templates.
    N,
    Add(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, Box<Expr>),
    Sqrt(Box<Expr>),
    Exp(Box<Expr>),
    Ln(Box<Expr>),
    Floor(Box<Expr>),
    Ceil(Box<Expr>),
    /// Least power of two that is `>=` the argument.
    Dyadic(Box<Expr>),
    /// Finite data, indexed from `k = 1`.
    Table(Arc<[LogValue]>),
    Enum(Arc<Enumeration>),
}

/// Working number: plain `f64` while it stays in range, log domain otherwise.
#[derive(Clone, Copy, Debug)]
enum Val {
    F(f64),
    L(LogValue),
}

const F_MAX: f64 = 1e300;
const F_MIN: f64 = 1e-300;

impl Val {
    fn from_f64(x: f64) -> Val {
        if x == 0.0 || (F_MIN..=F_MAX).contains(&x) {
            Val::F(x)
        } else {
            Val::L(LogValue::from_f64(x).expect("finite nonnegative"))
        }
    }

    fn fit(x: f64, fallback: impl FnOnce() -> Result<LogValue, Error>) -> Result<Val, Error> {
        if x == 0.0 || (F_MIN..=F_MAX).contains(&x) {
            Ok(Val::F(x))
        } else {
            fallback().map(Val::L)
        }
    }

    fn log(self) -> LogValue {
        match self {
            Val::F(x) => LogValue::from_f64(x).expect("finite nonnegative"),
            Val::L(v) => v,
        }
    }

    fn to_f64(self) -> f64 {
        match self {
            Val::F(x) => x,
            Val::L(v) => v.to_f64(),
        }
    }

    fn add(self, o: Val) -> Val {
        match (self, o) {
            (Val::F(a), Val::F(b)) if a + b <= F_MAX => Val::F(a + b),
            _ => Val::L(self.log() + o.log()),
        }
    }

    fn mul(self, o: Val) -> Result<Val, Error> {
        if let (Val::F(a), Val::F(b)) = (self, o) {
            return Val::fit(a * b, || Ok(self.log() * o.log()));
        }
        Ok(Val::L(self.log() * o.log()))
    }

    fn div(self, o: Val) -> Result<Val, Error> {
        let fallback = || {
            self.log()
                .checked_div(o.log())
                .ok_or_else(|| Error::Arithmetic("division by zero".into()))
        };
        if let (Val::F(a), Val::F(b)) = (self, o) {
            if b == 0.0 {
                return Err(Error::Arithmetic("division by zero".into()));
            }
            return Val::fit(a / b, fallback);
        }
        fallback().map(Val::L)
    }

    fn pow(self, e: f64) -> Result<Val, Error> {
        let fallback = || {
            self.log()
                .powf(e)
                .ok_or_else(|| Error::Overflow(format!("power with exponent {e}")))
        };
        if let Val::F(a) = self {
            let r = a.powf(e);
            if r.is_finite() {
                return Val::fit(r, fallback);
            }
        }
        fallback().map(Val::L)
    }
}

// constructors, not operators
#[allow(clippy::should_implement_trait)]
impl Expr {
    pub fn add(a: Expr, b: Expr) -> Expr {
        Expr::Add(Box::new(a), Box::new(b))
    }

    pub fn mul(a: Expr, b: Expr) -> Expr {
        Expr::Mul(Box::new(a), Box::new(b))
    }

    pub fn div(a: Expr, b: Expr) -> Expr {
        Expr::Div(Box::new(a), Box::new(b))
    }

    pub fn pow(a: Expr, b: Expr) -> Expr {
        Expr::Pow(Box::new(a), Box::new(b))
    }

    pub fn sqrt(a: Expr) -> Expr {
        Expr::Sqrt(Box::new(a))
    }

    pub fn exp(a: Expr) -> Expr {
        Expr::Exp(Box::new(a))
    }

    fn children(&self) -> Vec<&Expr> {
        match self {
            Expr::Const(_) | Expr::K | Expr::N | Expr::Table(_) | Expr::Enum(_) => vec![],
            Expr::Add(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) | Expr::Pow(a, b) => vec![a, b],
            Expr::Sqrt(a) | Expr::Exp(a) | Expr::Ln(a) | Expr::Floor(a) | Expr::Ceil(a) | Expr::Dyadic(a) => {
                vec![a]
            }
        }
    }

    /// True when the value changes with `k` (tables and enumerations count).
    pub fn depends_on_k(&self) -> bool {
        match self {
            Expr::K | Expr::Table(_) | Expr::Enum(_) => true,
            _ => self.children().into_iter().any(Expr::depends_on_k),
        }
    }

    pub fn has_n(&self) -> bool {
        matches!(self, Expr::N) || self.children().into_iter().any(Expr::has_n)
    }

    /// Length of the shortest table, i.e. the end of the finite domain.
    pub fn table_len(&self) -> Option<u64> {
        let own = match self {
            Expr::Table(t) => Some(t.len() as u64),
            _ => None,
        };
        self.children()
            .into_iter()
            .filter_map(Expr::table_len)
            .chain(own)
            .min()
    }

    /// Replaces `n` by a constant.
    pub fn bind_n(&self, n: f64) -> Expr {
        let b = |e: &Expr| Box::new(e.bind_n(n));
        match self {
            Expr::N => Expr::Const(n),
            Expr::Const(_) | Expr::K | Expr::Table(_) | Expr::Enum(_) => self.clone(),
            Expr::Add(x, y) => Expr::Add(b(x), b(y)),
            Expr::Mul(x, y) => Expr::Mul(b(x), b(y)),
            Expr::Div(x, y) => Expr::Div(b(x), b(y)),
            Expr::Pow(x, y) => Expr::Pow(b(x), b(y)),
            Expr::Sqrt(x) => Expr::Sqrt(b(x)),
            Expr::Exp(x) => Expr::Exp(b(x)),
            Expr::Ln(x) => Expr::Ln(b(x)),
            Expr::Floor(x) => Expr::Floor(b(x)),
            Expr::Ceil(x) => Expr::Ceil(b(x)),
            Expr::Dyadic(x) => Expr::Dyadic(b(x)),
        }
    }

    pub fn eval(&self, k: Index) -> Result<LogValue, Error> {
        match self.eval_val(k)? {
            Val::F(x) if x < 0.0 => Err(Error::Arithmetic(format!("negative value {x}"))),
            v => Ok(v.log()),
        }
    }

    fn eval_val(&self, k: Index) -> Result<Val, Error> {
        Ok(match self {
            // negative constants only occur as exponents of simplified ratios
            Expr::Const(c) if *c < 0.0 => Val::F(*c),
            Expr::Const(c) => Val::from_f64(*c),
            Expr::K => match k {
                Index::Exact(x) => Val::F(x as f64),
                Index::Huge(v) => Val::L(v),
            },
            Expr::N => return Err(Error::InvalidArgument("free variable n outside a family".into())),
            Expr::Add(a, b) => a.eval_val(k)?.add(b.eval_val(k)?),
            Expr::Mul(a, b) => a.eval_val(k)?.mul(b.eval_val(k)?)?,
            Expr::Div(a, b) => a.eval_val(k)?.div(b.eval_val(k)?)?,
            Expr::Pow(a, e) => {
                let e = e.eval_val(k)?.to_f64();
                if !e.is_finite() {
                    return Err(Error::Overflow("exponent does not fit in f64".into()));
                }
                a.eval_val(k)?.pow(e)?
            }
            Expr::Sqrt(a) => a.eval_val(k)?.pow(0.5)?,
            Expr::Exp(a) => {
                let x = a.eval_val(k)?.to_f64();
                if !x.is_finite() {
                    return Err(Error::Overflow("argument of exp does not fit in f64".into()));
                }
                if x < 690.0 {
                    Val::F(x.exp())
                } else {
                    Val::L(LogValue::exp(x))
                }
            }
            Expr::Ln(a) => {
                let v = a.eval_val(k)?.log();
                if v.is_zero() || v.ln() < 0.0 {
                    return Err(Error::Arithmetic(format!("ln of {v} is negative")));
                }
                Val::from_f64(v.ln())
            }
            Expr::Floor(a) => match a.eval_val(k)? {
                Val::F(x) => Val::F(x.floor()),
                big => big,
            },
            Expr::Ceil(a) => match a.eval_val(k)? {
                Val::F(x) => Val::from_f64(x.ceil()),
                big => big,
            },
            Expr::Dyadic(a) => match a.eval_val(k)? {
                Val::F(x) if x > 0.0 => Val::from_f64(dyadic_ceil(x)),
                Val::F(_) => return Err(Error::Arithmetic("dyadic of zero".into())),
                Val::L(v) => {
                    let ln2 = std::f64::consts::LN_2;
                    Val::L(LogValue::exp((v.ln() / ln2).ceil() * ln2))
                }
            },
            Expr::Table(t) => {
                let x = k
                    .exact()
                    .ok_or_else(|| Error::OutOfDomain(format!("table lookup at {k}")))?;
                let v = t
                    .get((x as usize).wrapping_sub(1))
                    .ok_or_else(|| Error::OutOfDomain(format!("table of length {} at {x}", t.len())))?;
                match v.to_f64() {
                    f if f.is_finite() && (f == 0.0 || f >= F_MIN) && f <= F_MAX => Val::F(f),
                    _ => Val::L(*v),
                }
            }
            Expr::Enum(g) => match k {
                Index::Exact(x) => Val::F(g.forward(x)? as f64),
                Index::Huge(v) if g.is_identity() || g.table_len().is_some() => Val::L(v),
                Index::Huge(v) => {
                    return Err(Error::OutOfDomain(format!("enumeration {} at e^{}", g.name(), v.ln())))
                }
            },
        })
    }

    /// The value when the expression is provably independent of `k`.
    pub fn constant_value(&self) -> Option<f64> {
        if self.has_n() {
            return None;
        }
        if !self.depends_on_k() {
            return self.eval_val(Index::Exact(1)).ok().map(Val::to_f64);
        }
        match self {
            Expr::Pow(_, e) if e.constant_value() == Some(0.0) => Some(1.0),
            _ => None,
        }
    }

    /// Power-law envelope `c·k^β <= expr(k) <= C·k^α` valid for every `k >= 1`
    /// in the domain, derived structurally.
    pub fn envelope(&self) -> Envelope {
        if let Some(c) = self.constant_value() {
            return if c > 0.0 && c.is_finite() {
                let b = PowerBound { ln_c: c.ln(), exponent: 0.0 };
                Envelope { upper: Some(b), lower: Some(b) }
            } else {
                Envelope::default()
            };
        }
        let unit = PowerBound { ln_c: 0.0, exponent: 1.0 };
        match self {
            Expr::K => Envelope { upper: Some(unit), lower: Some(unit) },
            Expr::Enum(g) => {
                if g.is_identity() {
                    Envelope { upper: Some(unit), lower: Some(unit) }
                } else if let Some(t) = g.table_len() {
                    let l = (t as f64).ln();
                    Envelope {
                        upper: Some(PowerBound { ln_c: l, exponent: 1.0 }),
                        lower: Some(PowerBound { ln_c: -l, exponent: 1.0 }),
                    }
                } else {
                    Envelope {
                        upper: Some(PowerBound { ln_c: std::f64::consts::LN_2, exponent: 1.0 }),
                        lower: Some(PowerBound { ln_c: 0.0, exponent: 0.0 }),
                    }
                }
            }
            Expr::Table(t) => {
                let hi = t.iter().max().copied().unwrap_or(LogValue::ZERO);
                let lo = t.iter().min().copied().unwrap_or(LogValue::ZERO);
                Envelope {
                    upper: (!hi.is_zero()).then(|| PowerBound { ln_c: hi.ln(), exponent: 0.0 }),
                    lower: (!lo.is_zero()).then(|| PowerBound { ln_c: lo.ln(), exponent: 0.0 }),
                }
            }
            Expr::Add(a, b) => {
                let (ea, eb) = (a.envelope(), b.envelope());
                let upper = match (ea.upper, eb.upper) {
                    (Some(x), Some(y)) => Some(PowerBound {
                        ln_c: log_add(x.ln_c, y.ln_c),
                        exponent: x.exponent.max(y.exponent),
                    }),
                    _ => None,
                };
                let lower = match (ea.lower, eb.lower) {
                    (Some(x), Some(y)) if x.exponent == y.exponent => {
                        Some(PowerBound { ln_c: log_add(x.ln_c, y.ln_c), exponent: x.exponent })
                    }
                    (Some(x), Some(y)) => Some(if x.exponent > y.exponent { x } else { y }),
                    (x, y) => x.or(y),
                };
                Envelope { upper, lower }
            }
            Expr::Mul(a, b) => {
                let (ea, eb) = (a.envelope(), b.envelope());
                Envelope {
                    upper: PowerBound::product(ea.upper, eb.upper),
                    lower: PowerBound::product(ea.lower, eb.lower),
                }
            }
            Expr::Div(a, b) => {
                let (ea, eb) = (a.envelope(), b.envelope());
                Envelope {
                    upper: PowerBound::quotient(ea.upper, eb.lower),
                    lower: PowerBound::quotient(ea.lower, eb.upper),
                }
            }
            Expr::Pow(a, e) => match e.constant_value() {
                Some(e) if e.is_finite() => a.envelope().powf(e),
                _ => Envelope::default(),
            },
            Expr::Sqrt(a) => a.envelope().powf(0.5),
            Expr::Ln(a) => Envelope { upper: a.envelope().upper, lower: None },
            Expr::Floor(a) => {
                let ea = a.envelope();
                Envelope {
                    upper: ea.upper,
                    lower: ea
                        .lower
                        .filter(|l| l.ln_c >= 0.0 && l.exponent >= 0.0)
                        .map(|l| PowerBound { ln_c: l.ln_c - std::f64::consts::LN_2, exponent: l.exponent }),
                }
            }
            Expr::Ceil(a) => {
                let ea = a.envelope();
                Envelope {
                    upper: ea.upper.map(|u| PowerBound {
                        ln_c: log_add(u.ln_c, 0.0),
                        exponent: u.exponent.max(0.0),
                    }),
                    lower: ea.lower,
                }
            }
            Expr::Dyadic(a) => {
                let ea = a.envelope();
                Envelope {
                    upper: ea.upper.map(|u| PowerBound { ln_c: u.ln_c + std::f64::consts::LN_2, exponent: u.exponent }),
                    lower: ea.lower,
                }
            }
            Expr::Exp(a) => {
                // e^x >= x^j / j! with j chosen so the exponent reaches 3
                let lower = a.envelope().lower.filter(|l| l.exponent > 0.0).map(|l| {
                    let j = (3.0 / l.exponent).ceil().min(170.0);
                    let ln_fact: f64 = (2..=j as u32).map(|i| (i as f64).ln()).sum();
                    PowerBound { ln_c: j * l.ln_c - ln_fact, exponent: j * l.exponent }
                });
                Envelope { upper: None, lower }
            }
            Expr::N | Expr::Const(_) => Envelope::default(),
        }
    }

    /// Monotonicity in `k`, derived structurally. `Unknown` is always safe.
    pub fn monotonicity(&self) -> Monotonicity {
        use Monotonicity::*;
        if self.constant_value().is_some() {
            return Constant;
        }
        if let Some(b) = self.envelope().exact() {
            return match b.exponent {
                e if e > 0.0 => NonDecreasing,
                e if e < 0.0 => NonIncreasing,
                _ => Constant,
            };
        }
        match self {
            Expr::K => NonDecreasing,
            Expr::Enum(g) if g.is_identity() => NonDecreasing,
            Expr::Enum(_) => Unknown,
            Expr::Table(t) => {
                if t.windows(2).all(|w| w[0] <= w[1]) {
                    NonDecreasing
                } else if t.windows(2).all(|w| w[0] >= w[1]) {
                    NonIncreasing
                } else {
                    Unknown
                }
            }
            Expr::Add(a, b) | Expr::Mul(a, b) => a.monotonicity().combine(b.monotonicity()),
            Expr::Div(a, b) => a.monotonicity().combine(b.monotonicity().flip()),
            Expr::Pow(a, e) => match e.constant_value() {
                Some(e) if e > 0.0 => a.monotonicity(),
                Some(e) if e < 0.0 => a.monotonicity().flip(),
                Some(_) => Constant,
                None => Unknown,
            },
            Expr::Sqrt(a) | Expr::Exp(a) | Expr::Ln(a) | Expr::Floor(a) | Expr::Ceil(a) | Expr::Dyadic(a) => {
                a.monotonicity()
            }
            Expr::Const(_) | Expr::N => Unknown,
        }
    }
}

impl Expr {
    /// Structural equality (enumerations compare by value).
    pub fn same(&self, other: &Expr) -> bool {
        match (self, other) {
            (Expr::Const(a), Expr::Const(b)) => a == b,
            (Expr::K, Expr::K) | (Expr::N, Expr::N) => true,
            (Expr::Table(a), Expr::Table(b)) => a == b,
            (Expr::Enum(a), Expr::Enum(b)) => Arc::ptr_eq(a, b) || a == b,
            (Expr::Add(a, b), Expr::Add(c, d))
            | (Expr::Mul(a, b), Expr::Mul(c, d))
            | (Expr::Div(a, b), Expr::Div(c, d))
            | (Expr::Pow(a, b), Expr::Pow(c, d)) => a.same(c) && b.same(d),
            (Expr::Sqrt(a), Expr::Sqrt(b))
            | (Expr::Exp(a), Expr::Exp(b))
            | (Expr::Ln(a), Expr::Ln(b))
            | (Expr::Floor(a), Expr::Floor(b))
            | (Expr::Ceil(a), Expr::Ceil(b))
            | (Expr::Dyadic(a), Expr::Dyadic(b)) => a.same(b),
            _ => false,
        }
    }

    fn collect_factors(&self, scale: f64, consts: &mut f64, out: &mut Vec<(Expr, f64)>) -> bool {
        match self {
            Expr::Mul(a, b) => a.collect_factors(scale, consts, out) && b.collect_factors(scale, consts, out),
            Expr::Div(a, b) => a.collect_factors(scale, consts, out) && b.collect_factors(-scale, consts, out),
            Expr::Sqrt(a) => a.collect_factors(0.5 * scale, consts, out),
            Expr::Pow(a, e) if e.constant_value().is_some_and(f64::is_finite) => {
                let e = e.constant_value().expect("checked");
                e == 0.0 || a.collect_factors(e * scale, consts, out)
            }
            _ if !self.depends_on_k() && !self.has_n() => match self.constant_value() {
                Some(c) if c > 0.0 && c.is_finite() => {
                    *consts *= c.powf(scale);
                    consts.is_finite() && *consts > 0.0
                }
                _ => false,
            },
            _ => {
                match out.iter_mut().find(|(b, _)| b.same(self)) {
                    Some((_, e)) => *e += scale,
                    None => out.push((self.clone(), scale)),
                }
                true
            }
        }
    }

    /// `num / den` with common multiplicative factors cancelled, so that
    /// e.g. `k^n / k^m` becomes `k^(n-m)`. Valid because every factor of a
    /// scale is positive.
    pub fn ratio(num: &Expr, den: &Expr) -> Expr {
        let mut consts = 1.0;
        let mut factors = Vec::new();
        if !(num.collect_factors(1.0, &mut consts, &mut factors) && den.collect_factors(-1.0, &mut consts, &mut factors)) {
            return Expr::div(num.clone(), den.clone());
        }
        let mut out: Option<Expr> = (consts != 1.0).then_some(Expr::Const(consts));
        for (base, e) in factors {
            if e.abs() < 1e-15 {
                continue;
            }
            let term = if e == 1.0 { base } else { Expr::pow(base, Expr::Const(e)) };
            out = Some(match out {
                None => term,
                Some(acc) => Expr::mul(acc, term),
            });
        }
        out.unwrap_or(Expr::Const(1.0))
    }
}

fn log_add(a: f64, b: f64) -> f64 {
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    hi + (lo - hi).exp().ln_1p()
}

fn dyadic_ceil(x: f64) -> f64 {
    let mut p = 2f64.powi(x.log2().floor() as i32);
    while p < x {
        p *= 2.0;
    }
    while p / 2.0 >= x {
        p /= 2.0;
    }
    p
}

/// `C·k^exponent`, with `C` stored as its logarithm.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PowerBound {
    pub ln_c: f64,
    pub exponent: f64,
}

impl PowerBound {
    fn product(a: Option<PowerBound>, b: Option<PowerBound>) -> Option<PowerBound> {
        let (a, b) = (a?, b?);
        Some(PowerBound { ln_c: a.ln_c + b.ln_c, exponent: a.exponent + b.exponent })
    }

    fn quotient(a: Option<PowerBound>, b: Option<PowerBound>) -> Option<PowerBound> {
        let (a, b) = (a?, b?);
        Some(PowerBound { ln_c: a.ln_c - b.ln_c, exponent: a.exponent - b.exponent })
    }

    pub fn eval(&self, k: LogValue) -> LogValue {
        LogValue::exp(self.ln_c + self.exponent * k.ln())
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Envelope {
    pub upper: Option<PowerBound>,
    pub lower: Option<PowerBound>,
}

impl Envelope {
    fn powf(self, e: f64) -> Envelope {
        let p = |b: PowerBound| PowerBound { ln_c: b.ln_c * e, exponent: b.exponent * e };
        if e >= 0.0 {
            Envelope { upper: self.upper.map(p), lower: self.lower.map(p) }
        } else {
            Envelope { upper: self.lower.map(p), lower: self.upper.map(p) }
        }
    }

    /// The expression is exactly `C·k^α` when both bounds coincide.
    pub fn exact(&self) -> Option<PowerBound> {
        match (self.upper, self.lower) {
            (Some(u), Some(l))
                if (u.ln_c - l.ln_c).abs() <= 1e-12 * u.ln_c.abs().max(1.0) && u.exponent == l.exponent =>
            {
                Some(u)
            }
            _ => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Monotonicity {
    Constant,
    NonDecreasing,
    NonIncreasing,
    Unknown,
}

impl Monotonicity {
    fn combine(self, o: Monotonicity) -> Monotonicity {
        use Monotonicity::*;
        match (self, o) {
            (Constant, x) | (x, Constant) => x,
            (a, b) if a == b => a,
            _ => Unknown,
        }
    }

    fn flip(self) -> Monotonicity {
        use Monotonicity::*;
        match self {
            NonDecreasing => NonIncreasing,
            NonIncreasing => NonDecreasing,
            x => x,
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Const(c) => write!(f, "{c}"),
            Expr::K => write!(f, "k"),
            Expr::N => write!(f, "n"),
            Expr::Add(a, b) => write!(f, "({a} + {b})"),
            Expr::Mul(a, b) => write!(f, "({a} * {b})"),
            Expr::Div(a, b) => write!(f, "({a} / {b})"),
            Expr::Pow(a, b) => write!(f, "pow({a}, {b})"),
            Expr::Sqrt(a) => write!(f, "sqrt({a})"),
            Expr::Exp(a) => write!(f, "exp({a})"),
            Expr::Ln(a) => write!(f, "ln({a})"),
            Expr::Floor(a) => write!(f, "floor({a})"),
            Expr::Ceil(a) => write!(f, "ceil({a})"),
            Expr::Dyadic(a) => write!(f, "dyadic({a})"),
            Expr::Table(t) => {
                write!(f, "table[")?;
                for (i, v) in t.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{v}")?;
                }
                write!(f, "]")
            }
            Expr::Enum(g) => write!(f, "enum({})", g.name()),
        }
    }
}
