//! Standard families built from enumerations, and grammar-level products
//! and powers of scales.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::Error;

use super::{Enumeration, Expr, Scale, ScaleFamily};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StandardVariant {
    /// `γ_1 ⋯ γ_n`
    Plain,
    /// `(γ_1 ⋯ γ_n)^2`
    Squared,
    /// `sqrt(γ_1 ⋯ γ_n)`
    Sqrt,
}

/// The family whose member `n` is the product of the first `n` enumerations,
/// in the requested variant. Member 0 is the constant 1; the family has
/// `gammas.len() + 1` members.
pub fn standard_family(gammas: &[Arc<Enumeration>], variant: StandardVariant) -> Result<ScaleFamily, Error> {
    let lens: Vec<u64> = gammas.iter().filter_map(|g| g.table_len()).collect();
    if lens.windows(2).any(|w| w[0] != w[1]) {
        return Err(Error::ShapeMismatch(format!("enumeration tables of different lengths {lens:?}")));
    }
    let mut members = vec![Scale::constant(1.0).with_label("1")];
    let mut product: Option<Expr> = None;
    for g in gammas {
        let e = Expr::Enum(g.clone());
        product = Some(match product {
            None => e,
            Some(p) => Expr::mul(p, e),
        });
        let base = product.clone().expect("just set");
        let member = match variant {
            StandardVariant::Plain => base,
            StandardVariant::Squared => Expr::pow(base, Expr::Const(2.0)),
            StandardVariant::Sqrt => Expr::sqrt(base),
        };
        members.push(Scale::from_expr(member));
    }
    let names: Vec<&str> = gammas.iter().map(|g| g.name()).collect();
    let label = format!("standard-{:?}[{}]", variant, names.join(",")).to_lowercase();
    Ok(ScaleFamily::from_members(members)?.with_label(label))
}

/// Pointwise product `a·b`.
pub fn scale_product(a: &Scale, b: &Scale) -> Scale {
    Scale::from_expr(Expr::mul(a.expr().clone(), b.expr().clone()))
        .with_label(format!("({})*({})", a.label(), b.label()))
}

/// Pointwise power `a^d`, `d >= 0`.
pub fn scale_power(a: &Scale, d: f64) -> Result<Scale, Error> {
    if !(d >= 0.0 && d.is_finite()) {
        return Err(Error::InvalidArgument(format!("power {d} must be a nonnegative number")));
    }
    Ok(Scale::from_expr(Expr::pow(a.expr().clone(), Expr::Const(d))).with_label(format!("({})^{d}", a.label())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use crate::logvalue::LogValue;

    fn ids(n: usize) -> Vec<Arc<Enumeration>> {
        (0..n).map(|_| Arc::new(Enumeration::identity())).collect()
    }

    #[test]
    fn variants() {
        let plain = standard_family(&ids(3), StandardVariant::Plain).unwrap();
        assert_relative_eq!(plain.member(3).unwrap().eval(2).unwrap().to_f64(), 8.0, max_relative = 1e-12);
        assert!(plain.unit_base());
        let sq = standard_family(&ids(3), StandardVariant::Squared).unwrap();
        assert_relative_eq!(sq.member(2).unwrap().eval(3).unwrap().to_f64(), 81.0, max_relative = 1e-12);
        let rt = standard_family(&ids(3), StandardVariant::Sqrt).unwrap();
        assert_relative_eq!(rt.member(2).unwrap().eval(4).unwrap().to_f64(), 4.0, max_relative = 1e-12);
    }

    #[test]
    fn mismatched_tables() {
        let a = Arc::new(Enumeration::from_forward("a", vec![2, 1]).unwrap());
        let b = Arc::new(Enumeration::from_forward("b", vec![1, 3, 2]).unwrap());
        assert!(standard_family(&[a, b], StandardVariant::Plain).is_err());
    }

    #[test]
    fn products_and_powers() {
        let p = scale_product(&Scale::identity(), &Scale::constant(2.0));
        assert_relative_eq!(p.eval(5).unwrap().to_f64(), 10.0, max_relative = 1e-12);
        let r = scale_power(&Scale::identity(), 0.5).unwrap();
        assert_relative_eq!(r.eval(9).unwrap().to_f64(), 3.0, max_relative = 1e-12);
        let t = Scale::table([1.0, 2.0, 3.0].iter().map(|&x| LogValue::from_f64(x).unwrap()).collect());
        assert_relative_eq!(scale_product(&Scale::identity(), &t).eval(3).unwrap().to_f64(), 9.0, max_relative = 1e-12);
        assert!(scale_power(&Scale::identity(), -1.0).is_err());
    }
}
