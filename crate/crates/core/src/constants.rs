//! Sharp constants of martingale inequalities used as thresholds.

use crate::error::{Error, Result};
use crate::scalar::{lit, to_f64, Scalar};

fn check_p<T: Scalar>(p: T) -> Result<()> {
    if !(p > T::one() && p.is_finite()) {
        return Err(Error::InvalidExponent(to_f64(p)));
    }
    Ok(())
}

/// `p* = max(p, p/(p-1))`.
pub fn p_star<T: Scalar>(p: T) -> Result<T> {
    check_p(p)?;
    Ok(p.max(p / (p - T::one())))
}

/// Burkholder's constant `p* - 1`.
pub fn burkholder_constant<T: Scalar>(p: T) -> Result<T> {
    Ok(p_star(p)? - T::one())
}

/// Terms of the three-term expansion of Choi's constant
/// `c_p ≈ p/2 + (1/2) log((1+e^{-2})/2) + α₂/p`.
#[derive(Clone, Debug, PartialEq)]
pub struct ChoiApprox<T> {
    pub leading: T,
    pub constant: T,
    pub alpha2: T,
    pub correction: T,
    pub value: T,
    /// Always true: the expansion is asymptotic in `p`.
    pub asymptotic: bool,
}

/// `α₂ = [log((1+e^{-2})/2)]^2 + (1/2) log((1+e^{-2})/2) - 2 (e^{-2}/(1+e^{-2}))^2`.
pub fn choi_alpha2<T: Scalar>() -> T {
    let e2 = (-T::one() - T::one()).exp();
    let l = ((T::one() + e2) / lit(2.0)).ln();
    let r = e2 / (T::one() + e2);
    l * l + l / lit(2.0) - r * r * lit(2.0)
}

pub fn choi_constant_approx<T: Scalar>(p: T) -> Result<ChoiApprox<T>> {
    check_p(p)?;
    let e2 = (-T::one() - T::one()).exp();
    let leading = p / lit(2.0);
    let constant = ((T::one() + e2) / lit(2.0)).ln() / lit(2.0);
    let alpha2 = choi_alpha2::<T>();
    let correction = alpha2 / p;
    Ok(ChoiApprox {
        leading,
        constant,
        alpha2,
        correction,
        value: leading + constant + correction,
        asymptotic: true,
    })
}

/// Which closed form, if any, pins down `C_{p,b,B}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IntervalCase {
    /// `[-a, a]`: `C = a (p* - 1)`.
    Symmetric,
    /// `[0, a]`: `C = a c_p`, reported through Choi's expansion.
    OneSided,
    /// No closed form known; only the sandwich bounds.
    Open,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CpbBBounds<T> {
    pub lower: T,
    pub upper: T,
    pub case: IntervalCase,
    /// Closed-form value when known; approximate for [`IntervalCase::OneSided`].
    pub value: Option<T>,
}

/// Sandwich `max((B-b)/2 (p*-1), max(|B|,|b|)) <= C_{p,b,B} <= max(B,|b|)(p*-1)`.
pub fn cpbb_bounds<T: Scalar>(p: T, b: T, big_b: T) -> Result<CpbBBounds<T>> {
    check_p(p)?;
    if !(b < big_b) || !b.is_finite() || !big_b.is_finite() {
        return Err(Error::InvalidInterval {
            b: to_f64(b),
            big_b: to_f64(big_b),
        });
    }
    let k = burkholder_constant(p)?;
    let mut lower = ((big_b - b) / lit(2.0) * k).max(big_b.abs().max(b.abs()));
    let mut upper = big_b.max(b.abs()) * k;
    let (case, value) = if b == -big_b {
        lower = big_b * k;
        upper = lower;
        (IntervalCase::Symmetric, Some(lower))
    } else if b == T::zero() {
        (IntervalCase::OneSided, Some(big_b * choi_constant_approx(p)?.value))
    } else {
        (IntervalCase::Open, None)
    };
    Ok(CpbBBounds {
        lower,
        upper,
        case,
        value,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConstantReport<T> {
    pub p: T,
    pub p_star: T,
    pub burkholder: T,
    pub choi: ChoiApprox<T>,
    pub interval: Option<(T, T, CpbBBounds<T>)>,
}

pub fn constant_report<T: Scalar>(p: T, interval: Option<(T, T)>) -> Result<ConstantReport<T>> {
    Ok(ConstantReport {
        p,
        p_star: p_star(p)?,
        burkholder: burkholder_constant(p)?,
        choi: choi_constant_approx(p)?,
        interval: interval
            .map(|(b, big_b)| cpbb_bounds(p, b, big_b).map(|r| (b, big_b, r)))
            .transpose()?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn burkholder_values() {
        for (p, c) in [(1.5f64, 2.0), (2.0, 1.0), (3.0, 2.0), (4.0, 3.0)] {
            assert!((burkholder_constant(p).unwrap() - c).abs() < 1e-15);
        }
        assert!(burkholder_constant(1.0).is_err());
    }

    #[test]
    fn sandwich_cases() {
        let r = cpbb_bounds(3.0, -1.0, 1.0).unwrap();
        assert_eq!((r.lower, r.upper, r.case), (2.0, 2.0, IntervalCase::Symmetric));
        let r = cpbb_bounds(3.0, 0.0, 1.0).unwrap();
        assert_eq!(r.case, IntervalCase::OneSided);
        assert!(r.lower <= r.upper);
        let r = cpbb_bounds(3.0f64, 1.0, 2.0).unwrap();
        assert_eq!((r.case, r.value), (IntervalCase::Open, None));
        assert!((r.lower - 2.0).abs() < 1e-15 && (r.upper - 4.0).abs() < 1e-15);
        assert!(cpbb_bounds(3.0, 1.0, 1.0).is_err());
    }
}
