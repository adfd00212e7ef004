//! Gauss-Legendre rules and composite panel integration.

use std::ops::{Add, Mul, Sub};

use num_complex::Complex;
use num_traits::Zero;

use crate::scalar::{from_usize, lit, Scalar};

/// Values a quadrature can accumulate: real or complex scalars.
pub trait Accumulate<T>:
    Copy + Zero + Add<Output = Self> + Sub<Output = Self> + Mul<T, Output = Self>
{
    fn magnitude(&self) -> T;
}

impl<T: Scalar> Accumulate<T> for T {
    fn magnitude(&self) -> T {
        self.abs()
    }
}

impl<T: Scalar> Accumulate<T> for Complex<T> {
    fn magnitude(&self) -> T {
        self.norm()
    }
}

/// Gauss-Legendre rule on `[-1, 1]`.
#[derive(Clone, Debug)]
pub struct GaussLegendre<T> {
    pub nodes: Vec<T>,
    pub weights: Vec<T>,
}

impl<T: Scalar> GaussLegendre<T> {
    /// `n`-point rule. Nodes come from Newton iteration on `P_n` in `f64`.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "Gauss-Legendre needs at least one node");
        let mut nodes = vec![T::zero(); n];
        let mut weights = vec![T::zero(); n];
        let nf = n as f64;
        for i in 0..n.div_ceil(2) {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre(n, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = lit(-x);
            nodes[n - 1 - i] = lit(x);
            weights[i] = lit(w);
            weights[n - 1 - i] = lit(w);
        }
        Self { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Nodes and weights mapped onto `[a, b]`.
    pub fn mapped(&self, a: T, b: T) -> impl Iterator<Item = (T, T)> + '_ {
        let half = (b - a) * lit(0.5);
        let mid = (a + b) * lit(0.5);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(move |(&x, &w)| (mid + half * x, half * w))
    }

    pub fn integrate<V, F>(&self, a: T, b: T, mut f: F) -> V
    where
        V: Zero + Add<Output = V> + Mul<T, Output = V>,
        F: FnMut(T) -> V,
    {
        self.mapped(a, b).fold(V::zero(), |acc, (x, w)| acc + f(x) * w)
    }

    /// Sum of the rule over consecutive panels `[breaks[k], breaks[k+1]]`.
    pub fn composite<V, F>(&self, breaks: &[T], mut f: F) -> V
    where
        V: Zero + Add<Output = V> + Mul<T, Output = V>,
        F: FnMut(T) -> V,
    {
        breaks
            .windows(2)
            .fold(V::zero(), |acc, w| acc + self.integrate(w[0], w[1], &mut f))
    }
}

/// `(P_n(x), P_n'(x))` by the three-term recurrence.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Node of a rule on `(0, 1)` that keeps both `u` and `1 - u` accurate.
#[derive(Clone, Copy, Debug)]
pub struct UnitNode<T> {
    pub u: T,
    pub one_minus_u: T,
    pub weight: T,
}

impl<T: Scalar> UnitNode<T> {
    /// `ln u`, accurate also when `u` is within rounding of 1.
    pub fn ln_u(&self) -> T {
        if self.u < lit(0.5) {
            self.u.ln()
        } else {
            (-self.one_minus_u).ln_1p()
        }
    }
}

/// Composite rule on `(0, 1)` with dyadic panels graded toward both ends.
///
/// Each half of the interval is split into `levels` panels
/// `[2^{-k-1}, 2^{-k}]` measured from its endpoint plus one final panel
/// touching the endpoint, each carrying `per_panel` Gauss-Legendre nodes.
/// Integrands that behave like `v^{i gamma}` or `ln v` near an endpoint
/// are smooth in `ln v`, which this grading resolves.
pub fn graded_unit_rule<T: Scalar>(levels: usize, per_panel: usize) -> Vec<UnitNode<T>> {
    let gl = GaussLegendre::<T>::new(per_panel);
    let half = lit::<T>(0.5);
    let mut breaks = vec![T::zero()];
    let mut edge = half;
    let mut inner = Vec::with_capacity(levels + 1);
    for _ in 0..levels {
        edge = edge * half;
        inner.push(edge);
    }
    breaks.extend(inner.iter().rev().copied());
    breaks.push(half);
    let mut out = Vec::with_capacity(2 * breaks.len() * per_panel);
    for w in breaks.windows(2) {
        for (v, wt) in gl.mapped(w[0], w[1]) {
            // toward 0: v is u itself
            out.push(UnitNode {
                u: v,
                one_minus_u: T::one() - v,
                weight: wt,
            });
            // toward 1: v is 1 - u
            out.push(UnitNode {
                u: T::one() - v,
                one_minus_u: v,
                weight: wt,
            });
        }
    }
    out
}

/// Breakpoints splitting `[a, b]` (with `0 < a < b`) into panels that are
/// geometric in the radius and no wider than `max_width`.
pub fn log_panels<T: Scalar>(a: T, b: T, per_decade: usize, max_width: Option<T>) -> Vec<T> {
    let decades = (b / a).log10().max(T::zero());
    let count = (decades * from_usize::<T>(per_decade))
        .ceil()
        .to_usize()
        .unwrap_or(1)
        .max(1);
    let ratio = (b / a).powf(T::one() / from_usize::<T>(count));
    let mut breaks = vec![a];
    let mut x = a;
    for k in 1..=count {
        let next = if k == count { b } else { x * ratio };
        let width = next - x;
        let pieces = match max_width {
            Some(wmax) if wmax > T::zero() && width > wmax => {
                (width / wmax).ceil().to_usize().unwrap_or(1).max(1)
            }
            _ => 1,
        };
        for j in 1..=pieces {
            breaks.push(if j == pieces {
                next
            } else {
                x + width * from_usize::<T>(j) / from_usize::<T>(pieces)
            });
        }
        x = next;
    }
    breaks
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_sum_to_two_and_polynomials_are_exact() {
        for n in [1, 2, 5, 16, 33] {
            let gl = GaussLegendre::<f64>::new(n);
            let s: f64 = gl.weights.iter().sum();
            assert!((s - 2.0).abs() < 1e-14, "n={n}");
            let deg = 2 * n - 1;
            let exact = if deg % 2 == 0 { 2.0 / (deg as f64 + 1.0) } else { 0.0 };
            let got = gl.integrate(-1.0, 1.0, |x| x.powi(deg as i32));
            assert!((got - exact).abs() < 1e-13);
            let got = gl.integrate(0.0, 1.0, |x| x.powi(deg as i32 - 1));
            assert!((got - 1.0 / deg as f64).abs() < 1e-13);
        }
    }

    #[test]
    fn graded_rule_integrates_endpoint_oscillation() {
        // int_0^1 v^{i g} dv = 1 / (1 + i g)
        let rule = graded_unit_rule::<f64>(50, 16);
        let g = 0.7;
        let got = rule.iter().fold(Complex::new(0.0, 0.0), |acc, n| {
            acc + Complex::new(0.0, g * n.one_minus_u.ln()).exp() * n.weight
        });
        let exact = Complex::new(1.0, 0.0) / Complex::new(1.0, g);
        assert!((got - exact).norm() < 1e-12);
        let mass: f64 = rule.iter().map(|n| n.weight).sum();
        assert!((mass - 1.0).abs() < 1e-14);
    }

    #[test]
    fn ln_u_is_accurate_near_one() {
        let n = UnitNode {
            u: 1.0f64 - 1e-20,
            one_minus_u: 1e-20,
            weight: 0.0,
        };
        assert!((n.ln_u() + 1e-20).abs() < 1e-34);
    }

    #[test]
    fn log_panels_respect_width() {
        let b = log_panels(1e-3, 1e3, 4, Some(10.0));
        assert_eq!(b.first(), Some(&1e-3));
        assert_eq!(b.last(), Some(&1e3));
        assert!(b.windows(2).all(|w| w[1] > w[0] && w[1] - w[0] <= 10.0 + 1e-9));
    }
}
