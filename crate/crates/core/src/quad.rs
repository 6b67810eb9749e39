//! Composite Simpson quadrature with a Richardson error estimate.

use crate::scalar::Real;

/// Panel count used for revenue integrals.
pub const DEFAULT_PANELS: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral<F> {
    pub value: F,
    /// `|S(n) - S(n/2)| / 15`.
    pub error_estimate: F,
}

/// Composite Simpson rule with `panels` (rounded up to even) sub-intervals.
pub fn simpson<F: Real>(f: impl Fn(F) -> F, a: F, b: F, panels: usize) -> F {
    if b <= a {
        return F::zero();
    }
    let n = panels.max(2) + panels % 2;
    let h = (b - a) / F::lit(n as f64);
    let mut acc = f(a) + f(b);
    for i in 1..n {
        let x = a + h * F::lit(i as f64);
        let w = if i % 2 == 1 { F::lit(4.0) } else { F::lit(2.0) };
        acc = acc + w * f(x);
    }
    acc * h / F::lit(3.0)
}

/// Integrates `f` over `[a, b]`, splitting at `breaks` (kinks of the
/// integrand) so each piece is smooth. `panels` is the total budget.
pub fn integrate<F: Real>(f: impl Fn(F) -> F, a: F, b: F, breaks: &[F], panels: usize) -> Integral<F> {
    if b <= a {
        return Integral {
            value: F::zero(),
            error_estimate: F::zero(),
        };
    }
    let mut cuts = vec![a];
    cuts.extend(breaks.iter().copied().filter(|&x| x > a && x < b));
    cuts.push(b);
    cuts.sort_by(|x, y| x.partial_cmp(y).expect("finite breakpoints"));
    cuts.dedup();

    let width = b - a;
    let mut fine = F::zero();
    let mut coarse = F::zero();
    for pair in cuts.windows(2) {
        let (lo, hi) = (pair[0], pair[1]);
        let share = ((hi - lo) / width * F::lit(panels as f64)).to_f64().unwrap_or(2.0);
        let n = (share.ceil() as usize).max(4).div_ceil(4) * 4;
        fine = fine + simpson(&f, lo, hi, n);
        coarse = coarse + simpson(&f, lo, hi, n / 2);
    }
    Integral {
        value: fine,
        error_estimate: (fine - coarse).abs() / F::lit(15.0),
    }
}
