//! Initial-value laws on `[0, 1]` and their single-round Myerson quantities.

use rand::Rng;

use crate::error::{domain, Error, Result};
use crate::quad::{self, Integral};
use crate::scalar::Real;

/// Grid size for the global monopoly-price search.
pub const MONOPOLY_GRID: usize = 10_000;
const GOLDEN_TOL: f64 = 1e-8;

/// Law `F` of the buyer's initial value `V0`, supported on `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub enum ValueDistribution<F> {
    Uniform,
    /// `F(x) = x^k`.
    Power { k: F },
    PointMass { v: F },
    /// Piecewise-linear CDF through `(xs[i], cdf[i])`.
    PiecewiseTable { xs: Vec<F>, cdf: Vec<F> },
}

impl<F: Real> ValueDistribution<F> {
    pub fn uniform() -> Self {
        Self::Uniform
    }

    pub fn power(k: F) -> Result<Self> {
        if !(k > F::zero()) || !k.is_finite() {
            return Err(domain("k", k.to_f64().unwrap_or(f64::NAN), "(0, inf)"));
        }
        Ok(Self::Power { k })
    }

    pub fn point_mass(v: F) -> Result<Self> {
        check_unit("v", v)?;
        Ok(Self::PointMass { v })
    }

    /// Breakpoints must start at `(0, 0)`, end at `(1, 1)`, be strictly
    /// increasing in `x` and nondecreasing in CDF.
    pub fn piecewise(xs: Vec<F>, cdf: Vec<F>) -> Result<Self> {
        if xs.len() != cdf.len() || xs.len() < 2 {
            return Err(Error::InvalidParameter(
                "table needs at least two (x, cdf) pairs of equal length".into(),
            ));
        }
        let (first, last) = (0, xs.len() - 1);
        if xs[first] != F::zero() || xs[last] != F::one() {
            return Err(Error::InvalidParameter("table must span x = 0 to x = 1".into()));
        }
        if cdf[first] != F::zero() || cdf[last] != F::one() {
            return Err(Error::InvalidParameter("table CDF must run from 0 to 1".into()));
        }
        if xs.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::InvalidParameter("table breakpoints must be strictly increasing".into()));
        }
        if cdf.windows(2).any(|w| w[1] < w[0]) {
            return Err(Error::InvalidParameter("table CDF must be nondecreasing".into()));
        }
        Ok(Self::PiecewiseTable { xs, cdf })
    }

    /// `F(x)`; exact for the analytic variants, linear interpolation for tables.
    pub fn cdf(&self, x: F) -> Result<F> {
        check_unit("x", x)?;
        Ok(self.cdf_unchecked(x))
    }

    fn cdf_unchecked(&self, x: F) -> F {
        match self {
            Self::Uniform => x,
            Self::Power { k } => x.powf(*k),
            Self::PointMass { v } => {
                if x >= *v {
                    F::one()
                } else {
                    F::zero()
                }
            }
            Self::PiecewiseTable { xs, cdf } => {
                let i = segment(xs, x);
                let t = (x - xs[i]) / (xs[i + 1] - xs[i]);
                cdf[i] + t * (cdf[i + 1] - cdf[i])
            }
        }
    }

    /// `P(V0 >= p)`, i.e. `1 - F(p-)`. Total over the real line.
    pub fn survival(&self, p: F) -> F {
        if p <= F::zero() {
            return F::one();
        }
        if p > F::one() {
            return F::zero();
        }
        match self {
            Self::PointMass { v } => {
                if p <= *v {
                    F::one()
                } else {
                    F::zero()
                }
            }
            _ => F::one() - self.cdf_unchecked(p),
        }
    }

    /// Density, `None` for the point mass. Tables use the slope of the
    /// segment `[x_i, x_{i+1})` containing `x`.
    pub fn pdf(&self, x: F) -> Result<Option<F>> {
        check_unit("x", x)?;
        Ok(match self {
            Self::Uniform => Some(F::one()),
            Self::Power { k } => Some(*k * x.powf(*k - F::one())),
            Self::PointMass { .. } => None,
            Self::PiecewiseTable { xs, cdf } => {
                let i = segment(xs, x);
                Some((cdf[i + 1] - cdf[i]) / (xs[i + 1] - xs[i]))
            }
        })
    }

    /// Inverse-CDF draw.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> F {
        match self {
            Self::PointMass { v } => *v,
            _ => self.quantile(F::unit_sample(rng)),
        }
    }

    /// Smallest `x` with `F(x) >= u`.
    pub fn quantile(&self, u: F) -> F {
        let u = u.max(F::zero()).min(F::one());
        match self {
            Self::Uniform => u,
            Self::Power { k } => u.powf(F::one() / *k),
            Self::PointMass { v } => *v,
            Self::PiecewiseTable { xs, cdf } => {
                // First segment whose upper CDF value exceeds u; flat segments
                // are skipped because their upper value equals the lower one.
                let j = cdf.partition_point(|&c| c <= u);
                if j == 0 {
                    return F::zero();
                }
                if j >= cdf.len() {
                    return F::one();
                }
                let i = j - 1;
                let t = (u - cdf[i]) / (cdf[j] - cdf[i]);
                xs[i] + t * (xs[j] - xs[i])
            }
        }
    }

    pub fn mean(&self) -> F {
        match self {
            Self::Uniform => F::lit(0.5),
            Self::Power { k } => *k / (*k + F::one()),
            Self::PointMass { v } => *v,
            Self::PiecewiseTable { xs, cdf } => xs
                .windows(2)
                .zip(cdf.windows(2))
                .map(|(x, c)| (x[1] - x[0]) * (F::one() - (c[0] + c[1]) / F::lit(2.0)))
                .fold(F::zero(), |a, b| a + b),
        }
    }

    /// `phi(x) = x - (1 - F(x)) / f(x)`.
    pub fn virtual_value(&self, x: F) -> Result<F> {
        let density = self.pdf(x)?;
        match density {
            Some(f) if f > F::zero() && f.is_finite() => {
                Ok(x - (F::one() - self.cdf_unchecked(x)) / f)
            }
            _ => Err(Error::UndefinedDensity {
                x: x.to_f64().unwrap_or(f64::NAN),
            }),
        }
    }

    /// Argmax of `p (1 - F(p))` over `[0, 1]`: global grid search, then
    /// golden-section refinement around the best grid point. Ties go to the
    /// smaller price.
    pub fn monopoly_price(&self) -> F {
        if let Self::PointMass { v } = self {
            return *v;
        }
        let revenue = |p: F| p * self.survival(p);
        let n = MONOPOLY_GRID;
        let step = F::one() / F::lit(n as f64);
        let mut best_i = 0;
        let mut best = F::zero();
        for i in 0..=n {
            let r = revenue(F::lit(i as f64) * step);
            if r > best {
                best = r;
                best_i = i;
            }
        }
        let lo = F::lit(best_i.saturating_sub(1) as f64) * step;
        let hi = (F::lit((best_i + 1) as f64) * step).min(F::one());
        let refined = golden_max(revenue, lo, hi);
        let grid_p = F::lit(best_i as f64) * step;
        if revenue(refined) > best {
            refined
        } else {
            grid_p
        }
    }

    pub fn myerson_revenue(&self) -> F {
        let p = self.monopoly_price();
        p * self.survival(p)
    }

    /// `E[g(V0); lo <= V0 <= hi]` by composite Simpson in the value (or, for
    /// `k < 1` power laws with unbounded density, in the quantile).
    pub fn expect(&self, g: impl Fn(F) -> F, lo: F, hi: F, panels: usize) -> Integral<F> {
        let lo = lo.max(F::zero());
        let hi = hi.min(F::one());
        match self {
            Self::PointMass { v } => Integral {
                value: if *v >= lo && *v <= hi { g(*v) } else { F::zero() },
                error_estimate: F::zero(),
            },
            Self::Power { k } if *k < F::one() => {
                let (ulo, uhi) = (self.cdf_unchecked(lo), self.cdf_unchecked(hi));
                quad::integrate(|u| g(self.quantile(u)), ulo, uhi, &[], panels)
            }
            Self::PiecewiseTable { xs, cdf } => {
                let mut value = F::zero();
                let mut error_estimate = F::zero();
                for i in 0..xs.len() - 1 {
                    let (a, b) = (xs[i].max(lo), xs[i + 1].min(hi));
                    if a >= b {
                        continue;
                    }
                    let slope = (cdf[i + 1] - cdf[i]) / (xs[i + 1] - xs[i]);
                    let share = (b - a) * F::lit(panels as f64);
                    let piece = quad::integrate(&g, a, b, &[], share.to_usize().unwrap_or(2).max(4));
                    value = value + slope * piece.value;
                    error_estimate = error_estimate + slope * piece.error_estimate;
                }
                Integral { value, error_estimate }
            }
            _ => {
                let pdf = |x: F| self.pdf(x).ok().flatten().unwrap_or(F::zero());
                quad::integrate(|x| g(x) * pdf(x), lo, hi, &[], panels)
            }
        }
    }

    /// Kinks of the density, for callers that integrate against it.
    pub fn breakpoints(&self) -> Vec<F> {
        match self {
            Self::PiecewiseTable { xs, .. } => xs.clone(),
            _ => Vec::new(),
        }
    }
}

fn check_unit<F: Real>(what: &'static str, x: F) -> Result<()> {
    if x >= F::zero() && x <= F::one() {
        Ok(())
    } else {
        Err(domain(what, x.to_f64().unwrap_or(f64::NAN), "[0, 1]"))
    }
}

/// Index `i` of the segment `[xs[i], xs[i+1])` holding `x`; the last
/// segment is closed.
fn segment<F: Real>(xs: &[F], x: F) -> usize {
    let j = xs.partition_point(|&b| b <= x);
    j.saturating_sub(1).min(xs.len() - 2)
}

fn golden_max<F: Real>(f: impl Fn(F) -> F, mut a: F, mut b: F) -> F {
    let inv_phi = F::lit((5f64.sqrt() - 1.0) / 2.0);
    let tol = F::lit(GOLDEN_TOL);
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    // bounded so f32 terminates once the bracket hits its resolution
    for _ in 0..200 {
        if b - a <= tol {
            break;
        }
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    (a + b) / F::lit(2.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    type D = ValueDistribution<f64>;

    fn builtins() -> Vec<D> {
        vec![
            D::uniform(),
            D::power(2.0).unwrap(),
            D::power(0.5).unwrap(),
            D::piecewise(vec![0.0, 0.3, 0.6, 1.0], vec![0.0, 0.1, 0.7, 1.0]).unwrap(),
        ]
    }

    #[test]
    fn cdf_examples() {
        assert_abs_diff_eq!(D::uniform().cdf(0.3).unwrap(), 0.3);
        assert_abs_diff_eq!(D::power(2.0).unwrap().cdf(0.5).unwrap(), 0.25);
        assert_eq!(D::point_mass(0.7).unwrap().cdf(0.5).unwrap(), 0.0);
        assert!(matches!(D::uniform().cdf(1.2), Err(Error::Domain { .. })));
        assert!(matches!(D::uniform().cdf(-0.1), Err(Error::Domain { .. })));
    }

    #[test]
    fn table_interpolates_and_validates() {
        let d = D::piecewise(vec![0.0, 0.5, 1.0], vec![0.0, 0.8, 1.0]).unwrap();
        assert_abs_diff_eq!(d.cdf(0.25).unwrap(), 0.4);
        assert_abs_diff_eq!(d.pdf(0.5).unwrap().unwrap(), 0.4);
        assert!(D::piecewise(vec![0.0, 0.5, 0.5, 1.0], vec![0.0, 0.2, 0.4, 1.0]).is_err());
        assert!(D::piecewise(vec![0.0, 1.0], vec![0.0, 0.9]).is_err());
        assert!(D::piecewise(vec![0.1, 1.0], vec![0.0, 1.0]).is_err());
        assert!(D::piecewise(vec![0.0, 0.5, 1.0], vec![0.0, 0.6, 0.5]).is_err());
    }

    #[test]
    fn constructors_reject_bad_parameters() {
        assert!(D::power(0.0).is_err());
        assert!(D::power(f64::INFINITY).is_err());
        assert!(D::point_mass(1.5).is_err());
    }

    #[test]
    fn cdf_is_monotone_with_correct_ends() {
        for d in builtins() {
            let mut prev = 0.0;
            for i in 0..=1000 {
                let f = d.cdf(i as f64 / 1000.0).unwrap();
                assert!(f >= prev - 1e-15);
                prev = f;
            }
            assert_abs_diff_eq!(d.cdf(1.0).unwrap(), 1.0);
            assert_abs_diff_eq!(d.cdf(0.0).unwrap(), 0.0);
        }
    }

    #[test]
    fn pdf_integrates_to_one() {
        for d in builtins() {
            let total = d.expect(|_| 1.0, 0.0, 1.0, 10_000).value;
            assert!((total - 1.0).abs() < 1e-6, "{d:?}: {total}");
            for i in 0..=100 {
                assert!(d.pdf(i as f64 / 100.0).unwrap().unwrap() >= 0.0);
            }
        }
    }

    #[test]
    fn point_mass_always_samples_its_atom() {
        let d = D::point_mass(0.7).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert!((0..1000).all(|_| d.sample(&mut rng) == 0.7));
    }

    #[test]
    fn sample_means() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let n = 100_000;
        let u: f64 = (0..n).map(|_| D::uniform().sample(&mut rng)).sum::<f64>() / n as f64;
        assert!((u - 0.5).abs() < 0.005, "{u}");
        let p2 = D::power(2.0).unwrap();
        let m: f64 = (0..n).map(|_| p2.sample(&mut rng)).sum::<f64>() / n as f64;
        // 1 - integral of x^2 over [0, 1]
        assert!((m - 2.0 / 3.0).abs() < 0.005, "{m}");
    }

    #[test]
    fn empirical_cdf_matches_within_ks_001() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for d in builtins() {
            let mut xs: Vec<f64> = (0..100_000).map(|_| d.sample(&mut rng)).collect();
            xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
            let n = xs.len() as f64;
            let ks = xs
                .iter()
                .enumerate()
                .map(|(i, &x)| {
                    let f = d.cdf(x).unwrap();
                    (f - i as f64 / n).abs().max((f - (i + 1) as f64 / n).abs())
                })
                .fold(0.0, f64::max);
            assert!(ks < 0.01, "{d:?}: KS {ks}");
        }
    }

    #[test]
    fn means_match_integral_of_survival() {
        for d in builtins() {
            let by_survival = quad::integrate(|x| d.survival(x), 0.0, 1.0, &d.breakpoints(), 10_000).value;
            assert!((d.mean() - by_survival).abs() < 1e-6, "{d:?}");
        }
    }

    #[test]
    fn virtual_value_examples() {
        let u = D::uniform();
        // central difference of F, then the formula
        let h = 1e-6;
        let f = (u.cdf(0.75 + h).unwrap() - u.cdf(0.75 - h).unwrap()) / (2.0 * h);
        let by_hand = 0.75 - (1.0 - 0.75) / f;
        assert_abs_diff_eq!(u.virtual_value(0.75).unwrap(), by_hand, epsilon = 1e-6);
        assert_abs_diff_eq!(u.virtual_value(0.75).unwrap(), 0.5);
        assert_abs_diff_eq!(u.virtual_value(0.5).unwrap(), 0.0);
        assert_abs_diff_eq!(D::power(2.0).unwrap().virtual_value(1.0).unwrap(), 1.0);
        assert!(matches!(
            D::point_mass(0.4).unwrap().virtual_value(0.4),
            Err(Error::UndefinedDensity { .. })
        ));
        assert!(matches!(
            D::power(2.0).unwrap().virtual_value(0.0),
            Err(Error::UndefinedDensity { .. })
        ));
    }

    #[test]
    fn virtual_value_nondecreasing_for_regular_laws() {
        for d in [D::uniform(), D::power(1.0).unwrap(), D::power(2.0).unwrap(), D::power(3.5).unwrap()] {
            let phis: Vec<f64> = (1..=100).map(|i| d.virtual_value(i as f64 / 100.0).unwrap()).collect();
            assert!(phis.windows(2).all(|w| w[1] >= w[0] - 1e-12), "{d:?}");
        }
    }

    #[test]
    fn monopoly_examples() {
        assert_abs_diff_eq!(D::uniform().monopoly_price(), 0.5, epsilon = 1e-8);
        let p2 = D::power(2.0).unwrap();
        // grid max of p(1 - p^2)
        let grid = (0..=1_000_000)
            .map(|i| i as f64 / 1e6)
            .max_by(|a, b| (a * (1.0 - a * a)).partial_cmp(&(b * (1.0 - b * b))).unwrap())
            .unwrap();
        assert_abs_diff_eq!(p2.monopoly_price(), grid, epsilon = 1e-6);
        assert_abs_diff_eq!(p2.monopoly_price(), 1.0 / 3f64.sqrt(), epsilon = 1e-7);
        assert_eq!(D::point_mass(0.4).unwrap().monopoly_price(), 0.4);

        assert_abs_diff_eq!(D::uniform().myerson_revenue(), 0.25, epsilon = 1e-12);
        assert_abs_diff_eq!(p2.myerson_revenue(), 2.0 / (3.0 * 3f64.sqrt()), epsilon = 1e-12);
        assert_abs_diff_eq!(D::point_mass(0.4).unwrap().myerson_revenue(), 0.4);
    }

    #[test]
    fn monopoly_price_beats_every_grid_point() {
        for d in builtins().into_iter().chain([D::point_mass(0.35).unwrap()]) {
            let mu = d.monopoly_price();
            let best = mu * d.survival(mu);
            assert_abs_diff_eq!(d.myerson_revenue(), best);
            for i in 0..=MONOPOLY_GRID {
                let p = i as f64 / MONOPOLY_GRID as f64;
                assert!(p * d.survival(p) <= best + 1e-6, "{d:?} at {p}");
            }
            assert!(best <= d.mean() + 1e-12);
        }
    }

    #[test]
    fn virtual_value_vanishes_at_monopoly_price() {
        for d in [D::uniform(), D::power(1.0).unwrap(), D::power(2.0).unwrap(), D::power(3.5).unwrap()] {
            let mu = d.monopoly_price();
            assert!(d.virtual_value(mu).unwrap().abs() < 1e-4, "{d:?}");
        }
    }

    #[test]
    fn generic_over_f32() {
        let d = ValueDistribution::<f32>::power(2.0).unwrap();
        assert!((d.monopoly_price() - 0.57735).abs() < 1e-3);
    }
}
