//! The limiting per-item search-cost distribution.
//!
//! As the catalog grows, the stationary search cost divided by the catalog
//! size converges to a continuous random variable `S` supported on
//! `[0, 1 - p0]` with density
//!
//! ```text
//! f(x) = -(1/mu) * phi''(phi^{-1}(1 - x)) / phi'(phi^{-1}(1 - x))
//! ```
//!
//! The CDF has the exact antiderivative `F(x) = 1 + phi'(phi^{-1}(1 - x))/mu`,
//! so no quadrature is needed for it. Moments and the Laplace transform of `S`
//! are one-dimensional integrals against `phi''`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::quad::{self, QuadOptions};
use crate::weights::WeightFamily;

/// Density values above this are reported as the infinity sentinel.
const DENSITY_CLAMP: f64 = 1e12;

/// Exact expressions available for the built-in families.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum ClosedForm {
    /// Dirac weights: uniform on [0, 1].
    Uniform,
    /// Gamma weights: Beta(1, 1 + 1/alpha).
    Beta { alpha: f64 },
    /// Geometric weights: linear density on [0, 1 - p].
    GeometricPoly { p: f64 },
    /// Poisson weights: logarithmic density on [0, 1 - e^{-lambda}].
    PoissonLog { lambda: f64 },
}

impl ClosedForm {
    fn for_family(family: &WeightFamily) -> Option<ClosedForm> {
        match family {
            WeightFamily::Dirac => Some(ClosedForm::Uniform),
            WeightFamily::Gamma { alpha } => Some(ClosedForm::Beta { alpha: *alpha }),
            WeightFamily::Geometric { p } => Some(ClosedForm::GeometricPoly { p: *p }),
            WeightFamily::Poisson { lambda } => Some(ClosedForm::PoissonLog { lambda: *lambda }),
            WeightFamily::Custom(_) => None,
        }
    }

    fn density(&self, x: f64) -> f64 {
        match *self {
            ClosedForm::Uniform => 1.0,
            ClosedForm::Beta { alpha } => (1.0 + 1.0 / alpha) * (1.0 - x).powf(1.0 / alpha),
            ClosedForm::GeometricPoly { p } => (2.0 * (1.0 - x) - p) / (1.0 - p),
            ClosedForm::PoissonLog { lambda } => ((1.0 - x).ln() + lambda + 1.0) / lambda,
        }
    }

    fn cdf(&self, x: f64) -> f64 {
        match *self {
            ClosedForm::Uniform => x,
            ClosedForm::Beta { alpha } => 1.0 - (1.0 - x).powf(1.0 + 1.0 / alpha),
            ClosedForm::GeometricPoly { p } => x * (2.0 - p - x) / (1.0 - p),
            ClosedForm::PoissonLog { lambda } => x - (1.0 - x) * (1.0 - x).ln() / lambda,
        }
    }
}

/// Both evaluation routes for one moment.
#[derive(Debug, Clone, Copy)]
pub struct MomentRoutes {
    /// Integral of `y^q f(y)` over the support (default route).
    pub change_of_variable: f64,
    /// Integral of `(1 - phi(t))^q phi''(t) / mu` over the transform domain.
    pub transform_domain: f64,
}

/// Limiting search-cost distribution for a weight family.
#[derive(Debug, Clone)]
pub struct LimitLaw {
    family: WeightFamily,
    support_end: f64,
    closed_form: Option<ClosedForm>,
}

impl LimitLaw {
    pub fn new(family: WeightFamily) -> Self {
        let support_end = 1.0 - family.p0();
        let closed_form = ClosedForm::for_family(&family);
        LimitLaw {
            family,
            support_end,
            closed_form,
        }
    }

    pub fn family(&self) -> &WeightFamily {
        &self.family
    }

    /// Upper end of the support, `1 - p0`.
    pub fn support_end(&self) -> f64 {
        self.support_end
    }

    pub fn closed_form(&self) -> Option<ClosedForm> {
        self.closed_form
    }

    /// Density `f(x)`; zero outside `[0, 1 - p0]`. At the right endpoint the
    /// one-sided limit is reported, which may be the infinity sentinel for
    /// families whose density diverges there.
    pub fn density(&self, x: f64) -> f64 {
        if !(0.0 <= x && x <= self.support_end) {
            return 0.0;
        }
        match self.closed_form {
            Some(cf) => cf.density(x).max(0.0),
            None => self.density_generic(x),
        }
    }

    /// Density through `phi_inverse` and the transform derivatives, ignoring
    /// any closed form.
    pub fn density_generic(&self, x: f64) -> f64 {
        if !(0.0 <= x && x <= self.support_end) {
            return 0.0;
        }
        let p0 = self.family.p0();
        let mut y = 1.0 - x;
        if y <= p0 {
            // One-sided limit at the right endpoint.
            y = (p0 + 1e-14).min(1.0);
        }
        let r = match self.family.phi_inverse(y) {
            Ok(r) => r,
            Err(_) => return 0.0,
        };
        let num = self.family.phi_second(r).unwrap_or(f64::NAN);
        let den = self.family.phi_prime(r).unwrap_or(f64::NAN);
        let value = -num / (self.family.mu() * den);
        if value.is_nan() || value > DENSITY_CLAMP {
            f64::INFINITY
        } else {
            value.max(0.0)
        }
    }

    /// CDF `F(x)`: 0 below the support, 1 at and above `1 - p0`.
    pub fn cdf(&self, x: f64) -> f64 {
        if x < 0.0 {
            return 0.0;
        }
        if x >= self.support_end {
            return 1.0;
        }
        match self.closed_form {
            Some(cf) => cf.cdf(x).clamp(0.0, 1.0),
            None => self.cdf_generic(x),
        }
    }

    /// CDF through the exact antiderivative `1 + phi'(phi^{-1}(1 - x))/mu`,
    /// ignoring any closed form.
    pub fn cdf_generic(&self, x: f64) -> f64 {
        if x < 0.0 {
            return 0.0;
        }
        if x >= self.support_end {
            return 1.0;
        }
        let y = (1.0 - x).clamp(self.family.p0(), 1.0);
        let r = match self.family.phi_inverse(y) {
            Ok(r) => r,
            Err(_) => return 1.0,
        };
        let d = self.family.phi_prime(r).unwrap_or(f64::NAN);
        (1.0 + d / self.family.mu()).clamp(0.0, 1.0)
    }

    /// Smallest `x` with `F(x) >= u`, by bisection to 1e-10.
    pub fn quantile(&self, u: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&u) {
            return Err(Error::Domain(format!(
                "quantile level must lie in [0, 1], got {u}"
            )));
        }
        if u <= 0.0 {
            return Ok(0.0);
        }
        if u >= 1.0 {
            return Ok(self.support_end);
        }
        let mut lo = 0.0;
        let mut hi = self.support_end;
        while hi - lo > 1e-10 {
            let mid = 0.5 * (lo + hi);
            if self.cdf(mid) >= u {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        Ok(hi)
    }

    /// Survival function `P(S >= x)`, evaluated from the transform slope so
    /// it cross-checks the CDF rather than being defined by it.
    pub fn survival(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return 1.0;
        }
        if x >= self.support_end {
            return 0.0;
        }
        let y = (1.0 - x).clamp(self.family.p0(), 1.0);
        let r = match self.family.phi_inverse(y) {
            Ok(r) => r,
            Err(_) => return 0.0,
        };
        let d = self.family.phi_prime(r).unwrap_or(f64::NAN);
        (-d / self.family.mu()).clamp(0.0, 1.0)
    }

    /// `E[S^q]` for `q > -1`, via the change-of-variable route, cross-checked
    /// against the transform-domain route. The two must agree or the call
    /// fails with a non-convergence diagnostic.
    pub fn moment(&self, q: f64) -> Result<f64> {
        let routes = self.moment_routes(q)?;
        let gap = (routes.change_of_variable - routes.transform_domain).abs();
        let tol = 1e-8 * (1.0 + routes.change_of_variable.abs());
        if gap > tol {
            return Err(Error::NonConvergence(format!(
                "moment routes disagree at q={q}: change-of-variable {} vs transform {} (gap {gap:.3e})",
                routes.change_of_variable, routes.transform_domain
            )));
        }
        Ok(routes.change_of_variable)
    }

    /// Both moment routes, without the agreement gate.
    pub fn moment_routes(&self, q: f64) -> Result<MomentRoutes> {
        if !(q > -1.0) {
            return Err(Error::Domain(format!(
                "moment order must satisfy q > -1 (the density is positive at 0, \
                 so E[S^q] diverges for q <= -1), got {q}"
            )));
        }
        let opt = QuadOptions::default();

        let cov =
            quad::integrate(|y| y.powf(q) * self.density(y), 0.0, self.support_end, &opt)?.value;

        let cutoff = self.family.tail_cutoff(1e-12)?;
        let mu = self.family.mu();
        let transform = quad::integrate(
            |t| {
                let base = self.family.one_minus_phi(t).max(0.0);
                base.powf(q) * self.family.phi_second_for_integrand(t)
            },
            0.0,
            cutoff,
            &opt,
        )?
        .value
            / mu;

        Ok(MomentRoutes {
            change_of_variable: cov,
            transform_domain: transform,
        })
    }

    /// `E[S]`.
    pub fn mean(&self) -> Result<f64> {
        self.moment(1.0)
    }

    /// `Var[S]`.
    pub fn variance(&self) -> Result<f64> {
        let m1 = self.moment(1.0)?;
        let m2 = self.moment(2.0)?;
        Ok(m2 - m1 * m1)
    }

    /// Laplace transform `E[exp(-s S)]` for `s >= 0`, as the transform-domain
    /// integral `(1/mu) ∫ phi''(t) exp(-(1 - phi(t)) s) dt`.
    pub fn laplace(&self, s: f64) -> Result<f64> {
        if !(s >= 0.0) {
            return Err(Error::Domain(format!(
                "laplace argument must satisfy s >= 0, got {s}"
            )));
        }
        let cutoff = self.family.tail_cutoff(1e-12)?;
        let mu = self.family.mu();
        let value = quad::integrate(
            |t| self.family.phi_second_for_integrand(t) * (-self.family.one_minus_phi(t) * s).exp(),
            0.0,
            cutoff,
            &QuadOptions::default(),
        )?
        .value
            / mu;
        Ok(value)
    }
}

impl WeightFamily {
    // Integrand-side accessor; quadrature nodes are interior to [0, cutoff]
    // by construction, so the domain check cannot fire.
    fn phi_second_for_integrand(&self, r: f64) -> f64 {
        self.phi_second(r).unwrap_or(f64::NAN)
    }
}
