//! Weight distributions seen through their Laplace transform.
//!
//! A family is described by the transform `phi(r) = E[exp(-r w)]` of one
//! weight `w`, its first two derivatives, the mean `mu`, and the atom
//! `p0 = P(w = 0)`. Everything downstream (the limit law, the miss curves)
//! consumes only this interface, so custom families plug in by supplying the
//! same data.

use std::fmt;
use std::sync::Arc;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::Distribution;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::stream_rng;

type ScalarFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;
type SamplerFn = Arc<dyn Fn(&mut ChaCha8Rng) -> f64 + Send + Sync>;

/// Identifier of the family shape.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FamilyKind {
    Dirac,
    Gamma,
    Geometric,
    Poisson,
    Custom,
}

/// Data-driven family description, also the JSON wire format.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "params", rename_all = "snake_case")]
pub enum FamilyDescriptor {
    Dirac,
    Gamma { alpha: f64 },
    Geometric { p: f64 },
    Poisson { lambda: f64 },
    GammaMixture { components: Vec<GammaComponent> },
    Atomic { atoms: Vec<WeightAtom> },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GammaComponent {
    pub weight: f64,
    pub shape: f64,
    pub scale: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeightAtom {
    pub weight: f64,
    pub value: f64,
}

impl FamilyDescriptor {
    pub fn build(&self) -> Result<WeightFamily> {
        match self {
            FamilyDescriptor::Dirac => Ok(WeightFamily::dirac()),
            FamilyDescriptor::Gamma { alpha } => WeightFamily::gamma(*alpha),
            FamilyDescriptor::Geometric { p } => WeightFamily::geometric(*p),
            FamilyDescriptor::Poisson { lambda } => WeightFamily::poisson(*lambda),
            FamilyDescriptor::GammaMixture { components } => {
                WeightFamily::gamma_mixture(components.clone())
            }
            FamilyDescriptor::Atomic { atoms } => WeightFamily::atomic(atoms.clone()),
        }
    }

    /// Random finite mixture of gamma components, for randomized sweeps.
    pub fn random_gamma_mixture(rng: &mut ChaCha8Rng, max_components: usize) -> FamilyDescriptor {
        let count = rng.random_range(1..=max_components.max(1));
        let components = (0..count)
            .map(|_| GammaComponent {
                weight: -rng.random::<f64>().max(1e-12).ln(),
                shape: 10f64.powf(rng.random_range(-0.6..0.8)),
                scale: 10f64.powf(rng.random_range(-0.7..0.7)),
            })
            .collect();
        FamilyDescriptor::GammaMixture { components }
    }
}

/// Hand-built family: transform, derivatives, stats and a sampler.
///
/// Missing derivative evaluators fall back to central finite differences
/// (one-sided at `r = 0`).
pub struct CustomFamily {
    name: String,
    mu: f64,
    p0: f64,
    phi: ScalarFn,
    dphi: Option<ScalarFn>,
    d2phi: Option<ScalarFn>,
    inverse: Option<ScalarFn>,
    excess: Option<ScalarFn>,
    one_minus: Option<ScalarFn>,
    sampler: SamplerFn,
    descriptor: Option<FamilyDescriptor>,
}

impl fmt::Debug for CustomFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CustomFamily")
            .field("name", &self.name)
            .field("mu", &self.mu)
            .field("p0", &self.p0)
            .finish_non_exhaustive()
    }
}

/// Builder for [`CustomFamily`].
pub struct CustomFamilyBuilder {
    inner: CustomFamily,
}

impl CustomFamilyBuilder {
    pub fn new(
        name: impl Into<String>,
        mu: f64,
        p0: f64,
        phi: impl Fn(f64) -> f64 + Send + Sync + 'static,
        sampler: impl Fn(&mut ChaCha8Rng) -> f64 + Send + Sync + 'static,
    ) -> Self {
        CustomFamilyBuilder {
            inner: CustomFamily {
                name: name.into(),
                mu,
                p0,
                phi: Arc::new(phi),
                dphi: None,
                d2phi: None,
                inverse: None,
                excess: None,
                one_minus: None,
                sampler: Arc::new(sampler),
                descriptor: None,
            },
        }
    }

    pub fn dphi(mut self, f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        self.inner.dphi = Some(Arc::new(f));
        self
    }

    pub fn d2phi(mut self, f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        self.inner.d2phi = Some(Arc::new(f));
        self
    }

    /// Closed-form inverse of `phi`, if one is known.
    pub fn inverse(mut self, f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        self.inner.inverse = Some(Arc::new(f));
        self
    }

    /// Evaluator for `phi(r) - p0` with full relative precision.
    pub fn excess(mut self, f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        self.inner.excess = Some(Arc::new(f));
        self
    }

    /// Evaluator for `1 - phi(r)` with full relative precision near 0.
    pub fn one_minus_phi(mut self, f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        self.inner.one_minus = Some(Arc::new(f));
        self
    }

    fn descriptor(mut self, d: FamilyDescriptor) -> Self {
        self.inner.descriptor = Some(d);
        self
    }

    pub fn build(self) -> Result<WeightFamily> {
        let c = &self.inner;
        if !(c.mu.is_finite() && c.mu > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "custom family '{}': mean must be positive and finite, got {}",
                c.name, c.mu
            )));
        }
        if !(0.0..1.0).contains(&c.p0) {
            return Err(Error::InvalidParameter(format!(
                "custom family '{}': atom p0 must lie in [0, 1), got {}",
                c.name, c.p0
            )));
        }
        Ok(WeightFamily::Custom(Arc::new(self.inner)))
    }
}

/// A weight distribution with four classic shapes built in.
#[derive(Debug, Clone)]
pub enum WeightFamily {
    /// Unit point mass: every item equally popular.
    Dirac,
    /// Gamma with shape `alpha` and unit scale.
    Gamma {
        alpha: f64,
    },
    /// Geometric on {0, 1, 2, ...} with `P(w = k) = p (1-p)^k`.
    Geometric {
        p: f64,
    },
    /// Poisson with rate `lambda`.
    Poisson {
        lambda: f64,
    },
    Custom(Arc<CustomFamily>),
}

impl WeightFamily {
    pub fn dirac() -> Self {
        WeightFamily::Dirac
    }

    pub fn gamma(alpha: f64) -> Result<Self> {
        if !(alpha.is_finite() && alpha > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "gamma shape alpha must be positive and finite, got {alpha}"
            )));
        }
        Ok(WeightFamily::Gamma { alpha })
    }

    pub fn geometric(p: f64) -> Result<Self> {
        if !(p.is_finite() && 0.0 < p && p < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "geometric success probability p must lie in (0, 1), got {p}"
            )));
        }
        Ok(WeightFamily::Geometric { p })
    }

    pub fn poisson(lambda: f64) -> Result<Self> {
        if !(lambda.is_finite() && lambda > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "poisson rate lambda must be positive and finite, got {lambda}"
            )));
        }
        Ok(WeightFamily::Poisson { lambda })
    }

    /// Finite mixture of gamma distributions. Weights are normalized.
    pub fn gamma_mixture(components: Vec<GammaComponent>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::InvalidParameter(
                "gamma mixture needs at least one component".into(),
            ));
        }
        let total: f64 = components.iter().map(|c| c.weight).sum();
        for c in &components {
            if !(c.weight.is_finite() && c.weight > 0.0)
                || !(c.shape.is_finite() && c.shape > 0.0)
                || !(c.scale.is_finite() && c.scale > 0.0)
            {
                return Err(Error::InvalidParameter(format!(
                    "gamma mixture component must have positive weight/shape/scale, got {c:?}"
                )));
            }
        }
        let comps: Vec<GammaComponent> = components
            .iter()
            .map(|c| GammaComponent {
                weight: c.weight / total,
                ..*c
            })
            .collect();
        let mu: f64 = comps.iter().map(|c| c.weight * c.shape * c.scale).sum();

        let phi_comps = comps.clone();
        let dphi_comps = comps.clone();
        let d2phi_comps = comps.clone();
        let one_minus_comps = comps.clone();
        let sample_comps = comps.clone();
        CustomFamilyBuilder::new(
            format!("gamma_mixture(k={})", comps.len()),
            mu,
            0.0,
            move |r| {
                phi_comps
                    .iter()
                    .map(|c| c.weight * (1.0 + c.scale * r).powf(-c.shape))
                    .sum()
            },
            move |rng| {
                let c = pick_component(&sample_comps, rng.random());
                rand_distr::Gamma::new(c.shape, c.scale)
                    .expect("validated shape/scale")
                    .sample(rng)
            },
        )
        .dphi(move |r| {
            dphi_comps
                .iter()
                .map(|c| -c.weight * c.shape * c.scale * (1.0 + c.scale * r).powf(-c.shape - 1.0))
                .sum()
        })
        .d2phi(move |r| {
            d2phi_comps
                .iter()
                .map(|c| {
                    c.weight
                        * c.shape
                        * (c.shape + 1.0)
                        * c.scale
                        * c.scale
                        * (1.0 + c.scale * r).powf(-c.shape - 2.0)
                })
                .sum()
        })
        .one_minus_phi(move |r| {
            one_minus_comps
                .iter()
                .map(|c| c.weight * (-(-c.shape * (c.scale * r).ln_1p()).exp_m1()))
                .sum()
        })
        .descriptor(FamilyDescriptor::GammaMixture { components: comps })
        .build()
    }

    /// Finite discrete distribution over nonnegative weight values.
    /// Atoms at zero contribute to `p0`. Weights are normalized.
    pub fn atomic(atoms: Vec<WeightAtom>) -> Result<Self> {
        if atoms.is_empty() {
            return Err(Error::InvalidParameter(
                "atomic family needs at least one atom".into(),
            ));
        }
        for a in &atoms {
            if !(a.weight.is_finite() && a.weight > 0.0) || !(a.value.is_finite() && a.value >= 0.0)
            {
                return Err(Error::InvalidParameter(format!(
                    "atomic family needs positive weights and nonnegative values, got {a:?}"
                )));
            }
        }
        let total: f64 = atoms.iter().map(|a| a.weight).sum();
        let atoms: Vec<WeightAtom> = atoms
            .iter()
            .map(|a| WeightAtom {
                weight: a.weight / total,
                ..*a
            })
            .collect();
        let mu: f64 = atoms.iter().map(|a| a.weight * a.value).sum();
        let p0: f64 = atoms
            .iter()
            .filter(|a| a.value == 0.0)
            .map(|a| a.weight)
            .sum();
        if mu <= 0.0 {
            return Err(Error::InvalidParameter(
                "atomic family needs at least one strictly positive value".into(),
            ));
        }

        let phi_atoms = atoms.clone();
        let dphi_atoms = atoms.clone();
        let d2phi_atoms = atoms.clone();
        let excess_atoms: Vec<WeightAtom> =
            atoms.iter().copied().filter(|a| a.value > 0.0).collect();
        let one_minus_atoms = atoms.clone();
        let sample_atoms = atoms.clone();
        CustomFamilyBuilder::new(
            format!("atomic(k={})", atoms.len()),
            mu,
            p0,
            move |r| {
                phi_atoms
                    .iter()
                    .map(|a| a.weight * (-a.value * r).exp())
                    .sum()
            },
            move |rng| {
                let idx = pick_atom(&sample_atoms, rng.random());
                sample_atoms[idx].value
            },
        )
        .dphi(move |r| {
            dphi_atoms
                .iter()
                .map(|a| -a.weight * a.value * (-a.value * r).exp())
                .sum()
        })
        .d2phi(move |r| {
            d2phi_atoms
                .iter()
                .map(|a| a.weight * a.value * a.value * (-a.value * r).exp())
                .sum()
        })
        .excess(move |r| {
            excess_atoms
                .iter()
                .map(|a| a.weight * (-a.value * r).exp())
                .sum()
        })
        .one_minus_phi(move |r| {
            one_minus_atoms
                .iter()
                .map(|a| a.weight * (-(-a.value * r).exp_m1()))
                .sum()
        })
        .descriptor(FamilyDescriptor::Atomic { atoms })
        .build()
    }

    /// Build from a JSON descriptor, `{"kind": "...", "params": {...}}`.
    pub fn from_json(json: &str) -> Result<Self> {
        let descriptor: FamilyDescriptor = serde_json::from_str(json)?;
        descriptor.build()
    }

    pub fn kind(&self) -> FamilyKind {
        match self {
            WeightFamily::Dirac => FamilyKind::Dirac,
            WeightFamily::Gamma { .. } => FamilyKind::Gamma,
            WeightFamily::Geometric { .. } => FamilyKind::Geometric,
            WeightFamily::Poisson { .. } => FamilyKind::Poisson,
            WeightFamily::Custom(_) => FamilyKind::Custom,
        }
    }

    /// Wire-format descriptor, when the family is data-driven.
    pub fn descriptor(&self) -> Option<FamilyDescriptor> {
        match self {
            WeightFamily::Dirac => Some(FamilyDescriptor::Dirac),
            WeightFamily::Gamma { alpha } => Some(FamilyDescriptor::Gamma { alpha: *alpha }),
            WeightFamily::Geometric { p } => Some(FamilyDescriptor::Geometric { p: *p }),
            WeightFamily::Poisson { lambda } => Some(FamilyDescriptor::Poisson { lambda: *lambda }),
            WeightFamily::Custom(c) => c.descriptor.clone(),
        }
    }

    /// Mean weight `E[w]`.
    pub fn mu(&self) -> f64 {
        match self {
            WeightFamily::Dirac => 1.0,
            WeightFamily::Gamma { alpha } => *alpha,
            WeightFamily::Geometric { p } => (1.0 - p) / p,
            WeightFamily::Poisson { lambda } => *lambda,
            WeightFamily::Custom(c) => c.mu,
        }
    }

    /// Atom at zero, `P(w = 0)`.
    pub fn p0(&self) -> f64 {
        match self {
            WeightFamily::Dirac | WeightFamily::Gamma { .. } => 0.0,
            WeightFamily::Geometric { p } => *p,
            WeightFamily::Poisson { lambda } => (-lambda).exp(),
            WeightFamily::Custom(c) => c.p0,
        }
    }

    /// Declared `(mu, p0)` pair.
    pub fn stats(&self) -> (f64, f64) {
        (self.mu(), self.p0())
    }

    /// `phi(r) = E[exp(-r w)]` for `r >= 0`.
    pub fn phi(&self, r: f64) -> Result<f64> {
        self.check_r(r)?;
        Ok(self.phi_raw(r))
    }

    /// First derivative `phi'(r)`; nonpositive.
    pub fn phi_prime(&self, r: f64) -> Result<f64> {
        self.check_r(r)?;
        Ok(self.phi_prime_raw(r))
    }

    /// Second derivative `phi''(r)`; nonnegative.
    pub fn phi_second(&self, r: f64) -> Result<f64> {
        self.check_r(r)?;
        Ok(self.phi_second_raw(r))
    }

    /// `phi`, `phi'` or `phi''` selected by `order` in {0, 1, 2}.
    pub fn phi_eval(&self, r: f64, order: u8) -> Result<f64> {
        match order {
            0 => self.phi(r),
            1 => self.phi_prime(r),
            2 => self.phi_second(r),
            _ => Err(Error::Domain(format!(
                "derivative order must be 0, 1 or 2, got {order}"
            ))),
        }
    }

    fn check_r(&self, r: f64) -> Result<()> {
        if !(r >= 0.0) {
            return Err(Error::Domain(format!("phi is defined for r >= 0, got {r}")));
        }
        Ok(())
    }

    fn phi_raw(&self, r: f64) -> f64 {
        match self {
            WeightFamily::Dirac => (-r).exp(),
            WeightFamily::Gamma { alpha } => (1.0 + r).powf(-alpha),
            WeightFamily::Geometric { p } => p / (1.0 - (1.0 - p) * (-r).exp()),
            WeightFamily::Poisson { lambda } => (lambda * (-r).exp_m1()).exp(),
            WeightFamily::Custom(c) => (c.phi)(r),
        }
    }

    fn phi_prime_raw(&self, r: f64) -> f64 {
        match self {
            WeightFamily::Dirac => -(-r).exp(),
            WeightFamily::Gamma { alpha } => -alpha * (1.0 + r).powf(-alpha - 1.0),
            WeightFamily::Geometric { p } => {
                let q = 1.0 - p;
                let u = (-r).exp();
                let denom = 1.0 - q * u;
                -p * q * u / (denom * denom)
            }
            WeightFamily::Poisson { lambda } => {
                -lambda * (-r).exp() * (lambda * (-r).exp_m1()).exp()
            }
            WeightFamily::Custom(c) => match &c.dphi {
                Some(f) => f(r),
                None => fd_first(&*c.phi, r),
            },
        }
    }

    fn phi_second_raw(&self, r: f64) -> f64 {
        match self {
            WeightFamily::Dirac => (-r).exp(),
            WeightFamily::Gamma { alpha } => alpha * (alpha + 1.0) * (1.0 + r).powf(-alpha - 2.0),
            WeightFamily::Geometric { p } => {
                let q = 1.0 - p;
                let u = (-r).exp();
                let denom = 1.0 - q * u;
                p * q * u * (1.0 + q * u) / (denom * denom * denom)
            }
            WeightFamily::Poisson { lambda } => {
                let lu = lambda * (-r).exp();
                lu * (1.0 + lu) * (lambda * (-r).exp_m1()).exp()
            }
            WeightFamily::Custom(c) => match &c.d2phi {
                Some(f) => f(r),
                None => fd_second(&*c.phi, r),
            },
        }
    }

    /// `phi(r) - p0`, kept at full relative precision where possible.
    pub(crate) fn phi_excess(&self, r: f64) -> f64 {
        match self {
            WeightFamily::Dirac | WeightFamily::Gamma { .. } => self.phi_raw(r),
            WeightFamily::Geometric { p } => {
                let q = 1.0 - p;
                let u = (-r).exp();
                p * q * u / (1.0 - q * u)
            }
            WeightFamily::Poisson { lambda } => (-lambda).exp() * (lambda * (-r).exp()).exp_m1(),
            WeightFamily::Custom(c) => match &c.excess {
                Some(f) => f(r),
                None => (c.phi)(r) - c.p0,
            },
        }
    }

    /// `1 - phi(r)` without the catastrophic cancellation the plain
    /// subtraction suffers as `r -> 0`. Integrands raising this to negative
    /// powers rely on it staying strictly positive for `r > 0`.
    pub(crate) fn one_minus_phi(&self, r: f64) -> f64 {
        match self {
            WeightFamily::Dirac => -(-r).exp_m1(),
            WeightFamily::Gamma { alpha } => -(-alpha * r.ln_1p()).exp_m1(),
            WeightFamily::Geometric { p } => {
                let q = 1.0 - p;
                let u = (-r).exp();
                q * (-(-r).exp_m1()) / (1.0 - q * u)
            }
            WeightFamily::Poisson { lambda } => -(lambda * (-r).exp_m1()).exp_m1(),
            WeightFamily::Custom(c) => match &c.one_minus {
                Some(f) => f(r),
                None => 1.0 - (c.phi)(r),
            },
        }
    }

    /// Solve `phi(r) = y` for `r >= 0`, `y` in `(p0, 1]`.
    ///
    /// Uses the closed-form inverse for built-in families, otherwise
    /// bracketing bisection (bracket `[0, 1]` doubled until it encloses the
    /// root, then bisected to an `r`-width of 1e-12 or 200 iterations).
    pub fn phi_inverse(&self, y: f64) -> Result<f64> {
        let p0 = self.p0();
        if !(y > p0 && y <= 1.0) {
            return Err(Error::Domain(format!(
                "phi_inverse needs y in (p0, 1] = ({p0}, 1], got {y}"
            )));
        }
        if y >= 1.0 {
            // phi(0) = 1 for every family.
            return Ok(0.0);
        }
        let r = match self {
            WeightFamily::Dirac => -y.ln(),
            WeightFamily::Gamma { alpha } => y.powf(-1.0 / alpha) - 1.0,
            WeightFamily::Geometric { p } => {
                let q = 1.0 - p;
                (q * y / (y - p)).ln()
            }
            WeightFamily::Poisson { lambda } => -(1.0 + y.ln() / lambda).ln(),
            WeightFamily::Custom(c) => match &c.inverse {
                Some(f) => f(y),
                None => bisect_inverse(&*c.phi, y),
            },
        };
        // Round-off at the domain edges can push the closed forms negative.
        Ok(r.max(0.0))
    }

    /// `n` iid weights, reproducible from the seed (stream 0).
    pub fn sample_weights(&self, n: usize, seed: u64) -> Vec<f64> {
        let mut rng = stream_rng(seed, 0);
        (0..n).map(|_| self.sample_one(&mut rng)).collect()
    }

    /// One weight drawn from the given stream.
    pub fn sample_one(&self, rng: &mut ChaCha8Rng) -> f64 {
        match self {
            WeightFamily::Dirac => 1.0,
            WeightFamily::Gamma { alpha } => rand_distr::Gamma::new(*alpha, 1.0)
                .expect("validated shape")
                .sample(rng),
            WeightFamily::Geometric { p } => rand_distr::Geometric::new(*p)
                .expect("validated p")
                .sample(rng) as f64,
            WeightFamily::Poisson { lambda } => rand_distr::Poisson::new(*lambda)
                .expect("validated lambda")
                .sample(rng),
            WeightFamily::Custom(c) => (c.sampler)(rng),
        }
    }

    /// Truncation point for semi-infinite transform integrals: the smallest
    /// doubled `r` with both `phi(r) - p0 < eps` and `-phi'(r) < eps`.
    pub(crate) fn tail_cutoff(&self, eps: f64) -> Result<f64> {
        let mut r = 1.0f64;
        for _ in 0..1100 {
            if self.phi_excess(r) < eps && -self.phi_prime_raw(r) < eps {
                return Ok(r);
            }
            r *= 2.0;
            if !r.is_finite() {
                break;
            }
        }
        Err(Error::NonConvergence(format!(
            "transform tail of {self} does not fall below {eps}"
        )))
    }

    /// Check the declared invariants on a log grid and cross-check the
    /// derivative evaluators against finite differences.
    pub fn validate(&self, tol: f64) -> Result<ValidationReport> {
        if !(tol > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "validation tolerance must be positive, got {tol}"
            )));
        }
        Ok(validate_family(self, tol))
    }
}

impl fmt::Display for WeightFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WeightFamily::Dirac => write!(f, "dirac"),
            WeightFamily::Gamma { alpha } => write!(f, "gamma(alpha={alpha})"),
            WeightFamily::Geometric { p } => write!(f, "geometric(p={p})"),
            WeightFamily::Poisson { lambda } => write!(f, "poisson(lambda={lambda})"),
            WeightFamily::Custom(c) => write!(f, "{}", c.name),
        }
    }
}

fn pick_component(comps: &[GammaComponent], u: f64) -> &GammaComponent {
    let mut acc = 0.0;
    for c in comps {
        acc += c.weight;
        if u < acc {
            return c;
        }
    }
    comps.last().expect("nonempty")
}

fn pick_atom(atoms: &[WeightAtom], u: f64) -> usize {
    let mut acc = 0.0;
    for (i, a) in atoms.iter().enumerate() {
        acc += a.weight;
        if u < acc {
            return i;
        }
    }
    atoms.len() - 1
}

// Central differences with step h = 1e-5 (1 + r); one-sided at the left edge.
fn fd_first(phi: &(dyn Fn(f64) -> f64 + Send + Sync), r: f64) -> f64 {
    let h = 1e-5 * (1.0 + r);
    if r >= h {
        (phi(r + h) - phi(r - h)) / (2.0 * h)
    } else {
        (-3.0 * phi(r) + 4.0 * phi(r + h) - phi(r + 2.0 * h)) / (2.0 * h)
    }
}

fn fd_second(phi: &(dyn Fn(f64) -> f64 + Send + Sync), r: f64) -> f64 {
    let h = 1e-5 * (1.0 + r);
    if r >= h {
        (phi(r + h) - 2.0 * phi(r) + phi(r - h)) / (h * h)
    } else {
        (2.0 * phi(r) - 5.0 * phi(r + h) + 4.0 * phi(r + 2.0 * h) - phi(r + 3.0 * h)) / (h * h)
    }
}

fn bisect_inverse(phi: &(dyn Fn(f64) -> f64 + Send + Sync), y: f64) -> f64 {
    let mut lo = 0.0f64;
    let mut hi = 1.0f64;
    let mut guard = 0;
    while phi(hi) >= y && guard < 1100 {
        lo = hi;
        hi *= 2.0;
        guard += 1;
        if !hi.is_finite() {
            return lo;
        }
    }
    for _ in 0..200 {
        if hi - lo <= 1e-12 {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if phi(mid) >= y {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Outcome of one validation check.
#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    /// Grid point with the worst violation, when the check is grid-based.
    pub worst_r: Option<f64>,
    /// Magnitude of the worst violation.
    pub worst_error: Option<f64>,
}

/// Validation report for a [`WeightFamily`].
#[derive(Debug, Clone, Serialize)]
pub struct ValidationReport {
    pub family: String,
    pub tol: f64,
    pub checks: Vec<CheckResult>,
    pub passed: bool,
}

fn log_grid(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    let (llo, lhi) = (lo.ln(), hi.ln());
    (0..count)
        .map(|i| (llo + (lhi - llo) * i as f64 / (count - 1) as f64).exp())
        .collect()
}

fn validate_family(family: &WeightFamily, tol: f64) -> ValidationReport {
    let mut grid = vec![0.0];
    grid.extend(log_grid(1e-4, 50.0, 120));
    let mut checks = Vec::new();

    let phi0 = family.phi_raw(0.0);
    checks.push(CheckResult {
        name: "phi(0) equals 1".into(),
        passed: (phi0 - 1.0).abs() <= tol,
        worst_r: Some(0.0),
        worst_error: Some((phi0 - 1.0).abs()),
    });

    // Monotone decrease of the values along the grid.
    let values: Vec<f64> = grid.iter().map(|&r| family.phi_raw(r)).collect();
    let mut worst = f64::NEG_INFINITY;
    let mut worst_r = grid[0];
    for i in 1..grid.len() {
        let rise = values[i] - values[i - 1];
        if rise > worst {
            worst = rise;
            worst_r = grid[i];
        }
    }
    checks.push(CheckResult {
        name: "phi nonincreasing".into(),
        passed: worst <= tol,
        worst_r: Some(worst_r),
        worst_error: Some(worst.max(0.0)),
    });

    // Chord convexity over consecutive grid triples.
    let mut worst = f64::NEG_INFINITY;
    let mut worst_r = grid[0];
    for i in 1..grid.len() - 1 {
        let (a, b, c) = (grid[i - 1], grid[i], grid[i + 1]);
        let chord = values[i - 1] + (values[i + 1] - values[i - 1]) * (b - a) / (c - a);
        let bulge = values[i] - chord;
        if bulge > worst {
            worst = bulge;
            worst_r = b;
        }
    }
    checks.push(CheckResult {
        name: "phi convex".into(),
        passed: worst <= tol,
        worst_r: Some(worst_r),
        worst_error: Some(worst.max(0.0)),
    });

    // Derivative signs.
    let mut worst = f64::NEG_INFINITY;
    let mut worst_r = grid[0];
    for &r in &grid {
        let d = family.phi_prime_raw(r);
        if d > worst {
            worst = d;
            worst_r = r;
        }
    }
    checks.push(CheckResult {
        name: "phi' nonpositive".into(),
        passed: worst <= tol,
        worst_r: Some(worst_r),
        worst_error: Some(worst.max(0.0)),
    });

    let mut worst = f64::NEG_INFINITY;
    let mut worst_r = grid[0];
    for &r in &grid {
        let d = -family.phi_second_raw(r);
        if d > worst {
            worst = d;
            worst_r = r;
        }
    }
    checks.push(CheckResult {
        name: "phi'' nonnegative".into(),
        passed: worst <= tol,
        worst_r: Some(worst_r),
        worst_error: Some(worst.max(0.0)),
    });

    // Mean against the slope at zero.
    let mean_err = (-family.phi_prime_raw(0.0) - family.mu()).abs();
    checks.push(CheckResult {
        name: "-phi'(0) equals mu".into(),
        passed: mean_err <= tol * family.mu().max(1.0),
        worst_r: Some(0.0),
        worst_error: Some(mean_err),
    });

    // Tail must approach the declared atom.
    let mut r = 1.0f64;
    let mut tail_err = (family.phi_raw(r) - family.p0()).abs();
    let mut reached = tail_err <= tol;
    for _ in 0..1100 {
        if reached || !r.is_finite() {
            break;
        }
        r *= 2.0;
        tail_err = (family.phi_raw(r) - family.p0()).abs();
        reached = tail_err <= tol;
    }
    checks.push(CheckResult {
        name: "phi tail reaches p0".into(),
        passed: reached,
        worst_r: Some(r),
        worst_error: Some(tail_err),
    });

    // Finite differences against the derivative evaluators. Restricted to
    // moderate r: beyond that the second difference of a nearly flat tail is
    // pure rounding noise.
    let fd_grid: Vec<f64> = grid.iter().copied().filter(|&r| r <= 30.0).collect();
    let mut worst = 0.0f64;
    let mut worst_r = fd_grid[0];
    for &r in &fd_grid {
        let closed = family.phi_prime_raw(r);
        let fd = match family {
            WeightFamily::Custom(c) => fd_first(&*c.phi, r),
            _ => {
                let fam = family.clone();
                fd_first(&move |x: f64| fam.phi_raw(x), r)
            }
        };
        let err = (fd - closed).abs() / (1.0 + closed.abs());
        if err > worst {
            worst = err;
            worst_r = r;
        }
    }
    checks.push(CheckResult {
        name: "finite differences match phi'".into(),
        passed: worst <= tol.max(1e-5),
        worst_r: Some(worst_r),
        worst_error: Some(worst),
    });

    let mut worst = 0.0f64;
    let mut worst_r = fd_grid[0];
    for &r in &fd_grid {
        let closed = family.phi_second_raw(r);
        let fd = match family {
            WeightFamily::Custom(c) => fd_second(&*c.phi, r),
            _ => {
                let fam = family.clone();
                fd_second(&move |x: f64| fam.phi_raw(x), r)
            }
        };
        let err = (fd - closed).abs() / (1.0 + closed.abs());
        if err > worst {
            worst = err;
            worst_r = r;
        }
    }
    checks.push(CheckResult {
        name: "finite differences match phi''".into(),
        passed: worst <= tol.max(1e-5),
        worst_r: Some(worst_r),
        worst_error: Some(worst),
    });

    let passed = checks.iter().all(|c| c.passed);
    ValidationReport {
        family: family.to_string(),
        tol,
        checks,
        passed,
    }
}
