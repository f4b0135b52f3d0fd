//! Stochastic-averaging reduction of fast-slow systems
//! `dx = f1(x) dt + eps^(-rho) f2(x) y_{t/eps} dt` driven by fast CAM noise
//! into slow SDEs `dX = f1(X) dt + eps^(gamma*-rho) Sigma f2(X) (*) dL` with
//! alpha-stable noise in the Marcus interpretation, plus simulators for the
//! full and reduced versions of the three sample systems.

use crate::cam::{self, CamParams};
use crate::error::{Error, Result};
use crate::stable::{self, StableParams};
use crate::traj::Trajectory;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

/// Drift of the slow variable.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub enum SlowDrift {
    /// `f1(x) = -mu x`.
    Linear { mu: f64 },
    /// `f1(x) = -(mu x + x^3)`.
    Cubic { mu: f64 },
    /// `f1(x) = c - x`, relaxation toward `c > 0`.
    Relaxation { c: f64 },
}

impl SlowDrift {
    pub fn eval(&self, x: f64) -> f64 {
        match *self {
            SlowDrift::Linear { mu } => -mu * x,
            SlowDrift::Cubic { mu } => -(mu * x + x * x * x),
            SlowDrift::Relaxation { c } => c - x,
        }
    }

    /// Magnitude of `f1'(x)`, used to pick stable explicit substeps.
    fn stiffness(&self, x: f64) -> f64 {
        match *self {
            SlowDrift::Linear { mu } => mu.abs(),
            SlowDrift::Cubic { mu } => mu.abs() + 3.0 * x * x,
            SlowDrift::Relaxation { .. } => 1.0,
        }
    }
}

/// Noise-coupling function `f2`.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub enum Coupling {
    /// `f2(x) = zeta`.
    Constant { zeta: f64 },
    /// `f2(x) = zeta x`.
    Proportional { zeta: f64 },
}

impl Coupling {
    pub fn eval(&self, x: f64) -> f64 {
        match *self {
            Coupling::Constant { zeta } => zeta,
            Coupling::Proportional { zeta } => zeta * x,
        }
    }

    pub fn is_constant(&self) -> bool {
        matches!(self, Coupling::Constant { .. })
    }
}

/// Open interval of validity for the slow variable.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct Domain {
    pub lo: f64,
    pub hi: f64,
}

impl Domain {
    pub fn all() -> Self {
        Domain { lo: f64::NEG_INFINITY, hi: f64::INFINITY }
    }

    pub fn positive() -> Self {
        Domain { lo: 0.0, hi: f64::INFINITY }
    }

    pub fn contains(&self, x: f64) -> bool {
        x > self.lo && x < self.hi && x.is_finite()
    }
}

/// The slow half of the fast-slow system
/// `dx = f1(x) dt + eps^(-rho) f2(x) y_{t/eps} dt`.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct SlowSystem {
    pub drift: SlowDrift,
    pub coupling: Coupling,
    /// Timescale exponent of the forcing; the reduction is free of `eps`
    /// when `rho = gamma*`.
    pub rho: f64,
    pub domain: Domain,
}

impl SlowSystem {
    pub fn linear(mu: f64, zeta: f64, rho: f64) -> Self {
        SlowSystem {
            drift: SlowDrift::Linear { mu },
            coupling: Coupling::Constant { zeta },
            rho,
            domain: Domain::all(),
        }
    }

    pub fn cubic(mu: f64, zeta: f64, rho: f64) -> Self {
        SlowSystem {
            drift: SlowDrift::Cubic { mu },
            coupling: Coupling::Constant { zeta },
            rho,
            domain: Domain::all(),
        }
    }

    /// `dx = (c - x) dt + eps^(-rho) zeta x y dt` on `(0, inf)`.
    pub fn bilinear(c: f64, zeta: f64, rho: f64) -> Self {
        SlowSystem {
            drift: SlowDrift::Relaxation { c },
            coupling: Coupling::Proportional { zeta },
            rho,
            domain: Domain::positive(),
        }
    }
}

/// How the stochastic term of the reduced SDE is to be read.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Interpretation {
    Marcus,
    /// Constant `sigma f2` makes the Marcus term plain additive.
    ItoEquivalent,
    /// Gaussian driving noise reduces Marcus to Stratonovich.
    Stratonovich,
}

/// The reduced slow SDE `dX = f1(X) dt + sigma f2(X) (*) dL^(alpha*, beta*)`
/// with `sigma = eps^(gamma*-rho) Sigma` folded into `noise.sigma`.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct ReducedSystem {
    pub drift: SlowDrift,
    pub coupling: Coupling,
    pub domain: Domain,
    pub noise: StableParams,
    pub interpretation: Interpretation,
}

/// The variable change `eta = U(x)` with `U'(x) = 1/f2(x)` that turns the
/// state-dependent coupling into an additive one, together with the
/// transformed drift `f_tilde(eta) = f1(U^-1(eta)) / f2(U^-1(eta))`.
#[derive(Debug, Clone, Copy)]
pub struct Transform {
    coupling: Coupling,
    drift: SlowDrift,
}

impl Transform {
    pub fn u(&self, x: f64) -> f64 {
        match self.coupling {
            Coupling::Constant { zeta } => x / zeta,
            // reference point x_ref = 1
            Coupling::Proportional { zeta } => x.ln() / zeta,
        }
    }

    pub fn u_inverse(&self, eta: f64) -> f64 {
        match self.coupling {
            Coupling::Constant { zeta } => zeta * eta,
            Coupling::Proportional { zeta } => (zeta * eta).exp(),
        }
    }

    pub fn f_tilde(&self, eta: f64) -> f64 {
        let x = self.u_inverse(eta);
        self.drift.eval(x) / self.coupling.eval(x)
    }
}

/// Builds the variable change for a slow system. Fails when `f2` vanishes
/// somewhere on the domain.
pub fn transform(sys: &SlowSystem) -> Result<Transform> {
    match sys.coupling {
        Coupling::Constant { zeta } if zeta == 0.0 => Err(Error::InvalidParameter(
            "coupling f2 = 0 admits no averaging transform".into(),
        )),
        Coupling::Proportional { zeta } if zeta == 0.0 || sys.domain.lo < 0.0 => {
            Err(Error::InvalidParameter(
                "proportional coupling vanishes at x = 0 inside the domain".into(),
            ))
        }
        _ => Ok(Transform { coupling: sys.coupling, drift: sys.drift }),
    }
}

/// Builds the reduced SDE for a slow system forced by CAM noise with
/// estimated amplitude `sigma_big` at timescale separation `eps`.
pub fn reduce(sys: &SlowSystem, p: &CamParams, sigma_big: f64, eps: f64) -> Result<ReducedSystem> {
    transform(sys)?;
    let d = cam::derive(p)?;
    if !(sigma_big.is_finite() && sigma_big > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "noise amplitude must be positive, got {sigma_big}"
        )));
    }
    let scale = eps.powf(d.gamma_star - sys.rho) * sigma_big;
    let noise = StableParams::new(d.alpha_star, d.beta_star, scale)?;
    let interpretation = if sys.coupling.is_constant() {
        Interpretation::ItoEquivalent
    } else if noise.is_gaussian() {
        Interpretation::Stratonovich
    } else {
        Interpretation::Marcus
    };
    Ok(ReducedSystem {
        drift: sys.drift,
        coupling: sys.coupling,
        domain: sys.domain,
        noise,
        interpretation,
    })
}

/// Applies one Marcus jump: transports `x_before` along the flow
/// `d lambda / ds = sigma f2(lambda) jump` over `s` in `[0, 1]`.
///
/// Closed forms for the constant (additive) and proportional (exponential)
/// couplings; rejects jumps whose flow leaves the domain.
pub fn marcus_increment(
    coupling: &Coupling,
    sigma: f64,
    x_before: f64,
    jump: f64,
    domain: &Domain,
) -> Result<f64> {
    if jump == 0.0 {
        return Ok(x_before);
    }
    let x_after = match *coupling {
        Coupling::Constant { zeta } => x_before + sigma * zeta * jump,
        Coupling::Proportional { zeta } => exp_flow(x_before, sigma * zeta * jump),
    };
    if !domain.contains(x_after) {
        return Err(Error::DomainExit(format!(
            "Marcus jump {jump} takes {x_before} to {x_after}, outside ({}, {})",
            domain.lo, domain.hi
        )));
    }
    Ok(x_after)
}

/// Marcus flow by classical RK4 with adaptive substeps, for couplings with
/// no closed-form flow. The substep count grows with the total transported
/// log-scale so stiff jumps stay accurate.
pub fn marcus_flow_rk4<F: Fn(f64) -> f64>(
    f2: F,
    sigma: f64,
    x_before: f64,
    jump: f64,
    domain: &Domain,
) -> Result<f64> {
    if jump == 0.0 {
        return Ok(x_before);
    }
    let rhs = |lambda: f64| sigma * f2(lambda) * jump;
    let mut lambda = x_before;
    let mut s = 0.0;
    let mut steps = 0usize;
    while s < 1.0 {
        // keep the relative motion per substep small; the flow can grow
        // exponentially along s
        let rate = rhs(lambda).abs() / lambda.abs().max(1.0);
        let mut h = (0.02 / rate.max(1e-12)).min(1.0 - s).min(1.0 / 16.0);
        if h <= 0.0 || !h.is_finite() {
            h = 1.0 - s;
        }
        let k1 = rhs(lambda);
        let k2 = rhs(lambda + 0.5 * h * k1);
        let k3 = rhs(lambda + 0.5 * h * k2);
        let k4 = rhs(lambda + h * k3);
        lambda += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        s += h;
        steps += 1;
        if !domain.contains(lambda) {
            return Err(Error::DomainExit(format!(
                "Marcus flow left ({}, {}) at {lambda}",
                domain.lo, domain.hi
            )));
        }
        if steps > 2_000_000 {
            return Err(Error::DomainExit(
                "Marcus flow needed too many substeps; jump rejected".into(),
            ));
        }
    }
    Ok(lambda)
}

/// The exact flow `x exp(a)` of a proportional coupling, saturated in log
/// space: the flow never leaves `(0, inf)` in finite time, but extreme
/// heavy-tailed bursts would otherwise under- or overflow the double.
fn exp_flow(x: f64, a: f64) -> f64 {
    (x.ln() + a).clamp(-700.0, 700.0).exp()
}

/// Heun (explicit trapezoid) drift update with substeps chosen from the
/// local stiffness, so the cubic drift stays stable after large jumps.
fn drift_step(drift: &SlowDrift, x: f64, dt: f64) -> f64 {
    let n_sub = ((dt * drift.stiffness(x) / 0.2).ceil() as usize).clamp(1, 1_000_000);
    let h = dt / n_sub as f64;
    let mut x = x;
    for _ in 0..n_sub {
        let f0 = drift.eval(x);
        let pred = x + h * f0;
        x += 0.5 * h * (f0 + drift.eval(pred));
    }
    x
}

/// Default blow-up bound for both simulators.
pub const DEFAULT_BLOW_UP: f64 = 1e9;

/// Simulates the reduced SDE: per step a Heun drift update, then one Marcus
/// jump with a stable increment of scale `noise.sigma dt^(1/alpha)`.
///
/// A domain exit halts with an error; exceeding `blow_up` truncates the
/// trajectory and flags it.
pub fn simulate_reduced<R: Rng + ?Sized>(
    rsys: &ReducedSystem,
    x0: f64,
    dt: f64,
    n_steps: usize,
    blow_up: f64,
    rng: &mut R,
) -> Result<Trajectory> {
    if !rsys.domain.contains(x0) {
        return Err(Error::InvalidParameter(format!(
            "x0 = {x0} outside the domain ({}, {})",
            rsys.domain.lo, rsys.domain.hi
        )));
    }
    let mut values = Vec::with_capacity(n_steps + 1);
    let mut x = x0;
    values.push(x);
    let mut truncated = false;
    for _ in 0..n_steps {
        x = drift_step(&rsys.drift, x, dt);
        let jump = stable::sample_increment(&rsys.noise, dt, rng)?;
        // noise scale is folded into the law, so the flow runs at sigma = 1
        x = marcus_increment(&rsys.coupling, 1.0, x, jump, &rsys.domain)?;
        if x.abs() > blow_up {
            truncated = true;
            break;
        }
        values.push(x);
    }
    let mut traj = Trajectory::new(0.0, dt, values);
    if truncated {
        traj.truncated = true;
        traj.warnings.push(format!("|x| exceeded blow-up bound {blow_up}; halted early"));
    }
    Ok(traj)
}

/// Co-integrates the full fast-slow system. The fast CAM path advances with
/// the weak second-order scheme at a substep `<= eps/10`; its forcing enters
/// the slow variable through the trapezoid of `y` over the slow step, scaled
/// by `eps^(-rho) f2(x)`, with a Heun corrector on both drift and coupling.
///
/// The fast path starts from its stationary regime (internal burn-in).
pub fn simulate_full<R: Rng + ?Sized>(
    sys: &SlowSystem,
    p: &CamParams,
    eps: f64,
    x0: f64,
    dt_slow: f64,
    n_steps: usize,
    blow_up: f64,
    rng: &mut R,
) -> Result<Trajectory> {
    if !sys.domain.contains(x0) {
        return Err(Error::InvalidParameter(format!(
            "x0 = {x0} outside the domain ({}, {})",
            sys.domain.lo, sys.domain.hi
        )));
    }
    let n_sub = ((dt_slow / (eps / 10.0)).ceil() as usize).max(1);
    let dt_fast = dt_slow / n_sub as f64;
    let fast = cam::fast_params(p, eps);
    let sq = dt_fast.sqrt();
    let force_scale = eps.powf(-sys.rho);

    let mut y = 0.0;
    for _ in 0..cam::burn_in_steps(p, eps, dt_fast) {
        let dw1 = sq * rng.sample::<f64, _>(StandardNormal);
        let dw2 = sq * rng.sample::<f64, _>(StandardNormal);
        y = cam::weak_step(&fast, y, dt_fast, dw1, dw2, (dw1 * dw1 - dt_fast) / sq);
    }

    let mut values = Vec::with_capacity(n_steps + 1);
    let mut x = x0;
    values.push(x);
    let mut truncated = false;
    'outer: for _ in 0..n_steps {
        // integral of y over the slow step by trapezoid on the fast grid
        let mut forcing = 0.0;
        for _ in 0..n_sub {
            let prev = y;
            let dw1 = sq * rng.sample::<f64, _>(StandardNormal);
            let dw2 = sq * rng.sample::<f64, _>(StandardNormal);
            y = cam::weak_step(&fast, y, dt_fast, dw1, dw2, (dw1 * dw1 - dt_fast) / sq);
            forcing += 0.5 * (prev + y) * dt_fast;
        }
        forcing *= force_scale;

        // drift-coupling-drift splitting: the substepped drift halves stay
        // stable under the stiff cubic term after a heavy-tailed burst, and
        // the exact coupling flow keeps proportional couplings positive
        x = drift_step(&sys.drift, x, 0.5 * dt_slow);
        x = match sys.coupling {
            Coupling::Constant { zeta } => x + zeta * forcing,
            Coupling::Proportional { zeta } => exp_flow(x, zeta * forcing),
        };
        x = drift_step(&sys.drift, x, 0.5 * dt_slow);
        if !x.is_finite() || x.abs() > blow_up || !sys.domain.contains(x) {
            truncated = true;
            break 'outer;
        }
        values.push(x);
    }
    let mut traj = Trajectory::new(0.0, dt_slow, values);
    if truncated {
        traj.truncated = true;
        traj.warnings.push(format!(
            "slow variable left the domain or exceeded {blow_up}; halted early"
        ));
    }
    Ok(traj)
}

/// Default slow step: resolves the fast timescale comfortably and the slow
/// relaxation time `tau_x` generously.
pub fn default_dt_slow(eps: f64, tau_x: f64) -> f64 {
    (eps * 10.0).min(tau_x / 100.0)
}
