//! Linear 0-1 knapsack by canonical duality.
//!
//! The primal problem is
//!
//! ```text
//! min  -c^T rho   s.t.  rho in {0,1}^n,  a^T rho <= V_c
//! ```
//!
//! Its canonical dual lives on `zeta = (sigma, varsigma)` with `sigma > 0` and
//! `varsigma >= 0`. For the beta-perturbed dual each `sigma_e` solves a cubic in
//! `theta_e = varsigma a_e - c_e`, `varsigma` has a closed form given `sigma`, and
//! the primal point follows as `rho_e = (1 - theta_e / sigma_e) / 2`.

mod brute;
mod cubic;

pub use brute::{brute_force_knapsack, MAX_BRUTE_FORCE};
pub use cubic::{sigma_cubic_residual, solve_sigma_cubic, DEGENERATE_THETA};

use crate::error::{Error, Result};

/// Relative slack allowed when testing `a^T rho <= V_c`.
pub const VOLUME_RTOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct KnapsackInstance {
    costs: Vec<f64>,
    volumes: Vec<f64>,
    budget: f64,
}

impl KnapsackInstance {
    pub fn new(costs: Vec<f64>, volumes: Vec<f64>, budget: f64) -> Result<Self> {
        if costs.is_empty() {
            return Err(Error::InvalidInput("empty knapsack instance".into()));
        }
        if costs.len() != volumes.len() {
            return Err(Error::DimensionMismatch {
                expected: costs.len(),
                actual: volumes.len(),
            });
        }
        if let Some(c) = costs.iter().find(|c| !(**c >= 0.0 && c.is_finite())) {
            return Err(Error::InvalidInput(format!("cost {c} is not finite and non-negative")));
        }
        if let Some(a) = volumes.iter().find(|a| !(**a > 0.0 && a.is_finite())) {
            return Err(Error::InvalidInput(format!("volume {a} is not finite and positive")));
        }
        if !budget.is_finite() {
            return Err(Error::InvalidInput(format!("budget {budget} is not finite")));
        }
        Ok(Self {
            costs,
            volumes,
            budget,
        })
    }

    pub fn len(&self) -> usize {
        self.costs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.costs.is_empty()
    }

    pub fn costs(&self) -> &[f64] {
        &self.costs
    }

    pub fn volumes(&self) -> &[f64] {
        &self.volumes
    }

    pub fn budget(&self) -> f64 {
        self.budget
    }

    pub fn total_volume(&self) -> f64 {
        self.volumes.iter().sum()
    }

    pub fn fits(&self, volume: f64) -> bool {
        volume <= self.budget + VOLUME_RTOL * self.budget.abs().max(f64::MIN_POSITIVE)
    }

    /// `-c^T rho`.
    pub fn objective(&self, rho: &[f64]) -> f64 {
        -self.costs.iter().zip(rho).map(|(c, r)| c * r).sum::<f64>()
    }

    pub fn volume_of(&self, rho: &[f64]) -> f64 {
        self.volumes.iter().zip(rho).map(|(a, r)| a * r).sum()
    }

    /// An instance with the same feasible set and a budget that some binary
    /// point attains exactly.
    ///
    /// When every item has the same volume `a`, only multiples of `a` are
    /// reachable, so `V_c` can be lowered to `a * floor(V_c / a)`. A binding
    /// budget is what lets the dual optimum land on a binary point with zero
    /// duality gap. Mixed volumes are returned unchanged.
    pub fn reduced(&self) -> Self {
        let a0 = self.volumes[0];
        if self.budget <= 0.0 || self.volumes.iter().any(|&a| a != a0) {
            return self.clone();
        }
        let count = (self.budget * (1.0 + VOLUME_RTOL) / a0).floor();
        Self {
            budget: (count * a0).min(self.total_volume()),
            ..self.clone()
        }
    }
}

/// Canonical dual variables; `sigma > 0` and `varsigma >= 0` on the feasible cone.
#[derive(Debug, Clone, PartialEq)]
pub struct DualPoint {
    pub sigma: Vec<f64>,
    pub varsigma: f64,
}

impl DualPoint {
    pub fn is_feasible(&self) -> bool {
        self.varsigma >= 0.0 && self.sigma.iter().all(|&s| s > 0.0)
    }

    /// `tau_e = sigma_e - varsigma a_e + c_e`.
    pub fn tau(&self, instance: &KnapsackInstance) -> Vec<f64> {
        self.sigma
            .iter()
            .zip(instance.volumes.iter().zip(&instance.costs))
            .map(|(s, (a, c))| s - self.varsigma * a + c)
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CDInnerConfig {
    /// Perturbation parameter; larger values track the unperturbed dual more closely.
    pub beta: f64,
    /// Starting volume multiplier.
    pub varsigma0: f64,
    /// Tolerance on the change of `c^T rho` between iterations; `None` means `1e-6 * n`.
    pub omega1: Option<f64>,
    pub max_inner_iters: usize,
    /// Distance from {0, 1} within which a recovered density is snapped.
    pub binary_tol: f64,
}

impl Default for CDInnerConfig {
    fn default() -> Self {
        Self {
            beta: 100.0,
            varsigma0: 1.0,
            omega1: None,
            max_inner_iters: 1000,
            binary_tol: 1e-2,
        }
    }
}

impl CDInnerConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.beta > 0.0) {
            return Err(Error::InvalidInput(format!("beta must be positive, got {}", self.beta)));
        }
        if !(self.varsigma0 >= 0.0 && self.varsigma0.is_finite()) {
            return Err(Error::InvalidInput(format!("invalid varsigma0 {}", self.varsigma0)));
        }
        if let Some(w) = self.omega1 {
            if !(w > 0.0) {
                return Err(Error::InvalidInput(format!("omega1 must be positive, got {w}")));
            }
        }
        if self.max_inner_iters == 0 {
            return Err(Error::InvalidInput("max_inner_iters must be at least 1".into()));
        }
        if !(self.binary_tol >= 0.0 && self.binary_tol < 0.5) {
            return Err(Error::InvalidInput(format!("invalid binary_tol {}", self.binary_tol)));
        }
        Ok(())
    }

    pub fn omega1_for(&self, n: usize) -> f64 {
        self.omega1.unwrap_or(1e-6 * n as f64)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveStatus {
    /// Binary, feasible and stationary.
    Converged,
    /// Iteration cap reached before the objective settled.
    MaxIters,
    /// Stationary, but the recovered point is not binary (or not feasible
    /// once snapped). A larger beta may help.
    NonBinary,
}

#[derive(Debug, Clone, PartialEq)]
pub struct KnapsackSolution {
    pub rho: Vec<f64>,
    pub dual: DualPoint,
    /// Primal value `-c^T rho`.
    pub objective: f64,
    /// Unperturbed dual value at `dual`, evaluated on the reduced instance.
    pub dual_objective: f64,
    pub gap: f64,
    pub iterations: usize,
    pub status: SolveStatus,
}

impl KnapsackSolution {
    pub fn is_converged(&self) -> bool {
        self.status == SolveStatus::Converged
    }

    pub fn into_converged(self) -> Result<Self> {
        if self.is_converged() {
            Ok(self)
        } else {
            Err(Error::NotConverged)
        }
    }
}

/// Closed-form `varsigma` given `sigma`, from `a^T rho(sigma, varsigma) = V_c`.
pub fn update_varsigma(sigma: &[f64], instance: &KnapsackInstance) -> f64 {
    let mut num = 0.0;
    let mut den = 0.0;
    for ((&s, &a), &c) in sigma.iter().zip(&instance.volumes).zip(&instance.costs) {
        num += a * (1.0 + c / s);
        den += a * a / s;
    }
    (num - 2.0 * instance.budget) / den
}

/// `rho_e = (1 - (varsigma a_e - c_e) / sigma_e) / 2`, unclamped.
pub fn primal_from_dual(dual: &DualPoint, instance: &KnapsackInstance) -> Vec<f64> {
    dual.sigma
        .iter()
        .zip(instance.volumes.iter().zip(&instance.costs))
        .map(|(s, (a, c))| 0.5 * (1.0 - (dual.varsigma * a - c) / s))
        .collect()
}

/// `P^d(zeta) = -1/4 sum tau_e^2 / sigma_e - varsigma V_c`.
pub fn dual_value(dual: &DualPoint, instance: &KnapsackInstance) -> f64 {
    let quad: f64 = dual
        .tau(instance)
        .iter()
        .zip(&dual.sigma)
        .map(|(t, s)| t * t / s)
        .sum();
    -0.25 * quad - dual.varsigma * instance.budget
}

/// `P^d(zeta) - |sigma|^2 / (4 beta)`.
pub fn perturbed_dual_value(dual: &DualPoint, instance: &KnapsackInstance, beta: f64) -> f64 {
    let ss: f64 = dual.sigma.iter().map(|s| s * s).sum();
    dual_value(dual, instance) - 0.25 * ss / beta
}

/// `|(-c^T rho) - P^d(zeta)|` for a converged solution.
///
/// The dual is evaluated on [`KnapsackInstance::reduced`], which has the same
/// feasible set as `instance`, so the result still certifies the primal.
pub fn duality_gap(solution: &KnapsackSolution, instance: &KnapsackInstance) -> Result<f64> {
    if !solution.is_converged() {
        return Err(Error::NotConverged);
    }
    let reduced = instance.reduced();
    Ok((instance.objective(&solution.rho) - dual_value(&solution.dual, &reduced)).abs())
}

/// `sigma(varsigma)` with the degenerate-theta floor applied.
fn sigmas_at(varsigma: f64, instance: &KnapsackInstance, beta: f64, floor: f64) -> Result<Vec<f64>> {
    instance
        .volumes
        .iter()
        .zip(&instance.costs)
        .map(|(a, c)| {
            let theta = varsigma * a - c;
            let theta = if theta.abs() < floor { floor.copysign(theta) } else { theta };
            solve_sigma_cubic(beta, theta)
        })
        .collect()
}

fn trivial_solution(instance: &KnapsackInstance, take_all: bool, floor: f64) -> KnapsackSolution {
    let n = instance.len();
    let (rho, dual) = if take_all {
        // varsigma = 0 and sigma = |theta| = c reproduce rho = 1.
        let sigma = instance.costs.iter().map(|&c| c.max(floor)).collect();
        (vec![1.0; n], DualPoint { sigma, varsigma: 0.0 })
    } else {
        // Any varsigma above every ratio c/a rejects all items.
        let varsigma = instance
            .costs
            .iter()
            .zip(&instance.volumes)
            .map(|(c, a)| c / a)
            .fold(0.0, f64::max)
            + 1.0;
        let sigma = instance
            .costs
            .iter()
            .zip(&instance.volumes)
            .map(|(c, a)| varsigma * a - c)
            .collect();
        (vec![0.0; n], DualPoint { sigma, varsigma })
    };
    let objective = instance.objective(&rho);
    let dual_objective = dual_value(&dual, instance);
    KnapsackSolution {
        rho,
        dual,
        objective,
        dual_objective,
        gap: (objective - dual_objective).abs(),
        iterations: 0,
        status: SolveStatus::Converged,
    }
}

/// True when `rho` fits and no unselected item with positive cost fits in the
/// remaining slack.
fn is_maximal(rho: &[f64], inst: &KnapsackInstance) -> bool {
    let volume = inst.volume_of(rho);
    inst.fits(volume)
        && rho
            .iter()
            .zip(inst.costs.iter().zip(&inst.volumes))
            .all(|(&r, (&c, &a))| r == 1.0 || c <= 0.0 || !inst.fits(volume + a))
}

/// Solves the 0-1 knapsack through the perturbed canonical dual.
///
/// Each iteration takes `sigma` from the previous `varsigma`, then the new
/// `varsigma` from `sigma`, then recovers `rho` at the dual point
/// `(sigma(varsigma), varsigma)`. It stops once `c^T rho` has settled and the
/// snapped point fits the budget with no room left for another item; the point
/// is reported snapped to {0, 1} when every component lies within `binary_tol`.
pub fn solve_knapsack_cd(instance: &KnapsackInstance, config: &CDInnerConfig) -> Result<KnapsackSolution> {
    config.validate()?;
    let inst = instance.reduced();
    let n = inst.len();
    let cmax = inst.costs.iter().copied().fold(0.0, f64::max);
    let floor = DEGENERATE_THETA * cmax.max(1.0);

    if inst.budget >= inst.total_volume() {
        return Ok(trivial_solution(&inst, true, floor));
    }
    if inst.budget <= 0.0 || inst.volumes.iter().all(|&a| !inst.fits(a)) {
        return Ok(trivial_solution(&inst, false, floor));
    }

    let omega1 = config.omega1_for(n);
    let mut varsigma = config.varsigma0;
    let mut sigma = sigmas_at(varsigma, &inst, config.beta, floor)?;
    let mut previous: Option<f64> = None;
    let mut settled = false;
    let mut iterations = 0;
    let mut rho = Vec::new();
    let mut snapped = Vec::new();
    for k in 1..=config.max_inner_iters {
        iterations = k;
        // sigma holds sigma(varsigma_{k-1}) here.
        varsigma = update_varsigma(&sigma, &inst).max(0.0);
        sigma = sigmas_at(varsigma, &inst, config.beta, floor)?;
        let dual = DualPoint { sigma, varsigma };
        rho = primal_from_dual(&dual, &inst);
        sigma = dual.sigma;
        snapped = rho.iter().map(|&r| if r > 0.5 { 1.0 } else { 0.0 }).collect();

        let value = -inst.objective(&rho);
        if log::log_enabled!(log::Level::Trace) {
            let dual = DualPoint { sigma: sigma.clone(), varsigma };
            log::trace!(
                "inner {k}: varsigma={varsigma:.12e} c^T rho={value:.12e} volume={:.6} gap={:.3e} sigma={:?} rho={:?}",
                inst.volume_of(&snapped),
                (value + dual_value(&dual, &inst)).abs(),
                dual.sigma,
                rho
            );
        }
        let stationary = previous.is_some_and(|p| (value - p).abs() <= omega1);
        if stationary && is_maximal(&snapped, &inst) {
            settled = true;
            break;
        }
        previous = Some(value);
    }

    let dual = DualPoint { sigma, varsigma };
    let binary = rho
        .iter()
        .all(|&r| r.abs().min((1.0 - r).abs()) <= config.binary_tol);
    let (rho, status) = if !settled {
        (rho, SolveStatus::MaxIters)
    } else if binary {
        (snapped, SolveStatus::Converged)
    } else {
        (rho, SolveStatus::NonBinary)
    };
    let objective = instance.objective(&rho);
    let dual_objective = dual_value(&dual, &inst);
    Ok(KnapsackSolution {
        gap: (objective - dual_objective).abs(),
        rho,
        dual,
        objective,
        dual_objective,
        iterations,
        status,
    })
}

/// [`solve_knapsack_cd`], retried with `beta * 10` up to `retries` times
/// while the result is [`SolveStatus::NonBinary`].
pub fn solve_knapsack_cd_escalating(
    instance: &KnapsackInstance,
    config: &CDInnerConfig,
    retries: usize,
) -> Result<KnapsackSolution> {
    let mut config = config.clone();
    let mut solution = solve_knapsack_cd(instance, &config)?;
    for _ in 0..retries {
        if solution.status != SolveStatus::NonBinary {
            break;
        }
        config.beta *= 10.0;
        log::debug!("non-binary knapsack point, retrying with beta = {}", config.beta);
        solution = solve_knapsack_cd(instance, &config)?;
    }
    Ok(solution)
}
