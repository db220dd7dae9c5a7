//! Canonical-duality topology optimization.
//!
//! Starting from the full design, each outer step freezes the element energies
//! `c(u)` of the current equilibrium, picks the binary design that maximizes
//! `c^T rho` within the current volume budget (a 0-1 knapsack solved through
//! its canonical dual), and re-solves equilibrium. The budget shrinks
//! geometrically by `mu` until it reaches the target, and the loop stops once
//! compliance settles at the target volume.
//!
//! By default each energy is weighted by the element's current modulus, so
//! removed elements stay cheap to keep out. Energies are divided by their
//! maximum before each knapsack solve, so `beta` and `omega1` act on costs in
//! `[0, 1]` whatever the load magnitude.

use crate::bench::{grayness_metric, DEFAULT_GRAY_DELTA};
use crate::error::{Error, Result};
use crate::fem::{self, DensityField, DisplacementField, Problem};
use crate::knapsack::{self, CDInnerConfig, KnapsackInstance, SolveStatus, VOLUME_RTOL};

#[derive(Debug, Clone, PartialEq)]
pub struct CDTConfig {
    pub inner: CDInnerConfig,
    /// Volume decrease factor per outer step, in `(volume_fraction, 1)`.
    pub mu: f64,
    /// Relative tolerance on the change in compliance between outer steps.
    pub omega2: f64,
    pub max_outer_iters: usize,
    /// Budget of the first knapsack; `None` means `mu * V_0`.
    pub initial_volume: Option<f64>,
    /// Inner retries with `beta * 10` when the recovered point is not binary.
    pub nonbinary_retries: usize,
    pub costs: CostWeighting,
}

/// How element energies are turned into knapsack costs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CostWeighting {
    /// `c_e` scaled by the element's current modulus over `E`, so void
    /// elements carry almost no cost.
    #[default]
    Effective,
    /// `c_e` at full stiffness for every element.
    Solid,
}

impl Default for CDTConfig {
    fn default() -> Self {
        Self {
            inner: CDInnerConfig::default(),
            mu: 0.975,
            omega2: 1e-4,
            max_outer_iters: 200,
            initial_volume: None,
            nonbinary_retries: 1,
            costs: CostWeighting::Effective,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct HistoryEntry {
    pub iter: usize,
    /// External work `f^T u` of the design at this step.
    pub compliance: f64,
    pub volume: f64,
    pub grayness: f64,
    /// Set when the inner solve did not converge to a binary point and the
    /// design was rounded instead.
    pub flagged: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunResult {
    pub final_rho: DensityField,
    pub final_u: DisplacementField,
    pub history: Vec<HistoryEntry>,
    pub converged: bool,
    pub outer_iterations: usize,
}

impl RunResult {
    pub fn final_compliance(&self) -> f64 {
        self.history.last().map_or(f64::NAN, |h| h.compliance)
    }
}

/// `max(mu * V, V_c)`.
pub fn volume_schedule(v_current: f64, mu: f64, v_target: f64) -> f64 {
    (mu * v_current).max(v_target)
}

fn knapsack_costs(
    problem: &Problem,
    u: &DisplacementField,
    rho: &[f64],
    weighting: CostWeighting,
) -> Result<Vec<f64>> {
    let material = &problem.material;
    let mut costs = fem::element_energies(&problem.mesh, u, material)?;
    if weighting == CostWeighting::Effective {
        for (c, &r) in costs.iter_mut().zip(rho) {
            *c *= material.modulus(r) / material.e;
        }
    }
    Ok(costs)
}

/// Rounds a non-binary knapsack point, drops the lowest `c / a` items until
/// the budget holds, then adds the highest `c / a` items that still fit.
fn round_feasible(raw: &[f64], instance: &KnapsackInstance) -> Vec<f64> {
    let mut rho: Vec<f64> = raw.iter().map(|&r| if r > 0.5 { 1.0 } else { 0.0 }).collect();
    let (c, a) = (instance.costs(), instance.volumes());
    let mut order: Vec<usize> = (0..rho.len()).collect();
    order.sort_by(|&i, &j| (c[i] / a[i]).total_cmp(&(c[j] / a[j])).then(i.cmp(&j)));
    let mut volume = instance.volume_of(&rho);
    for &e in &order {
        if instance.fits(volume) {
            break;
        }
        if rho[e] == 1.0 {
            rho[e] = 0.0;
            volume -= a[e];
        }
    }
    for &e in order.iter().rev() {
        if rho[e] == 0.0 && c[e] > 0.0 && instance.fits(volume + a[e]) {
            rho[e] = 1.0;
            volume += a[e];
        }
    }
    rho
}

pub fn run_cdt(problem: &Problem, config: &CDTConfig) -> Result<RunResult> {
    run_cdt_with(problem, config, |_| {})
}

/// [`run_cdt`], calling `observe` with each history entry as it is recorded.
pub fn run_cdt_with(
    problem: &Problem,
    config: &CDTConfig,
    mut observe: impl FnMut(&HistoryEntry),
) -> Result<RunResult> {
    let mesh = &problem.mesh;
    let material = &problem.material;
    let n = mesh.num_elements();
    let volumes = mesh.element_volumes();
    let v0 = mesh.total_volume();
    let v_target = problem.target_volume();
    let ke = fem::element_stiffness(material);
    let equilibrium = |rho: &[f64]| {
        let moduli: Vec<f64> = rho.iter().map(|&r| material.modulus(r)).collect();
        fem::solve_with_moduli(problem, &moduli, &ke)
    };

    let mut rho = vec![1.0; n];
    let mut u = equilibrium(&rho)?;
    let mut previous = fem::external_work(problem, &u);

    if v_target >= v0 {
        return Ok(RunResult {
            history: vec![HistoryEntry {
                iter: 0,
                compliance: previous,
                volume: v0,
                grayness: 0.0,
                flagged: false,
            }],
            final_rho: DensityField::new(rho)?,
            final_u: u,
            converged: true,
            outer_iterations: 1,
        });
    }
    if !(config.mu > problem.volume_fraction && config.mu < 1.0) {
        return Err(Error::InvalidInput(format!(
            "mu must lie in ({}, 1), got {}",
            problem.volume_fraction, config.mu
        )));
    }
    if !(config.omega2 > 0.0) {
        return Err(Error::InvalidInput(format!("omega2 must be positive, got {}", config.omega2)));
    }
    config.inner.validate()?;

    let mut budget = config
        .initial_volume
        .unwrap_or(config.mu * v0)
        .clamp(v_target, v0);
    let mut costs = knapsack_costs(problem, &u, &rho, config.costs)?;
    let mut history = Vec::new();
    let mut converged = false;

    for iter in 0..config.max_outer_iters {
        let scale = costs.iter().copied().fold(0.0, f64::max);
        if scale > 0.0 {
            costs.iter_mut().for_each(|c| *c /= scale);
        }
        let instance = KnapsackInstance::new(costs, volumes.clone(), budget)?;
        let solution =
            knapsack::solve_knapsack_cd_escalating(&instance, &config.inner, config.nonbinary_retries)?;
        let flagged = solution.status != SolveStatus::Converged;
        rho = if flagged {
            log::warn!(
                "outer {iter}: inner solve ended {:?} after {} iterations; rounding",
                solution.status,
                solution.iterations
            );
            round_feasible(&solution.rho, &instance)
        } else {
            solution.rho
        };

        u = equilibrium(&rho)?;
        let compliance = fem::external_work(problem, &u);
        let volume: f64 = rho.iter().zip(&volumes).map(|(r, a)| r * a).sum();
        log::debug!(
            "outer {iter}: budget={budget:.4} volume={volume:.4} compliance={compliance:.6} inner_iters={} gap={:.3e}",
            solution.iterations,
            solution.gap
        );
        history.push(HistoryEntry {
            iter,
            compliance,
            volume,
            grayness: grayness_metric(&rho, DEFAULT_GRAY_DELTA),
            flagged,
        });
        observe(&history[iter]);

        let at_target = budget <= v_target * (1.0 + VOLUME_RTOL);
        if at_target && (compliance - previous).abs() <= config.omega2 * compliance.abs() {
            converged = true;
            break;
        }
        previous = compliance;
        budget = volume_schedule(budget, config.mu, v_target);
        costs = knapsack_costs(problem, &u, &rho, config.costs)?;
    }

    let outer_iterations = history.len();
    let final_rho = DensityField::new(rho)?;
    let converged = converged && final_rho.is_binary();
    Ok(RunResult {
        final_rho,
        final_u: u,
        history,
        converged,
        outer_iterations,
    })
}
