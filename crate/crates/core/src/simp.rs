//! SIMP baseline with optimality-criteria updates and a sensitivity filter,
//! following the classic 88-line formulation.

use crate::bench::{grayness_metric, DEFAULT_GRAY_DELTA};
use crate::cdt::{HistoryEntry, RunResult};
use crate::error::{Error, Result};
use crate::fem::{self, DensityField, Mesh, Problem};

/// Smallest density the OC update will produce.
pub const RHO_MIN: f64 = 1e-9;
/// Relative volume precision of the OC bisection.
pub const OC_VOLUME_RTOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct SIMPConfig {
    pub penal: f64,
    /// Filter radius in element widths; `0` disables filtering.
    pub rmin: f64,
    /// Filter type; only the sensitivity filter (`1`) is supported.
    pub ft: u8,
    pub move_limit: f64,
    pub tol_change: f64,
    pub max_iters: usize,
}

impl Default for SIMPConfig {
    fn default() -> Self {
        Self {
            penal: 3.0,
            rmin: 1.5,
            ft: 1,
            move_limit: 0.2,
            tol_change: 0.01,
            max_iters: 200,
        }
    }
}

impl SIMPConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.penal >= 1.0) || !self.penal.is_finite() {
            return Err(Error::InvalidInput(format!("penal must be >= 1, got {}", self.penal)));
        }
        if !(self.rmin >= 0.0) || !self.rmin.is_finite() {
            return Err(Error::InvalidInput(format!("rmin must be >= 0, got {}", self.rmin)));
        }
        if self.ft != 1 {
            return Err(Error::InvalidInput(format!("unsupported filter type {}", self.ft)));
        }
        if !(self.move_limit > 0.0 && self.move_limit <= 1.0) {
            return Err(Error::InvalidInput(format!("move must lie in (0, 1], got {}", self.move_limit)));
        }
        if !(self.tol_change > 0.0) {
            return Err(Error::InvalidInput(format!("tol_change must be positive, got {}", self.tol_change)));
        }
        Ok(())
    }
}

/// Optimality-criteria update with the Lagrange multiplier found by bisection
/// so that `a^T rho_new` matches `volume_fraction * sum(a)`.
pub fn oc_update(rho: &[f64], dc: &[f64], dv: &[f64], volume_fraction: f64, move_limit: f64) -> Result<Vec<f64>> {
    let n = rho.len();
    if dc.len() != n || dv.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            actual: if dc.len() != n { dc.len() } else { dv.len() },
        });
    }
    if dc.iter().any(|&d| !(d <= 0.0)) || dv.iter().any(|&d| !(d > 0.0)) {
        return Err(Error::InvalidInput("OC update needs dc <= 0 and dv > 0".into()));
    }
    if rho.iter().any(|&r| !(0.0..=1.0).contains(&r)) {
        return Err(Error::InvalidInput("densities must lie in [0, 1]".into()));
    }
    if !(volume_fraction > 0.0 && volume_fraction <= 1.0) {
        return Err(Error::InvalidInput(format!("invalid volume fraction {volume_fraction}")));
    }
    let target = volume_fraction * dv.iter().sum::<f64>();
    let step = |lambda: f64| -> (Vec<f64>, f64) {
        let next: Vec<f64> = (0..n)
            .map(|e| {
                let lo = (rho[e] - move_limit).max(RHO_MIN);
                let hi = (rho[e] + move_limit).min(1.0).max(lo);
                (rho[e] * (-dc[e] / (lambda * dv[e])).sqrt()).clamp(lo, hi)
            })
            .collect();
        let volume = next.iter().zip(dv).map(|(r, a)| r * a).sum();
        (next, volume)
    };
    let close = |v: f64| (v - target).abs() <= OC_VOLUME_RTOL * target;

    // the move box alone can pin the volume
    let (lowest, v_low) = step(f64::INFINITY);
    if v_low >= target {
        return if close(v_low) || move_limit == 0.0 {
            Ok(lowest)
        } else {
            Err(Error::BisectionFailure(format!("volume {v_low} cannot reach {target}")))
        };
    }
    let (mut l1, mut l2) = (0.0_f64, 1e9_f64);
    while step(l2).1 > target {
        l2 *= 1e3;
        if !l2.is_finite() {
            return Err(Error::BisectionFailure("no upper bracket for the multiplier".into()));
        }
    }
    while l2 - l1 > 1e-15 * l2 {
        let mid = 0.5 * (l1 + l2);
        let (next, volume) = step(mid);
        if close(volume) {
            return Ok(next);
        }
        if volume > target {
            l1 = mid;
        } else {
            l2 = mid;
        }
    }
    let (next, volume) = step(0.5 * (l1 + l2));
    if close(volume) {
        Ok(next)
    } else {
        Err(Error::BisectionFailure(format!("volume {volume} vs target {target}")))
    }
}

/// Neighbour weights `max(0, rmin - dist)` for each element.
fn filter_weights(mesh: &Mesh, rmin: f64) -> Vec<Vec<(usize, f64)>> {
    let reach = rmin.ceil() as i64 - 1;
    let (nx, ny) = (mesh.nx() as i64, mesh.ny() as i64);
    (0..mesh.num_elements())
        .map(|e| {
            let (ex, ey) = mesh.element_position(e);
            let (ex, ey) = (ex as i64, ey as i64);
            let mut w = Vec::new();
            for i in (ex - reach).max(0)..=(ex + reach).min(nx - 1) {
                for j in (ey - reach).max(0)..=(ey + reach).min(ny - 1) {
                    let d = (((i - ex).pow(2) + (j - ey).pow(2)) as f64).sqrt();
                    if rmin - d > 0.0 {
                        w.push((mesh.element(i as usize, j as usize), rmin - d));
                    }
                }
            }
            w
        })
        .collect()
}

fn apply_filter(weights: &[Vec<(usize, f64)>], rho: &[f64], dc: &[f64]) -> Vec<f64> {
    weights
        .iter()
        .enumerate()
        .map(|(e, w)| {
            let num: f64 = w.iter().map(|&(j, h)| h * rho[j] * dc[j]).sum();
            let den: f64 = w.iter().map(|&(_, h)| h).sum();
            num / (rho[e].max(1e-3) * den)
        })
        .collect()
}

/// `dc_f(e) = sum_j w_ej rho_j dc_j / (max(rho_e, 1e-3) sum_j w_ej)`.
/// `rmin = 0` returns `dc` unchanged.
pub fn sensitivity_filter(mesh: &Mesh, rho: &[f64], dc: &[f64], rmin: f64) -> Result<Vec<f64>> {
    let n = mesh.num_elements();
    if rho.len() != n || dc.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            actual: if rho.len() != n { rho.len() } else { dc.len() },
        });
    }
    if !(rmin >= 0.0) {
        return Err(Error::InvalidInput(format!("rmin must be >= 0, got {rmin}")));
    }
    if rmin == 0.0 {
        return Ok(dc.to_vec());
    }
    Ok(apply_filter(&filter_weights(mesh, rmin), rho, dc))
}

pub fn run_simp(problem: &Problem, config: &SIMPConfig) -> Result<RunResult> {
    run_simp_with(problem, config, |_| {})
}

/// [`run_simp`], calling `observe` with each history entry as it is recorded.
pub fn run_simp_with(
    problem: &Problem,
    config: &SIMPConfig,
    mut observe: impl FnMut(&HistoryEntry),
) -> Result<RunResult> {
    config.validate()?;
    let mesh = &problem.mesh;
    let material = &problem.material;
    let n = mesh.num_elements();
    let dv = mesh.element_volumes();
    let ke = fem::element_stiffness(material);
    let weights = (config.rmin > 0.0).then(|| filter_weights(mesh, config.rmin));
    let de = material.e - material.e_min;

    let mut rho = vec![problem.volume_fraction; n];
    let mut history = Vec::new();
    let mut converged = false;
    let mut u;
    loop {
        let iter = history.len();
        let moduli: Vec<f64> = rho.iter().map(|&r| material.e_min + r.powf(config.penal) * de).collect();
        u = fem::solve_with_moduli(problem, &moduli, &ke)?;
        let compliance = fem::external_work(problem, &u);
        let energies = fem::element_quadratic_forms(mesh, &u, &ke)?;
        let mut dc: Vec<f64> = rho
            .iter()
            .zip(&energies)
            .map(|(&r, &w)| -config.penal * r.powf(config.penal - 1.0) * de * w)
            .collect();
        if let Some(w) = &weights {
            dc = apply_filter(w, &rho, &dc);
        }
        // round-off can leave tiny positive values
        dc.iter_mut().for_each(|d| *d = d.min(0.0));

        history.push(HistoryEntry {
            iter,
            compliance,
            volume: rho.iter().zip(&dv).map(|(r, a)| r * a).sum(),
            grayness: grayness_metric(&rho, DEFAULT_GRAY_DELTA),
            flagged: false,
        });
        observe(&history[iter]);
        if converged || history.len() > config.max_iters {
            break;
        }

        let next = oc_update(&rho, &dc, &dv, problem.volume_fraction, config.move_limit)?;
        let change = next.iter().zip(&rho).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        log::debug!("simp {iter}: compliance={compliance:.6} change={change:.4}");
        rho = next;
        converged = change <= config.tol_change;
    }

    Ok(RunResult {
        outer_iterations: history.len() - 1,
        final_rho: DensityField::new(rho)?,
        final_u: u,
        history,
        converged,
    })
}
