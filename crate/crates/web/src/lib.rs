//! wasm-bindgen bindings for the static demo page in `www/`.

use cdt_topo::bench::{checkerboard_metric, problem_cantilever, problem_mbb};
use cdt_topo::fem::Problem;
use cdt_topo::knapsack::{solve_knapsack_cd_escalating, CDInnerConfig, KnapsackInstance};
use cdt_topo::{run_cdt, run_simp, CDTConfig, RunResult, SIMPConfig};
use wasm_bindgen::prelude::*;

/// Demo meshes stay small enough to solve on the page's main thread.
pub const MAX_ELEMENTS: usize = 20_000;

#[wasm_bindgen]
#[derive(Debug, Clone)]
pub struct Design {
    nx: usize,
    ny: usize,
    rho: Vec<f64>,
    compliance: Vec<f64>,
    converged: bool,
    grayness: f64,
    checkerboard: f64,
}

#[wasm_bindgen]
impl Design {
    pub fn nx(&self) -> usize {
        self.nx
    }

    pub fn ny(&self) -> usize {
        self.ny
    }

    /// Element densities, element `ex * ny + ey` with `ey` counted from the bottom.
    pub fn densities(&self) -> Vec<f64> {
        self.rho.clone()
    }

    pub fn compliance_history(&self) -> Vec<f64> {
        self.compliance.clone()
    }

    pub fn final_compliance(&self) -> f64 {
        self.compliance.last().copied().unwrap_or(f64::NAN)
    }

    pub fn iterations(&self) -> usize {
        self.compliance.len()
    }

    pub fn converged(&self) -> bool {
        self.converged
    }

    pub fn grayness(&self) -> f64 {
        self.grayness
    }

    pub fn checkerboard(&self) -> f64 {
        self.checkerboard
    }
}

fn build_problem(problem: &str, nx: usize, ny: usize, volfrac: f64) -> cdt_topo::Result<Problem> {
    if nx * ny > MAX_ELEMENTS {
        return Err(cdt_topo::Error::TooLarge(nx * ny));
    }
    match problem {
        "mbb" => problem_mbb(nx, ny, volfrac),
        "cantilever" => problem_cantilever(nx, ny, volfrac),
        other => Err(cdt_topo::Error::InvalidInput(format!("unknown problem {other:?}"))),
    }
}

fn to_design(problem: &Problem, result: RunResult) -> Design {
    Design {
        nx: problem.mesh.nx(),
        ny: problem.mesh.ny(),
        checkerboard: checkerboard_metric(&problem.mesh, result.final_rho.as_slice()),
        grayness: result.history.last().map_or(0.0, |h| h.grayness),
        compliance: result.history.iter().map(|h| h.compliance).collect(),
        converged: result.converged,
        rho: result.final_rho.into_inner(),
    }
}

pub fn cdt_design(problem: &str, nx: usize, ny: usize, volfrac: f64, mu: f64, beta: f64) -> cdt_topo::Result<Design> {
    let p = build_problem(problem, nx, ny, volfrac)?;
    let config = CDTConfig {
        mu,
        inner: CDInnerConfig {
            beta,
            ..Default::default()
        },
        ..Default::default()
    };
    Ok(to_design(&p, run_cdt(&p, &config)?))
}

pub fn simp_design(problem: &str, nx: usize, ny: usize, volfrac: f64, penal: f64, rmin: f64) -> cdt_topo::Result<Design> {
    let p = build_problem(problem, nx, ny, volfrac)?;
    let config = SIMPConfig {
        penal,
        rmin,
        ..Default::default()
    };
    Ok(to_design(&p, run_simp(&p, &config)?))
}

/// Unit-volume knapsack: which items to keep within `budget`.
pub fn knapsack_selection(costs: Vec<f64>, budget: f64, beta: f64) -> cdt_topo::Result<Vec<f64>> {
    let n = costs.len();
    let instance = KnapsackInstance::new(costs, vec![1.0; n], budget)?;
    let config = CDInnerConfig {
        beta,
        ..Default::default()
    };
    let solution = solve_knapsack_cd_escalating(&instance, &config, 1)?;
    Ok(solution.rho)
}

fn js(e: cdt_topo::Error) -> JsError {
    JsError::new(&e.to_string())
}

#[wasm_bindgen]
pub fn optimize_cdt(problem: &str, nx: usize, ny: usize, volfrac: f64, mu: f64, beta: f64) -> Result<Design, JsError> {
    cdt_design(problem, nx, ny, volfrac, mu, beta).map_err(js)
}

#[wasm_bindgen]
pub fn optimize_simp(problem: &str, nx: usize, ny: usize, volfrac: f64, penal: f64, rmin: f64) -> Result<Design, JsError> {
    simp_design(problem, nx, ny, volfrac, penal, rmin).map_err(js)
}

#[wasm_bindgen]
pub fn knapsack_select(costs: Vec<f64>, budget: f64, beta: f64) -> Result<Vec<f64>, JsError> {
    knapsack_selection(costs, budget, beta).map_err(js)
}
