#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use cdt_topo::fem::{self, DensityField, DisplacementField, Material, Mesh, Problem, SymBandMatrix};

/// Eigenvalues of a dense symmetric matrix by cyclic Jacobi rotations.
pub fn jacobi_eigenvalues(mut a: Vec<Vec<f64>>) -> Vec<f64> {
    let n = a.len();
    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i][j] * a[i][j])
            .sum();
        if off < 1e-26 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if a[p][q].abs() < 1e-300 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (akp, akq) = (a[k][p], a[k][q]);
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let (apk, aqk) = (a[p][k], a[q][k]);
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
        }
    }
    let mut ev: Vec<f64> = (0..n).map(|i| a[i][i]).collect();
    ev.sort_by(f64::total_cmp);
    ev
}

/// Left edge clamped, arbitrary point loads elsewhere.
pub fn clamped_problem(nx: usize, ny: usize, loads: BTreeMap<usize, f64>) -> Problem {
    let mesh = Mesh::new(nx, ny).unwrap();
    let fixed: BTreeSet<usize> = (0..=ny).flat_map(|iy| [2 * mesh.node(0, iy), 2 * mesh.node(0, iy) + 1]).collect();
    Problem::new("clamped", mesh, Material::default(), fixed, loads, 0.5).unwrap()
}

pub fn solve(problem: &Problem, rho: &[f64]) -> (SymBandMatrix, DisplacementField) {
    let k = fem::assemble_stiffness(&problem.mesh, &DensityField::new(rho.to_vec()).unwrap(), &problem.material).unwrap();
    let u = fem::solve_equilibrium(&k, problem).unwrap();
    (k, u)
}

/// `||f - K u|| / ||f||` over the free DOFs.
pub fn free_residual(k: &SymBandMatrix, problem: &Problem, u: &DisplacementField) -> f64 {
    let ku = k.mul_vec(u.as_slice());
    let f = problem.load_vector();
    let (mut r2, mut f2) = (0.0, 0.0);
    for d in problem.free_dofs() {
        r2 += (f[d] - ku[d]).powi(2);
        f2 += f[d] * f[d];
    }
    (r2 / f2).sqrt()
}

pub fn quadratic_form(k: &SymBandMatrix, u: &[f64]) -> f64 {
    k.mul_vec(u).iter().zip(u).map(|(a, b)| a * b).sum()
}
