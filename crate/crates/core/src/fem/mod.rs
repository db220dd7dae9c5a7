//! Linear-elastic finite elements on a structured quad mesh.
//!
//! Bilinear 4-node squares in plane stress with unit thickness. Stiffness is
//! interpolated per element as `E_min + (E - E_min) * s_e`, where `s_e` is the
//! density (or its penalized power for SIMP).

mod band;
mod mesh;

pub use band::{BandCholesky, SymBandMatrix};
pub use mesh::{DensityField, DisplacementField, Material, Mesh, Problem};

use crate::error::{Error, Result};

pub type ElementMatrix = [[f64; 8]; 8];

/// Relative residual required of every equilibrium solve.
pub const RESIDUAL_TOL: f64 = 1e-8;

/// Unit-modulus stiffness of a square bilinear element in plane stress.
///
/// DOF order is `(x, y)` for the bottom-left, bottom-right, top-right and
/// top-left corners. The result is independent of the element edge length.
pub fn element_stiffness(material: &Material) -> ElementMatrix {
    let nu = material.nu;
    let a11 = [
        [12.0, 3.0, -6.0, -3.0],
        [3.0, 12.0, 3.0, 0.0],
        [-6.0, 3.0, 12.0, -3.0],
        [-3.0, 0.0, -3.0, 12.0],
    ];
    let a12 = [
        [-6.0, -3.0, 0.0, 3.0],
        [-3.0, -6.0, -3.0, -6.0],
        [0.0, -3.0, -6.0, 3.0],
        [3.0, -6.0, 3.0, -6.0],
    ];
    let b11 = [
        [-4.0, 3.0, -2.0, 9.0],
        [3.0, -4.0, -9.0, 4.0],
        [-2.0, -9.0, -4.0, -3.0],
        [9.0, 4.0, -3.0, -4.0],
    ];
    let b12 = [
        [2.0, -3.0, 4.0, -9.0],
        [-3.0, 2.0, 9.0, -2.0],
        [4.0, 9.0, 2.0, 3.0],
        [-9.0, -2.0, 3.0, 2.0],
    ];
    let scale = 1.0 / (24.0 * (1.0 - nu * nu));
    let mut ke = [[0.0; 8]; 8];
    for i in 0..4 {
        for j in 0..4 {
            ke[i][j] = a11[i][j] + nu * b11[i][j];
            ke[i][j + 4] = a12[i][j] + nu * b12[i][j];
            ke[i + 4][j] = a12[j][i] + nu * b12[j][i];
            ke[i + 4][j + 4] = a11[i][j] + nu * b11[i][j];
        }
    }
    for row in &mut ke {
        for v in row.iter_mut() {
            *v *= scale;
        }
    }
    ke
}

/// Assembles `sum_e moduli[e] * K_e` into banded storage.
pub fn assemble_with_moduli(mesh: &Mesh, moduli: &[f64], ke: &ElementMatrix) -> Result<SymBandMatrix> {
    if moduli.len() != mesh.num_elements() {
        return Err(Error::DimensionMismatch {
            expected: mesh.num_elements(),
            actual: moduli.len(),
        });
    }
    let mut k = SymBandMatrix::zeros(mesh.num_dofs(), mesh.dof_bandwidth());
    for (e, &modulus) in moduli.iter().enumerate() {
        let dofs = mesh.element_dofs(e);
        for (a, &da) in dofs.iter().enumerate() {
            // K_e is symmetric, so its lower triangle covers every pair once.
            for (b, &db) in dofs.iter().enumerate().take(a + 1) {
                k.add(da, db, modulus * ke[a][b]);
            }
        }
    }
    Ok(k)
}

/// `K(rho) = sum_e [E_min + (E - E_min) rho_e] K_e`.
pub fn assemble_stiffness(mesh: &Mesh, rho: &DensityField, material: &Material) -> Result<SymBandMatrix> {
    let moduli: Vec<f64> = rho.as_slice().iter().map(|&r| material.modulus(r)).collect();
    assemble_with_moduli(mesh, &moduli, &element_stiffness(material))
}

/// Solves `K u = f` on the free DOFs; fixed DOFs are held at zero.
///
/// Fails with [`Error::SingularSystem`] when the constrained matrix is not
/// positive definite, which in practice means the supports do not remove
/// every rigid-body mode.
pub fn solve_equilibrium(k: &SymBandMatrix, problem: &Problem) -> Result<DisplacementField> {
    let m = problem.mesh.num_dofs();
    if k.dim() != m {
        return Err(Error::DimensionMismatch {
            expected: m,
            actual: k.dim(),
        });
    }
    let mut f = problem.load_vector();
    for &d in &problem.fixed_dofs {
        f[d] = 0.0;
    }
    let f_norm = norm(&f);
    if f_norm == 0.0 {
        return Ok(DisplacementField(vec![0.0; m]));
    }

    let mut reduced = k.clone();
    for &d in &problem.fixed_dofs {
        reduced.constrain(d);
    }
    let factor = reduced.cholesky()?;
    let mut u = factor.solve(&f);

    let free_residual = |u: &[f64]| {
        let mut r = k.mul_vec(u);
        for (ri, fi) in r.iter_mut().zip(&f) {
            *ri = fi - *ri;
        }
        for &d in &problem.fixed_dofs {
            r[d] = 0.0;
        }
        r
    };
    let mut r = free_residual(&u);
    let mut rel = norm(&r) / f_norm;
    for _ in 0..3 {
        if rel <= RESIDUAL_TOL {
            break;
        }
        let du = factor.solve(&r);
        for (ui, di) in u.iter_mut().zip(&du) {
            *ui += di;
        }
        r = free_residual(&u);
        rel = norm(&r) / f_norm;
    }
    if !(rel <= RESIDUAL_TOL) {
        // Solid clusters held only by void material move rigidly by ~E/E_min,
        // and f64 cannot resolve their deformation any better than this.
        let backward = norm(&r) / (k.norm_inf() * norm(&u) + f_norm);
        if !(backward <= RESIDUAL_TOL) {
            return Err(Error::ResidualTooLarge(rel));
        }
        log::warn!("equilibrium residual {rel:.3e} relative to the load; backward error {backward:.3e}");
    }
    for &d in &problem.fixed_dofs {
        u[d] = 0.0;
    }
    Ok(DisplacementField(u))
}

/// Per-element strain energy at full material stiffness, `c_e = 1/2 u_e^T (E K_e) u_e`.
pub fn element_energies(mesh: &Mesh, u: &DisplacementField, material: &Material) -> Result<Vec<f64>> {
    let ke = element_stiffness(material);
    Ok(element_quadratic_forms(mesh, u, &ke)?
        .into_iter()
        .map(|q| 0.5 * material.e * q)
        .collect())
}

/// `u_e^T K_e u_e` for every element.
pub fn element_quadratic_forms(mesh: &Mesh, u: &DisplacementField, ke: &ElementMatrix) -> Result<Vec<f64>> {
    if u.0.len() != mesh.num_dofs() {
        return Err(Error::DimensionMismatch {
            expected: mesh.num_dofs(),
            actual: u.0.len(),
        });
    }
    Ok((0..mesh.num_elements())
        .map(|e| {
            let ue = u.element(mesh, e);
            let mut q = 0.0;
            for a in 0..8 {
                let row: f64 = (0..8).map(|b| ke[a][b] * ue[b]).sum();
                q += ue[a] * row;
            }
            q.max(0.0)
        })
        .collect())
}

/// `C(rho, u) = rho^T c(u)`.
pub fn compliance(rho: &[f64], c: &[f64]) -> Result<f64> {
    if rho.len() != c.len() {
        return Err(Error::DimensionMismatch {
            expected: rho.len(),
            actual: c.len(),
        });
    }
    Ok(rho.iter().zip(c).map(|(r, c)| r * c).sum())
}

/// External work `f^T u`; equals `u^T K u` at equilibrium.
pub fn external_work(problem: &Problem, u: &DisplacementField) -> f64 {
    problem.loads.iter().map(|(&d, &f)| f * u.0[d]).sum()
}

/// Assemble and solve in one step for the given per-element moduli.
pub fn solve_with_moduli(problem: &Problem, moduli: &[f64], ke: &ElementMatrix) -> Result<DisplacementField> {
    let k = assemble_with_moduli(&problem.mesh, moduli, ke)?;
    solve_equilibrium(&k, problem)
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}
