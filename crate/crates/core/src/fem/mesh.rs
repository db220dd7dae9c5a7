use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};

/// Structured grid of square 4-node elements.
///
/// Nodes are numbered column-major starting at the bottom-left corner:
/// node `(ix, iy)` has index `ix * (ny + 1) + iy`, with `iy` counted upwards.
/// Each node carries two DOFs, `2 * node` (x) and `2 * node + 1` (y).
/// Elements use the same column-major layout, `e = ex * ny + ey`, and list
/// their nodes counterclockwise from the bottom-left corner.
#[derive(Debug, Clone, PartialEq)]
pub struct Mesh {
    nx: usize,
    ny: usize,
    element_size: f64,
}

impl Mesh {
    pub fn new(nx: usize, ny: usize) -> Result<Self> {
        Self::with_element_size(nx, ny, 1.0)
    }

    pub fn with_element_size(nx: usize, ny: usize, element_size: f64) -> Result<Self> {
        if nx == 0 || ny == 0 {
            return Err(Error::InvalidInput(format!(
                "mesh needs at least one element per axis, got {nx}x{ny}"
            )));
        }
        if !(element_size > 0.0 && element_size.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "element size must be positive, got {element_size}"
            )));
        }
        Ok(Self {
            nx,
            ny,
            element_size,
        })
    }

    pub fn nx(&self) -> usize {
        self.nx
    }

    pub fn ny(&self) -> usize {
        self.ny
    }

    pub fn element_size(&self) -> f64 {
        self.element_size
    }

    pub fn num_nodes(&self) -> usize {
        (self.nx + 1) * (self.ny + 1)
    }

    pub fn num_elements(&self) -> usize {
        self.nx * self.ny
    }

    pub fn num_dofs(&self) -> usize {
        2 * self.num_nodes()
    }

    pub fn node(&self, ix: usize, iy: usize) -> usize {
        debug_assert!(ix <= self.nx && iy <= self.ny);
        ix * (self.ny + 1) + iy
    }

    pub fn element(&self, ex: usize, ey: usize) -> usize {
        debug_assert!(ex < self.nx && ey < self.ny);
        ex * self.ny + ey
    }

    /// Grid position `(ex, ey)` of element `e`.
    pub fn element_position(&self, e: usize) -> (usize, usize) {
        (e / self.ny, e % self.ny)
    }

    /// Corner nodes of element `e`: bottom-left, bottom-right, top-right, top-left.
    pub fn element_nodes(&self, e: usize) -> [usize; 4] {
        let (ex, ey) = self.element_position(e);
        [
            self.node(ex, ey),
            self.node(ex + 1, ey),
            self.node(ex + 1, ey + 1),
            self.node(ex, ey + 1),
        ]
    }

    /// The eight DOF indices of element `e`, ordered to match [`super::element_stiffness`].
    pub fn element_dofs(&self, e: usize) -> [usize; 8] {
        let n = self.element_nodes(e);
        [
            2 * n[0],
            2 * n[0] + 1,
            2 * n[1],
            2 * n[1] + 1,
            2 * n[2],
            2 * n[2] + 1,
            2 * n[3],
            2 * n[3] + 1,
        ]
    }

    /// Area of each element (unit thickness).
    pub fn element_volume(&self) -> f64 {
        self.element_size * self.element_size
    }

    pub fn element_volumes(&self) -> Vec<f64> {
        vec![self.element_volume(); self.num_elements()]
    }

    pub fn total_volume(&self) -> f64 {
        self.element_volume() * self.num_elements() as f64
    }

    /// Largest index distance between two DOFs that share an element.
    pub fn dof_bandwidth(&self) -> usize {
        // Opposite corners of an element differ by ny + 2 nodes.
        2 * (self.ny + 2) + 1
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Material {
    pub e: f64,
    pub e_min: f64,
    pub nu: f64,
}

impl Material {
    pub fn new(e: f64, e_min: f64, nu: f64) -> Result<Self> {
        if !(e > e_min && e_min > 0.0 && e.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "moduli must satisfy E > E_min > 0, got E = {e}, E_min = {e_min}"
            )));
        }
        if !(0.0..0.5).contains(&nu) {
            return Err(Error::InvalidInput(format!(
                "Poisson's ratio must lie in [0, 0.5), got {nu}"
            )));
        }
        Ok(Self { e, e_min, nu })
    }

    /// Interpolated modulus `E_min + (E - E_min) * s` for a stiffness fraction `s`.
    pub fn modulus(&self, s: f64) -> f64 {
        self.e_min + (self.e - self.e_min) * s
    }
}

impl Default for Material {
    /// Dimensionless benchmark material: E = 1, E_min = 1e-9, nu = 0.3.
    fn default() -> Self {
        Self {
            e: 1.0,
            e_min: 1e-9,
            nu: 0.3,
        }
    }
}

/// One boundary-value problem: mesh, material, supports, point loads and
/// the target volume fraction.
#[derive(Debug, Clone, PartialEq)]
pub struct Problem {
    pub name: String,
    pub mesh: Mesh,
    pub material: Material,
    pub fixed_dofs: BTreeSet<usize>,
    pub loads: BTreeMap<usize, f64>,
    pub volume_fraction: f64,
}

impl Problem {
    pub fn new(
        name: impl Into<String>,
        mesh: Mesh,
        material: Material,
        fixed_dofs: BTreeSet<usize>,
        loads: BTreeMap<usize, f64>,
        volume_fraction: f64,
    ) -> Result<Self> {
        let m = mesh.num_dofs();
        if fixed_dofs.is_empty() {
            return Err(Error::InvalidInput("no fixed DOFs".into()));
        }
        if loads.is_empty() {
            return Err(Error::InvalidInput("no loads".into()));
        }
        if let Some(&d) = fixed_dofs.iter().next_back().filter(|&&d| d >= m) {
            return Err(Error::InvalidInput(format!("fixed DOF {d} out of range {m}")));
        }
        for (&d, &f) in &loads {
            if d >= m {
                return Err(Error::InvalidInput(format!("loaded DOF {d} out of range {m}")));
            }
            if fixed_dofs.contains(&d) {
                return Err(Error::InvalidInput(format!("DOF {d} is both fixed and loaded")));
            }
            if !f.is_finite() {
                return Err(Error::InvalidInput(format!("non-finite load on DOF {d}")));
            }
        }
        if !(volume_fraction > 0.0 && volume_fraction <= 1.0) {
            return Err(Error::InvalidInput(format!(
                "volume fraction must lie in (0, 1], got {volume_fraction}"
            )));
        }
        Ok(Self {
            name: name.into(),
            mesh,
            material,
            fixed_dofs,
            loads,
            volume_fraction,
        })
    }

    /// Target volume `V_c = volume_fraction * V_0`.
    pub fn target_volume(&self) -> f64 {
        self.volume_fraction * self.mesh.total_volume()
    }

    /// Dense global load vector.
    pub fn load_vector(&self) -> Vec<f64> {
        let mut f = vec![0.0; self.mesh.num_dofs()];
        for (&d, &v) in &self.loads {
            f[d] = v;
        }
        f
    }

    pub fn free_dofs(&self) -> Vec<usize> {
        (0..self.mesh.num_dofs())
            .filter(|d| !self.fixed_dofs.contains(d))
            .collect()
    }
}

/// Per-element design variables in `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityField(Vec<f64>);

impl DensityField {
    pub fn new(rho: Vec<f64>) -> Result<Self> {
        if let Some((e, r)) = rho
            .iter()
            .enumerate()
            .find(|(_, r)| !(0.0..=1.0).contains(*r))
        {
            return Err(Error::InvalidInput(format!(
                "density {r} of element {e} outside [0, 1]"
            )));
        }
        Ok(Self(rho))
    }

    pub fn uniform(n: usize, value: f64) -> Result<Self> {
        Self::new(vec![value; n])
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_binary(&self) -> bool {
        self.0.iter().all(|&r| r == 0.0 || r == 1.0)
    }

    /// `rho^T a` for per-element volumes `a`.
    pub fn volume(&self, volumes: &[f64]) -> f64 {
        self.0.iter().zip(volumes).map(|(r, a)| r * a).sum()
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DisplacementField(pub Vec<f64>);

impl DisplacementField {
    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    /// The eight DOF values of element `e`.
    pub fn element(&self, mesh: &Mesh, e: usize) -> [f64; 8] {
        mesh.element_dofs(e).map(|d| self.0[d])
    }
}
