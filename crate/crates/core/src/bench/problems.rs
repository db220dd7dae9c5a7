use std::collections::{BTreeMap, BTreeSet};

use crate::error::Result;
use crate::fem::{Material, Mesh, Problem};

/// Half MBB beam: the left edge is the symmetry plane (x fixed), the
/// bottom-right corner is on a roller (y fixed) and a unit load pushes down
/// on the top-left corner.
pub fn problem_mbb(nx: usize, ny: usize, volume_fraction: f64) -> Result<Problem> {
    let mesh = Mesh::new(nx, ny)?;
    let mut fixed: BTreeSet<usize> = (0..=ny).map(|iy| 2 * mesh.node(0, iy)).collect();
    fixed.insert(2 * mesh.node(nx, 0) + 1);
    let loads = BTreeMap::from([(2 * mesh.node(0, ny) + 1, -1.0)]);
    Problem::new("mbb", mesh, Material::default(), fixed, loads, volume_fraction)
}

/// Cantilever clamped along the left edge with a unit downward load at the
/// middle of the right edge (node `floor(ny / 2)` counted from the bottom).
pub fn problem_cantilever(nx: usize, ny: usize, volume_fraction: f64) -> Result<Problem> {
    let mesh = Mesh::new(nx, ny)?;
    let fixed: BTreeSet<usize> = (0..=ny)
        .flat_map(|iy| {
            let n = mesh.node(0, iy);
            [2 * n, 2 * n + 1]
        })
        .collect();
    let loads = BTreeMap::from([(2 * mesh.node(nx, ny / 2) + 1, -1.0)]);
    Problem::new("cantilever", mesh, Material::default(), fixed, loads, volume_fraction)
}
