use crate::fem::Mesh;

pub const DEFAULT_GRAY_DELTA: f64 = 0.05;

/// Fraction of elements with `delta < rho < 1 - delta`.
pub fn grayness_metric(rho: &[f64], delta: f64) -> f64 {
    if rho.is_empty() {
        return 0.0;
    }
    let gray = rho.iter().filter(|&&r| r > delta && r < 1.0 - delta).count();
    gray as f64 / rho.len() as f64
}

/// Fraction of 2x2 element blocks whose solid/void pattern alternates like a
/// checkerboard (solid means `rho > 1/2`).
pub fn checkerboard_metric(mesh: &Mesh, rho: &[f64]) -> f64 {
    let (nx, ny) = (mesh.nx(), mesh.ny());
    if nx < 2 || ny < 2 {
        return 0.0;
    }
    let solid = |ex, ey| rho[mesh.element(ex, ey)] > 0.5;
    let mut hits = 0usize;
    for ex in 0..nx - 1 {
        for ey in 0..ny - 1 {
            let bl = solid(ex, ey);
            let br = solid(ex + 1, ey);
            let tl = solid(ex, ey + 1);
            let tr = solid(ex + 1, ey + 1);
            if bl == tr && br == tl && bl != br {
                hits += 1;
            }
        }
    }
    hits as f64 / ((nx - 1) * (ny - 1)) as f64
}
