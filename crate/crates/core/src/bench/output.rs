use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::cdt::RunResult;
use crate::error::{Error, Result};
use crate::fem::Mesh;

/// Plain-text PGM (`P2`) with one pixel per element, solid black and void
/// white. Rows run from the top of the domain down.
pub fn format_density_pgm(rho: &[f64], mesh: &Mesh) -> Result<String> {
    if rho.len() != mesh.num_elements() {
        return Err(Error::DimensionMismatch {
            expected: mesh.num_elements(),
            actual: rho.len(),
        });
    }
    let (nx, ny) = (mesh.nx(), mesh.ny());
    let mut out = format!("P2\n{nx} {ny}\n255\n");
    for ey in (0..ny).rev() {
        for ex in 0..nx {
            let r = rho[mesh.element(ex, ey)].clamp(0.0, 1.0);
            let pixel = (255.0 * (1.0 - r)).round() as u8;
            if ex > 0 {
                out.push(' ');
            }
            write!(out, "{pixel}").unwrap();
        }
        out.push('\n');
    }
    Ok(out)
}

pub fn write_density_image(rho: &[f64], mesh: &Mesh, path: impl AsRef<Path>) -> Result<()> {
    fs::write(path, format_density_pgm(rho, mesh)?)?;
    Ok(())
}

/// `iter,compliance,volume,grayness`, one row per outer iteration.
pub fn write_history_csv(result: &RunResult, path: impl AsRef<Path>) -> Result<()> {
    let mut out = String::from("iter,compliance,volume,grayness\n");
    for h in &result.history {
        writeln!(
            out,
            "{},{},{},{}",
            h.iter,
            sig_digits(h.compliance, 12),
            sig_digits(h.volume, 12),
            sig_digits(h.grayness, 12)
        )
        .unwrap();
    }
    fs::write(path, out)?;
    Ok(())
}

/// Raw densities as `ex,ey,rho`, element by element.
pub fn write_density_csv(rho: &[f64], mesh: &Mesh, path: impl AsRef<Path>) -> Result<()> {
    if rho.len() != mesh.num_elements() {
        return Err(Error::DimensionMismatch {
            expected: mesh.num_elements(),
            actual: rho.len(),
        });
    }
    let mut out = String::from("ex,ey,rho\n");
    for (e, r) in rho.iter().enumerate() {
        let (ex, ey) = mesh.element_position(e);
        writeln!(out, "{ex},{ey},{}", sig_digits(*r, 12)).unwrap();
    }
    fs::write(path, out)?;
    Ok(())
}

/// Positional decimal with `digits` significant digits.
pub(crate) fn sig_digits(v: f64, digits: usize) -> String {
    if v == 0.0 || !v.is_finite() {
        return format!("{v}");
    }
    let magnitude = v.abs().log10().floor() as i64;
    let decimals = (digits as i64 - 1 - magnitude).max(0) as usize;
    format!("{v:.decimals$}")
}
