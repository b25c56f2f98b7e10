//! Finite-difference discretisation of `-p d^2/dx^2 + V(x)` on a uniform grid
//! with Dirichlet walls. The matrix is symmetric tridiagonal, so eigenvalues
//! come from Sturm-sequence bisection and the ground state from inverse
//! iteration.

use super::{potential_minimum, potential_value, MorseModel};
use crate::error::{Error, Result};

/// Fewest interior grid points accepted by the oracle.
pub const MIN_GRID_POINTS: usize = 2000;

/// Largest tolerated ratio of ground-state amplitude at the walls to its peak.
pub const MAX_BOUNDARY_AMPLITUDE: f64 = 1e-6;

/// Negative eigenvalues of the discretised Hamiltonian.
#[derive(Debug, Clone, PartialEq)]
pub struct FdSpectrum {
    /// Ascending; each approximates one bound level.
    pub energies: Vec<f64>,
    /// Ground-state amplitude at the walls relative to its maximum.
    pub boundary_amplitude: f64,
    pub spacing: f64,
}

struct Tridiagonal {
    diag: Vec<f64>,
    off: f64,
}

impl Tridiagonal {
    /// Number of eigenvalues strictly below `sigma`.
    fn count_below(&self, sigma: f64) -> usize {
        let off2 = self.off * self.off;
        let mut count = 0;
        let mut d = 1.0;
        for (i, &a) in self.diag.iter().enumerate() {
            d = if i == 0 { a - sigma } else { a - sigma - off2 / d };
            if d == 0.0 {
                d = -f64::EPSILON * (a.abs() + sigma.abs() + self.off.abs());
            }
            if d < 0.0 {
                count += 1;
            }
        }
        count
    }

    fn eigenvalue(&self, index: usize, mut lo: f64, mut hi: f64) -> f64 {
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.count_below(mid) > index {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        0.5 * (lo + hi)
    }

    /// Solve `(T - sigma) y = rhs` by the Thomas algorithm.
    fn solve_shifted(&self, sigma: f64, rhs: &[f64]) -> Vec<f64> {
        let n = self.diag.len();
        let mut c = vec![0.0; n];
        let mut y = vec![0.0; n];
        let mut denom = self.diag[0] - sigma;
        c[0] = self.off / denom;
        y[0] = rhs[0] / denom;
        for i in 1..n {
            denom = self.diag[i] - sigma - self.off * c[i - 1];
            if denom == 0.0 {
                denom = f64::EPSILON;
            }
            c[i] = self.off / denom;
            y[i] = (rhs[i] - self.off * y[i - 1]) / denom;
        }
        for i in (0..n - 1).rev() {
            y[i] -= c[i] * y[i + 1];
        }
        y
    }
}

/// Negative eigenvalues of `-p d^2/dx^2 + V` on `grid_points` interior nodes
/// of `[x_min, x_max]`.
///
/// Rejects grids that are too coarse, domains that miss the well minimum and
/// domains narrow enough that the ground state still has weight at the walls.
pub fn fd_schrodinger_oracle(
    model: &MorseModel,
    x_min: f64,
    x_max: f64,
    grid_points: usize,
) -> Result<FdSpectrum> {
    if grid_points < MIN_GRID_POINTS {
        return Err(Error::FiniteDifference {
            reason: format!("{grid_points} grid points, at least {MIN_GRID_POINTS} required"),
            boundary_amplitude: None,
        });
    }
    let (x0, _) = potential_minimum(model);
    if !(x_min < x0 && x0 < x_max) {
        return Err(Error::FiniteDifference {
            reason: format!("domain [{x_min}, {x_max}] does not contain the minimum x0 = {x0}"),
            boundary_amplitude: None,
        });
    }
    let h = (x_max - x_min) / (grid_points + 1) as f64;
    let kinetic = model.p() / (h * h);
    let diag = (1..=grid_points)
        .map(|i| potential_value(model, x_min + i as f64 * h).map(|v| v + 2.0 * kinetic))
        .collect::<Result<Vec<_>>>()?;
    let lower = diag.iter().cloned().fold(f64::INFINITY, f64::min) - 2.0 * kinetic;
    let t = Tridiagonal {
        diag,
        off: -kinetic,
    };

    let bound = t.count_below(0.0);
    if bound == 0 {
        return Err(Error::FiniteDifference {
            reason: "discretised Hamiltonian has no negative eigenvalue".into(),
            boundary_amplitude: None,
        });
    }
    let energies: Vec<f64> = (0..bound).map(|k| t.eigenvalue(k, lower, 0.0)).collect();

    let shift = energies[0] - 1e-9 * energies[0].abs().max(1.0);
    let mut v = vec![1.0; grid_points];
    for _ in 0..4 {
        v = t.solve_shifted(shift, &v);
        let norm = v.iter().map(|x| x.abs()).fold(0.0, f64::max);
        v.iter_mut().for_each(|x| *x /= norm);
    }
    let boundary_amplitude = v[0].abs().max(v[grid_points - 1].abs());
    if boundary_amplitude > MAX_BOUNDARY_AMPLITUDE {
        return Err(Error::FiniteDifference {
            reason: format!(
                "ground state reaches the walls of [{x_min}, {x_max}] with relative amplitude {boundary_amplitude:.3e}"
            ),
            boundary_amplitude: Some(boundary_amplitude),
        });
    }

    Ok(FdSpectrum {
        energies,
        boundary_amplitude,
        spacing: h,
    })
}
