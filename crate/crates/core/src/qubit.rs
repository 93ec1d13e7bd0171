//! Single-qubit operations with two Kraus operators parameterised by a
//! Bloch vector, their closed-form norm sequences, and the curve data
//! comparing the direct-sum bound with the Maassen-Uffink bound.

use num_complex::Complex64;
use serde::Serialize;

use crate::channels::KrausSet;
use crate::entropy::{renyi, renyi_direct_sum_alpha_gt1, LogBase, SHANNON_WINDOW};
use crate::error::{Error, Result};
use crate::linalg::{psd_sqrt, ComplexMatrix};
use crate::majorization::{direct_sum_omega, NormSequence, SequenceKind};

/// Allowed excess of a Bloch vector length over 1.
pub const BLOCH_LENGTH_TOL: f64 = 1e-12;

/// Tolerance on `|m| = 1` for projective measurements.
pub const UNIT_TOL: f64 = 1e-9;

/// Default number of grid points for curve generation.
pub const DEFAULT_GRID: usize = 101;

pub fn pauli_x() -> ComplexMatrix {
    ComplexMatrix::from_real(&[&[0.0, 1.0], &[1.0, 0.0]]).expect("static shape")
}

pub fn pauli_y() -> ComplexMatrix {
    let i = Complex64::new(0.0, 1.0);
    ComplexMatrix::from_rows(vec![vec![Complex64::new(0.0, 0.0), -i], vec![i, Complex64::new(0.0, 0.0)]])
        .expect("static shape")
}

pub fn pauli_z() -> ComplexMatrix {
    ComplexMatrix::diag(&[1.0, -1.0])
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BlochVector {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl BlochVector {
    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    pub const fn zero() -> Self {
        Self::new(0.0, 0.0, 0.0)
    }

    /// Vector of the given length in the x-z plane at `angle` from the z axis.
    pub fn in_xz_plane(length: f64, angle: f64) -> Self {
        Self::new(length * angle.sin(), 0.0, length * angle.cos())
    }

    pub fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn dot(&self, other: &Self) -> f64 {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    /// `v . sigma`.
    pub fn sigma(&self) -> ComplexMatrix {
        let mut m = pauli_x().scale_real(self.x);
        m = &m + &pauli_y().scale_real(self.y);
        &m + &pauli_z().scale_real(self.z)
    }

    /// `(I + sign * v . sigma) / 2`.
    pub fn half_effect(&self, sign: f64) -> ComplexMatrix {
        (&ComplexMatrix::identity(2) + &self.sigma().scale_real(sign)).scale_real(0.5)
    }
}

/// Two-outcome operation with `A_+/-^dagger A_+/- = (I +/- v.sigma)/2`,
/// using the positive representatives `A_+/- = ((I +/- v.sigma)/2)^(1/2)`.
pub fn bloch_pair_channel(v: BlochVector) -> Result<KrausSet> {
    let len = v.norm();
    if !len.is_finite() || len > 1.0 + BLOCH_LENGTH_TOL {
        return Err(Error::InvalidInput(format!("Bloch vector length {len} exceeds 1")));
    }
    let plus = psd_sqrt(&v.half_effect(1.0))?;
    let minus = psd_sqrt(&v.half_effect(-1.0))?;
    KrausSet::new(vec![plus, minus])
}

/// Closed-form `(c_1, c_2, c_3)` for two Bloch-pair operations:
///
/// `c_1^2 = (1 + |a.b| + sqrt((1 + |a.b|)^2 - (1 - a^2)(1 - b^2))) / 4`,
/// `c_2 = sqrt((1 + max(a, b)) / 2)`, `c_3 = 1`.
///
/// Lengths above 1 are clamped to 1.
pub fn closed_form_ck(a: BlochVector, b: BlochVector) -> NormSequence {
    let la = a.norm().min(1.0);
    let lb = b.norm().min(1.0);
    let ab = a.dot(&b).abs();
    let disc = ((1.0 + ab).powi(2) - (1.0 - la * la) * (1.0 - lb * lb)).max(0.0);
    let c1 = (0.25 * (1.0 + ab + disc.sqrt())).sqrt();
    let c2 = ((1.0 + la.max(lb)) / 2.0).sqrt();
    NormSequence::new(SequenceKind::TwoOperation, vec![c1, c2, 1.0])
}

/// Rank-one projectors `(I +/- m.sigma)/2` for a unit Bloch vector.
pub fn projective_basis(m: BlochVector) -> Result<KrausSet> {
    let len = m.norm();
    if (len - 1.0).abs() > UNIT_TOL {
        return Err(Error::InvalidInput(format!("projective measurement needs a unit vector, got length {len}")));
    }
    KrausSet::new(vec![m.half_effect(1.0), m.half_effect(-1.0)])
}

/// One row of curve data, bounds in bits.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CurveRow {
    pub b: f64,
    pub majorization_bound: f64,
    pub mu_bound: f64,
}

/// `n` evenly spaced points from 0 to 1 inclusive.
pub fn uniform_grid(n: usize) -> Result<Vec<f64>> {
    if n < 2 {
        return Err(Error::InvalidInput(format!("grid needs at least 2 points, got {n}")));
    }
    Ok((0..n).map(|i| i as f64 / (n - 1) as f64).collect())
}

/// Direct-sum bound and Maassen-Uffink bound (both in bits) for two Bloch
/// vectors of equal length `b` separated by `angle`, for each `b` in the grid.
///
/// For `alpha <= 1` the majorization column is `H_alpha(omega)`; for
/// `alpha > 1` it is the `alpha > 1` direct-sum variant.
pub fn figure_curve(angle: f64, alpha: f64, b_grid: &[f64]) -> Result<Vec<CurveRow>> {
    if !(alpha > 0.0) || !alpha.is_finite() {
        return Err(Error::InvalidInput(format!("entropy order must be positive, got {alpha}")));
    }
    if !angle.is_finite() {
        return Err(Error::InvalidInput(format!("angle must be finite, got {angle}")));
    }
    if let Some(bad) = b_grid.iter().find(|b| !(0.0..=1.0).contains(*b)) {
        return Err(Error::InvalidInput(format!("grid value {bad} outside [0, 1]")));
    }
    b_grid
        .iter()
        .map(|&b| {
            let va = BlochVector::in_xz_plane(b, 0.0);
            let vb = BlochVector::in_xz_plane(b, angle);
            let c = closed_form_ck(va, vb);
            let omega = direct_sum_omega(&c);
            let majorization_bound = if alpha <= 1.0 + SHANNON_WINDOW {
                renyi(&omega.entries, alpha, LogBase::Two)?
            } else {
                renyi_direct_sum_alpha_gt1(&omega.entries, alpha, LogBase::Two)?
            };
            let mu_bound = (-2.0 * c.values[0].log2()).max(0.0);
            Ok(CurveRow {
                b,
                majorization_bound,
                mu_bound,
            })
        })
        .collect()
}
