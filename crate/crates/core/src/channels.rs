//! Quantum operations in Kraus form.
//!
//! A [`KrausSet`] is one particular unraveling of a trace-preserving
//! completely positive map on a `d`-dimensional space. Input and output
//! dimensions are always equal here.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eig, ComplexMatrix, HERMITIAN_TOL};

/// Default tolerance for the completeness relation `sum A_i^dagger A_i = I`.
pub const TPCP_TOL: f64 = 1e-9;

/// Tolerance on Hermiticity, spectrum and trace of a density matrix.
pub const STATE_TOL: f64 = 1e-10;

/// Ordered list of equal-shaped Kraus operators.
#[derive(Debug, Clone, PartialEq)]
pub struct KrausSet {
    dim: usize,
    operators: Vec<ComplexMatrix>,
}

/// Result of checking the completeness relation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TpcpReport {
    pub passed: bool,
    pub max_deviation: f64,
}

impl KrausSet {
    /// Builds a set and checks the completeness relation at [`TPCP_TOL`].
    pub fn new(operators: Vec<ComplexMatrix>) -> Result<Self> {
        Self::with_tolerance(operators, TPCP_TOL)
    }

    /// Builds a set and checks the completeness relation at `tol`.
    pub fn with_tolerance(operators: Vec<ComplexMatrix>, tol: f64) -> Result<Self> {
        let set = Self::unchecked(operators)?;
        let report = set.validate(tol);
        if !report.passed {
            return Err(Error::NotTracePreserving {
                deviation: report.max_deviation,
            });
        }
        Ok(set)
    }

    /// Builds a set checking only shapes; the completeness relation is not
    /// enforced. Used to report on (possibly invalid) user input.
    pub fn unchecked(operators: Vec<ComplexMatrix>) -> Result<Self> {
        let first = operators
            .first()
            .ok_or_else(|| Error::InvalidInput("a Kraus set needs at least one operator".into()))?;
        let dim = first.rows();
        if dim == 0 || !first.is_square() {
            return Err(Error::shape(
                "square non-empty Kraus operators",
                format!("{}x{}", first.rows(), first.cols()),
            ));
        }
        if let Some(bad) = operators.iter().find(|a| a.shape() != (dim, dim)) {
            return Err(Error::shape(
                format!("{dim}x{dim}"),
                format!("{}x{}", bad.rows(), bad.cols()),
            ));
        }
        Ok(Self { dim, operators })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.operators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.operators.is_empty()
    }

    pub fn operators(&self) -> &[ComplexMatrix] {
        &self.operators
    }

    pub fn into_operators(self) -> Vec<ComplexMatrix> {
        self.operators
    }

    /// `sum_i A_i^dagger A_i`.
    pub fn completeness_sum(&self) -> ComplexMatrix {
        self.operators
            .iter()
            .map(|a| &a.adjoint() * a)
            .fold(ComplexMatrix::zeros(self.dim, self.dim), |acc, e| &acc + &e)
    }

    /// Checks `max |sum A_i^dagger A_i - I| <= tol` entrywise.
    pub fn validate(&self, tol: f64) -> TpcpReport {
        let max_deviation = self
            .completeness_sum()
            .max_abs_diff(&ComplexMatrix::identity(self.dim));
        TpcpReport {
            passed: max_deviation <= tol,
            max_deviation,
        }
    }
}

/// Completeness check for a list of operators that must share one shape.
pub fn validate_tpcp(operators: &[ComplexMatrix], tol: f64) -> Result<TpcpReport> {
    Ok(KrausSet::unchecked(operators.to_vec())?.validate(tol))
}

/// Hermitian, positive semidefinite, unit-trace matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
}

impl DensityMatrix {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        if matrix.is_empty() || !matrix.is_square() {
            return Err(Error::InvalidState(format!(
                "expected a non-empty square matrix, got {}x{}",
                matrix.rows(),
                matrix.cols()
            )));
        }
        let asymmetry = matrix.hermitian_deviation();
        if asymmetry > STATE_TOL.max(HERMITIAN_TOL) {
            return Err(Error::InvalidState(format!("not Hermitian (deviation {asymmetry:e})")));
        }
        let trace = matrix.trace();
        if (trace.re - 1.0).abs() > STATE_TOL || trace.im.abs() > STATE_TOL {
            return Err(Error::InvalidState(format!("trace {trace} differs from 1")));
        }
        let lowest = hermitian_eig(&matrix)?.values.last().copied().unwrap_or(0.0);
        if lowest < -STATE_TOL {
            return Err(Error::InvalidState(format!("negative eigenvalue {lowest:e}")));
        }
        Ok(Self { matrix })
    }

    /// Rank-one state `|psi><psi|`; the vector is normalised first.
    pub fn pure(psi: &[Complex64]) -> Result<Self> {
        let norm = psi.iter().map(Complex64::norm_sqr).sum::<f64>().sqrt();
        if psi.is_empty() || norm == 0.0 || !norm.is_finite() {
            return Err(Error::InvalidState("pure state needs a non-zero finite vector".into()));
        }
        let v: Vec<Complex64> = psi.iter().map(|z| z / norm).collect();
        Self::new(ComplexMatrix::outer(&v, &v))
    }

    /// The maximally mixed state `I/d`.
    pub fn maximally_mixed(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidState("dimension must be positive".into()));
        }
        Self::new(ComplexMatrix::identity(dim).scale_real(1.0 / dim as f64))
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }
}

/// Outcome probabilities, clamped to `[0, 1]`.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct ProbVector(Vec<f64>);

impl ProbVector {
    /// Clamps each entry into `[0, 1]`. Entries outside
    /// `[-1e-12, 1 + 1e-12]` or non-finite ones are rejected.
    pub fn new(entries: Vec<f64>) -> Result<Self> {
        if let Some(&bad) = entries
            .iter()
            .find(|&&p| !p.is_finite() || !(-1e-12..=1.0 + 1e-12).contains(&p))
        {
            return Err(Error::InvalidInput(format!("probability {bad} outside [0, 1]")));
        }
        Ok(Self(entries.into_iter().map(|p| p.clamp(0.0, 1.0)).collect()))
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn sum(&self) -> f64 {
        self.0.iter().sum()
    }
}

impl std::ops::Deref for ProbVector {
    type Target = [f64];
    fn deref(&self) -> &[f64] {
        &self.0
    }
}

fn ensure_dim(k: &KrausSet, rho: &DensityMatrix) -> Result<()> {
    if k.dim() != rho.dim() {
        return Err(Error::shape(
            format!("state of dimension {}", k.dim()),
            format!("dimension {}", rho.dim()),
        ));
    }
    Ok(())
}

/// Appends zero operators until the set has `count` elements.
pub fn pad(k: &KrausSet, count: usize) -> Result<KrausSet> {
    if count < k.len() {
        return Err(Error::InvalidInput(format!(
            "cannot pad {} operators down to {count}",
            k.len()
        )));
    }
    let mut operators = k.operators.clone();
    operators.resize(count, ComplexMatrix::zeros(k.dim, k.dim));
    Ok(KrausSet {
        dim: k.dim,
        operators,
    })
}

/// `sum_i A_i rho A_i^dagger`.
pub fn apply(k: &KrausSet, rho: &DensityMatrix) -> Result<DensityMatrix> {
    ensure_dim(k, rho)?;
    let out = k
        .operators
        .iter()
        .map(|a| &(a * rho.matrix()) * &a.adjoint())
        .fold(ComplexMatrix::zeros(k.dim, k.dim), |acc, t| &acc + &t);
    DensityMatrix::new(out)
}

/// `p_i = tr(A_i^dagger A_i rho)`.
pub fn probabilities(k: &KrausSet, rho: &DensityMatrix) -> Result<ProbVector> {
    ensure_dim(k, rho)?;
    let r = rho.matrix();
    let d = k.dim;
    let entries = k
        .operators
        .iter()
        .map(|a| {
            // tr(A^dagger A rho) = sum_{m,i,j} conj(A_mi) A_mj rho_ji
            let mut acc = Complex64::new(0.0, 0.0);
            for m in 0..d {
                for i in 0..d {
                    let ami = a[(m, i)].conj();
                    if ami == Complex64::new(0.0, 0.0) {
                        continue;
                    }
                    for j in 0..d {
                        acc += ami * a[(m, j)] * r[(j, i)];
                    }
                }
            }
            acc.re
        })
        .collect();
    ProbVector::new(entries)
}

/// Another unraveling of the same map: `A~_i = sum_j gamma_ij A_j`.
pub fn remix(k: &KrausSet, gamma: &ComplexMatrix) -> Result<KrausSet> {
    let n = k.len();
    if gamma.shape() != (n, n) {
        return Err(Error::shape(
            format!("{n}x{n} mixing matrix"),
            format!("{}x{}", gamma.rows(), gamma.cols()),
        ));
    }
    let deviation = gamma.unitary_deviation();
    if deviation > 1e-10 {
        return Err(Error::NotUnitary { deviation });
    }
    let operators = (0..n)
        .map(|i| {
            (0..n).fold(ComplexMatrix::zeros(k.dim, k.dim), |acc, j| {
                &acc + &k.operators[j].scale(gamma[(i, j)])
            })
        })
        .collect();
    Ok(KrausSet {
        dim: k.dim,
        operators,
    })
}

/// POVM elements `E_i = A_i^dagger A_i`.
pub fn povm(k: &KrausSet) -> Vec<ComplexMatrix> {
    k.operators.iter().map(|a| &a.adjoint() * a).collect()
}

/// Seeded generator used by every random sampler in the crate.
pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `rows x cols` matrix of independent standard complex Gaussians
/// (real and imaginary parts each `N(0, 1/2)`).
pub fn gaussian_matrix(rows: usize, cols: usize, rng: &mut ChaCha8Rng) -> ComplexMatrix {
    let scale = 0.5_f64.sqrt();
    let data = (0..rows * cols)
        .map(|_| {
            let re: f64 = StandardNormal.sample(rng);
            let im: f64 = StandardNormal.sample(rng);
            Complex64::new(re * scale, im * scale)
        })
        .collect();
    ComplexMatrix::new(rows, cols, data).expect("finite Gaussian samples")
}

/// Orthonormalises the columns of a tall matrix by modified Gram-Schmidt
/// (two passes). Columns must be linearly independent, which holds almost
/// surely for Gaussian input.
pub fn orthonormalize_columns(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    let (rows, cols) = m.shape();
    if cols > rows {
        return Err(Error::InvalidInput(format!(
            "cannot orthonormalise {cols} columns in dimension {rows}"
        )));
    }
    let mut q: Vec<Vec<Complex64>> = (0..cols).map(|j| m.column(j)).collect();
    for j in 0..cols {
        for _pass in 0..2 {
            for i in 0..j {
                let proj: Complex64 = q[i].iter().zip(&q[j]).map(|(a, b)| a.conj() * b).sum();
                let (head, tail) = q.split_at_mut(j);
                for (x, e) in tail[0].iter_mut().zip(&head[i]) {
                    *x -= proj * e;
                }
            }
        }
        let norm = q[j].iter().map(Complex64::norm_sqr).sum::<f64>().sqrt();
        if norm < 1e-12 {
            return Err(Error::InvalidInput("columns are linearly dependent".into()));
        }
        q[j].iter_mut().for_each(|x| *x /= norm);
    }
    ComplexMatrix::from_columns(&q)
}

/// Haar-random unitary of size `n` drawn from `rng`.
pub fn random_unitary_with(n: usize, rng: &mut ChaCha8Rng) -> ComplexMatrix {
    loop {
        if let Ok(u) = orthonormalize_columns(&gaussian_matrix(n, n, rng)) {
            return u;
        }
    }
}

/// Haar-random unitary of size `n` from a seed.
pub fn random_unitary(n: usize, seed: u64) -> ComplexMatrix {
    random_unitary_with(n, &mut rng_from_seed(seed))
}

/// Hilbert-Schmidt ensemble sample `G G^dagger / tr(G G^dagger)`.
pub fn random_density_with(dim: usize, rng: &mut ChaCha8Rng) -> Result<DensityMatrix> {
    if dim == 0 {
        return Err(Error::InvalidInput("dimension must be positive".into()));
    }
    let g = gaussian_matrix(dim, dim, rng);
    let mut w = &g * &g.adjoint();
    let tr = w.trace().re;
    w = w.scale_real(1.0 / tr);
    // Exact Hermiticity and real diagonal.
    let w = (&w + &w.adjoint()).scale_real(0.5);
    DensityMatrix::new(w)
}

pub fn random_density(dim: usize, seed: u64) -> Result<DensityMatrix> {
    random_density_with(dim, &mut rng_from_seed(seed))
}

/// Random unraveling obtained by slicing a Haar-like isometry
/// `C^d -> C^(count*d)` into `count` stacked `d x d` blocks.
pub fn random_kraus_set_with(dim: usize, count: usize, rng: &mut ChaCha8Rng) -> Result<KrausSet> {
    if dim == 0 || count == 0 {
        return Err(Error::InvalidInput("dimension and operator count must be positive".into()));
    }
    let v = loop {
        if let Ok(v) = orthonormalize_columns(&gaussian_matrix(count * dim, dim, rng)) {
            break v;
        }
    };
    let all_cols: Vec<usize> = (0..dim).collect();
    let operators = (0..count)
        .map(|b| v.select(&(b * dim..(b + 1) * dim).collect::<Vec<_>>(), &all_cols))
        .collect::<Result<Vec<_>>>()?;
    KrausSet::new(operators)
}

pub fn random_kraus_set(dim: usize, count: usize, seed: u64) -> Result<KrausSet> {
    random_kraus_set_with(dim, count, &mut rng_from_seed(seed))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn z_projectors() -> KrausSet {
        KrausSet::new(vec![ComplexMatrix::diag(&[1.0, 0.0]), ComplexMatrix::diag(&[0.0, 1.0])]).unwrap()
    }

    fn plus_state() -> DensityMatrix {
        let h = 0.5_f64.sqrt();
        DensityMatrix::pure(&[Complex64::new(h, 0.0), Complex64::new(h, 0.0)]).unwrap()
    }

    #[test]
    fn completeness_check() {
        let i2 = ComplexMatrix::identity(2);
        let r = validate_tpcp(std::slice::from_ref(&i2), 1e-9).unwrap();
        assert!(r.passed);
        assert_eq!(r.max_deviation, 0.0);

        let half = i2.scale_real(0.5_f64.sqrt());
        assert!(validate_tpcp(&[half.clone(), half], 1e-9).unwrap().passed);

        let r = validate_tpcp(&[i2.clone(), i2.clone()], 1e-9).unwrap();
        assert!(!r.passed);
        assert_abs_diff_eq!(r.max_deviation, 1.0, epsilon = 1e-15);

        assert!(validate_tpcp(&[i2, ComplexMatrix::identity(3)], 1e-9).is_err());
        assert!(matches!(
            KrausSet::new(vec![ComplexMatrix::identity(2).scale_real(2.0)]),
            Err(Error::NotTracePreserving { .. })
        ));
    }

    #[test]
    fn padding_appends_zero_operators() {
        let k = KrausSet::new(vec![ComplexMatrix::identity(2)]).unwrap();
        let padded = pad(&k, 2).unwrap();
        assert_eq!(padded.len(), 2);
        assert_eq!(padded.operators()[1], ComplexMatrix::zeros(2, 2));
        assert_eq!(pad(&k, 1).unwrap(), k);
        assert!(pad(&padded, 1).is_err());

        let rho = random_density(2, 7).unwrap();
        let p = probabilities(&z_projectors(), &rho).unwrap();
        let pp = probabilities(&pad(&z_projectors(), 4).unwrap(), &rho).unwrap();
        assert_eq!(&pp[..2], &p[..]);
        assert_eq!(&pp[2..], &[0.0, 0.0]);
    }

    #[test]
    fn channel_application() {
        let rho = random_density(3, 11).unwrap();
        let id = KrausSet::new(vec![ComplexMatrix::identity(3)]).unwrap();
        assert!(apply(&id, &rho).unwrap().matrix().max_abs_diff(rho.matrix()) < 1e-15);

        let dephased = apply(&z_projectors(), &plus_state()).unwrap();
        assert!(dephased.matrix().max_abs_diff(&ComplexMatrix::identity(2).scale_real(0.5)) < 1e-15);

        assert!(apply(&id, &plus_state()).is_err());
    }

    #[test]
    fn probability_examples() {
        let mixed = DensityMatrix::maximally_mixed(2).unwrap();
        assert_eq!(probabilities(&z_projectors(), &mixed).unwrap().as_slice(), &[0.5, 0.5]);
        let zero = DensityMatrix::new(ComplexMatrix::diag(&[1.0, 0.0])).unwrap();
        assert_eq!(probabilities(&z_projectors(), &zero).unwrap().as_slice(), &[1.0, 0.0]);
    }

    #[test]
    fn remix_examples() {
        let z = z_projectors();
        assert_eq!(remix(&z, &ComplexMatrix::identity(2)).unwrap(), z);
        let swap = ComplexMatrix::from_real(&[&[0.0, 1.0], &[1.0, 0.0]]).unwrap();
        let swapped = remix(&z, &swap).unwrap();
        assert_eq!(swapped.operators()[0], z.operators()[1]);
        assert_eq!(swapped.operators()[1], z.operators()[0]);

        let h = 0.5_f64.sqrt();
        let hadamard = ComplexMatrix::from_real(&[&[h, h], &[h, -h]]).unwrap();
        let mixed = remix(&z, &hadamard).unwrap();
        assert!(mixed.operators()[0].max_abs_diff(&ComplexMatrix::diag(&[h, h])) < 1e-15);
        assert!(mixed.operators()[1].max_abs_diff(&ComplexMatrix::diag(&[h, -h])) < 1e-15);
        assert!(mixed.validate(1e-12).passed);
        let rho = random_density(2, 3).unwrap();
        let a = apply(&mixed, &rho).unwrap();
        let b = apply(&z, &rho).unwrap();
        assert!(a.matrix().max_abs_diff(b.matrix()) < 1e-12);

        let not_unitary = ComplexMatrix::from_real(&[&[1.0, 1.0], &[0.0, 1.0]]).unwrap();
        assert!(matches!(remix(&z, &not_unitary), Err(Error::NotUnitary { .. })));
    }

    #[test]
    fn povm_of_identity_and_four_operator_example() {
        let id = KrausSet::new(vec![ComplexMatrix::identity(2)]).unwrap();
        assert_eq!(povm(&id), vec![ComplexMatrix::identity(2)]);

        let (a, b) = (0.3_f64, 0.6_f64);
        let k = KrausSet::new(vec![
            ComplexMatrix::from_real(&[&[0.0, a.sqrt()], &[0.0, 0.0]]).unwrap(),
            ComplexMatrix::from_real(&[&[0.0, 0.0], &[b.sqrt(), 0.0]]).unwrap(),
            ComplexMatrix::diag(&[0.0, (1.0 - a).sqrt()]),
            ComplexMatrix::diag(&[(1.0 - b).sqrt(), 0.0]),
        ])
        .unwrap();
        let expected = [[0.0, 0.3], [0.6, 0.0], [0.0, 0.7], [0.4, 0.0]];
        for (e, want) in povm(&k).iter().zip(expected) {
            assert!(e.max_abs_diff(&ComplexMatrix::diag(&want)) < 1e-15);
        }
    }

    #[test]
    fn random_density_properties() {
        let one = random_density(1, 5).unwrap();
        assert_abs_diff_eq!(one.matrix()[(0, 0)].re, 1.0, epsilon = 1e-15);
        assert_eq!(random_density(4, 99).unwrap(), random_density(4, 99).unwrap());
        let rho = random_density(5, 1).unwrap();
        assert_abs_diff_eq!(rho.matrix().trace().re, 1.0, epsilon = 1e-12);
        assert_ne!(random_density(3, 1).unwrap(), random_density(3, 2).unwrap());
    }

    #[test]
    fn random_kraus_set_properties() {
        let single = random_kraus_set(3, 1, 4).unwrap();
        assert_eq!(single.len(), 1);
        assert!(single.operators()[0].unitary_deviation() < 1e-12);
        for (d, n) in [(2, 2), (3, 3), (2, 5)] {
            let k = random_kraus_set(d, n, 17).unwrap();
            assert!(k.validate(1e-9).passed);
        }
        assert_eq!(random_kraus_set(2, 3, 8).unwrap(), random_kraus_set(2, 3, 8).unwrap());
    }

    #[test]
    fn density_validation() {
        assert!(DensityMatrix::new(ComplexMatrix::diag(&[0.5, 0.4])).is_err());
        assert!(DensityMatrix::new(ComplexMatrix::diag(&[1.5, -0.5])).is_err());
        let asym = ComplexMatrix::from_real(&[&[0.5, 0.1], &[0.0, 0.5]]).unwrap();
        assert!(DensityMatrix::new(asym).is_err());
        assert!(ProbVector::new(vec![1.1]).is_err());
        assert_eq!(ProbVector::new(vec![-1e-13, 1.0]).unwrap().as_slice(), &[0.0, 1.0]);
    }
}
