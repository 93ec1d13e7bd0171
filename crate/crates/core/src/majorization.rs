//! Norm sequences of block submatrices and the majorizing vectors built from them.
//!
//! For two unravelings `{A_i}` and `{B_j}` (padded to a common count `N`)
//! the cross Gram block matrix has blocks `X_ij = A_i B_j^dagger`. Its block
//! submatrices of class `k` are those with `r` block rows and `r'` block
//! columns where `r + r' = k + 1`; `c_k` is the largest spectral norm in the
//! class. The vectors
//!
//! * `omega  = (c_1, c_2 - c_1, ...)` majorize `p (+) q` after prepending a 1,
//! * `omega' = (t_1, t_2 - t_1, ...)` with `t_k = (1 + c_k)^2 / 4` majorize `p (x) q`,
//!
//! both cut off at the first `c_k` that reaches 1.
//!
//! The same enumeration on a unitary overlap matrix (scalar blocks) yields
//! the sequence `s_k` of the orthonormal-basis setting.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::channels::{pad, KrausSet};
use crate::error::{Error, Result};
use crate::linalg::{
    hermitian_eig, spectral_norm_unchecked, stack_vertical, BlockIndex, ComplexMatrix,
};

/// A class value at or above `1 - REACHES_ONE` counts as having reached 1.
pub const REACHES_ONE: f64 = 1e-12;

/// Upper limit on block rows/columns for exhaustive enumeration.
pub const MAX_ENUMERATION_BLOCKS: usize = 16;

/// Orthonormality / unitarity tolerance for bases and overlap matrices.
pub const BASIS_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SequenceKind {
    /// `c_k` of a pair of operations.
    TwoOperation,
    /// `s_k` of a unitary overlap matrix.
    Unitary,
    /// Subset-sum `c~_k` of a single operation.
    SingleOperation,
    /// Block-submatrix `c~_k` of `C_AN C_AN^dagger` (not majorizing in general).
    SingleOperationLiteral,
}

/// Maximal spectral norms per submatrix class, `values[k - 1]` for class `k`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NormSequence {
    pub kind: SequenceKind,
    pub values: Vec<f64>,
}

impl NormSequence {
    pub fn new(kind: SequenceKind, values: Vec<f64>) -> Self {
        Self { kind, values }
    }

    /// Prefix ending at the first value that reaches 1 (the whole sequence
    /// if none does).
    pub fn truncated(&self) -> &[f64] {
        match self.values.iter().position(|&v| v >= 1.0 - REACHES_ONE) {
            Some(i) => &self.values[..=i],
            None => &self.values,
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn last(&self) -> Option<f64> {
        self.values.last().copied()
    }

    /// Nondecreasing up to 1e-12.
    pub fn is_nondecreasing(&self) -> bool {
        self.values.windows(2).all(|w| w[1] >= w[0] - 1e-12)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum OmegaFlavor {
    /// `omega` of the direct-sum relation.
    DirectSum,
    /// `omega'` of the tensor-product relation.
    Tensor,
    /// `omega~` bounding a single operation.
    SingleOperation,
}

/// Majorizing probability vector in construction order (not sorted).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MajorizingVector {
    pub flavor: OmegaFlavor,
    pub entries: Vec<f64>,
}

impl MajorizingVector {
    pub fn as_slice(&self) -> &[f64] {
        &self.entries
    }

    pub fn sum(&self) -> f64 {
        self.entries.iter().sum()
    }
}

/// Successive differences of `map(c_k)` up to the first class reaching 1,
/// where the running total is closed off at exactly 1.
fn differences(values: &[f64], map: impl Fn(f64) -> f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(values.len());
    let mut prev = 0.0_f64;
    for &c in values {
        if c >= 1.0 - REACHES_ONE {
            out.push((1.0 - prev).max(0.0));
            return out;
        }
        let level = map(c).max(prev);
        out.push(level - prev);
        prev = level;
    }
    out
}

/// `omega = (c_1, c_2 - c_1, ..., 1 - c_{L-1})`.
pub fn direct_sum_omega(c: &NormSequence) -> MajorizingVector {
    MajorizingVector {
        flavor: OmegaFlavor::DirectSum,
        entries: differences(&c.values, |v| v),
    }
}

/// `omega' = (t_1, t_2 - t_1, ..., 1 - t_{L-1})` with `t_k = (1 + c_k)^2 / 4`.
pub fn tensor_omega(c: &NormSequence) -> MajorizingVector {
    MajorizingVector {
        flavor: OmegaFlavor::Tensor,
        entries: differences(&c.values, |v| (1.0 + v).powi(2) / 4.0),
    }
}

/// Outcome of a majorization test `x ≺ y`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MajorizationCheck {
    pub holds: bool,
    /// `sum_{i<=k} y_i↓ - sum_{i<=k} x_i↓` for each `k`.
    pub slacks: Vec<f64>,
    /// Smallest entry of `slacks` (`+inf` when both vectors are empty).
    pub min_slack: f64,
    /// `sum y - sum x`.
    pub total_difference: f64,
}

fn sorted_desc(v: &[f64], len: usize) -> Vec<f64> {
    let mut s = v.to_vec();
    s.resize(len, 0.0);
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

/// Tests `x ≺ y` (`y` majorizes `x`) with additive tolerance `tol` on every
/// partial sum and on the totals. The shorter vector is padded with zeros.
pub fn majorizes(y: &[f64], x: &[f64], tol: f64) -> MajorizationCheck {
    let len = x.len().max(y.len());
    let xs = sorted_desc(x, len);
    let ys = sorted_desc(y, len);
    let mut slacks = Vec::with_capacity(len);
    let (mut sx, mut sy) = (0.0, 0.0);
    for (a, b) in xs.iter().zip(&ys) {
        sx += a;
        sy += b;
        slacks.push(sy - sx);
    }
    let min_slack = slacks.iter().copied().fold(f64::INFINITY, f64::min);
    let total_difference = sy - sx;
    let nonnegative = x.iter().chain(y).all(|&v| v >= -tol);
    MajorizationCheck {
        holds: nonnegative && min_slack >= -tol && total_difference.abs() <= tol,
        slacks,
        min_slack,
        total_difference,
    }
}

/// `p (+) q` as one vector.
pub fn direct_sum(p: &[f64], q: &[f64]) -> Vec<f64> {
    p.iter().chain(q).copied().collect()
}

/// `p (x) q` as one vector.
pub fn tensor_product(p: &[f64], q: &[f64]) -> Vec<f64> {
    p.iter().flat_map(|a| q.iter().map(move |b| a * b)).collect()
}

/// `(1) (+) omega`.
pub fn with_leading_one(omega: &MajorizingVector) -> Vec<f64> {
    std::iter::once(1.0).chain(omega.entries.iter().copied()).collect()
}

fn mask_indices(mask: usize) -> Vec<usize> {
    (0..usize::BITS as usize).filter(|b| mask & (1 << b) != 0).collect()
}

/// All non-empty subsets of `0..n` as increasing index lists, ordered by bitmask.
pub fn nonempty_subsets(n: usize) -> Vec<Vec<usize>> {
    (1..1usize << n).map(mask_indices).collect()
}

/// Cross Gram block matrix `X = C_AN C_BN^dagger` with `X_ij = A_i B_j^dagger`.
/// The shorter set is padded with zero operators first.
pub fn cross_gram(ka: &KrausSet, kb: &KrausSet) -> Result<(ComplexMatrix, BlockIndex)> {
    if ka.dim() != kb.dim() {
        return Err(Error::shape(
            format!("operations of equal dimension {}", ka.dim()),
            format!("dimension {}", kb.dim()),
        ));
    }
    let n = ka.len().max(kb.len());
    let (ka, kb) = (pad(ka, n)?, pad(kb, n)?);
    let ca = stack_vertical(ka.operators())?;
    let cb = stack_vertical(kb.operators())?;
    let x = &ca * &cb.adjoint();
    Ok((x, BlockIndex::new(n, n, ka.dim())?))
}

/// Exhaustive class maxima over all block submatrices; `result[k - 1]` is class `k`.
fn class_maxima(x: &ComplexMatrix, idx: BlockIndex) -> Result<Vec<f64>> {
    idx.check(x)?;
    let (m, n, d) = (idx.block_rows, idx.block_cols, idx.block_dim);
    if m > MAX_ENUMERATION_BLOCKS || n > MAX_ENUMERATION_BLOCKS {
        return Err(Error::InvalidInput(format!(
            "{m}x{n} blocks exceed the enumeration limit of {MAX_ENUMERATION_BLOCKS}"
        )));
    }
    let classes = m + n - 1;
    let expand = |mask: usize| -> Vec<usize> {
        mask_indices(mask)
            .into_iter()
            .flat_map(|b| b * d..(b + 1) * d)
            .collect()
    };
    let col_sets: Vec<(usize, Vec<usize>)> = (1..1usize << n)
        .map(|cm| (cm.count_ones() as usize, expand(cm)))
        .collect();
    let maxima = (1..1usize << m)
        .into_par_iter()
        .map(|rm| {
            let rows = expand(rm);
            let r = rm.count_ones() as usize;
            let mut local = vec![0.0_f64; classes];
            for (rc, cols) in &col_sets {
                let sub = x.select(&rows, cols).expect("indices within range");
                let k = r + rc - 1;
                let norm = spectral_norm_unchecked(&sub);
                if norm > local[k - 1] {
                    local[k - 1] = norm;
                }
            }
            local
        })
        .reduce(
            || vec![0.0_f64; classes],
            |a, b| a.iter().zip(&b).map(|(u, v)| u.max(*v)).collect(),
        );
    Ok(maxima)
}

/// `c_k` for `k = 1..=block_rows + block_cols - 1` by exhaustive enumeration
/// of block row/column subsets.
pub fn ck_sequence(x: &ComplexMatrix, idx: BlockIndex) -> Result<NormSequence> {
    Ok(NormSequence::new(SequenceKind::TwoOperation, class_maxima(x, idx)?))
}

/// `ck_sequence(cross_gram(ka, kb))`.
pub fn pair_ck_sequence(ka: &KrausSet, kb: &KrausSet) -> Result<NormSequence> {
    let (x, idx) = cross_gram(ka, kb)?;
    ck_sequence(&x, idx)
}

fn check_index_set(set: &[usize], len: usize, what: &str) -> Result<()> {
    if set.is_empty() {
        return Err(Error::InvalidInput(format!("empty {what} index set")));
    }
    if let Some(&i) = set.iter().find(|&&i| i >= len) {
        return Err(Error::InvalidInput(format!("{what} index {i} out of range (< {len})")));
    }
    if set.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidInput(format!("{what} indices must be strictly increasing: {set:?}")));
    }
    Ok(())
}

fn column_of(k: &KrausSet, set: &[usize]) -> Result<ComplexMatrix> {
    let blocks: Vec<ComplexMatrix> = set.iter().map(|&i| k.operators()[i].clone()).collect();
    stack_vertical(&blocks)
}

/// `||C_AI C_BJ^dagger||` for index subsets `I` of `ka` and `J` of `kb`.
pub fn subset_cross_norm(ka: &KrausSet, kb: &KrausSet, i_set: &[usize], j_set: &[usize]) -> Result<f64> {
    if ka.dim() != kb.dim() {
        return Err(Error::shape(format!("dimension {}", ka.dim()), format!("dimension {}", kb.dim())));
    }
    check_index_set(i_set, ka.len(), "first operation")?;
    check_index_set(j_set, kb.len(), "second operation")?;
    let prod = &column_of(ka, i_set)? * &column_of(kb, j_set)?.adjoint();
    Ok(spectral_norm_unchecked(&prod))
}

/// Maximum of `sum_{i in I} p_i + sum_{j in J} q_j` over states, with the
/// bound `1 + ||C_AI C_BJ^dagger||` it is compared against.
#[derive(Debug, Clone, PartialEq)]
pub struct PartialSumExtremum {
    /// Largest eigenvalue of `G^dagger G` where `G` stacks `A_I` over `B_J`.
    pub achieved_max: f64,
    pub bound: f64,
    /// `bound - achieved_max`.
    pub saturation_gap: f64,
    /// Pure state attaining `achieved_max`.
    pub maximizer: Vec<Complex64>,
}

/// Computes the state-maximised partial sum for index subsets `I`, `J`
/// (zero-based, strictly increasing) and the norm bound on it.
pub fn partial_sum_extremum(
    ka: &KrausSet,
    kb: &KrausSet,
    i_set: &[usize],
    j_set: &[usize],
) -> Result<PartialSumExtremum> {
    let bound = 1.0 + subset_cross_norm(ka, kb, i_set, j_set)?;
    let blocks: Vec<ComplexMatrix> = i_set
        .iter()
        .map(|&i| ka.operators()[i].clone())
        .chain(j_set.iter().map(|&j| kb.operators()[j].clone()))
        .collect();
    let g = stack_vertical(&blocks)?;
    let gram = &g.adjoint() * &g;
    let gram = (&gram + &gram.adjoint()).scale_real(0.5);
    let eig = hermitian_eig(&gram)?;
    let achieved_max = eig.values[0];
    Ok(PartialSumExtremum {
        achieved_max,
        bound,
        saturation_gap: bound - achieved_max,
        maximizer: eig.vector(0),
    })
}

/// Subset-sum sequence `c~_k = max_{|S| = k} ||sum_{i in S} A_i^dagger A_i||`,
/// `k = 1..=N`.
pub fn single_op_ck(k: &KrausSet) -> Result<NormSequence> {
    let n = k.len();
    if n > MAX_ENUMERATION_BLOCKS {
        return Err(Error::InvalidInput(format!(
            "{n} operators exceed the enumeration limit of {MAX_ENUMERATION_BLOCKS}"
        )));
    }
    let effects = crate::channels::povm(k);
    let mut values = vec![0.0_f64; n];
    for mask in 1..1usize << n {
        let sum = mask_indices(mask)
            .into_iter()
            .fold(ComplexMatrix::zeros(k.dim(), k.dim()), |acc, i| &acc + &effects[i]);
        let size = mask.count_ones() as usize;
        values[size - 1] = values[size - 1].max(spectral_norm_unchecked(&sum));
    }
    Ok(NormSequence::new(SequenceKind::SingleOperation, values))
}

/// Class maxima of the block matrix `C_AN C_AN^dagger`, classes `1..=2N-1`.
/// Kept for comparison: unlike [`single_op_ck`] this does not majorize the
/// outcome probabilities in general.
pub fn single_op_ck_literal(k: &KrausSet) -> Result<NormSequence> {
    let (x, idx) = cross_gram(k, k)?;
    Ok(NormSequence::new(SequenceKind::SingleOperationLiteral, class_maxima(&x, idx)?))
}

/// `omega~` from the subset-sum sequence.
pub fn single_op_omega(k: &KrausSet) -> Result<MajorizingVector> {
    let c = single_op_ck(k)?;
    Ok(MajorizingVector {
        flavor: OmegaFlavor::SingleOperation,
        entries: differences(&c.values, |v| v),
    })
}

/// `s_k` of a unitary matrix, truncated after the first value reaching 1.
pub fn unitary_sk(w: &ComplexMatrix) -> Result<NormSequence> {
    let deviation = w.unitary_deviation();
    if deviation > BASIS_TOL {
        return Err(Error::NotUnitary { deviation });
    }
    let d = w.rows();
    let all = class_maxima(w, BlockIndex::new(d, d, 1)?)?;
    let seq = NormSequence::new(SequenceKind::Unitary, all);
    let keep = seq.truncated().len();
    Ok(NormSequence::new(SequenceKind::Unitary, seq.values[..keep].to_vec()))
}

/// `max |<e_i|e_j> - delta_ij|` over the columns of `basis`.
fn orthonormality_deviation(basis: &ComplexMatrix) -> f64 {
    (&basis.adjoint() * basis).max_abs_diff(&ComplexMatrix::identity(basis.cols()))
}

fn ensure_basis(basis: &ComplexMatrix) -> Result<()> {
    if basis.is_empty() || !basis.is_square() {
        return Err(Error::shape(
            "d orthonormal columns of length d",
            format!("{}x{}", basis.rows(), basis.cols()),
        ));
    }
    let deviation = orthonormality_deviation(basis);
    if deviation > BASIS_TOL {
        return Err(Error::NotOrthonormal { deviation });
    }
    Ok(())
}

/// Overlap matrix `W_ij = <e_i|f_j>` of two orthonormal bases given as the
/// columns of `e` and `f`.
pub fn overlap_unitary(e: &ComplexMatrix, f: &ComplexMatrix) -> Result<ComplexMatrix> {
    ensure_basis(e)?;
    ensure_basis(f)?;
    if e.rows() != f.rows() {
        return Err(Error::shape(format!("dimension {}", e.rows()), format!("dimension {}", f.rows())));
    }
    Ok(&e.adjoint() * f)
}

/// Rank-one projectors `|e_i><e_i|` onto the columns of `basis`.
pub fn projectors_from_basis(basis: &ComplexMatrix) -> Result<KrausSet> {
    ensure_basis(basis)?;
    let ops = (0..basis.cols())
        .map(|i| {
            let v = basis.column(i);
            ComplexMatrix::outer(&v, &v)
        })
        .collect();
    KrausSet::new(ops)
}
