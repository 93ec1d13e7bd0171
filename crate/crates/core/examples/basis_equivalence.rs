//! For projective measurements in two orthonormal bases, the norm sequence
//! of the Kraus construction equals the submatrix sequence of the overlap
//! matrix `W_ij = <e_i|f_j>`.
//!
//! ```bash
//! cargo run --example basis_equivalence
//! ```

use num_complex::Complex64;

use kraus_majorization::cli::{basis_equivalence, random_basis_pair};
use kraus_majorization::ComplexMatrix;

/// Discrete Fourier basis; mutually unbiased with the standard basis.
fn fourier(d: usize) -> ComplexMatrix {
    let scale = 1.0 / (d as f64).sqrt();
    let rows = (0..d)
        .map(|j| {
            (0..d)
                .map(|k| Complex64::from_polar(scale, std::f64::consts::TAU * (j * k) as f64 / d as f64))
                .collect()
        })
        .collect();
    ComplexMatrix::from_rows(rows).expect("square")
}

fn main() -> kraus_majorization::Result<()> {
    for d in 2..=4 {
        let eq = basis_equivalence(&ComplexMatrix::identity(d), &fourier(d))?;
        println!("Fourier d={d}: c = {:.6?}", eq.c);
        println!("              s = {:.6?}  (c_1 = 1/sqrt(d) = {:.6})", eq.s, 1.0 / (d as f64).sqrt());
    }
    for seed in 0..3 {
        let (e, f) = random_basis_pair(5, seed);
        let eq = basis_equivalence(&e, &f)?;
        println!("random d=5 seed {seed}: max |c_k - s_k| = {:.2e}", eq.max_difference);
    }
    Ok(())
}
