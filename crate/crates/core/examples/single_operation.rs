//! Majorizing vector for the outcome distribution of a single operation,
//! on the four-operator qubit example.
//!
//! ```bash
//! cargo run --example single_operation
//! ```

use kraus_majorization::channels::{probabilities, random_density};
use kraus_majorization::entropy::{renyi, LogBase};
use kraus_majorization::majorization::{majorizes, single_op_ck, single_op_ck_literal, single_op_omega};
use kraus_majorization::{ComplexMatrix, KrausSet};

fn four_operator(a: f64, b: f64) -> kraus_majorization::Result<KrausSet> {
    KrausSet::new(vec![
        ComplexMatrix::from_real(&[&[0.0, a.sqrt()], &[0.0, 0.0]])?,
        ComplexMatrix::from_real(&[&[0.0, 0.0], &[b.sqrt(), 0.0]])?,
        ComplexMatrix::diag(&[0.0, (1.0 - a).sqrt()]),
        ComplexMatrix::diag(&[(1.0 - b).sqrt(), 0.0]),
    ])
}

fn main() -> kraus_majorization::Result<()> {
    for (a, b) in [(0.5, 0.5), (0.3, 0.6), (0.9, 0.2)] {
        let k = four_operator(a, b)?;
        let omega = single_op_omega(&k)?;
        println!("a={a}, b={b}");
        println!("  c~ subset sums    {:.6?}", single_op_ck(&k)?.values);
        println!("  c~ block classes  {:.6?}", single_op_ck_literal(&k)?.values);
        println!("  omega~            {:.6?}", omega.entries);
        println!("  H_1(omega~)       {:.6} nats", renyi(&omega.entries, 1.0, LogBase::Natural)?);

        let rho = random_density(2, 7)?;
        let p = probabilities(&k, &rho)?;
        let check = majorizes(&omega.entries, &p, 1e-9);
        println!("  random state p = {:.4?}, p majorized: {}", p.as_slice(), check.holds);
    }
    Ok(())
}
