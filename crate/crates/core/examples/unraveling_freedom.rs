//! Remixing the Kraus operators of one channel by a unitary leaves the
//! channel and the last element of the norm sequence unchanged, while the
//! intermediate elements can move.
//!
//! ```bash
//! cargo run --example unraveling_freedom
//! ```

use kraus_majorization::channels::{apply, random_density, random_kraus_set, random_unitary, remix};
use kraus_majorization::majorization::pair_ck_sequence;

fn main() -> kraus_majorization::Result<()> {
    let a = random_kraus_set(2, 3, 10)?;
    let b = random_kraus_set(2, 2, 11)?;
    let rho = random_density(2, 12)?;
    println!("original  c_k = {:.6?}", pair_ck_sequence(&a, &b)?.values);
    for seed in 0..4 {
        let remixed = remix(&a, &random_unitary(a.len(), seed))?;
        let drift = apply(&a, &rho)?.matrix().max_abs_diff(apply(&remixed, &rho)?.matrix());
        println!(
            "remix {seed}   c_k = {:.6?}  (channel output drift {drift:.1e})",
            pair_ck_sequence(&remixed, &b)?.values
        );
    }
    Ok(())
}
