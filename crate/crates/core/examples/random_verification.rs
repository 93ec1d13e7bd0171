//! Samples random states for a random pair of operations and reports the
//! smallest slack of each relation.
//!
//! ```bash
//! cargo run --example random_verification
//! ```

use kraus_majorization::channels::random_kraus_set;
use kraus_majorization::cli::verify_pair;

fn main() {
    let a = random_kraus_set(3, 3, 1).expect("valid sizes");
    let b = random_kraus_set(3, 2, 2).expect("valid sizes");
    let r = verify_pair(&a, &b, 2000, 42).expect("consistent inputs");
    println!("c_k = {:.6?}", r.c_sequence.values);
    println!("min slack, p (+) q vs (1) (+) omega : {:.3e}", r.min_direct_sum_slack);
    println!("min slack, p (x) q vs omega'        : {:.3e}", r.min_tensor_slack.unwrap_or(f64::NAN));
    for e in &r.entropy {
        println!("  {:<7} alpha={:<4} bound {:.6}  min slack {:.3e}", e.family, e.alpha, e.bound, e.min_slack);
    }
    if let Some(gap) = r.worst_saturation_gap {
        println!("smallest bound - max partial sum over {} subset pairs: {gap:.3e}", r.subset_pairs_checked);
    }
    println!("passed: {}", r.passed);
}
