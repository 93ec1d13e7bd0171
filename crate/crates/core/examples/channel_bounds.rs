//! Every entropic bound for an amplitude-damping channel paired with a
//! dephasing channel, then the same pair written out as channel files for
//! the `maj` binary.
//!
//! ```bash
//! cargo run --example channel_bounds
//! ```

use kraus_majorization::cli::ChannelFile;
use kraus_majorization::{bound_report, ComplexMatrix, EntropyFamily, EntropyQuery, KrausSet, LogBase};

fn amplitude_damping(gamma: f64) -> kraus_majorization::Result<KrausSet> {
    KrausSet::new(vec![
        ComplexMatrix::diag(&[1.0, (1.0 - gamma).sqrt()]),
        ComplexMatrix::from_real(&[&[0.0, gamma.sqrt()], &[0.0, 0.0]])?,
    ])
}

/// Dephasing in the Hadamard basis, so the two channels do not commute.
fn x_dephasing(p: f64) -> kraus_majorization::Result<KrausSet> {
    let x = ComplexMatrix::from_real(&[&[0.0, 1.0], &[1.0, 0.0]])?;
    KrausSet::new(vec![ComplexMatrix::identity(2).scale_real((1.0 - p).sqrt()), x.scale_real(p.sqrt())])
}

fn main() -> kraus_majorization::Result<()> {
    let a = amplitude_damping(0.3)?;
    let b = x_dephasing(0.4)?;

    for alpha in [0.5, 1.0, 2.0] {
        let r = bound_report(&a, &b, EntropyQuery::new(alpha, EntropyFamily::Renyi, LogBase::Two)?)?;
        println!("alpha = {alpha}");
        println!("  c_k     {:?}", r.c_sequence.values);
        println!("  omega   {:?}", r.omega.entries);
        println!("  omega'  {:?}", r.omega_prime.entries);
        if let Some(v) = r.renyi_direct_sum {
            println!("  direct-sum        {v:.6} bits");
        }
        if let Some(v) = r.renyi_direct_sum_alpha_gt1 {
            println!("  direct-sum (a>1)  {v:.6} bits");
        }
        println!("  tensor            {:.6} bits", r.renyi_tensor);
        println!("  Maassen-Uffink    {:.6} bits", r.mu_bound);
        println!("  best applicable   {:.6} bits", r.best_applicable);
    }

    let t = bound_report(&a, &b, EntropyQuery::new(2.0, EntropyFamily::Tsallis, LogBase::Natural)?)?;
    println!("Tsallis alpha = 2 bound: {:.6}", t.tsallis_direct_sum);

    let dir = std::env::temp_dir();
    let (pa, pb) = (dir.join("amplitude_damping.json"), dir.join("x_dephasing.json"));
    std::fs::write(&pa, ChannelFile::from_kraus(&a).to_json()).expect("write channel");
    std::fs::write(&pb, ChannelFile::from_kraus(&b).to_json()).expect("write channel");
    println!();
    println!("maj bounds --a {} --b {} --alpha 1", pa.display(), pb.display());
    Ok(())
}
