//! Direct-sum bound against the Maassen-Uffink bound for two-outcome qubit
//! operations whose Bloch vectors have length `b` and are `angle` apart.
//!
//! ```bash
//! cargo run --example qubit_figure_curves
//! ```

use std::f64::consts::{FRAC_PI_2, FRAC_PI_3};

use kraus_majorization::qubit::{figure_curve, uniform_grid};

fn main() -> kraus_majorization::Result<()> {
    let grid = uniform_grid(11)?;
    for (label, angle) in [("pi/2", FRAC_PI_2), ("pi/3", FRAC_PI_3)] {
        println!("angle {label}, alpha = 1 (bits)");
        println!("{:>6} {:>14} {:>10}  stronger", "b", "majorization", "MU");
        for row in figure_curve(angle, 1.0, &grid)? {
            let stronger = if row.majorization_bound > row.mu_bound { "majorization" } else { "MU" };
            println!("{:>6.2} {:>14.6} {:>10.6}  {stronger}", row.b, row.majorization_bound, row.mu_bound);
        }
        println!();
    }

    // For alpha > 1 the direct-sum column uses the alpha > 1 form of the bound.
    let rows = figure_curve(FRAC_PI_2, 2.0, &[0.5, 1.0])?;
    for row in rows {
        println!("alpha = 2, b = {:.1}: majorization {:.6}, MU {:.6}", row.b, row.majorization_bound, row.mu_bound);
    }
    Ok(())
}
