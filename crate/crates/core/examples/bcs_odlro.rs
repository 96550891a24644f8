//! BCS pair entanglement and the ODLRO factorization at long distance.

use etapair::bcs::{bcs_profile, factorization_residual, pair_entanglement, CorrelatorGrid};
use etapair::Result;

fn main() -> Result<()> {
    let profile = bcs_profile(64, 1.0, 0.0, 0.5)?;
    let grid = CorrelatorGrid::new(&profile)?;
    println!("two-route f residual: {:.1e}", grid.route_residual());
    for e in pair_entanglement(&profile).iter().step_by(8) {
        println!(
            "  k={:6.3}  C={:.4}  N(norm)={:.4}",
            e.k, e.concurrence, e.negativity_norm
        );
    }
    for dx in 0..6 {
        println!(
            "  f({dx}) = {:+.6}   g({dx}) = {:+.6}",
            grid.f[dx].re, grid.g[dx].re
        );
    }
    for l in [64, 128, 256] {
        let p = bcs_profile(l, 1.0, 0.0, 0.5)?;
        println!(
            "L={l:<4} factorization residual {:.2e}",
            factorization_residual(&p)
        );
    }
    Ok(())
}
