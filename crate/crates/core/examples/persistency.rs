//! How many local measurements it takes to destroy all entanglement.

use etapair::persistency::{
    guaranteed_persistency, persistency_optimistic, simulate_trajectories, Strategy,
};
use etapair::{EtaParams, Picture, Result};

fn main() -> Result<()> {
    for picture in [Picture::Direct, Picture::Momentum] {
        println!("{picture} picture, L = 6");
        for n in 0..=6 {
            let params = EtaParams::new(6, n)?;
            let run = simulate_trajectories(params, picture, Strategy::Random, 2_000, 7)?;
            println!(
                "  N_d={n}  optimistic={}  guaranteed={}  sampled min={:?} mean={:.3}  censored={}",
                persistency_optimistic(params, picture),
                guaranteed_persistency(params, picture),
                run.stats.min,
                run.stats.mean,
                run.stats.censored
            );
        }
    }
    Ok(())
}
