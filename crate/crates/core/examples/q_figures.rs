//! Q-measure curves in both pictures at L = 1000.

use etapair::qmeasure::q_measure;
use etapair::{EtaParams, Picture, Result};

fn main() -> Result<()> {
    let l = 1000;
    for (picture, sizes) in [
        (Picture::Momentum, vec![2, 4, 8, 16]),
        (Picture::Direct, vec![4, 8, 16, 32, 100]),
    ] {
        println!("{picture} picture, L = {l}");
        print!("  n_d  ");
        for d in &sizes {
            print!("  D={d:<5}");
        }
        println!();
        for n in (100..=900).step_by(100) {
            print!("  {:.1}  ", n as f64 / l as f64);
            for &d in &sizes {
                print!("  {:.5}", q_measure(EtaParams::new(l, n)?, d, picture)?.q);
            }
            println!();
        }
    }
    Ok(())
}
