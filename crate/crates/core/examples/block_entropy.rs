//! Unpaired blocks grow linearly, paired blocks only logarithmically.

use etapair::measures::{
    block_entropy_paired, block_entropy_paired_asymptotic, block_entropy_unpaired,
};
use etapair::{Filling, Result};

fn main() -> Result<()> {
    let half = Filling::new(0.5)?;
    println!("unpaired modes at a = 1/2:");
    for d1 in [1, 2, 4, 8] {
        println!(
            "  D1 = {d1:<3} S = {:.4} bits",
            block_entropy_unpaired(half, d1)
        );
    }
    println!("paired modes at a = 1/2 (exact vs Gaussian):");
    for d2 in [10, 100, 1_000, 10_000] {
        let exact = block_entropy_paired(half, d2);
        let gauss = block_entropy_paired_asymptotic(half, d2)?;
        println!(
            "  D2 = {d2:<6} S = {exact:.6}  asymptote {gauss:.6}  gap {:.1e}",
            (exact - gauss).abs()
        );
    }
    Ok(())
}
