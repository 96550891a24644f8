//! Brute-force reduced density matrices checked against the closed-form spectra.

use etapair::slotstate::{build_eta_state, reduce, two_block_negativity};
use etapair::spectra::block_spectrum_finite;
use etapair::{BlockSpec, EtaParams, Result};

fn main() -> Result<()> {
    let params = EtaParams::new(10, 4)?;
    let state = build_eta_state(params)?;
    for text in ["u:1", "p:1", "u:1,2;p:3", "u:1,8;p:3,4"] {
        let block = BlockSpec::parse(10, etapair::Picture::Momentum, text)?;
        let oracle = reduce(&state, &block)?;
        let closed = block_spectrum_finite(params, &block)?;
        println!(
            "{text:<12} D1={} D2={}  S_oracle={:.6}  S_closed={:.6}  max|Δλ|={:.1e}",
            block.d1(),
            block.d2(),
            oracle.entropy()?,
            closed.entropy()?,
            closed.max_sorted_deviation(&oracle.spectrum())
        );
    }
    let a = BlockSpec::momentum_modes(10, &[1])?;
    let b = BlockSpec::momentum_modes(10, &[9])?;
    let c = BlockSpec::momentum_modes(10, &[2])?;
    println!("N(k, -k) = {:.6}", two_block_negativity(&state, &a, &b)?);
    println!("N(k, k') = {:.6}", two_block_negativity(&state, &a, &c)?);
    Ok(())
}
