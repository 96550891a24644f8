//! Single-mode, pair and two-pair correlation measures across the filling range.

use etapair::measures::{local_measures, local_measures_via_spectra, odlro};
use etapair::{Filling, Result};

fn main() -> Result<()> {
    println!("   a   S_single  S_pair  I_pair  N_raw   N/3     S_4     I_2pair  ODLRO");
    for i in 1..10 {
        let f = Filling::new(i as f64 / 10.0)?;
        let m = local_measures(f);
        let s = local_measures_via_spectra(f)?;
        assert!((m.s_fourmode - s.s_fourmode).abs() < 1e-12);
        println!(
            "  {:.1}  {:7.4}  {:6.4}  {:6.4}  {:6.4}  {:6.4}  {:6.4}  {:7.4}  {:.4}",
            f.a(),
            m.s_single,
            m.s_pair,
            m.i_pair,
            m.n_pair_raw,
            m.n_pair_third,
            m.s_fourmode,
            m.i_twopair,
            odlro(f)
        );
    }
    Ok(())
}
