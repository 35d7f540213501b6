//! Extinction probability and fade-out threshold across a range of R0.
//!
//!     cargo run --example threshold

use epibandit::threshold::{extinction_probability, fade_out_threshold, OffspringModel};

fn main() -> epibandit::Result<()> {
    let cutoff = 1e-10;
    println!("{:>5} {:>6} {:>12} {:>6}", "r0", "k", "p_ext", "T0");
    for k in [0.1, 0.5, 1.0] {
        for r0 in [1.2, 1.4, 1.8, 2.4, 3.0] {
            let model = OffspringModel::new(r0, k, 0.0)?;
            let p = extinction_probability(&model, 1e-12)?;
            let t0 = fade_out_threshold(&model, cutoff)?;
            println!("{r0:>5.1} {k:>6.1} {p:>12.8} {t0:>6}");
        }
    }

    // a share of controlled cases that never transmit pushes the threshold up
    for c in [0.0, 0.1, 0.2] {
        let model = OffspringModel::new(1.4, 0.5, c)?;
        match fade_out_threshold(&model, cutoff) {
            Ok(t0) => println!("controlled fraction {c:.1}: T0 = {t0}"),
            Err(e) => println!("controlled fraction {c:.1}: {e}"),
        }
    }
    Ok(())
}
