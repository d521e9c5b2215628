//! Sphere-packing and Gilbert-Varshamov rates for n = 1023, k = 100.

use lmpe::bounds::{gv_bound, redundancy_bits, sphere_packing, BoundVariant, RedundancyMethod};

fn main() -> lmpe::Result<()> {
    for l in [1, 10, 20] {
        println!("l={l}");
        println!("{:>3} {:>9} {:>9}", "t", "SPB", "GVB");
        for t in [1, 5, 10, 15] {
            let spb = sphere_packing(1023, 100, t, l, BoundVariant::Relaxed)?;
            let gv = gv_bound(1023, 100, t, l)?;
            println!("{t:>3} {:>9.5} {:>9.5}", spb.rate, gv.rate);
        }
    }
    println!("redundancy in bits at n=56, k=12, l=1, t=1:");
    for m in RedundancyMethod::ALL {
        println!("  {:<18} {:.3}", m.name(), redundancy_bits(m, 56, 12, 1, 1)?);
    }
    Ok(())
}
