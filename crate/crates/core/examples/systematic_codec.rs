//! Systematic code: info symbols are sent as is, field parities travel in
//! pairs through a Gray mapping.

use lmpe::constructions::{CodeSpec, LmpeCode, Variant};
use lmpe::sim::simulate;

fn main() -> lmpe::Result<()> {
    let spec = CodeSpec {
        q: Some(27),
        m: Some(16),
        g: Some(2),
        design_t: Some(4),
        ..CodeSpec::new(Variant::Systematic, 25, 1, 3)
    };
    let code = LmpeCode::build(&spec)?;
    println!(
        "n={} info={} parity columns={} field parities={} rate={:.4}",
        code.n(),
        code.info_len(),
        code.parity_len(),
        code.field_code().redundancy(),
        code.rate()
    );
    let r = simulate(&code, 2000, 11)?;
    println!("{}/{} trials with up to 3 errors decoded", r.decode_success, r.trials);
    Ok(())
}
