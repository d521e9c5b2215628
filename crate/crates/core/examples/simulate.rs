//! Random and exhaustive channel runs against the k = 12 Hamming code.

use lmpe::constructions::{CodeSpec, LmpeCode};
use lmpe::sim::{simulate, simulate_exhaustive, EXHAUSTIVE_GUARD};

fn main() -> lmpe::Result<()> {
    let code = LmpeCode::build(&CodeSpec::example_one())?;
    let r = simulate(&code, 10_000, 7)?;
    println!("{}", serde_json::to_string_pretty(&r)?);
    let e = simulate_exhaustive(&code, 3, 7, EXHAUSTIVE_GUARD)?;
    println!(
        "exhaustive: {} single errors over 3 codewords, {} decoded",
        e.trials, e.decode_success
    );
    Ok(())
}
