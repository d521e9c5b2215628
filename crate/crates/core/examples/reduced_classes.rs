//! Critical vectors, the reduced class table and the two-layer codec.

use lmpe::classify::{build_reduced_table, find_critical_vectors, validate_classification};
use lmpe::constructions::{CodeSpec, LmpeCode, Variant};
use lmpe::prob::sample_lmpe;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> lmpe::Result<()> {
    for l in 1..=5 {
        let found = find_critical_vectors(l);
        println!("l={l}: {} critical vectors {:?}", found.len(), found.first());
    }
    let table = build_reduced_table(1, 12, [1, 1, 1, 0])?;
    println!("k=12 table: {} rows x {} columns, valid {}", table.num_rows(), table.num_cols(), validate_classification(&table, 1));
    for (i, row) in table.rows().iter().enumerate().take(3) {
        println!("  row {i}: {row:?}");
    }

    let spec = CodeSpec { n: Some(40), ..CodeSpec::new(Variant::Reduced, 12, 1, 1) };
    let code = LmpeCode::build(&spec)?;
    println!("reduced code: n={} parity={} rate={:.4}", code.n(), code.parity_len(), code.rate());
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut ok = 0;
    for _ in 0..200 {
        let msg = code.random_message(&mut rng);
        let word = code.encode(&msg)?;
        let received = word.apply(&sample_lmpe(&word, 1, 1, &mut rng))?;
        ok += usize::from(code.decode(&received)?.message == msg);
    }
    println!("{ok}/200 random single errors corrected");
    Ok(())
}
