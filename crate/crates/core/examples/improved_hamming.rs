//! The improved Hamming code over GF(27): only the 12 remainder error
//! patterns need distinct syndromes, so length 56 fits in two parities.

use lmpe::blockcodes::{i_max, CodeKind};
use lmpe::constructions::{CodeSpec, LmpeCode, Variant};
use lmpe::prob::sample_lmpe;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> lmpe::Result<()> {
    let code = LmpeCode::build(&CodeSpec::new(Variant::ImprovedHamming, 12, 1, 1))?;
    if let CodeKind::ImprovedHamming { scalars, errors, .. } = code.field_code().kind() {
        let e: Vec<u32> = errors.iter().map(|x| x.value()).collect();
        let s: Vec<u32> = scalars.iter().map(|x| x.value()).collect();
        println!("error set {e:?}");
        println!("column scalars {s:?}, i_max = {}", i_max(1, 27));
    }
    println!("n={} rate={:.4}", code.n(), code.rate());
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut ok = 0;
    for _ in 0..500 {
        let msg = code.random_message(&mut rng);
        let word = code.encode(&msg)?;
        let received = word.apply(&sample_lmpe(&word, 1, 1, &mut rng))?;
        ok += usize::from(code.decode(&received)?.message == msg);
    }
    println!("{ok}/500 decoded");
    Ok(())
}
