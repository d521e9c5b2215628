//! Limited-magnitude errors on a single symbol and on short words.

use lmpe::bounds::{e_count, e_min};
use lmpe::prob::{geodesic_ball, symbol_error_ball, symbol_neighbors, ProbVec, Word, GEODESIC_GUARD};

fn main() -> lmpe::Result<()> {
    let k = 12;
    for v in [[0, 0, 0, 12], [0, 1, 1, 10], [3, 3, 3, 3]] {
        let x = ProbVec::new(v, k)?;
        let ball = symbol_error_ball(&x, 1);
        println!("{x}: {} errors of magnitude 1", ball.len());
    }
    let x = ProbVec::new([3, 3, 3, 3], k)?;
    for y in symbol_neighbors(&x, 1).iter().take(5) {
        println!("  {x} -> {y}");
    }
    for l in 1..=4 {
        println!("l={l}: smallest ball {}, interior ball {}", e_min(l), e_count(l));
    }
    let w = Word::parse("3,3,3,3;0,0,0,12", Some(k))?;
    let ball = geodesic_ball(&w, 1, 1, GEODESIC_GUARD)?;
    println!("radius-1 geodesic ball of {w}: {} words", ball.len());
    Ok(())
}
