//! Greedy Gray mapping search for pairs of GF(27) digits.

use lmpe::gray::{gray_efficiency, gray_existence_k, gray_extend, gray_search, gray_validate, GrayPolicy};

fn main() -> lmpe::Result<()> {
    let (l, q, g) = (1, 27, 2);
    println!("efficiency at k=19: {:.4}", gray_efficiency(q, g, 19).value());
    println!("search guaranteed from k={}", gray_existence_k(l, q, g)?);
    for k in [19, 25] {
        match gray_search(k, l, q, g, &GrayPolicy::default()) {
            Ok(m) => {
                println!("k={k}: mapped {} codewords, valid {}", m.len(), gray_validate(&m));
                for line in m.to_text().lines().skip(1).take(4) {
                    println!("  {line}");
                }
                let up = gray_extend(&m, k + 3)?;
                println!("  extended to k={}: valid {}", up.k(), gray_validate(&up));
            }
            Err(e) => println!("k={k}: {e}"),
        }
    }
    Ok(())
}
