//! Exp/log table of GF(27) and a few products.

use lmpe::field::format_poly;
use lmpe::Field;

fn main() -> lmpe::Result<()> {
    let f = Field::with_order(27)?;
    println!("GF(27) modulo {}", format_poly(f.primitive_poly()));
    println!("{:>5}  {:>4}  polynomial", "power", "int");
    for j in 0..26 {
        let a = f.exp(j);
        println!("{:>5}  {:>4}  {}", format!("α^{j}"), a.value(), format_poly(&f.to_poly(a)));
    }
    let (a, b) = (f.element(5)?, f.element(17)?);
    println!("{} * {} = {}", a.value(), b.value(), f.mul(a, b).value());
    println!("{} / {} = {}", a.value(), b.value(), f.div(a, b)?.value());
    println!("order of α^13 = {}", f.order(f.exp(13))?);
    Ok(())
}
