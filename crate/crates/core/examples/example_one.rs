//! The (28, 26) Hamming remainder code at k = 12: encode a message, move one
//! unit of probability, decode.

use lmpe::constructions::{CodeSpec, LmpeCode, Message};
use lmpe::SymbolError;

fn main() -> lmpe::Result<()> {
    let code = LmpeCode::build(&CodeSpec::example_one())?;
    let s = code.summary();
    println!(
        "n={} info={} parity={} quotient messages={} rate={:.4}",
        s.n, s.info_symbols, s.parity_symbols, s.quotient_messages, s.rate
    );

    let mut text = vec!["3,3,3,3"; 26];
    text[0] = "5,4,3,0";
    text[2] = "2,1,1,8";
    text[3] = "0,1,2,9";
    let msg: Message = format!("{} | 0,1", text.join(";")).parse()?;
    let word = code.encode(&msg)?;
    println!("codeword parities: {} {}", word.symbols()[26], word.symbols()[27]);

    let mut errors = vec![SymbolError::ZERO; code.n()];
    errors[1] = SymbolError::new([-1, 1, 0, 0]);
    let received = word.apply(&errors)?;
    println!("received symbol 1: {}", received.symbols()[1]);

    let report = code.decode(&received)?;
    println!("corrected {:?}, message recovered: {}", report.corrected, report.message == msg);
    Ok(())
}
