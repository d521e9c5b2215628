//! Monte-Carlo and exhaustive channel simulation against an [`LmpeCode`].
//!
//! Trial `i` draws everything from a ChaCha stream keyed by the master seed
//! with stream number `i`, so results do not depend on how trials are
//! spread across threads.

use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::constructions::{LmpeCode, Message};
use crate::error::{LmpeError, Result};
use crate::prob::{sample_lmpe, symbol_error_ball, word_error_ball_size, SymbolError, Word};

/// Default cap on the number of error words an exhaustive run may visit.
pub const EXHAUSTIVE_GUARD: u64 = 5_000_000;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimulationReport {
    pub trials: u64,
    pub decode_success: u64,
    /// Decoder returned a different message.
    pub miscorrections: u64,
    /// Decoder reported failure.
    pub decode_failures: u64,
    /// Trials in which at least one field position was erased.
    pub erasures_seen: u64,
    pub wall_time: f64,
    pub seed: u64,
}

#[derive(Default, Clone, Copy)]
struct Tally {
    success: u64,
    miscorrections: u64,
    failures: u64,
    erasures: u64,
}

impl Tally {
    fn record(msg: &Message, outcome: Result<crate::constructions::DecodeReport>) -> Tally {
        match outcome {
            Ok(report) => Tally {
                success: u64::from(report.message == *msg),
                miscorrections: u64::from(report.message != *msg),
                failures: 0,
                erasures: u64::from(report.erasures > 0),
            },
            Err(_) => Tally {
                failures: 1,
                ..Tally::default()
            },
        }
    }

    fn merge(self, o: Tally) -> Tally {
        Tally {
            success: self.success + o.success,
            miscorrections: self.miscorrections + o.miscorrections,
            failures: self.failures + o.failures,
            erasures: self.erasures + o.erasures,
        }
    }
}

fn trial_rng(seed: u64, trial: u64) -> ChaCha20Rng {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// Runs `trials` independent trials: a random message, a random `(l, t)`
/// error from [`sample_lmpe`], and a decode.
pub fn simulate(code: &LmpeCode, trials: u64, seed: u64) -> Result<SimulationReport> {
    let start = Instant::now();
    let tally = (0..trials)
        .into_par_iter()
        .map(|i| -> Result<Tally> {
            let mut rng = trial_rng(seed, i);
            let msg = code.random_message(&mut rng);
            let word = code.encode(&msg)?;
            let errors = sample_lmpe(&word, code.l(), code.t(), &mut rng);
            let received = word.apply(&errors)?;
            Ok(Tally::record(&msg, code.decode(&received)))
        })
        .try_reduce(Tally::default, |a, b| Ok(a.merge(b)))?;
    Ok(report(tally, trials, seed, start))
}

fn report(tally: Tally, trials: u64, seed: u64, start: Instant) -> SimulationReport {
    SimulationReport {
        trials,
        decode_success: tally.success,
        miscorrections: tally.miscorrections,
        decode_failures: tally.failures,
        erasures_seen: tally.erasures,
        wall_time: start.elapsed().as_secs_f64(),
        seed,
    }
}

/// Every error pattern of weight `1..=t` on `word`, in lexicographic
/// position order.
fn for_each_error<F: FnMut(&[SymbolError])>(word: &Word, l: u32, t: usize, f: &mut F) {
    let balls: Vec<Vec<SymbolError>> = word
        .symbols()
        .iter()
        .map(|x| symbol_error_ball(x, l).into_iter().filter(|e| !e.is_zero()).collect())
        .collect();
    let mut errors = vec![SymbolError::ZERO; word.len()];
    fn rec<F: FnMut(&[SymbolError])>(
        balls: &[Vec<SymbolError>],
        errors: &mut Vec<SymbolError>,
        from: usize,
        left: usize,
        f: &mut F,
    ) {
        for pos in from..balls.len() {
            for e in &balls[pos] {
                errors[pos] = *e;
                f(errors);
                if left > 1 {
                    rec(balls, errors, pos + 1, left - 1, f);
                }
            }
            errors[pos] = SymbolError::ZERO;
        }
    }
    rec(&balls, &mut errors, 0, t, f);
}

/// For each of `messages` random messages, decodes every `(l, t)` error
/// pattern. Fails with [`LmpeError::GuardExceeded`] when the error ball of a
/// codeword holds more than `guard` words.
pub fn simulate_exhaustive(code: &LmpeCode, messages: u64, seed: u64, guard: u64) -> Result<SimulationReport> {
    let start = Instant::now();
    let words = (0..messages)
        .map(|i| {
            let mut rng = trial_rng(seed, i);
            let msg = code.random_message(&mut rng);
            let word = code.encode(&msg)?;
            let size = word_error_ball_size(&word, code.l(), code.t())?;
            if size > guard.into() {
                return Err(LmpeError::GuardExceeded(format!(
                    "{size} error patterns per codeword exceed the guard {guard}"
                )));
            }
            Ok((msg, word))
        })
        .collect::<Result<Vec<_>>>()?;
    let (tally, count) = words
        .par_iter()
        .map(|(msg, word)| -> Result<(Tally, u64)> {
            let mut tally = Tally::default();
            let mut count = 0u64;
            let mut failure = None;
            for_each_error(word, code.l(), code.t(), &mut |errors| {
                if failure.is_some() {
                    return;
                }
                match word.apply(errors) {
                    Ok(received) => {
                        tally = tally.merge(Tally::record(msg, code.decode(&received)));
                        count += 1;
                    }
                    Err(e) => failure = Some(e),
                }
            });
            match failure {
                Some(e) => Err(e),
                None => Ok((tally, count)),
            }
        })
        .try_reduce(|| (Tally::default(), 0), |a, b| Ok((a.0.merge(b.0), a.1 + b.1)))?;
    Ok(report(tally, count, seed, start))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::CodeSpec;

    #[test]
    fn example_one_always_decodes() {
        let code = LmpeCode::build(&CodeSpec::example_one()).unwrap();
        let r = simulate(&code, 500, 7).unwrap();
        assert_eq!(r.decode_success, 500);
        assert_eq!(r.miscorrections + r.decode_failures, 0);
        let again = simulate(&code, 500, 7).unwrap();
        assert_eq!((again.decode_success, again.erasures_seen), (r.decode_success, r.erasures_seen));
    }

    #[test]
    fn exhaustive_counts_every_single_error() {
        let code = LmpeCode::build(&CodeSpec::example_one()).unwrap();
        let r = simulate_exhaustive(&code, 2, 3, EXHAUSTIVE_GUARD).unwrap();
        assert_eq!(r.decode_success, r.trials);
        let mut rng = trial_rng(3, 0);
        let word = code.encode(&code.random_message(&mut rng)).unwrap();
        let per_word: usize = word
            .symbols()
            .iter()
            .map(|x| symbol_error_ball(x, 1).len() - 1)
            .sum();
        assert!(r.trials >= per_word as u64);
    }

    #[test]
    fn guard_applies() {
        let code = LmpeCode::build(&CodeSpec::example_one()).unwrap();
        assert!(matches!(
            simulate_exhaustive(&code, 1, 0, 10),
            Err(LmpeError::GuardExceeded(_))
        ));
    }
}
