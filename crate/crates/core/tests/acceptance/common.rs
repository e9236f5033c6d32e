use rand::seq::IndexedRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// `Err` with a formatted message unless `cond` holds.
macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}
pub(crate) use ensure;

/// Lowercase letter word that encodes `i`; distinct for distinct `i`.
pub fn word(i: usize, len: usize) -> String {
    let mut s = String::with_capacity(len);
    let mut x = i;
    for _ in 0..len {
        s.push((b'a' + (x % 26) as u8) as char);
        x /= 26;
    }
    s
}

/// Words drawn from a fixed vocabulary of `vocab` distinct words.
pub fn random_words(rng: &mut ChaCha8Rng, vocab: &[String], n: usize) -> Vec<String> {
    (0..n).map(|_| vocab.choose(rng).expect("vocab").clone()).collect()
}

pub fn vocabulary(n: usize, len: usize) -> Vec<String> {
    (0..n).map(|i| word(i * 7919 + 13, len)).collect()
}

pub fn coin(rng: &mut ChaCha8Rng, p: f64) -> bool {
    rng.random::<f64>() < p
}
