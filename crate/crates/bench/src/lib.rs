//! Fixed inputs shared by the benchmarks.

use hitomezashi_core::{Sign, SignString, ToroidalPattern};

/// A deterministic irregular string of any length (xorshift bits).
pub fn mixed_string(n: usize) -> SignString {
    let mut state = 0x9e37_79b9_7f4a_7c15_u64 ^ n as u64;
    let signs = (0..n)
        .map(|_| {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            if state & 1 == 1 {
                Sign::Plus
            } else {
                Sign::Minus
            }
        })
        .collect();
    SignString::new(signs).expect("nonempty")
}

pub fn symmetric(n: usize) -> ToroidalPattern {
    ToroidalPattern::symmetric(mixed_string(n)).expect("n >= 3")
}

pub fn general(m: usize, n: usize) -> ToroidalPattern {
    ToroidalPattern::new(m, n, mixed_string(n), mixed_string(m).negated()).expect("m, n >= 3")
}
