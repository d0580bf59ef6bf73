//! Shared fixtures for the integration suites: the two frozen reference
//! diagrams and a deterministic pseudo-random generator.

use netmap_core::presentation::{parse_presentation, Presentation};

pub const F0: &str = "\
lambda1 2 0
lambda2 0 1
translation l1
arc 0 -> 0 0
arc l1 -> 2 0
arc l2 -> 0 1
arc l1+l2 -> 1 0
";

pub const RABBIT: &str = "\
lambda1 0 -1
lambda2 2 1
translation l2
arc 0 -> 0 0
arc l1 -> 0 -1
arc l2 -> 1 1
arc l1+l2 -> 1 0
";

pub fn f0() -> Presentation {
    parse_presentation(F0).unwrap()
}

pub fn rabbit() -> Presentation {
    parse_presentation(RABBIT).unwrap()
}

pub struct SplitMix(pub u64);

impl SplitMix {
    pub fn next(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    pub fn range(&mut self, lo: i64, hi: i64) -> i64 {
        lo + (self.next() % ((hi - lo + 1) as u64)) as i64
    }

    pub fn primitive(&mut self, bound: i64) -> (i64, i64) {
        loop {
            let q = self.range(-bound, bound);
            let p = self.range(-bound, bound);
            if (p, q) != (0, 0) && num_integer::gcd(p, q) == 1 {
                return (q, p);
            }
        }
    }
}
