#![allow(dead_code)]

use teleport_sim::rand_core::RngCore;

/// Brute-force oracle for the cache-free process: enumerates every
/// per-attempt outcome vector of `rounds * k` Bernoulli(p) draws and returns
/// `(success probability, expected attempts)`.
pub fn enumerate_process(p: f64, k: u32, rounds: u32) -> (f64, f64) {
    let bits = k * rounds;
    assert!(bits <= 20, "enumeration too large");
    let mut success = 0.0;
    let mut attempts = 0.0;
    for mask in 0u64..(1u64 << bits) {
        let ones = mask.count_ones() as i32;
        let prob = p.powi(ones) * (1.0 - p).powi(bits as i32 - ones);
        let (served, used) = trajectory(mask, k, rounds);
        if served {
            success += prob;
        }
        attempts += prob * f64::from(used);
    }
    (success, attempts)
}

/// Outcome of one outcome vector: bit `r * k + a` is attempt `a` of round `r`.
pub fn trajectory(mask: u64, k: u32, rounds: u32) -> (bool, u32) {
    for r in 0..rounds {
        let round_bits = (mask >> (r * k)) & ((1u64 << k) - 1);
        if round_bits != 0 {
            return (true, (r + 1) * k);
        }
    }
    (false, rounds * k)
}

/// Feeds a fixed word sequence; words past the end are failures.
pub struct Scripted {
    words: Vec<u64>,
    pos: usize,
}

pub const SUCCESS_WORD: u64 = 0;
pub const FAILURE_WORD: u64 = u64::MAX;

impl Scripted {
    pub fn from_outcomes(outcomes: impl IntoIterator<Item = bool>) -> Self {
        Scripted {
            words: outcomes
                .into_iter()
                .map(|s| if s { SUCCESS_WORD } else { FAILURE_WORD })
                .collect(),
            pos: 0,
        }
    }

    pub fn consumed(&self) -> usize {
        self.pos
    }
}

impl RngCore for Scripted {
    fn next_u32(&mut self) -> u32 {
        self.next_u64() as u32
    }

    fn next_u64(&mut self) -> u64 {
        let w = self.words.get(self.pos).copied().unwrap_or(FAILURE_WORD);
        self.pos += 1;
        w
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        for chunk in dst.chunks_mut(8) {
            let w = self.next_u64().to_le_bytes();
            chunk.copy_from_slice(&w[..chunk.len()]);
        }
    }
}

/// Binomial standard deviation of a rate estimate.
pub fn binomial_sigma(p: f64, trials: u32) -> f64 {
    (p * (1.0 - p) / f64::from(trials)).sqrt()
}
