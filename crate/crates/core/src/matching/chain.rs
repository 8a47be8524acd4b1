//! Super-epoch Markov chain on `(X_s, Y_s)`: the number of regular matching
//! sets and the size of the single special set.

use super::posterior_pi;
use crate::error::{Error, Result};
use crate::rng;
use rand_distr::{Binomial, Distribution};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ChainState {
    pub x: u64,
    pub y: u64,
}

impl ChainState {
    pub fn is_absorbing(&self) -> bool {
        self.x == 0 || (self.x == 1 && self.y == 0)
    }
}

/// One realisation from `X_0 = n`, `Y_0 = 0` until absorption.
pub fn superepoch_chain(n: u64, p: f64, seed: u64) -> Result<Vec<ChainState>> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::invalid(format!("prior {p} outside [0,1]")));
    }
    let mut r = rng::seeded(rng::derive_seed(seed, 0xC4A1));
    let mut path = vec![ChainState { x: n, y: 0 }];
    let mut s = 0u32;
    loop {
        let cur = *path.last().expect("nonempty");
        if cur.is_absorbing() || s >= 62 {
            break;
        }
        let size = 1u64 << s;
        let pi = |a: u64| posterior_pi(a as usize, p);
        let keep = 1.0 - pi(size) * pi(size);
        let x = Binomial::new(cur.x / 2, keep.clamp(0.0, 1.0))
            .map_err(|e| Error::Numeric(e.to_string()))?
            .sample(&mut r);
        let xi = if cur.x % 2 == 1 {
            size
        } else if x > 0 {
            2 * size
        } else {
            0
        };
        let y = if cur.y > 0 {
            let stay = 1.0 - pi(xi) * pi(cur.y);
            if rng::bernoulli(stay, &mut r) { cur.y + xi } else { 0 }
        } else if cur.x % 2 == 1 && x > 0 {
            let stay = 1.0 - pi(size) * pi(2 * size);
            if rng::bernoulli(stay, &mut r) { 3 * size } else { 0 }
        } else {
            0
        };
        path.push(ChainState { x, y });
        s += 1;
    }
    Ok(path)
}
