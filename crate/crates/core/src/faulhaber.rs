//! Bernoulli numbers and Faulhaber's sums of powers.

use num_traits::Zero;
use serde::Serialize;

use crate::poly::Poly;
use crate::scalar::{binomial, Scalar};

/// Bernoulli numbers `B_0..=B_n` with the convention `B_1 = -1/2`.
pub fn bernoulli(n: usize) -> Vec<Scalar> {
    let mut b: Vec<Scalar> = Vec::with_capacity(n + 1);
    b.push(Scalar::int(1));
    for m in 1..=n {
        // sum_{i=0}^{m} C(m+1, i) B_i = 0
        let mut acc = Scalar::zero();
        for (i, bi) in b.iter().enumerate() {
            acc += &(&binomial(m as u64 + 1, i as u64) * bi);
        }
        b.push(-(acc / binomial(m as u64 + 1, m as u64)));
    }
    b
}

/// `P_k(t) = 1/(k+1) sum_{i=0}^{k} (-1)^i C(k+1, i) B_i t^(k+1-i)`, so that
/// `P_k(j) = 1^k + 2^k + ... + j^k` for `j >= 0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FaulhaberPoly {
    pub k: u32,
    pub poly: Poly,
}

impl FaulhaberPoly {
    pub fn eval(&self, x: &Scalar) -> Scalar {
        self.poly.eval(x)
    }
}

pub fn faulhaber(k: u32) -> FaulhaberPoly {
    let b = bernoulli(k as usize);
    let mut coeffs = vec![Scalar::zero(); k as usize + 2];
    let scale = Scalar::frac(1, k as i64 + 1);
    for (i, bi) in b.iter().enumerate() {
        let sign = if i % 2 == 0 { Scalar::int(1) } else { Scalar::int(-1) };
        let c = &(&sign * &binomial(k as u64 + 1, i as u64)) * bi;
        coeffs[k as usize + 1 - i] = &c * &scale;
    }
    FaulhaberPoly { k, poly: Poly::new(coeffs) }
}

/// `P_k(j)`; equals `sum_{i=1}^{j} i^k` when `j >= 0`.
pub fn faulhaber_sum(k: u32, j: i64) -> Scalar {
    faulhaber(k).eval(&Scalar::int(j))
}

/// `sum_{i=1}^{j} (-i)^k`, computed as `-P_k(-j-1)`. For `k = 0` the
/// reflection also counts the `0^0` term, which is removed.
pub fn faulhaber_neg_sum(k: u32, j: i64) -> Scalar {
    let s = -faulhaber(k).eval(&Scalar::int(-j - 1));
    if k == 0 {
        s - Scalar::int(1)
    } else {
        s
    }
}
