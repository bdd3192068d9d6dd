//! Brute-force oracles that share no code paths with the library's fast routines.

#![allow(dead_code)]

use lrc_core::{plan_params, CodeInstance, Field, Matrix, Strategy};

pub fn instance(
    q: u64,
    r: usize,
    mu: usize,
    w: usize,
    l: usize,
    strategy: Strategy,
) -> CodeInstance {
    let seed = (strategy == Strategy::Random).then_some(7);
    CodeInstance::build(plan_params(q, r, mu, w, l, None, strategy).unwrap(), seed).unwrap()
}

/// Elements of GF(p^m) as little-endian base-p digit vectors, multiplied as
/// polynomials modulo the monic `x^m + irr[m-1] x^(m-1) + ... + irr[0]`.
pub struct PolyField {
    pub p: u32,
    pub m: usize,
    pub irr: Vec<u32>,
}

impl PolyField {
    pub fn digits(&self, mut x: u32) -> Vec<u32> {
        (0..self.m)
            .map(|_| {
                let d = x % self.p;
                x /= self.p;
                d
            })
            .collect()
    }

    pub fn pack(&self, d: &[u32]) -> u32 {
        d.iter().rev().fold(0, |acc, &x| acc * self.p + x)
    }

    pub fn add(&self, a: u32, b: u32) -> u32 {
        let (a, b) = (self.digits(a), self.digits(b));
        self.pack(
            &a.iter()
                .zip(&b)
                .map(|(x, y)| (x + y) % self.p)
                .collect::<Vec<_>>(),
        )
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        let (p, m) = (self.p, self.m);
        let (a, b) = (self.digits(a), self.digits(b));
        let mut prod = vec![0u32; 2 * m];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x * y) % p;
            }
        }
        // x^m = -Σ irr[i] x^i
        for deg in (m..2 * m).rev() {
            let c = prod[deg];
            if c == 0 {
                continue;
            }
            prod[deg] = 0;
            for i in 0..m {
                prod[deg - m + i] = (prod[deg - m + i] + (p - c) * self.irr[i]) % p;
            }
        }
        self.pack(&prod[..m])
    }
}

pub fn poly_field(field: &Field) -> PolyField {
    let spec = field.spec();
    PolyField {
        p: spec.p,
        m: spec.m as usize,
        irr: spec.irr.clone(),
    }
}

/// `msg · G` with plain loops.
pub fn naive_encode(g: &Matrix, msg: &[u32]) -> Vec<u32> {
    let f = g.field();
    (0..g.cols())
        .map(|j| (0..g.rows()).fold(0, |acc, i| f.add(acc, f.mul(msg[i], g.get(i, j)))))
        .collect()
}

/// Calls `visit` on every nonzero message of length `k` in lexicographic order.
pub fn for_each_message(q: u32, k: usize, mut visit: impl FnMut(&[u32])) {
    let mut msg = vec![0u32; k];
    loop {
        let mut i = 0;
        while i < k && msg[i] == q - 1 {
            msg[i] = 0;
            i += 1;
        }
        if i == k {
            return;
        }
        msg[i] += 1;
        visit(&msg);
    }
}

/// Minimum weight over all nonzero messages, by straight enumeration.
pub fn naive_distance(g: &Matrix) -> usize {
    let mut best = usize::MAX;
    for_each_message(g.field().q(), g.rows(), |msg| {
        let w = naive_encode(g, msg).iter().filter(|&&x| x != 0).count();
        best = best.min(w);
    });
    best
}

pub fn ceil_div(a: usize, b: usize) -> usize {
    a.div_ceil(b)
}

/// Singleton-like bound restated from its definition.
pub fn singleton_oracle(n: usize, k: usize, r: usize, mu: usize) -> i64 {
    let (n, k, c) = (n as i64, k as i64, ceil_div(k, r) as i64);
    if mu == 2 {
        n - k + 2 - c
    } else {
        n - k + 1 - (c - 1) * (mu as i64 - 1)
    }
}

/// All `size`-subsets of `items`.
pub fn subsets(items: &[usize], size: usize) -> Vec<Vec<usize>> {
    if size == 0 {
        return vec![Vec::new()];
    }
    if items.len() < size {
        return Vec::new();
    }
    let mut out = subsets(&items[1..], size - 1);
    for s in &mut out {
        s.insert(0, items[0]);
    }
    out.extend(subsets(&items[1..], size));
    out
}
