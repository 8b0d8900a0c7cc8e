//! Deterministic k-sparse recovery over the vector indexed by unordered vertex
//! pairs. The vector starts at all ones and every streamed edge decrements its
//! pair, so after a pass the nonzero entries are exactly the non-edges (+1) and
//! the bidirected pairs (-1).

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::stream::{Edge, EdgeConsumer, Flow, VertexId};

/// Index of the unordered pair `{u, v}`, `u < v`, in `0..n(n-1)/2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PairIndex(pub usize);

pub fn pair_count(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

impl PairIndex {
    pub fn of(n: usize, u: VertexId, v: VertexId) -> PairIndex {
        let (a, b) = if u < v { (u as usize, v as usize) } else { (v as usize, u as usize) };
        debug_assert!(a != b && b < n);
        PairIndex(a * (2 * n - a - 1) / 2 + (b - a - 1))
    }

    /// The pair `(u, v)` with `u < v`.
    pub fn pair(self, n: usize) -> (VertexId, VertexId) {
        let mut a = 0;
        let mut start = 0;
        loop {
            let row = n - a - 1;
            if self.0 < start + row {
                return (a as VertexId, (a + 1 + self.0 - start) as VertexId);
            }
            start += row;
            a += 1;
        }
    }
}

const P: u64 = (1 << 61) - 1;

fn add(a: u64, b: u64) -> u64 {
    let s = a + b;
    if s >= P {
        s - P
    } else {
        s
    }
}

fn sub(a: u64, b: u64) -> u64 {
    add(a, P - b)
}

fn mul(a: u64, b: u64) -> u64 {
    let w = a as u128 * b as u128;
    let r = ((w & P as u128) + (w >> 61)) as u64;
    if r >= P {
        r - P
    } else {
        r
    }
}

fn pow(mut a: u64, mut e: u64) -> u64 {
    let mut r = 1;
    while e > 0 {
        if e & 1 == 1 {
            r = mul(r, a);
        }
        a = mul(a, a);
        e >>= 1;
    }
    r
}

fn inv(a: u64) -> u64 {
    pow(a, P - 2)
}

fn from_signed(x: i64) -> u64 {
    if x >= 0 {
        x as u64 % P
    } else {
        P - ((-x) as u64 % P)
    }
}

fn to_signed(x: u64) -> i64 {
    if x > P / 2 {
        -((P - x) as i64)
    } else {
        x as i64
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Backend {
    /// Dictionary of touched coordinates. Unbounded space; reference only.
    ExactMap,
    /// Power-sum syndromes decoded with Berlekamp–Massey.
    Syndrome,
}

#[derive(Clone, Debug)]
enum Cells {
    Exact(BTreeMap<usize, i64>),
    /// `power[j] = sum_i delta_i * (i+1)^j mod P` for `j = 0..=2k`, plus
    /// `print = sum_i delta_i * R^i`, which rejects most over-sparse vectors
    /// whose power sums happen to match a sparse one.
    Syndrome { power: Vec<u64>, print: u64 },
}

#[derive(Clone, Debug)]
pub struct SparseSketch {
    n: usize,
    k: usize,
    cells: Cells,
}

/// Fixed evaluation point of the fingerprint word.
const R: u64 = 0x0ab5_4a98_ceb1_f0d3;

/// Words held by a syndrome sketch are `2k + 2`, which stays below
/// `4 * max(k, 1) * ceil(log2 n)^2` for every `n >= 2`.
pub fn syndrome_word_bound(n: usize, k: usize) -> usize {
    let lg = (usize::BITS - (n.max(2) - 1).leading_zeros()) as usize;
    4 * k.max(1) * lg * lg
}

impl SparseSketch {
    /// The all-ones vector of length `n(n-1)/2`; the ones are an implicit offset.
    pub fn all_ones(n: usize, k: usize, backend: Backend) -> Result<Self> {
        if n < 2 {
            return Err(Error::Argument("sparse sketch needs n >= 2".into()));
        }
        let cells = match backend {
            Backend::ExactMap => Cells::Exact(BTreeMap::new()),
            Backend::Syndrome => Cells::Syndrome { power: vec![0; 2 * k + 1], print: 0 },
        };
        Ok(SparseSketch { n, k, cells })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn add(&mut self, idx: PairIndex, delta: i64) {
        match &mut self.cells {
            Cells::Exact(map) => {
                let v = map.entry(idx.0).or_insert(0);
                *v += delta;
                if *v == 0 {
                    map.remove(&idx.0);
                }
            }
            Cells::Syndrome { power, print } => {
                let alpha = idx.0 as u64 + 1;
                let d = from_signed(delta);
                let mut term = d;
                for c in power.iter_mut() {
                    *c = add(*c, term);
                    term = mul(term, alpha);
                }
                *print = add(*print, mul(d, pow(R, idx.0 as u64)));
            }
        }
    }

    /// Decrements the coordinate of the edge's vertex pair.
    pub fn update(&mut self, e: Edge) {
        self.add(PairIndex::of(self.n, e.from, e.to), -1);
    }

    /// The nonzero entries of ones + delta, or a failure if there are more than `k`.
    pub fn recover(&self) -> Result<BTreeMap<PairIndex, i64>> {
        match &self.cells {
            Cells::Exact(map) => {
                let mut out = BTreeMap::new();
                for i in 0..pair_count(self.n) {
                    let v = 1 + map.get(&i).copied().unwrap_or(0);
                    if v != 0 {
                        if out.len() == self.k {
                            return Err(Error::RecoveryFailure { k: self.k });
                        }
                        out.insert(PairIndex(i), v);
                    }
                }
                Ok(out)
            }
            Cells::Syndrome { power, print } => self.decode(power, *print),
        }
    }

    fn decode(&self, power: &[u64], print: u64) -> Result<BTreeMap<PairIndex, i64>> {
        let fail = || Error::RecoveryFailure { k: self.k };
        let big_n = pair_count(self.n);
        let mut syn = power.to_vec();
        let mut print = print;
        // fold in the all-ones offset: sum_{a=1..N} a^j and sum_i R^i
        let mut r_i = 1;
        for a in 1..=big_n as u64 {
            let mut term = 1;
            for s in syn.iter_mut() {
                *s = add(*s, term);
                term = mul(term, a);
            }
            print = add(print, r_i);
            r_i = mul(r_i, R);
        }

        let conn = berlekamp_massey(&syn[..2 * self.k]);
        let deg = conn.len() - 1;
        if deg > self.k {
            return Err(fail());
        }
        // alpha is a root of z^deg * C(1/z) iff 1/alpha is a root of C
        let support: Vec<u64> = (1..=big_n as u64)
            .filter(|&a| conn.iter().fold(0, |acc, &c| add(mul(acc, a), c)) == 0)
            .collect();
        if support.len() != deg {
            return Err(fail());
        }
        let values = solve_vandermonde(&support, &syn[..deg]).ok_or_else(fail)?;

        let mut check = vec![0u64; syn.len()];
        let mut check_print = 0;
        for (&a, &v) in support.iter().zip(&values) {
            if v == 0 {
                return Err(fail());
            }
            let mut term = v;
            for c in check.iter_mut() {
                *c = add(*c, term);
                term = mul(term, a);
            }
            check_print = add(check_print, mul(v, pow(R, a - 1)));
        }
        if check != syn || check_print != print {
            return Err(fail());
        }
        Ok(support.iter().zip(&values).map(|(&a, &v)| (PairIndex(a as usize - 1), to_signed(v))).collect())
    }
}

impl EdgeConsumer for SparseSketch {
    fn observe(&mut self, e: Edge) -> Flow {
        self.update(e);
        Flow::Continue
    }

    fn words(&self) -> usize {
        match &self.cells {
            Cells::Exact(map) => 2 * map.len(),
            Cells::Syndrome { power, .. } => power.len() + 1,
        }
    }
}

/// Shortest linear recurrence of `s`: coefficients `c[0] = 1, c[1..=L]`
/// with `sum_i c[i] * s[n - i] = 0` for all `n >= L`.
fn berlekamp_massey(s: &[u64]) -> Vec<u64> {
    let mut c = vec![1u64];
    let mut b = vec![1u64];
    let mut len = 0usize;
    let mut shift = 1usize;
    let mut last = 1u64;
    for n in 0..s.len() {
        let mut d = s[n];
        for i in 1..=len.min(c.len() - 1) {
            d = add(d, mul(c[i], s[n - i]));
        }
        if d == 0 {
            shift += 1;
            continue;
        }
        let coef = mul(d, inv(last));
        let prev = c.clone();
        if c.len() < b.len() + shift {
            c.resize(b.len() + shift, 0);
        }
        for (i, &bi) in b.iter().enumerate() {
            c[i + shift] = sub(c[i + shift], mul(coef, bi));
        }
        if 2 * len <= n {
            len = n + 1 - len;
            b = prev;
            last = d;
            shift = 1;
        } else {
            shift += 1;
        }
    }
    c.resize(len + 1, 0);
    c
}

/// Solves `sum_i x_i * a_i^j = s_j` for `j = 0..a.len()` by elimination.
fn solve_vandermonde(a: &[u64], s: &[u64]) -> Option<Vec<u64>> {
    let t = a.len();
    let mut m: Vec<Vec<u64>> = (0..t)
        .map(|j| {
            let mut row: Vec<u64> = a.iter().map(|&x| pow(x, j as u64)).collect();
            row.push(s[j]);
            row
        })
        .collect();
    for col in 0..t {
        let piv = (col..t).find(|&r| m[r][col] != 0)?;
        m.swap(col, piv);
        let scale = inv(m[col][col]);
        for x in m[col].iter_mut() {
            *x = mul(*x, scale);
        }
        for r in 0..t {
            if r != col && m[r][col] != 0 {
                let f = m[r][col];
                for c in col..=t {
                    m[r][c] = sub(m[r][c], mul(f, m[col][c]));
                }
            }
        }
    }
    Some(m.into_iter().map(|row| row[t]).collect())
}
