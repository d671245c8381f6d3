//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::Rng;

use pinv::exterior::ExtElement;

/// Exterior-algebra element keyed by ascending 1-based index lists.
pub type Poly = BTreeMap<Vec<usize>, BigInt>;

pub fn from_ext(e: &ExtElement) -> Poly {
    e.terms().map(|(m, c)| (m.indices(), c.clone())).collect()
}

pub fn to_ext(rank: usize, p: &Poly) -> ExtElement {
    ExtElement::from_terms(rank, p.iter().map(|(k, v)| (k.clone(), v.clone()))).unwrap()
}

fn add_term(p: &mut Poly, key: Vec<usize>, c: BigInt) {
    let entry = p.entry(key.clone()).or_insert_with(BigInt::zero);
    *entry += c;
    if entry.is_zero() {
        p.remove(&key);
    }
}

/// Parity of the number of inversions.
fn odd_permutation(seq: &[usize]) -> bool {
    let mut inv = 0usize;
    for i in 0..seq.len() {
        for j in (i + 1)..seq.len() {
            if seq[i] > seq[j] {
                inv += 1;
            }
        }
    }
    inv % 2 == 1
}

pub fn wedge(a: &Poly, b: &Poly) -> Poly {
    let mut out = Poly::new();
    for (s, x) in a {
        for (t, y) in b {
            if s.iter().any(|i| t.contains(i)) {
                continue;
            }
            let mut seq = s.clone();
            seq.extend(t);
            let odd = odd_permutation(&seq);
            seq.sort();
            let c = x * y;
            add_term(&mut out, seq, if odd { -c } else { c });
        }
    }
    out
}

pub fn one() -> Poly {
    Poly::from([(vec![], BigInt::one())])
}

pub fn scale(p: &Poly, k: &BigInt) -> Poly {
    p.iter()
        .filter(|_| !k.is_zero())
        .map(|(m, c)| (m.clone(), c * k))
        .collect()
}

pub fn add(a: &Poly, b: &Poly) -> Poly {
    let mut out = a.clone();
    for (k, v) in b {
        add_term(&mut out, k.clone(), v.clone());
    }
    out
}

pub fn power(p: &Poly, n: usize) -> Poly {
    (0..n).fold(one(), |acc, _| wedge(&acc, p))
}

pub fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |a, k| a * BigInt::from(k))
}

/// Exact division of every coefficient, or `None` when some coefficient is
/// not divisible.
pub fn divide_exact(p: &Poly, d: &BigInt) -> Option<Poly> {
    let mut out = Poly::new();
    for (k, v) in p {
        let (q, r) = v.div_rem(d);
        if !r.is_zero() {
            return None;
        }
        out.insert(k.clone(), q);
    }
    Some(out)
}

pub fn divided_power(p: &Poly, n: usize) -> Poly {
    divide_exact(&power(p, n), &factorial(n)).expect("divided power is integral")
}

pub fn exp_two_form(p: &Poly, q: usize) -> Poly {
    (0..=q).fold(Poly::new(), |acc, k| add(&acc, &divided_power(p, k)))
}

pub fn degree_part(p: &Poly, deg: usize) -> Poly {
    p.iter()
        .filter(|(k, _)| k.len() == deg)
        .map(|(k, v)| (k.clone(), v.clone()))
        .collect()
}

/// `Σ_{i<j} a_ij e_i e_j`.
pub fn two_form(a: &[Vec<i64>]) -> Poly {
    let mut out = Poly::new();
    for i in 0..a.len() {
        for j in (i + 1)..a.len() {
            if a[i][j] != 0 {
                out.insert(vec![i + 1, j + 1], BigInt::from(a[i][j]));
            }
        }
    }
    out
}

pub fn standard_form(q: usize) -> Vec<Vec<i64>> {
    let mut a = vec![vec![0; 2 * q]; 2 * q];
    for i in 0..q {
        a[i][q + i] = 1;
        a[q + i][i] = -1;
    }
    a
}

/// Cap with the fundamental class, oriented so that the standard
/// symplectic volume form caps to `+1`.
pub fn cap(p: &Poly, q: usize) -> Poly {
    let orientation_odd = (q * q.saturating_sub(1) / 2) % 2 == 1;
    let mut out = Poly::new();
    for (s, c) in p {
        let comp: Vec<usize> = (1..=2 * q).filter(|i| !s.contains(i)).collect();
        let mut seq = s.clone();
        seq.extend(&comp);
        let odd = odd_permutation(&seq) ^ orientation_odd;
        add_term(&mut out, comp, if odd { -c.clone() } else { c.clone() });
    }
    out
}

/// Pfaffian by expansion along the first row.
pub fn pfaffian(a: &[Vec<i64>]) -> BigInt {
    let n = a.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut total = BigInt::zero();
    for j in 1..n {
        if a[0][j] == 0 {
            continue;
        }
        let keep: Vec<usize> = (1..n).filter(|&k| k != j).collect();
        let minor: Vec<Vec<i64>> = keep
            .iter()
            .map(|&r| keep.iter().map(|&c| a[r][c]).collect())
            .collect();
        let term = BigInt::from(a[0][j]) * pfaffian(&minor);
        if j % 2 == 1 {
            total += term;
        } else {
            total -= term;
        }
    }
    total
}

pub fn random_skew<R: Rng>(rng: &mut R, q: usize, bound: i64) -> Vec<Vec<i64>> {
    let n = 2 * q;
    let mut a = vec![vec![0; n]; n];
    for i in 0..n {
        for j in (i + 1)..n {
            let v = rng.gen_range(-bound..=bound);
            a[i][j] = v;
            a[j][i] = -v;
        }
    }
    a
}

/// Determinant by cofactor expansion.
pub fn det(m: &[Vec<BigInt>]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut total = BigInt::zero();
    for j in 0..n {
        if m[0][j].is_zero() {
            continue;
        }
        let minor: Vec<Vec<BigInt>> = m[1..]
            .iter()
            .map(|r| r.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, x)| x.clone()).collect())
            .collect();
        let term = &m[0][j] * det(&minor);
        if j % 2 == 0 {
            total += term;
        } else {
            total -= term;
        }
    }
    total
}

pub fn to_big(m: &[Vec<i64>]) -> Vec<Vec<BigInt>> {
    m.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
}

/// Adjugate of a square matrix.
pub fn adjugate(m: &[Vec<i64>]) -> Vec<Vec<BigInt>> {
    let n = m.len();
    let big = to_big(m);
    let mut adj = vec![vec![BigInt::zero(); n]; n];
    for i in 0..n {
        for j in 0..n {
            let minor: Vec<Vec<BigInt>> = (0..n)
                .filter(|&r| r != i)
                .map(|r| (0..n).filter(|&c| c != j).map(|c| big[r][c].clone()).collect())
                .collect();
            let c = det(&minor);
            adj[j][i] = if (i + j) % 2 == 0 { c } else { -c };
        }
    }
    adj
}

/// For a nonsingular square relation matrix `R` (rows are relations), the
/// class of `x` in `ℤ^n / rowspace(R)` is determined by `x·adj(R) mod det R`.
pub struct FiniteGroupOracle {
    adj: Vec<Vec<BigInt>>,
    modulus: BigInt,
}

impl FiniteGroupOracle {
    pub fn new(r: &[Vec<i64>]) -> Option<Self> {
        let d = det(&to_big(r)).abs();
        if d.is_zero() {
            return None;
        }
        Some(FiniteGroupOracle {
            adj: adjugate(r),
            modulus: d,
        })
    }

    pub fn key(&self, x: &[i64]) -> Vec<BigInt> {
        let n = self.adj.len();
        (0..n)
            .map(|j| {
                let s: BigInt = (0..n).map(|i| BigInt::from(x[i]) * &self.adj[i][j]).sum();
                s.mod_floor(&self.modulus)
            })
            .collect()
    }

    /// Breadth-first enumeration from 0 along the unit vectors.
    pub fn order(&self) -> usize {
        let n = self.adj.len();
        let mut seen = BTreeSet::new();
        let mut queue = VecDeque::from([vec![0i64; n]]);
        seen.insert(self.key(&vec![0; n]));
        while let Some(x) = queue.pop_front() {
            for i in 0..n {
                let mut y = x.clone();
                y[i] += 1;
                if seen.insert(self.key(&y)) {
                    queue.push_back(y);
                }
            }
        }
        seen.len()
    }
}

/// Normal form `(d, a)` with `0 ≤ a_i < m_i` of a class in the group
/// `⟨F, F_i | m_i F_i = F⟩`.
pub fn minimal_normal_form(mults: &[i64], c: &[i64]) -> (i64, Vec<i64>) {
    let mut d = c[0];
    let mut a = Vec::new();
    for (i, &m) in mults.iter().enumerate() {
        let x = c[i + 1];
        d += x.div_euclid(m);
        a.push(x.rem_euclid(m));
    }
    (d, a)
}

pub fn binomial_oracle(n: i64, d: i64) -> BigInt {
    if d < 0 {
        return BigInt::zero();
    }
    let mut num = BigInt::one();
    for i in 0..d {
        num *= BigInt::from(n - i);
    }
    num / factorial(d as usize)
}

/// Order of the subgroup of `(ℚ/ℤ)²` generated by `(u_i/n_i, v_i/n_i)`,
/// by closure over a common denominator.
pub fn twist_order_oracle(n: &[i64], u: &[i64], v: &[i64]) -> usize {
    let l = n.iter().fold(1i64, |acc, &x| acc.lcm(&x));
    let gens: Vec<(i64, i64)> = (0..n.len())
        .map(|i| ((u[i] * (l / n[i])).rem_euclid(l), (v[i] * (l / n[i])).rem_euclid(l)))
        .collect();
    let mut seen = BTreeSet::from([(0i64, 0i64)]);
    let mut queue = VecDeque::from([(0i64, 0i64)]);
    while let Some((a, b)) = queue.pop_front() {
        for &(x, y) in &gens {
            let next = ((a + x).rem_euclid(l), (b + y).rem_euclid(l));
            if seen.insert(next) {
                queue.push_back(next);
            }
        }
    }
    seen.len()
}
