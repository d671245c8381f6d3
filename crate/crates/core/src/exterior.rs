//! Exact arithmetic in the integral exterior algebra on `2q` generators.
//!
//! Elements are finite integer combinations of monomials `e_S`, where `S` is a
//! strictly ascending subset of `{1, …, 2q}`. Monomials are stored as bit
//! masks (bit `i - 1` set iff `e_i` occurs), which caps the rank at 64.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

/// Largest supported number of generators.
pub const MAX_RANK: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExteriorError {
    #[error("rank mismatch: {left} vs {right}")]
    RankMismatch { left: usize, right: usize },
    #[error("invalid rank {0}: must be even and at most {MAX_RANK}")]
    InvalidRank(usize),
    #[error("generator index {index} out of range 1..={rank}")]
    IndexOutOfRange { index: usize, rank: usize },
    #[error("monomial indices must be strictly ascending, got {0:?}")]
    NotAscending(Vec<usize>),
    #[error("malformed monomial key {0:?}")]
    MalformedKey(String),
    #[error("expected a homogeneous element of degree {expected}, found degrees {found:?}")]
    NotHomogeneous { expected: usize, found: Vec<usize> },
    #[error("odd-degree component (degree {0}) where only even degrees are allowed")]
    OddDegree(usize),
    #[error("integrality violated: {0}")]
    Integrality(String),
    #[error("invalid skew form: {0}")]
    InvalidSkewForm(String),
}

pub type Result<T, E = ExteriorError> = std::result::Result<T, E>;

fn check_rank(rank: usize) -> Result<()> {
    if rank % 2 != 0 || rank > MAX_RANK {
        return Err(ExteriorError::InvalidRank(rank));
    }
    Ok(())
}

/// A basis monomial `e_{i1} ∧ … ∧ e_{ik}` with `i1 < … < ik`.
///
/// Ordered by degree first, then lexicographically by index list.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Monomial(u64);

impl Monomial {
    pub const UNIT: Monomial = Monomial(0);

    /// Builds a monomial from a strictly ascending list of 1-based indices.
    pub fn new(indices: &[usize], rank: usize) -> Result<Self> {
        let mut mask = 0u64;
        let mut prev = 0usize;
        for &i in indices {
            if i == 0 || i > rank {
                return Err(ExteriorError::IndexOutOfRange { index: i, rank });
            }
            if i <= prev {
                return Err(ExteriorError::NotAscending(indices.to_vec()));
            }
            prev = i;
            mask |= 1u64 << (i - 1);
        }
        Ok(Monomial(mask))
    }

    /// Parses the canonical key form `"i1.i2.…"`; the empty key is the unit.
    pub fn parse_key(key: &str, rank: usize) -> Result<Self> {
        if key.is_empty() {
            return Ok(Monomial::UNIT);
        }
        let indices = key
            .split('.')
            .map(|s| s.parse::<usize>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|_| ExteriorError::MalformedKey(key.to_string()))?;
        Monomial::new(&indices, rank)
    }

    pub fn mask(self) -> u64 {
        self.0
    }

    pub fn degree(self) -> usize {
        self.0.count_ones() as usize
    }

    /// 1-based generator indices in ascending order.
    pub fn indices(self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.degree());
        let mut rest = self.0;
        while rest != 0 {
            out.push(rest.trailing_zeros() as usize + 1);
            rest &= rest - 1;
        }
        out
    }

    pub fn key(self) -> String {
        self.indices()
            .iter()
            .map(|i| i.to_string())
            .collect::<Vec<_>>()
            .join(".")
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        match self.degree().cmp(&other.degree()) {
            Ordering::Equal => {}
            ord => return ord,
        }
        let diff = self.0 ^ other.0;
        if diff == 0 {
            return Ordering::Equal;
        }
        // the set owning the lowest differing index sorts first
        let low = diff & diff.wrapping_neg();
        if self.0 & low != 0 {
            Ordering::Less
        } else {
            Ordering::Greater
        }
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e[{}]", self.key())
    }
}

/// Parity of the shuffle that sorts the concatenation `(a, b)` of two
/// disjoint ascending index sets. Returns `true` when the sign is negative.
fn shuffle_is_odd(a: u64, b: u64) -> bool {
    debug_assert_eq!(a & b, 0);
    let mut inversions = 0u32;
    let mut rest = b;
    while rest != 0 {
        let j = rest.trailing_zeros();
        // elements of `a` with index above j precede j in the concatenation
        inversions += ((a >> j) >> 1).count_ones();
        rest &= rest - 1;
    }
    inversions % 2 == 1
}

fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

/// An element of `Λ*ℤ^{2q}` with exact integer coefficients.
#[derive(Clone, PartialEq, Eq)]
pub struct ExtElement {
    rank: usize,
    terms: BTreeMap<Monomial, BigInt>,
}

impl ExtElement {
    /// The zero element. Panics if `rank` is odd or exceeds [`MAX_RANK`].
    pub fn zero(rank: usize) -> Self {
        check_rank(rank).expect("valid exterior algebra rank");
        ExtElement {
            rank,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(rank: usize) -> Self {
        Self::scalar(rank, 1)
    }

    pub fn scalar(rank: usize, value: impl Into<BigInt>) -> Self {
        let mut out = Self::zero(rank);
        out.insert(Monomial::UNIT, value.into());
        out
    }

    /// The generator `e_index` (1-based).
    pub fn generator(rank: usize, index: usize) -> Result<Self> {
        Self::basis(rank, &[index], 1)
    }

    /// `coeff · e_{indices}` for a strictly ascending index list.
    pub fn basis(rank: usize, indices: &[usize], coeff: impl Into<BigInt>) -> Result<Self> {
        check_rank(rank)?;
        let mono = Monomial::new(indices, rank)?;
        let mut out = Self::zero(rank);
        out.insert(mono, coeff.into());
        Ok(out)
    }

    /// The top monomial `e_1 ∧ … ∧ e_{2q}`.
    pub fn top(rank: usize) -> Self {
        let indices: Vec<usize> = (1..=rank).collect();
        Self::basis(rank, &indices, 1).expect("valid top monomial")
    }

    /// Builds an element from `(ascending indices, coefficient)` pairs,
    /// summing duplicates and dropping zeros.
    pub fn from_terms<I>(rank: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<usize>, BigInt)>,
    {
        check_rank(rank)?;
        let mut out = Self::zero(rank);
        for (indices, coeff) in terms {
            let mono = Monomial::new(&indices, rank)?;
            out.insert(mono, coeff);
        }
        Ok(out)
    }

    /// Parses the canonical `(key, coefficient)` pair form.
    pub fn from_canonical_pairs<'a, I>(rank: usize, pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (&'a str, BigInt)>,
    {
        check_rank(rank)?;
        let mut out = Self::zero(rank);
        for (key, coeff) in pairs {
            out.insert(Monomial::parse_key(key, rank)?, coeff);
        }
        Ok(out)
    }

    fn insert(&mut self, mono: Monomial, coeff: BigInt) {
        if coeff.is_zero() {
            return;
        }
        let entry = self.terms.entry(mono).or_insert_with(BigInt::zero);
        *entry += coeff;
        if entry.is_zero() {
            self.terms.remove(&mono);
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Half the rank: the irregularity `q` of the underlying surface.
    pub fn q(&self) -> usize {
        self.rank / 2
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (Monomial, &BigInt)> {
        self.terms.iter().map(|(m, c)| (*m, c))
    }

    pub fn coefficient(&self, mono: Monomial) -> BigInt {
        self.terms.get(&mono).cloned().unwrap_or_default()
    }

    /// Coefficient of `e_{indices}`; zero for malformed index lists.
    pub fn coefficient_of(&self, indices: &[usize]) -> BigInt {
        Monomial::new(indices, self.rank)
            .map(|m| self.coefficient(m))
            .unwrap_or_default()
    }

    pub fn degrees(&self) -> BTreeSet<usize> {
        self.terms.keys().map(|m| m.degree()).collect()
    }

    pub fn top_degree(&self) -> Option<usize> {
        self.terms.keys().map(|m| m.degree()).max()
    }

    /// True when every term has degree `degree`. Zero is homogeneous of every degree.
    pub fn is_homogeneous(&self, degree: usize) -> bool {
        self.terms.keys().all(|m| m.degree() == degree)
    }

    /// The homogeneous component of the given degree.
    pub fn component(&self, degree: usize) -> ExtElement {
        ExtElement {
            rank: self.rank,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() == degree)
                .map(|(m, c)| (*m, c.clone()))
                .collect(),
        }
    }

    pub fn scaled(&self, factor: &BigInt) -> ExtElement {
        if factor.is_zero() {
            return ExtElement::zero(self.rank);
        }
        ExtElement {
            rank: self.rank,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (*m, c * factor))
                .collect(),
        }
    }

    fn same_rank(&self, other: &ExtElement) -> Result<()> {
        if self.rank != other.rank {
            return Err(ExteriorError::RankMismatch {
                left: self.rank,
                right: other.rank,
            });
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &ExtElement) -> Result<ExtElement> {
        self.same_rank(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.insert(*m, c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &ExtElement) -> Result<ExtElement> {
        self.checked_add(&-other)
    }

    /// Exterior product. Terms sharing a generator vanish; the sign of each
    /// surviving term is the parity of the merging shuffle.
    pub fn wedge(&self, other: &ExtElement) -> Result<ExtElement> {
        self.same_rank(other)?;
        let mut out = ExtElement::zero(self.rank);
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                if a.0 & b.0 != 0 {
                    continue;
                }
                let mut coeff = ca * cb;
                if shuffle_is_odd(a.0, b.0) {
                    coeff = -coeff;
                }
                out.insert(Monomial(a.0 | b.0), coeff);
            }
        }
        Ok(out)
    }

    /// `self^n / n!` for a homogeneous element of degree 2. The exact
    /// division is checked coefficient by coefficient.
    pub fn divided_power(&self, n: usize) -> Result<ExtElement> {
        Ok(self.divided_powers(n)?.pop().expect("n + 1 entries"))
    }

    /// `[self^0/0!, …, self^n/n!]`, sharing the wedge powers.
    pub fn divided_powers(&self, n: usize) -> Result<Vec<ExtElement>> {
        if !self.is_homogeneous(2) {
            return Err(ExteriorError::NotHomogeneous {
                expected: 2,
                found: self.degrees().into_iter().collect(),
            });
        }
        let mut out = vec![ExtElement::one(self.rank)];
        let mut power = ExtElement::one(self.rank);
        let mut denom = BigInt::one();
        for k in 1..=n {
            denom *= BigInt::from(k);
            if !power.is_zero() {
                power = power.wedge(self)?;
            }
            let mut divided = ExtElement::zero(self.rank);
            for (m, c) in &power.terms {
                let (quot, rem) = c.div_rem(&denom);
                if !rem.is_zero() {
                    return Err(ExteriorError::Integrality(format!(
                        "coefficient {c} of e[{}] in the {k}-th wedge power is not divisible by {k}!",
                        m.key()
                    )));
                }
                divided.insert(*m, quot);
            }
            out.push(divided);
        }
        Ok(out)
    }

    /// `Σ_k self^k / k!` for a 2-form; finite because the algebra is nilpotent.
    pub fn exp_two_form(&self) -> Result<ExtElement> {
        Ok(self
            .divided_powers(self.q())?
            .into_iter()
            .fold(ExtElement::zero(self.rank), |acc, t| acc + t))
    }

    /// Drops every homogeneous component of degree above `n`. A negative
    /// bound yields zero.
    pub fn truncate(&self, n: i64) -> ExtElement {
        ExtElement {
            rank: self.rank,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| (m.degree() as i64) <= n)
                .map(|(m, c)| (*m, c.clone()))
                .collect(),
        }
    }

    /// Cap product with the fundamental class of the `2q`-torus.
    ///
    /// `e_S` goes to `ε_q · sign(S, S^c) · e_{S^c}`, where `sign(S, S^c)` is the
    /// parity of the permutation sorting the concatenation into `(1, …, 2q)`
    /// and `ε_q = (-1)^{q(q-1)/2}` orients the torus so that
    /// `θ_std^q / q!` caps to `+1`.
    pub fn cap_fundamental(&self) -> ExtElement {
        let full = if self.rank == 64 {
            u64::MAX
        } else {
            (1u64 << self.rank) - 1
        };
        let flip_orientation = orientation_is_negative(self.q());
        let mut out = ExtElement::zero(self.rank);
        for (m, c) in &self.terms {
            let comp = full ^ m.0;
            let negative = shuffle_is_odd(m.0, comp) ^ flip_orientation;
            out.insert(Monomial(comp), if negative { -c } else { c.clone() });
        }
        out
    }

    /// The scalar (degree 0) coefficient.
    pub fn numeric_degree(&self) -> BigInt {
        self.coefficient(Monomial::UNIT)
    }

    /// Canonical serialized form: `(key, coefficient)` pairs in monomial
    /// order, with the scalar under the empty key.
    pub fn canonical_pairs(&self) -> Vec<(String, BigInt)> {
        self.terms.iter().map(|(m, c)| (m.key(), c.clone())).collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(
            self.terms
                .iter()
                .map(|(m, c)| serde_json::json!([m.key(), bigint_to_json(c)]))
                .collect(),
        )
    }
}

fn orientation_is_negative(q: usize) -> bool {
    (q * q.saturating_sub(1) / 2) % 2 == 1
}

/// Integers that fit in `i64` become JSON numbers; larger ones are emitted as
/// decimal strings.
pub fn bigint_to_json(value: &BigInt) -> serde_json::Value {
    match value.to_i64() {
        Some(v) => serde_json::Value::from(v),
        None => serde_json::Value::String(value.to_string()),
    }
}

/// Total Chern class from a Chern character with only even-degree (hence
/// commuting) components, by Newton's identities:
/// `k·c_k = Σ_{i=1}^{k} (-1)^{i-1} c_{k-i} · p_i` with `p_i = i!·ch_i`.
/// The result is truncated at degree `2·dim`.
pub fn chern_from_character(ch: &ExtElement, dim: usize) -> Result<ExtElement> {
    if let Some(odd) = ch.degrees().into_iter().find(|d| d % 2 == 1) {
        return Err(ExteriorError::OddDegree(odd));
    }
    let rank = ch.rank();
    let top = dim.min(ch.q());
    let power_sums: Vec<ExtElement> = (0..=top)
        .map(|i| ch.component(2 * i).scaled(&factorial(i)))
        .collect();
    let mut chern = vec![ExtElement::one(rank)];
    for k in 1..=top {
        let mut acc = ExtElement::zero(rank);
        for i in 1..=k {
            let term = chern[k - i].wedge(&power_sums[i])?;
            acc = if i % 2 == 1 { acc + term } else { acc - term };
        }
        let denom = BigInt::from(k);
        let mut c_k = ExtElement::zero(rank);
        for (m, c) in acc.terms {
            let (quot, rem) = c.div_rem(&denom);
            if !rem.is_zero() {
                return Err(ExteriorError::Integrality(format!(
                    "Chern class c_{k} has non-integral coefficient {c}/{k} at e[{}]",
                    m.key()
                )));
            }
            c_k.insert(m, quot);
        }
        chern.push(c_k);
    }
    let total = chern.into_iter().fold(ExtElement::zero(rank), |a, b| a + b);
    Ok(total.truncate(2 * dim as i64))
}

impl Add for ExtElement {
    type Output = ExtElement;
    fn add(self, rhs: ExtElement) -> ExtElement {
        self.checked_add(&rhs).expect("rank mismatch in exterior sum")
    }
}

impl<'a> Add<&'a ExtElement> for &'a ExtElement {
    type Output = ExtElement;
    fn add(self, rhs: &ExtElement) -> ExtElement {
        self.checked_add(rhs).expect("rank mismatch in exterior sum")
    }
}

impl Sub for ExtElement {
    type Output = ExtElement;
    fn sub(self, rhs: ExtElement) -> ExtElement {
        self.checked_sub(&rhs).expect("rank mismatch in exterior difference")
    }
}

impl<'a> Sub<&'a ExtElement> for &'a ExtElement {
    type Output = ExtElement;
    fn sub(self, rhs: &ExtElement) -> ExtElement {
        self.checked_sub(rhs).expect("rank mismatch in exterior difference")
    }
}

impl Neg for ExtElement {
    type Output = ExtElement;
    fn neg(self) -> ExtElement {
        -&self
    }
}

impl Neg for &ExtElement {
    type Output = ExtElement;
    fn neg(self) -> ExtElement {
        ExtElement {
            rank: self.rank,
            terms: self.terms.iter().map(|(m, c)| (*m, -c)).collect(),
        }
    }
}

impl fmt::Display for ExtElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (pos, (m, c)) in self.terms.iter().enumerate() {
            let (sign, mag) = if c.is_negative() {
                ("-", -c)
            } else {
                ("+", c.clone())
            };
            if pos == 0 {
                if sign == "-" {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            if m.degree() == 0 {
                write!(f, "{mag}")?;
            } else {
                if !mag.is_one() {
                    write!(f, "{mag}")?;
                }
                for i in m.indices() {
                    write!(f, "e{i}")?;
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for ExtElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ExtElement(rank={}, {})", self.rank, self)
    }
}

/// An antisymmetric integer matrix of size `2q × 2q`, read as the 2-form
/// `Σ_{i<j} A_ij e_i ∧ e_j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SkewForm {
    q: usize,
    entries: Vec<Vec<i64>>,
}

impl SkewForm {
    pub fn new(entries: Vec<Vec<i64>>) -> Result<Self> {
        let n = entries.len();
        if n % 2 != 0 || n > MAX_RANK {
            return Err(ExteriorError::InvalidSkewForm(format!(
                "dimension {n} must be even and at most {MAX_RANK}"
            )));
        }
        for (i, row) in entries.iter().enumerate() {
            if row.len() != n {
                return Err(ExteriorError::InvalidSkewForm(format!(
                    "row {i} has length {}, expected {n}",
                    row.len()
                )));
            }
        }
        for i in 0..n {
            for j in 0..n {
                if entries[i][j] != -entries[j][i] {
                    return Err(ExteriorError::InvalidSkewForm(format!(
                        "entries ({i},{j}) and ({j},{i}) are not negatives of each other"
                    )));
                }
            }
        }
        Ok(SkewForm { q: n / 2, entries })
    }

    /// Builds the form from its strict upper triangle, row by row.
    pub fn from_upper(q: usize, upper: &[i64]) -> Result<Self> {
        let n = 2 * q;
        if upper.len() != n * n.saturating_sub(1) / 2 {
            return Err(ExteriorError::InvalidSkewForm(format!(
                "expected {} upper-triangular entries, got {}",
                n * n.saturating_sub(1) / 2,
                upper.len()
            )));
        }
        let mut entries = vec![vec![0i64; n]; n];
        let mut it = upper.iter();
        for i in 0..n {
            for j in (i + 1)..n {
                let v = *it.next().expect("length checked");
                entries[i][j] = v;
                entries[j][i] = -v;
            }
        }
        SkewForm::new(entries)
    }

    /// `θ_std = Σ_{i=1}^q e_i ∧ e_{q+i}`.
    pub fn standard(q: usize) -> Self {
        let n = 2 * q;
        let mut entries = vec![vec![0i64; n]; n];
        for i in 0..q {
            entries[i][q + i] = 1;
            entries[q + i][i] = -1;
        }
        SkewForm { q, entries }
    }

    pub fn scaled(&self, factor: i64) -> Self {
        SkewForm {
            q: self.q,
            entries: self
                .entries
                .iter()
                .map(|row| row.iter().map(|v| v * factor).collect())
                .collect(),
        }
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn dim(&self) -> usize {
        2 * self.q
    }

    /// Entry `A_ij` with 1-based indices.
    pub fn entry(&self, i: usize, j: usize) -> i64 {
        self.entries[i - 1][j - 1]
    }

    pub fn entries(&self) -> &[Vec<i64>] {
        &self.entries
    }

    pub fn two_form(&self) -> ExtElement {
        let n = self.dim();
        let mut out = ExtElement::zero(n);
        for i in 0..n {
            for j in (i + 1)..n {
                let v = self.entries[i][j];
                if v != 0 {
                    out.insert(Monomial((1u64 << i) | (1u64 << j)), BigInt::from(v));
                }
            }
        }
        out
    }
}
