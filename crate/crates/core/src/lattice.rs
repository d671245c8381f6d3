//! Exact integer linear algebra for finitely presented abelian groups.
//!
//! A [`RelationPresentation`] lists relation rows `R`; the presented group is
//! `ℤ^n / rowspan(R)`. Everything is decided through a Smith decomposition
//! `U·R·V = D`: a class `x` is trivial iff `y = x·V` has `d_j | y_j` on the
//! diagonal part and `y_j = 0` on the free part.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

/// Upper bound on the number of multiplicity vectors `a` examined by
/// [`enumerate_decompositions`].
pub const MAX_DECOMPOSITION_SEARCH: u128 = 20_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("relation row {row} has length {len}, expected {expected}")]
    RaggedRow { row: usize, len: usize, expected: usize },
    #[error("vector length {found} does not match {expected} generators")]
    LengthMismatch { expected: usize, found: usize },
    #[error("presentation has {generators} generators but {fibers} multiple fibers (need fibers + 1)")]
    FiberCountMismatch { generators: usize, fibers: usize },
    #[error("degenerate fiber class: [F] has finite order in the presented group")]
    DegenerateFiberClass,
    #[error("multiplicity {value} at position {index} must be positive")]
    InvalidMultiplicity { index: usize, value: i64 },
    #[error("fiber {index}: gcd(n, u, v) = gcd({n}, {u}, {v}) must be 1")]
    GcdViolation { index: usize, n: i64, u: i64, v: i64 },
    #[error(
        "fibers are not projective: the sum of zeta_i = (u_i + v_i*omega)/n_i must vanish, \
         but the {part}-coefficients sum to {sum}"
    )]
    NotProjective { part: &'static str, sum: Ratio<i64> },
    #[error("fiber lists have different lengths: n={n}, u={u}, v={v}")]
    FiberDataMismatch { n: usize, u: usize, v: usize },
    #[error("decomposition search space of {0} multiplicity vectors exceeds the limit")]
    SearchSpaceTooLarge(u128),
}

pub type Result<T, E = LatticeError> = std::result::Result<T, E>;

/// Dense integer matrix with arbitrary-precision entries.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = BigInt::one();
        }
        m
    }

    /// Builds a `rows.len() × cols` matrix; every row must have length `cols`.
    pub fn from_rows(rows: &[Vec<i64>], cols: usize) -> Result<Self> {
        let mut m = Self::zeros(rows.len(), cols);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != cols {
                return Err(LatticeError::RaggedRow {
                    row: i,
                    len: row.len(),
                    expected: cols,
                });
            }
            for (j, v) in row.iter().enumerate() {
                m.data[i * cols + j] = BigInt::from(*v);
            }
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: BigInt) {
        self.data[i * self.cols + j] = value;
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    /// Matrix product; panics on a dimension mismatch.
    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "matrix dimension mismatch");
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let idx = i * other.cols + j;
                    out.data[idx] += a * other.get(k, j);
                }
            }
        }
        out
    }

    /// Row vector times matrix.
    pub fn left_mul_vec(&self, x: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(x.len(), self.rows, "vector length mismatch");
        let mut out = vec![BigInt::zero(); self.cols];
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, o) in out.iter_mut().enumerate() {
                *o += xi * self.get(i, j);
            }
        }
        out
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut a = self.to_rows();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                    Some(i) => {
                        a.swap(i, k);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in (k + 1)..n {
                for j in (k + 1)..n {
                    let num = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                    a[i][j] = num / &prev;
                }
            }
            prev = a[k][k].clone();
        }
        sign * &a[n - 1][n - 1]
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// `row[dst] += k · row[src]`
    fn add_row_multiple(&mut self, dst: usize, src: usize, k: &BigInt) {
        for j in 0..self.cols {
            let v = self.get(src, j) * k;
            self.data[dst * self.cols + j] += v;
        }
    }

    /// `col[dst] += k · col[src]`
    fn add_col_multiple(&mut self, dst: usize, src: usize, k: &BigInt) {
        for i in 0..self.rows {
            let v = self.get(i, src) * k;
            self.data[i * self.cols + dst] += v;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let idx = i * self.cols + j;
            self.data[idx] = -&self.data[idx];
        }
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|v| v.to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// `U·R·V = D` with `U`, `V` unimodular and `D` diagonal with `d_1 | d_2 | …`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithDecomposition {
    pub d: IntMatrix,
    pub u: IntMatrix,
    pub v: IntMatrix,
}

impl SmithDecomposition {
    /// Number of nonzero diagonal entries.
    pub fn rank(&self) -> usize {
        self.diagonal().iter().take_while(|x| !x.is_zero()).count()
    }

    /// The diagonal of `D` (length `min(rows, cols)`).
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.d.rows().min(self.d.cols()))
            .map(|i| self.d.get(i, i).clone())
            .collect()
    }

    /// Nonzero diagonal entries.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        self.diagonal().into_iter().filter(|x| !x.is_zero()).collect()
    }
}

fn min_abs_nonzero(a: &IntMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in t..a.rows() {
        for j in t..a.cols() {
            let x = a.get(i, j);
            if x.is_zero() {
                continue;
            }
            // strict comparison keeps the first entry in row-major order on ties
            if best.is_none_or(|(bi, bj)| x.abs() < a.get(bi, bj).abs()) {
                best = Some((i, j));
            }
        }
    }
    best
}

/// Smith normal form with unimodular transforms.
///
/// The pivot is always the nonzero entry of minimal absolute value in the
/// remaining submatrix, first in row-major order on ties.
pub fn smith_normal_form(r: &IntMatrix) -> SmithDecomposition {
    let (m, n) = (r.rows(), r.cols());
    let mut a = r.clone();
    let mut u = IntMatrix::identity(m);
    let mut v = IntMatrix::identity(n);

    for t in 0..m.min(n) {
        let Some((pi, pj)) = min_abs_nonzero(&a, t) else {
            break;
        };
        a.swap_rows(t, pi);
        u.swap_rows(t, pi);
        a.swap_cols(t, pj);
        v.swap_cols(t, pj);

        loop {
            let pivot = a.get(t, t).clone();
            let mut remainder = false;
            for i in (t + 1)..m {
                if a.get(i, t).is_zero() {
                    continue;
                }
                let q = -a.get(i, t).div_floor(&pivot);
                a.add_row_multiple(i, t, &q);
                u.add_row_multiple(i, t, &q);
                remainder |= !a.get(i, t).is_zero();
            }
            for j in (t + 1)..n {
                if a.get(t, j).is_zero() {
                    continue;
                }
                let q = -a.get(t, j).div_floor(&pivot);
                a.add_col_multiple(j, t, &q);
                v.add_col_multiple(j, t, &q);
                remainder |= !a.get(t, j).is_zero();
            }
            if !remainder {
                let offender = ((t + 1)..m)
                    .flat_map(|i| ((t + 1)..n).map(move |j| (i, j)))
                    .find(|&(i, j)| !a.get(i, j).is_multiple_of(&pivot));
                match offender {
                    Some((i, _)) => {
                        a.add_row_multiple(t, i, &BigInt::one());
                        u.add_row_multiple(t, i, &BigInt::one());
                    }
                    None => break,
                }
            }
            // a strictly smaller entry now exists; move it to the pivot slot
            let (pi, pj) = min_abs_nonzero(&a, t).expect("nonzero pivot region");
            a.swap_rows(t, pi);
            u.swap_rows(t, pi);
            a.swap_cols(t, pj);
            v.swap_cols(t, pj);
        }

        if a.get(t, t).is_negative() {
            a.negate_row(t);
            u.negate_row(t);
        }
    }

    SmithDecomposition { d: a, u, v }
}

/// Relations on `n_generators` generators; the group is `ℤ^n / rowspan`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RelationPresentation {
    n_generators: usize,
    relations: Vec<Vec<i64>>,
}

impl RelationPresentation {
    pub fn new(n_generators: usize, relations: Vec<Vec<i64>>) -> Result<Self> {
        for (i, row) in relations.iter().enumerate() {
            if row.len() != n_generators {
                return Err(LatticeError::RaggedRow {
                    row: i,
                    len: row.len(),
                    expected: n_generators,
                });
            }
        }
        Ok(RelationPresentation {
            n_generators,
            relations,
        })
    }

    /// The presentation `⟨F, F_1..F_r | m_i F_i = F⟩` plus any extra rows.
    pub fn fibered(multiplicities: &[i64], extra: Vec<Vec<i64>>) -> Result<Self> {
        let n = multiplicities.len() + 1;
        let mut rows = Vec::with_capacity(multiplicities.len() + extra.len());
        for (i, &m) in multiplicities.iter().enumerate() {
            let mut row = vec![0i64; n];
            row[0] = -1;
            row[i + 1] = m;
            rows.push(row);
        }
        rows.extend(extra);
        RelationPresentation::new(n, rows)
    }

    pub fn n_generators(&self) -> usize {
        self.n_generators
    }

    pub fn relations(&self) -> &[Vec<i64>] {
        &self.relations
    }

    pub fn matrix(&self) -> IntMatrix {
        IntMatrix::from_rows(&self.relations, self.n_generators).expect("validated rows")
    }

    fn check_len(&self, x: &[i64]) -> Result<()> {
        if x.len() != self.n_generators {
            return Err(LatticeError::LengthMismatch {
                expected: self.n_generators,
                found: x.len(),
            });
        }
        Ok(())
    }
}

/// A presented group together with its Smith decomposition.
#[derive(Clone, Debug)]
pub struct ClassGroup {
    presentation: RelationPresentation,
    snf: SmithDecomposition,
    diagonal: Vec<BigInt>,
    rank: usize,
}

/// Coordinates of a class in `⊕ ℤ/d_j ⊕ ℤ^f`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupCoordinates {
    /// Residues modulo the invariant factors greater than one.
    pub torsion: Vec<BigInt>,
    pub free: Vec<BigInt>,
}

impl GroupCoordinates {
    pub fn is_zero(&self) -> bool {
        self.torsion.iter().chain(&self.free).all(|x| x.is_zero())
    }
}

impl ClassGroup {
    pub fn new(presentation: &RelationPresentation) -> Self {
        let snf = smith_normal_form(&presentation.matrix());
        let diagonal = snf.diagonal();
        let rank = snf.rank();
        ClassGroup {
            presentation: presentation.clone(),
            snf,
            diagonal,
            rank,
        }
    }

    pub fn presentation(&self) -> &RelationPresentation {
        &self.presentation
    }

    pub fn smith(&self) -> &SmithDecomposition {
        &self.snf
    }

    pub fn free_rank(&self) -> usize {
        self.presentation.n_generators - self.rank
    }

    /// Orders of the cyclic torsion factors (invariant factors above one).
    pub fn torsion_orders(&self) -> Vec<BigInt> {
        self.diagonal[..self.rank]
            .iter()
            .filter(|d| !d.is_one())
            .cloned()
            .collect()
    }

    pub fn torsion_order(&self) -> BigInt {
        self.torsion_orders().iter().product()
    }

    /// Raw coordinates `x·V` (not reduced).
    fn transformed(&self, x: &[BigInt]) -> Vec<BigInt> {
        self.snf.v.left_mul_vec(x)
    }

    pub fn coordinates(&self, x: &[i64]) -> Result<GroupCoordinates> {
        self.presentation.check_len(x)?;
        let big: Vec<BigInt> = x.iter().map(|v| BigInt::from(*v)).collect();
        Ok(self.reduce(&self.transformed(&big)))
    }

    fn reduce(&self, y: &[BigInt]) -> GroupCoordinates {
        let torsion = (0..self.rank)
            .filter(|&j| !self.diagonal[j].is_one())
            .map(|j| y[j].mod_floor(&self.diagonal[j]))
            .collect();
        let free = y[self.rank..].to_vec();
        GroupCoordinates { torsion, free }
    }

    pub fn is_trivial(&self, x: &[i64]) -> Result<bool> {
        Ok(self.coordinates(x)?.is_zero())
    }

    pub fn classes_equal(&self, x: &[i64], y: &[i64]) -> Result<bool> {
        self.presentation.check_len(x)?;
        self.presentation.check_len(y)?;
        let diff: Vec<i64> = x.iter().zip(y).map(|(a, b)| a - b).collect();
        self.is_trivial(&diff)
    }

    pub fn has_infinite_order(&self, x: &[i64]) -> Result<bool> {
        Ok(self.coordinates(x)?.free.iter().any(|v| !v.is_zero()))
    }

    /// The rational `λ` with `c = λ·g + torsion`, if one exists; `g` must have
    /// infinite order.
    pub fn rational_multiple(&self, c: &[i64], g: &[i64]) -> Result<Option<Ratio<BigInt>>> {
        let cf = self.coordinates(c)?.free;
        let gf = self.coordinates(g)?.free;
        let Some(pos) = gf.iter().position(|v| !v.is_zero()) else {
            return Err(LatticeError::DegenerateFiberClass);
        };
        let lambda = Ratio::new(cf[pos].clone(), gf[pos].clone());
        let proportional = cf
            .iter()
            .zip(&gf)
            .all(|(a, b)| Ratio::from_integer(a.clone()) == &lambda * b);
        Ok(proportional.then_some(lambda))
    }
}

pub fn classes_equal(p: &RelationPresentation, x: &[i64], y: &[i64]) -> Result<bool> {
    ClassGroup::new(p).classes_equal(x, y)
}

/// A solution of `d·[F] + Σ a_i [F_i] = c` with `d ≥ 0` and `0 ≤ a_i < m_i`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct FiberDecomposition {
    pub d: i64,
    pub a: Vec<i64>,
}

impl FiberDecomposition {
    /// The class `d·[F] + Σ a_i [F_i]` as a generator vector.
    pub fn class_vector(&self) -> Vec<i64> {
        let mut v = Vec::with_capacity(self.a.len() + 1);
        v.push(self.d);
        v.extend(&self.a);
        v
    }
}

impl fmt::Display for FiberDecomposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.d {
            0 => {}
            1 => parts.push("F".to_string()),
            -1 => parts.push("-F".to_string()),
            d => parts.push(format!("{d}F")),
        }
        for (i, &a) in self.a.iter().enumerate() {
            match a {
                0 => {}
                1 => parts.push(format!("F{}", i + 1)),
                _ => parts.push(format!("{a}F{}", i + 1)),
            }
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// Iterates over `∏ [0, m_i)` in lexicographic order.
fn for_each_residue_vector(multiplicities: &[i64], mut visit: impl FnMut(&[i64])) {
    let mut a = vec![0i64; multiplicities.len()];
    loop {
        visit(&a);
        let mut pos = a.len();
        loop {
            if pos == 0 {
                return;
            }
            pos -= 1;
            a[pos] += 1;
            if a[pos] < multiplicities[pos] {
                break;
            }
            a[pos] = 0;
        }
    }
}

pub(crate) fn check_multiplicities(multiplicities: &[i64]) -> Result<()> {
    for (index, &value) in multiplicities.iter().enumerate() {
        if value < 1 {
            return Err(LatticeError::InvalidMultiplicity { index, value });
        }
    }
    Ok(())
}

impl ClassGroup {
    /// All `(d, a)` with `d ≥ 0`, `0 ≤ a_i < m_i` and
    /// `d·[F] + Σ a_i [F_i] = c`. Generator 0 is `[F]`, generators `1..=r`
    /// are the `[F_i]`. Sorted by `(d, a)`.
    pub fn decompositions(
        &self,
        multiplicities: &[i64],
        c: &[i64],
    ) -> Result<Vec<FiberDecomposition>> {
        let n = self.presentation.n_generators;
        if n != multiplicities.len() + 1 {
            return Err(LatticeError::FiberCountMismatch {
                generators: n,
                fibers: multiplicities.len(),
            });
        }
        self.presentation.check_len(c)?;
        check_multiplicities(multiplicities)?;
        let space: u128 = multiplicities.iter().map(|&m| m as u128).product();
        if space > MAX_DECOMPOSITION_SEARCH {
            return Err(LatticeError::SearchSpaceTooLarge(space));
        }

        let mut fiber = vec![BigInt::zero(); n];
        fiber[0] = BigInt::one();
        let f = self.transformed(&fiber);
        let Some(pivot) = (self.rank..n).find(|&j| !f[j].is_zero()) else {
            return Err(LatticeError::DegenerateFiberClass);
        };

        let c_big: Vec<BigInt> = c.iter().map(|v| BigInt::from(*v)).collect();
        let c_coords = self.transformed(&c_big);
        // images of the generators [F_i] under V
        let gens: Vec<Vec<BigInt>> = (1..n).map(|i| self.snf.v.row(i).to_vec()).collect();

        let mut out = Vec::new();
        for_each_residue_vector(multiplicities, |a| {
            let mut y = c_coords.clone();
            for (ai, g) in a.iter().zip(&gens) {
                if *ai == 0 {
                    continue;
                }
                let ai = BigInt::from(*ai);
                for (yj, gj) in y.iter_mut().zip(g) {
                    *yj -= &ai * gj;
                }
            }
            let (d, rem) = y[pivot].div_rem(&f[pivot]);
            if !rem.is_zero() || d.is_negative() {
                return;
            }
            let consistent = (0..n).all(|j| {
                let residual = &y[j] - &d * &f[j];
                if j < self.rank {
                    residual.is_multiple_of(&self.diagonal[j])
                } else {
                    residual.is_zero()
                }
            });
            if consistent {
                out.push(FiberDecomposition {
                    d: d.to_i64().expect("fiber multiplicity fits in i64"),
                    a: a.to_vec(),
                });
            }
        });
        out.sort();
        Ok(out)
    }
}

pub fn enumerate_decompositions(
    p: &RelationPresentation,
    multiplicities: &[i64],
    c: &[i64],
) -> Result<Vec<FiberDecomposition>> {
    ClassGroup::new(p).decompositions(multiplicities, c)
}

/// An element of `(ℚ/ℤ)²`, stored with representatives in `[0, 1)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TwistElement {
    pub u: Ratio<i64>,
    pub v: Ratio<i64>,
}

impl fmt::Display for TwistElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.u, self.v)
    }
}

/// Validated logarithmic-transform data `(n_i, u_i, v_i)`.
pub(crate) fn check_fiber_data(n: &[i64], u: &[i64], v: &[i64]) -> Result<i64> {
    if n.len() != u.len() || n.len() != v.len() {
        return Err(LatticeError::FiberDataMismatch {
            n: n.len(),
            u: u.len(),
            v: v.len(),
        });
    }
    check_multiplicities(n)?;
    for i in 0..n.len() {
        if n[i].gcd(&u[i]).gcd(&v[i]) != 1 {
            return Err(LatticeError::GcdViolation {
                index: i,
                n: n[i],
                u: u[i],
                v: v[i],
            });
        }
    }
    let lcm = n.iter().fold(1i64, |acc, x| acc.lcm(x));
    for (part, coeffs) in [("u", u), ("v", v)] {
        let sum = n
            .iter()
            .zip(coeffs)
            .fold(Ratio::from_integer(0i64), |acc, (ni, ci)| acc + Ratio::new(*ci, *ni));
        if !sum.is_zero() {
            return Err(LatticeError::NotProjective { part, sum });
        }
    }
    Ok(lcm)
}

/// The finite subgroup of `(ℚ/ℤ)²` generated by the points
/// `(u_i/n_i, v_i/n_i)`, listed in ascending order.
pub fn twist_group(n: &[i64], u: &[i64], v: &[i64]) -> Result<Vec<TwistElement>> {
    let lcm = check_fiber_data(n, u, v)?;
    let gens: Vec<(i64, i64)> = (0..n.len())
        .map(|i| {
            let scale = lcm / n[i];
            ((u[i] * scale).rem_euclid(lcm), (v[i] * scale).rem_euclid(lcm))
        })
        .collect();
    let mut seen = BTreeSet::from([(0i64, 0i64)]);
    let mut queue = VecDeque::from([(0i64, 0i64)]);
    while let Some((x, y)) = queue.pop_front() {
        for &(gx, gy) in &gens {
            let next = ((x + gx) % lcm, (y + gy) % lcm);
            if seen.insert(next) {
                queue.push_back(next);
            }
        }
    }
    Ok(seen
        .into_iter()
        .map(|(x, y)| TwistElement {
            u: Ratio::new(x, lcm),
            v: Ratio::new(y, lcm),
        })
        .collect())
}

/// The index `[Γ' : Γ]` of `Γ = ℤ ⊕ ℤω` in the lattice generated by `Γ` and
/// the `ζ_i = (u_i + v_i ω)/n_i`, from the Smith form of the scaled generators.
pub fn twist_index(n: &[i64], u: &[i64], v: &[i64]) -> Result<BigInt> {
    let lcm = check_fiber_data(n, u, v)?;
    let mut rows = vec![vec![lcm, 0], vec![0, lcm]];
    for i in 0..n.len() {
        let scale = lcm / n[i];
        rows.push(vec![u[i] * scale, v[i] * scale]);
    }
    let snf = smith_normal_form(&IntMatrix::from_rows(&rows, 2)?);
    let covolume: BigInt = snf.invariant_factors().iter().product();
    let full = BigInt::from(lcm) * BigInt::from(lcm);
    Ok(full / covolume)
}
