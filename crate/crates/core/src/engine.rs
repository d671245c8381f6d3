//! Closed-form evaluation of `(P⁺, P⁻)` and the identities tying the
//! formulas together: wall crossing, modified Segre classes, the
//! Riemann–Roch character, blow-up truncation and duality.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_rational::Ratio;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::exterior::{bigint_to_json, ExtElement, ExteriorError, SkewForm};
use crate::lattice::{FiberDecomposition, LatticeError};
use crate::surface::{
    DivisorClass, EllipticModel, PgPositiveKind, PgZeroKind, RuledClass, SpecialClass, SurfaceError,
    SurfaceModel, SymbolicClass,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error("m(m-k)/2 = {0} is negative")]
    NegativeNu(i64),
    #[error("m(m-k) = {0} is odd")]
    OddSelfPairing(i64),
    #[error("pairing <2m-k, [F]>/2 = {0} is not an integer")]
    NonIntegralPairing(String),
    #[error("rank mismatch: {left} vs {right}")]
    RankMismatch { left: usize, right: usize },
    #[error("malformed Chern class: {0}")]
    MalformedChern(String),
    #[error("surfaces with p_g = 0 have infinitely many basic classes")]
    InfiniteBasicClasses,
    #[error("invariant violated: {0}")]
    Invariant(String),
    #[error("{0}")]
    Unsupported(String),
    #[error(transparent)]
    Exterior(#[from] ExteriorError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Surface(#[from] SurfaceError),
}

pub type Result<T, E = EngineError> = std::result::Result<T, E>;

/// Which closed form produced a value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Provenance {
    /// Sign rule on `⟨m, [F]⟩` for rational ruled surfaces.
    RationalRuledSign,
    /// `Σ_d (⟨m,[F]⟩ + 1)^{g-d} [W_d]` on a ruled surface of genus `g ≥ 1`.
    RuledSections,
    /// Sum over fiber decompositions of `(-1)^d binom(2g-2+χ, d)`.
    EllipticFibers,
    /// `K3` and abelian surfaces: `0` is the only basic class.
    TrivialCanonicalBasic,
    /// General type: basic classes `0` and `k`, with `deg = (-1)^χ` at `k`
    /// taken as an input rule.
    GeneralTypeBasic,
    /// `p_g = 0` special surfaces: wall crossing plus emptiness input.
    PgZeroEmptiness,
    /// `Σ_j θ^{q-j}/(q-j)! ∩ [Pic]`.
    WallCrossing,
    /// `Σ_d c^{q-d} [W_d]`.
    WallCrossingFibered,
    ModifiedSegre,
    BlowUpTruncation(Box<Provenance>),
}

impl Provenance {
    pub fn tag(&self) -> String {
        match self {
            Provenance::RationalRuledSign => "rational_ruled_sign".into(),
            Provenance::RuledSections => "ruled_sections".into(),
            Provenance::EllipticFibers => "elliptic_fiber_sum".into(),
            Provenance::TrivialCanonicalBasic => "trivial_canonical_basic_class".into(),
            Provenance::GeneralTypeBasic => "general_type_basic_classes".into(),
            Provenance::PgZeroEmptiness => "pg_zero_emptiness".into(),
            Provenance::WallCrossing => "wall_crossing".into(),
            Provenance::WallCrossingFibered => "wall_crossing_fibered".into(),
            Provenance::ModifiedSegre => "modified_segre".into(),
            Provenance::BlowUpTruncation(inner) => format!("blowup_truncation({})", inner.tag()),
        }
    }

    pub fn formula(&self) -> String {
        match self {
            Provenance::RationalRuledSign => {
                "(P+,P-) = (1,0) if m.F >= 0, (0,-1) if m.F < 0".into()
            }
            Provenance::RuledSections => "P = sum_{d<=min(g,nu)} (m.F+1)^(g-d) [W_d]".into(),
            Provenance::EllipticFibers => {
                "P = sum over d[F]+sum a_i[F_i] of (-1)^d binom(2g-2+chi, d)".into()
            }
            Provenance::TrivialCanonicalBasic => "k = 0: only basic class 0, P+ = P- = 1".into(),
            Provenance::GeneralTypeBasic => {
                "basic classes 0 and k; P(k) = (-1)^chi (conjecture-dependent)".into()
            }
            Provenance::PgZeroEmptiness => {
                "P+ - P- from wall crossing; Hilb^m nonempty picks P+".into()
            }
            Provenance::WallCrossing => "sum_{j<=min(q,nu)} theta^(q-j)/(q-j)! cap [Pic]".into(),
            Provenance::WallCrossingFibered => "sum_{d<=min(q,nu)} c^(q-d) [W_d]".into(),
            Provenance::ModifiedSegre => {
                "sum_{j<=min(q, q-1+rk)} c_(q-j)(-E) cap [Pic]".into()
            }
            Provenance::BlowUpTruncation(inner) => {
                format!("truncation at degree m(m-k) - 2 binom(l,2) of [{}]", inner.formula())
            }
        }
    }
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.tag())
    }
}

/// `(P⁺, P⁻)` in homology convention, with the formula that produced it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PoincarePair {
    pub p_plus: ExtElement,
    pub p_minus: ExtElement,
    pub provenance: Provenance,
    /// The competing value when two overlapping closed forms disagree.
    pub branch_conflict: Option<(ExtElement, ExtElement)>,
}

impl PoincarePair {
    pub fn new(p_plus: ExtElement, p_minus: ExtElement, provenance: Provenance) -> Result<Self> {
        if p_plus.rank() != p_minus.rank() {
            return Err(EngineError::RankMismatch {
                left: p_plus.rank(),
                right: p_minus.rank(),
            });
        }
        Ok(PoincarePair {
            p_plus,
            p_minus,
            provenance,
            branch_conflict: None,
        })
    }

    fn scalars(rank: usize, plus: BigInt, minus: BigInt, provenance: Provenance) -> Self {
        PoincarePair {
            p_plus: ExtElement::scalar(rank, plus),
            p_minus: ExtElement::scalar(rank, minus),
            provenance,
            branch_conflict: None,
        }
    }

    pub fn rank(&self) -> usize {
        self.p_plus.rank()
    }

    pub fn is_zero(&self) -> bool {
        self.p_plus.is_zero() && self.p_minus.is_zero()
    }

    /// `P⁺ - P⁻`.
    pub fn difference(&self) -> ExtElement {
        &self.p_plus - &self.p_minus
    }

    pub fn numeric_degrees(&self) -> (BigInt, BigInt) {
        (self.p_plus.numeric_degree(), self.p_minus.numeric_degree())
    }

    pub fn to_json(&self) -> Value {
        let (a, b) = self.numeric_degrees();
        let mut obj = json!({
            "p_plus": self.p_plus.to_json(),
            "p_minus": self.p_minus.to_json(),
            "rank": self.rank(),
            "provenance": self.provenance.tag(),
            "formula": self.provenance.formula(),
            "numeric_degrees": [bigint_to_json(&a), bigint_to_json(&b)],
        });
        if let Some((plus, minus)) = &self.branch_conflict {
            obj["branch_conflict"] = json!({"p_plus": plus.to_json(), "p_minus": minus.to_json()});
        }
        obj
    }
}

/// `binom(n, d) = n(n-1)…(n-d+1)/d!` for any integer `n`; zero for `d < 0`.
pub fn binomial(n: i64, d: i64) -> BigInt {
    if d < 0 {
        return BigInt::zero();
    }
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 0..d {
        num *= BigInt::from(n - i);
        den *= BigInt::from(i + 1);
    }
    num / den
}

fn sign(odd: bool) -> BigInt {
    if odd {
        -BigInt::one()
    } else {
        BigInt::one()
    }
}

fn is_odd(n: i64) -> bool {
    n.rem_euclid(2) == 1
}

/// `Σ_{j=0}^{min(q,ν)} θ^{q-j}/(q-j)! ∩ [Pic]` for a 2-form `θ` of rank `2q`.
pub fn wall_crossing_difference(q: usize, nu: i64, theta: &ExtElement) -> Result<ExtElement> {
    if theta.rank() != 2 * q {
        return Err(EngineError::RankMismatch {
            left: 2 * q,
            right: theta.rank(),
        });
    }
    if nu < 0 {
        return Err(EngineError::NegativeNu(nu));
    }
    let top = (q as i64).min(nu) as usize;
    let powers = theta.divided_powers(q)?;
    let mut out = ExtElement::zero(2 * q);
    for j in 0..=top {
        out = out + powers[q - j].cap_fundamental();
    }
    Ok(out)
}

/// `[W_d] = θ_std^{g-d}/(g-d)! ∩ [Pic]` on a Jacobian of dimension `g`.
pub fn brill_noether_class(g: usize, d: usize) -> Result<ExtElement> {
    if d > g {
        return Ok(ExtElement::zero(2 * g));
    }
    Ok(SkewForm::standard(g)
        .two_form()
        .divided_power(g - d)?
        .cap_fundamental())
}

/// `Σ_{d=0}^{min(q,ν)} c^{q-d} [W_d]` with `0⁰ = 1`.
pub fn wall_crossing_fibered(q: usize, nu: i64, c_half: &BigInt) -> Result<ExtElement> {
    if nu < 0 {
        return Err(EngineError::NegativeNu(nu));
    }
    let top = (q as i64).min(nu) as usize;
    let mut out = ExtElement::zero(2 * q);
    for d in 0..=top {
        let coeff = num_traits::pow(c_half.clone(), q - d);
        out = out + brill_noether_class(q, d)?.scaled(&coeff);
    }
    Ok(out)
}

/// Invariants of a ruled surface over a curve of genus `g`.
///
/// For `⟨m,[F]⟩ ≥ 0` the pair is `(S, 0)`, for `⟨m,[F]⟩ ≤ -1` it is
/// `(0, -S)`, where `S = Σ_{d≤min(g,ν)} (⟨m,[F]⟩+1)^{g-d} [W_d]`. At
/// `⟨m,[F]⟩ = -1` both closed forms apply; the second is returned (an
/// effective divisor cannot meet the nef class `F` negatively) and the first
/// is attached as `branch_conflict` when it differs. For `g = 0` the sign rule
/// decides and no conflict is reported.
pub fn poincare_ruled(g: usize, class: &RuledClass) -> Result<PoincarePair> {
    if class.nu < 0 {
        return Err(EngineError::NegativeNu(class.nu));
    }
    let sum = wall_crossing_fibered(g, class.nu, &BigInt::from(class.fiber_pairing + 1))?;
    let zero = ExtElement::zero(2 * g);
    let provenance = if g == 0 {
        Provenance::RationalRuledSign
    } else {
        Provenance::RuledSections
    };
    if class.fiber_pairing >= 0 {
        return PoincarePair::new(sum, zero, provenance);
    }
    let mut pair = PoincarePair::new(zero.clone(), -&sum, provenance)?;
    if class.fiber_pairing == -1 && g > 0 && !sum.is_zero() {
        pair.branch_conflict = Some((sum, zero));
    }
    Ok(pair)
}

fn fiber_sum(decompositions: &[FiberDecomposition], canonical_degree: i64) -> BigInt {
    decompositions
        .iter()
        .map(|dec| sign(is_odd(dec.d)) * binomial(canonical_degree, dec.d))
        .sum()
}

/// Invariants of an elliptic fibration at a fiber-type class `m`:
/// `P⁺ = Σ_{m} (-1)^d binom(2g-2+χ, d)` and
/// `P⁻ = (-1)^χ Σ_{k-m} (-1)^d binom(2g-2+χ, d)`, each sum running over the
/// decompositions `d[F] + Σ a_i[F_i]` of the class.
pub fn poincare_elliptic(model: &EllipticModel, m: &[i64]) -> Result<PoincarePair> {
    let n = model.canonical_degree();
    let k_minus_m: Vec<i64> = model
        .canonical_vector()
        .iter()
        .zip(m)
        .map(|(k, x)| k - x)
        .collect();
    let plus = fiber_sum(&model.decompositions(m)?, n);
    let minus = sign(is_odd(model.chi())) * fiber_sum(&model.decompositions(&k_minus_m)?, n);
    let rank = 2 * model.q() as usize;
    Ok(PoincarePair::scalars(rank, plus, minus, Provenance::EllipticFibers))
}

/// Truncation bound `m(m-k) - 2·binom(l, 2)` for a blow-up coefficient `l`.
pub fn blowup_bound(m_m_minus_k: i64, l: i64) -> i64 {
    m_m_minus_k - l * (l - 1)
}

/// `P^±(σ*m + l·e) = τ_{≤ m(m-k) - 2 binom(l,2)} P^±(m)`.
pub fn blowup_transform(pair: &PoincarePair, m_m_minus_k: i64, l: i64) -> PoincarePair {
    let bound = blowup_bound(m_m_minus_k, l);
    let provenance = match &pair.provenance {
        p @ Provenance::BlowUpTruncation(_) => p.clone(),
        p => Provenance::BlowUpTruncation(Box::new(p.clone())),
    };
    PoincarePair {
        p_plus: pair.p_plus.truncate(bound),
        p_minus: pair.p_minus.truncate(bound),
        provenance,
        branch_conflict: pair
            .branch_conflict
            .as_ref()
            .map(|(a, b)| (a.truncate(bound), b.truncate(bound))),
    }
}

/// `[P⁻(m)]^{2i} = (-1)^{χ+i} [P⁺(k-m)]^{2i}` for every `i`.
pub fn duality_check(pair_m: &PoincarePair, pair_km: &PoincarePair, chi: i64) -> Result<bool> {
    if pair_m.rank() != pair_km.rank() {
        return Err(EngineError::RankMismatch {
            left: pair_m.rank(),
            right: pair_km.rank(),
        });
    }
    let q = pair_m.rank() / 2;
    Ok((0..=q).all(|i| {
        let lhs = pair_m.p_minus.component(2 * i);
        let rhs = pair_km.p_plus.component(2 * i);
        lhs == rhs.scaled(&sign(is_odd(chi + i as i64)))
    }))
}

/// `ch(μ_! L) = χ + m(m-k)/2 - θ`.
pub fn grr_character(chi: i64, m_m_minus_k: i64, theta: &ExtElement) -> Result<ExtElement> {
    if is_odd(m_m_minus_k) {
        return Err(EngineError::OddSelfPairing(m_m_minus_k));
    }
    if !theta.is_homogeneous(2) {
        return Err(ExteriorError::NotHomogeneous {
            expected: 2,
            found: theta.degrees().into_iter().collect(),
        }
        .into());
    }
    Ok(ExtElement::scalar(theta.rank(), chi + m_m_minus_k / 2) - theta.clone())
}

/// `Σ_{j=0}^{min(q, q-1+rk)} c_{q-j} ∩ [Pic]`, where `c` is the total Chern
/// class of the negative of a virtual bundle of rank `rk` on a `q`-dimensional
/// torus.
pub fn modified_segre(virtual_rank: i64, chern: &ExtElement, q: usize) -> Result<ExtElement> {
    if chern.rank() != 2 * q {
        return Err(EngineError::RankMismatch {
            left: 2 * q,
            right: chern.rank(),
        });
    }
    if !chern.numeric_degree().is_one() {
        return Err(EngineError::MalformedChern(format!(
            "scalar part is {}, expected 1",
            chern.numeric_degree()
        )));
    }
    if let Some(odd) = chern.degrees().into_iter().find(|d| d % 2 == 1) {
        return Err(EngineError::MalformedChern(format!("odd-degree component of degree {odd}")));
    }
    let top = (q as i64).min(q as i64 - 1 + virtual_rank);
    let mut out = ExtElement::zero(2 * q);
    for j in 0..=top.max(-1) {
        if j < 0 {
            break;
        }
        out = out + chern.component(2 * (q - j as usize)).cap_fundamental();
    }
    Ok(out)
}

fn scalar_pair(model: &SurfaceModel, plus: i64, minus: i64, provenance: Provenance) -> PoincarePair {
    PoincarePair::scalars(model.ext_rank(), plus.into(), minus.into(), provenance)
}

fn special_pair(model: &SurfaceModel, kind: PgZeroKind, class: &SpecialClass) -> Result<PoincarePair> {
    if class.nu < 0 {
        return Err(EngineError::NegativeNu(class.nu));
    }
    let difference = match kind {
        PgZeroKind::Enriques => wall_crossing_fibered(0, class.nu, &BigInt::zero())?,
        PgZeroKind::Bielliptic => {
            let c_half = class.c_half.ok_or_else(|| {
                EngineError::Unsupported("bielliptic classes need c_half".into())
            })?;
            wall_crossing_fibered(1, class.nu, &BigInt::from(c_half))?
        }
    };
    let zero = ExtElement::zero(model.ext_rank());
    if class.hilb_nonempty {
        PoincarePair::new(difference, zero, Provenance::PgZeroEmptiness)
    } else {
        PoincarePair::new(zero, -difference, Provenance::PgZeroEmptiness)
    }
}

/// Evaluates `(P⁺(m), P⁻(m))` with whichever closed form fits the model.
pub fn compute(model: &SurfaceModel, class: &DivisorClass) -> Result<PoincarePair> {
    model.check_class(class)?;
    match (model, class) {
        (SurfaceModel::Ruled { base_genus }, DivisorClass::Ruled(c)) => {
            poincare_ruled(*base_genus as usize, c)
        }
        (SurfaceModel::Elliptic(m), DivisorClass::Fiber(v)) => poincare_elliptic(m, v),
        (SurfaceModel::BlowUp { base: model_base, .. }, DivisorClass::BlowUp { base, l }) => {
            let mut pair = compute(model_base, base)?;
            let mut mmk = model_base.m_m_minus_k(base)?;
            for &lj in l {
                pair = blowup_transform(&pair, mmk, lj);
                mmk = blowup_bound(mmk, lj);
            }
            Ok(pair)
        }
        (SurfaceModel::MinimalPgPositive(kind), DivisorClass::Symbolic(s)) => {
            Ok(match (kind, s) {
                (_, SymbolicClass::Other) => {
                    let prov = match kind {
                        PgPositiveKind::GeneralType { .. } => Provenance::GeneralTypeBasic,
                        _ => Provenance::TrivialCanonicalBasic,
                    };
                    scalar_pair(model, 0, 0, prov)
                }
                (PgPositiveKind::K3 | PgPositiveKind::Abelian, _) => {
                    scalar_pair(model, 1, 1, Provenance::TrivialCanonicalBasic)
                }
                (PgPositiveKind::GeneralType { .. }, SymbolicClass::Zero) => {
                    scalar_pair(model, 1, 1, Provenance::GeneralTypeBasic)
                }
                (PgPositiveKind::GeneralType { chi, .. }, SymbolicClass::Canonical) => {
                    let e = if is_odd(*chi) { -1 } else { 1 };
                    scalar_pair(model, e, e, Provenance::GeneralTypeBasic)
                }
            })
        }
        (SurfaceModel::MinimalPgZeroSpecial(kind), DivisorClass::Special(c)) => {
            special_pair(model, *kind, c)
        }
        _ => unreachable!("class checked against model"),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasicClassReport {
    pub classes: Vec<(DivisorClass, PoincarePair)>,
    pub simple_type: bool,
}

/// Basic classes (classes with `(P⁺, P⁻) ≠ (0, 0)`) of a surface with
/// `p_g > 0`.
pub fn basic_classes(model: &SurfaceModel) -> Result<BasicClassReport> {
    if model.invariants().p_g == 0 {
        return Err(EngineError::InfiniteBasicClasses);
    }
    let candidates: Vec<DivisorClass> = match model {
        SurfaceModel::MinimalPgPositive(PgPositiveKind::K3 | PgPositiveKind::Abelian) => {
            vec![DivisorClass::Symbolic(SymbolicClass::Zero)]
        }
        SurfaceModel::MinimalPgPositive(PgPositiveKind::GeneralType { .. }) => vec![
            DivisorClass::Symbolic(SymbolicClass::Zero),
            DivisorClass::Symbolic(SymbolicClass::Canonical),
        ],
        SurfaceModel::Elliptic(m) => elliptic_candidates(m)?,
        SurfaceModel::BlowUp {
            base,
            exceptional_count,
        } => {
            let base_report = basic_classes(base)?;
            let mut out = Vec::new();
            for (class, _) in base_report.classes {
                for bits in 0..(1u64 << *exceptional_count) {
                    let l = (0..*exceptional_count)
                        .map(|j| ((bits >> j) & 1) as i64)
                        .collect();
                    out.push(DivisorClass::BlowUp {
                        base: Box::new(class.clone()),
                        l,
                    });
                }
            }
            out
        }
        _ => {
            return Err(EngineError::Unsupported(format!(
                "basic classes are not available for a {} surface",
                model.kind_name()
            )))
        }
    };
    let mut classes = Vec::new();
    let mut simple_type = true;
    for class in candidates {
        let pair = compute(model, &class)?;
        if pair.is_zero() {
            continue;
        }
        simple_type &= model.m_m_minus_k(&class)? == 0;
        classes.push((class, pair));
    }
    Ok(BasicClassReport {
        classes,
        simple_type,
    })
}

/// Classes `d[F] + Σ a_i[F_i]` with `0 ≤ a_i < m_i` and `0 ≤ d ≤ 2g-2+χ`,
/// one per group element.
fn elliptic_candidates(model: &EllipticModel) -> Result<Vec<DivisorClass>> {
    let group = model.class_group();
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    let mults = model.multiplicities();
    let space: u128 = mults.iter().map(|&m| m as u128).product::<u128>()
        * (model.canonical_degree().max(0) as u128 + 1);
    if space > crate::lattice::MAX_DECOMPOSITION_SEARCH {
        return Err(LatticeError::SearchSpaceTooLarge(space).into());
    }
    for d in 0..=model.canonical_degree() {
        let mut a = vec![0i64; mults.len()];
        loop {
            let mut v = vec![d];
            v.extend(&a);
            if seen.insert(group.coordinates(&v)?) {
                out.push(DivisorClass::Fiber(v));
            }
            let mut pos = a.len();
            let mut done = true;
            while pos > 0 {
                pos -= 1;
                a[pos] += 1;
                if a[pos] < mults[pos] {
                    done = false;
                    break;
                }
                a[pos] = 0;
            }
            if done {
                break;
            }
        }
    }
    Ok(out)
}

/// One linear system `|O(dF + Σ a_i F_i) ⊗ L|` in the Hilbert scheme of a
/// logarithmic-transform surface.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ComponentDescriptor {
    /// Normal form of the topologically trivial twist `L`.
    pub twist: FiberDecomposition,
    pub d: i64,
    pub a: Vec<i64>,
    pub dimension: i64,
    pub empty: bool,
}

/// The Hilbert scheme of curves in a fiber-type class, split into one linear
/// system per twist `L`. A system `dF + Σ a_i F_i` (normal form) is empty iff
/// `d < 0`; otherwise it is a projective space of dimension `d`.
pub fn hilbert_components(model: &EllipticModel, m: &[i64]) -> Result<Vec<ComponentDescriptor>> {
    let base = model.vertical_normal_form(m)?;
    let mut out = Vec::new();
    for twist in model.twist_bundles()? {
        let sum: Vec<i64> = base
            .class_vector()
            .iter()
            .zip(twist.class_vector())
            .map(|(x, y)| x + y)
            .collect();
        let system = model.vertical_normal_form(&sum)?;
        out.push(ComponentDescriptor {
            twist,
            d: system.d,
            dimension: system.d.max(-1),
            empty: system.d < 0,
            a: system.a,
        });
    }
    Ok(out)
}

/// The two witness pairs for a section class with `⟨m,[F]⟩ = 1` and
/// `ν ∈ {0, 1}`; both must have `P⁺ ≠ 0`.
pub fn nagata_witnesses(g: i64) -> Result<Vec<PoincarePair>> {
    if g < 0 {
        return Err(SurfaceError::Negative {
            field: "g",
            value: g,
        }
        .into());
    }
    (0..=1)
        .map(|nu| {
            poincare_ruled(
                g as usize,
                &RuledClass {
                    fiber_pairing: 1,
                    nu,
                },
            )
        })
        .collect()
}

/// A geometrically ruled surface over a genus-`g` curve has a section with
/// `s² ≤ g`; returns `g` once the witness invariants are confirmed nonzero.
pub fn nagata_bound(g: i64) -> Result<i64> {
    for (nu, pair) in nagata_witnesses(g)?.iter().enumerate() {
        if pair.p_plus.is_zero() {
            return Err(EngineError::Invariant(format!(
                "section class with nu={nu} on genus {g} has vanishing P+"
            )));
        }
    }
    Ok(g)
}

/// Length of the scheme of minimal sections: the numeric degree of `P⁺` for
/// `⟨m,[F]⟩ = 1` and `ν = g`.
pub fn lange_count(g: i64) -> Result<BigInt> {
    if g < 0 {
        return Err(SurfaceError::Negative {
            field: "g",
            value: g,
        }
        .into());
    }
    let pair = poincare_ruled(
        g as usize,
        &RuledClass {
            fiber_pairing: 1,
            nu: g,
        },
    )?;
    Ok(pair.p_plus.numeric_degree())
}

/// Both sides of the wall-crossing identity for a class on a `p_g = 0`
/// surface.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WallCheck {
    pub direct: ExtElement,
    pub wall: ExtElement,
    pub q: usize,
    pub nu: i64,
    pub c_half: BigInt,
    pub route: &'static str,
    /// Extra route data (Albanese pairings for logarithmic transforms).
    pub detail: Value,
}

impl WallCheck {
    pub fn agree(&self) -> bool {
        self.direct == self.wall
    }
}

struct WallData {
    q: usize,
    nu: i64,
    c_half: BigInt,
    route: &'static str,
    detail: Value,
}

fn ratio_json(r: &Ratio<BigInt>) -> Value {
    json!([bigint_to_json(r.numer()), bigint_to_json(r.denom())])
}

fn wall_data(model: &SurfaceModel, class: &DivisorClass) -> Result<WallData> {
    match (model, class) {
        (SurfaceModel::Ruled { base_genus }, DivisorClass::Ruled(c)) => Ok(WallData {
            q: *base_genus as usize,
            nu: c.nu,
            c_half: BigInt::from(c.fiber_pairing + 1),
            route: "ruling: <2m-k,F>/2 = m.F + 1",
            detail: Value::Null,
        }),
        (SurfaceModel::Elliptic(m), DivisorClass::Fiber(v)) => {
            if m.log_fibers().is_some() {
                let k = m.canonical_vector();
                let two_m_minus_k: Vec<i64> = v.iter().zip(&k).map(|(x, k)| 2 * x - k).collect();
                let pairing = m.albanese_fiber_pairing(&two_m_minus_k)?;
                let half = pairing.clone() / BigInt::from(2);
                if !half.is_integer() {
                    return Err(EngineError::NonIntegralPairing(half.to_string()));
                }
                let lambda = m
                    .class_group()
                    .rational_multiple(&k, &m.fiber_vector())?
                    .ok_or(SurfaceError::NotFiberMultiple)?;
                Ok(WallData {
                    q: 1,
                    nu: 0,
                    c_half: half.to_integer(),
                    route: "albanese: <2m-k,E>/2 with E.F = [Gamma':Gamma]",
                    detail: json!({
                        "albanese_fiber_dot_fiber": bigint_to_json(&m.twist_index()?),
                        "canonical_fiber_multiple": ratio_json(&lambda),
                        "pairing_2m_minus_k": ratio_json(&pairing),
                    }),
                })
            } else if m.q() == m.base_genus() {
                Ok(WallData {
                    q: m.q() as usize,
                    nu: 0,
                    c_half: BigInt::zero(),
                    route: "fibration: fiber-type classes pair to zero with F",
                    detail: Value::Null,
                })
            } else {
                Err(EngineError::Unsupported(
                    "wall check for an elliptic model with q = g + 1 needs logarithmic-transform data"
                        .into(),
                ))
            }
        }
        (SurfaceModel::MinimalPgZeroSpecial(kind), DivisorClass::Special(c)) => Ok(WallData {
            q: if *kind == PgZeroKind::Enriques { 0 } else { 1 },
            nu: c.nu,
            c_half: BigInt::from(c.c_half.unwrap_or(0)),
            route: "supplied pairing data",
            detail: Value::Null,
        }),
        (SurfaceModel::BlowUp { base: mb, .. }, DivisorClass::BlowUp { base, .. }) => {
            let inner = wall_data(mb, base)?;
            let mmk = model.m_m_minus_k(class)?;
            Ok(WallData {
                nu: mmk / 2,
                route: "blow-up: H^1 and theta unchanged",
                ..inner
            })
        }
        _ => Err(EngineError::Unsupported(format!(
            "no wall-crossing data for a {} surface",
            model.kind_name()
        ))),
    }
}

/// Recomputes `P⁺ - P⁻` from the closed form for the model and from the
/// wall-crossing formula.
pub fn wallcheck(model: &SurfaceModel, class: &DivisorClass) -> Result<WallCheck> {
    model.check_class(class)?;
    if model.invariants().p_g != 0 {
        return Err(EngineError::Unsupported(
            "the wall-crossing identity needs p_g = 0".into(),
        ));
    }
    let pair = compute(model, class)?;
    let data = wall_data(model, class)?;
    let wall = if data.nu < 0 {
        ExtElement::zero(2 * data.q)
    } else {
        wall_crossing_fibered(data.q, data.nu, &data.c_half)?
    };
    Ok(WallCheck {
        direct: pair.difference(),
        wall,
        q: data.q,
        nu: data.nu,
        c_half: data.c_half,
        route: data.route,
        detail: data.detail,
    })
}

/// `(-1)^d binom(n, d)` as an `i64`, for tests and reports.
pub fn signed_binomial(n: i64, d: i64) -> i64 {
    (sign(is_odd(d)) * binomial(n, d))
        .to_i64()
        .expect("binomial fits in i64")
}
