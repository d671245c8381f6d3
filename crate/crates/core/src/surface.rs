//! Numerical surface descriptors and their divisor-class data.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use num_bigint::BigInt;
use num_rational::Ratio;
use serde::Serialize;
use thiserror::Error;

use crate::lattice::{
    self, check_fiber_data, ClassGroup, FiberDecomposition, LatticeError, RelationPresentation,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SurfaceError {
    #[error("{field} must be nonnegative, got {value}")]
    Negative { field: &'static str, value: i64 },
    #[error("inconsistent invariants: chi={chi}, q={q} give p_g={p_g} < 0")]
    NegativeGeometricGenus { chi: i64, q: i64, p_g: i64 },
    #[error("general type surfaces need chi >= 1 and p_g >= 1 (got chi={chi}, q={q})")]
    InvalidGeneralType { chi: i64, q: i64 },
    #[error("multiple fiber {index} has multiplicity {value}; multiple fibers need multiplicity >= 2")]
    FiberMultiplicity { index: usize, value: i64 },
    #[error("a blow-up needs at least one exceptional curve")]
    NoExceptionalCurves,
    #[error("class does not match the surface: {0}")]
    ClassMismatch(String),
    #[error("{0} has no fiber-type canonical class")]
    NoCanonicalClass(&'static str),
    #[error("m(m-k) is unknown for the symbolic class 'other'")]
    UnknownSelfPairing,
    #[error("operation needs a logarithmic-transform model")]
    NotLogTransform,
    #[error("class is not a rational multiple of [F] plus torsion")]
    NotFiberMultiple,
    #[error("{0}")]
    Unsupported(String),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

pub type Result<T, E = SurfaceError> = std::result::Result<T, E>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum PgPositiveKind {
    K3,
    Abelian,
    GeneralType { chi: i64, q: i64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum PgZeroKind {
    Enriques,
    Bielliptic,
}

/// Logarithmic transform data: multiplicity `n` and the torsion point
/// `ζ = (u + v ω)/n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct LogFiber {
    pub n: i64,
    pub u: i64,
    pub v: i64,
}

/// An elliptic fibration `V → C` with multiple fibers `m_i F_i`.
///
/// Classes are integer vectors in the generators `[F], [F_1], …, [F_r]`.
#[derive(Clone, Debug)]
pub struct EllipticModel {
    base_genus: i64,
    chi: i64,
    q: i64,
    multiplicities: Vec<i64>,
    group: ClassGroup,
    log_fibers: Option<Vec<LogFiber>>,
}

impl PartialEq for EllipticModel {
    fn eq(&self, other: &Self) -> bool {
        self.base_genus == other.base_genus
            && self.chi == other.chi
            && self.q == other.q
            && self.multiplicities == other.multiplicities
            && self.group.presentation() == other.group.presentation()
            && self.log_fibers == other.log_fibers
    }
}

impl Eq for EllipticModel {}

fn nonnegative(field: &'static str, value: i64) -> Result<()> {
    if value < 0 {
        return Err(SurfaceError::Negative { field, value });
    }
    Ok(())
}

impl EllipticModel {
    /// A fibration with the minimal presentation `m_i [F_i] = [F]` plus any
    /// caller-supplied relations.
    pub fn new(
        base_genus: i64,
        chi: i64,
        q: i64,
        multiplicities: Vec<i64>,
        extra_relations: Vec<Vec<i64>>,
    ) -> Result<Self> {
        nonnegative("base_genus", base_genus)?;
        nonnegative("chi", chi)?;
        nonnegative("q", q)?;
        let p_g = chi - 1 + q;
        if p_g < 0 {
            return Err(SurfaceError::NegativeGeometricGenus { chi, q, p_g });
        }
        for (index, &value) in multiplicities.iter().enumerate() {
            if value < 2 {
                return Err(SurfaceError::FiberMultiplicity { index, value });
            }
        }
        let presentation = RelationPresentation::fibered(&multiplicities, extra_relations)?;
        let group = ClassGroup::new(&presentation);
        if !group.has_infinite_order(&unit_vector(multiplicities.len() + 1, 0))? {
            return Err(LatticeError::DegenerateFiberClass.into());
        }
        Ok(EllipticModel {
            base_genus,
            chi,
            q,
            multiplicities,
            group,
            log_fibers: None,
        })
    }

    pub fn base_genus(&self) -> i64 {
        self.base_genus
    }

    pub fn chi(&self) -> i64 {
        self.chi
    }

    pub fn q(&self) -> i64 {
        self.q
    }

    pub fn p_g(&self) -> i64 {
        self.chi - 1 + self.q
    }

    pub fn multiplicities(&self) -> &[i64] {
        &self.multiplicities
    }

    pub fn presentation(&self) -> &RelationPresentation {
        self.group.presentation()
    }

    pub fn class_group(&self) -> &ClassGroup {
        &self.group
    }

    pub fn log_fibers(&self) -> Option<&[LogFiber]> {
        self.log_fibers.as_deref()
    }

    pub fn n_generators(&self) -> usize {
        self.multiplicities.len() + 1
    }

    /// `2g - 2 + χ`: degree of the canonical divisor's base part.
    pub fn canonical_degree(&self) -> i64 {
        2 * self.base_genus - 2 + self.chi
    }

    /// `K = (2g-2+χ)[F] + Σ (m_i - 1)[F_i]`.
    pub fn canonical_vector(&self) -> Vec<i64> {
        let mut k = Vec::with_capacity(self.n_generators());
        k.push(self.canonical_degree());
        k.extend(self.multiplicities.iter().map(|m| m - 1));
        k
    }

    pub fn fiber_vector(&self) -> Vec<i64> {
        unit_vector(self.n_generators(), 0)
    }

    pub fn check_vector(&self, c: &[i64]) -> Result<()> {
        if c.len() != self.n_generators() {
            return Err(SurfaceError::ClassMismatch(format!(
                "fiber class needs {} coefficients ([F], [F_1..F_{}]), got {}",
                self.n_generators(),
                self.multiplicities.len(),
                c.len()
            )));
        }
        Ok(())
    }

    pub fn decompositions(&self, c: &[i64]) -> Result<Vec<FiberDecomposition>> {
        self.check_vector(c)?;
        Ok(self.group.decompositions(&self.multiplicities, c)?)
    }

    /// `⟨c, [F_alb]⟩`, the pairing of `c` with a fiber of the Albanese map:
    /// writing `c = λ[F] + torsion`, this is `λ · [Γ' : Γ]`.
    pub fn albanese_fiber_pairing(&self, c: &[i64]) -> Result<Ratio<BigInt>> {
        let fibers = self.log_fibers.as_ref().ok_or(SurfaceError::NotLogTransform)?;
        self.check_vector(c)?;
        let lambda = self
            .group
            .rational_multiple(c, &self.fiber_vector())?
            .ok_or(SurfaceError::NotFiberMultiple)?;
        Ok(lambda * self.twist_index_of(fibers)?)
    }

    fn twist_index_of(&self, fibers: &[LogFiber]) -> Result<BigInt> {
        let (n, u, v) = split_fibers(fibers);
        Ok(lattice::twist_index(&n, &u, &v)?)
    }

    /// `[Γ' : Γ]` for a logarithmic-transform model.
    pub fn twist_index(&self) -> Result<BigInt> {
        let fibers = self.log_fibers.as_ref().ok_or(SurfaceError::NotLogTransform)?;
        self.twist_index_of(fibers)
    }

    /// Reduces a generator vector to the normal form `(d, a)` with
    /// `0 ≤ a_i < m_i` in the group `⟨F, F_i | m_i F_i = F⟩` of
    /// fiber-supported divisors up to linear equivalence. `d` may be negative.
    pub fn vertical_normal_form(&self, c: &[i64]) -> Result<FiberDecomposition> {
        self.check_vector(c)?;
        let mut d = c[0];
        let a = self
            .multiplicities
            .iter()
            .zip(&c[1..])
            .map(|(m, x)| {
                d += x.div_euclid(*m);
                x.rem_euclid(*m)
            })
            .collect();
        Ok(FiberDecomposition { d, a })
    }

    /// Normal forms of the topologically trivial fiber-supported bundles
    /// generated by `O(Σ u_i F_i)` and `O(Σ v_i F_i)`, in ascending order.
    pub fn twist_bundles(&self) -> Result<Vec<FiberDecomposition>> {
        let fibers = self.log_fibers.as_ref().ok_or(SurfaceError::NotLogTransform)?;
        let mut gens = Vec::new();
        for pick in [|f: &LogFiber| f.u, |f: &LogFiber| f.v] {
            let mut vec = vec![0i64];
            vec.extend(fibers.iter().map(pick));
            gens.push(self.vertical_normal_form(&vec)?);
        }
        let zero = FiberDecomposition {
            d: 0,
            a: vec![0; self.multiplicities.len()],
        };
        let mut seen = BTreeSet::from([zero.clone()]);
        let mut queue = VecDeque::from([zero]);
        while let Some(x) = queue.pop_front() {
            for g in &gens {
                let sum: Vec<i64> = x
                    .class_vector()
                    .iter()
                    .zip(g.class_vector())
                    .map(|(a, b)| a + b)
                    .collect();
                let next = self.vertical_normal_form(&sum)?;
                if seen.insert(next.clone()) {
                    queue.push_back(next);
                }
            }
        }
        Ok(seen.into_iter().collect())
    }
}

fn unit_vector(n: usize, i: usize) -> Vec<i64> {
    let mut v = vec![0i64; n];
    v[i] = 1;
    v
}

fn split_fibers(fibers: &[LogFiber]) -> (Vec<i64>, Vec<i64>, Vec<i64>) {
    (
        fibers.iter().map(|f| f.n).collect(),
        fibers.iter().map(|f| f.u).collect(),
        fibers.iter().map(|f| f.v).collect(),
    )
}

/// Builds the elliptic model of the surface obtained from `ℙ¹ × E` by
/// logarithmic transforms with the given data. The presentation has rows
/// `n_i [F_i] - [F]`, `Σ u_i [F_i]` and `Σ v_i [F_i]`.
pub fn build_log_transform(fibers: &[LogFiber]) -> Result<SurfaceModel> {
    for (index, f) in fibers.iter().enumerate() {
        if f.n < 2 {
            return Err(SurfaceError::FiberMultiplicity { index, value: f.n });
        }
    }
    let (n, u, v) = split_fibers(fibers);
    check_fiber_data(&n, &u, &v)?;
    let mut u_row = vec![0i64];
    u_row.extend(&u);
    let mut v_row = vec![0i64];
    v_row.extend(&v);
    let mut model = EllipticModel::new(0, 0, 1, n, vec![u_row, v_row])?;
    model.log_fibers = Some(fibers.to_vec());
    Ok(SurfaceModel::Elliptic(model))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SurfaceModel {
    Ruled { base_genus: i64 },
    Elliptic(EllipticModel),
    BlowUp {
        base: Box<SurfaceModel>,
        exceptional_count: usize,
    },
    MinimalPgPositive(PgPositiveKind),
    MinimalPgZeroSpecial(PgZeroKind),
}

/// `(χ(O_V), q, p_g)` with `χ = 1 - q + p_g`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SurfaceInvariants {
    pub chi: i64,
    pub q: i64,
    pub p_g: i64,
    /// `⟨k, [F]⟩` for fibered models.
    pub canonical_fiber_degree: Option<i64>,
}

impl SurfaceModel {
    pub fn ruled(base_genus: i64) -> Result<Self> {
        nonnegative("base_genus", base_genus)?;
        Ok(SurfaceModel::Ruled { base_genus })
    }

    pub fn elliptic(model: EllipticModel) -> Self {
        SurfaceModel::Elliptic(model)
    }

    pub fn blow_up(base: SurfaceModel, exceptional_count: usize) -> Result<Self> {
        if exceptional_count == 0 {
            return Err(SurfaceError::NoExceptionalCurves);
        }
        Ok(SurfaceModel::BlowUp {
            base: Box::new(base),
            exceptional_count,
        })
    }

    pub fn k3() -> Self {
        SurfaceModel::MinimalPgPositive(PgPositiveKind::K3)
    }

    pub fn abelian() -> Self {
        SurfaceModel::MinimalPgPositive(PgPositiveKind::Abelian)
    }

    pub fn general_type(chi: i64, q: i64) -> Result<Self> {
        nonnegative("q", q)?;
        if chi < 1 || chi - 1 + q < 1 {
            return Err(SurfaceError::InvalidGeneralType { chi, q });
        }
        Ok(SurfaceModel::MinimalPgPositive(PgPositiveKind::GeneralType {
            chi,
            q,
        }))
    }

    pub fn enriques() -> Self {
        SurfaceModel::MinimalPgZeroSpecial(PgZeroKind::Enriques)
    }

    pub fn bielliptic() -> Self {
        SurfaceModel::MinimalPgZeroSpecial(PgZeroKind::Bielliptic)
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            SurfaceModel::Ruled { .. } => "ruled",
            SurfaceModel::Elliptic(m) if m.log_fibers.is_some() => "log_transform_elliptic",
            SurfaceModel::Elliptic(_) => "elliptic",
            SurfaceModel::BlowUp { .. } => "blow_up",
            SurfaceModel::MinimalPgPositive(_) => "minimal_pg_positive",
            SurfaceModel::MinimalPgZeroSpecial(_) => "minimal_pg_zero_special",
        }
    }

    /// The underlying minimal model (strips blow-ups).
    pub fn minimal_model(&self) -> &SurfaceModel {
        match self {
            SurfaceModel::BlowUp { base, .. } => base.minimal_model(),
            other => other,
        }
    }

    pub fn invariants(&self) -> SurfaceInvariants {
        let (chi, q, p_g, kf) = match self {
            SurfaceModel::Ruled { base_genus } => (1 - base_genus, *base_genus, 0, Some(-2)),
            SurfaceModel::Elliptic(m) => (m.chi, m.q, m.p_g(), Some(0)),
            SurfaceModel::BlowUp { base, .. } => {
                let inv = base.invariants();
                (inv.chi, inv.q, inv.p_g, inv.canonical_fiber_degree)
            }
            SurfaceModel::MinimalPgPositive(kind) => match *kind {
                PgPositiveKind::K3 => (2, 0, 1, None),
                PgPositiveKind::Abelian => (0, 2, 1, None),
                PgPositiveKind::GeneralType { chi, q } => (chi, q, chi - 1 + q, None),
            },
            SurfaceModel::MinimalPgZeroSpecial(kind) => match kind {
                PgZeroKind::Enriques => (1, 0, 0, None),
                PgZeroKind::Bielliptic => (0, 1, 0, None),
            },
        };
        SurfaceInvariants {
            chi,
            q,
            p_g,
            canonical_fiber_degree: kf,
        }
    }

    /// Rank `2q` of the exterior algebra housing the invariants.
    pub fn ext_rank(&self) -> usize {
        2 * self.invariants().q as usize
    }

    pub fn canonical_class(&self) -> Result<DivisorClass> {
        match self {
            SurfaceModel::Elliptic(m) => Ok(DivisorClass::Fiber(m.canonical_vector())),
            SurfaceModel::MinimalPgPositive(_) => Ok(DivisorClass::Symbolic(SymbolicClass::Canonical)),
            SurfaceModel::BlowUp {
                base,
                exceptional_count,
            } => Ok(DivisorClass::BlowUp {
                base: Box::new(base.canonical_class()?),
                l: vec![1; *exceptional_count],
            }),
            SurfaceModel::Ruled { .. } => Err(SurfaceError::NoCanonicalClass("a ruled surface")),
            SurfaceModel::MinimalPgZeroSpecial(_) => {
                Err(SurfaceError::NoCanonicalClass("an Enriques or bielliptic surface"))
            }
        }
    }

    /// The class `m = 0`.
    pub fn zero_class(&self) -> Result<DivisorClass> {
        match self {
            SurfaceModel::Ruled { .. } => Ok(DivisorClass::Ruled(RuledClass {
                fiber_pairing: 0,
                nu: 0,
            })),
            SurfaceModel::Elliptic(m) => Ok(DivisorClass::Fiber(vec![0; m.n_generators()])),
            SurfaceModel::BlowUp {
                base,
                exceptional_count,
            } => Ok(DivisorClass::BlowUp {
                base: Box::new(base.zero_class()?),
                l: vec![0; *exceptional_count],
            }),
            SurfaceModel::MinimalPgPositive(_) => Ok(DivisorClass::Symbolic(SymbolicClass::Zero)),
            SurfaceModel::MinimalPgZeroSpecial(PgZeroKind::Enriques) => {
                Ok(DivisorClass::Special(SpecialClass {
                    nu: 0,
                    hilb_nonempty: true,
                    c_half: None,
                }))
            }
            SurfaceModel::MinimalPgZeroSpecial(PgZeroKind::Bielliptic) => Err(SurfaceError::Unsupported(
                "the zero class of a bielliptic surface needs explicit wall-crossing data".into(),
            )),
        }
    }

    /// The class `k - m`.
    pub fn complement(&self, class: &DivisorClass) -> Result<DivisorClass> {
        self.check_class(class)?;
        match (self, class) {
            (SurfaceModel::Ruled { .. }, DivisorClass::Ruled(c)) => Ok(DivisorClass::Ruled(RuledClass {
                fiber_pairing: -2 - c.fiber_pairing,
                nu: c.nu,
            })),
            (SurfaceModel::Elliptic(m), DivisorClass::Fiber(v)) => Ok(DivisorClass::Fiber(
                m.canonical_vector().iter().zip(v).map(|(k, x)| k - x).collect(),
            )),
            (SurfaceModel::BlowUp { base, .. }, DivisorClass::BlowUp { base: bc, l }) => {
                Ok(DivisorClass::BlowUp {
                    base: Box::new(base.complement(bc)?),
                    l: l.iter().map(|x| 1 - x).collect(),
                })
            }
            (SurfaceModel::MinimalPgPositive(_), DivisorClass::Symbolic(s)) => {
                Ok(DivisorClass::Symbolic(match s {
                    SymbolicClass::Zero => SymbolicClass::Canonical,
                    SymbolicClass::Canonical => SymbolicClass::Zero,
                    SymbolicClass::Other => SymbolicClass::Other,
                }))
            }
            (SurfaceModel::MinimalPgZeroSpecial(PgZeroKind::Enriques), DivisorClass::Special(c))
                if c.nu >= 0 =>
            {
                // exactly one of Hilb^m, Hilb^{k-m} is nonempty here
                Ok(DivisorClass::Special(SpecialClass {
                    nu: c.nu,
                    hilb_nonempty: !c.hilb_nonempty,
                    c_half: c.c_half.map(|x| -x),
                }))
            }
            _ => Err(SurfaceError::Unsupported(format!(
                "k - m is not determined by the data of a {} class",
                self.kind_name()
            ))),
        }
    }

    /// Checks that a class descriptor matches this surface variant.
    pub fn check_class(&self, class: &DivisorClass) -> Result<()> {
        match (self, class) {
            (SurfaceModel::Ruled { .. }, DivisorClass::Ruled(_)) => Ok(()),
            (SurfaceModel::Elliptic(m), DivisorClass::Fiber(v)) => m.check_vector(v),
            (
                SurfaceModel::BlowUp {
                    base,
                    exceptional_count,
                },
                DivisorClass::BlowUp { base: bc, l },
            ) => {
                if l.len() != *exceptional_count {
                    return Err(SurfaceError::ClassMismatch(format!(
                        "blow-up class needs {exceptional_count} exceptional coefficients, got {}",
                        l.len()
                    )));
                }
                base.check_class(bc)
            }
            (SurfaceModel::MinimalPgPositive(_), DivisorClass::Symbolic(_)) => Ok(()),
            (SurfaceModel::MinimalPgZeroSpecial(kind), DivisorClass::Special(c)) => {
                if *kind == PgZeroKind::Bielliptic && c.c_half.is_none() {
                    return Err(SurfaceError::ClassMismatch(
                        "bielliptic classes need c_half = <2m-k, F>/2".into(),
                    ));
                }
                Ok(())
            }
            _ => Err(SurfaceError::ClassMismatch(format!(
                "{} class given for a {} surface",
                class.kind_name(),
                self.kind_name()
            ))),
        }
    }

    /// `m(m - k)` for a class on this surface.
    pub fn m_m_minus_k(&self, class: &DivisorClass) -> Result<i64> {
        self.check_class(class)?;
        match class {
            DivisorClass::Ruled(c) => Ok(2 * c.nu),
            DivisorClass::Fiber(_) => Ok(0),
            DivisorClass::BlowUp { base, l } => {
                let SurfaceModel::BlowUp { base: model, .. } = self else {
                    unreachable!("checked above");
                };
                // (σ*m + l e)(σ*m + l e - σ*k - e) = m(m-k) - l(l-1)
                Ok(model.m_m_minus_k(base)? - l.iter().map(|x| x * (x - 1)).sum::<i64>())
            }
            DivisorClass::Symbolic(SymbolicClass::Zero | SymbolicClass::Canonical) => Ok(0),
            DivisorClass::Symbolic(SymbolicClass::Other) => Err(SurfaceError::UnknownSelfPairing),
            DivisorClass::Special(c) => Ok(2 * c.nu),
        }
    }
}

/// A ruled-surface class, stored as `⟨m, [F]⟩` and `ν = m(m-k)/2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct RuledClass {
    pub fiber_pairing: i64,
    pub nu: i64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum SymbolicClass {
    Zero,
    Canonical,
    Other,
}

/// A class on an Enriques or bielliptic surface. Emptiness of `Hilb^m` is
/// geometric input; `c_half = ⟨2m - k, [F]⟩/2` is needed when `q = 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SpecialClass {
    pub nu: i64,
    pub hilb_nonempty: bool,
    pub c_half: Option<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DivisorClass {
    Ruled(RuledClass),
    Fiber(Vec<i64>),
    BlowUp { base: Box<DivisorClass>, l: Vec<i64> },
    Symbolic(SymbolicClass),
    Special(SpecialClass),
}

impl DivisorClass {
    pub fn kind_name(&self) -> &'static str {
        match self {
            DivisorClass::Ruled(_) => "ruled",
            DivisorClass::Fiber(_) => "fiber",
            DivisorClass::BlowUp { .. } => "blow_up",
            DivisorClass::Symbolic(_) => "symbolic",
            DivisorClass::Special(_) => "special",
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        use serde_json::json;
        match self {
            DivisorClass::Ruled(c) => json!({"fiber_pairing": c.fiber_pairing, "nu": c.nu}),
            DivisorClass::Fiber(v) => json!(v),
            DivisorClass::BlowUp { base, l } => json!({"base": base.to_json(), "l": l}),
            DivisorClass::Symbolic(s) => json!(match s {
                SymbolicClass::Zero => "zero",
                SymbolicClass::Canonical => "canonical",
                SymbolicClass::Other => "other",
            }),
            DivisorClass::Special(c) => {
                let mut obj = json!({"nu": c.nu, "hilb_nonempty": c.hilb_nonempty});
                if let Some(ch) = c.c_half {
                    obj["c_half"] = json!(ch);
                }
                obj
            }
        }
    }
}

impl fmt::Display for DivisorClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DivisorClass::Ruled(c) => write!(f, "m.F={}, nu={}", c.fiber_pairing, c.nu),
            DivisorClass::Fiber(v) => {
                let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
                write!(f, "[{}]", parts.join(", "))
            }
            DivisorClass::BlowUp { base, l } => {
                let parts: Vec<String> = l.iter().map(|x| x.to_string()).collect();
                write!(f, "{base}; l=[{}]", parts.join(", "))
            }
            DivisorClass::Symbolic(s) => write!(f, "{s:?}"),
            DivisorClass::Special(c) => write!(
                f,
                "nu={}, hilb_nonempty={}{}",
                c.nu,
                c.hilb_nonempty,
                c.c_half.map(|x| format!(", c_half={x}")).unwrap_or_default()
            ),
        }
    }
}
