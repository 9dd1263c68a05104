//! Exact models of the dual group Γ.
//!
//! Two families are supported: finitely generated discrete groups
//! `Z^d × Z/m_1 × … × Z/m_r`, and the real line presented as the Q-span of a
//! declared Q-linearly independent basis of reals, each basis value known
//! only through a rational enclosure.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::scalar::{parse_rational, render_rational};

const MODULE: &str = "gamma_core";

/// Default number of bisection rounds used by [`GroupDescriptor::compare_real`].
pub const DEFAULT_PRECISION_DEPTH: u32 = 64;

/// One declared real basis value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasisElement {
    pub name: String,
    pub lo: BigRational,
    pub hi: BigRational,
    /// Optional defining polynomial (coefficients, constant term first) with
    /// a sign change on `[lo, hi]`; enables refinement by bisection.
    pub poly: Option<Vec<BigRational>>,
}

impl BasisElement {
    pub fn exact(name: &str, value: BigRational) -> Self {
        BasisElement { name: name.to_string(), lo: value.clone(), hi: value, poly: None }
    }

    pub fn enclosed(name: &str, lo: BigRational, hi: BigRational) -> Self {
        BasisElement { name: name.to_string(), lo, hi, poly: None }
    }

    pub fn with_poly(mut self, poly: Vec<BigRational>) -> Self {
        self.poly = Some(poly);
        self
    }
}

/// Q-linearly independent reals spanning the modelled copy of R.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RealBasis {
    elements: Vec<BasisElement>,
    depth: u32,
    /// `refinements[j][k]` is the enclosure of basis value `j` after `k` bisections.
    refinements: Vec<Vec<(BigRational, BigRational)>>,
}

fn eval_poly(poly: &[BigRational], x: &BigRational) -> BigRational {
    poly.iter().rev().fold(BigRational::zero(), |acc, c| acc * x + c)
}

impl RealBasis {
    pub fn new(elements: Vec<BasisElement>, depth: u32) -> Result<Self> {
        if elements.is_empty() {
            return Err(Error::argument(MODULE, "real_line basis must be nonempty"));
        }
        for (j, e) in elements.iter().enumerate() {
            if e.lo > e.hi {
                return Err(Error::argument(MODULE, format!("basis {:?}: empty enclosure", e.name)));
            }
            if elements[..j].iter().any(|o| o.name == e.name) {
                return Err(Error::argument(MODULE, format!("duplicate basis name {:?}", e.name)));
            }
            if let Some(p) = &e.poly {
                let (a, b) = (eval_poly(p, &e.lo), eval_poly(p, &e.hi));
                if (a.is_positive() && b.is_positive()) || (a.is_negative() && b.is_negative()) {
                    return Err(Error::argument(
                        MODULE,
                        format!("basis {:?}: polynomial has no sign change on its enclosure", e.name),
                    ));
                }
            }
        }
        let refinements = elements.iter().map(|e| Self::refine(e, depth)).collect();
        Ok(RealBasis { elements, depth, refinements })
    }

    fn refine(e: &BasisElement, depth: u32) -> Vec<(BigRational, BigRational)> {
        let mut out = vec![(e.lo.clone(), e.hi.clone())];
        let Some(p) = &e.poly else { return out };
        let (mut lo, mut hi) = (e.lo.clone(), e.hi.clone());
        if eval_poly(p, &lo).is_zero() {
            return vec![(lo.clone(), lo)];
        }
        if eval_poly(p, &hi).is_zero() {
            return vec![(hi.clone(), hi)];
        }
        let lo_sign = eval_poly(p, &lo).is_positive();
        let two = BigRational::from_integer(2.into());
        for _ in 0..depth {
            if lo == hi {
                break;
            }
            let mid = (&lo + &hi) / &two;
            let v = eval_poly(p, &mid);
            if v.is_zero() {
                lo = mid.clone();
                hi = mid;
            } else if v.is_positive() == lo_sign {
                lo = mid;
            } else {
                hi = mid;
            }
            out.push((lo.clone(), hi.clone()));
        }
        out
    }

    pub fn elements(&self) -> &[BasisElement] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.elements.iter().position(|e| e.name == name)
    }

    fn enclosure(&self, j: usize, level: usize) -> &(BigRational, BigRational) {
        let r = &self.refinements[j];
        &r[level.min(r.len() - 1)]
    }

    /// Sign of a nonzero Q-combination of the basis, by interval refinement.
    fn sign(&self, coords: &[BigRational]) -> Result<Ordering> {
        if coords.iter().all(Zero::is_zero) {
            return Ok(Ordering::Equal);
        }
        let max_level = self.refinements.iter().map(Vec::len).max().unwrap_or(1) - 1;
        for level in 0..=max_level {
            let mut lo = BigRational::zero();
            let mut hi = BigRational::zero();
            for (j, c) in coords.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let (a, b) = self.enclosure(j, level);
                if c.is_positive() {
                    lo += c * a;
                    hi += c * b;
                } else {
                    lo += c * b;
                    hi += c * a;
                }
            }
            if lo.is_positive() {
                return Ok(Ordering::Greater);
            }
            if hi.is_negative() {
                return Ok(Ordering::Less);
            }
        }
        Err(Error::precision(
            MODULE,
            format!(
                "cannot separate {} from 0 after {} refinement rounds",
                render_combination(self, coords),
                self.depth
            ),
        ))
    }

    /// Rational interval enclosing a combination at the finest refinement level.
    pub fn enclose(&self, coords: &[BigRational]) -> (BigRational, BigRational) {
        let level = usize::MAX;
        let mut lo = BigRational::zero();
        let mut hi = BigRational::zero();
        for (j, c) in coords.iter().enumerate() {
            let (a, b) = self.enclosure(j, level);
            if c.is_negative() {
                lo += c * b;
                hi += c * a;
            } else {
                lo += c * a;
                hi += c * b;
            }
        }
        (lo, hi)
    }
}

/// The dual group Γ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GroupDescriptor {
    Discrete { free_rank: usize, torsion: Vec<i64> },
    RealLine(RealBasis),
}

/// An element of Γ in exact coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GroupElement {
    Discrete { free: Vec<i64>, torsion: Vec<i64> },
    Real(Vec<BigRational>),
}

impl GroupElement {
    pub fn integer(v: i64) -> Self {
        GroupElement::Discrete { free: vec![v], torsion: vec![] }
    }

    pub fn free(coords: &[i64]) -> Self {
        GroupElement::Discrete { free: coords.to_vec(), torsion: vec![] }
    }

    pub fn real(coords: Vec<BigRational>) -> Self {
        GroupElement::Real(coords)
    }

    pub fn real_ints(coords: &[i64]) -> Self {
        GroupElement::Real(coords.iter().map(|&c| BigRational::from_integer(c.into())).collect())
    }
}

impl GroupDescriptor {
    pub fn integers() -> Self {
        GroupDescriptor::Discrete { free_rank: 1, torsion: vec![] }
    }

    pub fn lattice(free_rank: usize) -> Self {
        GroupDescriptor::Discrete { free_rank, torsion: vec![] }
    }

    pub fn discrete(free_rank: usize, torsion: Vec<i64>) -> Result<Self> {
        if let Some(m) = torsion.iter().find(|&&m| m < 2) {
            return Err(Error::argument(MODULE, format!("torsion modulus {m} must be at least 2")));
        }
        Ok(GroupDescriptor::Discrete { free_rank, torsion })
    }

    pub fn cyclic(m: i64) -> Result<Self> {
        Self::discrete(0, vec![m])
    }

    pub fn real_line(basis: RealBasis) -> Self {
        GroupDescriptor::RealLine(basis)
    }

    /// The real line with basis `1, √2`, enclosure `[1.414213, 1.414214]`
    /// refined through `x² − 2`.
    pub fn real_sqrt2() -> Self {
        let r = |n: i64, d: i64| BigRational::new(n.into(), d.into());
        let basis = RealBasis::new(
            vec![
                BasisElement::exact("1", BigRational::one()),
                BasisElement::enclosed("sqrt2", r(1_414_213, 1_000_000), r(1_414_214, 1_000_000))
                    .with_poly(vec![r(-2, 1), r(0, 1), r(1, 1)]),
            ],
            DEFAULT_PRECISION_DEPTH,
        )
        .expect("valid basis");
        GroupDescriptor::RealLine(basis)
    }

    pub fn is_discrete(&self) -> bool {
        matches!(self, GroupDescriptor::Discrete { .. })
    }

    pub fn is_real(&self) -> bool {
        matches!(self, GroupDescriptor::RealLine(_))
    }

    /// Finite discrete group (free rank zero).
    pub fn is_finite(&self) -> bool {
        matches!(self, GroupDescriptor::Discrete { free_rank: 0, .. })
    }

    /// Order of a finite group.
    pub fn order(&self) -> Option<u64> {
        match self {
            GroupDescriptor::Discrete { free_rank: 0, torsion } => {
                torsion.iter().try_fold(1u64, |acc, &m| acc.checked_mul(m as u64))
            }
            _ => None,
        }
    }

    pub fn torsion(&self) -> &[i64] {
        match self {
            GroupDescriptor::Discrete { torsion, .. } => torsion,
            GroupDescriptor::RealLine(_) => &[],
        }
    }

    pub fn free_rank(&self) -> usize {
        match self {
            GroupDescriptor::Discrete { free_rank, .. } => *free_rank,
            GroupDescriptor::RealLine(b) => b.len(),
        }
    }

    pub fn basis(&self) -> Option<&RealBasis> {
        match self {
            GroupDescriptor::RealLine(b) => Some(b),
            _ => None,
        }
    }

    /// Replace the refinement depth of a real basis; discrete groups are unchanged.
    pub fn with_precision_depth(&self, depth: u32) -> Result<Self> {
        match self {
            GroupDescriptor::RealLine(b) => {
                Ok(GroupDescriptor::RealLine(RealBasis::new(b.elements.clone(), depth)?))
            }
            other => Ok(other.clone()),
        }
    }

    pub fn zero(&self) -> GroupElement {
        match self {
            GroupDescriptor::Discrete { free_rank, torsion } => GroupElement::Discrete {
                free: vec![0; *free_rank],
                torsion: vec![0; torsion.len()],
            },
            GroupDescriptor::RealLine(b) => GroupElement::Real(vec![BigRational::zero(); b.len()]),
        }
    }

    pub fn is_zero(&self, g: &GroupElement) -> bool {
        match g {
            GroupElement::Discrete { free, torsion } => {
                free.iter().all(|&x| x == 0) && torsion.iter().all(|&x| x == 0)
            }
            GroupElement::Real(c) => c.iter().all(Zero::is_zero),
        }
    }

    /// Check that `g` has the shape of this group with reduced residues.
    pub fn validate(&self, g: &GroupElement) -> Result<()> {
        match (self, g) {
            (GroupDescriptor::Discrete { free_rank, torsion: mods }, GroupElement::Discrete { free, torsion }) => {
                if free.len() != *free_rank || torsion.len() != mods.len() {
                    return Err(Error::argument(MODULE, format!("element {g:?} does not match group arity")));
                }
                if torsion.iter().zip(mods).any(|(&r, &m)| r < 0 || r >= m) {
                    return Err(Error::argument(MODULE, format!("unreduced torsion residue in {g:?}")));
                }
                Ok(())
            }
            (GroupDescriptor::RealLine(b), GroupElement::Real(c)) if c.len() == b.len() => Ok(()),
            _ => Err(Error::argument(MODULE, format!("element {g:?} does not belong to the group"))),
        }
    }

    pub fn add(&self, g: &GroupElement, h: &GroupElement) -> GroupElement {
        match (g, h) {
            (GroupElement::Discrete { free: f1, torsion: t1 }, GroupElement::Discrete { free: f2, torsion: t2 }) => {
                GroupElement::Discrete {
                    free: f1.iter().zip(f2).map(|(a, b)| a + b).collect(),
                    torsion: t1
                        .iter()
                        .zip(t2)
                        .zip(self.torsion())
                        .map(|((a, b), m)| (a + b).rem_euclid(*m))
                        .collect(),
                }
            }
            (GroupElement::Real(a), GroupElement::Real(b)) => {
                GroupElement::Real(a.iter().zip(b).map(|(x, y)| x + y).collect())
            }
            _ => panic!("mixed group element kinds"),
        }
    }

    pub fn neg(&self, g: &GroupElement) -> GroupElement {
        self.scale(g, -1)
    }

    pub fn sub(&self, g: &GroupElement, h: &GroupElement) -> GroupElement {
        self.add(g, &self.neg(h))
    }

    /// `k · g` for an integer `k`.
    pub fn scale(&self, g: &GroupElement, k: i64) -> GroupElement {
        match g {
            GroupElement::Discrete { free, torsion } => GroupElement::Discrete {
                free: free.iter().map(|a| a * k).collect(),
                torsion: torsion
                    .iter()
                    .zip(self.torsion())
                    .map(|(a, m)| (a * k).rem_euclid(*m))
                    .collect(),
            },
            GroupElement::Real(c) => {
                let k = BigRational::from_integer(k.into());
                GroupElement::Real(c.iter().map(|x| x * &k).collect())
            }
        }
    }

    /// Reduce raw integer coordinates (free ++ torsion) into an element.
    pub fn discrete_from_raw(&self, raw: &[i64]) -> Result<GroupElement> {
        match self {
            GroupDescriptor::Discrete { free_rank, torsion } => {
                if raw.len() != free_rank + torsion.len() {
                    return Err(Error::argument(
                        MODULE,
                        format!("expected {} coordinates, got {}", free_rank + torsion.len(), raw.len()),
                    ));
                }
                Ok(GroupElement::Discrete {
                    free: raw[..*free_rank].to_vec(),
                    torsion: raw[*free_rank..].iter().zip(torsion).map(|(a, m)| a.rem_euclid(*m)).collect(),
                })
            }
            GroupDescriptor::RealLine(_) => Err(Error::argument(MODULE, "integer coordinates need a discrete group")),
        }
    }

    /// Order on the real line: `Equal` exactly when coordinates coincide,
    /// otherwise the sign of `g − h` decided by interval refinement.
    pub fn compare_real(&self, g: &GroupElement, h: &GroupElement) -> Result<Ordering> {
        match (self, g, h) {
            (GroupDescriptor::RealLine(b), GroupElement::Real(x), GroupElement::Real(y)) => {
                if x.len() != b.len() || y.len() != b.len() {
                    return Err(Error::argument(MODULE, "element arity does not match real basis"));
                }
                let d: Vec<BigRational> = x.iter().zip(y).map(|(a, c)| a - c).collect();
                b.sign(&d)
            }
            _ => Err(Error::argument(MODULE, "compare_real needs two elements of a real_line group")),
        }
    }

    /// Sign of a real element relative to zero.
    pub fn sign_real(&self, g: &GroupElement) -> Result<Ordering> {
        self.compare_real(g, &self.zero())
    }

    /// All elements of a finite group, in lexicographic residue order.
    pub fn finite_elements(&self, cap: usize) -> Result<Vec<GroupElement>> {
        let order = self
            .order()
            .ok_or_else(|| Error::feature(MODULE, "element listing needs a finite group"))?;
        if order as usize > cap {
            return Err(Error::resource(MODULE, format!("group order {order} exceeds cap {cap}")));
        }
        let mods = self.torsion();
        let mut out = vec![];
        let mut cur = vec![0i64; mods.len()];
        loop {
            out.push(GroupElement::Discrete { free: vec![], torsion: cur.clone() });
            let mut k = mods.len();
            loop {
                if k == 0 {
                    return Ok(out);
                }
                k -= 1;
                cur[k] += 1;
                if cur[k] < mods[k] {
                    break;
                }
                cur[k] = 0;
            }
        }
    }

    // ---- serialization -------------------------------------------------

    pub fn to_json(&self) -> Value {
        match self {
            GroupDescriptor::Discrete { free_rank, torsion } => {
                json!({"kind": "discrete", "free_rank": free_rank, "torsion": torsion})
            }
            GroupDescriptor::RealLine(b) => {
                let basis: Vec<Value> = b
                    .elements
                    .iter()
                    .map(|e| {
                        let mut v = json!({
                            "name": e.name,
                            "lo": render_rational(&e.lo),
                            "hi": render_rational(&e.hi),
                        });
                        if let Some(p) = &e.poly {
                            v["poly"] = Value::Array(p.iter().map(|c| Value::String(render_rational(c))).collect());
                        }
                        v
                    })
                    .collect();
                json!({"kind": "real_line", "basis": basis})
            }
        }
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let bad = |m: &str| Error::argument(MODULE, format!("group descriptor: {m}"));
        match v.get("kind").and_then(Value::as_str) {
            Some("discrete") => {
                let free_rank = v.get("free_rank").map_or(Some(0), Value::as_u64).ok_or_else(|| bad("free_rank"))?;
                let torsion = match v.get("torsion") {
                    None => vec![],
                    Some(t) => t
                        .as_array()
                        .ok_or_else(|| bad("torsion must be an array"))?
                        .iter()
                        .map(|m| m.as_i64().ok_or_else(|| bad("torsion modulus")))
                        .collect::<Result<_>>()?,
                };
                Self::discrete(free_rank as usize, torsion)
            }
            Some("real_line") => {
                let basis = v
                    .get("basis")
                    .and_then(Value::as_array)
                    .ok_or_else(|| bad("real_line needs a basis array"))?;
                let mut elements = vec![];
                for e in basis {
                    let name = e.get("name").and_then(Value::as_str).ok_or_else(|| bad("basis name"))?;
                    let lo = rational_from_json(e.get("lo").ok_or_else(|| bad("basis lo"))?)?;
                    let hi = rational_from_json(e.get("hi").ok_or_else(|| bad("basis hi"))?)?;
                    let mut el = BasisElement::enclosed(name, lo, hi);
                    if let Some(p) = e.get("poly") {
                        let coeffs = p
                            .as_array()
                            .ok_or_else(|| bad("poly must be an array"))?
                            .iter()
                            .map(rational_from_json)
                            .collect::<Result<_>>()?;
                        el = el.with_poly(coeffs);
                    }
                    elements.push(el);
                }
                let depth = v
                    .get("precision_depth")
                    .and_then(Value::as_u64)
                    .map_or(DEFAULT_PRECISION_DEPTH, |d| d as u32);
                Ok(GroupDescriptor::RealLine(RealBasis::new(elements, depth)?))
            }
            _ => Err(bad("kind must be \"discrete\" or \"real_line\"")),
        }
    }

    pub fn element_to_json(&self, g: &GroupElement) -> Value {
        match g {
            GroupElement::Discrete { free, torsion } => {
                Value::Array(free.iter().chain(torsion).map(|&x| json!(x)).collect())
            }
            GroupElement::Real(c) => Value::Array(c.iter().map(|x| Value::String(render_rational(x))).collect()),
        }
    }

    /// Integer array (discrete) or rational-string array (real line); a bare
    /// scalar is accepted when the group has a single coordinate.
    pub fn element_from_json(&self, v: &Value) -> Result<GroupElement> {
        let items: Vec<Value> = match v {
            Value::Array(a) => a.clone(),
            other => vec![other.clone()],
        };
        match self {
            GroupDescriptor::Discrete { .. } => {
                let raw: Vec<i64> = items
                    .iter()
                    .map(|x| {
                        x.as_i64()
                            .ok_or_else(|| Error::argument(MODULE, format!("expected integer coordinate, got {x}")))
                    })
                    .collect::<Result<_>>()?;
                self.discrete_from_raw(&raw)
            }
            GroupDescriptor::RealLine(b) => {
                let c: Vec<BigRational> = items.iter().map(rational_from_json).collect::<Result<_>>()?;
                if c.len() != b.len() {
                    return Err(Error::argument(
                        MODULE,
                        format!("expected {} rational coordinates, got {}", b.len(), c.len()),
                    ));
                }
                Ok(GroupElement::Real(c))
            }
        }
    }

    /// Text form used inside algebra expressions: `3`, `(1,0)`, `1+1/2*sqrt2`.
    pub fn render_point(&self, g: &GroupElement) -> String {
        match (self, g) {
            (_, GroupElement::Discrete { free, torsion }) => {
                let all: Vec<String> = free.iter().chain(torsion).map(i64::to_string).collect();
                if all.len() == 1 {
                    all[0].clone()
                } else {
                    format!("({})", all.join(","))
                }
            }
            (GroupDescriptor::RealLine(b), GroupElement::Real(c)) => render_combination(b, c),
            (GroupDescriptor::Discrete { .. }, GroupElement::Real(c)) => format!("{c:?}"),
        }
    }
}

/// `q_1*name_1 + …`, with the basis value named `"1"` printed as a bare rational.
fn render_combination(b: &RealBasis, coords: &[BigRational]) -> String {
    let mut out = String::new();
    for (j, c) in coords.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let name = &b.elements[j].name;
        let mag = c.abs();
        let body = if name == "1" {
            render_rational(&mag)
        } else if mag.is_one() {
            name.clone()
        } else {
            format!("{}*{}", render_rational(&mag), name)
        };
        if out.is_empty() {
            if c.is_negative() {
                out.push('-');
            }
        } else {
            out.push_str(if c.is_negative() { "-" } else { "+" });
        }
        out.push_str(&body);
    }
    if out.is_empty() {
        "0".into()
    } else {
        out
    }
}

fn rational_from_json(v: &Value) -> Result<BigRational> {
    match v {
        Value::String(s) => parse_rational(s),
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Ok(BigRational::from_integer(BigInt::from(i)))
            } else {
                parse_rational(&n.to_string())
            }
        }
        other => Err(Error::argument(MODULE, format!("expected rational, got {other}"))),
    }
}

/// Alphabet mode of the weight data.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Alphabet {
    /// `O_n`: the `n` listed generators with `Σ S_i S_i* = 1`.
    Finite,
    /// `O_∞`: listed weights recur with infinite multiplicity.
    InfiniteRepeating,
}

/// The weight vector `ω = (ω_1, …, ω_n)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OmegaData {
    group: GroupDescriptor,
    weights: Vec<GroupElement>,
    alphabet: Alphabet,
}

impl OmegaData {
    pub fn new(group: GroupDescriptor, weights: Vec<GroupElement>, alphabet: Alphabet) -> Result<Self> {
        match alphabet {
            Alphabet::Finite if weights.len() < 2 => {
                return Err(Error::argument(MODULE, "O_n needs at least two weights"));
            }
            Alphabet::InfiniteRepeating if weights.is_empty() => {
                return Err(Error::argument(MODULE, "O_infinity weight list must be nonempty"));
            }
            _ => {}
        }
        for w in &weights {
            group.validate(w)?;
        }
        Ok(OmegaData { group, weights, alphabet })
    }

    pub fn finite(group: GroupDescriptor, weights: Vec<GroupElement>) -> Result<Self> {
        Self::new(group, weights, Alphabet::Finite)
    }

    /// Weights over `Z` given as plain integers.
    pub fn over_integers(weights: &[i64]) -> Result<Self> {
        Self::finite(GroupDescriptor::integers(), weights.iter().map(|&w| GroupElement::integer(w)).collect())
    }

    pub fn group(&self) -> &GroupDescriptor {
        &self.group
    }

    pub fn weights(&self) -> &[GroupElement] {
        &self.weights
    }

    pub fn weight(&self, i: usize) -> &GroupElement {
        &self.weights[i - 1]
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    /// Number of listed weights (letters `1..=n`).
    pub fn n(&self) -> usize {
        self.weights.len()
    }

    /// Same group and alphabet, different weights (validity rechecked).
    pub fn with_weights(&self, weights: Vec<GroupElement>) -> Result<Self> {
        Self::new(self.group.clone(), weights, self.alphabet)
    }

    /// `Σ a_i ω_i`.
    pub fn combine(&self, counts: &[u64]) -> Result<GroupElement> {
        if counts.len() != self.weights.len() {
            return Err(Error::argument(
                MODULE,
                format!("count vector has length {}, expected {}", counts.len(), self.weights.len()),
            ));
        }
        let mut acc = self.group.zero();
        for (w, &a) in self.weights.iter().zip(counts) {
            if a > 0 {
                let k = i64::try_from(a).map_err(|_| Error::argument(MODULE, "count too large"))?;
                acc = self.group.add(&acc, &self.group.scale(w, k));
            }
        }
        Ok(acc)
    }

    pub fn to_json(&self) -> Value {
        Value::Array(self.weights.iter().map(|w| self.group.element_to_json(w)).collect())
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupElement::Discrete { free, torsion } => {
                let all: Vec<String> = free.iter().chain(torsion).map(i64::to_string).collect();
                write!(f, "({})", all.join(","))
            }
            GroupElement::Real(c) => {
                let all: Vec<String> = c.iter().map(render_rational).collect();
                write!(f, "<{}>", all.join(","))
            }
        }
    }
}
