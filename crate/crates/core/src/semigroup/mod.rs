//! Decision procedures with witnesses for the semigroup `{ω_μ}` generated by
//! the weights.
//!
//! Membership over a discrete group (or the Q-span of a real basis, after
//! clearing denominators) splits the weights in two. The *lineality* indices
//! are those used by some nonnegative rational relation `Σ a_j v_j = 0` of the
//! free parts. Their nonnegative span is the group `L` they generate, because
//! a relation with every lineality coefficient positive exists and has finite
//! order in the torsion. The remaining weights are strictly positive under an
//! integral functional `φ` that vanishes on `L`, so they can only be used a
//! bounded number of times. A target is therefore a member iff one of the
//! finitely many nonnegative combinations of non-lineality weights with the
//! right `φ`-value leaves a residual in the lattice `L`, which is decided by a
//! Smith normal form solve.

pub mod lattice;
pub mod lp;

use std::cmp::Ordering;
use std::collections::{BTreeSet, VecDeque};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::gamma::{GroupDescriptor, GroupElement, OmegaData};
use crate::scalar::render_rational;
use lattice::SmithForm;

const MODULE: &str = "semigroup_engine";

/// Upper bound on enumeration nodes for one membership query.
const SEARCH_CAP: usize = 2_000_000;
/// Count vectors examined while looking for a shorter witness.
const MINIMIZE_CAP: usize = 20_000;
/// Largest finite group handled by breadth-first closure.
const FINITE_CAP: usize = 1_000_000;

/// Nonnegative counts `a` with `combine(a) = target`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MembershipWitness {
    pub counts: Vec<u64>,
}

impl MembershipWitness {
    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn verify(&self, omega: &OmegaData, target: &GroupElement) -> Result<bool> {
        Ok(&omega.combine(&self.counts)? == target)
    }
}

/// Why a closure verdict holds.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ClosureReason {
    /// Infinite discrete group: lineality indices (1-based), a relation with
    /// positive coefficients on them, and whether all weights generate Γ.
    ConeLattice { lineality: Vec<usize>, relation: Vec<u64>, generates_group: bool },
    /// Finite group: the semigroup itself, found by breadth-first search.
    FiniteBfs { closure: Vec<GroupElement> },
    /// Real line: sign pattern and Q-rank of the weights.
    SignRank { positive: usize, negative: usize, zero: usize, rank: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosureCertificate {
    pub verdict: bool,
    pub reason: ClosureReason,
    pub counterexample: Option<GroupElement>,
}

impl ClosureCertificate {
    pub fn to_json(&self, group: &GroupDescriptor) -> Value {
        let reason = match &self.reason {
            ClosureReason::ConeLattice { lineality, relation, generates_group } => json!({
                "type": "cone_lattice",
                "lineality": lineality,
                "relation": relation,
                "generates_group": generates_group,
            }),
            ClosureReason::FiniteBfs { closure } => json!({
                "type": "finite_bfs",
                "closure": closure.iter().map(|g| group.element_to_json(g)).collect::<Vec<_>>(),
            }),
            ClosureReason::SignRank { positive, negative, zero, rank } => json!({
                "type": "sign_rank",
                "positive": positive,
                "negative": negative,
                "zero": zero,
                "rank": rank,
            }),
        };
        json!({
            "verdict": self.verdict,
            "reason": reason,
            "counterexample": self.counterexample.as_ref().map(|g| group.element_to_json(g)),
        })
    }

    /// Re-check the certificate against the weights.
    pub fn verify(&self, omega: &OmegaData) -> Result<bool> {
        let group = omega.group();
        let fresh = closure_equals_gamma(omega)?;
        if fresh.verdict != self.verdict || fresh.reason != self.reason {
            return Ok(false);
        }
        if let ClosureReason::FiniteBfs { closure } = &self.reason {
            let set: BTreeSet<&GroupElement> = closure.iter().collect();
            if !set.contains(&group.zero()) {
                return Ok(false);
            }
            for g in closure {
                for w in omega.weights() {
                    if !set.contains(&group.add(g, w)) {
                        return Ok(false);
                    }
                }
            }
            if self.verdict != (Some(closure.len() as u64) == group.order()) {
                return Ok(false);
            }
        }
        match (&self.counterexample, self.verdict) {
            (Some(_), true) => Ok(false),
            (None, false) => Ok(false),
            (Some(c), false) if group.is_discrete() => Ok(member(c, omega)?.is_none()),
            _ => Ok(true),
        }
    }
}

/// Precomputed structure of the semigroup for repeated queries.
#[derive(Clone, Debug)]
pub struct SemigroupModel {
    omega: OmegaData,
    free_dim: usize,
    /// Common denominator applied to real coordinates (1 for discrete groups).
    scale: BigInt,
    /// Integer coordinates (free ++ torsion) of each weight.
    int_weights: Vec<Vec<BigInt>>,
    lineality: Vec<bool>,
    relation: Vec<u64>,
    /// `φ(v_i)`: zero on lineality indices, at least one elsewhere.
    phi: Vec<BigInt>,
    functional: Vec<BigInt>,
    lineality_cols: Vec<usize>,
    lineality_lattice: SmithForm,
    full_lattice: SmithForm,
}

fn lcm_denominators<'a>(values: impl Iterator<Item = &'a BigRational>) -> BigInt {
    values.fold(BigInt::one(), |acc, v| acc.lcm(v.denom()))
}

fn clear_denominators(v: &[BigRational]) -> Vec<BigInt> {
    let d = lcm_denominators(v.iter());
    v.iter().map(|x| (x * BigRational::from_integer(d.clone())).to_integer()).collect()
}

impl SemigroupModel {
    pub fn new(omega: &OmegaData) -> Result<Self> {
        let group = omega.group();
        let free_dim = group.free_rank();
        let torsion = group.torsion().to_vec();
        let scale = match group {
            GroupDescriptor::Discrete { .. } => BigInt::one(),
            GroupDescriptor::RealLine(_) => lcm_denominators(omega.weights().iter().flat_map(|w| match w {
                GroupElement::Real(c) => c.iter(),
                _ => [].iter(),
            })),
        };
        let int_of = |g: &GroupElement| -> Option<Vec<BigInt>> { int_coords(g, &scale) };
        let int_weights: Vec<Vec<BigInt>> = omega
            .weights()
            .iter()
            .map(|w| int_of(w).expect("weights are integral after scaling"))
            .collect();
        let n = omega.n();
        let q = |x: &BigInt| BigRational::from_integer(x.clone());

        // lineality indices and a relation with positive coefficients on them
        let mut lineality = vec![false; n];
        let mut rel_sum = vec![BigRational::zero(); n];
        for i in 0..n {
            let mut rows: Vec<Vec<BigRational>> =
                (0..free_dim).map(|k| int_weights.iter().map(|w| q(&w[k])).collect()).collect();
            let mut pin = vec![BigRational::zero(); n];
            pin[i] = BigRational::one();
            rows.push(pin);
            let mut rhs = vec![BigRational::zero(); free_dim];
            rhs.push(BigRational::one());
            if let Some(sol) = lp::feasible(&rows, &rhs) {
                lineality[i] = true;
                for (acc, v) in rel_sum.iter_mut().zip(sol) {
                    *acc += v;
                }
            }
        }
        let mut relation_int = clear_denominators(&rel_sum);
        if !torsion.is_empty() {
            // multiply by the order of the leftover torsion element
            let mut order = BigInt::one();
            for (k, m) in torsion.iter().enumerate() {
                let t: BigInt = relation_int
                    .iter()
                    .zip(&int_weights)
                    .map(|(c, w)| c * &w[free_dim + k])
                    .sum::<BigInt>()
                    .mod_floor(&BigInt::from(*m));
                let m = BigInt::from(*m);
                order = order.lcm(&(&m / t.gcd(&m)));
            }
            for c in relation_int.iter_mut() {
                *c *= &order;
            }
        }
        let relation: Vec<u64> = relation_int
            .iter()
            .map(|c| c.to_u64().ok_or_else(|| Error::resource(MODULE, "relation coefficient overflow")))
            .collect::<Result<_>>()?;

        // separating functional for the pointed part
        let outside: Vec<usize> = (0..n).filter(|&i| !lineality[i]).collect();
        let functional = if outside.is_empty() || free_dim == 0 {
            vec![BigInt::zero(); free_dim]
        } else {
            let vars = 2 * free_dim + outside.len();
            let mut rows = vec![];
            let mut rhs = vec![];
            for i in 0..n {
                let mut row = vec![BigRational::zero(); vars];
                for k in 0..free_dim {
                    row[k] = q(&int_weights[i][k]);
                    row[free_dim + k] = -q(&int_weights[i][k]);
                }
                if let Some(pos) = outside.iter().position(|&o| o == i) {
                    row[2 * free_dim + pos] = -BigRational::one();
                    rhs.push(BigRational::one());
                } else {
                    rhs.push(BigRational::zero());
                }
                rows.push(row);
            }
            let sol = lp::feasible(&rows, &rhs).ok_or_else(|| {
                Error::internal(MODULE, "no separating functional for the pointed part")
            })?;
            let phi: Vec<BigRational> = (0..free_dim).map(|k| &sol[k] - &sol[free_dim + k]).collect();
            clear_denominators(&phi)
        };
        let phi: Vec<BigInt> = int_weights
            .iter()
            .map(|w| functional.iter().zip(w).map(|(f, x)| f * x).sum())
            .collect();

        let rows = free_dim + torsion.len();
        let torsion_cols = |m: &mut Vec<Vec<BigInt>>| {
            for (k, t) in torsion.iter().enumerate() {
                for (r, row) in m.iter_mut().enumerate() {
                    row.push(if r == free_dim + k { BigInt::from(*t) } else { BigInt::zero() });
                }
            }
        };
        let lineality_cols: Vec<usize> = (0..n).filter(|&i| lineality[i]).collect();
        let mut lm: Vec<Vec<BigInt>> =
            (0..rows).map(|r| lineality_cols.iter().map(|&j| int_weights[j][r].clone()).collect()).collect();
        torsion_cols(&mut lm);
        let lcols = lineality_cols.len() + torsion.len();
        let lineality_lattice = SmithForm::new(&lm, rows, lcols);
        let mut fm: Vec<Vec<BigInt>> = (0..rows).map(|r| int_weights.iter().map(|w| w[r].clone()).collect()).collect();
        torsion_cols(&mut fm);
        let full_lattice = SmithForm::new(&fm, rows, n + torsion.len());

        Ok(SemigroupModel {
            omega: omega.clone(),
            free_dim,
            scale,
            int_weights,
            lineality,
            relation,
            phi,
            functional,
            lineality_cols,
            lineality_lattice,
            full_lattice,
        })
    }

    pub fn omega(&self) -> &OmegaData {
        &self.omega
    }

    /// 1-based lineality indices.
    pub fn lineality_indices(&self) -> Vec<usize> {
        (0..self.lineality.len()).filter(|&i| self.lineality[i]).map(|i| i + 1).collect()
    }

    pub fn relation(&self) -> &[u64] {
        &self.relation
    }

    /// The weights' cone contains no line.
    pub fn is_pointed(&self) -> bool {
        !self.lineality.iter().any(|&l| l)
    }

    /// `φ(ω_i)` for the integral functional `φ` positive off the lineality space.
    pub fn phi_weights(&self) -> &[BigInt] {
        &self.phi
    }

    /// `φ(g)`, or `None` if `g` has coordinates outside the scaled lattice.
    pub fn phi_of(&self, g: &GroupElement) -> Option<BigInt> {
        let t = int_coords(g, &self.scale)?;
        Some(self.functional.iter().zip(&t).map(|(f, x)| f * x).sum())
    }

    /// Does some weight-support functional certify `target ∉ cone`?
    pub fn separates(&self, target: &GroupElement) -> Option<bool> {
        let t = int_coords(target, &self.scale)?;
        let value: BigInt = self.functional.iter().zip(&t).map(|(f, x)| f * x).sum();
        Some(value.is_negative())
    }

    pub fn member(&self, target: &GroupElement) -> Result<Option<MembershipWitness>> {
        let group = self.omega.group();
        group.validate(target).map_err(|_| {
            Error::feature(MODULE, format!("target {target} is not an element of the weights' group"))
        })?;
        let n = self.omega.n();
        if group.is_zero(target) {
            return Ok(Some(MembershipWitness { counts: vec![0; n] }));
        }
        let Some(t) = int_coords(target, &self.scale) else { return Ok(None) };
        let budget: BigInt = self.functional.iter().zip(&t).map(|(f, x)| f * x).sum();
        if budget.is_negative() {
            return Ok(None);
        }
        let outside: Vec<usize> = (0..n).filter(|&i| !self.lineality[i]).collect();
        let mut counts = vec![0u64; n];
        let mut nodes = 0usize;
        let found = self.search_outside(&t, &outside, 0, budget, &mut counts, &mut nodes)?;
        let Some(counts) = found else { return Ok(None) };
        let witness = self.minimize(target, MembershipWitness { counts }, false)?;
        if !witness.verify(&self.omega, target)? {
            return Err(Error::internal(MODULE, format!("membership witness for {target} does not re-evaluate")));
        }
        Ok(Some(witness))
    }

    fn search_outside(
        &self,
        target: &[BigInt],
        outside: &[usize],
        pos: usize,
        budget: BigInt,
        counts: &mut Vec<u64>,
        nodes: &mut usize,
    ) -> Result<Option<Vec<u64>>> {
        *nodes += 1;
        if *nodes > SEARCH_CAP {
            return Err(Error::resource(MODULE, format!("membership search exceeded {SEARCH_CAP} nodes")));
        }
        if pos == outside.len() {
            if !budget.is_zero() {
                return Ok(None);
            }
            return Ok(self.lift_residual(target, counts));
        }
        let i = outside[pos];
        let max = (&budget / &self.phi[i]).to_u64().unwrap_or(0);
        for c in (0..=max).rev() {
            counts[i] = c;
            let rest = &budget - &self.phi[i] * BigInt::from(c);
            if let Some(found) = self.search_outside(target, outside, pos + 1, rest, counts, nodes)? {
                return Ok(Some(found));
            }
        }
        counts[i] = 0;
        Ok(None)
    }

    /// Given counts on the non-lineality weights, express the residual with
    /// nonnegative lineality counts if it lies in `L`.
    fn lift_residual(&self, target: &[BigInt], counts: &[u64]) -> Option<Vec<u64>> {
        let mut residual = target.to_vec();
        for (i, &c) in counts.iter().enumerate() {
            if c > 0 && !self.lineality[i] {
                for (r, w) in residual.iter_mut().zip(&self.int_weights[i]) {
                    *r -= w * BigInt::from(c);
                }
            }
        }
        let y = self.lineality_lattice.solve(&residual)?;
        let mut out = counts.to_vec();
        let z: Vec<BigInt> = y[..self.lineality_cols.len()].to_vec();
        // shift by multiples of the positive relation until nonnegative
        let mut k = BigInt::zero();
        for (zj, &j) in z.iter().zip(&self.lineality_cols) {
            if zj.is_negative() {
                let need = (-zj).div_ceil(&BigInt::from(self.relation[j]));
                k = k.max(need);
            }
        }
        for (zj, &j) in z.iter().zip(&self.lineality_cols) {
            let v = zj + &k * BigInt::from(self.relation[j]);
            out[j] = v.to_u64()?;
        }
        Some(out)
    }

    /// Breadth-first search by total count for a witness no longer than `witness`.
    fn minimize(&self, target: &GroupElement, witness: MembershipWitness, nonzero: bool) -> Result<MembershipWitness> {
        let n = self.omega.n();
        let mut examined = 0usize;
        let start = u64::from(nonzero);
        for total in start..witness.total() {
            let mut found = None;
            let mut buf = vec![0u64; n];
            let complete = for_each_composition(total, n, &mut buf, &mut |a| {
                examined += 1;
                if examined > MINIMIZE_CAP {
                    return Some(false);
                }
                match self.omega.combine(a) {
                    Ok(v) if &v == target => {
                        found = Some(a.to_vec());
                        Some(true)
                    }
                    _ => None,
                }
            });
            if let Some(counts) = found {
                return Ok(MembershipWitness { counts });
            }
            if complete == Some(false) {
                break;
            }
        }
        Ok(witness)
    }

    pub fn zero_word_exists(&self) -> Result<Option<MembershipWitness>> {
        if self.is_pointed() {
            return Ok(None);
        }
        let structural = MembershipWitness { counts: self.relation.clone() };
        let zero = self.omega.group().zero();
        if !structural.verify(&self.omega, &zero)? || structural.total() == 0 {
            return Err(Error::internal(MODULE, "lineality relation does not evaluate to zero"));
        }
        let w = self.minimize(&zero, structural, true)?;
        if w.total() == 0 || !w.verify(&self.omega, &zero)? {
            return Err(Error::internal(MODULE, "zero-word witness failed re-evaluation"));
        }
        Ok(Some(w))
    }

    pub fn closure_equals_gamma(&self) -> Result<ClosureCertificate> {
        let group = self.omega.group();
        match group {
            GroupDescriptor::Discrete { .. } if group.is_finite() => {
                let closure = finite_closure(&self.omega)?;
                let all = group.finite_elements(FINITE_CAP)?;
                let set: BTreeSet<&GroupElement> = closure.iter().collect();
                let counterexample = all.into_iter().find(|g| !set.contains(g));
                Ok(ClosureCertificate {
                    verdict: counterexample.is_none(),
                    reason: ClosureReason::FiniteBfs { closure },
                    counterexample,
                })
            }
            GroupDescriptor::Discrete { .. } => {
                let generates_group = self.full_lattice.is_unimodular_image();
                let counterexample = if let Some(i) = self.lineality.iter().position(|&l| !l) {
                    Some(group.neg(&self.omega.weights()[i]))
                } else if !generates_group {
                    self.missing_generator()
                } else {
                    None
                };
                Ok(ClosureCertificate {
                    verdict: counterexample.is_none(),
                    reason: ClosureReason::ConeLattice {
                        lineality: self.lineality_indices(),
                        relation: self.relation.clone(),
                        generates_group,
                    },
                    counterexample,
                })
            }
            GroupDescriptor::RealLine(_) => real_closure(&self.omega),
        }
    }

    fn missing_generator(&self) -> Option<GroupElement> {
        let group = self.omega.group();
        let dims = self.free_dim + group.torsion().len();
        (0..dims).find_map(|k| {
            let mut raw = vec![0i64; dims];
            raw[k] = 1;
            let t: Vec<BigInt> = raw.iter().map(|&x| BigInt::from(x)).collect();
            if self.full_lattice.solve(&t).is_none() {
                group.discrete_from_raw(&raw).ok()
            } else {
                None
            }
        })
    }

    /// Is `−ω_i` (1-based `i`) in the closed semigroup?
    pub fn neg_gen_in_closure(&self, i: usize) -> Result<NegGenReport> {
        let n = self.omega.n();
        if i == 0 || i > n {
            return Err(Error::argument(MODULE, format!("index {i} outside 1..={n}")));
        }
        let group = self.omega.group();
        let target = group.neg(self.omega.weight(i));
        match group {
            GroupDescriptor::Discrete { .. } => {
                let witness = self.member(&target)?;
                Ok(NegGenReport { index: i, in_closure: witness.is_some(), witness, signs: None })
            }
            GroupDescriptor::RealLine(_) => {
                let signs = SignPattern::of(&self.omega)?;
                let own = group.sign_real(self.omega.weight(i))?;
                let in_closure = own == Ordering::Equal || signs.mixed();
                Ok(NegGenReport { index: i, in_closure, witness: None, signs: Some(signs) })
            }
        }
    }
}

/// Outcome of one `−ω_i ∈ closure` query.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NegGenReport {
    pub index: usize,
    pub in_closure: bool,
    /// Discrete groups: counts realizing `−ω_i` when it is a member.
    pub witness: Option<MembershipWitness>,
    /// Real line: the sign pattern the decision rests on.
    pub signs: Option<SignPattern>,
}

/// Sign counts of real weights.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SignPattern {
    pub positive: usize,
    pub negative: usize,
    pub zero: usize,
}

impl SignPattern {
    pub fn of(omega: &OmegaData) -> Result<Self> {
        let group = omega.group();
        let mut s = SignPattern { positive: 0, negative: 0, zero: 0 };
        for w in omega.weights() {
            match group.sign_real(w)? {
                Ordering::Greater => s.positive += 1,
                Ordering::Less => s.negative += 1,
                Ordering::Equal => s.zero += 1,
            }
        }
        Ok(s)
    }

    pub fn mixed(&self) -> bool {
        self.positive > 0 && self.negative > 0
    }
}

fn int_coords(g: &GroupElement, scale: &BigInt) -> Option<Vec<BigInt>> {
    match g {
        GroupElement::Discrete { free, torsion } => Some(free.iter().chain(torsion).map(|&x| BigInt::from(x)).collect()),
        GroupElement::Real(c) => c
            .iter()
            .map(|x| {
                let y = x * BigRational::from_integer(scale.clone());
                y.is_integer().then(|| y.to_integer())
            })
            .collect(),
    }
}

/// Calls `f` on every count vector of length `parts` and sum `total`, in
/// lexicographically descending order. `f` returns `Some(stop_value)` to stop.
pub fn for_each_composition(
    total: u64,
    parts: usize,
    buf: &mut [u64],
    f: &mut dyn FnMut(&[u64]) -> Option<bool>,
) -> Option<bool> {
    fn rec(
        pos: usize,
        remaining: u64,
        parts: usize,
        buf: &mut [u64],
        f: &mut dyn FnMut(&[u64]) -> Option<bool>,
    ) -> Option<bool> {
        if pos + 1 == parts {
            buf[pos] = remaining;
            return f(buf);
        }
        for c in (0..=remaining).rev() {
            buf[pos] = c;
            if let Some(stop) = rec(pos + 1, remaining - c, parts, buf, f) {
                return Some(stop);
            }
        }
        None
    }
    if parts == 0 {
        return if total == 0 { f(buf) } else { None };
    }
    rec(0, total, parts, buf, f)
}

fn finite_closure(omega: &OmegaData) -> Result<Vec<GroupElement>> {
    let group = omega.group();
    let mut seen = BTreeSet::new();
    let mut queue = VecDeque::new();
    seen.insert(group.zero());
    queue.push_back(group.zero());
    while let Some(g) = queue.pop_front() {
        for w in omega.weights() {
            let h = group.add(&g, w);
            if seen.insert(h.clone()) {
                if seen.len() > FINITE_CAP {
                    return Err(Error::resource(MODULE, "finite closure exceeded cap"));
                }
                queue.push_back(h);
            }
        }
    }
    Ok(seen.into_iter().collect())
}

/// Dimension of the Q-span of rational vectors.
pub fn rational_rank(vectors: &[Vec<BigRational>]) -> usize {
    let mut rows: Vec<Vec<BigRational>> = vectors.to_vec();
    let cols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows.len()).find(|&r| !rows[r][c].is_zero()) else { continue };
        rows.swap(rank, p);
        let pivot = rows[rank].clone();
        for r in 0..rows.len() {
            if r != rank && !rows[r][c].is_zero() {
                let f = &rows[r][c] / &pivot[c];
                for (x, y) in rows[r].iter_mut().zip(&pivot) {
                    *x -= &f * y;
                }
            }
        }
        rank += 1;
    }
    rank
}

fn real_closure(omega: &OmegaData) -> Result<ClosureCertificate> {
    let group = omega.group();
    let signs = SignPattern::of(omega)?;
    let coords: Vec<Vec<BigRational>> = omega
        .weights()
        .iter()
        .map(|w| match w {
            GroupElement::Real(c) => c.clone(),
            _ => unreachable!("validated real weights"),
        })
        .collect();
    let rank = rational_rank(&coords);
    let reason = ClosureReason::SignRank { positive: signs.positive, negative: signs.negative, zero: signs.zero, rank };
    let verdict = signs.mixed() && rank >= 2;
    let counterexample = if verdict {
        None
    } else if signs.mixed() {
        // closure is the lattice generated by gcd · β
        let beta = coords.iter().find(|c| c.iter().any(|x| !x.is_zero())).expect("mixed signs need a nonzero weight");
        let lead = beta.iter().position(|x| !x.is_zero()).expect("nonzero");
        let ratios: Vec<BigRational> = coords.iter().map(|c| &c[lead] / &beta[lead]).collect();
        let den = lcm_denominators(ratios.iter());
        let g = ratios
            .iter()
            .map(|r| (r * BigRational::from_integer(den.clone())).to_integer())
            .fold(BigInt::zero(), |acc, x| acc.gcd(&x));
        let half = BigRational::new(g, den * BigInt::from(2));
        Some(GroupElement::Real(beta.iter().map(|x| x * &half).collect()))
    } else if let Some(w) = omega.weights().iter().find(|w| !group.is_zero(w)) {
        Some(group.neg(w))
    } else {
        let mut e = vec![BigRational::zero(); coords[0].len()];
        e[0] = BigRational::one();
        Some(GroupElement::Real(e))
    };
    Ok(ClosureCertificate { verdict, reason, counterexample })
}

// ---- free-function entry points -------------------------------------------

pub fn member(target: &GroupElement, omega: &OmegaData) -> Result<Option<MembershipWitness>> {
    SemigroupModel::new(omega)?.member(target)
}

pub fn zero_word_exists(omega: &OmegaData) -> Result<Option<MembershipWitness>> {
    SemigroupModel::new(omega)?.zero_word_exists()
}

pub fn closure_equals_gamma(omega: &OmegaData) -> Result<ClosureCertificate> {
    match omega.group() {
        GroupDescriptor::RealLine(_) => real_closure(omega),
        _ => SemigroupModel::new(omega)?.closure_equals_gamma(),
    }
}

pub fn neg_gen_in_closure(omega: &OmegaData, i: usize) -> Result<bool> {
    Ok(SemigroupModel::new(omega)?.neg_gen_in_closure(i)?.in_closure)
}

pub fn witness_to_json(w: &MembershipWitness) -> Value {
    json!({ "counts": w.counts })
}

pub fn rational_json(r: &BigRational) -> Value {
    Value::String(render_rational(r))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gamma::Alphabet;

    fn z(weights: &[i64]) -> OmegaData {
        OmegaData::over_integers(weights).unwrap()
    }

    fn zt(weights: &[i64], m: i64) -> OmegaData {
        let g = GroupDescriptor::cyclic(m).unwrap();
        let w = weights.iter().map(|&x| g.discrete_from_raw(&[x]).unwrap()).collect();
        OmegaData::finite(g, w).unwrap()
    }

    fn real(weights: &[[i64; 2]]) -> OmegaData {
        OmegaData::finite(
            GroupDescriptor::real_sqrt2(),
            weights.iter().map(|w| GroupElement::real_ints(w)).collect(),
        )
        .unwrap()
    }

    #[test]
    fn member_examples() {
        let om = z(&[2, 3]);
        let w = member(&GroupElement::integer(7), &om).unwrap().unwrap();
        assert_eq!(w.counts, vec![2, 1]);
        assert!(member(&GroupElement::integer(1), &om).unwrap().is_none());
        assert_eq!(member(&GroupElement::integer(0), &om).unwrap().unwrap().counts, vec![0, 0]);
        assert!(member(&GroupElement::integer(-1), &om).unwrap().is_none());
    }

    #[test]
    fn member_with_lineality() {
        let om = z(&[1, -1]);
        assert_eq!(member(&GroupElement::integer(-1), &om).unwrap().unwrap().counts, vec![0, 1]);
        assert_eq!(member(&GroupElement::integer(1), &om).unwrap().unwrap().counts, vec![1, 0]);
        // 2 and -3 generate Z as a semigroup
        let om = z(&[2, -3]);
        for t in -6..=6 {
            let w = member(&GroupElement::integer(t), &om).unwrap().unwrap();
            assert!(w.verify(&om, &GroupElement::integer(t)).unwrap());
        }
        // 2, -4: only even numbers
        let om = z(&[2, -4]);
        assert!(member(&GroupElement::integer(3), &om).unwrap().is_none());
        assert!(member(&GroupElement::integer(-6), &om).unwrap().is_some());
    }

    #[test]
    fn zero_word_examples() {
        assert_eq!(zero_word_exists(&z(&[1, -1])).unwrap().unwrap().counts, vec![1, 1]);
        assert!(zero_word_exists(&z(&[2, 3])).unwrap().is_none());
        assert_eq!(zero_word_exists(&z(&[0, 5])).unwrap().unwrap().counts, vec![1, 0]);
        assert_eq!(zero_word_exists(&zt(&[1, 1], 2)).unwrap().unwrap().total(), 2);
    }

    #[test]
    fn closure_examples() {
        assert!(closure_equals_gamma(&z(&[2, -3])).unwrap().verdict);
        let c = closure_equals_gamma(&zt(&[1, 1], 3)).unwrap();
        assert!(c.verdict);
        assert!(matches!(c.reason, ClosureReason::FiniteBfs { ref closure } if closure.len() == 3));
        let c = closure_equals_gamma(&real(&[[1, 0], [0, 1]])).unwrap();
        assert!(!c.verdict);
        let c = closure_equals_gamma(&z(&[1, 2])).unwrap();
        assert!(!c.verdict);
        assert_eq!(c.counterexample, Some(GroupElement::integer(-1)));
        // 2, -4 generate 2Z only
        let c = closure_equals_gamma(&z(&[2, -4])).unwrap();
        assert!(!c.verdict);
        assert_eq!(c.counterexample, Some(GroupElement::integer(1)));
        assert!(c.verify(&z(&[2, -4])).unwrap());
    }

    #[test]
    fn real_closure_cases() {
        assert!(closure_equals_gamma(&real(&[[1, 0], [0, -1]])).unwrap().verdict);
        let c = closure_equals_gamma(&real(&[[2, 0], [-3, 0]])).unwrap();
        assert!(!c.verdict);
        // lattice Z·1: counterexample 1/2
        assert_eq!(
            c.counterexample,
            Some(GroupElement::real(vec![BigRational::new(1.into(), 2.into()), BigRational::zero()]))
        );
    }

    #[test]
    fn neg_gen_examples() {
        assert!(!neg_gen_in_closure(&z(&[1, 2]), 1).unwrap());
        assert!(neg_gen_in_closure(&z(&[1, -1]), 1).unwrap());
        assert!(neg_gen_in_closure(&z(&[0, 3]), 1).unwrap());
        assert!(neg_gen_in_closure(&z(&[1, 2]), 3).is_err());
        assert!(!neg_gen_in_closure(&real(&[[1, 0], [0, 1]]), 2).unwrap());
        assert!(neg_gen_in_closure(&real(&[[0, 0], [0, 1]]), 1).unwrap());
        assert!(!neg_gen_in_closure(&real(&[[0, 0], [0, 1]]), 2).unwrap());
        assert!(neg_gen_in_closure(&real(&[[1, 0], [0, -1]]), 2).unwrap());
    }

    #[test]
    fn mixed_torsion_group() {
        let g = GroupDescriptor::discrete(1, vec![2]).unwrap();
        let w = vec![g.discrete_from_raw(&[1, 1]).unwrap(), g.discrete_from_raw(&[-1, 0]).unwrap()];
        let om = OmegaData::new(g.clone(), w, Alphabet::Finite).unwrap();
        // (1,1)+(-1,0) = (0,1), twice = 0
        assert_eq!(zero_word_exists(&om).unwrap().unwrap().counts, vec![2, 2]);
        let c = closure_equals_gamma(&om).unwrap();
        assert!(c.verdict);
        assert!(c.verify(&om).unwrap());
    }

    #[test]
    fn real_point_membership() {
        let om = real(&[[1, 0], [0, 1]]);
        let t = GroupElement::real_ints(&[2, 3]);
        assert_eq!(member(&t, &om).unwrap().unwrap().counts, vec![2, 3]);
        let half = GroupElement::real(vec![BigRational::new(1.into(), 2.into()), BigRational::zero()]);
        assert!(member(&half, &om).unwrap().is_none());
        assert!(zero_word_exists(&om).unwrap().is_none());
        let om = real(&[[1, 0], [-2, 0]]);
        assert_eq!(zero_word_exists(&om).unwrap().unwrap().counts, vec![2, 1]);
    }

    #[test]
    fn compositions_are_descending() {
        let mut seen = vec![];
        let mut buf = [0u64; 2];
        for_each_composition(2, 2, &mut buf, &mut |a| {
            seen.push(a.to_vec());
            None
        });
        assert_eq!(seen, vec![vec![2, 0], vec![1, 1], vec![0, 2]]);
    }
}
