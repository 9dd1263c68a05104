//! Finite-dimensional decompositions of the algebras `A_λ` generated by a
//! finite region family.
//!
//! For a family with union `p` the construction runs in stages: the shift
//! bound `K`, the projection `q = Π_{k≤K}(1 − ρ_k(p)) p`, the surviving maps
//! `τ: W → {0..L}` with `q_τ ≠ 0`, and finally the matrix units
//! `S_μ q_τ S_ν*`. Every identity the construction relies on is re-checked
//! exactly and recorded in the report's check log.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::Zero;
use serde_json::{json, Value};

use crate::algebra::{Algebra, AlgebraElement, GenTerm};
use crate::error::{Error, Result};
use crate::expr::render;
use crate::function::FiniteFunction;
use crate::gamma::{GroupDescriptor, GroupElement, OmegaData};
use crate::scalar::Scalar;
use crate::semigroup::{SemigroupModel, SignPattern};
use crate::words::{enumerate_words, Word, DEFAULT_WORD_CAP};

const MODULE: &str = "af_builder";

pub const DEFAULT_TAU_NODE_CAP: usize = 1_000_000;
pub const DEFAULT_SHIFT_NODE_CAP: usize = 2_000_000;

/// Base regions together with the minimal projections of the finite region
/// algebra they generate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegionFamily {
    regions: Vec<FiniteFunction>,
    atoms: Vec<FiniteFunction>,
    union: FiniteFunction,
}

fn sort_real(group: &GroupDescriptor, pts: &mut Vec<GroupElement>) -> Result<()> {
    let mut err = None;
    pts.sort_by(|a, b| match group.compare_real(a, b) {
        Ok(o) => o,
        Err(e) => {
            err.get_or_insert(e);
            Ordering::Equal
        }
    });
    if let Some(e) = err {
        return Err(e);
    }
    let mut out: Vec<GroupElement> = vec![];
    for p in pts.drain(..) {
        match out.last() {
            Some(last) if group.compare_real(last, &p)? == Ordering::Equal => {}
            _ => out.push(p),
        }
    }
    *pts = out;
    Ok(())
}

impl RegionFamily {
    /// Regions as indicator functions: finite point sets on a discrete group,
    /// finite unions of half-open intervals on the real line.
    pub fn new(group: &GroupDescriptor, regions: Vec<FiniteFunction>) -> Result<Self> {
        if regions.is_empty() {
            return Err(Error::argument(MODULE, "a region family needs at least one region"));
        }
        for (i, r) in regions.iter().enumerate() {
            if !r.is_indicator() {
                return Err(Error::argument(MODULE, format!("region {} is not an indicator function", i + 1)));
            }
            let kind_ok = matches!(
                (r, group.is_real()),
                (FiniteFunction::Points(_), false) | (FiniteFunction::Steps(_), true)
            );
            if !kind_ok {
                return Err(Error::argument(MODULE, format!("region {} does not live on the group", i + 1)));
            }
        }
        // cells grouped by the set of regions containing them
        let mut signatures: Vec<(Vec<usize>, FiniteFunction)> = vec![];
        let mut place = |sig: Vec<usize>, cell: FiniteFunction| -> Result<()> {
            if sig.is_empty() {
                return Ok(());
            }
            match signatures.iter_mut().find(|(s, _)| *s == sig) {
                Some((_, f)) => *f = f.add(&cell, group)?,
                None => signatures.push((sig, cell)),
            }
            Ok(())
        };
        if group.is_real() {
            let mut cuts: Vec<GroupElement> = regions
                .iter()
                .flat_map(|r| match r {
                    FiniteFunction::Steps(s) => s.iter().map(|(b, _)| b.clone()).collect::<Vec<_>>(),
                    FiniteFunction::Points(_) => vec![],
                })
                .collect();
            sort_real(group, &mut cuts)?;
            for w in cuts.windows(2) {
                let sig = signature(group, &regions, &w[0])?;
                place(sig, FiniteFunction::interval(group, w[0].clone(), w[1].clone(), Scalar::one())?)?;
            }
        } else {
            let mut pts: Vec<GroupElement> = regions.iter().flat_map(|r| r.support_points()).collect();
            pts.sort();
            pts.dedup();
            for g in pts {
                let sig = signature(group, &regions, &g)?;
                place(sig, FiniteFunction::point(group, g, Scalar::one())?)?;
            }
        }
        let atoms: Vec<FiniteFunction> = signatures.into_iter().map(|(_, f)| f).collect();
        if atoms.is_empty() {
            return Err(Error::argument(MODULE, "all regions are empty"));
        }
        let mut union = FiniteFunction::zero(group);
        for a in &atoms {
            union = union.add(a, group)?;
        }
        Ok(RegionFamily { regions, atoms, union })
    }

    /// Singleton regions `{g}` on a discrete group.
    pub fn singletons(group: &GroupDescriptor, points: &[GroupElement]) -> Result<Self> {
        let regions =
            points.iter().map(|g| FiniteFunction::indicator(group, std::slice::from_ref(g))).collect::<Result<_>>()?;
        Self::new(group, regions)
    }

    pub fn regions(&self) -> &[FiniteFunction] {
        &self.regions
    }

    /// Minimal projections `p_1, …, p_L`.
    pub fn atoms(&self) -> &[FiniteFunction] {
        &self.atoms
    }

    /// `p = Σ p_l`.
    pub fn union(&self) -> &FiniteFunction {
        &self.union
    }
}

fn signature(group: &GroupDescriptor, regions: &[FiniteFunction], x: &GroupElement) -> Result<Vec<usize>> {
    let mut sig = vec![];
    for (i, r) in regions.iter().enumerate() {
        if !r.eval(group, x)?.is_zero() {
            sig.push(i);
        }
    }
    Ok(sig)
}

/// A longest word whose weight lands in `U − U`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShiftBound {
    pub k: usize,
    pub longest: Option<Word>,
    pub nodes: usize,
}

fn hypothesis(omega: &OmegaData, model: &SemigroupModel) -> Result<()> {
    if let Some(w) = model.zero_word_exists()? {
        return Err(Error::construction(
            MODULE,
            format!("no shift bound: the word {} has weight 0", Word::from_counts(&w.counts)),
        ));
    }
    if omega.group().is_real() {
        let signs = SignPattern::of(omega)?;
        if signs.mixed() || signs.zero > 0 {
            return Err(Error::construction(
                MODULE,
                "no shift bound: weights of both signs give words of arbitrary length in U − U",
            ));
        }
    }
    Ok(())
}

/// Least `K` such that no word longer than `K` has weight in `U − U`.
pub fn shift_bound(family: &RegionFamily, omega: &OmegaData) -> Result<ShiftBound> {
    shift_bound_capped(family, omega, DEFAULT_SHIFT_NODE_CAP)
}

pub fn shift_bound_capped(family: &RegionFamily, omega: &OmegaData, cap: usize) -> Result<ShiftBound> {
    let group = omega.group();
    let model = SemigroupModel::new(omega)?;
    hypothesis(omega, &model)?;
    let n = omega.n();
    let mut best = ShiftBound { k: 0, longest: None, nodes: 0 };
    let mut counts = vec![0u64; n];
    if group.is_real() {
        // U − U is the union of the open intervals (a − d, b − c)
        let pieces = family.union.pieces();
        let mut gaps = vec![];
        for (a, b, _) in &pieces {
            for (c, d, _) in &pieces {
                gaps.push((group.sub(a, d), group.sub(b, c)));
            }
        }
        let positive = SignPattern::of(omega)?.positive > 0;
        let mut edge = if positive { gaps[0].1.clone() } else { gaps[0].0.clone() };
        for (lo, hi) in &gaps {
            let cand = if positive { hi } else { lo };
            let further = group.compare_real(cand, &edge)?;
            if (positive && further == Ordering::Greater) || (!positive && further == Ordering::Less) {
                edge = cand.clone();
            }
        }
        let ctx = RealSearch { group, omega, gaps: &gaps, edge: &edge, positive, cap };
        ctx.walk(0, &group.zero(), &mut counts, &mut best)?;
    } else {
        let pts = family.union.support_points();
        let mut diffs: Vec<GroupElement> =
            pts.iter().flat_map(|a| pts.iter().map(move |b| group.sub(a, b))).collect();
        diffs.sort();
        diffs.dedup();
        let budget = diffs
            .iter()
            .filter_map(|d| model.phi_of(d))
            .max()
            .ok_or_else(|| Error::internal(MODULE, "difference set is empty"))?;
        let ctx = DiscreteSearch { omega, phi: model.phi_weights(), diffs: &diffs, cap };
        ctx.walk(0, &BigInt::zero(), &mut counts, &mut best, &budget)?;
    }
    Ok(best)
}

fn record(counts: &[u64], best: &mut ShiftBound) {
    let total: u64 = counts.iter().sum();
    if total as usize > best.k {
        best.k = total as usize;
        best.longest = Some(Word::from_counts(counts));
    }
}

fn tick(best: &mut ShiftBound, cap: usize) -> Result<()> {
    best.nodes += 1;
    if best.nodes > cap {
        return Err(Error::resource(MODULE, format!("shift-bound search exceeded {cap} nodes")));
    }
    Ok(())
}

struct DiscreteSearch<'a> {
    omega: &'a OmegaData,
    phi: &'a [BigInt],
    diffs: &'a [GroupElement],
    cap: usize,
}

impl DiscreteSearch<'_> {
    fn walk(&self, i: usize, spent: &BigInt, counts: &mut [u64], best: &mut ShiftBound, budget: &BigInt) -> Result<()> {
        tick(best, self.cap)?;
        if i == counts.len() {
            let g = self.omega.combine(counts)?;
            if self.diffs.binary_search(&g).is_ok() {
                record(counts, best);
            }
            return Ok(());
        }
        let mut used = spent.clone();
        loop {
            self.walk(i + 1, &used, counts, best, budget)?;
            used += &self.phi[i];
            if &used > budget {
                break;
            }
            counts[i] += 1;
        }
        counts[i] = 0;
        Ok(())
    }
}

struct RealSearch<'a> {
    group: &'a GroupDescriptor,
    omega: &'a OmegaData,
    gaps: &'a [(GroupElement, GroupElement)],
    edge: &'a GroupElement,
    positive: bool,
    cap: usize,
}

impl RealSearch<'_> {
    fn beyond(&self, v: &GroupElement) -> Result<bool> {
        let o = self.group.compare_real(v, self.edge)?;
        Ok(if self.positive { o != Ordering::Less } else { o != Ordering::Greater })
    }

    fn walk(&self, i: usize, value: &GroupElement, counts: &mut [u64], best: &mut ShiftBound) -> Result<()> {
        tick(best, self.cap)?;
        if i == counts.len() {
            for (lo, hi) in self.gaps {
                if self.group.compare_real(lo, value)? == Ordering::Less
                    && self.group.compare_real(value, hi)? == Ordering::Less
                {
                    record(counts, best);
                    break;
                }
            }
            return Ok(());
        }
        let mut v = value.clone();
        while !self.beyond(&v)? {
            self.walk(i + 1, &v, counts, best)?;
            v = self.group.add(&v, self.omega.weight(i + 1));
            counts[i] += 1;
        }
        counts[i] = 0;
        Ok(())
    }
}

/// `q = Π_{k=1..K} (1 − ρ_k(p)) · p`.
pub fn build_q(alg: &Algebra, p: &AlgebraElement, k: usize) -> Result<AlgebraElement> {
    let mut q = p.clone();
    for j in 1..=k {
        let r = alg.rho_k(p, j)?;
        q = alg.complement_times(&r, &q)?;
    }
    Ok(q)
}

/// A surviving map `τ: W → {0..L}` and its projection.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Survivor {
    /// `τ(μ)` for each word of `W`, in the order of `W`.
    pub tau: Vec<usize>,
    pub q_tau: AlgebraElement,
}

/// `S_μ* p_l S_μ`, with `l = 0` meaning `1 − p`; `None` stands for the complement.
fn conjugated_atoms(alg: &Algebra, family: &RegionFamily, words: &[Word]) -> Result<Vec<Vec<AlgebraElement>>> {
    let mut out = vec![];
    for mu in words {
        let mut row = vec![];
        for f in std::iter::once(&family.union).chain(family.atoms.iter()) {
            let t = alg.mul_gen_sums(&[GenTerm::s_star(mu.clone())], &[GenTerm::func(f.clone())])?;
            let t = alg.mul_gen_sums(&t, &[GenTerm::s(mu.clone())])?;
            row.push(alg.from_gen_terms(t)?);
        }
        out.push(row);
    }
    Ok(out)
}

/// All `τ` with `q_τ ≠ 0`, in lexicographic order of `τ`, and the number of
/// search nodes visited.
pub fn survivors(
    alg: &Algebra,
    family: &RegionFamily,
    q: &AlgebraElement,
    words: &[Word],
    node_cap: usize,
) -> Result<(Vec<Survivor>, usize)> {
    let factors = conjugated_atoms(alg, family, words)?;
    let mut found = vec![];
    let mut nodes = 0usize;
    let mut tau = vec![];
    survive(alg, &factors, q, &mut tau, &mut found, &mut nodes, node_cap)?;
    Ok((found, nodes))
}

fn survive(
    alg: &Algebra,
    factors: &[Vec<AlgebraElement>],
    x: &AlgebraElement,
    tau: &mut Vec<usize>,
    found: &mut Vec<Survivor>,
    nodes: &mut usize,
    cap: usize,
) -> Result<()> {
    *nodes += 1;
    if *nodes > cap {
        return Err(Error::resource(MODULE, format!("tau enumeration exceeded {cap} nodes")));
    }
    if x.is_zero() {
        return Ok(());
    }
    let i = tau.len();
    if i == factors.len() {
        found.push(Survivor { tau: tau.clone(), q_tau: x.clone() });
        return Ok(());
    }
    let row = &factors[i];
    for l in 0..row.len() {
        let next = if l == 0 { alg.times_complement(x, &row[0])? } else { alg.multiply(x, &row[l])? };
        tau.push(l);
        survive(alg, factors, &next, tau, found, nodes, cap)?;
        tau.pop();
    }
    Ok(())
}

/// One line of the verification log.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckEntry {
    pub name: &'static str,
    pub count: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CheckLog {
    pub entries: Vec<CheckEntry>,
}

impl CheckLog {
    fn run(&mut self, name: &'static str, cases: impl IntoIterator<Item = Result<Option<String>>>) -> Result<()> {
        let mut count = 0;
        for case in cases {
            count += 1;
            if let Some(detail) = case? {
                return Err(Error::internal(MODULE, format!("check {name} failed: {detail}")));
            }
        }
        self.entries.push(CheckEntry { name, count });
        Ok(())
    }

    pub fn total(&self) -> usize {
        self.entries.iter().map(|e| e.count).sum()
    }

    pub fn count(&self, name: &str) -> Option<usize> {
        self.entries.iter().find(|e| e.name == name).map(|e| e.count)
    }
}

fn expect(alg: &Algebra, got: &AlgebraElement, want: &AlgebraElement, what: impl FnOnce() -> String) -> Option<String> {
    (got != want).then(|| format!("{}: got {}, expected {}", what(), render(alg, got), render(alg, want)))
}

/// Tunables for [`decompose`].
#[derive(Clone, Debug)]
pub struct DecomposeOptions {
    /// Word length for the matrix-unit checks; defaults to `K + 1`.
    pub truncation: Option<usize>,
    pub tau_node_cap: usize,
    pub shift_node_cap: usize,
    pub word_cap: usize,
}

impl Default for DecomposeOptions {
    fn default() -> Self {
        DecomposeOptions {
            truncation: None,
            tau_node_cap: DEFAULT_TAU_NODE_CAP,
            shift_node_cap: DEFAULT_SHIFT_NODE_CAP,
            word_cap: DEFAULT_WORD_CAP,
        }
    }
}

#[derive(Clone, Debug)]
pub struct DecompositionReport {
    pub family: RegionFamily,
    pub shift: ShiftBound,
    pub words: Vec<Word>,
    pub p: AlgebraElement,
    pub q: AlgebraElement,
    pub survivors: Vec<Survivor>,
    pub tau_nodes: usize,
    pub truncation: usize,
    pub checks: CheckLog,
}

impl DecompositionReport {
    pub fn k(&self) -> usize {
        self.shift.k
    }

    /// Number of summands `|J|`.
    pub fn summands(&self) -> usize {
        self.survivors.len()
    }

    pub fn to_json(&self, alg: &Algebra) -> Value {
        let group = alg.group();
        let words: Vec<String> = self.words.iter().map(|w| w.to_string()).collect();
        let j: Vec<Value> = self
            .survivors
            .iter()
            .map(|s| {
                let map: serde_json::Map<String, Value> =
                    words.iter().zip(&s.tau).map(|(w, l)| (w.clone(), json!(l))).collect();
                json!({ "tau": s.tau, "tau_map": map, "q_tau": render(alg, &s.q_tau) })
            })
            .collect();
        let atoms: Vec<String> = self.family.atoms.iter().map(|a| a.render_indicator(group).join("+")).collect();
        json!({
            "K": self.shift.k,
            "longest_word": self.shift.longest.as_ref().map(|w| w.to_string()),
            "W": words,
            "atoms": atoms,
            "p": render(alg, &self.p),
            "q": render(alg, &self.q),
            "J": j,
            "summands": self.summands(),
            "tau_nodes": self.tau_nodes,
            "truncation": self.truncation,
            "checks": self.checks.entries.iter().map(|e| json!({"name": e.name, "count": e.count, "passed": true})).collect::<Vec<_>>(),
            "all_passed": true,
        })
    }

    /// One node per `τ`, labeled with `q_τ`.
    pub fn to_dot(&self, alg: &Algebra) -> String {
        let mut out = String::from("digraph decomposition {\n  node [shape=box];\n");
        for (i, s) in self.survivors.iter().enumerate() {
            let tau: Vec<String> = s.tau.iter().map(|l| l.to_string()).collect();
            let label = format!("tau=({})\\nq_tau = {}", tau.join(","), render(alg, &s.q_tau));
            out.push_str(&format!("  t{i} [label=\"{}\"];\n", label.replace('"', "\\\"")));
        }
        out.push_str("}\n");
        out
    }
}

/// Builds and verifies the decomposition of `A_λ` for the given family.
pub fn decompose(alg: &Algebra, family: &RegionFamily, opts: &DecomposeOptions) -> Result<DecompositionReport> {
    let omega = alg.omega();
    let n = alg.n();
    let shift = shift_bound_capped(family, omega, opts.shift_node_cap)?;
    let k = shift.k;
    let t = opts.truncation.unwrap_or(k + 1);
    if t < k {
        return Err(Error::argument(MODULE, format!("truncation {t} is below the shift bound {k}")));
    }
    let words = enumerate_words(n, k, opts.word_cap)?;
    let p = alg.function(family.union.clone())?;
    let atoms: Vec<AlgebraElement> = family.atoms.iter().map(|a| alg.function(a.clone())).collect::<Result<_>>()?;
    let q = build_q(alg, &p, k)?;
    let (found, tau_nodes) = survivors(alg, family, &q, &words, opts.tau_node_cap)?;
    let mut log = CheckLog::default();
    let zero = AlgebraElement::zero();

    // shift bound and q
    let long_words = enumerate_words(n, t, opts.word_cap)?;
    log.run(
        "shift",
        long_words.iter().filter(|w| w.len() > k).map(|mu| {
            let x = alg.mul_gen_sums(&alg.gen_terms(&p), &[GenTerm::s(mu.clone())])?;
            let x = alg.from_gen_terms(alg.mul_gen_sums(&x, &alg.gen_terms(&p))?)?;
            Ok(expect(alg, &x, &zero, || format!("p S_{mu} p")))
        }),
    )?;
    log.run("q_projection", [Ok((!alg.is_projection(&q)?).then(|| "q is not a projection".to_string()))])?;
    log.run("q_below_p", [alg.multiply(&q, &p).map(|x| expect(alg, &x, &q, || "q p".into()))])?;
    log.run(
        "q_below_complements",
        (1..=k).map(|j| {
            let x = alg.multiply(&q, &alg.rho_k(&p, j)?)?;
            Ok(expect(alg, &x, &zero, || format!("q rho_{j}(p)")))
        }),
    )?;

    // divide1
    log.run(
        "divide1",
        words.iter().filter(|w| !w.is_empty()).map(|mu| {
            let x = alg.mul_gen_sums(&alg.gen_terms(&q), &[GenTerm::s(mu.clone())])?;
            let x = alg.from_gen_terms(alg.mul_gen_sums(&x, &alg.gen_terms(&q))?)?;
            Ok(expect(alg, &x, &zero, || format!("q S_{mu} q")))
        }),
    )?;

    // divide2
    let mut spread = AlgebraElement::zero();
    for mu in &words {
        spread = alg.add(&spread, &alg.conjugate_by_word(mu, &q)?)?;
    }
    log.run("divide2", [alg.multiply(&spread, &p).map(|x| expect(alg, &x, &p, || "sum S_mu q S_mu* p".into()))])?;

    // divide3
    log.run(
        "q_tau_projection",
        found.iter().map(|s| {
            Ok((s.q_tau.is_zero() || !alg.is_projection(&s.q_tau)?)
                .then(|| format!("q_tau for tau {:?} is not a nonzero projection", s.tau)))
        }),
    )?;
    log.run(
        "q_tau_orthogonal",
        found.iter().enumerate().flat_map(|(i, a)| {
            let zero = &zero;
            found[i + 1..].iter().map(move |b| {
                let x = alg.multiply(&a.q_tau, &b.q_tau)?;
                Ok(expect(alg, &x, zero, || format!("q_tau {:?} q_tau {:?}", a.tau, b.tau)))
            })
        }),
    )?;
    let total = alg.sum(found.iter().map(|s| &s.q_tau))?;
    log.run("q_tau_sum", [Ok(expect(alg, &total, &q, || "sum of q_tau".into()))])?;
    let conj: Vec<Vec<AlgebraElement>> = found
        .iter()
        .map(|s| words.iter().map(|mu| alg.conjugate_by_word(mu, &s.q_tau)).collect())
        .collect::<Result<_>>()?;
    log.run(
        "divide3_delta",
        found.iter().zip(&conj).flat_map(|(s, row)| {
            let atoms = &atoms;
            let p = &p;
            words.iter().zip(row).enumerate().flat_map(move |(wi, (mu, c))| {
                (0..=atoms.len()).map(move |l| {
                    let got = if l == 0 { alg.times_complement(c, p)? } else { alg.multiply(c, &atoms[l - 1])? };
                    let want = if s.tau[wi] == l { c.clone() } else { AlgebraElement::zero() };
                    Ok(expect(alg, &got, &want, || format!("S_{mu} q_tau S_{mu}* p_{l} for tau {:?}", s.tau)))
                })
            })
        }),
    )?;
    log.run(
        "generator_recovery",
        atoms.iter().enumerate().map(|(li, pl)| {
            let l = li + 1;
            let mut acc = AlgebraElement::zero();
            for (s, row) in found.iter().zip(&conj) {
                for (wi, c) in row.iter().enumerate() {
                    if s.tau[wi] == l {
                        acc = alg.add(&acc, c)?;
                    }
                }
            }
            Ok(expect(alg, &acc, pl, || format!("p_{l} from matrix units")))
        }),
    )?;

    // matrix units: (S_μ1 q_τ1 S_ν1*)(S_μ2 q_τ2 S_ν2*) reduces to the core
    // q_τ1 S_ν1* S_μ2 q_τ2 = δ δ q_τ1 once the outer isometries are stripped
    let gens: Vec<Vec<GenTerm>> = found.iter().map(|s| alg.gen_terms(&s.q_tau)).collect();
    let lefts: Vec<Vec<Vec<GenTerm>>> = gens
        .iter()
        .map(|g| long_words.iter().map(|nu| alg.mul_gen_sums(g, &[GenTerm::s_star(nu.clone())])).collect())
        .collect::<Result<_>>()?;
    let rights: Vec<Vec<Vec<GenTerm>>> = gens
        .iter()
        .map(|g| long_words.iter().map(|mu| alg.mul_gen_sums(&[GenTerm::s(mu.clone())], g)).collect())
        .collect::<Result<_>>()?;
    let mut cases = vec![];
    for (i1, s1) in found.iter().enumerate() {
        for (i2, s2) in found.iter().enumerate() {
            for (a, nu) in long_words.iter().enumerate() {
                for (b, mu) in long_words.iter().enumerate() {
                    cases.push((i1, i2, a, b, s1, s2, nu, mu));
                }
            }
        }
    }
    log.run(
        "matrix_units",
        cases.into_iter().map(|(i1, i2, a, b, s1, s2, nu, mu)| {
            let x = alg.from_gen_terms(alg.mul_gen_sums(&lefts[i1][a], &rights[i2][b])?)?;
            let want = if i1 == i2 && a == b { s1.q_tau.clone() } else { AlgebraElement::zero() };
            Ok(expect(alg, &x, &want, || format!("q_tau{:?} S_{nu}* S_{mu} q_tau{:?}", s1.tau, s2.tau)))
        }),
    )?;

    Ok(DecompositionReport {
        family: family.clone(),
        shift,
        words,
        p,
        q,
        survivors: found,
        tau_nodes,
        truncation: t,
        checks: log,
    })
}

/// `K` by direct enumeration of all words up to `max_len`; exponential, for testing.
pub fn shift_bound_brute(family: &RegionFamily, omega: &OmegaData, max_len: usize) -> Result<usize> {
    let group = omega.group();
    let u = &family.union;
    let mut k = 0;
    for w in enumerate_words(omega.n(), max_len, DEFAULT_WORD_CAP)? {
        let g = crate::words::omega_of(&w, omega)?;
        let hit = match u {
            FiniteFunction::Points(m) => m.keys().any(|a| m.keys().any(|b| group.sub(a, b) == g)),
            FiniteFunction::Steps(_) => {
                let pieces = u.pieces();
                let mut hit = false;
                for (a, b, _) in &pieces {
                    for (c, d, _) in &pieces {
                        let lo = group.sub(a, d);
                        let hi = group.sub(b, c);
                        if group.compare_real(&lo, &g)? == Ordering::Less
                            && group.compare_real(&g, &hi)? == Ordering::Less
                        {
                            hit = true;
                        }
                    }
                }
                hit
            }
        };
        if hit {
            k = k.max(w.len());
        }
    }
    Ok(k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;
    use proptest::prelude::*;

    fn setup(weights: &[i64], pts: &[i64]) -> (Algebra, RegionFamily) {
        let omega = OmegaData::over_integers(weights).unwrap();
        let group = omega.group().clone();
        let pts: Vec<GroupElement> = pts.iter().map(|&v| GroupElement::integer(v)).collect();
        (Algebra::new(omega), RegionFamily::singletons(&group, &pts).unwrap())
    }

    #[test]
    fn shift_bounds_for_small_families() {
        for (pts, k) in [(vec![0], 0), (vec![0, 1], 1), (vec![0, 1, 2], 2)] {
            let (alg, fam) = setup(&[1, 2], &pts);
            assert_eq!(shift_bound(&fam, alg.omega()).unwrap().k, k, "{pts:?}");
            assert_eq!(shift_bound_brute(&fam, alg.omega(), 6).unwrap(), k);
        }
    }

    #[test]
    fn zero_word_blocks_the_bound() {
        let omega = OmegaData::finite(
            GroupDescriptor::cyclic(2).unwrap(),
            vec![
                GroupElement::Discrete { free: vec![], torsion: vec![1] },
                GroupElement::Discrete { free: vec![], torsion: vec![1] },
            ],
        )
        .unwrap();
        let group = omega.group().clone();
        let fam = RegionFamily::singletons(&group, &[group.zero()]).unwrap();
        let err = shift_bound(&fam, &omega).unwrap_err();
        assert!(matches!(err, Error::Construction { .. }), "{err}");
    }

    #[test]
    fn two_point_family() {
        let (alg, fam) = setup(&[1, 2], &[0, 1]);
        let rep = decompose(&alg, &fam, &DecomposeOptions::default()).unwrap();
        assert_eq!(rep.k(), 1);
        assert_eq!(rep.q, parse(&alg, "chi{0,1} - S[1]·chi{0}·S*[1]").unwrap());
        assert_eq!(rep.summands(), 2);
        let taus: Vec<Vec<usize>> = rep.survivors.iter().map(|s| s.tau.clone()).collect();
        assert!(taus.contains(&vec![1, 2, 0]) && taus.contains(&vec![2, 0, 0]));
        for s in &rep.survivors {
            let want = if s.tau == [1, 2, 0] { "chi{0}" } else { "chi{1} - S[1]·chi{0}·S*[1]" };
            assert_eq!(s.q_tau, parse(&alg, want).unwrap());
        }
    }

    #[test]
    fn singleton_counts_49_relations() {
        let (alg, fam) = setup(&[1, 2], &[0]);
        let opts = DecomposeOptions { truncation: Some(2), ..Default::default() };
        let rep = decompose(&alg, &fam, &opts).unwrap();
        assert_eq!(rep.summands(), 1);
        assert_eq!(rep.survivors[0].tau, vec![1]);
        assert_eq!(rep.checks.count("matrix_units"), Some(49));
    }

    #[test]
    fn dot_has_a_node_per_tau() {
        let (alg, fam) = setup(&[1, 2], &[0, 1]);
        let rep = decompose(&alg, &fam, &DecomposeOptions::default()).unwrap();
        assert_eq!(rep.to_dot(&alg).matches("label=").count(), 2);
        assert_eq!(rep.to_json(&alg)["summands"], 2);
    }

    #[test]
    fn three_point_family() {
        let (alg, fam) = setup(&[1, 2], &[0, 1, 2]);
        let rep = decompose(&alg, &fam, &DecomposeOptions::default()).unwrap();
        assert_eq!(rep.k(), 2);
        assert!(rep.checks.total() > 0);
    }

    #[test]
    fn infinite_alphabet_matches_finite_run() {
        let group = GroupDescriptor::integers();
        let w = vec![GroupElement::integer(1), GroupElement::integer(2)];
        let inf = OmegaData::new(group.clone(), w.clone(), crate::gamma::Alphabet::InfiniteRepeating).unwrap();
        let fin = OmegaData::finite(group.clone(), w).unwrap();
        let fam = RegionFamily::singletons(&group, &[group.zero()]).unwrap();
        let a = decompose(&Algebra::new(inf), &fam, &DecomposeOptions::default()).unwrap();
        let b = decompose(&Algebra::new(fin), &fam, &DecomposeOptions::default()).unwrap();
        assert_eq!(a.summands(), b.summands());
        assert_eq!(a.k(), b.k());
    }

    #[test]
    fn real_line_interval() {
        let group = GroupDescriptor::real_sqrt2();
        let omega = OmegaData::finite(
            group.clone(),
            vec![GroupElement::real_ints(&[1, 0]), GroupElement::real_ints(&[0, 1])],
        )
        .unwrap();
        let r = FiniteFunction::interval(
            &group,
            GroupElement::real_ints(&[0, 0]),
            GroupElement::real_ints(&[2, 0]),
            Scalar::one(),
        )
        .unwrap();
        let fam = RegionFamily::new(&group, vec![r]).unwrap();
        let k = shift_bound(&fam, &omega).unwrap().k;
        assert_eq!(k, 1);
        assert_eq!(k, shift_bound_brute(&fam, &omega, 4).unwrap());
        let rep = decompose(&Algebra::new(omega), &fam, &DecomposeOptions::default()).unwrap();
        assert!(rep.summands() >= 1);
    }

    #[test]
    fn overlapping_regions_split_into_atoms() {
        let group = GroupDescriptor::integers();
        let pts = |v: &[i64]| v.iter().map(|&x| GroupElement::integer(x)).collect::<Vec<_>>();
        let fam = RegionFamily::new(
            &group,
            vec![
                FiniteFunction::indicator(&group, &pts(&[0, 1])).unwrap(),
                FiniteFunction::indicator(&group, &pts(&[1, 2])).unwrap(),
            ],
        )
        .unwrap();
        let atoms: Vec<Vec<GroupElement>> = fam.atoms().iter().map(|a| a.support_points()).collect();
        assert_eq!(atoms, vec![pts(&[0]), pts(&[1]), pts(&[2])]);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn shift_bound_matches_enumeration(
            w1 in 1i64..4, w2 in 1i64..4, pts in proptest::collection::btree_set(-2i64..3, 1..4)
        ) {
            let pts: Vec<i64> = pts.into_iter().collect();
            let (alg, fam) = setup(&[w1, w2], &pts);
            let k = shift_bound(&fam, alg.omega()).unwrap().k;
            prop_assert_eq!(k, shift_bound_brute(&fam, alg.omega(), 5).unwrap());
        }
    }
}
