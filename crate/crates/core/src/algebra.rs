//! Exact arithmetic in the dense *-subalgebra spanned by `S_μ f S_ν*`.
//!
//! Elements are stored as maps `(μ, ν) ↦ f`. In finite-alphabet mode the
//! relation `Σ S_i S_i* = 1` makes that presentation redundant, so every
//! element is brought to a unique form: all terms are first expanded to a
//! common level `N = max min(|μ|, |ν|)` via `S_μ f S_ν* = Σ_i S_{μi} σ_{ω_i}(f)
//! S_{νi}*`, then complete families of children are folded back into their
//! parent from the bottom up. Equality of elements is equality of maps.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::function::FiniteFunction;
use crate::gamma::{Alphabet, GroupDescriptor, GroupElement, OmegaData};
use crate::scalar::Scalar;
use crate::words::{omega_of, prefix_relation, words_of_length, PrefixRelation, Word};

const MODULE: &str = "star_algebra";

pub const DEFAULT_MAX_TERMS: usize = 1_000_000;

/// A canonical element `Σ S_μ f_{μν} S_ν*`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct AlgebraElement {
    terms: BTreeMap<(Word, Word), FiniteFunction>,
}

impl AlgebraElement {
    pub fn zero() -> Self {
        AlgebraElement::default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &BTreeMap<(Word, Word), FiniteFunction> {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Longest word appearing in any term.
    pub fn max_word_len(&self) -> usize {
        self.terms.keys().map(|(m, n)| m.len().max(n.len())).max().unwrap_or(0)
    }
}

/// A constant-coefficient word sum `Σ c_{μν} S_μ S_ν*` acting by
/// multiplication on elements.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct MultiplierWordSum {
    terms: BTreeMap<(Word, Word), Scalar>,
}

impl MultiplierWordSum {
    pub fn identity() -> Self {
        let mut terms = BTreeMap::new();
        terms.insert((Word::empty(), Word::empty()), Scalar::one());
        MultiplierWordSum { terms }
    }

    pub fn from_terms(items: impl IntoIterator<Item = ((Word, Word), Scalar)>) -> Self {
        let mut terms: BTreeMap<(Word, Word), Scalar> = BTreeMap::new();
        for (k, c) in items {
            *terms.entry(k).or_insert_with(Scalar::zero) += &c;
        }
        terms.retain(|_, c| !c.is_zero());
        MultiplierWordSum { terms }
    }

    pub fn terms(&self) -> &BTreeMap<(Word, Word), Scalar> {
        &self.terms
    }

    pub fn adjoint(&self) -> Self {
        MultiplierWordSum {
            terms: self.terms.iter().map(|((m, n), c)| ((n.clone(), m.clone()), c.conj())).collect(),
        }
    }
}

/// Middle coefficient of a general term: a constant (multiplier word) or a
/// finitely supported function.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Mid {
    Const(Scalar),
    Func(FiniteFunction),
}

impl Mid {
    fn is_zero(&self) -> bool {
        match self {
            Mid::Const(c) => c.is_zero(),
            Mid::Func(f) => f.is_zero(),
        }
    }

    fn shift(&self, gamma: &GroupElement, group: &GroupDescriptor) -> Mid {
        match self {
            Mid::Const(c) => Mid::Const(c.clone()),
            Mid::Func(f) => Mid::Func(f.shift(gamma, group)),
        }
    }

    fn mul(&self, other: &Mid, group: &GroupDescriptor) -> Result<Mid> {
        Ok(match (self, other) {
            (Mid::Const(a), Mid::Const(b)) => Mid::Const(a * b),
            (Mid::Const(c), Mid::Func(f)) | (Mid::Func(f), Mid::Const(c)) => Mid::Func(f.scale(c)),
            (Mid::Func(f), Mid::Func(g)) => Mid::Func(f.mul(g, group)?),
        })
    }

    fn add(&self, other: &Mid, group: &GroupDescriptor) -> Result<Mid> {
        match (self, other) {
            (Mid::Const(a), Mid::Const(b)) => Ok(Mid::Const(a + b)),
            (Mid::Func(f), Mid::Func(g)) => Ok(Mid::Func(f.add(g, group)?)),
            _ => Err(Error::argument(MODULE, "cannot add a constant word term to a function term")),
        }
    }

    fn scale(&self, c: &Scalar) -> Mid {
        match self {
            Mid::Const(a) => Mid::Const(c * a),
            Mid::Func(f) => Mid::Func(f.scale(c)),
        }
    }

    fn conj(&self) -> Mid {
        match self {
            Mid::Const(a) => Mid::Const(a.conj()),
            Mid::Func(f) => Mid::Func(f.conj()),
        }
    }
}

/// One formal monomial `S_μ · m · S_ν*`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenTerm {
    pub mu: Word,
    pub mid: Mid,
    pub nu: Word,
}

impl GenTerm {
    pub fn scalar(c: Scalar) -> Self {
        GenTerm { mu: Word::empty(), mid: Mid::Const(c), nu: Word::empty() }
    }

    pub fn s(mu: Word) -> Self {
        GenTerm { mu, mid: Mid::Const(Scalar::one()), nu: Word::empty() }
    }

    pub fn s_star(nu: Word) -> Self {
        GenTerm { mu: Word::empty(), mid: Mid::Const(Scalar::one()), nu }
    }

    pub fn func(f: FiniteFunction) -> Self {
        GenTerm { mu: Word::empty(), mid: Mid::Func(f), nu: Word::empty() }
    }
}

fn level(k: &(Word, Word)) -> usize {
    k.0.len().min(k.1.len())
}

/// Shared read-only context: group, weights and resource caps.
#[derive(Clone, Debug)]
pub struct Algebra {
    omega: OmegaData,
    max_terms: usize,
}

impl Algebra {
    pub fn new(omega: OmegaData) -> Self {
        Algebra { omega, max_terms: DEFAULT_MAX_TERMS }
    }

    pub fn with_max_terms(mut self, max_terms: usize) -> Self {
        self.max_terms = max_terms;
        self
    }

    pub fn omega(&self) -> &OmegaData {
        &self.omega
    }

    pub fn group(&self) -> &GroupDescriptor {
        self.omega.group()
    }

    pub fn max_terms(&self) -> usize {
        self.max_terms
    }

    pub fn n(&self) -> usize {
        self.omega.n()
    }

    fn finite_alphabet(&self) -> bool {
        self.omega.alphabet() == Alphabet::Finite
    }

    fn weight_of(&self, w: &Word) -> Result<GroupElement> {
        omega_of(w, &self.omega)
    }

    fn check_cap(&self, count: usize) -> Result<()> {
        if count > self.max_terms {
            Err(Error::resource(MODULE, format!("term count {count} exceeds cap {}", self.max_terms)))
        } else {
            Ok(())
        }
    }

    // ---- canonical form ----------------------------------------------------

    fn canonical_mid(&self, raw: BTreeMap<(Word, Word), Mid>) -> Result<BTreeMap<(Word, Word), Mid>> {
        let group = self.group();
        let mut terms: BTreeMap<(Word, Word), Mid> = raw.into_iter().filter(|(_, m)| !m.is_zero()).collect();
        if terms.is_empty() || !self.finite_alphabet() {
            return Ok(terms);
        }
        let n = self.n();
        let top = terms.keys().map(level).max().unwrap_or(0);
        let mut projected = 0usize;
        for k in terms.keys() {
            let extra = (n as u128).saturating_pow((top - level(k)) as u32);
            projected = projected.saturating_add(usize::try_from(extra).unwrap_or(usize::MAX));
        }
        self.check_cap(projected)?;

        let weights: Vec<GroupElement> = self.omega.weights().to_vec();
        let mut expanded: BTreeMap<(Word, Word), Mid> = BTreeMap::new();
        let mut stack: Vec<((Word, Word), Mid)> = std::mem::take(&mut terms).into_iter().collect();
        while let Some(((mu, nu), m)) = stack.pop() {
            if mu.len().min(nu.len()) < top {
                for (i, w) in weights.iter().enumerate() {
                    stack.push(((mu.push(i + 1), nu.push(i + 1)), m.shift(w, group)));
                }
                continue;
            }
            match expanded.remove(&(mu.clone(), nu.clone())) {
                Some(prev) => {
                    let sum = prev.add(&m, group)?;
                    if !sum.is_zero() {
                        expanded.insert((mu, nu), sum);
                    }
                }
                None => {
                    expanded.insert((mu, nu), m);
                }
            }
        }

        let mut current = expanded;
        let mut lev = top;
        while lev > 0 {
            let mut groups: BTreeMap<(Word, Word), Vec<(usize, (Word, Word))>> = BTreeMap::new();
            for k in current.keys() {
                if level(k) != lev {
                    continue;
                }
                let (Some((pm, a)), Some((pn, b))) = (k.0.split_last(), k.1.split_last()) else { continue };
                if a == b {
                    groups.entry((pm, pn)).or_default().push((a, k.clone()));
                }
            }
            let mut contracted = false;
            for (parent, children) in groups {
                if children.len() != n {
                    continue;
                }
                let neg: Vec<GroupElement> = weights.iter().map(|w| group.neg(w)).collect();
                let base = current[&children[0].1].shift(&neg[children[0].0 - 1], group);
                let uniform = children[1..]
                    .iter()
                    .all(|(letter, key)| current[key].shift(&neg[letter - 1], group) == base);
                if uniform {
                    for (_, key) in &children {
                        current.remove(key);
                    }
                    current.insert(parent, base);
                    contracted = true;
                }
            }
            if !contracted {
                break;
            }
            lev -= 1;
        }
        Ok(current)
    }

    fn canonicalize(&self, raw: BTreeMap<(Word, Word), FiniteFunction>) -> Result<AlgebraElement> {
        let mids = raw.into_iter().map(|(k, f)| (k, Mid::Func(f))).collect();
        let out = self.canonical_mid(mids)?;
        self.check_cap(out.len())?;
        Ok(AlgebraElement {
            terms: out
                .into_iter()
                .map(|(k, m)| match m {
                    Mid::Func(f) => (k, f),
                    Mid::Const(_) => unreachable!("function terms stay function terms"),
                })
                .collect(),
        })
    }

    /// Canonical form of a multiplier word sum.
    pub fn canonical_multiplier(&self, u: &MultiplierWordSum) -> Result<MultiplierWordSum> {
        let mids = u.terms.iter().map(|(k, c)| (k.clone(), Mid::Const(c.clone()))).collect();
        let out = self.canonical_mid(mids)?;
        Ok(MultiplierWordSum {
            terms: out
                .into_iter()
                .map(|(k, m)| match m {
                    Mid::Const(c) => (k, c),
                    Mid::Func(_) => unreachable!("constant terms stay constant"),
                })
                .collect(),
        })
    }

    fn check_words(&self, words: &[&Word]) -> Result<()> {
        let n = self.n();
        for w in words {
            if w.max_letter() > n {
                return Err(Error::argument(MODULE, format!("word {w} uses a letter beyond {n}")));
            }
        }
        Ok(())
    }

    /// Sum of terms `S_μ f S_ν*`, canonicalized.
    pub fn from_terms(&self, items: impl IntoIterator<Item = (Word, FiniteFunction, Word)>) -> Result<AlgebraElement> {
        let group = self.group();
        let mut raw: BTreeMap<(Word, Word), FiniteFunction> = BTreeMap::new();
        for (mu, f, nu) in items {
            self.check_words(&[&mu, &nu])?;
            let key = (mu, nu);
            let next = match raw.remove(&key) {
                Some(prev) => prev.add(&f, group)?,
                None => f,
            };
            raw.insert(key, next);
        }
        self.canonicalize(raw)
    }

    pub fn term(&self, mu: Word, f: FiniteFunction, nu: Word) -> Result<AlgebraElement> {
        self.from_terms([(mu, f, nu)])
    }

    pub fn function(&self, f: FiniteFunction) -> Result<AlgebraElement> {
        self.term(Word::empty(), f, Word::empty())
    }

    /// `χ_{points}` as an element.
    pub fn chi(&self, points: &[GroupElement]) -> Result<AlgebraElement> {
        self.function(FiniteFunction::indicator(self.group(), points)?)
    }

    // ---- term calculus -------------------------------------------------------

    /// `(S_μ a S_ν*)(S_α b S_β*)`.
    pub fn mul_gen(&self, x: &GenTerm, y: &GenTerm) -> Result<Option<GenTerm>> {
        let group = self.group();
        match prefix_relation(&x.nu, &y.mu) {
            PrefixRelation::Orthogonal => Ok(None),
            PrefixRelation::LeftDivides(rho) => {
                let shifted = x.mid.shift(&self.weight_of(&rho)?, group);
                let mid = shifted.mul(&y.mid, group)?;
                Ok((!mid.is_zero()).then(|| GenTerm { mu: x.mu.concat(&rho), mid, nu: y.nu.clone() }))
            }
            PrefixRelation::RightDivides(rho) => {
                let shifted = y.mid.shift(&self.weight_of(&rho)?, group);
                let mid = x.mid.mul(&shifted, group)?;
                Ok((!mid.is_zero()).then(|| GenTerm { mu: x.mu.clone(), mid, nu: y.nu.concat(&rho) }))
            }
        }
    }

    pub fn gen_terms(&self, x: &AlgebraElement) -> Vec<GenTerm> {
        x.terms
            .iter()
            .map(|((mu, nu), f)| GenTerm { mu: mu.clone(), mid: Mid::Func(f.clone()), nu: nu.clone() })
            .collect()
    }

    fn multiplier_terms(&self, u: &MultiplierWordSum) -> Vec<GenTerm> {
        u.terms
            .iter()
            .map(|((mu, nu), c)| GenTerm { mu: mu.clone(), mid: Mid::Const(c.clone()), nu: nu.clone() })
            .collect()
    }

    /// Product of two formal sums, term by term.
    pub fn mul_gen_sums(&self, xs: &[GenTerm], ys: &[GenTerm]) -> Result<Vec<GenTerm>> {
        self.check_cap(xs.len().saturating_mul(ys.len()))?;
        let mut out = vec![];
        for x in xs {
            for y in ys {
                if let Some(t) = self.mul_gen(x, y)? {
                    out.push(t);
                }
            }
        }
        Ok(out)
    }

    /// Collect function terms into a canonical element; any constant word
    /// term left over is an argument error.
    pub fn from_gen_terms(&self, terms: Vec<GenTerm>) -> Result<AlgebraElement> {
        let group = self.group();
        let mut raw: BTreeMap<(Word, Word), FiniteFunction> = BTreeMap::new();
        for t in terms {
            self.check_words(&[&t.mu, &t.nu])?;
            match t.mid {
                Mid::Func(f) => {
                    let key = (t.mu, t.nu);
                    let next = match raw.remove(&key) {
                        Some(prev) => prev.add(&f, group)?,
                        None => f,
                    };
                    raw.insert(key, next);
                }
                Mid::Const(c) if c.is_zero() => {}
                Mid::Const(_) => {
                    return Err(Error::argument(
                        MODULE,
                        format!(
                            "term S{}·S*{} has no function factor and is not in the algebra",
                            t.mu, t.nu
                        ),
                    ))
                }
            }
        }
        self.canonicalize(raw)
    }

    // ---- operations ----------------------------------------------------------

    pub fn multiply(&self, x: &AlgebraElement, y: &AlgebraElement) -> Result<AlgebraElement> {
        let terms = self.mul_gen_sums(&self.gen_terms(x), &self.gen_terms(y))?;
        self.from_gen_terms(terms)
    }

    pub fn add(&self, x: &AlgebraElement, y: &AlgebraElement) -> Result<AlgebraElement> {
        let mut terms = self.gen_terms(x);
        terms.extend(self.gen_terms(y));
        self.from_gen_terms(terms)
    }

    pub fn sub(&self, x: &AlgebraElement, y: &AlgebraElement) -> Result<AlgebraElement> {
        self.add(x, &self.scale(y, &Scalar::from_int(-1)))
    }

    pub fn sum<'a>(&self, xs: impl IntoIterator<Item = &'a AlgebraElement>) -> Result<AlgebraElement> {
        let mut terms = vec![];
        for x in xs {
            terms.extend(self.gen_terms(x));
        }
        self.from_gen_terms(terms)
    }

    pub fn scale(&self, x: &AlgebraElement, c: &Scalar) -> AlgebraElement {
        if c.is_zero() {
            return AlgebraElement::zero();
        }
        AlgebraElement { terms: x.terms.iter().map(|(k, f)| (k.clone(), f.scale(c))).collect() }
    }

    /// `(S_μ f S_ν*)* = S_ν f̄ S_μ*`; the canonical form is symmetric.
    pub fn adjoint(&self, x: &AlgebraElement) -> AlgebraElement {
        AlgebraElement { terms: x.terms.iter().map(|((m, n), f)| ((n.clone(), m.clone()), f.conj())).collect() }
    }

    /// The gauge expectation `E`: keeps the terms with `|μ| = |ν|`.
    pub fn gauge_expectation(&self, x: &AlgebraElement) -> AlgebraElement {
        AlgebraElement {
            terms: x.terms.iter().filter(|((m, n), _)| m.len() == n.len()).map(|(k, f)| (k.clone(), f.clone())).collect(),
        }
    }

    /// `ρ_k(x) = Σ_{|μ|=k} S_μ x S_μ*`, over the listed letters in `O_∞` mode.
    pub fn rho_k(&self, x: &AlgebraElement, k: usize) -> Result<AlgebraElement> {
        if k == 0 {
            return Ok(x.clone());
        }
        let words = words_of_length(self.n(), k, self.max_terms)?;
        self.check_cap(words.len().saturating_mul(x.len()))?;
        let mut raw = BTreeMap::new();
        for mu in &words {
            for ((a, b), f) in &x.terms {
                raw.insert((mu.concat(a), mu.concat(b)), f.clone());
            }
        }
        self.canonicalize(raw)
    }

    /// `S_μ x S_μ*`.
    pub fn conjugate_by_word(&self, mu: &Word, x: &AlgebraElement) -> Result<AlgebraElement> {
        self.check_words(&[mu])?;
        let raw = x.terms.iter().map(|((a, b), f)| ((mu.concat(a), mu.concat(b)), f.clone())).collect();
        self.canonicalize(raw)
    }

    /// `x · f` for a function `f`.
    pub fn times_function(&self, x: &AlgebraElement, f: &FiniteFunction) -> Result<AlgebraElement> {
        let t = self.mul_gen_sums(&self.gen_terms(x), &[GenTerm::func(f.clone())])?;
        self.from_gen_terms(t)
    }

    /// `σ_γ` on elements: `S_μ f S_ν* ↦ S_μ σ_γ(f) S_ν*`.
    pub fn sigma(&self, gamma: &GroupElement, x: &AlgebraElement) -> Result<AlgebraElement> {
        self.group().validate(gamma)?;
        let group = self.group();
        Ok(AlgebraElement { terms: x.terms.iter().map(|(k, f)| (k.clone(), f.shift(gamma, group))).collect() })
    }

    /// `u* x u`.
    pub fn multiplier_conjugate(&self, u: &MultiplierWordSum, x: &AlgebraElement) -> Result<AlgebraElement> {
        let ut = self.multiplier_terms(u);
        let us = self.multiplier_terms(&u.adjoint());
        let left = self.mul_gen_sums(&us, &self.gen_terms(x))?;
        let both = self.mul_gen_sums(&left, &ut)?;
        self.from_gen_terms(both)
    }

    /// `u x` and `x u` for a multiplier word sum.
    pub fn multiplier_left(&self, u: &MultiplierWordSum, x: &AlgebraElement) -> Result<AlgebraElement> {
        let t = self.mul_gen_sums(&self.multiplier_terms(u), &self.gen_terms(x))?;
        self.from_gen_terms(t)
    }

    pub fn multiplier_right(&self, x: &AlgebraElement, u: &MultiplierWordSum) -> Result<AlgebraElement> {
        let t = self.mul_gen_sums(&self.gen_terms(x), &self.multiplier_terms(u))?;
        self.from_gen_terms(t)
    }

    /// Product of two multiplier word sums, canonicalized.
    pub fn multiplier_product(&self, u: &MultiplierWordSum, v: &MultiplierWordSum) -> Result<MultiplierWordSum> {
        let t = self.mul_gen_sums(&self.multiplier_terms(u), &self.multiplier_terms(v))?;
        let items = t.into_iter().map(|g| match g.mid {
            Mid::Const(c) => ((g.mu, g.nu), c),
            Mid::Func(_) => unreachable!("constant products stay constant"),
        });
        self.canonical_multiplier(&MultiplierWordSum::from_terms(items))
    }

    pub fn is_self_adjoint(&self, x: &AlgebraElement) -> bool {
        &self.adjoint(x) == x
    }

    pub fn is_projection(&self, x: &AlgebraElement) -> Result<bool> {
        Ok(self.is_self_adjoint(x) && &self.multiply(x, x)? == x)
    }

    pub fn is_partial_isometry(&self, x: &AlgebraElement) -> Result<bool> {
        let xxs = self.multiply(x, &self.adjoint(x))?;
        Ok(&self.multiply(&xxs, x)? == x)
    }

    pub fn commute(&self, x: &AlgebraElement, y: &AlgebraElement) -> Result<bool> {
        Ok(self.multiply(x, y)? == self.multiply(y, x)?)
    }

    /// `x − x p`, i.e. `x(1 − p)` without needing a unit.
    pub fn times_complement(&self, x: &AlgebraElement, p: &AlgebraElement) -> Result<AlgebraElement> {
        self.sub(x, &self.multiply(x, p)?)
    }

    /// `x − p x`, i.e. `(1 − p)x`.
    pub fn complement_times(&self, p: &AlgebraElement, x: &AlgebraElement) -> Result<AlgebraElement> {
        self.sub(x, &self.multiply(p, x)?)
    }
}

/// Scalar multiple of a generalized term.
pub fn scale_gen(t: &GenTerm, c: &Scalar) -> GenTerm {
    GenTerm { mu: t.mu.clone(), mid: t.mid.scale(c), nu: t.nu.clone() }
}

/// Adjoint of a generalized term.
pub fn adjoint_gen(t: &GenTerm) -> GenTerm {
    GenTerm { mu: t.nu.clone(), mid: t.mid.conj(), nu: t.mu.clone() }
}
