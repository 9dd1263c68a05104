//! Words over the generator alphabet, their weights, prefix structure and
//! mutually orthogonal families.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};
use crate::gamma::{GroupDescriptor, GroupElement, OmegaData};
use crate::semigroup::{for_each_composition, SemigroupModel};

const MODULE: &str = "word_combinatorics";

/// Default cap on the number of words a single enumeration may produce.
pub const DEFAULT_WORD_CAP: usize = 1_000_000;

/// A finite word `μ = (i_1, …, i_k)` with 1-based letters.
///
/// Words order by length first, then lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Word(Vec<usize>);

impl Word {
    pub fn empty() -> Self {
        Word(vec![])
    }

    pub fn new(letters: Vec<usize>) -> Self {
        assert!(letters.iter().all(|&l| l >= 1), "letters are 1-based");
        Word(letters)
    }

    pub fn letter(i: usize) -> Self {
        Word::new(vec![i])
    }

    /// The word using letter `i` exactly `counts[i-1]` times, in index order.
    pub fn from_counts(counts: &[u64]) -> Self {
        let mut letters = vec![];
        for (i, &c) in counts.iter().enumerate() {
            letters.extend(std::iter::repeat_n(i + 1, c as usize));
        }
        Word(letters)
    }

    pub fn letters(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `μν`.
    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn push(&self, letter: usize) -> Word {
        let mut v = self.0.clone();
        v.push(letter);
        Word(v)
    }

    /// Split off the last letter.
    pub fn split_last(&self) -> Option<(Word, usize)> {
        let (&last, rest) = self.0.split_last()?;
        Some((Word(rest.to_vec()), last))
    }

    pub fn max_letter(&self) -> usize {
        self.0.iter().copied().max().unwrap_or(0)
    }

    /// Letter-count vector of length `n`.
    pub fn counts(&self, n: usize) -> Vec<u64> {
        let mut c = vec![0u64; n];
        for &l in &self.0 {
            c[l - 1] += 1;
        }
        c
    }

    /// Parse `"[1,2,2]"` or `"[]"`.
    pub fn parse(text: &str) -> Result<Word> {
        let s = text.trim();
        let inner = s
            .strip_prefix('[')
            .and_then(|r| r.strip_suffix(']'))
            .ok_or_else(|| Error::argument(MODULE, format!("word must be bracketed: {text:?}")))?;
        if inner.trim().is_empty() {
            return Ok(Word::empty());
        }
        let letters = inner
            .split(',')
            .map(|p| match p.trim().parse::<usize>() {
                Ok(l) if l >= 1 => Ok(l),
                _ => Err(Error::argument(MODULE, format!("bad letter {p:?} in {text:?}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Word(letters))
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(usize::to_string).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

impl From<Vec<usize>> for Word {
    fn from(v: Vec<usize>) -> Self {
        Word::new(v)
    }
}

/// How `S_μ* S_ν` reduces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PrefixRelation {
    /// `ν = μρ`, so `S_μ* S_ν = S_ρ`.
    LeftDivides(Word),
    /// `μ = νρ`, so `S_μ* S_ν = S_ρ*`.
    RightDivides(Word),
    /// Neither is a prefix of the other, so `S_μ* S_ν = 0`.
    Orthogonal,
}

pub fn prefix_relation(mu: &Word, nu: &Word) -> PrefixRelation {
    let k = mu.len().min(nu.len());
    if mu.0[..k] != nu.0[..k] {
        return PrefixRelation::Orthogonal;
    }
    if mu.len() <= nu.len() {
        PrefixRelation::LeftDivides(Word(nu.0[k..].to_vec()))
    } else {
        PrefixRelation::RightDivides(Word(mu.0[k..].to_vec()))
    }
}

fn check_letters(mu: &Word, omega: &OmegaData) -> Result<()> {
    let n = omega.n();
    if mu.max_letter() > n {
        return Err(Error::argument(MODULE, format!("word {mu} uses a letter beyond {n}")));
    }
    Ok(())
}

/// `ω_μ = Σ ω_{i_j}`.
pub fn omega_of(mu: &Word, omega: &OmegaData) -> Result<GroupElement> {
    check_letters(mu, omega)?;
    let group = omega.group();
    Ok(mu.0.iter().fold(group.zero(), |acc, &l| group.add(&acc, omega.weight(l))))
}

/// All words of length exactly `k`, lexicographic.
pub fn words_of_length(n: usize, k: usize, cap: usize) -> Result<Vec<Word>> {
    let count = (n as u128).checked_pow(k as u32).unwrap_or(u128::MAX);
    if count > cap as u128 {
        return Err(Error::resource(MODULE, format!("{n}^{k} words exceed cap {cap}")));
    }
    let mut out = vec![Word::empty()];
    for _ in 0..k {
        out = out.iter().flat_map(|w| (1..=n).map(move |l| w.push(l))).collect();
    }
    Ok(out)
}

/// All words of length at most `max_len`, in length-then-lexicographic order.
pub fn enumerate_words(n: usize, max_len: usize, cap: usize) -> Result<Vec<Word>> {
    if n == 0 {
        return Err(Error::argument(MODULE, "alphabet must be nonempty"));
    }
    let mut total: u128 = 0;
    let mut layer: u128 = 1;
    for _ in 0..=max_len {
        total = total.saturating_add(layer);
        layer = layer.saturating_mul(n as u128);
    }
    if total > cap as u128 {
        return Err(Error::resource(MODULE, format!("{total} words of length ≤ {max_len} exceed cap {cap}")));
    }
    let mut out = vec![];
    for k in 0..=max_len {
        out.extend(words_of_length(n, k, cap)?);
    }
    Ok(out)
}

/// Where the ω-value of a family member must land.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FamilyTarget {
    /// One of these exact points (tried in order).
    Points(Vec<GroupElement>),
    /// The half-open real interval `[lo, hi)`.
    Interval(GroupElement, GroupElement),
}

impl FamilyTarget {
    pub fn contains(&self, group: &GroupDescriptor, g: &GroupElement) -> Result<bool> {
        match self {
            FamilyTarget::Points(ps) => Ok(ps.contains(g)),
            FamilyTarget::Interval(lo, hi) => Ok(group.compare_real(g, lo)? != Ordering::Less
                && group.compare_real(g, hi)? == Ordering::Less),
        }
    }
}

/// The `k` lexicographically first words of length `⌈log_n k⌉`.
pub fn stems(n: usize, k: usize) -> Result<Vec<Word>> {
    let mut len = 0usize;
    let mut size = 1usize;
    while size < k {
        size = size.saturating_mul(n);
        len += 1;
    }
    let mut all = words_of_length(n, len, DEFAULT_WORD_CAP.max(k))?;
    all.truncate(k);
    Ok(all)
}

/// Largest total count tried when searching a suffix into a real interval.
const INTERVAL_SEARCH_TOTAL: u64 = 64;

fn suffix_for(
    model: &SemigroupModel,
    omega: &OmegaData,
    stem_value: &GroupElement,
    target: &FamilyTarget,
) -> Result<Option<Word>> {
    let group = omega.group();
    match target {
        FamilyTarget::Points(ps) => {
            for p in ps {
                if let Some(w) = model.member(&group.sub(p, stem_value))? {
                    return Ok(Some(Word::from_counts(&w.counts)));
                }
            }
            Ok(None)
        }
        FamilyTarget::Interval(..) => {
            let n = omega.n();
            let mut buf = vec![0u64; n];
            for total in 0..=INTERVAL_SEARCH_TOTAL {
                let mut err = None;
                let mut found = None;
                for_each_composition(total, n, &mut buf, &mut |a| {
                    let v = match omega.combine(a) {
                        Ok(v) => group.add(stem_value, &v),
                        Err(e) => {
                            err = Some(e);
                            return Some(false);
                        }
                    };
                    match target.contains(group, &v) {
                        Ok(true) => {
                            found = Some(a.to_vec());
                            Some(true)
                        }
                        Ok(false) => None,
                        Err(e) => {
                            err = Some(e);
                            Some(false)
                        }
                    }
                });
                if let Some(e) = err {
                    return Err(e);
                }
                if let Some(a) = found {
                    return Ok(Some(Word::from_counts(&a)));
                }
            }
            Ok(None)
        }
    }
}

/// Pairwise orthogonal words `μ_k = ν_k ν_k'` whose ω-values meet the
/// per-word targets.
pub fn orthogonal_family_with_targets(omega: &OmegaData, targets: &[FamilyTarget]) -> Result<Vec<Word>> {
    let k = targets.len();
    let model = SemigroupModel::new(omega)?;
    let group = omega.group();
    let mut out = vec![];
    for (stem, target) in stems(omega.n(), k)?.into_iter().zip(targets) {
        let sv = omega_of(&stem, omega)?;
        let suffix = suffix_for(&model, omega, &sv, target)?.ok_or_else(|| {
            Error::construction(
                MODULE,
                format!("no correction suffix after stem {stem} (stem weight {sv}) reaches target {target:?}"),
            )
        })?;
        out.push(stem.concat(&suffix));
    }
    for (i, mu) in out.iter().enumerate() {
        if !targets[i].contains(group, &omega_of(mu, omega)?)? {
            return Err(Error::internal(MODULE, format!("family word {mu} misses its target")));
        }
        for nu in &out[i + 1..] {
            if prefix_relation(mu, nu) != PrefixRelation::Orthogonal {
                return Err(Error::internal(MODULE, format!("family words {mu} and {nu} are not orthogonal")));
            }
        }
    }
    Ok(out)
}

/// `K` pairwise orthogonal words with ω-values in `target`.
pub fn orthogonal_family(omega: &OmegaData, k: usize, target: &FamilyTarget) -> Result<Vec<Word>> {
    orthogonal_family_with_targets(omega, &vec![target.clone(); k])
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;
    use proptest::prelude::*;

    fn w(v: &[usize]) -> Word {
        Word::new(v.to_vec())
    }

    #[test]
    fn omega_values() {
        let om = OmegaData::over_integers(&[1, 2]).unwrap();
        assert_eq!(omega_of(&Word::empty(), &om).unwrap(), GroupElement::integer(0));
        assert_eq!(omega_of(&w(&[1, 2, 2]), &om).unwrap(), GroupElement::integer(5));
        assert!(omega_of(&w(&[3]), &om).is_err());
        let g = GroupDescriptor::lattice(2);
        let om = OmegaData::finite(g, vec![GroupElement::free(&[1, 0]), GroupElement::free(&[0, 1])]).unwrap();
        assert_eq!(omega_of(&w(&[2, 1]), &om).unwrap(), GroupElement::free(&[1, 1]));
    }

    #[test]
    fn prefix_cases() {
        assert_eq!(prefix_relation(&w(&[1]), &w(&[1, 2])), PrefixRelation::LeftDivides(w(&[2])));
        assert_eq!(prefix_relation(&w(&[1, 2]), &w(&[2])), PrefixRelation::Orthogonal);
        assert_eq!(prefix_relation(&w(&[1, 2]), &w(&[1, 2])), PrefixRelation::LeftDivides(Word::empty()));
        assert_eq!(prefix_relation(&w(&[1, 2, 1]), &w(&[1])), PrefixRelation::RightDivides(w(&[2, 1])));
    }

    #[test]
    fn enumeration() {
        assert_eq!(enumerate_words(2, 0, 100).unwrap(), vec![Word::empty()]);
        assert_eq!(enumerate_words(2, 1, 100).unwrap(), vec![Word::empty(), w(&[1]), w(&[2])]);
        let all = enumerate_words(2, 2, 100).unwrap();
        assert_eq!(all.len(), 7);
        assert!(all.windows(2).all(|p| p[0] < p[1]));
        assert!(enumerate_words(2, 20, 1000).is_err());
    }

    #[test]
    fn render_and_parse() {
        assert_eq!(w(&[1, 2, 2]).to_string(), "[1,2,2]");
        assert_eq!(Word::empty().to_string(), "[]");
        assert_eq!(Word::parse(" [1, 2] ").unwrap(), w(&[1, 2]));
        assert!(Word::parse("[0]").is_err());
    }

    #[test]
    fn families() {
        let om = OmegaData::over_integers(&[1, -1]).unwrap();
        let zero = FamilyTarget::Points(vec![GroupElement::integer(0)]);
        assert_eq!(orthogonal_family(&om, 2, &zero).unwrap(), vec![w(&[1, 2]), w(&[2, 1])]);

        let g = GroupDescriptor::cyclic(3).unwrap();
        let one = g.discrete_from_raw(&[1]).unwrap();
        let om3 = OmegaData::finite(g.clone(), vec![one.clone(), one.clone()]).unwrap();
        let fam = orthogonal_family(&om3, 2, &FamilyTarget::Points(vec![g.zero()])).unwrap();
        assert_eq!(fam.len(), 2);
        for mu in &fam {
            assert!(g.is_zero(&omega_of(mu, &om3).unwrap()));
        }

        let om = OmegaData::over_integers(&[1, 2]).unwrap();
        let fam = orthogonal_family(&om, 1, &FamilyTarget::Points(vec![GroupElement::integer(1)])).unwrap();
        assert_eq!(fam, vec![w(&[1])]);
        let err = orthogonal_family(&om, 2, &FamilyTarget::Points(vec![GroupElement::integer(0)])).unwrap_err();
        assert!(matches!(err, Error::Construction { .. }));
    }

    #[test]
    fn interval_family_on_the_line() {
        let g = GroupDescriptor::real_sqrt2();
        let om = OmegaData::finite(g.clone(), vec![GroupElement::real_ints(&[1, 0]), GroupElement::real_ints(&[0, -1])])
            .unwrap();
        // [−1/10, 1/10): needs a·1 − b·√2 close to 0 after the stem
        let tenth = BigRational::new(1.into(), 10.into());
        let target = FamilyTarget::Interval(
            GroupElement::real(vec![-tenth.clone(), BigRational::from_integer(0.into())]),
            GroupElement::real(vec![tenth, BigRational::from_integer(0.into())]),
        );
        let fam = orthogonal_family(&om, 2, &target).unwrap();
        for mu in &fam {
            assert!(target.contains(&g, &omega_of(mu, &om).unwrap()).unwrap());
        }
    }

    fn word_strategy() -> impl Strategy<Value = Word> {
        prop::collection::vec(1usize..=3, 0..6).prop_map(Word::new)
    }

    proptest! {
        #[test]
        fn prefix_of_concatenation(mu in word_strategy(), rho in word_strategy()) {
            prop_assert_eq!(prefix_relation(&mu, &mu.concat(&rho)), PrefixRelation::LeftDivides(rho));
        }

        #[test]
        fn omega_is_additive(mu in word_strategy(), nu in word_strategy()) {
            let om = OmegaData::over_integers(&[2, -3, 5]).unwrap();
            let g = om.group();
            prop_assert_eq!(
                omega_of(&mu.concat(&nu), &om).unwrap(),
                g.add(&omega_of(&mu, &om).unwrap(), &omega_of(&nu, &om).unwrap())
            );
            prop_assert_eq!(omega_of(&mu, &om).unwrap(), om.combine(&mu.counts(3)).unwrap());
        }
    }
}
