//! Classification verdicts with re-checkable certificates.

use serde_json::{json, Value};

use crate::algebra::Algebra;
use crate::error::{Error, Result};
use crate::expr::render;
use crate::function::FiniteFunction;
use crate::gamma::{Alphabet, GroupDescriptor, GroupElement, OmegaData};
use crate::semigroup::{
    closure_equals_gamma, witness_to_json, ClosureCertificate, MembershipWitness, NegGenReport, SemigroupModel,
    SignPattern,
};
use crate::words::{omega_of, Word};

const MODULE: &str = "classifier";

/// Three-valued answer where the theory leaves a case undecided.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Tristate {
    Yes,
    No,
    Open,
}

impl Tristate {
    pub fn as_str(self) -> &'static str {
        match self {
            Tristate::Yes => "yes",
            Tristate::No => "no",
            Tristate::Open => "open",
        }
    }
}

/// `u = S_μ χ_{0}` for a zero word `μ`, with the three checks showing
/// `χ_{0}` is an infinite projection.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InfiniteProjectionWitness {
    pub word: Word,
    pub u: String,
    pub u_star_u_is_chi: bool,
    pub range_under_chi: bool,
    pub range_is_proper: bool,
}

impl InfiniteProjectionWitness {
    pub fn passes(&self) -> bool {
        self.u_star_u_is_chi && self.range_under_chi && self.range_is_proper
    }

    pub fn to_json(&self) -> Value {
        json!({
            "word": self.word.to_string(),
            "u": self.u,
            "u_star_u_equals_chi": self.u_star_u_is_chi,
            "chi_times_uu_star_equals_uu_star": self.range_under_chi,
            "uu_star_differs_from_chi": self.range_is_proper,
        })
    }
}

fn projection_checks(omega: &OmegaData, word: &Word) -> Result<InfiniteProjectionWitness> {
    let algebra = Algebra::new(omega.clone());
    let group = omega.group();
    let chi = algebra.function(FiniteFunction::indicator(group, &[group.zero()])?)?;
    let u = algebra.term(word.clone(), FiniteFunction::indicator(group, &[group.zero()])?, Word::empty())?;
    let us = algebra.adjoint(&u);
    let uus = algebra.multiply(&u, &us)?;
    Ok(InfiniteProjectionWitness {
        word: word.clone(),
        u: render(&algebra, &u),
        u_star_u_is_chi: algebra.multiply(&us, &u)? == chi,
        range_under_chi: algebra.multiply(&chi, &uus)? == uus,
        range_is_proper: uus != chi,
    })
}

/// Infinite projection built from a zero word, or `None` when no zero word exists.
pub fn infinite_projection_witness(omega: &OmegaData) -> Result<Option<InfiniteProjectionWitness>> {
    if !omega.group().is_discrete() {
        return Err(Error::feature(MODULE, "infinite projection witnesses need a discrete group"));
    }
    let Some(a) = SemigroupModel::new(omega)?.zero_word_exists()? else { return Ok(None) };
    let word = Word::from_counts(&a.counts);
    let w = projection_checks(omega, &word)?;
    if !w.passes() {
        return Err(Error::internal(MODULE, format!("zero word {word} does not give an infinite projection")));
    }
    Ok(Some(w))
}

/// A claim and the data that proves it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Certificate {
    /// Whether `−ω_i` lies in the closed semigroup.
    NegGenerator { report: NegGenReport, separated: bool },
    /// Closure of the weights (`extra = None`) or of `ω ∪ {−ω_i}`.
    Closure { extra: Option<usize>, certificate: ClosureCertificate },
    ZeroWord { witness: Option<MembershipWitness> },
    InfiniteProjection(InfiniteProjectionWitness),
}

fn extended(omega: &OmegaData, extra: Option<usize>) -> Result<OmegaData> {
    match extra {
        None => Ok(omega.clone()),
        Some(i) => {
            let mut w = omega.weights().to_vec();
            w.push(omega.group().neg(omega.weight(i)));
            omega.with_weights(w)
        }
    }
}

impl Certificate {
    pub fn claim(&self) -> String {
        match self {
            Certificate::NegGenerator { report, .. } => format!(
                "-omega_{} {} the closed semigroup",
                report.index,
                if report.in_closure { "lies in" } else { "is outside" }
            ),
            Certificate::Closure { extra: None, certificate } => {
                format!("closure of the weights {} Gamma", if certificate.verdict { "equals" } else { "differs from" })
            }
            Certificate::Closure { extra: Some(i), certificate } => format!(
                "closure of the weights and -omega_{i} {} Gamma",
                if certificate.verdict { "equals" } else { "differs from" }
            ),
            Certificate::ZeroWord { witness: Some(_) } => "a nonempty word has weight zero".into(),
            Certificate::ZeroWord { witness: None } => "no nonempty word has weight zero".into(),
            Certificate::InfiniteProjection(_) => "chi_{0} is an infinite projection".into(),
        }
    }

    pub fn to_json(&self, omega: &OmegaData) -> Value {
        let group = omega.group();
        let witness = match self {
            Certificate::NegGenerator { report, separated } => json!({
                "index": report.index,
                "in_closure": report.in_closure,
                "counts": report.witness.as_ref().map(|w| w.counts.clone()),
                "separated_by_functional": separated,
                "signs": report.signs.map(|s| json!({"positive": s.positive, "negative": s.negative, "zero": s.zero})),
            }),
            Certificate::Closure { extra, certificate } => {
                let mut v = certificate.to_json(group);
                v["extra_negated_index"] = json!(extra);
                v
            }
            Certificate::ZeroWord { witness } => json!({ "counts": witness.as_ref().map(|w| w.counts.clone()) }),
            Certificate::InfiniteProjection(w) => w.to_json(),
        };
        json!({ "claim": self.claim(), "witness": witness })
    }

    /// Re-derive the claim from scratch and compare.
    pub fn verify(&self, omega: &OmegaData) -> Result<bool> {
        match self {
            Certificate::NegGenerator { report, .. } => {
                let model = SemigroupModel::new(omega)?;
                let fresh = model.neg_gen_in_closure(report.index)?;
                if &fresh != report {
                    return Ok(false);
                }
                if let Some(w) = &report.witness {
                    let target = omega.group().neg(omega.weight(report.index));
                    return w.verify(omega, &target);
                }
                Ok(true)
            }
            Certificate::Closure { extra, certificate } => certificate.verify(&extended(omega, *extra)?),
            Certificate::ZeroWord { witness: Some(w) } => {
                Ok(w.total() > 0 && w.verify(omega, &omega.group().zero())?)
            }
            Certificate::ZeroWord { witness: None } => {
                Ok(SemigroupModel::new(omega)?.zero_word_exists()?.is_none())
            }
            Certificate::InfiniteProjection(w) => {
                let fresh = projection_checks(omega, &w.word)?;
                Ok(&fresh == w && w.passes() && omega.group().is_zero(&omega_of(&w.word, omega)?))
            }
        }
    }
}

/// Result of `classify`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub simple: bool,
    pub purely_infinite: Option<bool>,
    pub af_embeddable: Tristate,
    pub af_itself: Option<bool>,
    pub stably_finite: Tristate,
    pub condition_i: bool,
    pub closure_full: bool,
    pub certificates: Vec<Certificate>,
}

impl Verdict {
    pub fn to_json(&self, omega: &OmegaData) -> Value {
        json!({
            "simple": self.simple,
            "purely_infinite": self.purely_infinite,
            "af_embeddable": self.af_embeddable.as_str(),
            "af_itself": self.af_itself,
            "stably_finite": self.stably_finite.as_str(),
            "condition_i": self.condition_i,
            "closure_equals_gamma": self.closure_full,
            "kind": match omega.alphabet() { Alphabet::Finite => "O_n", Alphabet::InfiniteRepeating => "O_infinity" },
            "certificates": self.certificates.iter().map(|c| c.to_json(omega)).collect::<Vec<_>>(),
        })
    }

    pub fn verify_certificates(&self, omega: &OmegaData) -> Result<bool> {
        for c in &self.certificates {
            if !c.verify(omega)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Per-index report of `−ω_i ∉ closure`.
pub fn condition_i_report(omega: &OmegaData) -> Result<(bool, Vec<Certificate>)> {
    let model = SemigroupModel::new(omega)?;
    let mut certs = vec![];
    let mut holds = true;
    for i in 1..=omega.n() {
        let report = model.neg_gen_in_closure(i)?;
        holds &= !report.in_closure;
        let separated = !report.in_closure
            && omega.group().is_discrete()
            && model.separates(&omega.group().neg(omega.weight(i))) == Some(true);
        certs.push(Certificate::NegGenerator { report, separated });
    }
    Ok((holds, certs))
}

pub fn condition_i(omega: &OmegaData) -> Result<bool> {
    Ok(condition_i_report(omega)?.0)
}

/// Simplicity of the `O_n` crossed product, with one closure certificate per index.
pub fn simplicity_report(omega: &OmegaData) -> Result<(bool, Vec<Certificate>)> {
    let mut certs = vec![];
    let mut holds = true;
    for i in 1..=omega.n() {
        let certificate = closure_equals_gamma(&extended(omega, Some(i))?)?;
        holds &= certificate.verdict;
        certs.push(Certificate::Closure { extra: Some(i), certificate });
    }
    Ok((holds, certs))
}

pub fn simplicity(omega: &OmegaData) -> Result<bool> {
    Ok(simplicity_report(omega)?.0)
}

pub fn classify(omega: &OmegaData) -> Result<Verdict> {
    let group = omega.group();
    let closure = closure_equals_gamma(omega)?;
    let closure_full = closure.verdict;
    let (cond, mut certificates) = condition_i_report(omega)?;
    certificates.push(Certificate::Closure { extra: None, certificate: closure });

    let simple = match omega.alphabet() {
        Alphabet::InfiniteRepeating => closure_full,
        Alphabet::Finite => {
            let (s, certs) = simplicity_report(omega)?;
            certificates.extend(certs);
            s
        }
    };
    let purely_infinite = match omega.alphabet() {
        Alphabet::InfiniteRepeating => Some(closure_full),
        Alphabet::Finite if closure_full => Some(true),
        Alphabet::Finite if simple => Some(false),
        Alphabet::Finite => None,
    };

    let (af_embeddable, stably_finite, af_itself) = match group {
        GroupDescriptor::Discrete { .. } => {
            let zero = SemigroupModel::new(omega)?.zero_word_exists()?;
            certificates.push(Certificate::ZeroWord { witness: zero.clone() });
            if zero.is_some() {
                if let Some(w) = infinite_projection_witness(omega)? {
                    certificates.push(Certificate::InfiniteProjection(w));
                }
            }
            // chain: condition (i) ⇔ no zero word ⇔ AF ⇔ stably finite
            if cond != zero.is_none() {
                return Err(Error::internal(
                    MODULE,
                    format!("condition (i) = {cond} disagrees with zero-word search {zero:?}"),
                ));
            }
            let t = if cond { Tristate::Yes } else { Tristate::No };
            (t, t, Some(cond))
        }
        GroupDescriptor::RealLine(_) => {
            let signs = SignPattern::of(omega)?;
            if cond {
                (Tristate::Yes, Tristate::Yes, None)
            } else if signs.mixed() {
                (Tristate::No, Tristate::No, None)
            } else {
                // some weight is zero and the others share a sign
                (Tristate::Open, Tristate::Yes, None)
            }
        }
    };

    let verdict = Verdict {
        simple,
        purely_infinite,
        af_embeddable,
        af_itself,
        stably_finite,
        condition_i: cond,
        closure_full,
        certificates,
    };
    check_consistency(&verdict)?;
    Ok(verdict)
}

fn check_consistency(v: &Verdict) -> Result<()> {
    let fail = |m: &str| Err(Error::internal(MODULE, m.to_string()));
    if v.purely_infinite == Some(true) && !v.simple {
        return fail("purely infinite verdict on a non-simple instance");
    }
    if v.af_itself == Some(true) && v.af_embeddable != Tristate::Yes {
        return fail("AF but not AF-embeddable");
    }
    if v.purely_infinite == Some(true) && v.af_embeddable == Tristate::Yes {
        return fail("purely infinite and AF-embeddable at once");
    }
    if v.simple && (v.closure_full == v.condition_i) {
        return fail("dichotomy violated: simple instance must satisfy exactly one of closure = Gamma and condition (i)");
    }
    Ok(())
}

/// The point `−ω_i` used in per-index reports.
pub fn negated_weight(omega: &OmegaData, i: usize) -> GroupElement {
    omega.group().neg(omega.weight(i))
}

pub fn membership_json(w: &MembershipWitness) -> Value {
    witness_to_json(w)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(weights: &[i64]) -> OmegaData {
        OmegaData::over_integers(weights).unwrap()
    }

    fn real(weights: &[[i64; 2]]) -> OmegaData {
        OmegaData::finite(GroupDescriptor::real_sqrt2(), weights.iter().map(|w| GroupElement::real_ints(w)).collect())
            .unwrap()
    }

    #[test]
    fn condition_examples() {
        assert!(condition_i(&z(&[1, 2])).unwrap());
        assert!(!condition_i(&z(&[1, -1])).unwrap());
        assert!(condition_i(&real(&[[1, 0], [0, 1]])).unwrap());
    }

    #[test]
    fn simplicity_examples() {
        assert!(simplicity(&z(&[2, 3])).unwrap());
        let z2 = OmegaData::finite(GroupDescriptor::lattice(2), vec![GroupElement::free(&[1, 0]), GroupElement::free(&[0, 1])])
            .unwrap();
        assert!(!simplicity(&z2).unwrap());
        assert!(simplicity(&z(&[1, -1])).unwrap());
    }

    #[test]
    fn verdict_examples() {
        let v = classify(&z(&[1, 2])).unwrap();
        assert!(v.simple);
        assert_eq!(v.purely_infinite, Some(false));
        assert_eq!(v.af_embeddable, Tristate::Yes);
        assert_eq!(v.af_itself, Some(true));
        assert!(v.verify_certificates(&z(&[1, 2])).unwrap());

        let v = classify(&z(&[1, -1])).unwrap();
        assert!(v.simple);
        assert_eq!(v.purely_infinite, Some(true));
        assert_eq!(v.af_embeddable, Tristate::No);
        assert_eq!(v.stably_finite, Tristate::No);
        assert!(v.verify_certificates(&z(&[1, -1])).unwrap());

        let om = real(&[[1, 0], [0, -1]]);
        let v = classify(&om).unwrap();
        assert!(v.simple);
        assert_eq!(v.purely_infinite, Some(true));
        assert_eq!(v.af_itself, None);
        assert!(v.verify_certificates(&om).unwrap());
    }

    #[test]
    fn real_line_open_case() {
        let om = real(&[[0, 0], [1, 0]]);
        let v = classify(&om).unwrap();
        assert_eq!(v.af_embeddable, Tristate::Open);
        assert_eq!(v.stably_finite, Tristate::Yes);
        assert!(!v.simple);
        assert_eq!(v.purely_infinite, None);
    }

    #[test]
    fn infinite_projections() {
        let w = infinite_projection_witness(&z(&[1, -1])).unwrap().unwrap();
        assert_eq!(w.word, Word::new(vec![1, 2]));
        assert!(w.passes());
        assert_eq!(w.u, "S[1,2]·chi{0}");
        assert!(infinite_projection_witness(&z(&[1, 2])).unwrap().is_none());
        let g = GroupDescriptor::cyclic(2).unwrap();
        let one = g.discrete_from_raw(&[1]).unwrap();
        let om = OmegaData::finite(g, vec![one.clone(), one]).unwrap();
        let w = infinite_projection_witness(&om).unwrap().unwrap();
        assert_eq!(w.word.len(), 2);
        assert!(omega_of(&w.word, &om).unwrap() == om.group().zero());
    }

    #[test]
    fn infinite_alphabet_kind() {
        let om = OmegaData::new(GroupDescriptor::integers(), vec![GroupElement::integer(1)], Alphabet::InfiniteRepeating)
            .unwrap();
        let v = classify(&om).unwrap();
        assert!(!v.simple);
        assert_eq!(v.purely_infinite, Some(false));
        assert_eq!(v.af_embeddable, Tristate::Yes);
        let om = om.with_weights(vec![GroupElement::integer(1), GroupElement::integer(-1)]).unwrap();
        let v = classify(&om).unwrap();
        assert!(v.simple);
        assert_eq!(v.purely_infinite, Some(true));
    }
}
