//! Scaling elements for discrete `Γ` whose weights generate all of `Γ` as a
//! semigroup.
//!
//! Each point `γ` of `X ∪ {γ0}` gets a word `μ_γ` with `ω_{μ_γ} = −γ`; the
//! words are made pairwise orthogonal by distinct stems. With `f_γ = χ_γ` on
//! `X` and `f_{γ0} = ¼χ_{γ0}` the element `x = Σ S_{μ_γ} f_γ^{1/2}` satisfies
//! `(x*x)(xx*) = xx*` and `x*x ≠ xx*`.

use serde_json::{json, Value};

use crate::algebra::{Algebra, AlgebraElement};
use crate::error::{Error, Result};
use crate::expr::render;
use crate::function::FiniteFunction;
use crate::gamma::{GroupElement, OmegaData};
use crate::scalar::Scalar;
use crate::semigroup::closure_equals_gamma;
use crate::words::{omega_of, orthogonal_family_with_targets, prefix_relation, FamilyTarget, PrefixRelation, Word};

const MODULE: &str = "scaling_constructor";

/// A pair `(f_k, μ_k)` of the partition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartitionPair {
    pub point: GroupElement,
    pub f: FiniteFunction,
    pub word: Word,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartitionData {
    pub x_set: Vec<GroupElement>,
    pub gamma0: GroupElement,
    pub pairs: Vec<PartitionPair>,
}

/// The four partition conditions, each evaluated exactly.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartitionChecks {
    pub orthogonal: bool,
    pub sums_to_one_on_x: bool,
    pub gamma0_value_proper: bool,
    pub shifted_support_in_x: bool,
}

impl PartitionChecks {
    pub fn all(&self) -> bool {
        self.orthogonal && self.sums_to_one_on_x && self.gamma0_value_proper && self.shifted_support_in_x
    }
}

impl PartitionData {
    pub fn check(&self, omega: &OmegaData) -> Result<PartitionChecks> {
        let group = omega.group();
        let mut orthogonal = true;
        for (i, a) in self.pairs.iter().enumerate() {
            for b in &self.pairs[i + 1..] {
                orthogonal &= prefix_relation(&a.word, &b.word) == PrefixRelation::Orthogonal;
            }
        }
        let total = |g: &GroupElement| -> Result<Scalar> {
            let mut s = Scalar::zero();
            for p in &self.pairs {
                s += &p.f.eval(group, g)?;
            }
            Ok(s)
        };
        let mut sums_to_one_on_x = true;
        for g in &self.x_set {
            sums_to_one_on_x &= total(g)? == Scalar::one();
        }
        let v = total(&self.gamma0)?;
        let gamma0_value_proper = !v.is_zero() && v != Scalar::one();
        let mut shifted_support_in_x = true;
        for p in &self.pairs {
            let w = omega_of(&p.word, omega)?;
            for s in p.f.support_points() {
                shifted_support_in_x &= self.x_set.contains(&group.add(&s, &w));
            }
        }
        Ok(PartitionChecks { orthogonal, sums_to_one_on_x, gamma0_value_proper, shifted_support_in_x })
    }

    pub fn to_json(&self, omega: &OmegaData) -> Value {
        let group = omega.group();
        json!({
            "X": self.x_set.iter().map(|g| group.element_to_json(g)).collect::<Vec<_>>(),
            "gamma0": group.element_to_json(&self.gamma0),
            "pairs": self.pairs.iter().map(|p| json!({
                "point": group.element_to_json(&p.point),
                "word": p.word.to_string(),
                "f": format!("{}·{}", p.f.values().first().map(|v| v.to_string()).unwrap_or_default(),
                             p.f.render_indicator(group).join("+")),
            })).collect::<Vec<_>>(),
        })
    }
}

pub fn partition_data(x_set: &[GroupElement], gamma0: &GroupElement, omega: &OmegaData) -> Result<PartitionData> {
    let group = omega.group();
    if !group.is_discrete() {
        return Err(Error::feature(MODULE, "scaling elements are constructed for discrete groups only"));
    }
    for g in x_set.iter().chain(std::iter::once(gamma0)) {
        group.validate(g)?;
    }
    let mut xs: Vec<GroupElement> = vec![];
    for g in x_set {
        if !xs.contains(g) {
            xs.push(g.clone());
        }
    }
    if !xs.contains(&group.zero()) {
        return Err(Error::precondition(MODULE, "X must contain 0"));
    }
    if xs.contains(gamma0) {
        return Err(Error::precondition(MODULE, format!("gamma0 = {} lies in X", group.render_point(gamma0))));
    }
    let closure = closure_equals_gamma(omega)?;
    if !closure.verdict {
        let why = closure
            .counterexample
            .as_ref()
            .map(|g| format!("; {} is not in the closed semigroup", group.render_point(g)))
            .unwrap_or_default();
        return Err(Error::precondition(MODULE, format!("the weights do not generate the whole group{why}")));
    }
    let points: Vec<GroupElement> = xs.iter().chain(std::iter::once(gamma0)).cloned().collect();
    let targets: Vec<FamilyTarget> = points.iter().map(|g| FamilyTarget::Points(vec![group.neg(g)])).collect();
    let words = orthogonal_family_with_targets(omega, &targets)?;
    let quarter = Scalar::from_ratio(1, 4);
    let pairs = points
        .into_iter()
        .zip(words)
        .map(|(g, word)| {
            let c = if &g == gamma0 { quarter.clone() } else { Scalar::one() };
            Ok(PartitionPair { f: FiniteFunction::point(group, g.clone(), c)?, point: g, word })
        })
        .collect::<Result<_>>()?;
    let data = PartitionData { x_set: xs, gamma0: gamma0.clone(), pairs };
    let checks = data.check(omega)?;
    if !checks.all() {
        return Err(Error::internal(MODULE, format!("partition conditions failed: {checks:?}")));
    }
    Ok(data)
}

/// `x` together with its exactly verified identities.
#[derive(Clone, Debug)]
pub struct ScalingReport {
    pub partition: PartitionData,
    pub x: AlgebraElement,
    pub x_star_x: AlgebraElement,
    pub x_x_star: AlgebraElement,
    pub star_is_sum: bool,
    pub absorbs: bool,
    pub not_normal: bool,
}

impl ScalingReport {
    pub fn passes(&self) -> bool {
        self.star_is_sum && self.absorbs && self.not_normal
    }

    pub fn to_json(&self, alg: &Algebra) -> Value {
        json!({
            "partition": self.partition.to_json(alg.omega()),
            "x": render(alg, &self.x),
            "x_star_x": render(alg, &self.x_star_x),
            "x_x_star": render(alg, &self.x_x_star),
            "checks": {
                "x_star_x_equals_sum_f": self.star_is_sum,
                "x_star_x_times_x_x_star_equals_x_x_star": self.absorbs,
                "x_star_x_differs_from_x_x_star": self.not_normal,
            },
            "passed": self.passes(),
        })
    }
}

pub fn scaling_element(alg: &Algebra, x_set: &[GroupElement], gamma0: &GroupElement) -> Result<ScalingReport> {
    let partition = partition_data(x_set, gamma0, alg.omega())?;
    let group = alg.group();
    let mut terms = vec![];
    let mut sum_f = FiniteFunction::zero(group);
    for p in &partition.pairs {
        let root = p.f.sqrt().ok_or_else(|| {
            Error::construction(MODULE, format!("f at {} has a value without a rational square root", p.point))
        })?;
        terms.push((p.word.clone(), root, Word::empty()));
        sum_f = sum_f.add(&p.f, group)?;
    }
    let x = alg.from_terms(terms)?;
    let xs = alg.adjoint(&x);
    let x_star_x = alg.multiply(&xs, &x)?;
    let x_x_star = alg.multiply(&x, &xs)?;
    let star_is_sum = x_star_x == alg.function(sum_f)?;
    let absorbs = alg.multiply(&x_star_x, &x_x_star)? == x_x_star;
    let not_normal = x_star_x != x_x_star;
    let report = ScalingReport { partition, x, x_star_x, x_x_star, star_is_sum, absorbs, not_normal };
    if !report.passes() {
        return Err(Error::internal(MODULE, "scaling identities failed"));
    }
    Ok(report)
}
