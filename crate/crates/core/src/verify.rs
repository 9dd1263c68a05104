//! Seeded randomized property suites over a given weight datum.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::algebra::{Algebra, AlgebraElement, MultiplierWordSum};
use crate::error::Result;
use crate::expr::render;
use crate::function::FiniteFunction;
use crate::gamma::{Alphabet, GroupDescriptor, GroupElement};
use crate::scalar::Scalar;
use crate::semigroup::SemigroupModel;
use crate::words::{omega_of, words_of_length, Word};

#[derive(Clone, Debug)]
pub struct VerifyOptions {
    pub seed: u64,
    pub triples: usize,
    pub compression_samples: usize,
    pub max_word_len: usize,
    pub radius: i64,
    pub membership_samples: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            seed: 0,
            triples: 1000,
            compression_samples: 100,
            max_word_len: 3,
            radius: 5,
            membership_samples: 200,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteResult {
    pub name: &'static str,
    pub cases: usize,
    pub failures: usize,
    pub first_failure: Option<String>,
    pub skipped: Option<String>,
}

impl SuiteResult {
    fn new(name: &'static str) -> Self {
        SuiteResult { name, cases: 0, failures: 0, first_failure: None, skipped: None }
    }

    fn skip(name: &'static str, why: &str) -> Self {
        SuiteResult { skipped: Some(why.to_string()), ..Self::new(name) }
    }

    fn record(&mut self, ok: bool, detail: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failures += 1;
            if self.first_failure.is_none() {
                self.first_failure = Some(detail());
            }
        }
    }

    pub fn passed(&self) -> bool {
        self.failures == 0
    }

    pub fn to_json(&self) -> Value {
        json!({
            "name": self.name,
            "cases": self.cases,
            "failures": self.failures,
            "first_failure": self.first_failure,
            "skipped": self.skipped,
        })
    }
}

#[derive(Clone, Debug)]
pub struct VerifyReport {
    pub seed: u64,
    pub suites: Vec<SuiteResult>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.suites.iter().all(SuiteResult::passed)
    }

    pub fn suite(&self, name: &str) -> Option<&SuiteResult> {
        self.suites.iter().find(|s| s.name == name)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "seed": self.seed,
            "suites": self.suites.iter().map(SuiteResult::to_json).collect::<Vec<_>>(),
            "passed": self.passed(),
        })
    }
}

/// Random elements with words up to a given length and supports in a box.
pub struct Sampler<'a> {
    alg: &'a Algebra,
    rng: ChaCha8Rng,
    radius: i64,
}

impl<'a> Sampler<'a> {
    pub fn new(alg: &'a Algebra, seed: u64, radius: i64) -> Self {
        Sampler { alg, rng: ChaCha8Rng::seed_from_u64(seed), radius }
    }

    pub fn word(&mut self, max_len: usize) -> Word {
        let len = self.rng.gen_range(0..=max_len);
        Word::new((0..len).map(|_| self.rng.gen_range(1..=self.alg.n())).collect())
    }

    pub fn point(&mut self) -> GroupElement {
        let r = self.radius;
        match self.alg.group() {
            GroupDescriptor::Discrete { free_rank, torsion } => {
                let mut raw: Vec<i64> = (0..*free_rank).map(|_| self.rng.gen_range(-r..=r)).collect();
                raw.extend(torsion.iter().map(|&m| self.rng.gen_range(0..m)));
                GroupElement::Discrete { free: raw[..*free_rank].to_vec(), torsion: raw[*free_rank..].to_vec() }
            }
            GroupDescriptor::RealLine(b) => {
                let mut c = vec![0i64; b.len()];
                for x in c.iter_mut() {
                    *x = self.rng.gen_range(-r..=r);
                }
                GroupElement::real_ints(&c)
            }
        }
    }

    fn scalar(&mut self) -> Scalar {
        let re = self.rng.gen_range(-2..=2);
        if self.rng.gen_bool(0.15) {
            return &Scalar::from_int(re) + &Scalar::i();
        }
        if re == 0 {
            Scalar::one()
        } else {
            Scalar::from_int(re)
        }
    }

    pub fn function(&mut self) -> Result<FiniteFunction> {
        let group = self.alg.group().clone();
        let mut f = FiniteFunction::zero(&group);
        for _ in 0..self.rng.gen_range(1..=2) {
            let c = self.scalar();
            let g = match &group {
                GroupDescriptor::Discrete { .. } => FiniteFunction::point(&group, self.point(), c)?,
                GroupDescriptor::RealLine(_) => {
                    let lo = self.point();
                    let mut step = vec![0i64; group.basis().map_or(1, |b| b.len())];
                    step[0] = self.rng.gen_range(1..=3);
                    let hi = group.add(&lo, &GroupElement::real_ints(&step));
                    FiniteFunction::interval(&group, lo, hi, c)?
                }
            };
            f = f.add(&g, &group)?;
        }
        Ok(f)
    }

    pub fn element(&mut self, max_len: usize) -> Result<AlgebraElement> {
        let mut items = vec![];
        for _ in 0..self.rng.gen_range(1..=3) {
            let mu = self.word(max_len);
            let nu = self.word(max_len);
            items.push((mu, self.function()?, nu));
        }
        self.alg.from_terms(items)
    }
}

fn check(alg: &Algebra, suite: &mut SuiteResult, what: &str, got: Result<AlgebraElement>, want: Result<AlgebraElement>) {
    match (got, want) {
        (Ok(a), Ok(b)) => {
            let ok = a == b;
            suite.record(ok, || format!("{what}: {} vs {}", render(alg, &a), render(alg, &b)));
        }
        (Err(e), _) | (_, Err(e)) => suite.record(false, || format!("{what}: {e}")),
    }
}

/// Associativity, involution, `E` and `ρ_k` laws on random triples.
pub fn star_algebra_laws(alg: &Algebra, opts: &VerifyOptions) -> Result<SuiteResult> {
    let mut suite = SuiteResult::new("star_algebra_laws");
    let mut s = Sampler::new(alg, opts.seed, opts.radius);
    for _ in 0..opts.triples {
        let x = s.element(opts.max_word_len)?;
        let y = s.element(opts.max_word_len)?;
        let z = s.element(opts.max_word_len)?;
        let xy = alg.multiply(&x, &y)?;
        check(alg, &mut suite, "associativity", alg.multiply(&xy, &z), alg.multiply(&x, &alg.multiply(&y, &z)?));
        check(alg, &mut suite, "adjoint of product", Ok(alg.adjoint(&xy)), alg.multiply(&alg.adjoint(&y), &alg.adjoint(&x)));
        check(alg, &mut suite, "double adjoint", Ok(alg.adjoint(&alg.adjoint(&x))), Ok(x.clone()));
        let ex = alg.gauge_expectation(&x);
        check(alg, &mut suite, "E idempotent", Ok(alg.gauge_expectation(&ex)), Ok(ex.clone()));
        check(alg, &mut suite, "E commutes with *", Ok(alg.gauge_expectation(&alg.adjoint(&x))), Ok(alg.adjoint(&ex)));
        let ey = alg.gauge_expectation(&y);
        check(
            alg,
            &mut suite,
            "E bimodule",
            Ok(alg.gauge_expectation(&alg.multiply(&alg.multiply(&ex, &z)?, &ey)?)),
            alg.multiply(&alg.multiply(&ex, &alg.gauge_expectation(&z))?, &ey),
        );
        let k = 1 + (suite.cases % 2);
        check(alg, &mut suite, "rho_k multiplicative", alg.rho_k(&xy, k), alg.multiply(&alg.rho_k(&x, k)?, &alg.rho_k(&y, k)?));
        check(alg, &mut suite, "rho_k commutes with *", alg.rho_k(&alg.adjoint(&x), k), Ok(alg.adjoint(&alg.rho_k(&x, k)?)));
    }
    Ok(suite)
}

/// `u = Σ_{|μ|=k} S_μ S_1^k S_2 S_μ*`.
pub fn compression_multiplier(n: usize, k: usize) -> Result<MultiplierWordSum> {
    let mut core = vec![1usize; k];
    core.push(2);
    let core = Word::new(core);
    let words = words_of_length(n, k, crate::words::DEFAULT_WORD_CAP)?;
    Ok(MultiplierWordSum::from_terms(words.into_iter().map(|mu| ((mu.concat(&core), mu), Scalar::one()))))
}

/// `u* y u = σ_{kω_1+ω_2}(E(y))` for `y` on words of length at most `k`.
pub fn compression_identity(alg: &Algebra, opts: &VerifyOptions) -> Result<SuiteResult> {
    let name = "compression_identity";
    if alg.omega().alphabet() != Alphabet::Finite || alg.n() < 2 {
        return Ok(SuiteResult::skip(name, "needs O_n with n >= 2"));
    }
    let mut suite = SuiteResult::new(name);
    let mut s = Sampler::new(alg, opts.seed.wrapping_add(1), opts.radius);
    for k in 1..=2usize {
        let u = compression_multiplier(alg.n(), k)?;
        let mut core = vec![1usize; k];
        core.push(2);
        let shift = omega_of(&Word::new(core), alg.omega())?;
        for _ in 0..opts.compression_samples {
            let y = s.element(k)?;
            let got = alg.multiplier_conjugate(&u, &y);
            let want = alg.sigma(&shift, &alg.gauge_expectation(&y));
            check(alg, &mut suite, &format!("k={k}"), got, want);
        }
    }
    Ok(suite)
}

/// Membership answers against short-word enumeration: every enumerated
/// value is a member, and every witness re-evaluates to its target.
pub fn membership_consistency(alg: &Algebra, opts: &VerifyOptions) -> Result<SuiteResult> {
    let name = "membership_consistency";
    let omega = alg.omega();
    if !omega.group().is_discrete() {
        return Ok(SuiteResult::skip(name, "needs a discrete group"));
    }
    let mut suite = SuiteResult::new(name);
    let model = SemigroupModel::new(omega)?;
    let mut reachable = std::collections::BTreeSet::new();
    for w in crate::words::enumerate_words(omega.n(), 6, crate::words::DEFAULT_WORD_CAP)? {
        reachable.insert(omega_of(&w, omega)?);
    }
    let mut s = Sampler::new(alg, opts.seed.wrapping_add(2), opts.radius);
    for _ in 0..opts.membership_samples {
        let t = s.point();
        match model.member(&t) {
            Ok(Some(w)) => {
                let ok = w.verify(omega, &t)?;
                suite.record(ok, || format!("witness for {t} does not evaluate to it"));
            }
            Ok(None) => suite.record(!reachable.contains(&t), || format!("{t} is reachable but reported absent")),
            Err(e) => suite.record(false, || format!("{t}: {e}")),
        }
    }
    Ok(suite)
}

pub fn run(alg: &Algebra, opts: &VerifyOptions) -> Result<VerifyReport> {
    Ok(VerifyReport {
        seed: opts.seed,
        suites: vec![
            star_algebra_laws(alg, opts)?,
            compression_identity(alg, opts)?,
            membership_consistency(alg, opts)?,
        ],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gamma::OmegaData;

    fn small() -> VerifyOptions {
        VerifyOptions { triples: 40, compression_samples: 20, membership_samples: 40, ..Default::default() }
    }

    #[test]
    fn suites_pass_on_the_integers() {
        let alg = Algebra::new(OmegaData::over_integers(&[1, 2]).unwrap());
        let rep = run(&alg, &small()).unwrap();
        assert!(rep.passed(), "{}", rep.to_json());
        assert_eq!(rep.suite("compression_identity").unwrap().cases, 40);
    }

    #[test]
    fn seeds_are_reproducible() {
        let alg = Algebra::new(OmegaData::over_integers(&[1, -1]).unwrap());
        let a = run(&alg, &small()).unwrap().to_json();
        let b = run(&alg, &small()).unwrap().to_json();
        assert_eq!(a, b);
    }

    #[test]
    fn real_line_and_torsion() {
        let g = GroupDescriptor::real_sqrt2();
        let om = OmegaData::finite(g, vec![GroupElement::real_ints(&[1, 0]), GroupElement::real_ints(&[0, -1])]).unwrap();
        assert!(run(&Algebra::new(om), &small()).unwrap().passed());
        let t = |v| GroupElement::Discrete { free: vec![1], torsion: vec![v] };
        let om = OmegaData::finite(GroupDescriptor::discrete(1, vec![2]).unwrap(), vec![t(1), t(0), t(1)]).unwrap();
        assert!(run(&Algebra::new(om), &small()).unwrap().passed());
    }
}
