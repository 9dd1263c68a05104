//! Finitely supported functions on Γ: point masses on a discrete group and
//! half-open step functions on the real line.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::gamma::{GroupDescriptor, GroupElement};
use crate::scalar::Scalar;

const MODULE: &str = "star_algebra";

/// A function in the region algebra.
///
/// `Steps` stores breakpoints `b_0 < b_1 < …`; the value `v_i` holds on
/// `[b_i, b_{i+1})`, the first value is nonzero, consecutive values differ
/// and the last value is zero. With exact coordinates this form is unique,
/// so derived equality is equality of functions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FiniteFunction {
    Points(BTreeMap<GroupElement, Scalar>),
    Steps(Vec<(GroupElement, Scalar)>),
}

fn real_only(group: &GroupDescriptor) -> Result<()> {
    if group.is_real() {
        Ok(())
    } else {
        Err(Error::feature(MODULE, "interval functions need a real_line group"))
    }
}

impl FiniteFunction {
    pub fn zero(group: &GroupDescriptor) -> Self {
        if group.is_real() {
            FiniteFunction::Steps(vec![])
        } else {
            FiniteFunction::Points(BTreeMap::new())
        }
    }

    /// `c · χ_{g}` on a discrete group.
    pub fn point(group: &GroupDescriptor, g: GroupElement, c: Scalar) -> Result<Self> {
        if group.is_real() {
            return Err(Error::feature(MODULE, "point masses are not in the real-line region algebra; use intervals"));
        }
        group.validate(&g)?;
        let mut m = BTreeMap::new();
        if !c.is_zero() {
            m.insert(g, c);
        }
        Ok(FiniteFunction::Points(m))
    }

    /// `χ_F` for a finite set of points.
    pub fn indicator(group: &GroupDescriptor, points: &[GroupElement]) -> Result<Self> {
        let mut f = FiniteFunction::zero(group);
        for p in points {
            if !f.eval(group, p)?.is_zero() {
                continue;
            }
            f = f.add(&FiniteFunction::point(group, p.clone(), Scalar::one())?, group)?;
        }
        Ok(f)
    }

    /// `c · χ_{[lo, hi)}` on the real line; empty when `hi ≤ lo`.
    pub fn interval(group: &GroupDescriptor, lo: GroupElement, hi: GroupElement, c: Scalar) -> Result<Self> {
        real_only(group)?;
        group.validate(&lo)?;
        group.validate(&hi)?;
        if c.is_zero() || group.compare_real(&lo, &hi)? != Ordering::Less {
            return Ok(FiniteFunction::Steps(vec![]));
        }
        Ok(FiniteFunction::Steps(vec![(lo, c), (hi, Scalar::zero())]))
    }

    pub fn is_zero(&self) -> bool {
        match self {
            FiniteFunction::Points(m) => m.is_empty(),
            FiniteFunction::Steps(s) => s.is_empty(),
        }
    }

    /// `f(x)`.
    pub fn eval(&self, group: &GroupDescriptor, x: &GroupElement) -> Result<Scalar> {
        match self {
            FiniteFunction::Points(m) => Ok(m.get(x).cloned().unwrap_or_else(Scalar::zero)),
            FiniteFunction::Steps(s) => {
                let mut v = Scalar::zero();
                for (b, val) in s {
                    if group.compare_real(b, x)? == Ordering::Greater {
                        break;
                    }
                    v = val.clone();
                }
                Ok(v)
            }
        }
    }

    /// Pointwise combination `op(f, g)`; `op(0, 0)` must be 0.
    fn combine(&self, other: &Self, group: &GroupDescriptor, op: impl Fn(&Scalar, &Scalar) -> Scalar) -> Result<Self> {
        match (self, other) {
            (FiniteFunction::Points(a), FiniteFunction::Points(b)) => {
                let zero = Scalar::zero();
                let mut out = BTreeMap::new();
                for k in a.keys().chain(b.keys()) {
                    if out.contains_key(k) {
                        continue;
                    }
                    let v = op(a.get(k).unwrap_or(&zero), b.get(k).unwrap_or(&zero));
                    if !v.is_zero() {
                        out.insert(k.clone(), v);
                    }
                }
                Ok(FiniteFunction::Points(out))
            }
            (FiniteFunction::Steps(a), FiniteFunction::Steps(b)) => {
                let mut out: Vec<(GroupElement, Scalar)> = vec![];
                let (mut i, mut j) = (0, 0);
                let (mut va, mut vb) = (Scalar::zero(), Scalar::zero());
                while i < a.len() || j < b.len() {
                    let order = match (a.get(i), b.get(j)) {
                        (Some(x), Some(y)) => group.compare_real(&x.0, &y.0)?,
                        (Some(_), None) => Ordering::Less,
                        _ => Ordering::Greater,
                    };
                    let at = if order == Ordering::Greater { b[j].0.clone() } else { a[i].0.clone() };
                    if order != Ordering::Greater {
                        va = a[i].1.clone();
                        i += 1;
                    }
                    if order != Ordering::Less {
                        vb = b[j].1.clone();
                        j += 1;
                    }
                    let v = op(&va, &vb);
                    let last = out.last().map_or(Scalar::zero(), |(_, l)| l.clone());
                    if v != last {
                        out.push((at, v));
                    }
                }
                Ok(FiniteFunction::Steps(out))
            }
            _ => Err(Error::argument(MODULE, "functions over different group kinds")),
        }
    }

    pub fn add(&self, other: &Self, group: &GroupDescriptor) -> Result<Self> {
        self.combine(other, group, |x, y| x + y)
    }

    pub fn sub(&self, other: &Self, group: &GroupDescriptor) -> Result<Self> {
        self.combine(other, group, |x, y| x - y)
    }

    /// Pointwise product.
    pub fn mul(&self, other: &Self, group: &GroupDescriptor) -> Result<Self> {
        if self.is_zero() || other.is_zero() {
            return Ok(FiniteFunction::zero(group));
        }
        self.combine(other, group, |x, y| x * y)
    }

    fn map_values(&self, f: impl Fn(&Scalar) -> Scalar) -> Self {
        match self {
            FiniteFunction::Points(m) => FiniteFunction::Points(
                m.iter().map(|(k, v)| (k.clone(), f(v))).filter(|(_, v)| !v.is_zero()).collect(),
            ),
            FiniteFunction::Steps(s) => {
                let mut out: Vec<(GroupElement, Scalar)> = vec![];
                for (b, v) in s {
                    let w = f(v);
                    let last = out.last().map_or(Scalar::zero(), |(_, l)| l.clone());
                    if w != last {
                        out.push((b.clone(), w));
                    }
                }
                FiniteFunction::Steps(out)
            }
        }
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        self.map_values(|v| c * v)
    }

    pub fn neg(&self) -> Self {
        self.map_values(|v| -v)
    }

    pub fn conj(&self) -> Self {
        self.map_values(Scalar::conj)
    }

    /// Pointwise square root, defined when every value is the square of a
    /// nonnegative rational.
    pub fn sqrt(&self) -> Option<Self> {
        let ok = self.values().iter().all(|v| v.sqrt_of_square().is_some());
        ok.then(|| self.map_values(|v| v.sqrt_of_square().expect("checked")))
    }

    /// `σ_γ f`, i.e. `x ↦ f(x + γ)`.
    pub fn shift(&self, gamma: &GroupElement, group: &GroupDescriptor) -> Self {
        if group.is_zero(gamma) {
            return self.clone();
        }
        match self {
            FiniteFunction::Points(m) => {
                FiniteFunction::Points(m.iter().map(|(k, v)| (group.sub(k, gamma), v.clone())).collect())
            }
            FiniteFunction::Steps(s) => {
                FiniteFunction::Steps(s.iter().map(|(b, v)| (group.sub(b, gamma), v.clone())).collect())
            }
        }
    }

    /// Distinct nonzero values, sorted.
    pub fn values(&self) -> Vec<Scalar> {
        let mut vs: Vec<Scalar> = match self {
            FiniteFunction::Points(m) => m.values().cloned().collect(),
            FiniteFunction::Steps(s) => s.iter().map(|(_, v)| v.clone()).filter(|v| !v.is_zero()).collect(),
        };
        vs.sort();
        vs.dedup();
        vs
    }

    /// Is `f` the indicator of its support?
    pub fn is_indicator(&self) -> bool {
        self.values().iter().all(Scalar::is_one)
    }

    /// Points of a discrete support, in order.
    pub fn support_points(&self) -> Vec<GroupElement> {
        match self {
            FiniteFunction::Points(m) => m.keys().cloned().collect(),
            FiniteFunction::Steps(_) => vec![],
        }
    }

    /// Maximal intervals `[lo, hi)` with constant nonzero value.
    pub fn pieces(&self) -> Vec<(GroupElement, GroupElement, Scalar)> {
        match self {
            FiniteFunction::Points(_) => vec![],
            FiniteFunction::Steps(s) => s
                .windows(2)
                .filter(|w| !w[0].1.is_zero())
                .map(|w| (w[0].0.clone(), w[1].0.clone(), w[0].1.clone()))
                .collect(),
        }
    }

    /// The level sets: for each distinct value, the indicator of where it is taken.
    pub fn split_by_value(&self) -> Vec<(Scalar, FiniteFunction)> {
        self.values()
            .into_iter()
            .map(|v| {
                let part = match self {
                    FiniteFunction::Points(m) => FiniteFunction::Points(
                        m.iter().filter(|(_, x)| **x == v).map(|(k, _)| (k.clone(), Scalar::one())).collect(),
                    ),
                    FiniteFunction::Steps(_) => {
                        let mut out: Vec<(GroupElement, Scalar)> = vec![];
                        for (lo, hi, x) in self.pieces() {
                            if x != v {
                                continue;
                            }
                            match out.last_mut() {
                                Some(last) if last.0 == lo => last.1 = Scalar::one(),
                                _ => out.push((lo, Scalar::one())),
                            }
                            out.push((hi, Scalar::zero()));
                        }
                        // adjacent pieces of equal value never occur in canonical form
                        FiniteFunction::Steps(out)
                    }
                };
                (v, part)
            })
            .collect()
    }

    /// Indicator-style text: `chi{0}`, `chi{(1,0),(0,1)}`, `chi[0,1)+chi[2,3)`.
    pub fn render_indicator(&self, group: &GroupDescriptor) -> Vec<String> {
        match self {
            FiniteFunction::Points(m) => {
                let pts: Vec<String> = m.keys().map(|k| group.render_point(k)).collect();
                vec![format!("chi{{{}}}", pts.join(","))]
            }
            FiniteFunction::Steps(_) => self
                .pieces()
                .into_iter()
                .map(|(lo, hi, _)| format!("chi[{},{})", group.render_point(&lo), group.render_point(&hi)))
                .collect(),
        }
    }
}
