//! Surgery mapping cones: the truncated cone for `HF^` of `p/q` surgery and the
//! three-term cones for the knot Floer homology of the core of `n` surgery.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::cfk::{
    b_complex, b_differential, build_a, genus, h_matrix, reduce_model, slice_indices, v_matrix, CfkModel,
    GradedComplex, Slice,
};
use crate::error::{Error, Result};
use crate::f2linalg::BitMatrix;
use crate::rational::{closed_form_y, h_triple};
use crate::verify::is_simple;

pub const DEFAULT_MARGIN: u32 = 2;

/// A positive surgery coefficient `p/q` in lowest terms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct SurgerySpec {
    pub p: u32,
    pub q: u32,
}

impl SurgerySpec {
    pub fn new(p: u32, q: u32) -> Result<Self> {
        if p == 0 || q == 0 {
            return Err(Error::InvalidSurgery(format!("{p}/{q}: p and q must be positive")));
        }
        if gcd(p, q) != 1 {
            return Err(Error::InvalidSurgery(format!("{p}/{q}: p and q must be coprime")));
        }
        Ok(Self { p, q })
    }

    pub fn integer(n: u32) -> Result<Self> {
        Self::new(n, 1)
    }
}

impl std::fmt::Display for SurgerySpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}/{}", self.p, self.q)
    }
}

pub fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// All coprime `(p, q)` with `1 ≤ p ≤ pmax`, `1 ≤ q ≤ qmax`, in lexicographic order.
pub fn coprime_specs(pmax: u32, qmax: u32) -> Vec<SurgerySpec> {
    (1..=pmax).flat_map(|p| (1..=qmax).filter_map(move |q| SurgerySpec::new(p, q).ok())).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SummandKind {
    A,
    B,
}

#[derive(Clone, Debug)]
pub struct Summand {
    pub kind: SummandKind,
    pub label: i64,
    pub offset: usize,
    pub complex: GradedComplex,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum EdgeKind {
    V,
    H,
}

#[derive(Clone, Debug)]
pub struct Edge {
    pub kind: EdgeKind,
    pub source: usize,
    pub target: usize,
    pub map: BitMatrix,
}

/// Label ranges of the `A` and `B` summands kept in a truncated cone.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Window {
    pub a_lo: i64,
    pub a_hi: i64,
    pub b_lo: i64,
    pub b_hi: i64,
    pub margin: u32,
}

#[derive(Clone, Debug)]
pub struct ConeComplex {
    pub summands: Vec<Summand>,
    pub edges: Vec<Edge>,
    pub assembled: GradedComplex,
    pub window: Window,
}

impl ConeComplex {
    pub fn homology_rank(&self) -> usize {
        self.assembled.homology_rank()
    }
}

/// The window of summands for margin `m`: `A_s` for `s ∈ [−q(g+m), q(g+m)+p]`
/// and `B_s` for `s ∈ [−q(g+m)+p, q(g+m)+p]`.
pub fn window(g: i64, spec: SurgerySpec, margin: u32) -> Window {
    let (p, q, m) = (spec.p as i64, spec.q as i64, margin as i64);
    let a_lo = -q * (g + m);
    let a_hi = q * (g + m) + p;
    Window { a_lo, a_hi, b_lo: a_lo + p, b_hi: a_hi, margin }
}

/// Truncation of the mapping cone of `h^p + v: A_q → B_q`.
///
/// The discarded summands above the window pair up along isomorphisms `v` and
/// those below along isomorphisms `h`; both tails are acyclic subcomplexes.
pub fn build_truncated_cone(c: &CfkModel, spec: SurgerySpec, margin: u32) -> Result<ConeComplex> {
    if margin < 1 {
        return Err(Error::WindowTooSmall("margin must be at least 1".into()));
    }
    let r = reduce_model(c);
    let g = genus(&r)?;
    let w = window(g, spec, margin);
    let (p, q) = (spec.p as i64, spec.q as i64);
    let n = r.len();

    let t_above = (w.a_hi + 1).div_euclid(q);
    let t_below = (w.a_lo - 1).div_euclid(q);
    if !v_matrix(&r, t_above).is_invertible() {
        return Err(Error::WindowTooSmall(format!("v is not an isomorphism at t = {t_above}")));
    }
    if !h_matrix(&r, t_below).is_invertible() {
        return Err(Error::WindowTooSmall(format!("h is not an isomorphism at t = {t_below}")));
    }

    let mut summands = Vec::new();
    let mut a_index = BTreeMap::new();
    let mut b_index = BTreeMap::new();
    let mut offset = 0;
    for s in w.a_lo..=w.a_hi {
        a_index.insert(s, summands.len());
        summands.push(Summand { kind: SummandKind::A, label: s, offset, complex: build_a(&r, s.div_euclid(q)) });
        offset += n;
    }
    let b = b_complex(&r);
    for s in w.b_lo..=w.b_hi {
        b_index.insert(s, summands.len());
        summands.push(Summand { kind: SummandKind::B, label: s, offset, complex: b.clone() });
        offset += n;
    }

    let mut edges = Vec::new();
    for s in w.a_lo..=w.a_hi {
        let t = s.div_euclid(q);
        if let Some(&target) = b_index.get(&s) {
            edges.push(Edge { kind: EdgeKind::V, source: a_index[&s], target, map: v_matrix(&r, t) });
        }
        if let Some(&target) = b_index.get(&(s + p)) {
            edges.push(Edge { kind: EdgeKind::H, source: a_index[&s], target, map: h_matrix(&r, t) });
        }
    }

    let mut d = BitMatrix::zeros(offset, offset);
    let mut ids = Vec::with_capacity(offset);
    for sm in &summands {
        for (id, grading) in sm.complex.generators() {
            ids.push((format!("{:?}{}:{id}", sm.kind, sm.label), *grading));
        }
        for (i, j) in sm.complex.differential().ones() {
            d.toggle(sm.offset + i, sm.offset + j);
        }
    }
    for e in &edges {
        let (so, to) = (summands[e.source].offset, summands[e.target].offset);
        for (i, j) in e.map.ones() {
            d.toggle(to + i, so + j);
        }
    }
    let assembled = GradedComplex::new(ids, d).map_err(|e| Error::invariant("cone d² = 0", e.to_string()))?;
    Ok(ConeComplex { summands, edges, assembled, window: w })
}

pub fn cone_rank_at_margin(c: &CfkModel, spec: SurgerySpec, margin: u32) -> Result<usize> {
    Ok(build_truncated_cone(c, spec, margin)?.homology_rank())
}

/// Rank of `HF^` of `p/q` surgery, at the default margin and re-checked one margin wider.
pub fn hf_surgery_rank(c: &CfkModel, spec: SurgerySpec) -> Result<usize> {
    let at = cone_rank_at_margin(c, spec, DEFAULT_MARGIN)?;
    let next = cone_rank_at_margin(c, spec, DEFAULT_MARGIN + 1)?;
    if at != next {
        return Err(Error::WindowUnstable {
            margin: DEFAULT_MARGIN,
            at_margin: at,
            next: DEFAULT_MARGIN + 1,
            at_next: next,
        });
    }
    Ok(at)
}

/// Mapping cone of the projections `B → B{leg1} ⊕ B{leg2}`, basis `[B | leg1 | leg2]`.
pub fn projection_cone(c: &CfkModel, leg1: Slice, leg2: Slice) -> ProjectionCone {
    let n = c.len();
    let d_b = b_differential(c);
    let l1 = slice_indices(c, leg1);
    let l2 = slice_indices(c, leg2);
    let total = n + l1.len() + l2.len();
    let mut d = BitMatrix::zeros(total, total);
    for (i, j) in d_b.ones() {
        d.toggle(i, j);
    }
    let mut ids: Vec<(String, i64)> = c.generators().iter().map(|g| (g.id.clone(), g.alexander)).collect();
    for (base, leg, tag) in [(n, &l1, "L1"), (n + l1.len(), &l2, "L2")] {
        for (a, &k) in leg.iter().enumerate() {
            d.toggle(base + a, k);
            for (b, &k2) in leg.iter().enumerate() {
                if d_b.get(k2, k) {
                    d.toggle(base + b, base + a);
                }
            }
            ids.push((format!("{tag}:{}", c.generators()[k].id), c.alexander(k)));
        }
    }
    let complex = GradedComplex::new(ids, d).expect("projections to quotient complexes form a cone");
    ProjectionCone { complex, base: n, leg1: l1, leg2: l2 }
}

/// A two-leg projection cone together with the generator indices of each leg.
#[derive(Clone, Debug)]
pub struct ProjectionCone {
    pub complex: GradedComplex,
    pub base: usize,
    pub leg1: Vec<usize>,
    pub leg2: Vec<usize>,
}

impl ProjectionCone {
    pub fn leg1_position(&self, gen: usize) -> Option<usize> {
        self.leg1.iter().position(|&k| k == gen).map(|a| self.base + a)
    }

    pub fn leg2_position(&self, gen: usize) -> Option<usize> {
        self.leg2.iter().position(|&k| k == gen).map(|a| self.base + self.leg1.len() + a)
    }
}

/// How the legs of the knot surgery cone meet `B`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ConeConvention {
    /// `B → B{≥s} ⊕ B{>n−s}` by quotient projections.
    Quotient,
    /// `B{≥s} ⊕ B{>n−s} → B` by literal inclusion of spans.
    Inclusion,
}

fn inclusion_cone(c: &CfkModel, leg1: Slice, leg2: Slice) -> Result<GradedComplex> {
    let n = c.len();
    let d_b = b_differential(c);
    let l1 = slice_indices(c, leg1);
    let l2 = slice_indices(c, leg2);
    let legs: Vec<usize> = l1.iter().chain(&l2).copied().collect();
    let m = legs.len();
    let mut d = BitMatrix::zeros(m + n, m + n);
    for (a, &k) in legs.iter().enumerate() {
        d.toggle(m + k, a);
    }
    for (base, leg) in [(0, &l1), (l1.len(), &l2)] {
        for (a, &k) in leg.iter().enumerate() {
            for (b, &k2) in leg.iter().enumerate() {
                if d_b.get(k2, k) {
                    d.toggle(base + b, base + a);
                }
            }
        }
    }
    for (i, j) in d_b.ones() {
        d.toggle(m + i, m + j);
    }
    let ids = legs.iter().copied().chain(0..n).map(|k| (c.generators()[k].id.clone(), c.alexander(k))).collect();
    GradedComplex::new(ids, d).map_err(|_| {
        Error::ConventionFailure(format!(
            "inclusions of B{{{leg1}}} ⊕ B{{{leg2}}} into B are not chain maps; the cone differential does not square to zero"
        ))
    })
}

/// Per-`s` ranks of the knot Floer homology of the core of `n` surgery, quotient convention.
pub fn hfk_surgery_ranks(c: &CfkModel, n: u32) -> Result<BTreeMap<i64, usize>> {
    hfk_surgery_ranks_with(c, n, ConeConvention::Quotient)
}

pub fn hfk_surgery_ranks_with(c: &CfkModel, n: u32, convention: ConeConvention) -> Result<BTreeMap<i64, usize>> {
    if n == 0 {
        return Err(Error::InvalidSurgery("n must be positive".into()));
    }
    let m = reduce_model(c);
    let g = genus(&m)?;
    let n = n as i64;
    let mut out = BTreeMap::new();
    for s in (-g + 1)..=(n + g) {
        let (leg1, leg2) = (Slice::Ge(s), Slice::Gt(n - s));
        let rank = match convention {
            ConeConvention::Quotient => projection_cone(&m, leg1, leg2).complex.homology_rank(),
            ConeConvention::Inclusion => inclusion_cone(&m, leg1, leg2)?.homology_rank(),
        };
        if rank > 0 {
            out.insert(s, rank);
        }
    }
    Ok(out)
}

/// Experimental two-term cone `B{<s} → B{>s−n}` (inclusion then projection).
///
/// Nonzero for arbitrarily negative `s` on the unknot, so only the window
/// `[−g−n, n+g]` is reported.
pub fn hfk_surgery_ranks_two_term(c: &CfkModel, n: u32) -> Result<BTreeMap<i64, usize>> {
    if n == 0 {
        return Err(Error::InvalidSurgery("n must be positive".into()));
    }
    let m = reduce_model(c);
    let g = genus(&m)?;
    let n = n as i64;
    let d_b = b_differential(&m);
    let mut out = BTreeMap::new();
    for s in (-g - n)..=(n + g) {
        let src = slice_indices(&m, Slice::Lt(s));
        let dst = slice_indices(&m, Slice::Gt(s - n));
        let (a, b) = (src.len(), dst.len());
        let mut d = BitMatrix::zeros(a + b, a + b);
        for (x, &k) in src.iter().enumerate() {
            for (y, &k2) in src.iter().enumerate() {
                if d_b.get(k2, k) {
                    d.toggle(y, x);
                }
            }
            if let Some(y) = dst.iter().position(|&k2| k2 == k) {
                d.toggle(a + y, x);
            }
        }
        for (x, &k) in dst.iter().enumerate() {
            for (y, &k2) in dst.iter().enumerate() {
                if d_b.get(k2, k) {
                    d.toggle(a + y, a + x);
                }
            }
        }
        let ids = src.iter().chain(&dst).map(|&k| (m.generators()[k].id.clone(), m.alexander(k))).collect();
        let rank = GradedComplex::new(ids, d)?.homology_rank();
        if rank > 0 {
            out.insert(s, rank);
        }
    }
    Ok(out)
}

/// Closed-form rank for simple models, from `h_n = rank HF^(n surgery)` and `h_0`.
pub fn simple_y_rank(c: &CfkModel, spec: SurgerySpec) -> Result<usize> {
    if !is_simple(c)? {
        return Err(Error::NotSimple(format!("model {:?}", c.name())));
    }
    let h0 = h_triple(c)?.h_zero_total();
    let mut cache: BTreeMap<u32, usize> = BTreeMap::new();
    let mut h = |k: u32| -> Result<usize> {
        if k == 0 {
            return Ok(h0);
        }
        if let Some(&v) = cache.get(&k) {
            return Ok(v);
        }
        let v = hf_surgery_rank(c, SurgerySpec::integer(k)?)?;
        cache.insert(k, v);
        Ok(v)
    };
    let y = closed_form_y(spec, &mut h)?;
    if spec.p < spec.q {
        let split = spec.p as usize * h(1)? + (spec.q - spec.p) as usize * h0;
        if split != y {
            return Err(Error::IdentityMismatch {
                which: format!("p/q < 1 split at {spec}"),
                direct: split,
                formula: y,
            });
        }
    }
    Ok(y)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Route {
    Cone21,
    Cone22,
    Combinatorial23,
    ClosedForm,
}

/// A computed rank with the route and window that produced it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RankReport {
    pub route: Route,
    pub spec: Option<SurgerySpec>,
    pub value: Option<usize>,
    pub per_s: Option<BTreeMap<i64, usize>>,
    pub window: Option<Window>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cfk::parse_and_validate;

    fn unknot() -> CfkModel {
        parse_and_validate(
            r#"{"name":"u","generators":[{"id":"x","alexander":0,"maslov":0}],"arrows":[],"flip":{"kind":"identity"}}"#,
        )
        .unwrap()
    }

    #[test]
    fn spec_validation() {
        assert!(SurgerySpec::new(2, 4).is_err());
        assert!(SurgerySpec::new(0, 1).is_err());
        assert!(SurgerySpec::new(3, 2).is_ok());
        assert_eq!(coprime_specs(2, 2).len(), 3);
    }

    #[test]
    fn unknot_lens_ranks() {
        let u = unknot();
        for spec in coprime_specs(5, 5) {
            assert_eq!(hf_surgery_rank(&u, spec).unwrap(), spec.p as usize, "{spec}");
        }
    }

    #[test]
    fn unknot_knot_surgery() {
        let u = unknot();
        assert_eq!(hfk_surgery_ranks(&u, 3).unwrap(), BTreeMap::from([(1, 1), (2, 1), (3, 1)]));
        assert_eq!(hfk_surgery_ranks(&u, 1).unwrap(), BTreeMap::from([(1, 1)]));
        assert_eq!(
            hfk_surgery_ranks_with(&u, 3, ConeConvention::Inclusion).unwrap(),
            hfk_surgery_ranks(&u, 3).unwrap()
        );
    }

    #[test]
    fn margin_zero_is_rejected() {
        assert!(matches!(
            build_truncated_cone(&unknot(), SurgerySpec::new(1, 1).unwrap(), 0),
            Err(Error::WindowTooSmall(_))
        ));
    }
}
