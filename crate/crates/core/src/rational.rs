//! The combinatorial route to rational surgery: the groups `H_∞`, `H_1`, `H_0`
//! of the knot in the ambient manifold, 1-surgery and 0-surgery, the maps
//! `φ, φ̄: H_∞ → H_1` and `ψ, ψ̄: H_1 → H_0`, and the block-matrix rank
//! machinery built from them.
//!
//! All groups are computed on the dual complex `mirror(reduce(c))`.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::cfk::{genus, reduce_model, CfkModel, GradedComplex, Homology, Slice};
use crate::error::{Error, Result};
use crate::f2linalg::{assemble_blocks, extend_to_basis, kernel_basis, BitMatrix, BitVec, BlockLayout, Elimination};
use crate::surgery::{projection_cone, ProjectionCone, SurgerySpec};

/// The model the combinatorial groups are built on.
pub fn dual_model(c: &CfkModel) -> CfkModel {
    reduce_model(c).mirror()
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct HTriple {
    pub h_inf: BTreeMap<i64, usize>,
    pub h_one: BTreeMap<i64, usize>,
    pub h_zero: BTreeMap<i64, usize>,
}

impl HTriple {
    pub fn h_inf_total(&self) -> usize {
        self.h_inf.values().sum()
    }

    pub fn h_one_total(&self) -> usize {
        self.h_one.values().sum()
    }

    pub fn h_zero_total(&self) -> usize {
        self.h_zero.values().sum()
    }

    /// Ungraded triple with everything in grading 0.
    pub fn ungraded(h_inf: usize, h_one: usize, h_zero: usize) -> Self {
        let one = |v: usize| BTreeMap::from([(0, v)]);
        Self { h_inf: one(h_inf), h_one: one(h_one), h_zero: one(h_zero) }
    }
}

struct Group {
    label: i64,
    cone: ProjectionCone,
    homology: Homology,
    offset: usize,
}

/// Cones `C_1(s)`, `C_0(u)` with homology bases, on the dual model.
struct Groups {
    dual: CfkModel,
    one: Vec<Group>,
    zero: Vec<Group>,
    h_one: usize,
    h_zero: usize,
}

fn group_list(
    m: &CfkModel,
    labels: std::ops::RangeInclusive<i64>,
    legs: impl Fn(i64) -> (Slice, Slice),
) -> (Vec<Group>, usize) {
    let mut out = Vec::new();
    let mut offset = 0;
    for label in labels {
        let (l1, l2) = legs(label);
        let cone = projection_cone(m, l1, l2);
        let homology = cone.complex.homology();
        let k = homology.rank();
        out.push(Group { label, cone, homology, offset });
        offset += k;
    }
    (out, offset)
}

impl Groups {
    fn new(c: &CfkModel) -> Result<Self> {
        let dual = dual_model(c);
        let g = genus(&dual)?;
        let (one, h_one) = group_list(&dual, -g..=g, |s| (Slice::Ge(s), Slice::Ge(-s)));
        let (zero, h_zero) = group_list(&dual, (-g + 1)..=g, |u| (Slice::Ge(u), Slice::Ge(1 - u)));
        Ok(Self { dual, one, zero, h_one, h_zero })
    }

    fn one_at(&self, s: i64) -> Option<&Group> {
        self.one.iter().find(|g| g.label == s)
    }

    fn zero_at(&self, u: i64) -> Option<&Group> {
        self.zero.iter().find(|g| g.label == u)
    }

    fn triple(&self) -> HTriple {
        let mut h_inf = BTreeMap::new();
        for g in self.dual.generators() {
            *h_inf.entry(g.alexander).or_insert(0) += 1;
        }
        let dims = |gs: &[Group]| gs.iter().map(|g| (g.label, g.homology.rank())).collect();
        HTriple { h_inf, h_one: dims(&self.one), h_zero: dims(&self.zero) }
    }

    fn phi_maps(&self) -> Result<(BitMatrix, BitMatrix)> {
        let n = self.dual.len();
        let flip = self.dual.flip_matrix();
        let mut phi = BitMatrix::zeros(self.h_one, n);
        let mut phibar = BitMatrix::zeros(self.h_one, n);
        for x in 0..n {
            let s = self.dual.alexander(x);
            let Some(group) = self.one_at(s) else { continue };
            let dim = group.cone.complex.dim();

            let mut v = BitVec::zeros(dim);
            v.set(group.cone.leg1_position(x).expect("x lies in B{≥A(x)}"), true);
            for i in group.homology.coords(&v)?.ones() {
                phi.set(group.offset + i, x, true);
            }

            let mut w = BitVec::zeros(dim);
            for y in flip.column(x).ones().filter(|&y| self.dual.alexander(y) == -s) {
                w.set(group.cone.leg2_position(y).expect("y lies in B{≥−s}"), true);
            }
            for i in group.homology.coords(&w)?.ones() {
                phibar.set(group.offset + i, x, true);
            }
        }
        Ok((phi, phibar))
    }

    /// Matrix on homology of the natural projection `C_1(s) → C_0(target(s))`.
    fn projection_map(&self, target: impl Fn(i64) -> i64) -> Result<BitMatrix> {
        let mut out = BitMatrix::zeros(self.h_zero, self.h_one);
        for src in &self.one {
            let Some(dst) = self.zero_at(target(src.label)) else { continue };
            for (i, rep) in src.homology.representatives().iter().enumerate() {
                let image = carry(&src.cone, &dst.cone, rep);
                for k in dst.homology.coords(&image)?.ones() {
                    out.set(dst.offset + k, src.offset + i, true);
                }
            }
        }
        Ok(out)
    }
}

/// Identity on `B`, leg generators carried to the same leg when present there.
fn carry(src: &ProjectionCone, dst: &ProjectionCone, v: &BitVec) -> BitVec {
    let mut out = BitVec::zeros(dst.complex.dim());
    for i in v.ones() {
        if i < src.base {
            out.toggle(i);
            continue;
        }
        let a = i - src.base;
        let target = if a < src.leg1.len() {
            dst.leg1_position(src.leg1[a])
        } else {
            dst.leg2_position(src.leg2[a - src.leg1.len()])
        };
        if let Some(t) = target {
            out.toggle(t);
        }
    }
    out
}

/// Dimensions of `H_∞`, `H_1`, `H_0` per grading.
pub fn h_triple(c: &CfkModel) -> Result<HTriple> {
    Ok(Groups::new(c)?.triple())
}

/// The cones `C_1(s) = cone(B → B{≥s} ⊕ B{≥−s})` for `s ∈ [−g, g]` and their homology ranks.
pub fn h1_groups(c: &CfkModel) -> Result<BTreeMap<i64, (GradedComplex, usize)>> {
    let groups = Groups::new(c)?;
    Ok(groups.one.into_iter().map(|g| (g.label, (g.cone.complex, g.homology.rank()))).collect())
}

/// The cones `C_0(u) = cone(B → B{≥u} ⊕ B{≥1−u})` for `u ∈ [−g+1, g]` and their homology ranks.
pub fn h0_groups(c: &CfkModel) -> Result<BTreeMap<i64, (GradedComplex, usize)>> {
    let groups = Groups::new(c)?;
    Ok(groups.zero.into_iter().map(|g| (g.label, (g.cone.complex, g.homology.rank()))).collect())
}

/// `φ, φ̄: H_∞ → H_1`, checked against the exactness and cone-rank legs that involve them.
pub fn phi_maps(c: &CfkModel) -> Result<(BitMatrix, BitMatrix)> {
    let groups = Groups::new(c)?;
    let (phi, phibar) = groups.phi_maps()?;
    let t = groups.triple();
    let expected = t.h_inf_total() + t.h_one_total();
    for (name, m) in [("cone(φ)", &phi), ("cone(φ̄)", &phibar)] {
        let cone = expected - 2 * m.rank();
        if cone != t.h_zero_total() {
            return Err(Error::validation(
                &format!("{name} rank = h_0"),
                format!("rank H({name}) = {cone}, h_0 = {}", t.h_zero_total()),
            ));
        }
    }
    Ok((phi, phibar))
}

/// Candidate `ψ, ψ̄: H_1 → H_0` from the slice projections, fully validated.
pub fn psi_maps(c: &CfkModel) -> Result<(BitMatrix, BitMatrix)> {
    let maps = four_maps(c)?;
    Ok((maps.psi, maps.psibar))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FourMaps {
    pub triple: HTriple,
    pub phi: BitMatrix,
    pub phibar: BitMatrix,
    pub psi: BitMatrix,
    pub psibar: BitMatrix,
}

impl FourMaps {
    pub fn h_inf(&self) -> usize {
        self.phi.cols()
    }

    pub fn h_one(&self) -> usize {
        self.phi.rows()
    }

    pub fn h_zero(&self) -> usize {
        self.psi.rows()
    }
}

/// All four maps built on one set of homology bases, without validation.
pub fn four_maps_unchecked(c: &CfkModel) -> Result<FourMaps> {
    let groups = Groups::new(c)?;
    let (phi, phibar) = groups.phi_maps()?;
    let psi = groups.projection_map(|s| s)?;
    let psibar = groups.projection_map(|s| s + 1)?;
    Ok(FourMaps { triple: groups.triple(), phi, phibar, psi, psibar })
}

/// All four maps, failing with the first violated invariant.
pub fn four_maps(c: &CfkModel) -> Result<FourMaps> {
    let maps = four_maps_unchecked(c)?;
    validate_four_maps(&maps)?;
    Ok(maps)
}

/// One checked relation among the four maps.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MapCheck {
    pub id: String,
    pub pass: bool,
    pub lhs: String,
    pub rhs: String,
}

fn check(id: &str, lhs: impl ToString, rhs: impl ToString) -> MapCheck {
    let (lhs, rhs) = (lhs.to_string(), rhs.to_string());
    MapCheck { id: id.to_string(), pass: lhs == rhs, lhs, rhs }
}

/// Every invariant the four maps must satisfy, each with both compared values.
pub fn four_maps_checks(m: &FourMaps) -> Vec<MapCheck> {
    let (hi, h1, h0) = (m.h_inf(), m.h_one(), m.h_zero());
    let shapes = [(&m.phi, h1, hi), (&m.phibar, h1, hi), (&m.psi, h0, h1), (&m.psibar, h0, h1)];
    let shape_ok = shapes.iter().all(|(x, r, c)| x.rows() == *r && x.cols() == *c);
    let totals = (m.triple.h_inf_total(), m.triple.h_one_total(), m.triple.h_zero_total());
    let mut out = vec![check("dimensions", format!("{:?}", (hi, h1, h0)), format!("{totals:?}"))];
    if !shape_ok {
        out.push(check("map shapes", "inconsistent", "consistent"));
        return out;
    }
    let (rphi, rphibar, rpsi, rpsibar) = (m.phi.rank(), m.phibar.rank(), m.psi.rank(), m.psibar.rank());
    let zero = |x: &BitMatrix| if x.is_zero() { "0".to_string() } else { format!("nonzero (rank {})", x.rank()) };
    out.push(check("ψ̄φ = 0", zero(&m.psibar.mul(&m.phi)), "0"));
    out.push(check("ψφ̄ = 0", zero(&m.psi.mul(&m.phibar)), "0"));
    out.push(check("ker ψ̄ = im φ", h1 - rpsibar, rphi));
    out.push(check("ker ψ = im φ̄", h1 - rpsi, rphibar));
    out.push(check("rank H(cone φ) = h_0", hi + h1 - 2 * rphi, h0));
    out.push(check("rank H(cone ψ) = h_∞", h1 + h0 - 2 * rpsi, hi));
    out.push(check("2·rank φ = h_∞ + h_1 − h_0", 2 * rphi as i64, hi as i64 + h1 as i64 - h0 as i64));
    out.push(check("2·rank ψ̄ = h_0 + h_1 − h_∞", 2 * rpsibar as i64, h0 as i64 + h1 as i64 - hi as i64));
    out
}

pub fn validate_four_maps(m: &FourMaps) -> Result<()> {
    match four_maps_checks(m).into_iter().find(|c| !c.pass) {
        None => Ok(()),
        Some(c) => Err(Error::validation(&c.id, format!("{} vs {}", c.lhs, c.rhs))),
    }
}

/// Complement coordinates: a surjection `H → H / span(cols)` with kernel exactly the span.
fn quotient_projection(dim: usize, span: &BitMatrix) -> BitMatrix {
    let el = Elimination::new(span);
    let image: Vec<BitVec> = el.pivots.iter().map(|&p| span.column(p)).collect();
    let basis = extend_to_basis(dim, &image);
    let inv = basis.inverse().expect("extended basis is invertible");
    let r = image.len();
    inv.submatrix(r, 0, dim - r, dim)
}

/// Lexicographically first `(ψ, ψ̄)` satisfying every four-map invariant for the given `φ, φ̄`.
///
/// The invariants fix each kernel and each rank, so a solution is an injective
/// map out of the corresponding quotient of `H_1`; column-by-column
/// lexicographic order makes the first such map the standard inclusion.
pub fn constraint_search(h: &HTriple, phi: &BitMatrix, phibar: &BitMatrix) -> Result<(BitMatrix, BitMatrix)> {
    let (hi, h1, h0) = (h.h_inf_total(), h.h_one_total(), h.h_zero_total());
    if phi.rows() != h1 || phi.cols() != hi || phibar.rows() != h1 || phibar.cols() != hi {
        return Err(Error::DimensionMismatch("φ, φ̄ must be h_1 × h_∞".into()));
    }
    if h0 > h1 + hi {
        return Err(Error::NoSolution(format!("h_0 = {h0} exceeds h_1 + h_∞ = {}", h1 + hi)));
    }
    let need_psi_x2 = h1 as i64 + h0 as i64 - hi as i64;
    if need_psi_x2 < 0 || need_psi_x2 % 2 != 0 {
        return Err(Error::NoSolution(format!("rank ψ would be {need_psi_x2}/2")));
    }
    let search = |kernel: &BitMatrix, rank_needed: usize, which: &str| -> Result<BitMatrix> {
        let proj = quotient_projection(h1, kernel);
        if proj.rows() != rank_needed {
            return Err(Error::NoSolution(format!(
                "{which}: kernel forces rank {}, invariants need rank {rank_needed}",
                proj.rows()
            )));
        }
        if rank_needed > h0 {
            return Err(Error::NoSolution(format!("{which}: rank {rank_needed} exceeds h_0 = {h0}")));
        }
        let mut cols: Vec<BitVec> = Vec::with_capacity(rank_needed);
        for _ in 0..rank_needed {
            let current = BitMatrix::from_columns(h0, &cols).rank();
            let next = (1u64..(1u64 << h0.min(63)))
                .map(|bits| BitVec::from_bits(&(0..h0).map(|i| (bits >> (h0 - 1 - i)) & 1 == 1).collect::<Vec<_>>()))
                .find(|v| {
                    let mut trial = cols.clone();
                    trial.push(v.clone());
                    BitMatrix::from_columns(h0, &trial).rank() > current
                })
                .ok_or_else(|| Error::NoSolution(format!("{which}: no injective extension")))?;
            cols.push(next);
        }
        Ok(BitMatrix::from_columns(h0, &cols).mul(&proj))
    };
    let psibar = search(phi, h1 - phi.rank(), "ψ̄")?;
    let psi = search(phibar, need_psi_x2 as usize / 2, "ψ")?;
    let maps = FourMaps { triple: h.clone(), phi: phi.clone(), phibar: phibar.clone(), psi, psibar };
    validate_four_maps(&maps).map_err(|e| Error::NoSolution(e.to_string()))?;
    Ok((maps.psi, maps.psibar))
}

/// The block `Φ_{p,q}`: `φ^i: H_∞(i) → H_1(i)` and `φ̄^i: H_∞(i) → H_1(i+p)` for `i = 1..q`.
pub fn assemble_phi(phi: &BitMatrix, phibar: &BitMatrix, spec: SurgerySpec) -> Result<BitMatrix> {
    let (p, q) = (spec.p as usize, spec.q as usize);
    let mut layout = BlockLayout::new(vec![phi.rows(); p + q], vec![phi.cols(); q]);
    for i in 0..q {
        layout.place(i, i, phi.clone()).place(i + p, i, phibar.clone());
    }
    assemble_blocks(&layout)
}

/// The block `Ψ_{p,q}`: `ψ^j: H_1(j+q) → H_0(j)` and `ψ̄^j: H_1(j) → H_0(j)` for `j = 1..p`.
pub fn assemble_psi(psi: &BitMatrix, psibar: &BitMatrix, spec: SurgerySpec) -> Result<BitMatrix> {
    let (p, q) = (spec.p as usize, spec.q as usize);
    let mut layout = BlockLayout::new(vec![psi.rows(); p], vec![psi.cols(); p + q]);
    for j in 0..p {
        layout.place(j, j + q, psi.clone()).place(j, j, psibar.clone());
    }
    assemble_blocks(&layout)
}

/// Full differential on `H = q·H_∞ ⊕ (p+q)·H_1 ⊕ p·H_0`.
pub fn assemble_d(maps: &FourMaps, spec: SurgerySpec) -> Result<BitMatrix> {
    let (p, q) = (spec.p as usize, spec.q as usize);
    let (hi, h1, h0) = (maps.h_inf(), maps.h_one(), maps.h_zero());
    let mut layout = BlockLayout::new(vec![q * hi, (p + q) * h1, p * h0], vec![q * hi, (p + q) * h1, p * h0]);
    layout.place(1, 0, assemble_phi(&maps.phi, &maps.phibar, spec)?).place(
        2,
        1,
        assemble_psi(&maps.psi, &maps.psibar, spec)?,
    );
    assemble_blocks(&layout)
}

/// `dim H − 2·rank D` for validated maps.
pub fn rank_from_maps(maps: &FourMaps, spec: SurgerySpec) -> Result<usize> {
    let d = assemble_d(maps, spec)?;
    if !d.mul(&d).is_zero() {
        return Err(Error::validation("D² = 0", format!("assembled differential for {spec} does not square to zero")));
    }
    Ok(d.rows() - 2 * d.rank())
}

/// Rank of `HF^` of `p/q` surgery through the combinatorial complex.
pub fn assemble_and_rank(c: &CfkModel, spec: SurgerySpec) -> Result<usize> {
    rank_from_maps(&four_maps(c)?, spec)
}

/// Blocks of `φ̄` and `ψ` in bases where `φ = [[I,0],[0,0]]` and `ψ̄ = [[0,I],[0,0]]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockForms {
    pub a: BitMatrix,
    pub b: BitMatrix,
    pub c: BitMatrix,
    pub d: BitMatrix,
    pub m: BitMatrix,
    pub n: BitMatrix,
    pub l: BitMatrix,
    pub k: BitMatrix,
    pub r_phi: usize,
    pub r_psibar: usize,
    pub h_inf: usize,
    pub h_one: usize,
    pub h_zero: usize,
    /// Columns are the new bases of `H_∞`, `H_1`, `H_0`; empty for synthetic blocks.
    pub bases: Option<(BitMatrix, BitMatrix, BitMatrix)>,
}

impl BlockForms {
    /// Synthetic blocks; shapes: `a r×r`, `b r×u`, `c w×r`, `d w×u`, `m w×r`, `n w×w`, `l v×r`, `k v×w`.
    #[allow(clippy::too_many_arguments)]
    pub fn from_blocks(
        a: BitMatrix,
        b: BitMatrix,
        c: BitMatrix,
        d: BitMatrix,
        m: BitMatrix,
        n: BitMatrix,
        l: BitMatrix,
        k: BitMatrix,
    ) -> Result<Self> {
        let r = a.rows();
        let u = b.cols();
        let w = c.rows();
        let v = l.rows();
        let shapes = [
            ("a", &a, r, r),
            ("b", &b, r, u),
            ("c", &c, w, r),
            ("d", &d, w, u),
            ("m", &m, w, r),
            ("n", &n, w, w),
            ("l", &l, v, r),
            ("k", &k, v, w),
        ];
        for (name, x, rr, cc) in shapes {
            if x.rows() != rr || x.cols() != cc {
                return Err(Error::DimensionMismatch(format!(
                    "block {name} is {}x{}, expected {rr}x{cc}",
                    x.rows(),
                    x.cols()
                )));
            }
        }
        Ok(Self {
            a,
            b,
            c,
            d,
            m,
            n,
            l,
            k,
            r_phi: r,
            r_psibar: w,
            h_inf: r + u,
            h_one: r + w,
            h_zero: w + v,
            bases: None,
        })
    }

    pub fn phi(&self) -> BitMatrix {
        crate::f2linalg::projection_form(self.h_one, self.h_inf, self.r_phi)
    }

    pub fn psibar(&self) -> BitMatrix {
        let (r, w) = (self.r_phi, self.r_psibar);
        BitMatrix::from_fn(self.h_zero, self.h_one, |i, j| i < w && j == r + i)
    }

    pub fn phibar(&self) -> BitMatrix {
        self.a.hstack(&self.b).vstack(&self.c.hstack(&self.d))
    }

    pub fn psi(&self) -> BitMatrix {
        self.m.hstack(&self.n).vstack(&self.l.hstack(&self.k))
    }
}

/// Simultaneous normal form of `φ` and `ψ̄`.
pub fn normalize_blocks(maps: &FourMaps) -> Result<BlockForms> {
    let (phi, psibar) = (&maps.phi, &maps.psibar);
    if !psibar.mul(phi).is_zero() {
        return Err(Error::NormalizationFailure("ψ̄·φ ≠ 0".into()));
    }
    let (hi, h1, h0) = (maps.h_inf(), maps.h_one(), maps.h_zero());
    let el = Elimination::new(phi);
    let r = el.rank();
    if h1 - psibar.rank() != r {
        return Err(Error::NormalizationFailure(format!(
            "ker ψ̄ has dimension {}, im φ has dimension {r}",
            h1 - psibar.rank()
        )));
    }
    let mut u: Vec<BitVec> = el.pivots.iter().map(|&p| BitVec::unit(hi, p)).collect();
    u.extend(kernel_basis(phi).columns());
    let p_inf = BitMatrix::from_columns(hi, &u);

    let w1: Vec<BitVec> = el.pivots.iter().map(|&p| phi.column(p)).collect();
    let p_one = extend_to_basis(h1, &w1);
    let v1: Vec<BitVec> = (r..h1).map(|j| psibar.mul_vec(&p_one.column(j))).collect();
    let p_zero = extend_to_basis(h0, &v1);

    let inv_one = p_one.inverse().expect("basis");
    let inv_zero = p_zero.inverse().expect("basis");
    let phibar_n = inv_one.mul(&maps.phibar).mul(&p_inf);
    let psi_n = inv_zero.mul(&maps.psi).mul(&p_one);
    let w = h1 - r;
    let (u2, v2) = (hi - r, h0 - w);

    let mut forms = BlockForms::from_blocks(
        phibar_n.submatrix(0, 0, r, r),
        phibar_n.submatrix(0, r, r, u2),
        phibar_n.submatrix(r, 0, w, r),
        phibar_n.submatrix(r, r, w, u2),
        psi_n.submatrix(0, 0, w, r),
        psi_n.submatrix(0, r, w, w),
        psi_n.submatrix(w, 0, v2, r),
        psi_n.submatrix(w, r, v2, w),
    )?;
    debug_assert_eq!(inv_one.mul(phi).mul(&p_inf), forms.phi());
    debug_assert_eq!(inv_zero.mul(psibar).mul(&p_one), forms.psibar());
    forms.bases = Some((p_inf, p_one, p_zero));
    Ok(forms)
}

/// The matrix `A_i(a, b, c, d)`: `i+1` column bands of width `b.cols()`,
/// `i+1` row bands of height `c.rows()` then one of height `a.rows()`.
pub fn a_matrix(i: usize, a: &BitMatrix, b: &BitMatrix, c: &BitMatrix, d: &BitMatrix) -> Result<BitMatrix> {
    let mut row_dims = vec![c.rows(); i + 1];
    row_dims.push(a.rows());
    let mut layout = BlockLayout::new(row_dims, vec![b.cols(); i + 1]);
    for k in 0..=i {
        for m in 0..=k {
            let block = if m == k { d.clone() } else { c.mul(&a.pow((k - m - 1) as u32)).mul(b) };
            layout.place(k, m, block);
        }
    }
    for m in 0..=i {
        layout.place(i + 1, m, a.pow((i - m) as u32).mul(b));
    }
    assemble_blocks(&layout)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct XZReport {
    pub spec: SurgerySpec,
    pub x_table: Vec<usize>,
    pub z_table: Vec<usize>,
    pub x_pq: usize,
    pub z_pq: usize,
    pub y_value: usize,
    pub rank_phi_pq: usize,
    pub rank_psi_pq: usize,
}

/// `x_i = rank A_i(a,b,c,d)` for `i = 0..=imax`.
pub fn x_table(blocks: &BlockForms, imax: usize) -> Result<Vec<usize>> {
    (0..=imax).map(|i| Ok(a_matrix(i, &blocks.a, &blocks.b, &blocks.c, &blocks.d)?.rank())).collect()
}

/// `z_j = rank A_j(nᵗ, kᵗ, mᵗ, lᵗ)` for `j = 0..=jmax`.
pub fn z_table(blocks: &BlockForms, jmax: usize) -> Result<Vec<usize>> {
    let (nt, kt, mt, lt) = (blocks.n.transpose(), blocks.k.transpose(), blocks.m.transpose(), blocks.l.transpose());
    (0..=jmax).map(|j| Ok(a_matrix(j, &nt, &kt, &mt, &lt)?.rank())).collect()
}

fn recursion(big: u32, small: u32, table: &[usize]) -> usize {
    let (i, r) = ((big / small) as usize, (big % small) as usize);
    if i == 0 {
        big as usize * table[0]
    } else {
        r * table[i] + (small as usize - r) * table[i - 1]
    }
}

/// `x_{p,q}`, `z_{p,q}` and `y_{p/q}`, each checked against direct elimination of `Φ_{p,q}`, `Ψ_{p,q}`.
pub fn xz_ranks(blocks: &BlockForms, spec: SurgerySpec) -> Result<XZReport> {
    let (p, q) = (spec.p, spec.q);
    let xs = x_table(blocks, (q / p) as usize)?;
    let zs = z_table(blocks, (p / q) as usize)?;
    let x_pq = recursion(q, p, &xs);
    let z_pq = recursion(p, q, &zs);

    let rank_phi_pq = assemble_phi(&blocks.phi(), &blocks.phibar(), spec)?.rank();
    let rank_psi_pq = assemble_psi(&blocks.psi(), &blocks.psibar(), spec)?.rank();
    let phi_formula = q as usize * blocks.r_phi + x_pq;
    if rank_phi_pq != phi_formula {
        return Err(Error::IdentityMismatch {
            which: format!("rank Φ at {spec}"),
            direct: rank_phi_pq,
            formula: phi_formula,
        });
    }
    let psi_formula = p as usize * blocks.r_psibar + z_pq;
    if rank_psi_pq != psi_formula {
        return Err(Error::IdentityMismatch {
            which: format!("rank Ψ at {spec}"),
            direct: rank_psi_pq,
            formula: psi_formula,
        });
    }

    let y = p as i64 * blocks.h_inf as i64 + q as i64 * blocks.h_zero as i64 - 2 * (x_pq + z_pq) as i64;
    let dim = q as i64 * blocks.h_inf as i64 + (p + q) as i64 * blocks.h_one as i64 + p as i64 * blocks.h_zero as i64;
    let direct = dim - 2 * (rank_phi_pq + rank_psi_pq) as i64;
    if y != direct || y < 0 {
        return Err(Error::IdentityMismatch {
            which: format!("y at {spec}"),
            direct: direct.max(0) as usize,
            formula: y.max(0) as usize,
        });
    }
    Ok(XZReport { spec, x_table: xs, z_table: zs, x_pq, z_pq, y_value: y as usize, rank_phi_pq, rank_psi_pq })
}

/// `y_{p/q} = (p − q⌊p/q⌋)·h_⌈p/q⌉ + (q⌈p/q⌉ − p)·h_⌊p/q⌋`, or `h_p` when `q = 1`.
pub fn closed_form_y(spec: SurgerySpec, h: &mut impl FnMut(u32) -> Result<usize>) -> Result<usize> {
    let (p, q) = (spec.p, spec.q);
    if q == 1 {
        return h(p);
    }
    let (fl, ce) = (p / q, p.div_ceil(q));
    Ok((p - q * fl) as usize * h(ce)? + (q * ce - p) as usize * h(fl)?)
}

/// Structural consequences of simplicity, read off normalized blocks:
/// `d = 0`, `c·aⁱ·b = 0`, `l = 0`, `k·nⁱ·m = 0` for `i ≤ imax`, and `x_i = x_0`.
pub fn simple_block_checks(blocks: &BlockForms, imax: usize) -> Result<Vec<MapCheck>> {
    let zero = |x: &BitMatrix| if x.is_zero() { "0".to_string() } else { format!("rank {}", x.rank()) };
    let mut out = vec![check("d = 0", zero(&blocks.d), "0"), check("l = 0", zero(&blocks.l), "0")];
    for i in 0..=imax {
        let e = i as u32;
        out.push(check(&format!("c·a^{i}·b = 0"), zero(&blocks.c.mul(&blocks.a.pow(e)).mul(&blocks.b)), "0"));
        out.push(check(&format!("k·n^{i}·m = 0"), zero(&blocks.k.mul(&blocks.n.pow(e)).mul(&blocks.m)), "0"));
    }
    let xs = x_table(blocks, imax)?;
    for (i, x) in xs.iter().enumerate().skip(1) {
        out.push(check(&format!("x_{i} = x_0"), x, xs[0]));
    }
    Ok(out)
}
