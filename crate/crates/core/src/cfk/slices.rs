use std::collections::BTreeMap;

use super::complex::{ChainMap, GradedComplex};
use super::model::{CfkModel, Flip};
use super::reduce::reduce_model;
use crate::error::{Error, Result};
use crate::f2linalg::BitMatrix;

/// Which generators of `B` a slice keeps, by Alexander grading.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Slice {
    All,
    Eq(i64),
    Lt(i64),
    Ge(i64),
    Gt(i64),
}

impl Slice {
    pub fn contains(self, grading: i64) -> bool {
        match self {
            Slice::All => true,
            Slice::Eq(s) => grading == s,
            Slice::Lt(s) => grading < s,
            Slice::Ge(s) => grading >= s,
            Slice::Gt(s) => grading > s,
        }
    }
}

impl std::fmt::Display for Slice {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Slice::All => write!(f, "all"),
            Slice::Eq(s) => write!(f, "={s}"),
            Slice::Lt(s) => write!(f, "<{s}"),
            Slice::Ge(s) => write!(f, "≥{s}"),
            Slice::Gt(s) => write!(f, ">{s}"),
        }
    }
}

/// Differential of `B = C{i=0}` in the generator basis: arrows with `u_power = 0`.
pub fn b_differential(c: &CfkModel) -> BitMatrix {
    c.arrow_matrix(|(a, _)| a == 0)
}

fn graded_ids(c: &CfkModel, keep: &[usize]) -> Vec<(String, i64)> {
    keep.iter().map(|&i| (c.generators()[i].id.clone(), c.alexander(i))).collect()
}

pub fn b_complex(c: &CfkModel) -> GradedComplex {
    b_slice(c, Slice::All)
}

/// Span of the `B` generators in the slice, with the `B` differential restricted to them.
pub fn b_slice(c: &CfkModel, pred: Slice) -> GradedComplex {
    let keep = slice_indices(c, pred);
    let d = b_differential(c).select(&keep, &keep);
    GradedComplex::new(graded_ids(c, &keep), d).expect("restriction of B is a complex in a reduced filtration")
}

pub fn slice_indices(c: &CfkModel, pred: Slice) -> Vec<usize> {
    (0..c.len()).filter(|&i| pred.contains(c.alexander(i))).collect()
}

/// Position `(i, j)` of generator `x` in `A[t]`.
pub fn a_placement(c: &CfkModel, x: usize, t: i64) -> (i64, i64) {
    let a = c.alexander(x);
    if a <= t {
        (0, a)
    } else {
        (t - a, t)
    }
}

/// The complex `A[t] = C{max(i, j − t) = 0}`, one generator per model generator.
pub fn build_a(c: &CfkModel, t: i64) -> GradedComplex {
    let n = c.len();
    let mut d = BitMatrix::zeros(n, n);
    for arrow in c.arrows() {
        let (i, j) = a_placement(c, arrow.from, t);
        let (a, b) = c.drops(arrow);
        if (i - a, j - b) == a_placement(c, arrow.to, t) {
            d.toggle(arrow.to, arrow.from);
        }
    }
    let all: Vec<usize> = (0..n).collect();
    GradedComplex::new(graded_ids(c, &all), d).expect("A[t] is a subquotient complex")
}

/// Matrix of `v: A[t] → B`.
pub fn v_matrix(c: &CfkModel, t: i64) -> BitMatrix {
    let n = c.len();
    BitMatrix::from_fn(n, n, |i, j| i == j && a_placement(c, j, t).0 == 0)
}

/// Matrix of `h: A[t] → B`.
pub fn h_matrix(c: &CfkModel, t: i64) -> BitMatrix {
    let n = c.len();
    let proj = BitMatrix::from_fn(n, n, |i, j| i == j && c.alexander(j) >= t);
    c.flip_matrix().mul(&proj)
}

/// The vertical and horizontal edge maps `v, h: A[t] → B`.
pub fn edge_maps(c: &CfkModel, t: i64) -> Result<(ChainMap, ChainMap)> {
    let a = build_a(c, t);
    let b = b_complex(c);
    let v = ChainMap::new(a.clone(), b.clone(), v_matrix(c, t))?;
    let h = ChainMap::new(a, b, h_matrix(c, t)).map_err(|e| match c.flip() {
        Flip::Identity => Error::FlipUnavailable(format!(
            "identity flip does not give a chain map A[{t}] → B; supply an explicit flip"
        )),
        _ => e,
    })?;
    Ok((v, h))
}

/// Rank of `HF^` of the ambient manifold: homology of `B`.
pub fn hf_rank(c: &CfkModel) -> usize {
    b_complex(c).homology_rank()
}

/// Ranks of knot Floer homology per Alexander grading, read off the reduced model.
pub fn hfk_ranks(c: &CfkModel) -> BTreeMap<i64, usize> {
    let r = reduce_model(c);
    let mut out = BTreeMap::new();
    for g in r.generators() {
        *out.entry(g.alexander).or_insert(0) += 1;
    }
    out
}

pub fn hfk_total(c: &CfkModel) -> usize {
    hfk_ranks(c).values().sum()
}

/// Largest `|A|` over the reduced generators.
pub fn genus(c: &CfkModel) -> Result<i64> {
    let r = reduce_model(c);
    if r.is_empty() {
        return Err(Error::EmptyComplex(format!("model {:?} reduces to nothing", c.name())));
    }
    Ok(r.generators().iter().map(|g| g.alexander.abs()).max().unwrap_or(0))
}
