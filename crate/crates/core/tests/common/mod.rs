#![allow(dead_code)]

use std::path::PathBuf;

use hfrank_core::cfk::{load_model, CfkModel};
use hfrank_core::f2linalg::BitMatrix;

pub fn corpus_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus")
}

pub fn corpus(name: &str) -> CfkModel {
    load_model(&corpus_dir().join(format!("{name}.json"))).expect("corpus model loads")
}

pub const CORPUS: [&str; 5] = ["figure8", "t25", "trefoil_lh", "trefoil_rh", "unknot"];

/// Rank by plain row reduction on `Vec<Vec<bool>>`.
pub fn naive_rank(rows: &[Vec<bool>]) -> usize {
    let mut m: Vec<Vec<bool>> = rows.to_vec();
    let cols = m.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..m.len()).find(|&i| m[i][c]) else { continue };
        m.swap(rank, p);
        let pivot = m[rank].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != rank && row[c] {
                for (x, y) in row.iter_mut().zip(&pivot) {
                    *x ^= *y;
                }
            }
        }
        rank += 1;
    }
    rank
}

pub fn to_rows(m: &BitMatrix) -> Vec<Vec<bool>> {
    (0..m.rows()).map(|i| (0..m.cols()).map(|j| m.get(i, j)).collect()).collect()
}

pub fn naive_rank_of(m: &BitMatrix) -> usize {
    naive_rank(&to_rows(m))
}

/// Mapping cone for `p/q` surgery built directly from the model data on a
/// window of half-width `q·(G + margin)` where `G = max |A|` over all input
/// generators; homology rank by naive elimination.
pub fn oracle_cone_rank(c: &CfkModel, p: i64, q: i64, margin: i64) -> usize {
    let n = c.len();
    let alex: Vec<i64> = c.generators().iter().map(|g| g.alexander).collect();
    let g = alex.iter().map(|a| a.abs()).max().unwrap_or(0);
    let flip = c.flip_matrix();
    let place = |x: usize, t: i64| if alex[x] <= t { (0, alex[x]) } else { (t - alex[x], t) };
    let arrows: Vec<(usize, usize, i64, i64)> = c
        .arrows()
        .iter()
        .map(|a| (a.from, a.to, a.u_power as i64, alex[a.from] - alex[a.to] + a.u_power as i64))
        .collect();

    let lo = -q * (g + margin);
    let hi = q * (g + margin) + p;
    let a_labels: Vec<i64> = (lo..=hi).collect();
    let b_labels: Vec<i64> = (lo + p..=hi).collect();
    let total = n * (a_labels.len() + b_labels.len());
    let mut d = vec![vec![false; total]; total];
    let a_off = |s: i64| ((s - lo) as usize) * n;
    let b_off = |s: i64| -> Option<usize> {
        (s >= lo + p && s <= hi).then(|| n * a_labels.len() + ((s - lo - p) as usize) * n)
    };
    for &s in &a_labels {
        let t = s.div_euclid(q);
        let o = a_off(s);
        for &(x, y, a, b) in &arrows {
            let (i, j) = place(x, t);
            if (i - a, j - b) == place(y, t) {
                d[o + y][o + x] ^= true;
            }
        }
        for x in 0..n {
            if let Some(bo) = b_off(s) {
                if place(x, t).0 == 0 {
                    d[bo + x][o + x] ^= true;
                }
            }
            if let Some(bo) = b_off(s + p) {
                if alex[x] >= t {
                    for y in 0..n {
                        if flip.get(y, x) {
                            d[bo + y][o + x] ^= true;
                        }
                    }
                }
            }
        }
    }
    for &s in &b_labels {
        let bo = b_off(s).unwrap();
        for &(x, y, a, _) in &arrows {
            if a == 0 {
                d[bo + y][bo + x] ^= true;
            }
        }
    }
    total - 2 * naive_rank(&d)
}

/// `rank Φ_{p,q}` and `rank Ψ_{p,q}` for normalized blocks, by naive elimination
/// of matrices laid out entry by entry.
pub fn oracle_block_ranks(b: &hfrank_core::rational::BlockForms, p: usize, q: usize) -> (usize, usize) {
    let (r, w) = (b.r_phi, b.r_psibar);
    let (hi, h1, h0) = (b.h_inf, b.h_one, b.h_zero);
    let phibar = |i: usize, j: usize| match (i < r, j < r) {
        (true, true) => b.a.get(i, j),
        (true, false) => b.b.get(i, j - r),
        (false, true) => b.c.get(i - r, j),
        (false, false) => b.d.get(i - r, j - r),
    };
    let psi = |i: usize, j: usize| match (i < w, j < r) {
        (true, true) => b.m.get(i, j),
        (true, false) => b.n.get(i, j - r),
        (false, true) => b.l.get(i - w, j),
        (false, false) => b.k.get(i - w, j - r),
    };
    let mut phi_rows = vec![vec![false; q * hi]; (p + q) * h1];
    for band in 0..q {
        for x in 0..hi {
            for y in 0..h1 {
                phi_rows[band * h1 + y][band * hi + x] ^= x == y && x < r;
                phi_rows[(band + p) * h1 + y][band * hi + x] ^= phibar(y, x);
            }
        }
    }
    let mut psi_rows = vec![vec![false; (p + q) * h1]; p * h0];
    for band in 0..p {
        for x in 0..h1 {
            for y in 0..h0 {
                psi_rows[band * h0 + y][band * h1 + x] ^= y < w && x == r + y;
                psi_rows[band * h0 + y][(band + q) * h1 + x] ^= psi(y, x);
            }
        }
    }
    (naive_rank(&phi_rows), naive_rank(&psi_rows))
}

/// `t_{big,small}` from a table `t_0, t_1, …` indexed by `⌊big/small⌋`.
pub fn interpolate(big: usize, small: usize, table: &[usize]) -> usize {
    let (i, r) = (big / small, big % small);
    if i == 0 {
        big * table[0]
    } else {
        r * table[i] + (small - r) * table[i - 1]
    }
}

/// Random blocks with `r, w ≤ 4` and `u, v ≤ 4`.
pub fn random_blocks(rng: &mut impl rand::Rng) -> hfrank_core::rational::BlockForms {
    let mut dim = || rng.gen_range(0..=4usize);
    let (r, w, u, v) = (dim(), dim(), dim(), dim());
    let mut m = |rows: usize, cols: usize| BitMatrix::from_fn(rows, cols, |_, _| rng.gen_bool(0.5));
    let (a, b, c, d) = (m(r, r), m(r, u), m(w, r), m(w, u));
    let (mm, n, l, k) = (m(w, r), m(w, w), m(v, r), m(v, w));
    hfrank_core::rational::BlockForms::from_blocks(a, b, c, d, mm, n, l, k).expect("shapes agree")
}
