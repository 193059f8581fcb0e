use std::collections::BTreeSet;

use super::model::{Arrow, CfkModel, Flip, Generator};
use crate::f2linalg::BitMatrix;

/// Cancels `(0,0)` arrows until none remain. The flip is carried along through
/// the cancellation maps on the `j = 0` and `i = 0` columns.
pub fn reduce_model(c: &CfkModel) -> CfkModel {
    let n = c.len();
    let alex: Vec<i64> = c.generators().iter().map(|g| g.alexander).collect();
    let drop_b = |a: &(usize, usize, u32)| alex[a.0] - alex[a.1] + a.2 as i64;
    let mut arrows: BTreeSet<(usize, usize, u32)> = c.arrows().iter().map(|a| (a.from, a.to, a.u_power)).collect();
    let mut alive = vec![true; n];
    let mut flip = c.flip_matrix();
    let ids: Vec<&str> = c.generators().iter().map(|g| g.id.as_str()).collect();

    while let Some(&(x, y, _)) =
        arrows.iter().filter(|a| a.2 == 0 && drop_b(a) == 0).min_by_key(|a| (ids[a.0], ids[a.1]))
    {
        let into_y: Vec<(usize, u32)> =
            arrows.iter().filter(|a| a.1 == y && a.0 != x && a.0 != y).map(|a| (a.0, a.2)).collect();
        let out_x: Vec<(usize, u32)> =
            arrows.iter().filter(|a| a.0 == x && a.1 != y && a.1 != x).map(|a| (a.1, a.2)).collect();

        // f: reduced j=0 column → old, g: old i=0 column → reduced
        let mut f = BitMatrix::zeros(n, n);
        let mut g = BitMatrix::zeros(n, n);
        for z in (0..n).filter(|&z| alive[z] && z != x && z != y) {
            f.set(z, z, true);
            g.set(z, z, true);
        }
        for a in arrows.iter().filter(|a| a.1 == y && a.0 != x && a.0 != y && drop_b(a) == 0) {
            f.toggle(x, a.0);
        }
        for &(w, u) in &out_x {
            if u == 0 {
                g.toggle(w, y);
            }
        }
        flip = g.mul(&flip).mul(&f);

        arrows.retain(|a| a.0 != x && a.0 != y && a.1 != x && a.1 != y);
        for &(z, a1) in &into_y {
            for &(w, a2) in &out_x {
                let key = (z, w, a1 + a2);
                if !arrows.remove(&key) {
                    arrows.insert(key);
                }
            }
        }
        alive[x] = false;
        alive[y] = false;
    }

    let keep: Vec<usize> = (0..n).filter(|&i| alive[i]).collect();
    if keep.len() == n {
        return c.clone();
    }
    let mut new_index = vec![usize::MAX; n];
    for (k, &i) in keep.iter().enumerate() {
        new_index[i] = k;
    }
    let generators: Vec<Generator> = keep.iter().map(|&i| c.generators()[i].clone()).collect();
    let arrows: Vec<Arrow> =
        arrows.iter().map(|&(from, to, u_power)| Arrow { from: new_index[from], to: new_index[to], u_power }).collect();
    let flip_r = flip.select(&keep, &keep);
    let flip = recover_flip(c.flip(), &flip_r, &generators, &arrows);
    CfkModel::assemble(c.name().to_string(), generators, arrows, flip)
}

fn recover_flip(original: &Flip, f: &BitMatrix, generators: &[Generator], arrows: &[Arrow]) -> Flip {
    let n = generators.len();
    if matches!(original, Flip::Identity) && *f == BitMatrix::identity(n) {
        return Flip::Identity;
    }
    let mut partner = Vec::with_capacity(n);
    for x in 0..n {
        let col = f.column(x);
        if col.count_ones() != 1 {
            return Flip::Explicit(f.clone());
        }
        partner.push(col.ones().next().unwrap());
    }
    let involutive =
        (0..n).all(|x| partner[partner[x]] == x && generators[partner[x]].alexander == -generators[x].alexander);
    let set: BTreeSet<&Arrow> = arrows.iter().collect();
    let carried = arrows.iter().all(|a| {
        let b = generators[a.from].alexander - generators[a.to].alexander + a.u_power as i64;
        set.contains(&Arrow { from: partner[a.from], to: partner[a.to], u_power: b as u32 })
    });
    if involutive && carried {
        Flip::Involution(partner)
    } else {
        Flip::Explicit(f.clone())
    }
}
