//! Consistency checks across routes, simplicity, and the rank inequality for nontrivial knots.

use std::path::Path;

use serde::Serialize;

use crate::cfk::{build_a, genus, hf_rank, hfk_ranks, hfk_total, load_model, reduce_model, CfkModel};
use crate::error::{Error, Result};
use crate::rational::{
    four_maps, four_maps_checks, normalize_blocks, rank_from_maps, simple_block_checks, xz_ranks, FourMaps,
};
use crate::surgery::{cone_rank_at_margin, coprime_specs, hf_surgery_rank, hfk_surgery_ranks, SurgerySpec};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub id: String,
    pub pass: bool,
    pub lhs: String,
    pub rhs: String,
    pub context: String,
}

impl Check {
    pub fn compare(id: impl Into<String>, lhs: impl ToString, rhs: impl ToString, context: impl Into<String>) -> Self {
        let (lhs, rhs) = (lhs.to_string(), rhs.to_string());
        Self { id: id.into(), pass: lhs == rhs, lhs, rhs, context: context.into() }
    }

    pub fn with(
        id: impl Into<String>,
        pass: bool,
        lhs: impl ToString,
        rhs: impl ToString,
        context: impl Into<String>,
    ) -> Self {
        Self { id: id.into(), pass, lhs: lhs.to_string(), rhs: rhs.to_string(), context: context.into() }
    }

    fn error(id: impl Into<String>, e: &Error) -> Self {
        Self::with(id, false, e.kind(), "ok", e.to_string())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub model: String,
    pub checks: Vec<Check>,
    pub overall: bool,
}

impl Verdict {
    pub fn new(model: impl Into<String>, checks: Vec<Check>) -> Self {
        let overall = checks.iter().all(|c| c.pass);
        Self { model: model.into(), checks, overall }
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass)
    }
}

/// Whether `rank HF^ = rank HFK^`. When it holds, the reduced model must have
/// neither vertical nor horizontal arrows.
pub fn is_simple(c: &CfkModel) -> Result<bool> {
    let simple = hf_rank(c) == hfk_total(c);
    if simple {
        let r = reduce_model(c);
        if let Some(a) = r.arrows().iter().find(|a| {
            let (u, b) = r.drops(a);
            u == 0 || b == 0
        }) {
            return Err(Error::StructureContradiction(format!(
                "rank equality holds but arrow {}→{} with drops {:?} survives reduction",
                r.generators()[a.from].id,
                r.generators()[a.to].id,
                r.drops(a)
            )));
        }
    }
    Ok(simple)
}

/// Genus zero exactly when the reduced model has generators only in grading 0.
pub fn ni_trivial(c: &CfkModel) -> Result<bool> {
    Ok(genus(c)? == 0)
}

/// Genus 0 forces equal ranks; positive genus forces `rank HFK^ > rank HF^`.
pub fn main_theorem_check(c: &CfkModel) -> Verdict {
    let (hfk, hf) = (hfk_total(c), hf_rank(c));
    let check = match genus(c) {
        Err(e) => Check::error("main_theorem", &e),
        Ok(0) => {
            Check::with("main_theorem", hfk == hf, format!("HFK^ {hfk}"), format!("HF^ {hf}"), "genus 0: equality")
        }
        Ok(g) => Check::with(
            "main_theorem",
            hfk > hf,
            format!("HFK^ {hfk}"),
            format!("HF^ {hf}"),
            format!("genus {g}: strict >"),
        ),
    };
    Verdict::new(c.name(), vec![check])
}

fn route_checks(
    maps: &Result<FourMaps>,
    specs: &[SurgerySpec],
    route21: impl Fn(SurgerySpec) -> Result<usize>,
) -> Vec<Check> {
    let mut out = Vec::new();
    let maps = match maps {
        Ok(m) => m,
        Err(e) => {
            for spec in specs {
                out.push(Check::error(format!("cross_route[{spec}]"), e));
                out.push(Check::error(format!("closed_form_xz[{spec}]"), e));
            }
            return out;
        }
    };
    let blocks = normalize_blocks(maps);
    for &spec in specs {
        let direct = route21(spec);
        let combinatorial = rank_from_maps(maps, spec);
        out.push(match (&direct, &combinatorial) {
            (Ok(a), Ok(b)) => Check::compare(format!("cross_route[{spec}]"), a, b, "cone21 vs combinatorial23"),
            (Err(e), _) | (_, Err(e)) => Check::error(format!("cross_route[{spec}]"), e),
        });
        let xz = blocks.as_ref().map_err(Clone::clone).and_then(|b| xz_ranks(b, spec));
        out.push(match (&direct, &xz) {
            (Ok(a), Ok(rep)) => {
                Check::compare(format!("closed_form_xz[{spec}]"), a, rep.y_value, "cone21 vs p·h_∞+q·h_0−2(x+z)")
            }
            (Err(e), _) | (_, Err(e)) => Check::error(format!("closed_form_xz[{spec}]"), e),
        });
    }
    out
}

/// Truncated cone against the combinatorial complex for every coprime `p ≤ pmax`, `q ≤ qmax`.
pub fn cross_route_check(c: &CfkModel, pmax: u32, qmax: u32) -> Verdict {
    let maps = four_maps(c);
    let checks = route_checks(&maps, &coprime_specs(pmax, qmax), |s| hf_surgery_rank(c, s));
    Verdict::new(c.name(), checks)
}

/// Identities among `h_n` for simple models.
pub fn simple_identities_check(c: &CfkModel, nmax: u32) -> Result<Verdict> {
    if !is_simple(c)? {
        return Err(Error::NotSimple(format!("model {:?}", c.name())));
    }
    let maps = four_maps(c)?;
    let blocks = normalize_blocks(&maps)?;
    let (h_inf, h0) = (maps.h_inf(), maps.h_zero());
    let g = genus(c)?;
    let top = nmax.max(2) + 1;
    let h: Vec<usize> = std::iter::once(Ok(h0))
        .chain((1..=top).map(|j| hf_surgery_rank(c, SurgerySpec::integer(j)?)))
        .collect::<Result<_>>()?;

    let mut checks = vec![Check::compare("h_2 = 2h_1 − h_0", h[2] as i64, 2 * h[1] as i64 - h0 as i64, "")];
    let x0 = crate::rational::x_table(&blocks, 0)?[0];
    let zs = crate::rational::z_table(&blocks, nmax as usize)?;
    for j in 1..=nmax as usize {
        let rhs = j as i64 * h_inf as i64 + h0 as i64 - 2 * (x0 + zs[j - 1]) as i64;
        checks.push(Check::compare(
            format!("h_{j} = j·h_∞ + h_0 − 2(x_0 + z_{})", j - 1),
            h[j] as i64,
            rhs,
            format!("h_∞ {h_inf}, h_0 {h0}, x_0 {x0}, z_{} {}", j - 1, zs[j - 1]),
        ));
    }
    for j in (g.max(1) as usize)..=nmax as usize {
        checks.push(Check::compare(format!("h_{} − h_{j} = h_∞", j + 1), h[j + 1] as i64 - h[j] as i64, h_inf, ""));
    }
    for sc in simple_block_checks(&blocks, nmax as usize)? {
        checks.push(Check::with(sc.id, sc.pass, sc.lhs, sc.rhs, "normalized blocks"));
    }
    Ok(Verdict::new(c.name(), checks))
}

const MARGINS: [u32; 4] = [1, 2, 3, 4];

/// Bounds for the corpus checks.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CorpusOptions {
    pub pmax: u32,
    pub qmax: u32,
    pub nmax: u32,
}

impl Default for CorpusOptions {
    fn default() -> Self {
        Self { pmax: 4, qmax: 4, nmax: 6 }
    }
}

/// Every corpus check on one validated model.
pub fn model_checks(c: &CfkModel, opts: CorpusOptions) -> Vec<Check> {
    let mut checks = vec![Check::with("validate", true, "valid", "valid", "")];
    checks.extend(main_theorem_check(c).checks);

    let specs = coprime_specs(opts.pmax, opts.qmax);
    let mut by_margin = Vec::new();
    for &spec in &specs {
        let ranks: Vec<Result<usize>> = MARGINS.iter().map(|&m| cone_rank_at_margin(c, spec, m)).collect();
        by_margin.push((spec, ranks));
    }
    let route21 = |spec: SurgerySpec| -> Result<usize> {
        let (_, ranks) = by_margin.iter().find(|(s, _)| *s == spec).expect("spec computed");
        let at = ranks[1].clone()?;
        let next = ranks[2].clone()?;
        if at != next {
            return Err(Error::WindowUnstable { margin: 2, at_margin: at, next: 3, at_next: next });
        }
        Ok(at)
    };
    let maps = four_maps(c);
    checks.extend(route_checks(&maps, &specs, route21));

    match &maps {
        Ok(m) => {
            for mc in four_maps_checks(m) {
                checks.push(Check::with(format!("four_maps:{}", mc.id), mc.pass, mc.lhs, mc.rhs, ""));
            }
        }
        Err(e) => checks.push(Check::error("four_maps", e)),
    }

    for (spec, ranks) in &by_margin {
        let values: Vec<String> =
            ranks.iter().map(|r| r.as_ref().map_or_else(|e| e.kind().to_string(), |v| v.to_string())).collect();
        let stable = ranks.iter().all(|r| r.is_ok()) && values.iter().all(|v| *v == values[0]);
        checks.push(Check::with(
            format!("window_stability[{spec}]"),
            stable,
            values.join(","),
            "constant",
            "margins 1,2,3,4",
        ));
        checks.push(match &ranks[1] {
            Ok(v) => Check::compare(format!("parity[{spec}]"), v % 2, spec.p % 2, "rank ≡ p mod 2"),
            Err(e) => Check::error(format!("parity[{spec}]"), e),
        });
    }

    let (hf, hfk) = (hf_rank(c), hfk_total(c));
    checks.push(Check::compare("parity:hfk≡hf", hfk % 2, hf % 2, format!("HFK^ {hfk}, HF^ {hf}")));
    checks.push(Check::compare("parity:hf_odd", hf % 2, 1, ""));
    checks.extend(mirror_symmetry_checks(c));
    checks.extend(knot_surgery_total_checks(c, opts.nmax));
    checks
}

fn mirror_symmetry_checks(c: &CfkModel) -> Vec<Check> {
    let m = c.mirror();
    let mut out = vec![Check::compare("mirror_symmetry:hf", hf_rank(&m), hf_rank(c), "")];
    let reflected: std::collections::BTreeMap<i64, usize> = hfk_ranks(c).into_iter().map(|(s, v)| (-s, v)).collect();
    out.push(Check::compare("mirror_symmetry:hfk", format!("{:?}", hfk_ranks(&m)), format!("{reflected:?}"), "s ↦ −s"));
    let g = genus(c).unwrap_or(0);
    let ranks: Vec<(i64, usize, usize)> =
        (0..=g + 1).map(|t| (t, build_a(c, t).homology_rank(), build_a(c, -t).homology_rank())).collect();
    let ok = ranks.iter().all(|(_, a, b)| a == b);
    out.push(Check::with(
        "mirror_symmetry:A[t]~A[-t]",
        ok,
        format!("{:?}", ranks.iter().map(|r| r.1).collect::<Vec<_>>()),
        format!("{:?}", ranks.iter().map(|r| r.2).collect::<Vec<_>>()),
        format!("t = 0..={}", g + 1),
    ));
    out
}

fn knot_surgery_total_checks(c: &CfkModel, nmax: u32) -> Vec<Check> {
    let simple = match is_simple(c) {
        Ok(s) => s,
        Err(e) => return vec![Check::error("knot_surgery_total", &e)],
    };
    (1..=nmax)
        .map(|n| {
            let id = format!("knot_surgery_total[{n}]");
            let total = hfk_surgery_ranks(c, n).map(|m| m.values().sum::<usize>());
            let hf = SurgerySpec::integer(n).and_then(|s| hf_surgery_rank(c, s));
            match (total, hf) {
                (Ok(t), Ok(h)) if simple => Check::compare(id, t, h, "simple: Σ_s HFK^ = HF^"),
                (Ok(t), Ok(h)) => Check::with(id, t >= h, t, h, "Σ_s HFK^ ≥ HF^"),
                (Err(e), _) | (_, Err(e)) => Check::error(id, &e),
            }
        })
        .collect()
}

/// Runs every check on each `*.json` file directly inside `dir`, sorted by file name.
pub fn corpus_run(dir: &Path) -> Result<Vec<Verdict>> {
    corpus_run_with(dir, CorpusOptions::default())
}

pub fn corpus_run_with(dir: &Path, opts: CorpusOptions) -> Result<Vec<Verdict>> {
    let mut files: Vec<_> = std::fs::read_dir(dir)
        .map_err(|e| Error::Io(format!("{}: {e}", dir.display())))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_file() && p.extension().is_some_and(|x| x == "json"))
        .collect();
    files.sort();
    Ok(files.iter().map(|p| verify_file(p, opts)).collect())
}

/// All checks for one model file; parse and validation failures become a failing `validate` check.
pub fn verify_file(path: &Path, opts: CorpusOptions) -> Verdict {
    let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    match load_model(path) {
        Ok(c) => Verdict::new(c.name(), model_checks(&c, opts)),
        Err(e) => Verdict::new(stem, vec![Check::error("validate", &e)]),
    }
}
