mod common;

use std::time::{Duration, Instant};

use common::{corpus, interpolate, oracle_block_ranks, oracle_cone_rank, random_blocks, CORPUS};
use hfrank_core::rational::{assemble_and_rank, four_maps, four_maps_checks, x_table, z_table};
use hfrank_core::surgery::{
    cone_rank_at_margin, coprime_specs, hf_surgery_rank, hfk_surgery_ranks, simple_y_rank, SurgerySpec,
};
use hfrank_core::verify::{main_theorem_check, simple_identities_check};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, &'static str, fn() -> Outcome);

fn within(start: Instant, limit: Duration, what: &str) -> Result<(), String> {
    let took = start.elapsed();
    if took < limit {
        Ok(())
    } else {
        Err(format!("{what} took {took:?}, limit {limit:?}"))
    }
}

/// `(p − q⌊p/q⌋)·h_⌈p/q⌉ + (q⌈p/q⌉ − p)·h_⌊p/q⌋` with `h_n = n`, or `h_p` for `q = 1`.
fn lens_formula(p: u64, q: u64) -> u64 {
    if q == 1 {
        return p;
    }
    let (fl, ce) = (p / q, p.div_ceil(q));
    (p - q * fl) * ce + (q * ce - p) * fl
}

fn ac1() -> Outcome {
    let start = Instant::now();
    let u = corpus("unknot");
    let specs = coprime_specs(8, 8);
    for &s in &specs {
        let cone = hf_surgery_rank(&u, s).map_err(|e| format!("{s}: {e}"))?;
        let comb = assemble_and_rank(&u, s).map_err(|e| format!("{s}: {e}"))?;
        let closed = simple_y_rank(&u, s).map_err(|e| format!("{s}: {e}"))?;
        let oracle = lens_formula(s.p as u64, s.q as u64) as usize;
        let p = s.p as usize;
        if (cone, comb, closed, oracle) != (p, p, p, p) {
            return Err(format!("{s}: cone {cone}, combinatorial {comb}, closed {closed}, oracle {oracle}, want {p}"));
        }
    }
    within(start, Duration::from_secs(1), "unknot sweep")?;
    Ok(format!("{} specs, {:?}", specs.len(), start.elapsed()))
}

fn ac2() -> Outcome {
    let start = Instant::now();
    let c = corpus("trefoil_rh");
    for (p, want) in [(1u32, 1usize), (5, 5), (7, 7)] {
        let s = SurgerySpec::integer(p).map_err(|e| e.to_string())?;
        let got = hf_surgery_rank(&c, s).map_err(|e| format!("{s}: {e}"))?;
        let m2 = cone_rank_at_margin(&c, s, 2).map_err(|e| e.to_string())?;
        let m3 = cone_rank_at_margin(&c, s, 3).map_err(|e| e.to_string())?;
        let o2 = oracle_cone_rank(&c, p as i64, 1, 2);
        let o3 = oracle_cone_rank(&c, p as i64, 1, 3);
        if [got, m2, m3, o2, o3] != [want; 5] {
            return Err(format!("{s}: rank {got}, margins {m2}/{m3}, oracle {o2}/{o3}, want {want}"));
        }
    }
    within(start, Duration::from_secs(1), "trefoil integer surgeries")?;
    Ok(format!("1, 5, 7 at margins 2 and 3, {:?}", start.elapsed()))
}

fn ac3() -> Outcome {
    let mut seen = Vec::new();
    for name in CORPUS {
        let v = main_theorem_check(&corpus(name));
        let c = &v.checks[0];
        if !v.overall {
            return Err(format!("{name}: {} vs {} ({})", c.lhs, c.rhs, c.context));
        }
        seen.push(format!("{name} {}/{}", c.lhs, c.rhs));
    }
    Ok(seen.join("; "))
}

fn ac4() -> Outcome {
    let start = Instant::now();
    let mut n = 0;
    for name in CORPUS {
        let c = corpus(name);
        for s in coprime_specs(4, 4) {
            let a = hf_surgery_rank(&c, s).map_err(|e| format!("{name} {s}: {e}"))?;
            let b = assemble_and_rank(&c, s).map_err(|e| format!("{name} {s}: {} {e}", e.kind()))?;
            if a != b {
                return Err(format!("{name} {s}: cone {a}, combinatorial {b}"));
            }
            n += 1;
        }
    }
    within(start, Duration::from_secs(10), "route agreement")?;
    Ok(format!("{n} pairs, {:?}", start.elapsed()))
}

fn ac5() -> Outcome {
    let u = corpus("unknot");
    for n in 1..=6u32 {
        let total: usize = hfk_surgery_ranks(&u, n).map_err(|e| e.to_string())?.values().sum();
        let hf = hf_surgery_rank(&u, SurgerySpec::integer(n).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
        if (total, hf) != (n as usize, n as usize) {
            return Err(format!("n={n}: Σ {total}, HF^ {hf}"));
        }
    }
    Ok("n = 1..=6".into())
}

fn ac6() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_b10c);
    let specs = coprime_specs(5, 5);
    let mut mismatches = Vec::new();
    for trial in 0..200 {
        let b = random_blocks(&mut rng);
        let s = specs[trial % specs.len()];
        let (p, q) = (s.p as usize, s.q as usize);
        let xs = x_table(&b, q / p).map_err(|e| e.to_string())?;
        let zs = z_table(&b, p / q).map_err(|e| e.to_string())?;
        let phi_formula = q * b.r_phi + interpolate(q, p, &xs);
        let psi_formula = p * b.r_psibar + interpolate(p, q, &zs);
        let (phi_direct, psi_direct) = oracle_block_ranks(&b, p, q);
        if phi_direct != phi_formula {
            mismatches
                .push(format!("IdentityMismatch rank Φ trial {trial} {s}: direct {phi_direct}, formula {phi_formula}"));
        }
        if psi_direct != psi_formula {
            mismatches
                .push(format!("IdentityMismatch rank Ψ trial {trial} {s}: direct {psi_direct}, formula {psi_formula}"));
        }
    }
    if !mismatches.is_empty() {
        return Err(format!("{} mismatches; first: {}", mismatches.len(), mismatches[0]));
    }
    within(start, Duration::from_secs(5), "block identities")?;
    Ok(format!("200/200, {:?}", start.elapsed()))
}

fn ac7() -> Outcome {
    let mut n = 0;
    for name in CORPUS {
        let maps = four_maps(&corpus(name)).map_err(|e| format!("{name}: {e}"))?;
        for c in four_maps_checks(&maps) {
            if !c.pass {
                return Err(format!("{name} {}: {} vs {}", c.id, c.lhs, c.rhs));
            }
            n += 1;
        }
    }
    Ok(format!("{n} checks"))
}

fn ac8() -> Outcome {
    let mut n = 0;
    for name in CORPUS {
        let c = corpus(name);
        for s in coprime_specs(6, 6) {
            let ranks: Vec<usize> = (1..=4)
                .map(|m| cone_rank_at_margin(&c, s, m))
                .collect::<Result<_, _>>()
                .map_err(|e| format!("{name} {s}: {e}"))?;
            if ranks.iter().any(|&r| r != ranks[0]) {
                return Err(format!("{name} {s}: margins 1..4 give {ranks:?}"));
            }
            if ranks[0] % 2 != s.p as usize % 2 {
                return Err(format!("{name} {s}: rank {} has the wrong parity", ranks[0]));
            }
            n += 1;
        }
    }
    Ok(format!("{n} model/spec pairs"))
}

fn ac9() -> Outcome {
    let v = simple_identities_check(&corpus("unknot"), 5).map_err(|e| e.to_string())?;
    if let Some(f) = v.failures().next() {
        return Err(format!("{}: {} vs {} ({})", f.id, f.lhs, f.rhs, f.context));
    }
    Ok(format!("{} identities", v.checks.len()))
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("AC1", "unknot lens ranks", ac1),
        ("AC2", "trefoil integer surgeries", ac2),
        ("AC3", "main theorem on corpus", ac3),
        ("AC4", "route agreement", ac4),
        ("AC5", "knot surgery propagation on unknot", ac5),
        ("AC6", "block-machinery identity", ac6),
        ("AC7", "four-map invariants", ac7),
        ("AC8", "window stability and parity", ac8),
        ("AC9", "simple-knot identities", ac9),
    ];
    let mut failed = 0;
    for (id, title, run) in criteria {
        match run() {
            Ok(detail) => println!("{id} PASS {title}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("{id} FAIL {title}: {detail}");
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
