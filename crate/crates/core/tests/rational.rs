mod common;

use common::{corpus, naive_rank_of, CORPUS};
use hfrank_core::f2linalg::BitMatrix;
use hfrank_core::rational::*;
use hfrank_core::surgery::{coprime_specs, hf_surgery_rank, SurgerySpec};
use hfrank_core::Error;

fn spec(p: u32, q: u32) -> SurgerySpec {
    SurgerySpec::new(p, q).unwrap()
}

#[test]
fn triples() {
    let want = [
        ("unknot", (1, 1, 0)),
        ("trefoil_rh", (3, 3, 4)),
        ("trefoil_lh", (3, 5, 4)),
        ("figure8", (5, 5, 4)),
        ("t25", (5, 7, 8)),
    ];
    for (name, (hi, h1, h0)) in want {
        let t = h_triple(&corpus(name)).unwrap();
        assert_eq!((t.h_inf_total(), t.h_one_total(), t.h_zero_total()), (hi, h1, h0), "{name}");
    }
}

#[test]
fn four_maps_pass_their_checks() {
    for name in CORPUS {
        let m = four_maps(&corpus(name)).unwrap();
        for c in four_maps_checks(&m) {
            assert!(c.pass, "{name} {}: {} vs {}", c.id, c.lhs, c.rhs);
        }
        assert_eq!(m.psibar.mul(&m.phi), BitMatrix::zeros(m.h_zero(), m.h_inf()), "{name}");
        assert_eq!(m.psi.mul(&m.phibar), BitMatrix::zeros(m.h_zero(), m.h_inf()), "{name}");
    }
}

#[test]
fn corrupted_maps_are_rejected() {
    let mut m = four_maps(&corpus("trefoil_rh")).unwrap();
    m.psi = BitMatrix::zeros(m.psi.rows(), m.psi.cols());
    assert!(matches!(validate_four_maps(&m), Err(Error::ValidationFailure { .. })));
}

#[test]
fn routes_agree() {
    for name in CORPUS {
        let c = corpus(name);
        let maps = four_maps(&c).unwrap();
        let blocks = normalize_blocks(&maps).unwrap();
        for s in coprime_specs(4, 4) {
            let direct = hf_surgery_rank(&c, s).unwrap();
            assert_eq!(rank_from_maps(&maps, s).unwrap(), direct, "{name} {s}");
            assert_eq!(xz_ranks(&blocks, s).unwrap().y_value, direct, "{name} {s}");
        }
    }
}

#[test]
fn combinatorial_complex_rank_by_naive_elimination() {
    for name in CORPUS {
        let c = corpus(name);
        let maps = four_maps(&c).unwrap();
        for s in coprime_specs(3, 3) {
            let d = assemble_d(&maps, s).unwrap();
            assert!(d.mul(&d).is_zero());
            assert_eq!(d.rows() - 2 * naive_rank_of(&d), hf_surgery_rank(&c, s).unwrap(), "{name} {s}");
        }
    }
}

#[test]
fn trefoil_blocks_at_two_thirds() {
    let maps = four_maps(&corpus("trefoil_rh")).unwrap();
    let b = normalize_blocks(&maps).unwrap();
    assert_eq!((b.r_phi, b.r_psibar), (1, 2));
    let r = xz_ranks(&b, spec(2, 3)).unwrap();
    assert_eq!(r.x_table, [1, 2]);
    assert_eq!(r.z_table, [2]);
    assert_eq!((r.x_pq, r.z_pq), (3, 4));
    assert_eq!((r.rank_phi_pq, r.rank_psi_pq), (6, 8));
    assert_eq!(r.y_value, 4);
}

#[test]
fn normalized_blocks_reconstruct_maps() {
    for name in CORPUS {
        let maps = four_maps(&corpus(name)).unwrap();
        let b = normalize_blocks(&maps).unwrap();
        let (p_inf, p_one, p_zero) = b.bases.clone().unwrap();
        // new-basis matrix of f: V → W is P_W⁻¹ · f · P_V
        let conj = |f: &BitMatrix, w: &BitMatrix, v: &BitMatrix| w.inverse().unwrap().mul(f).mul(v);
        assert_eq!(conj(&maps.phi, &p_one, &p_inf), b.phi(), "{name}");
        assert_eq!(conj(&maps.phibar, &p_one, &p_inf), b.phibar(), "{name}");
        assert_eq!(conj(&maps.psibar, &p_zero, &p_one), b.psibar(), "{name}");
        assert_eq!(conj(&maps.psi, &p_zero, &p_one), b.psi(), "{name}");
    }
}

#[test]
fn block_shapes_are_checked() {
    let z = BitMatrix::zeros;
    let bad = BlockForms::from_blocks(z(1, 1), z(1, 1), z(1, 1), z(1, 1), z(1, 1), z(1, 1), z(1, 1), z(2, 1));
    assert!(matches!(bad, Err(Error::DimensionMismatch(_))));
    let ok = BlockForms::from_blocks(z(1, 1), z(1, 0), z(1, 1), z(1, 0), z(1, 1), z(1, 1), z(0, 1), z(0, 1)).unwrap();
    assert_eq!((ok.h_inf, ok.h_one, ok.h_zero), (1, 2, 1));
}

#[test]
fn a_matrix_layout() {
    let one = BitMatrix::identity(1);
    let zero = BitMatrix::zeros(1, 1);
    // A_0 stacks d over b
    assert_eq!(a_matrix(0, &zero, &one, &zero, &zero).unwrap(), BitMatrix::parse_rows(&["0", "1"]).unwrap());
    // A_1 with a = b = c = d = 1: rows [d,0],[cb,d],[ab,b]
    let m = a_matrix(1, &one, &one, &one, &one).unwrap();
    assert_eq!(m, BitMatrix::parse_rows(&["10", "11", "11"]).unwrap());
    assert_eq!(m.rank(), 2);
}

#[test]
fn closed_form_interpolates() {
    let mut h = |k: u32| Ok(10 * k as usize + 1);
    assert_eq!(closed_form_y(spec(7, 1), &mut h).unwrap(), 71);
    // 7/3: floor 2, ceil 3; (7−6)·h_3 + (9−7)·h_2
    assert_eq!(closed_form_y(spec(7, 3), &mut h).unwrap(), 31 + 2 * 21);
    assert_eq!(closed_form_y(spec(1, 4), &mut h).unwrap(), 11 + 3);
}

#[test]
fn unknot_blocks_are_simple() {
    let b = normalize_blocks(&four_maps(&corpus("unknot")).unwrap()).unwrap();
    for c in simple_block_checks(&b, 4).unwrap() {
        assert!(c.pass, "{}", c.id);
    }
}

#[test]
fn dual_model_is_reduced_mirror() {
    let rh = corpus("trefoil_rh");
    let d = dual_model(&rh);
    let lh = corpus("trefoil_lh");
    assert_eq!((d.generators(), d.arrows()), (lh.generators(), lh.arrows()));
}

fn search_ranks(name: &str) -> (Vec<usize>, Vec<usize>) {
    let c = corpus(name);
    let maps = four_maps(&c).unwrap();
    let (psi, psibar) = constraint_search(&maps.triple, &maps.phi, &maps.phibar).unwrap();
    let searched = FourMaps { psi, psibar, ..maps.clone() };
    validate_four_maps(&searched).unwrap();
    let specs = coprime_specs(4, 4);
    let natural = specs.iter().map(|&s| rank_from_maps(&maps, s).unwrap()).collect();
    let found = specs.iter().map(|&s| rank_from_maps(&searched, s).unwrap()).collect();
    (natural, found)
}

#[test]
fn constraint_search_alone_does_not_pin_the_ranks() {
    let (natural, found) = search_ranks("trefoil_rh");
    assert_eq!(natural, [1, 3, 5, 7, 2, 4, 3, 3, 5, 4, 4]);
    assert_eq!(found, [5, 7, 9, 11, 8, 12, 11, 13, 17, 14, 18]);
    for name in ["trefoil_lh", "figure8", "t25"] {
        let (natural, found) = search_ranks(name);
        assert_ne!(natural, found, "{name}");
    }
    let (natural, found) = search_ranks("unknot");
    assert_eq!(natural, found);
}
