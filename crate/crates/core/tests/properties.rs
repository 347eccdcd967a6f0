use num_bigint::BigInt;
use proptest::prelude::*;

use clipcone::chamber::reduce;
use clipcone::clipping::{check_integrality, reflection_identities, reflection_in, ClippedCone, Root};
use clipcone::corpus;
use clipcone::intmat::{hnf, smith_invariants};
use clipcone::lattice::{group_closure, invariant_form, maschke_projection, signature, QuadLattice};
use clipcone::linalg::{dot, Matrix};
use clipcone::polycone::{rules, same_cone, Mode, PolyCone};
use clipcone::sample::cone_point;
use clipcone::scalar::{int, ints, primitive_integer, to_rationals, Rational};
use clipcone::symcone::{Factor, SymCone};

fn unimodular(ops: &[(usize, usize, i64)], n: usize) -> Matrix {
    let mut u: Matrix = Matrix::identity(n);
    for &(i, j, c) in ops {
        let (i, j) = (i % n, j % n);
        if i == j {
            continue;
        }
        for k in 0..n {
            let v = u.get(k, j).clone() + int(c) * u.get(k, i).clone();
            u.set(k, j, v);
        }
    }
    u
}

fn diag_gram(d: &[i64]) -> Matrix {
    Matrix::diagonal(&ints(d))
}

fn ops() -> impl Strategy<Value = Vec<(usize, usize, i64)>> {
    prop::collection::vec((0usize..6, 0usize..6, -2i64..=2), 0..8)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn signature_is_a_congruence_invariant(d in prop::collection::vec(prop_oneof![-3i64..=-1, 1i64..=3], 2..6), ops in ops()) {
        let g = diag_gram(&d);
        let u = unimodular(&ops, d.len());
        let g2 = u.transpose().mul(&g).mul(&u);
        prop_assert_eq!(signature(&g), signature(&g2));
        let pos = d.iter().filter(|&&x| x > 0).count();
        prop_assert_eq!(signature(&g).pos, pos);
    }

    #[test]
    fn double_description_round_trip(rays in prop::collection::vec(prop::collection::vec(-3i64..=3, 3), 3..7)) {
        let rays: Vec<Vec<Rational>> = rays.iter().map(|r| ints(r)).collect();
        prop_assume!(rays.iter().any(|r| r.iter().any(|x| *x != int(0))));
        let a = PolyCone::from_rays(3, &rays).unwrap();
        let mut normals = a.facets().to_vec();
        for e in a.equations() {
            normals.push(e.clone());
            normals.push(e.iter().map(|x| -x.clone()).collect());
        }
        let b = PolyCone::from_facets(3, &normals).unwrap();
        prop_assert!(same_cone(&a, &b));
        for r in &rays {
            prop_assert!(b.contains(r, Mode::Closure));
        }
    }

    #[test]
    fn rules_is_reflexive(m in prop::collection::vec(-3i64..=3, 9)) {
        let rows: Vec<Vec<Rational>> = m.chunks(3).map(ints).collect();
        let mat = Matrix::from_rows(rows.clone());
        prop_assume!(mat.det() != int(0));
        let c = PolyCone::from_rays(3, &rows).unwrap();
        prop_assert!(rules(&c, &c).unwrap());
    }

    #[test]
    fn hnf_and_smith_are_unimodular_invariants(m in prop::collection::vec(-4i64..=4, 9), ops in ops()) {
        let a: Vec<Vec<BigInt>> = m.chunks(3).map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
        let u = unimodular(&ops, 3);
        let ua: Vec<Vec<BigInt>> = (0..3).map(|i| (0..3).map(|j| (0..3).fold(BigInt::from(0), |acc, k| {
            acc + u.get(k, i).to_integer() * &a[k][j]
        })).collect()).collect();
        // row operations by an invertible integer matrix keep the row lattice
        prop_assert_eq!(hnf(&a), hnf(&ua));
        prop_assert_eq!(smith_invariants(&a), smith_invariants(&ua));
    }

    #[test]
    fn random_reflections_satisfy_the_identities(d in prop::collection::vec(1i64..=3, 2..5), a in 1i64..=3, e in prop::collection::vec(-2i64..=2, 5), ops in ops()) {
        let mut diag = vec![a];
        diag.extend(d.iter().map(|x| -x));
        let n = diag.len();
        let u = unimodular(&ops, n);
        let lat = QuadLattice::new(u.transpose().mul(&diag_gram(&diag)).mul(&u)).unwrap();
        // roots are primitive by definition
        let Some(prim) = primitive_integer(&ints(&e[..n])) else { return Ok(()) };
        let e = to_rationals(&prim);
        let qe = lat.norm(&e);
        prop_assume!(qe < int(0));
        let root = Root { e: e.clone(), factor: 0, s: -qe };
        prop_assert!(reflection_identities(&root, &lat).ok());
        let s = reflection_in(&e, &lat);
        prop_assert_eq!(s.is_integral(), check_integrality(&root, &lat).integral);
    }

    #[test]
    fn lorentz_cone_is_self_dual_on_samples(i in 0u64..500, j in 0u64..500) {
        let inst = corpus::load("u_minus2").unwrap();
        let sym = &inst.cone.ambient;
        let x = cone_point(sym, &inst.cone.witness, 5, i);
        let y = cone_point(sym, &inst.cone.witness, 6, j);
        prop_assert!(sym.lattice.q(&x, &y) > int(0));
    }

    #[test]
    fn reduction_lands_in_the_chamber_and_is_idempotent(i in 0u64..2000, name in prop::sample::select(vec!["u_minus2", "swap4", "dihedral_flip", "affine_a2_rotation"])) {
        let inst = corpus::load(name).unwrap();
        let c = &inst.cone;
        let x = cone_point(&c.ambient, &c.witness, 9, i);
        let t = reduce(&x, c, 10_000).unwrap();
        prop_assert!(t.certified);
        prop_assert!(c.member(&t.end, Mode::Closure).unwrap());
        let again = reduce(&t.end, c, 10_000).unwrap();
        prop_assert!(again.word.is_empty());
        prop_assert_eq!(again.end, t.end);
    }

    #[test]
    fn maschke_projection_is_an_equivariant_idempotent(perm in Just(()).prop_perturb(|_, mut r| {
        let mut p: Vec<usize> = (0..4).collect();
        for k in (1..4).rev() { p.swap(k, (r.next_u32() as usize) % (k + 1)); }
        p
    }), signs in prop::collection::vec(prop::bool::ANY, 4)) {
        let mut g = Matrix::zeros(4, 4);
        for (i, &p) in perm.iter().enumerate() {
            g.set(p, i, if signs[i] { int(-1) } else { int(1) });
        }
        let act = group_closure(4, &[g], 400).unwrap();
        let p = maschke_projection(&act);
        prop_assert_eq!(p.mul(&p), p.clone());
        for h in act.elements() {
            prop_assert_eq!(h.mul(&p), p.mul(h));
        }
        let f = invariant_form(&act, &Matrix::identity(4)).unwrap();
        for h in act.elements() {
            prop_assert_eq!(h.transpose().mul(&f).mul(h), f.clone());
        }
        prop_assert_eq!(signature(&f).pos, 4);
    }

    #[test]
    fn direct_sums_of_clipped_cones_contain_sums(i in 0u64..200) {
        let a = corpus::load("u_minus2").unwrap().cone;
        let b = corpus::load("swap4").unwrap().cone;
        let s: ClippedCone = a.direct_sum(&b).unwrap();
        let x = cone_point(&a.ambient, &a.witness, 1, i);
        let y = cone_point(&b.ambient, &b.witness, 2, i);
        let inside = a.member(&x, Mode::Interior).unwrap() && b.member(&y, Mode::Interior).unwrap();
        let mut z = x.clone();
        z.extend(y);
        prop_assert_eq!(s.member(&z, Mode::Interior).unwrap(), inside);
    }
}

#[test]
fn psd_factor_is_self_dual_on_a_grid() {
    // trace pairing of two interior points of PSD(2) is positive
    let sym = SymCone::new(QuadLattice::new(Matrix::diagonal(&ints(&[1, 2, 1]))).unwrap(), vec![Factor::psd(2, vec![0, 1, 2])]);
    let pts: Vec<Vec<Rational>> = (-2..=2).flat_map(|b| (1..=3).map(move |a| ints(&[a, b, 3]))).collect();
    for x in &pts {
        for y in &pts {
            if sym.member(x, Mode::Interior).unwrap() && sym.member(y, Mode::Interior).unwrap() {
                assert!(dot(x, &sym.lattice.gram().mul_vec(y)) > int(0));
            }
        }
    }
}
