//! Bundled test instances and generators of random instances.

use std::f64::consts::PI;

use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::Rng;

use crate::clipping::ClippedCone;
use crate::error::Result;
use crate::instance::Instance;
use crate::lattice::{group_closure, FiniteAction, QuadLattice};
use crate::linalg::Matrix;
use crate::sample::rng;
use crate::scalar::{int, primitive_integer, rationalize, to_rationals, Rational};
use crate::symcone::{Factor, SymCone};

const FILES: &[(&str, &str)] = &[
    ("u_minus2", include_str!("../corpus/u_minus2.json")),
    ("swap4", include_str!("../corpus/swap4.json")),
    ("klt_k3", include_str!("../corpus/klt_k3.json")),
    ("plane_rational", include_str!("../corpus/plane_rational.json")),
    ("plane_sqrt2", include_str!("../corpus/plane_sqrt2.json")),
    ("sign_flip", include_str!("../corpus/sign_flip.json")),
    ("two_copies", include_str!("../corpus/two_copies.json")),
    ("halfline_swap", include_str!("../corpus/halfline_swap.json")),
    ("psd_halflines", include_str!("../corpus/psd_halflines.json")),
    ("dihedral_flip", include_str!("../corpus/dihedral_flip.json")),
    ("affine_a2_rotation", include_str!("../corpus/affine_a2_rotation.json")),
    ("a2_swap_plus", include_str!("../corpus/a2_swap_plus.json")),
    ("halflines3", include_str!("../corpus/halflines3.json")),
];

/// Instances that violate one of the well-clipped assumptions on purpose.
pub const INVALID: &[&str] = &["klt_k3", "thirteen_gon"];

pub fn names() -> Vec<&'static str> {
    FILES.iter().map(|(n, _)| *n).collect()
}

pub fn source(name: &str) -> Option<&'static str> {
    FILES.iter().find(|(n, _)| *n == name).map(|(_, s)| *s)
}

pub fn load(name: &str) -> Option<Instance> {
    if name == "thirteen_gon" {
        return Some(thirteen_gon());
    }
    source(name).map(|s| Instance::parse(s).expect("bundled instance parses"))
}

/// Every bundled instance, the 13-gon included.
pub fn all() -> Vec<Instance> {
    let mut v: Vec<Instance> = FILES.iter().map(|(_, s)| Instance::parse(s).expect("bundled instance parses")).collect();
    v.push(thirteen_gon());
    v
}

/// Instances expected to pass validation.
pub fn valid() -> Vec<Instance> {
    all().into_iter().filter(|i| !INVALID.contains(&i.name.as_str())).collect()
}

/// A compact 13-gon in the plane model of `100x² − y² − z²`: vertices at
/// rational points of the unit circle, roots along the sides. Nearly
/// Euclidean, so some corner angle exceeds 5π/6.
pub fn thirteen_gon() -> Instance {
    let g = Matrix::diagonal(&[int(100), int(-1), int(-1)]);
    let verts: Vec<Vec<Rational>> = (0..13)
        .map(|i| {
            let theta = -PI + 2.0 * PI * (i as f64 + 0.5) / 13.0;
            let t = rationalize((theta / 2.0).tan(), 200);
            let t2 = t.clone() * t.clone();
            vec![int(1) + t2.clone(), int(1) - t2, int(2) * t]
        })
        .collect();
    let ginv = g.inverse().expect("diagonal form");
    let roots: Vec<Vec<Rational>> = (0..13)
        .map(|i| {
            let (a, b) = (&verts[i], &verts[(i + 1) % 13]);
            let n = vec![
                a[1].clone() * b[2].clone() - a[2].clone() * b[1].clone(),
                a[2].clone() * b[0].clone() - a[0].clone() * b[2].clone(),
                a[0].clone() * b[1].clone() - a[1].clone() * b[0].clone(),
            ];
            to_rationals(&primitive_integer(&ginv.mul_vec(&n)).expect("distinct vertices"))
        })
        .collect();
    let sym = SymCone::new(QuadLattice::new(g).expect("diagonal form"), vec![Factor::lorentz(vec![0, 1, 2], vec![int(1), int(0), int(0)])]);
    let witness = vec![int(1), int(0), int(0)];
    let (cone, canon) = ClippedCone::new(sym, &roots, witness).expect("rank 3");
    Instance {
        name: "thirteen_gon".into(),
        cone,
        canon,
        raw_roots: roots,
        action: FiniteAction::trivial(3),
        generators: Vec::new(),
        cap: crate::instance::DEFAULT_CAP,
        field: None,
        walls: Vec::new(),
    }
}

fn unimodular<R: Rng>(r: &mut R, n: usize, steps: usize) -> Matrix {
    let mut u: Matrix = Matrix::identity(n);
    for _ in 0..steps {
        let i = r.gen_range(0..n);
        let j = r.gen_range(0..n);
        if i == j {
            continue;
        }
        let c = int(r.gen_range(-1..=1));
        // column operation: col_j += c·col_i
        for k in 0..n {
            let v = u.get(k, j).clone() + c.clone() * u.get(k, i).clone();
            u.set(k, j, v);
        }
    }
    u
}

/// A Lorentz lattice `⟨a⟩ ⊕ ⟨−b₁⟩ ⊕ …` with a group of signed permutations
/// of equal negative entries, disguised by a random unimodular change of
/// basis. The group fixes the positive direction.
pub fn random_lorentz_action(seed: u64, index: u64) -> Result<(SymCone, FiniteAction)> {
    let mut r = rng(seed, index);
    let k = r.gen_range(2..=5usize);
    let n = k + 1;
    let a = int(r.gen_range(1..=3));
    let negs: Vec<i64> = (0..k).map(|_| r.gen_range(1..=2)).collect();
    let mut diag = vec![a];
    diag.extend(negs.iter().map(|&b| int(-b)));
    let g0 = Matrix::diagonal(&diag);
    let mut gens = Vec::new();
    for _ in 0..r.gen_range(1..=3) {
        let mut perm: Vec<usize> = (0..n).collect();
        if r.gen_bool(0.5) {
            let i = r.gen_range(1..n);
            let js: Vec<usize> = (1..n).filter(|&j| negs[j - 1] == negs[i - 1] && j != i).collect();
            if let Some(&j) = js.choose(&mut r) {
                perm.swap(i, j);
            }
        }
        let mut m = Matrix::zeros(n, n);
        for (i, &p) in perm.iter().enumerate() {
            m.set(p, i, int(1));
        }
        // sign changes on negative coordinates
        for i in 1..n {
            if r.gen_bool(0.3) {
                for k in 0..n {
                    let v = -m.get(k, i).clone();
                    m.set(k, i, v);
                }
            }
        }
        gens.push(m);
    }
    let u = unimodular(&mut r, n, 2 * n);
    let ui = u.inverse().expect("unimodular");
    let gram = u.transpose().mul(&g0).mul(&u);
    let gens: Vec<Matrix> = gens.iter().map(|g| ui.mul(g).mul(&u)).collect();
    let mut e0 = vec![int(0); n];
    e0[0] = Rational::from_integer(BigInt::from(1));
    let h = ui.mul_vec(&e0);
    let sym = SymCone::new(QuadLattice::new(gram)?, vec![Factor::lorentz((0..n).collect(), h)]);
    let act = group_closure(n, &gens, 4096)?;
    Ok((sym, act))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clipping::{validate_clipped, AngleClass};

    #[test]
    fn bundled_instances_load() {
        let all = all();
        assert_eq!(all.len(), FILES.len() + 1);
        for i in &all {
            assert!(i.cone.ambient.validate().ok(), "{}", i.name);
            assert!(i.canon.rejected.is_empty(), "{}", i.name);
        }
    }

    #[test]
    fn validity_flags() {
        for i in all() {
            let v = validate_clipped(&i.cone, i.canon.clone());
            assert_eq!(v.ok(), !INVALID.contains(&i.name.as_str()), "{}", i.name);
        }
    }

    #[test]
    fn thirteen_gon_has_a_bad_corner() {
        let i = thirteen_gon();
        assert_eq!(i.cone.roots.len(), 13);
        let v = validate_clipped(&i.cone, i.canon.clone());
        assert!(v.pairwise.pairs.iter().any(|p| p.class == AngleClass::Violation));
    }

    #[test]
    fn random_actions_are_isometries() {
        for s in 0..20 {
            let (sym, act) = random_lorentz_action(11, s).unwrap();
            assert!(sym.validate().ok());
            act.check_isometry(&sym.lattice).unwrap();
        }
    }
}
