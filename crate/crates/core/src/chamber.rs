//! Chamber reduction by root reflections and truncated Dirichlet domains.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::clipping::{reflection_matrix, ClippedCone};
use crate::error::{Error, Result};
use crate::lattice::QuadLattice;
use crate::linalg::{dot, proportional, vsub, Matrix};
use crate::polycone::{Mode, PolyCone};
use crate::sample::cone_point;
use crate::scalar::{Field, Rational};
use crate::symcone::SymCone;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReductionTrace {
    #[serde(serialize_with = "ser_vec")]
    pub start: Vec<Rational>,
    #[serde(serialize_with = "ser_vec")]
    pub end: Vec<Rational>,
    /// Applied root indices, in order.
    pub word: Vec<usize>,
    pub crossings_initial: usize,
    /// Separating-mirror counts before each step and at the end.
    pub crossings: Vec<usize>,
    /// Counts drop by exactly one per step and end at zero.
    pub certified: bool,
}

fn ser_vec<S: serde::Serializer>(v: &[Rational], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|x| x.to_string()))
}

/// Reflects `x` into the closed chamber of the root list.
///
/// Each step uses the violated root with the largest `q(e,x)²/s` (the most
/// negative normalized pairing), lowest index on ties.
pub fn reduce(x: &[Rational], cone: &ClippedCone, cap: usize) -> Result<ReductionTrace> {
    let n = cone.rank();
    if x.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: x.len() });
    }
    // x is rational, so membership in the plus-hull is closure membership
    if !cone.ambient.member(x, Mode::Closure)? {
        return Err(Error::NotInPlusCone);
    }
    let lat = cone.lattice();
    let sigmas = cone.reflections();
    let mut cur = x.to_vec();
    let mut word = Vec::new();
    let mut points = vec![cur.clone()];
    loop {
        let mut best: Option<(usize, Rational)> = None;
        for (i, r) in cone.roots.iter().enumerate() {
            let a = lat.q(&r.e, &cur);
            if !a.is_negative() {
                continue;
            }
            let score = a.clone() * a / r.s.clone();
            if best.as_ref().is_none_or(|(_, b)| score > *b) {
                best = Some((i, score));
            }
        }
        let Some((i, _)) = best else { break };
        if word.len() >= cap {
            return Err(Error::IterationCap(cap));
        }
        cur = sigmas[i].mul_vec(&cur);
        word.push(i);
        points.push(cur.clone());
    }
    let crossings = crossing_counts(cone, &sigmas, &word, &points);
    let certified = crossings.windows(2).all(|w| w[0] == w[1] + 1) && crossings.last() == Some(&0);
    Ok(ReductionTrace {
        start: x.to_vec(),
        end: cur,
        word,
        crossings_initial: crossings[0],
        crossings,
        certified,
    })
}

/// Mirrors met along the trace: the roots, and for each start k the normals
/// `σ_{i(k)}⋯σ_{i(j−1)} e_{i(j)}`, j > k, which are the walls still to be
/// crossed from point k. Counts those strictly separating each point from
/// the witness.
fn crossing_counts(cone: &ClippedCone, sigmas: &[Matrix], word: &[usize], points: &[Vec<Rational>]) -> Vec<usize> {
    let lat = cone.lattice();
    let mut mirrors: Vec<Vec<Rational>> = cone.roots.iter().map(|r| r.e.clone()).collect();
    let m = word.len();
    for k in 0..m {
        for j in k + 1..m {
            // word positions are 0-based: step j applies word[j]
            let mut v = cone.roots[word[j]].e.clone();
            for t in (k..j).rev() {
                v = sigmas[word[t]].mul_vec(&v);
            }
            mirrors.push(v);
        }
    }
    let mut uniq: Vec<Vec<Rational>> = Vec::new();
    for v in mirrors {
        if !uniq.iter().any(|u| proportional(u, &v)) {
            uniq.push(v);
        }
    }
    let side_c: Vec<Rational> = uniq.iter().map(|u| lat.q(u, &cone.witness)).collect();
    points
        .iter()
        .map(|p| {
            uniq.iter()
                .zip(&side_c)
                .filter(|(u, c)| {
                    let s = lat.q(u, p);
                    (s.is_negative() && c.is_positive()) || (s.is_positive() && c.is_negative())
                })
                .count()
        })
        .collect()
}

/// Truncated Dirichlet–Voronoi domain
/// `Π = {x : q(x, γa − a) ≥ 0 for γ in the element list}`.
#[derive(Debug, Clone)]
pub struct DirichletDomain {
    pub base: Vec<Rational>,
    pub elements: usize,
    pub poly: PolyCone,
    /// Indices of non-identity elements fixing the base point.
    pub stabilizer: Vec<usize>,
    /// Elements checked for moving the base point onto a root mirror.
    pub mirror_hits: Vec<usize>,
}

impl DirichletDomain {
    /// Closure membership in `Π ∩ 𝒜⁺` for a rational point.
    pub fn contains(&self, sym: &SymCone, x: &[Rational]) -> Result<bool> {
        Ok(self.poly.contains(x, Mode::Closure) && sym.member(x, Mode::Closure)?)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "base": self.base.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
            "elements": self.elements,
            "facets": self.poly.facets().iter().map(|f| f.iter().map(|x| x.to_string()).collect::<Vec<_>>()).collect::<Vec<_>>(),
            "whole_space": self.poly.facets().is_empty() && self.poly.equations().is_empty(),
            "stabilizer_nontrivial": !self.stabilizer.is_empty(),
            "stabilizer": self.stabilizer,
            "base_orbit_on_mirrors": self.mirror_hits,
        })
    }
}

pub fn dirichlet_domain(a: &[Rational], elements: &[Matrix], sym: &SymCone, roots: &[Vec<Rational>]) -> Result<DirichletDomain> {
    let n = sym.rank();
    if a.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: a.len() });
    }
    if !sym.member(a, Mode::Interior)? {
        return Err(Error::NotInterior);
    }
    let lat = &sym.lattice;
    let mut normals: Vec<Vec<Rational>> = Vec::new();
    let mut stabilizer = Vec::new();
    let mut mirror_hits = Vec::new();
    for (k, g) in elements.iter().enumerate() {
        let ga = g.mul_vec(a);
        if roots.iter().any(|e| lat.q(e, &ga).is_zero()) {
            mirror_hits.push(k);
        }
        let w = vsub(&ga, a);
        if w.iter().all(|x| x.is_zero()) {
            if !g.is_identity() {
                stabilizer.push(k);
            }
            continue;
        }
        let f = <Rational as Field>::normalize_ray(&lat.gram().mul_vec(&w));
        if !normals.contains(&f) {
            normals.push(f);
        }
    }
    let poly = PolyCone::from_facets(n, &normals)?;
    Ok(DirichletDomain { base: a.to_vec(), elements: elements.len(), poly, stabilizer, mirror_hits })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Disjointness {
    pub samples: usize,
    pub max_count: usize,
    pub covered: usize,
    pub covered_fraction: f64,
    /// Uncovered samples lying on a wall of some translate.
    pub on_walls: usize,
}

// Integer rows scaled from rational rows, for fast strict-sign tests.
fn scaled_i128(rows: &[Vec<Rational>]) -> Option<Vec<Vec<i128>>> {
    rows.iter()
        .map(|r| {
            let l = r.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            r.iter().map(|x| (x * Rational::from_integer(l.clone())).to_integer().to_i128()).collect()
        })
        .collect()
}

fn matvec_i128(m: &[Vec<i128>], v: &[i128]) -> Option<Vec<i128>> {
    m.iter()
        .map(|row| row.iter().zip(v).try_fold(0i128, |acc, (a, b)| acc.checked_add(a.checked_mul(*b)?)))
        .collect()
}

fn interior_count(facets: &[Vec<i128>], inverses: &[Vec<Vec<i128>>], x: &[i128]) -> Option<usize> {
    let mut count = 0;
    for gi in inverses {
        let y = matvec_i128(gi, x)?;
        let mut inside = true;
        for f in facets {
            let s = f.iter().zip(&y).try_fold(0i128, |acc, (a, b)| acc.checked_add(a.checked_mul(*b)?))?;
            if s <= 0 {
                inside = false;
                break;
            }
        }
        if inside {
            count += 1;
        }
    }
    Some(count)
}

/// Number of translates `γΠ` holding `x` in their interior, exactly.
pub fn translate_count(domain: &DirichletDomain, inverses: &[Matrix], x: &[Rational]) -> usize {
    inverses
        .iter()
        .filter(|gi| {
            let y = gi.mul_vec(x);
            domain.poly.is_full_dimensional() && domain.poly.facets().iter().all(|f| dot(f, &y).is_positive())
        })
        .count()
}

fn on_some_wall(domain: &DirichletDomain, inverses: &[Matrix], x: &[Rational]) -> bool {
    inverses.iter().any(|gi| domain.poly.contains(&gi.mul_vec(x), Mode::Closure))
}

/// Samples interior points of the ambient cone and counts, for each, the
/// translates of `Π` containing it in their interior.
pub fn translate_disjointness(
    domain: &DirichletDomain,
    elements: &[Matrix],
    sym: &SymCone,
    samples: usize,
    seed: u64,
) -> Result<Disjointness> {
    let inverses: Vec<Matrix> = elements.iter().map(|g| g.inverse().ok_or(Error::NotLatticePreserving(0))).collect::<Result<_>>()?;
    let fast_f = if domain.poly.is_full_dimensional() { scaled_i128(domain.poly.facets()) } else { None };
    let fast_g: Option<Vec<Vec<Vec<i128>>>> = inverses.iter().map(|g| scaled_i128(&g.to_rows())).collect();
    let counts: Vec<(usize, bool)> = (0..samples)
        .into_par_iter()
        .map(|i| {
            let x = cone_point(sym, &domain.base, seed, i as u64);
            if let (Some(f), Some(g)) = (&fast_f, &fast_g) {
                // positive scaling of x does not change the counts
                let l = x.iter().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
                let xi: Option<Vec<i128>> = x.iter().map(|v| (v * Rational::from_integer(l.clone())).to_integer().to_i128()).collect();
                if let Some(c) = xi.and_then(|xi| interior_count(f, g, &xi)) {
                    return (c, c == 0 && on_some_wall(domain, &inverses, &x));
                }
            }
            let c = translate_count(domain, &inverses, &x);
            (c, c == 0 && on_some_wall(domain, &inverses, &x))
        })
        .collect();
    let covered = counts.iter().filter(|c| c.0 >= 1).count();
    Ok(Disjointness {
        samples,
        max_count: counts.iter().map(|c| c.0).max().unwrap_or(0),
        on_walls: counts.iter().filter(|c| c.1).count(),
        covered,
        covered_fraction: if samples == 0 { 0.0 } else { covered as f64 / samples as f64 },
    })
}

/// Closure of `gens` under products, up to words of length `max_len`
/// (identity first).
pub fn word_closure(n: usize, gens: &[Matrix], max_len: usize) -> Vec<Matrix> {
    let mut all = vec![Matrix::identity(n)];
    let mut frontier = all.clone();
    for _ in 0..max_len {
        let mut next = Vec::new();
        for x in &frontier {
            for g in gens {
                let y = g.mul(x);
                if !all.contains(&y) {
                    all.push(y.clone());
                    next.push(y);
                }
            }
        }
        frontier = next;
    }
    all
}

/// Reflections in every root of the cone.
pub fn root_reflections(cone: &ClippedCone) -> Vec<Matrix> {
    cone.roots.iter().map(|r| reflection_matrix(r, cone.lattice())).collect()
}

pub fn satisfies_roots(lat: &QuadLattice, roots: &[Vec<Rational>], x: &[Rational]) -> bool {
    roots.iter().all(|e| !lat.q(e, x).is_negative())
}
