//! Roots, reflections and the well-clipped conditions.

use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::lattice::QuadLattice;
use crate::linalg::{is_zero_vec, vneg, Matrix};
use crate::polycone::Mode;
use crate::scalar::{primitive_integer, to_rationals, Field, Rational};
use crate::symcone::{Check, Factor, FactorKind, SymCone, ValidationReport};

#[derive(Debug, Clone, PartialEq)]
pub struct Root {
    /// Primitive integer vector.
    pub e: Vec<Rational>,
    /// Index of the carrying factor.
    pub factor: usize,
    /// `s = −q(e, e) > 0`.
    pub s: Rational,
}

impl Root {
    pub fn to_json(&self) -> Value {
        json!({
            "e": self.e.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
            "factor": self.factor,
            "s": self.s.to_string(),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Rejection {
    pub index: usize,
    pub vector: Vec<String>,
    pub reason: String,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Canonicalized {
    #[serde(skip)]
    pub roots: Vec<Root>,
    /// Original index of each accepted root.
    pub source: Vec<usize>,
    pub rejected: Vec<Rejection>,
    /// `(raw index, accepted root index)` for merged proportional duplicates.
    pub duplicates: Vec<(usize, usize)>,
}

/// Makes each raw vector primitive, orients it positively against the
/// witness, finds its carrying factor and merges proportional duplicates.
pub fn canonicalize_roots(raw: &[Vec<Rational>], ambient: &SymCone, witness: &[Rational]) -> Canonicalized {
    let lat = &ambient.lattice;
    let own = ambient.owner();
    let mut out = Canonicalized::default();
    for (idx, v) in raw.iter().enumerate() {
        let reject = |out: &mut Canonicalized, reason: &str| {
            out.rejected.push(Rejection { index: idx, vector: v.iter().map(|x| x.to_string()).collect(), reason: reason.to_string() });
        };
        if v.len() != lat.rank() {
            reject(&mut out, "dimension mismatch");
            continue;
        }
        let Some(p) = primitive_integer(v) else {
            reject(&mut out, "zero vector");
            continue;
        };
        let mut e = to_rationals(&p);
        let mut support: Vec<usize> = (0..e.len()).filter(|&i| !e[i].is_zero()).filter_map(|i| own[i]).collect();
        support.sort_unstable();
        support.dedup();
        if support.len() != 1 {
            reject(&mut out, "assumption (i): support meets several factors");
            continue;
        }
        let factor = support[0];
        if !matches!(ambient.factors[factor].kind, FactorKind::Lorentz { .. }) {
            reject(&mut out, "assumption (i): support in a non-Lorentz factor");
            continue;
        }
        let q = lat.norm(&e);
        if !q.is_negative() {
            reject(&mut out, "not negative square");
            continue;
        }
        let qc = lat.q(&e, witness);
        if qc.is_zero() {
            reject(&mut out, "witness lies on the hyperplane");
            continue;
        }
        if qc.is_negative() {
            e = vneg(&e);
        }
        if let Some(k) = out.roots.iter().position(|r| r.e == e) {
            out.duplicates.push((idx, k));
            continue;
        }
        out.roots.push(Root { e, factor, s: -q });
        out.source.push(idx);
    }
    out
}

/// `σ(b_v) = b_v + c_v·e`; integrality asks every `c_v = −2q(e,b_v)/q(e,e)`
/// to be an integer.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Integrality {
    pub integral: bool,
    /// First offending basis vector and its coefficient.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<(usize, String)>,
}

pub fn check_integrality(root: &Root, lattice: &QuadLattice) -> Integrality {
    let ge = lattice.gram().mul_vec(&root.e);
    let qe = -root.s.clone();
    let two = Rational::from_integer(2.into());
    for (v, x) in ge.iter().enumerate() {
        let c = -(two.clone() * x.clone()) / qe.clone();
        if !c.is_integer() {
            return Integrality { integral: false, witness: Some((v, c.to_string())) };
        }
    }
    Integrality { integral: true, witness: None }
}

/// `σ = I − (2/q(e,e))·e·(Ge)ᵀ`.
pub fn reflection_matrix(root: &Root, lattice: &QuadLattice) -> Matrix {
    reflection_in(&root.e, lattice)
}

pub fn reflection_in(e: &[Rational], lattice: &QuadLattice) -> Matrix {
    let n = e.len();
    let ge = lattice.gram().mul_vec(e);
    let f = Rational::from_integer(2.into()) / lattice.norm(e);
    Matrix::from_fn(n, n, |i, j| {
        let d = if i == j { Rational::one() } else { Rational::zero() };
        d - f.clone() * e[i].clone() * ge[j].clone()
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum AngleClass {
    #[serde(rename = "pi/2")]
    Right,
    #[serde(rename = "pi/3")]
    Third,
    #[serde(rename = "pi/4")]
    Quarter,
    #[serde(rename = "pi/6")]
    Sixth,
    #[serde(rename = "parallel")]
    Parallel,
    #[serde(rename = "ultraparallel")]
    Ultraparallel,
    #[serde(rename = "violation")]
    Violation,
}

/// Class of `r = q(e,e')²/(q(e,e)q(e',e'))` for a non-negative pairing.
pub fn classify_ratio(r: &Rational) -> AngleClass {
    let q = |n: i64, d: i64| Rational::new(n.into(), d.into());
    if r.is_zero() {
        AngleClass::Right
    } else if *r == q(1, 4) {
        AngleClass::Third
    } else if *r == q(1, 2) {
        AngleClass::Quarter
    } else if *r == q(3, 4) {
        AngleClass::Sixth
    } else if *r == q(1, 1) {
        AngleClass::Parallel
    } else if *r > q(1, 1) {
        AngleClass::Ultraparallel
    } else {
        AngleClass::Violation
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairEntry {
    pub i: usize,
    pub k: usize,
    pub pairing: String,
    pub ratio: String,
    pub class: AngleClass,
    #[serde(skip_serializing_if = "String::is_empty")]
    pub reason: String,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct PairwiseReport {
    pub pairs: Vec<PairEntry>,
}

impl PairwiseReport {
    pub fn ok(&self) -> bool {
        self.pairs.iter().all(|p| p.class != AngleClass::Violation)
    }

    pub fn violations(&self) -> Vec<&PairEntry> {
        self.pairs.iter().filter(|p| p.class == AngleClass::Violation).collect()
    }
}

pub fn pair_entry(i: usize, k: usize, a: &Root, b: &Root, lattice: &QuadLattice) -> PairEntry {
    let p = lattice.q(&a.e, &b.e);
    let r = p.clone() * p.clone() / (a.s.clone() * b.s.clone());
    let (class, reason) = if p.is_negative() {
        (AngleClass::Violation, "assumption (iii): negative pairing".to_string())
    } else {
        let c = classify_ratio(&r);
        let why = if c == AngleClass::Violation { "ratio outside the Coxeter set".to_string() } else { String::new() };
        (c, why)
    };
    PairEntry { i, k, pairing: p.to_string(), ratio: r.to_string(), class, reason }
}

pub fn check_pairwise(roots: &[Root], lattice: &QuadLattice) -> PairwiseReport {
    let mut pairs = Vec::new();
    for i in 0..roots.len() {
        for k in i + 1..roots.len() {
            pairs.push(pair_entry(i, k, &roots[i], &roots[k], lattice));
        }
    }
    PairwiseReport { pairs }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClippedCone {
    pub ambient: SymCone,
    pub roots: Vec<Root>,
    pub witness: Vec<Rational>,
}

impl ClippedCone {
    /// Canonicalizes `raw` against the witness; rejected vectors are
    /// reported, not fatal.
    pub fn new(ambient: SymCone, raw: &[Vec<Rational>], witness: Vec<Rational>) -> Result<(Self, Canonicalized)> {
        if witness.len() != ambient.rank() {
            return Err(Error::DimensionMismatch { expected: ambient.rank(), got: witness.len() });
        }
        let canon = canonicalize_roots(raw, &ambient, &witness);
        let roots = canon.roots.clone();
        Ok((ClippedCone { ambient, roots, witness }, canon))
    }

    pub fn lattice(&self) -> &QuadLattice {
        &self.ambient.lattice
    }

    pub fn rank(&self) -> usize {
        self.ambient.rank()
    }

    pub fn member(&self, v: &[Rational], mode: Mode) -> Result<bool> {
        if !self.ambient.member(v, mode)? {
            return Ok(false);
        }
        let lat = self.lattice();
        Ok(self.roots.iter().all(|r| {
            let p = lat.q(&r.e, v);
            match mode {
                Mode::Interior => p.is_positive(),
                _ => !p.is_negative(),
            }
        }))
    }

    pub fn reflections(&self) -> Vec<Matrix> {
        self.roots.iter().map(|r| reflection_matrix(r, self.lattice())).collect()
    }

    /// Block-diagonal sum; roots and witness are embedded summand-wise.
    pub fn direct_sum(&self, other: &ClippedCone) -> Result<ClippedCone> {
        let (n, m) = (self.rank(), other.rank());
        let g = Matrix::from_fn(n + m, n + m, |i, j| {
            if i < n && j < n {
                self.lattice().gram().get(i, j).clone()
            } else if i >= n && j >= n {
                other.lattice().gram().get(i - n, j - n).clone()
            } else {
                Rational::zero()
            }
        });
        let mut factors = self.ambient.factors.clone();
        factors.extend(other.ambient.factors.iter().map(|f| Factor { kind: f.kind.clone(), coords: f.coords.iter().map(|c| c + n).collect() }));
        let nf = self.ambient.factors.len();
        let pad = |v: &[Rational], left: bool| -> Vec<Rational> {
            let mut w = vec![Rational::zero(); n + m];
            for (i, x) in v.iter().enumerate() {
                w[if left { i } else { i + n }] = x.clone();
            }
            w
        };
        let mut roots: Vec<Root> = self.roots.iter().map(|r| Root { e: pad(&r.e, true), ..r.clone() }).collect();
        roots.extend(other.roots.iter().map(|r| Root { e: pad(&r.e, false), factor: r.factor + nf, s: r.s.clone() }));
        let mut witness = self.witness.clone();
        witness.extend(other.witness.iter().cloned());
        Ok(ClippedCone { ambient: SymCone::new(QuadLattice::new(g)?, factors), roots, witness })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClipValidation {
    pub ambient: ValidationReport,
    pub witness_interior: bool,
    pub canonicalization: Canonicalized,
    pub integrality: Vec<Integrality>,
    pub pairwise: PairwiseReport,
}

impl ClipValidation {
    pub fn ok(&self) -> bool {
        self.ambient.ok()
            && self.witness_interior
            && self.canonicalization.rejected.is_empty()
            && self.integrality.iter().all(|i| i.integral)
            && self.pairwise.ok()
    }
}

/// All three well-clipped assumptions plus the ambient structure checks.
pub fn validate_clipped(cone: &ClippedCone, canon: Canonicalized) -> ClipValidation {
    let ambient = cone.ambient.validate();
    let witness_interior = ambient.ok() && cone.member(&cone.witness, Mode::Interior).unwrap_or(false);
    let integrality = cone.roots.iter().map(|r| check_integrality(r, cone.lattice())).collect();
    let pairwise = check_pairwise(&cone.roots, cone.lattice());
    ClipValidation { ambient, witness_interior, canonicalization: canon, integrality, pairwise }
}

/// Exact involution and isometry identities for a reflection.
pub fn reflection_identities(root: &Root, lattice: &QuadLattice) -> ValidationReport {
    let s = reflection_matrix(root, lattice);
    let n = lattice.rank();
    let mut rep = ValidationReport::default();
    rep.push(Check::new("sigma squared is the identity", s.mul(&s).is_identity() && s.rows() == n, None, ""));
    rep.push(Check::new("sigma is an isometry", lattice.is_isometry(&s), None, ""));
    rep.push(Check::new("sigma negates e", s.mul_vec(&root.e) == vneg(&root.e), None, ""));
    rep.push(Check::new(
        "integral iff integrality check passes",
        s.is_integral() == check_integrality(root, lattice).integral,
        None,
        "",
    ));
    rep
}

/// Images of `seeds` under words of length at most `max_len` in `mats`,
/// deduplicated up to sign. A truncation of the generated root system.
pub fn close_roots(seeds: &[Vec<Rational>], mats: &[Matrix], max_len: usize) -> Vec<Vec<Rational>> {
    let mut all: Vec<Vec<Rational>> = Vec::new();
    let mut frontier: Vec<Vec<Rational>> = Vec::new();
    let known = |all: &[Vec<Rational>], v: &[Rational]| all.iter().any(|w| w.as_slice() == v || *w == vneg(v));
    for s in seeds {
        if !is_zero_vec(s) && !known(&all, s) {
            all.push(s.clone());
            frontier.push(s.clone());
        }
    }
    for _ in 0..max_len {
        let mut next = Vec::new();
        for v in &frontier {
            for m in mats {
                let w = m.mul_vec(v);
                if !known(&all, &w) {
                    all.push(w.clone());
                    next.push(w);
                }
            }
        }
        frontier = next;
    }
    all
}

/// Outcome of [`coxeter_fuzz`].
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct CoxeterFuzz {
    pub lattices: usize,
    /// Non-proportional root pairs examined.
    pub tried: usize,
    /// Pairs passing integrality for both roots and a non-negative pairing.
    pub passing: usize,
    /// Count per class among passing pairs, in the order
    /// `0, 1/4, 1/2, 3/4, 1, >1`.
    pub histogram: [usize; 6],
    /// Passing pairs whose ratio is outside the allowed set, or whose fast
    /// integer screening disagreed with the exact checks.
    pub exceptions: Vec<String>,
}

fn gram_i64(seed: u64, index: u64) -> Vec<Vec<i64>> {
    use rand::Rng;
    let mut r = crate::sample::rng(seed, index);
    let n = r.gen_range(3..=5usize);
    let mut g = vec![vec![0i64; n]; n];
    g[0][0] = r.gen_range(1..=4);
    for (i, row) in g.iter_mut().enumerate().skip(1) {
        row[i] = -r.gen_range(1..=4);
    }
    // congruence by a few elementary moves keeps the lattice and disguises it
    for _ in 0..n {
        let (i, j) = (r.gen_range(0..n), r.gen_range(0..n));
        if i == j {
            continue;
        }
        let c = if r.gen_bool(0.5) { 1 } else { -1 };
        // column j += c·column i, then the same on rows
        for row in g.iter_mut() {
            row[j] += c * row[i];
        }
        for k in 0..n {
            g[j][k] += c * g[i][k];
        }
    }
    g
}

fn gcd_i64(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd_i64(b, a % b)
    }
}

/// Integral roots of one random lattice, found by rejection, as
/// `(e, Ge, q(e,e))`, deduplicated up to sign.
#[allow(clippy::type_complexity)]
fn random_roots(g: &[Vec<i64>], seed: u64, index: u64, draws: usize) -> Vec<(Vec<i64>, Vec<i64>, i64)> {
    use rand::Rng;
    let n = g.len();
    let mut r = crate::sample::rng(seed ^ 0x0c0c, index);
    let mut out: Vec<(Vec<i64>, Vec<i64>, i64)> = Vec::new();
    for _ in 0..draws {
        let e: Vec<i64> = (0..n).map(|_| r.gen_range(-2..=2)).collect();
        if e.iter().copied().fold(0, gcd_i64) != 1 {
            continue;
        }
        let ge: Vec<i64> = g.iter().map(|row| row.iter().zip(&e).map(|(a, b)| a * b).sum()).collect();
        let qe: i64 = ge.iter().zip(&e).map(|(a, b)| a * b).sum();
        if qe >= 0 || ge.iter().any(|x| (2 * x) % qe != 0) {
            continue;
        }
        let neg: Vec<i64> = e.iter().map(|x| -x).collect();
        if out.iter().any(|(f, _, _)| *f == e || *f == neg) {
            continue;
        }
        out.push((e, ge, qe));
    }
    out
}

/// Random integral root pairs in random hyperbolic lattices until `pairs`
/// of them pass integrality and have a non-negative pairing. Candidates are
/// screened in machine integers, then every passing pair is re-checked with
/// [`check_integrality`] and [`pair_entry`].
pub fn coxeter_fuzz(pairs: usize, seed: u64) -> CoxeterFuzz {
    use rayon::prelude::*;
    const BATCH: u64 = 64;
    let mut out = CoxeterFuzz::default();
    let mut next = 0u64;
    while out.passing < pairs {
        let batch: Vec<CoxeterFuzz> = (next..next + BATCH)
            .into_par_iter()
            .map(|idx| {
                let mut part = CoxeterFuzz { lattices: 1, ..Default::default() };
                let g = gram_i64(seed, idx);
                let lat = match QuadLattice::new(Matrix::from_i64(&g)) {
                    Ok(l) if l.signature().is_hyperbolic() => l,
                    _ => return CoxeterFuzz::default(),
                };
                let roots = random_roots(&g, seed, idx, 300);
                let exact: Vec<Root> = roots
                    .iter()
                    .map(|(e, _, qe)| Root { e: e.iter().map(|&x| crate::scalar::int(x)).collect(), factor: 0, s: crate::scalar::int(-qe) })
                    .collect();
                for r in &exact {
                    if !check_integrality(r, &lat).integral {
                        part.exceptions.push(format!("screened root {:?} is not integral", r.e));
                    }
                }
                for i in 0..roots.len() {
                    for k in i + 1..roots.len() {
                        let (a, b) = (&roots[i], &roots[k]);
                        let p: i64 = a.1.iter().zip(&b.0).map(|(x, y)| x * y).sum();
                        // proportional primitive vectors are equal up to sign
                        if p * p == a.2 * b.2 && (0..a.0.len()).all(|t| (0..a.0.len()).all(|u| a.0[t] * b.0[u] == a.0[u] * b.0[t])) {
                            continue;
                        }
                        part.tried += 1;
                        if p < 0 {
                            continue;
                        }
                        part.passing += 1;
                        let entry = pair_entry(i, k, &exact[i], &exact[k], &lat);
                        let slot = match entry.class {
                            AngleClass::Right => 0,
                            AngleClass::Third => 1,
                            AngleClass::Quarter => 2,
                            AngleClass::Sixth => 3,
                            AngleClass::Parallel => 4,
                            AngleClass::Ultraparallel => 5,
                            AngleClass::Violation => {
                                part.exceptions.push(format!("gram {g:?}: {:?} {:?} ratio {}", a.0, b.0, entry.ratio));
                                continue;
                            }
                        };
                        part.histogram[slot] += 1;
                    }
                }
                part
            })
            .collect();
        next += BATCH;
        for part in batch {
            out.lattices += part.lattices;
            out.tried += part.tried;
            out.passing += part.passing;
            for (h, x) in out.histogram.iter_mut().zip(part.histogram) {
                *h += x;
            }
            out.exceptions.extend(part.exceptions);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, ints, rat};

    fn u2_cone(raw: &[&[i64]], witness: &[i64]) -> (ClippedCone, Canonicalized) {
        let g = Matrix::from_i64(&[vec![0, 1, 0], vec![1, 0, 0], vec![0, 0, -2]]);
        let sym = SymCone::new(QuadLattice::new(g).unwrap(), vec![Factor::lorentz(vec![0, 1, 2], ints(&[1, 1, 0]))]);
        let raw: Vec<Vec<Rational>> = raw.iter().map(|r| ints(r)).collect();
        ClippedCone::new(sym, &raw, ints(witness)).unwrap()
    }

    #[test]
    fn canonicalization_examples() {
        let (c, canon) = u2_cone(&[&[0, 0, -2]], &[2, 1, -1]);
        assert_eq!(c.roots, vec![Root { e: ints(&[0, 0, 1]), factor: 0, s: int(2) }]);
        assert!(canon.rejected.is_empty());
        let (_, canon) = u2_cone(&[&[1, 0, 0], &[0, 0, 1], &[0, 0, -3]], &[2, 1, -1]);
        assert_eq!(canon.rejected[0].reason, "not negative square");
        assert_eq!(canon.duplicates, vec![(2, 0)]);
        // a vector in a halfline summand
        let g = Matrix::diagonal(&ints(&[1, -1, -1, 1]));
        let sym = SymCone::new(
            QuadLattice::new(g).unwrap(),
            vec![Factor::lorentz(vec![0, 1, 2], ints(&[1, 0, 0])), Factor::halfline(3)],
        );
        let c = canonicalize_roots(&[ints(&[0, 0, 0, 1]), ints(&[0, 1, 0, 1])], &sym, &ints(&[3, 1, 0, 1]));
        assert!(c.rejected.iter().all(|r| r.reason.starts_with("assumption (i)")));
        assert_eq!(c.rejected.len(), 2);
    }

    #[test]
    fn klt_integrality_witness() {
        let g = Matrix::from_rows(vec![vec![rat(-3, 2), int(1)], vec![int(1), int(-2)]]);
        let lat = QuadLattice::new(g).unwrap();
        let root = Root { e: ints(&[1, 0]), factor: 0, s: rat(3, 2) };
        let it = check_integrality(&root, &lat);
        assert!(!it.integral);
        assert_eq!(it.witness, Some((1, "4/3".to_string())));
        let s = reflection_matrix(&root, &lat);
        assert_eq!(s, Matrix::from_rows(vec![vec![int(-1), rat(4, 3)], vec![int(0), int(1)]]));
        assert!(!s.is_integral());
        assert!(reflection_identities(&root, &lat).ok());
    }

    #[test]
    fn reflections_in_u2() {
        let (c, _) = u2_cone(&[&[0, 0, 1]], &[2, 1, -1]);
        assert!(check_integrality(&c.roots[0], c.lattice()).integral);
        assert_eq!(reflection_matrix(&c.roots[0], c.lattice()), Matrix::diagonal(&ints(&[1, 1, -1])));
        assert!(reflection_identities(&c.roots[0], c.lattice()).ok());
    }

    #[test]
    fn angle_classes() {
        let lat = QuadLattice::new(Matrix::from_i64(&[vec![-2, 1], vec![1, -2]])).unwrap();
        let a = Root { e: ints(&[1, 0]), factor: 0, s: int(2) };
        let b = Root { e: ints(&[0, 1]), factor: 0, s: int(2) };
        assert_eq!(pair_entry(0, 1, &a, &b, &lat).class, AngleClass::Third);
        let lat = QuadLattice::new(Matrix::from_i64(&[vec![-2, -1], vec![-1, -2]])).unwrap();
        let p = pair_entry(0, 1, &a, &b, &lat);
        assert_eq!(p.class, AngleClass::Violation);
        assert!(p.reason.contains("(iii)"));
        let lat = QuadLattice::new(Matrix::from_i64(&[vec![-2, 0], vec![0, -2]])).unwrap();
        assert_eq!(pair_entry(0, 1, &a, &b, &lat).class, AngleClass::Right);
        assert_eq!(classify_ratio(&rat(1, 2)), AngleClass::Quarter);
        assert_eq!(classify_ratio(&rat(3, 4)), AngleClass::Sixth);
        assert_eq!(classify_ratio(&int(1)), AngleClass::Parallel);
        assert_eq!(classify_ratio(&int(4)), AngleClass::Ultraparallel);
        assert_eq!(classify_ratio(&rat(1, 3)), AngleClass::Violation);
    }

    #[test]
    fn clipped_membership() {
        let (c, _) = u2_cone(&[&[0, 0, 1]], &[2, 1, -1]);
        assert!(c.member(&c.witness.clone(), Mode::Interior).unwrap());
        assert!(!c.member(&ints(&[2, 1, 1]), Mode::Interior).unwrap());
        assert!(c.member(&ints(&[0, 0, 0]), Mode::Closure).unwrap());
        assert!(!c.member(&ints(&[0, 0, 0]), Mode::Interior).unwrap());
    }

    #[test]
    fn direct_sum_stays_valid() {
        let (a, ca) = u2_cone(&[&[0, 0, 1]], &[2, 1, -1]);
        assert!(validate_clipped(&a, ca).ok());
        let s = a.direct_sum(&a).unwrap();
        let raw: Vec<Vec<Rational>> = s.roots.iter().map(|r| r.e.clone()).collect();
        let (s2, canon) = ClippedCone::new(s.ambient.clone(), &raw, s.witness.clone()).unwrap();
        assert_eq!(s2.roots, s.roots);
        assert!(validate_clipped(&s2, canon).ok());
    }

    #[test]
    fn root_closure_is_truncated() {
        let lat = QuadLattice::new(Matrix::from_i64(&[vec![-2, 1], vec![1, -2]])).unwrap();
        let s0 = reflection_in(&ints(&[1, 0]), &lat);
        let s1 = reflection_in(&ints(&[0, 1]), &lat);
        // A2 has three positive roots
        let all = close_roots(&[ints(&[1, 0]), ints(&[0, 1])], &[s0, s1], 3);
        assert_eq!(all.len(), 3);
    }

    #[test]
    fn coxeter_fuzz_small() {
        let f = coxeter_fuzz(2000, 3);
        assert!(f.passing >= 2000);
        assert!(f.exceptions.is_empty(), "{:?}", f.exceptions);
        assert_eq!(f.histogram.iter().sum::<usize>(), f.passing);
        assert_eq!(coxeter_fuzz(2000, 3), f);
    }
}
