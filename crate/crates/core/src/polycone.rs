//! Polyhedral cones in both representations, by incremental double
//! description.

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::linalg::{dot, is_zero_vec, rank_of, same_ray, vneg, vscale, vsub, Matrix};
use crate::scalar::{Field, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    Interior,
    Closure,
    Plus,
}

/// A polyhedral cone `{x : ⟨f, x⟩ ≥ 0 ∀f, ⟨h, x⟩ = 0 ∀h}` together with
/// its generators (extremal rays plus a lineality basis).
#[derive(Debug, Clone, PartialEq)]
pub struct PolyCone<F = Rational> {
    dim: usize,
    rays: Vec<Vec<F>>,
    lineality: Vec<Vec<F>>,
    facets: Vec<Vec<F>>,
    equations: Vec<Vec<F>>,
}

/// Generators of `{y : ⟨a, y⟩ ≥ 0 for a in ineqs}`: (extremal rays, lineality basis).
pub fn dd_generators<F: Field>(dim: usize, ineqs: &[Vec<F>]) -> (Vec<Vec<F>>, Vec<Vec<F>>) {
    let mut lin: Vec<Vec<F>> = (0..dim)
        .map(|i| (0..dim).map(|j| if i == j { F::one() } else { F::zero() }).collect())
        .collect();
    let mut rays: Vec<Vec<F>> = Vec::new();
    let mut done: Vec<Vec<F>> = Vec::new();
    for a in ineqs {
        if is_zero_vec(a) {
            continue;
        }
        if let Some(pos) = lin.iter().position(|l| !dot(a, l).is_zero()) {
            let mut l = lin.remove(pos);
            let mut al = dot(a, &l);
            if al.is_negative() {
                l = vneg(&l);
                al = -al;
            }
            for v in lin.iter_mut().chain(rays.iter_mut()) {
                let t = dot(a, v) / al.clone();
                if !t.is_zero() {
                    *v = vsub(v, &vscale(&l, &t));
                }
            }
            rays = rays.into_iter().map(|r| F::normalize_ray(&r)).collect();
            rays.push(F::normalize_ray(&l));
            done.push(a.clone());
            continue;
        }
        let vals: Vec<F> = rays.iter().map(|r| dot(a, r)).collect();
        let neg: Vec<usize> = (0..rays.len()).filter(|&i| vals[i].is_negative()).collect();
        if neg.is_empty() {
            done.push(a.clone());
            continue;
        }
        let pos: Vec<usize> = (0..rays.len()).filter(|&i| vals[i].is_positive()).collect();
        let target = (dim - lin.len()).saturating_sub(2);
        let tight: Vec<Vec<bool>> = rays.iter().map(|r| done.iter().map(|c| dot(c, r).is_zero()).collect()).collect();
        let mut next: Vec<Vec<F>> = (0..rays.len()).filter(|i| !vals[*i].is_negative()).map(|i| rays[i].clone()).collect();
        for &p in &pos {
            for &n in &neg {
                let common: Vec<usize> = (0..done.len()).filter(|&k| tight[p][k] && tight[n][k]).collect();
                if common.len() < target {
                    continue;
                }
                // combinatorial test: no third ray tight on the common set
                let blocked = (0..rays.len()).any(|r| r != p && r != n && common.iter().all(|&k| tight[r][k]));
                if blocked {
                    continue;
                }
                let cs: Vec<Vec<F>> = common.iter().map(|&k| done[k].clone()).collect();
                if rank_of(dim, &cs) != target {
                    continue;
                }
                let w = vsub(&vscale(&rays[n], &vals[p]), &vscale(&rays[p], &vals[n]));
                if !is_zero_vec(&w) {
                    next.push(F::normalize_ray(&w));
                }
            }
        }
        rays = dedup_rays(next);
        done.push(a.clone());
    }
    (rays, lin)
}

fn dedup_rays<F: Field>(v: Vec<Vec<F>>) -> Vec<Vec<F>> {
    let mut out: Vec<Vec<F>> = Vec::new();
    for r in v {
        if !out.iter().any(|o| same_ray(o, &r)) {
            out.push(r);
        }
    }
    out
}

impl<F: Field> PolyCone<F> {
    /// Cone spanned by the given vectors.
    pub fn from_rays(dim: usize, gens: &[Vec<F>]) -> Result<Self> {
        for g in gens {
            if g.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, got: g.len() });
            }
        }
        if gens.iter().all(|g| is_zero_vec(g)) {
            return Err(Error::DegenerateInput);
        }
        // facets of cone(gens) are the extremal rays of its dual
        let (facets, equations) = dd_generators(dim, gens);
        let mut ineqs = facets.clone();
        for e in &equations {
            ineqs.push(e.clone());
            ineqs.push(vneg(e));
        }
        let (rays, lineality) = dd_generators(dim, &ineqs);
        Ok(PolyCone { dim, rays, lineality, facets, equations }.canonical())
    }

    /// Cone cut out by `⟨f, x⟩ ≥ 0` for the given normals.
    pub fn from_facets(dim: usize, normals: &[Vec<F>]) -> Result<Self> {
        for f in normals {
            if f.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, got: f.len() });
            }
        }
        let (rays, lineality) = dd_generators(dim, normals);
        let mut gens = rays.clone();
        for l in &lineality {
            gens.push(l.clone());
            gens.push(vneg(l));
        }
        let (facets, equations) = dd_generators(dim, &gens);
        Ok(PolyCone { dim, rays, lineality, facets, equations }.canonical())
    }

    fn canonical(mut self) -> Self {
        let key = |v: &Vec<F>| v.iter().map(|x| x.approx()).collect::<Vec<f64>>();
        let cmp = |a: &Vec<F>, b: &Vec<F>| key(b).partial_cmp(&key(a)).unwrap_or(std::cmp::Ordering::Equal);
        self.rays.sort_by(cmp);
        self.facets.sort_by(cmp);
        self
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rays(&self) -> &[Vec<F>] {
        &self.rays
    }

    pub fn lineality(&self) -> &[Vec<F>] {
        &self.lineality
    }

    pub fn facets(&self) -> &[Vec<F>] {
        &self.facets
    }

    pub fn equations(&self) -> &[Vec<F>] {
        &self.equations
    }

    pub fn is_full_dimensional(&self) -> bool {
        self.equations.is_empty()
    }

    pub fn is_pointed(&self) -> bool {
        self.lineality.is_empty()
    }

    pub fn is_simplicial(&self) -> bool {
        self.is_pointed() && rank_of(self.dim, &self.rays) == self.rays.len()
    }

    pub fn contains(&self, v: &[F], mode: Mode) -> bool {
        assert_eq!(v.len(), self.dim, "dimension mismatch in membership");
        if !self.equations.iter().all(|h| dot(h, v).is_zero()) {
            return false;
        }
        match mode {
            Mode::Interior => self.is_full_dimensional() && self.facets.iter().all(|f| dot(f, v).is_positive()),
            Mode::Closure => self.facets.iter().all(|f| !dot(f, v).is_negative()),
            Mode::Plus => {
                if !self.contains(v, Mode::Closure) {
                    return false;
                }
                // v is in the hull of rational points iff the face through v
                // has a rational linear span
                let tight: Vec<&Vec<F>> = self.facets.iter().filter(|f| dot(f, v).is_zero()).collect();
                let mut face: Vec<Vec<F>> =
                    self.rays.iter().filter(|r| tight.iter().all(|f| dot(f, r).is_zero())).cloned().collect();
                face.extend(self.lineality.iter().cloned());
                is_rational_span(self.dim, &face)
            }
        }
    }

    pub fn to_json(&self) -> Value {
        let enc = |vs: &[Vec<F>]| -> Value { vs.iter().map(|v| v.iter().map(|x| x.to_json()).collect::<Vec<_>>()).collect() };
        json!({
            "rays": enc(&self.rays),
            "lineality": enc(&self.lineality),
            "facets": enc(&self.facets),
            "equations": enc(&self.equations),
        })
    }
}

/// The span of `vs` is defined over Q (stable under conjugation).
pub fn is_rational_span<F: Field>(dim: usize, vs: &[Vec<F>]) -> bool {
    let r = rank_of(dim, vs);
    let mut both: Vec<Vec<F>> = vs.to_vec();
    both.extend(vs.iter().map(|v| v.iter().map(|x| x.conjugate()).collect::<Vec<F>>()));
    rank_of(dim, &both) == r
}

/// The line through `v` contains a nonzero rational vector.
pub fn has_rational_direction<F: Field>(v: &[F]) -> bool {
    !is_zero_vec(v) && is_rational_span(v.len(), &[v.to_vec()])
}

/// Simplicial-cone preorder: irrational rays of `xi` are rays of `sigma`,
/// and the span of the rational rays of `xi` is spanned by rays of `sigma`.
pub fn rules<F: Field>(sigma: &PolyCone<F>, xi: &PolyCone<F>) -> Result<bool> {
    if !sigma.is_simplicial() || !xi.is_simplicial() {
        return Err(Error::NotSimplicial);
    }
    if sigma.dim != xi.dim {
        return Err(Error::DimensionMismatch { expected: sigma.dim, got: xi.dim });
    }
    let n = sigma.dim;
    let (rational, irrational): (Vec<&Vec<F>>, Vec<&Vec<F>>) = xi.rays.iter().partition(|r| has_rational_direction(r));
    if !irrational.iter().all(|r| sigma.rays.iter().any(|s| same_ray(s, r))) {
        return Ok(false);
    }
    let w: Vec<Vec<F>> = rational.into_iter().cloned().collect();
    let k = rank_of(n, &w);
    let inside: Vec<Vec<F>> = sigma
        .rays
        .iter()
        .filter(|s| {
            let mut t = w.clone();
            t.push((*s).clone());
            rank_of(n, &t) == k
        })
        .cloned()
        .collect();
    Ok(rank_of(n, &inside) == k)
}

/// Cone in the direct sum whose generators are the embedded generators.
pub fn direct_sum<F: Field>(a: &PolyCone<F>, b: &PolyCone<F>) -> PolyCone<F> {
    let n = a.dim + b.dim;
    let left = |v: &Vec<F>| -> Vec<F> {
        let mut w = v.clone();
        w.extend((0..b.dim).map(|_| F::zero()));
        w
    };
    let right = |v: &Vec<F>| -> Vec<F> {
        let mut w: Vec<F> = (0..a.dim).map(|_| F::zero()).collect();
        w.extend(v.iter().cloned());
        w
    };
    let cat = |x: &[Vec<F>], y: &[Vec<F>]| -> Vec<Vec<F>> { x.iter().map(left).chain(y.iter().map(right)).collect() };
    PolyCone {
        dim: n,
        rays: cat(&a.rays, &b.rays),
        lineality: cat(&a.lineality, &b.lineality),
        facets: cat(&a.facets, &b.facets),
        equations: cat(&a.equations, &b.equations),
    }
    .canonical()
}

/// True when the two cones have the same closure (mutual ray containment).
pub fn same_cone<F: Field>(a: &PolyCone<F>, b: &PolyCone<F>) -> bool {
    let inside = |x: &PolyCone<F>, y: &PolyCone<F>| {
        x.rays.iter().all(|r| y.contains(r, Mode::Closure))
            && x.lineality.iter().all(|l| y.contains(l, Mode::Closure) && y.contains(&vneg(l), Mode::Closure))
    };
    a.dim == b.dim && inside(a, b) && inside(b, a)
}

/// Matrix whose rows are the facet normals.
pub fn facet_matrix(c: &PolyCone<Rational>) -> Matrix {
    Matrix::from_rows(c.facets.clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, ints, QuadElem};

    fn cone(rays: &[&[i64]]) -> PolyCone {
        let v: Vec<Vec<Rational>> = rays.iter().map(|r| ints(r)).collect();
        PolyCone::from_rays(rays[0].len(), &v).unwrap()
    }

    fn has(vs: &[Vec<Rational>], w: &[i64]) -> bool {
        vs.iter().any(|v| same_ray(v, &ints(w)))
    }

    #[test]
    fn quadrant_facets() {
        let q = cone(&[&[1, 0], &[0, 1]]);
        assert_eq!(q.facets().len(), 2);
        assert!(has(q.facets(), &[1, 0]) && has(q.facets(), &[0, 1]));
        assert!(q.contains(&ints(&[1, 1]), Mode::Interior));
        assert!(!q.contains(&ints(&[1, 0]), Mode::Interior));
        assert!(q.contains(&ints(&[1, 0]), Mode::Closure));
        assert!(q.contains(&ints(&[1, 0]), Mode::Plus));
    }

    #[test]
    fn octant_rays() {
        let f = vec![ints(&[1, 0, 0]), ints(&[0, 1, 0]), ints(&[0, 0, 1])];
        let c = PolyCone::from_facets(3, &f).unwrap();
        assert_eq!(c.rays().len(), 3);
        for e in [[1, 0, 0], [0, 1, 0], [0, 0, 1]] {
            assert!(has(c.rays(), &e));
        }
    }

    #[test]
    fn square_based_cone() {
        let c = cone(&[&[1, 0, 0], &[1, 1, 0], &[1, 1, 1], &[1, 0, 1]]);
        assert_eq!(c.facets().len(), 4);
        assert_eq!(c.rays().len(), 4);
        assert!(c.contains(&ints(&[2, 1, 1]), Mode::Interior));
        assert!(!c.contains(&ints(&[1, 1, 1]), Mode::Interior));
        let s = direct_sum(&c, &cone(&[&[1]]));
        assert_eq!(s.facets().len(), 5);
        let dd = PolyCone::from_rays(4, s.rays()).unwrap();
        assert_eq!(dd.facets().len(), 5);
        assert!(same_cone(&s, &dd));
    }

    #[test]
    fn sums_of_halflines() {
        let h = cone(&[&[1]]);
        let q = direct_sum(&h, &h);
        assert!(same_cone(&q, &cone(&[&[1, 0], &[0, 1]])));
        let o = direct_sum(&q, &h);
        assert!(same_cone(&o, &cone(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]])));
    }

    #[test]
    fn lineality_and_lower_dimension() {
        // half-plane x ≥ 0 in R²
        let hp = PolyCone::from_facets(2, &[ints(&[1, 0])]).unwrap();
        assert_eq!(hp.lineality().len(), 1);
        assert_eq!(hp.rays().len(), 1);
        // a single ray in R³
        let r = cone(&[&[1, 2, 3]]);
        assert_eq!(r.equations().len(), 2);
        assert!(r.contains(&ints(&[2, 4, 6]), Mode::Closure));
        assert!(!r.contains(&ints(&[2, 4, 6]), Mode::Interior));
        assert!(!r.contains(&ints(&[1, 2, 4]), Mode::Closure));
        assert_eq!(PolyCone::<Rational>::from_rays(2, &[ints(&[0, 0])]), Err(Error::DegenerateInput));
    }

    #[test]
    fn rules_examples() {
        let sigma = cone(&[&[1, 0], &[0, 1]]);
        assert!(rules(&sigma, &sigma).unwrap());
        assert!(rules(&sigma, &cone(&[&[1, 0], &[1, 1]])).unwrap());
        let q = |a: i64, b: i64| QuadElem::new(int(a), int(b), 2);
        let s2 = PolyCone::from_rays(2, &[vec![q(1, 0), q(0, 0)], vec![q(0, 0), q(1, 0)]]).unwrap();
        let x2 = PolyCone::from_rays(2, &[vec![q(1, 0), q(0, 1)], vec![q(1, 0), q(0, 0)]]).unwrap();
        assert!(!rules(&s2, &x2).unwrap());
        assert!(rules(&x2, &x2).unwrap());
        let not_simplicial = cone(&[&[1, 0, 0], &[1, 1, 0], &[1, 1, 1], &[1, 0, 1]]);
        assert_eq!(rules(&not_simplicial, &not_simplicial), Err(Error::NotSimplicial));
    }

    #[test]
    fn plus_mode_with_irrational_boundary() {
        // cone between (1,0) and (1,√2)
        let q = |a: i64, b: i64| QuadElem::new(int(a), int(b), 2);
        let c = PolyCone::from_rays(2, &[vec![q(1, 0), q(0, 0)], vec![q(1, 0), q(0, 1)]]).unwrap();
        assert!(c.contains(&[q(1, 0), q(0, 1)], Mode::Closure));
        assert!(!c.contains(&[q(1, 0), q(0, 1)], Mode::Plus));
        assert!(c.contains(&[q(3, 0), q(0, 0)], Mode::Plus));
        assert!(c.contains(&[q(2, 0), q(1, 0)], Mode::Plus));
    }
}
