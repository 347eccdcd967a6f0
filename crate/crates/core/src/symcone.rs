//! Self-dual homogeneous cones as direct sums of typed factors.

use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::intmat::{from_int_rows, integer_kernel, to_int_rows};
use crate::lattice::{is_positive_definite, signature, FiniteAction, QuadLattice, Signature};
use crate::linalg::{dot, is_zero_vec, Matrix};
use crate::polycone::{has_rational_direction, Mode};
use crate::scalar::{rational_from_json, Field, QuadElem, Rational};

#[derive(Debug, Clone, PartialEq)]
pub enum FactorKind {
    Halfline,
    /// Future light cone of `h` (factor-local coordinates).
    Lorentz { h: Vec<Rational> },
    /// Real symmetric `m×m` matrices, coordinates `X_ij` for `i ≤ j` row by row.
    Psd { m: usize },
    /// Two-dimensional simplicial cone spanned by two rays, possibly with
    /// quadratic irrational slopes.
    Plane { rays: [Vec<QuadElem>; 2] },
    /// Linear section of a PSD cone: `x ↦ embed·x` lands in `Psd { m }` coordinates.
    PsdSection { m: usize, embed: Matrix },
}

impl FactorKind {
    pub fn name(&self) -> &'static str {
        match self {
            FactorKind::Halfline => "halfline",
            FactorKind::Lorentz { .. } => "lorentz",
            FactorKind::Psd { .. } => "psd",
            FactorKind::Plane { .. } => "plane",
            FactorKind::PsdSection { .. } => "psd_section",
        }
    }

    pub fn is_psd_like(&self) -> bool {
        matches!(self, FactorKind::Psd { .. } | FactorKind::PsdSection { .. })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Factor {
    pub kind: FactorKind,
    pub coords: Vec<usize>,
}

impl Factor {
    pub fn halfline(c: usize) -> Self {
        Factor { kind: FactorKind::Halfline, coords: vec![c] }
    }

    pub fn lorentz(coords: Vec<usize>, h: Vec<Rational>) -> Self {
        Factor { kind: FactorKind::Lorentz { h }, coords }
    }

    pub fn psd(m: usize, coords: Vec<usize>) -> Self {
        Factor { kind: FactorKind::Psd { m }, coords }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn to_json(&self) -> Value {
        let mut v = json!({"kind": self.kind.name(), "coords": self.coords});
        match &self.kind {
            FactorKind::Halfline => {}
            FactorKind::Lorentz { h } => v["h"] = h.iter().map(|x| x.to_string()).collect(),
            FactorKind::Psd { m } => v["m"] = json!(m),
            FactorKind::Plane { rays } => {
                v["rays"] = rays.iter().map(|r| r.iter().map(|x| x.to_json()).collect::<Vec<_>>()).collect()
            }
            FactorKind::PsdSection { m, embed } => {
                v["m"] = json!(m);
                v["embed"] = json!(embed.to_strings());
            }
        }
        v
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let bad = |s: &str| Error::Parse(format!("factor: {s}"));
        let kind = v.get("kind").and_then(Value::as_str).ok_or_else(|| bad("missing kind"))?;
        let coords: Vec<usize> = v
            .get("coords")
            .and_then(Value::as_array)
            .ok_or_else(|| bad("missing coords"))?
            .iter()
            .map(|c| c.as_u64().map(|x| x as usize).ok_or_else(|| bad("coords must be non-negative integers")))
            .collect::<Result<_>>()?;
        let kind = match kind {
            "halfline" => FactorKind::Halfline,
            "lorentz" => {
                let h = v
                    .get("h")
                    .and_then(Value::as_array)
                    .ok_or_else(|| bad("lorentz factor needs h"))?
                    .iter()
                    .map(|x| rational_from_json(x).map_err(|e| bad(&e)))
                    .collect::<Result<_>>()?;
                FactorKind::Lorentz { h }
            }
            "psd" => {
                let m = v.get("m").and_then(Value::as_u64).ok_or_else(|| bad("psd factor needs m"))? as usize;
                FactorKind::Psd { m }
            }
            other => return Err(bad(&format!("unknown kind {other:?}"))),
        };
        Ok(Factor { kind, coords })
    }
}

pub fn psd_dim(m: usize) -> usize {
    m * (m + 1) / 2
}

/// Position of `X_ij` (`i ≤ j`) in the PSD coordinate vector.
pub fn psd_index(m: usize, i: usize, j: usize) -> usize {
    let (i, j) = if i <= j { (i, j) } else { (j, i) };
    i * m - i * i.saturating_sub(1) / 2 + (j - i)
}

pub fn psd_matrix(m: usize, v: &[Rational]) -> Matrix {
    let idx = psd_pairs(m);
    let mut x = Matrix::zeros(m, m);
    for (k, &(i, j)) in idx.iter().enumerate() {
        x.set(i, j, v[k].clone());
        x.set(j, i, v[k].clone());
    }
    x
}

pub fn psd_vector(x: &Matrix) -> Vec<Rational> {
    psd_pairs(x.rows()).iter().map(|&(i, j)| x.get(i, j).clone()).collect()
}

/// Index pairs `(i, j)`, `i ≤ j`, in coordinate order.
pub fn psd_pairs(m: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::with_capacity(psd_dim(m));
    for i in 0..m {
        for j in i..m {
            out.push((i, j));
        }
    }
    out
}

/// All principal minors non-negative.
pub fn is_psd(x: &Matrix) -> bool {
    let m = x.rows();
    (1u32..(1 << m)).all(|mask| {
        let idx: Vec<usize> = (0..m).filter(|i| mask & (1 << i) != 0).collect();
        !x.select(&idx, &idx).det().is_negative()
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub factor: Option<usize>,
    #[serde(skip_serializing_if = "String::is_empty")]
    pub detail: String,
}

impl Check {
    pub fn new(name: &str, passed: bool, factor: Option<usize>, detail: impl Into<String>) -> Self {
        Check { name: name.to_string(), passed, factor, detail: detail.into() }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct ValidationReport {
    pub checks: Vec<Check>,
}

impl ValidationReport {
    pub fn ok(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| !c.passed).collect()
    }

    pub fn push(&mut self, c: Check) {
        self.checks.push(c);
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SymCone {
    pub lattice: QuadLattice,
    pub factors: Vec<Factor>,
}

impl SymCone {
    pub fn new(lattice: QuadLattice, factors: Vec<Factor>) -> Self {
        SymCone { lattice, factors }
    }

    pub fn rank(&self) -> usize {
        self.lattice.rank()
    }

    /// Gram matrix of the form on a factor's coordinates.
    pub fn factor_gram(&self, f: usize) -> Matrix {
        let c = &self.factors[f].coords;
        self.lattice.gram().select(c, c)
    }

    pub fn restrict(&self, f: usize, v: &[Rational]) -> Vec<Rational> {
        self.factors[f].coords.iter().map(|&i| v[i].clone()).collect()
    }

    /// Factor owning each coordinate.
    pub fn owner(&self) -> Vec<Option<usize>> {
        let mut own = vec![None; self.rank()];
        for (k, f) in self.factors.iter().enumerate() {
            for &c in &f.coords {
                if c < own.len() {
                    own[c] = Some(k);
                }
            }
        }
        own
    }

    pub fn validate(&self) -> ValidationReport {
        let mut rep = ValidationReport::default();
        let n = self.rank();
        let mut seen = vec![0usize; n];
        let mut in_range = true;
        for f in &self.factors {
            for &c in &f.coords {
                if c < n {
                    seen[c] += 1;
                } else {
                    in_range = false;
                }
            }
        }
        rep.push(Check::new("coordinates in range", in_range, None, ""));
        let partition = seen.iter().all(|&k| k == 1);
        rep.push(Check::new(
            "factors partition the coordinates",
            partition,
            None,
            if partition { String::new() } else { format!("coordinate multiplicities {seen:?}") },
        ));
        if !in_range {
            return rep;
        }
        let own = self.owner();
        let g = self.lattice.gram();
        let mut block = true;
        for i in 0..n {
            for j in 0..n {
                if own[i] != own[j] && !g.get(i, j).is_zero() {
                    block = false;
                }
            }
        }
        rep.push(Check::new("gram block-diagonal along factors", block, None, ""));
        for (k, f) in self.factors.iter().enumerate() {
            let fg = self.factor_gram(k);
            let d = f.dim();
            match &f.kind {
                FactorKind::Halfline => {
                    let ok = d == 1 && fg.get(0, 0).is_positive();
                    rep.push(Check::new("halfline positive of rank 1", ok, Some(k), ""));
                }
                FactorKind::Lorentz { h } => {
                    rep.push(Check::new("lorentz dimension at least 3", d >= 3, Some(k), format!("dim {d}")));
                    let sig = signature(&fg);
                    let ok = sig == Signature { pos: 1, neg: d - 1, zero: 0 };
                    rep.push(Check::new("lorentz signature (1, dim-1)", ok, Some(k), format!("{sig:?}")));
                    if h.len() != d {
                        rep.push(Check::new("lorentz witness length", false, Some(k), format!("{} != {d}", h.len())));
                    } else {
                        let qh = dot(h, &fg.mul_vec(h));
                        rep.push(Check::new("lorentz witness q(h) > 0", qh.is_positive(), Some(k), format!("q(h) = {qh}")));
                    }
                }
                FactorKind::Psd { m } => {
                    rep.push(Check::new("psd size at least 3", *m >= 3, Some(k), format!("m = {m}")));
                    rep.push(Check::new("psd coordinate count", d == psd_dim(*m), Some(k), format!("{d} coords")));
                    rep.push(Check::new("psd block positive definite", is_positive_definite(&fg), Some(k), ""));
                }
                FactorKind::Plane { rays } => {
                    let ok = d == 2 && rays.iter().all(|r| r.len() == 2) && {
                        let det = rays[0][0].clone() * rays[1][1].clone() - rays[0][1].clone() * rays[1][0].clone();
                        !det.is_zero()
                    };
                    rep.push(Check::new("plane rays independent", ok, Some(k), ""));
                }
                FactorKind::PsdSection { m, embed } => {
                    let ok = embed.rows() == psd_dim(*m) && embed.cols() == d && embed.rank() == d;
                    rep.push(Check::new("psd section embedding injective", ok, Some(k), ""));
                }
            }
        }
        rep
    }

    pub fn member(&self, v: &[Rational], mode: Mode) -> Result<bool> {
        if v.len() != self.rank() {
            return Err(Error::DimensionMismatch { expected: self.rank(), got: v.len() });
        }
        for k in 0..self.factors.len() {
            if !self.factor_member(k, &self.restrict(k, v), mode)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Membership of a factor-local vector.
    pub fn factor_member(&self, k: usize, vf: &[Rational], mode: Mode) -> Result<bool> {
        let f = &self.factors[k];
        Ok(match &f.kind {
            FactorKind::Halfline => match mode {
                Mode::Interior => vf[0].is_positive(),
                _ => !vf[0].is_negative(),
            },
            FactorKind::Lorentz { h } => {
                let fg = self.factor_gram(k);
                let gv = fg.mul_vec(vf);
                let q = dot(vf, &gv);
                let qh = dot(h, &gv);
                match mode {
                    Mode::Interior => q.is_positive() && qh.is_positive(),
                    Mode::Closure => !q.is_negative() && !qh.is_negative(),
                    // a rational boundary point spans a rational ray
                    Mode::Plus => {
                        (q.is_positive() && qh.is_positive())
                            || (q.is_zero() && !qh.is_negative() && (is_zero_vec(vf) || has_rational_direction(vf)))
                    }
                }
            }
            FactorKind::Psd { m } => psd_member(&psd_matrix(*m, vf), mode)?,
            FactorKind::PsdSection { m, embed } => psd_member(&psd_matrix(*m, &embed.mul_vec(vf)), mode)?,
            FactorKind::Plane { rays } => {
                let (a, b) = plane_coefficients(rays, vf);
                match mode {
                    Mode::Interior => a.is_positive() && b.is_positive(),
                    // a rational point on a boundary ray makes that ray rational
                    Mode::Closure | Mode::Plus => !a.is_negative() && !b.is_negative(),
                }
            }
        })
    }

    /// Indices of the non-halfline and halfline factors.
    pub fn round_simplicial(&self) -> (Vec<usize>, Vec<usize>) {
        (0..self.factors.len()).partition(|&k| self.factors[k].kind != FactorKind::Halfline)
    }

    /// The sub-sum over the listed factors, coordinates renumbered in
    /// increasing order; also returns the ambient coordinates used.
    pub fn sub_cone(&self, factors: &[usize]) -> Result<(SymCone, Vec<usize>)> {
        let mut coords: Vec<usize> = factors.iter().flat_map(|&k| self.factors[k].coords.iter().copied()).collect();
        coords.sort_unstable();
        let pos = |c: usize| coords.iter().position(|&x| x == c).unwrap();
        let lat = QuadLattice::new(self.lattice.gram().select(&coords, &coords))?;
        let fs = factors
            .iter()
            .map(|&k| Factor { kind: self.factors[k].kind.clone(), coords: self.factors[k].coords.iter().map(|&c| pos(c)).collect() })
            .collect();
        Ok((SymCone::new(lat, fs), coords))
    }

    pub fn to_json(&self) -> Value {
        json!({
            "gram": self.lattice.gram().to_strings(),
            "factors": self.factors.iter().map(Factor::to_json).collect::<Vec<_>>(),
        })
    }
}

fn psd_member(x: &Matrix, mode: Mode) -> Result<bool> {
    match mode {
        Mode::Interior => Ok(is_positive_definite(x)),
        Mode::Closure => Ok(is_psd(x)),
        Mode::Plus => Err(Error::Unsupported("plus-hull membership for PSD factors".into())),
    }
}

/// Coefficients `(a, b)` with `v = a·r₀ + b·r₁`.
pub fn plane_coefficients(rays: &[Vec<QuadElem>; 2], v: &[Rational]) -> (QuadElem, QuadElem) {
    let x = QuadElem::rational(v[0].clone());
    let y = QuadElem::rational(v[1].clone());
    let (r, s) = (&rays[0], &rays[1]);
    let det = r[0].clone() * s[1].clone() - r[1].clone() * s[0].clone();
    let a = (x.clone() * s[1].clone() - y.clone() * s[0].clone()) / det.clone();
    let b = (r[0].clone() * y - r[1].clone() * x) / det;
    (a, b)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum HyperbolicType {
    Halfline,
    TwoHalflines,
    Hyperbolic,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InvariantType {
    pub kind: HyperbolicType,
    pub d: usize,
    /// Signature of the form on the invariant part of the orbit span.
    pub signature: Signature,
    /// Orbit coordinates, in increasing order.
    #[serde(skip)]
    pub coords: Vec<usize>,
    /// Integer basis of the invariant part, in ambient coordinates (columns).
    #[serde(skip)]
    pub basis: Matrix,
}

/// Where `g` sends factor `k`, if it maps that factor's coordinate span
/// onto another factor's span of the same dimension.
pub fn factor_image(sym: &SymCone, g: &Matrix, k: usize) -> Option<usize> {
    let own = sym.owner();
    let src = &sym.factors[k].coords;
    let mut target: Option<usize> = None;
    for &c in src {
        for r in 0..g.rows() {
            if g.get(r, c).is_zero() {
                continue;
            }
            let o = own[r]?;
            match target {
                None => target = Some(o),
                Some(t) if t != o => return None,
                _ => {}
            }
        }
    }
    let t = target?;
    (sym.factors[t].dim() == src.len()).then_some(t)
}

/// Orbits of the action on factors; `None` when some element does not
/// permute the factors.
pub fn factor_orbits(sym: &SymCone, action: &FiniteAction) -> Option<Vec<Vec<usize>>> {
    let nf = sym.factors.len();
    let mut perms = Vec::new();
    for g in action.generators() {
        let p: Vec<usize> = (0..nf).map(|k| factor_image(sym, g, k)).collect::<Option<_>>()?;
        let mut sorted = p.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != nf {
            return None;
        }
        perms.push(p);
    }
    let mut orbit_of = vec![usize::MAX; nf];
    let mut orbits = Vec::new();
    for k in 0..nf {
        if orbit_of[k] != usize::MAX {
            continue;
        }
        let id = orbits.len();
        let mut orb = vec![k];
        orbit_of[k] = id;
        let mut i = 0;
        while i < orb.len() {
            for p in &perms {
                let t = p[orb[i]];
                if orbit_of[t] == usize::MAX {
                    orbit_of[t] = id;
                    orb.push(t);
                }
            }
            i += 1;
        }
        orb.sort_unstable();
        orbits.push(orb);
    }
    Some(orbits)
}

/// Integer basis (columns, ambient coordinates) of the invariant vectors
/// supported on `coords`, which must be a union of factors stable under G.
pub fn invariant_basis_on(action: &FiniteAction, coords: &[usize], n: usize) -> Matrix {
    let k = coords.len();
    let id = Matrix::identity(k);
    let mut rows = Vec::new();
    for g in action.generators() {
        let gs = g.select(coords, coords).sub(&id);
        rows.extend(to_int_rows(&gs).expect("integral group"));
    }
    let local = if rows.is_empty() { (0..k).map(|i| crate::intmat::bi(&(0..k).map(|j| (i == j) as i64).collect::<Vec<_>>())).collect() } else { integer_kernel(&rows, k) };
    let lb = if local.is_empty() { Matrix::zeros(k, 0) } else { from_int_rows(&local).transpose() };
    let mut out = Matrix::zeros(n, lb.cols());
    for (a, &c) in coords.iter().enumerate() {
        for j in 0..lb.cols() {
            out.set(c, j, lb.get(a, j).clone());
        }
    }
    out
}

/// Type of the invariant part of a G-stable orbit of Lorentz factors.
pub fn invariant_hyperbolic_type(sym: &SymCone, orbit: &[usize], action: &FiniteAction) -> Result<InvariantType> {
    for &k in orbit {
        if !matches!(sym.factors[k].kind, FactorKind::Lorentz { .. }) {
            return Err(Error::PreconditionFailure(format!("factor {k} in the orbit is not a Lorentz factor")));
        }
    }
    // single orbit, stable under every element
    let orbits = factor_orbits(sym, action)
        .ok_or_else(|| Error::PreconditionFailure("group does not permute the factors".into()))?;
    let mut sorted = orbit.to_vec();
    sorted.sort_unstable();
    if !orbits.contains(&sorted) {
        return Err(Error::PreconditionFailure(format!("factors {orbit:?} are not a single G-orbit")));
    }
    let mut coords: Vec<usize> = orbit.iter().flat_map(|&k| sym.factors[k].coords.iter().copied()).collect();
    coords.sort_unstable();
    let basis = invariant_basis_on(action, &coords, sym.rank());
    let d = basis.cols();
    let sig = signature(&sym.lattice.restrict(&basis));
    let kind = match d {
        0 => return Err(Error::SignatureAnomaly { dim: 0, signature: sig }),
        1 => HyperbolicType::Halfline,
        2 => HyperbolicType::TwoHalflines,
        _ => {
            if sig != (Signature { pos: 1, neg: d - 1, zero: 0 }) {
                return Err(Error::SignatureAnomaly { dim: d, signature: sig });
            }
            HyperbolicType::Hyperbolic
        }
    };
    Ok(InvariantType { kind, d, signature: sig, coords, basis })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::group_closure;
    use crate::scalar::{int, ints};

    fn u2() -> QuadLattice {
        QuadLattice::new(Matrix::from_i64(&[vec![0, 1, 0], vec![1, 0, 0], vec![0, 0, -2]])).unwrap()
    }

    fn diag(d: &[i64]) -> QuadLattice {
        QuadLattice::new(Matrix::diagonal(&ints(d))).unwrap()
    }

    #[test]
    fn psd_coordinates() {
        assert_eq!(psd_pairs(3), vec![(0, 0), (0, 1), (0, 2), (1, 1), (1, 2), (2, 2)]);
        let x = psd_matrix(3, &ints(&[1, 2, 3, 4, 5, 6]));
        assert_eq!(psd_vector(&x), ints(&[1, 2, 3, 4, 5, 6]));
        assert_eq!(*x.get(2, 1), int(5));
        assert_eq!(psd_index(3, 2, 1), 4);
        assert_eq!(psd_index(3, 2, 2), 5);
        assert_eq!(psd_index(3, 0, 2), 2);
    }

    #[test]
    fn validate_examples() {
        let c = SymCone::new(u2(), vec![Factor::lorentz(vec![0, 1, 2], ints(&[1, 1, 0]))]);
        assert!(c.validate().ok());
        let c = SymCone::new(diag(&[1, 1]), vec![Factor::halfline(0), Factor::halfline(1)]);
        assert!(c.validate().ok());
        let c = SymCone::new(diag(&[1, -1, -1, -1]), vec![Factor::lorentz(vec![0, 1, 2, 3], ints(&[0, 1, 0, 0]))]);
        let rep = c.validate();
        assert!(!rep.ok());
        assert_eq!(rep.failures()[0].name, "lorentz witness q(h) > 0");
        assert_eq!(rep.failures()[0].factor, Some(0));
    }

    #[test]
    fn validate_flags_structure() {
        // off-block entry between two factors
        let g = QuadLattice::new(Matrix::from_i64(&[vec![1, 1], vec![1, 3]])).unwrap();
        let c = SymCone::new(g, vec![Factor::halfline(0), Factor::halfline(1)]);
        assert!(!c.validate().ok());
        let c = SymCone::new(diag(&[1, 1]), vec![Factor::halfline(0)]);
        assert!(!c.validate().ok());
        let c = SymCone::new(diag(&[1, 1, 1]), vec![Factor::psd(2, vec![0, 1, 2])]);
        assert!(!c.validate().ok());
    }

    #[test]
    fn member_examples() {
        let c = SymCone::new(u2(), vec![Factor::lorentz(vec![0, 1, 2], ints(&[1, 1, 0]))]);
        assert!(c.member(&ints(&[2, 1, 1]), Mode::Interior).unwrap());
        assert!(!c.member(&ints(&[1, 0, 0]), Mode::Interior).unwrap());
        assert!(c.member(&ints(&[1, 0, 0]), Mode::Plus).unwrap());
        assert!(c.member(&ints(&[0, 0, 0]), Mode::Plus).unwrap());
        assert!(!c.member(&ints(&[-1, 0, 0]), Mode::Closure).unwrap());
        assert!(matches!(c.member(&ints(&[1, 0]), Mode::Closure), Err(Error::DimensionMismatch { .. })));
        let p = SymCone::new(diag(&[1, 1, 1, 1, 1, 1]), vec![Factor::psd(3, (0..6).collect())]);
        assert!(p.member(&ints(&[1, 0, 0, 1, 0, 1]), Mode::Interior).unwrap());
        assert!(p.member(&ints(&[1, 0, 0, 0, 0, 0]), Mode::Closure).unwrap());
        assert!(!p.member(&ints(&[1, 0, 0, 0, 0, 0]), Mode::Interior).unwrap());
        assert!(!p.member(&ints(&[1, 2, 0, 1, 0, 1]), Mode::Closure).unwrap());
        assert!(matches!(p.member(&ints(&[1, 0, 0, 1, 0, 1]), Mode::Plus), Err(Error::Unsupported(_))));
    }

    #[test]
    fn hyperbolic_trichotomy_examples() {
        let l3 = SymCone::new(diag(&[1, -1, -1]), vec![Factor::lorentz(vec![0, 1, 2], ints(&[1, 0, 0]))]);
        let g = group_closure(3, &[Matrix::diagonal(&ints(&[1, 1, -1]))], 10).unwrap();
        assert_eq!(invariant_hyperbolic_type(&l3, &[0], &g).unwrap().kind, HyperbolicType::TwoHalflines);
        let l4 = SymCone::new(diag(&[1, -1, -1, -1]), vec![Factor::lorentz(vec![0, 1, 2, 3], ints(&[1, 0, 0, 0]))]);
        let g = group_closure(4, &[Matrix::diagonal(&ints(&[1, 1, 1, -1]))], 10).unwrap();
        let t = invariant_hyperbolic_type(&l4, &[0], &g).unwrap();
        assert_eq!((t.kind, t.d), (HyperbolicType::Hyperbolic, 3));
        assert_eq!(t.signature, Signature { pos: 1, neg: 2, zero: 0 });
        let t = invariant_hyperbolic_type(&l4, &[0], &FiniteAction::trivial(4)).unwrap();
        assert_eq!((t.kind, t.d), (HyperbolicType::Hyperbolic, 4));
        // time-reversal leaves only spacelike invariants
        let g = group_closure(3, &[Matrix::diagonal(&ints(&[-1, 1, 1]))], 10).unwrap();
        assert_eq!(invariant_hyperbolic_type(&l3, &[0], &g).unwrap().kind, HyperbolicType::TwoHalflines);
        let g = group_closure(4, &[Matrix::diagonal(&ints(&[-1, 1, 1, 1]))], 10).unwrap();
        assert!(matches!(invariant_hyperbolic_type(&l4, &[0], &g), Err(Error::SignatureAnomaly { dim: 3, .. })));
    }
}
