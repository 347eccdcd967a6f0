//! Descent of a clipped cone to the invariants of a finite group: the
//! corrected invariant ambient cone, descended roots and their reflections,
//! centralizer lifts and wall descent.

use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::clipping::{reflection_in, validate_clipped, ClipValidation, ClippedCone, Root};
use crate::error::{Error, Result};
use crate::lattice::{signature, FiniteAction, QuadLattice, Signature};
use crate::linalg::{dot, vadd, vneg, vscale, Matrix};
use crate::polycone::{rules, same_cone, Mode, PolyCone};
use crate::sample::{rng, small_rational};
use crate::scalar::{sqrt_rational, Field, QuadElem, Rational};
use crate::symcone::{
    factor_image, factor_orbits, invariant_basis_on, invariant_hyperbolic_type, plane_coefficients, psd_dim, psd_vector,
    Check, Factor, FactorKind, HyperbolicType, SymCone,
};

use rand::Rng;

fn strs(v: &[Rational]) -> Vec<String> {
    v.iter().map(|x| x.to_string()).collect()
}

fn ser_vec<S: serde::Serializer>(v: &[Rational], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|x| x.to_string()))
}

fn ser_mat<S: serde::Serializer>(m: &Matrix, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(m.to_strings())
}

fn zeros(n: usize) -> Vec<Rational> {
    vec![<Rational as Field>::zero(); n]
}

fn embed(coords: &[usize], local: &[Rational], n: usize) -> Vec<Rational> {
    let mut v = zeros(n);
    for (&c, x) in coords.iter().zip(local) {
        v[c] = x.clone();
    }
    v
}

/// Sum of the distinct elements of the orbit `G·e`.
pub fn orbit_sum(root: &Root, action: &FiniteAction) -> Vec<Rational> {
    action.orbit(&root.e).iter().fold(zeros(root.e.len()), |acc, v| vadd(&acc, v))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FactorOrbit {
    pub factors: Vec<usize>,
    pub kind: &'static str,
    /// Dimension of the invariant part.
    pub d: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hyperbolic_type: Option<HyperbolicType>,
    pub signature: Signature,
    /// Columns of the invariant basis belonging to this orbit.
    pub columns: Vec<usize>,
    /// Factor of the descended ambient cone built from this orbit.
    pub descended_factor: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RootOrbit {
    pub roots: Vec<usize>,
    /// Index of the factor orbit carrying the roots.
    pub carrier: usize,
    #[serde(serialize_with = "ser_vec")]
    pub epsilon: Vec<Rational>,
    pub q_epsilon: String,
    pub q_e_epsilon: String,
    pub s: String,
    pub kept: bool,
    pub reason: String,
}

/// Blocks, word and product of a centralizer lift.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CentralizerLift {
    /// Blocks of positions in the orbit list, of size 1 or 2.
    pub blocks: Vec<Vec<usize>>,
    /// Reflection word, as positions in the orbit list.
    pub word: Vec<usize>,
    #[serde(serialize_with = "ser_mat")]
    pub matrix: Matrix,
    pub blocks_commute: bool,
    pub commutes_with_group: bool,
}

/// Splits the orbit into blocks along positive pairings and multiplies the
/// block reflections `σ_e` or `σ_e σ_e' σ_e`.
pub fn centralizer_lift(orbit: &[Root], action: &FiniteAction, lattice: &QuadLattice) -> Result<CentralizerLift> {
    let m = orbit.len();
    let n = lattice.rank();
    let mut partner: Vec<Option<usize>> = vec![None; m];
    for i in 0..m {
        for j in 0..m {
            if i == j {
                continue;
            }
            let p = lattice.q(&orbit[i].e, &orbit[j].e);
            if p.is_positive() {
                if partner[i].is_some() {
                    return Err(Error::BlockStructureViolation(format!("root {i} pairs positively with several roots")));
                }
                let half = orbit[i].s.clone() / Rational::from_integer(2.into());
                if p != half {
                    return Err(Error::BlockStructureViolation(format!("q(e{i}, e{j}) = {p}, expected s/2 = {half}")));
                }
                partner[i] = Some(j);
            }
        }
    }
    let paired = partner.iter().filter(|p| p.is_some()).count();
    if paired != 0 && paired != m {
        return Err(Error::BlockStructureViolation("mixed block sizes in one orbit".into()));
    }
    let mut blocks = Vec::new();
    let mut word = Vec::new();
    for i in 0..m {
        match partner[i] {
            None => {
                blocks.push(vec![i]);
                word.push(i);
            }
            Some(j) if i < j => {
                blocks.push(vec![i, j]);
                word.extend([i, j, i]);
            }
            _ => {}
        }
    }
    let sig: Vec<Matrix> = orbit.iter().map(|r| reflection_in(&r.e, lattice)).collect();
    let block_mats: Vec<Matrix> = blocks
        .iter()
        .map(|b| if b.len() == 1 { sig[b[0]].clone() } else { sig[b[0]].mul(&sig[b[1]]).mul(&sig[b[0]]) })
        .collect();
    let mut blocks_commute = true;
    for a in 0..block_mats.len() {
        for b in a + 1..block_mats.len() {
            if block_mats[a].mul(&block_mats[b]) != block_mats[b].mul(&block_mats[a]) {
                blocks_commute = false;
            }
        }
    }
    let matrix = block_mats.iter().fold(Matrix::identity(n), |acc, b| acc.mul(b));
    let commutes_with_group = action.elements().iter().all(|g| matrix.mul(g) == g.mul(&matrix));
    Ok(CentralizerLift { blocks, word, matrix, blocks_commute, commutes_with_group })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WallEntry {
    #[serde(serialize_with = "ser_vec")]
    pub wall: Vec<Rational>,
    #[serde(serialize_with = "ser_vec")]
    pub sum: Vec<Rational>,
    pub pairing: String,
    pub kept: bool,
}

/// Full group sums `Σ_g g·w` of the walls, with the pairing `q(w, Σ)`.
pub fn wall_entries(walls: &[Vec<Rational>], action: &FiniteAction, lattice: &QuadLattice) -> Result<Vec<WallEntry>> {
    walls
        .iter()
        .enumerate()
        .map(|(i, w)| {
            if w.len() != lattice.rank() {
                return Err(Error::DimensionMismatch { expected: lattice.rank(), got: w.len() });
            }
            if !lattice.norm(w).is_negative() {
                return Err(Error::PreconditionFailure(format!("wall {i} does not have negative square")));
            }
            let sum = action.group_sum(w);
            let p = lattice.q(w, &sum);
            Ok(WallEntry { wall: w.clone(), sum, pairing: p.to_string(), kept: p.is_negative() })
        })
        .collect()
}

/// The descended walls: group sums pairing negatively with their wall,
/// duplicates removed.
pub fn descend_walls(walls: &[Vec<Rational>], action: &FiniteAction, lattice: &QuadLattice) -> Result<Vec<Vec<Rational>>> {
    let mut out: Vec<Vec<Rational>> = Vec::new();
    for e in wall_entries(walls, action, lattice)? {
        if e.kept && !out.contains(&e.sum) {
            out.push(e.sum);
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DescentOptions {
    pub samples: usize,
    pub seed: u64,
}

impl Default for DescentOptions {
    fn default() -> Self {
        DescentOptions { samples: 1000, seed: crate::sample::DEFAULT_SEED }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Equality {
    /// "exact" for polyhedral instances, "sampled" otherwise.
    pub method: &'static str,
    pub samples: usize,
    /// Samples inside the invariant cone.
    pub inside: usize,
    pub disagreements: usize,
    pub round_disagreements: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact: Option<bool>,
}

#[derive(Debug, Clone)]
pub struct DescentReport {
    pub group_order: usize,
    /// Invariant lattice basis, as columns in ambient coordinates.
    pub basis: Matrix,
    pub orbits: Vec<FactorOrbit>,
    pub j1: Vec<usize>,
    pub j2: Vec<usize>,
    pub jd: Vec<usize>,
    pub root_orbits: Vec<RootOrbit>,
    /// Root-orbit indices kept for the descended cone.
    pub i_star: Vec<usize>,
    /// ε for each kept orbit, in invariant coordinates.
    pub epsilons: Vec<Vec<Rational>>,
    /// The corrected invariant ambient cone clipped by the descended roots.
    pub descended: ClippedCone,
    pub validation: ClipValidation,
    pub taus: Vec<Matrix>,
    /// Lifts, with words in ambient root indices.
    pub lifts: Vec<CentralizerLift>,
    pub equality: Equality,
    /// Per two-dimensional orbit: the invariant cone rules its clipped part.
    pub ruled: Vec<(usize, bool)>,
    pub checks: Vec<Check>,
}

impl DescentReport {
    pub fn ok(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| !c.passed).collect()
    }

    pub fn to_json(&self) -> Value {
        let cols: Vec<Vec<String>> = self.basis.to_cols().iter().map(|c| strs(c)).collect();
        json!({
            "group_order": self.group_order,
            "invariant_basis": cols,
            "orbit_table": self.orbits,
            "J1": self.j1,
            "J2": self.j2,
            "Jd": self.jd,
            "root_orbits": self.root_orbits,
            "I_star": self.i_star,
            "epsilons": self.epsilons.iter().map(|e| strs(e)).collect::<Vec<_>>(),
            "B": self.descended.ambient.to_json(),
            "descended_roots": self.descended.roots.iter().map(Root::to_json).collect::<Vec<_>>(),
            "descended_witness": strs(&self.descended.witness),
            "validation": self.validation,
            "taus": self.taus.iter().map(Matrix::to_strings).collect::<Vec<_>>(),
            "lifts": self.lifts,
            "equality": self.equality,
            "simplicial_ruled": self.ruled.iter().map(|(o, r)| json!({"orbit": o, "ruled": r})).collect::<Vec<_>>(),
            "checks": self.checks,
            "ok": self.ok(),
        })
    }
}

// Roots must be permuted by every generator; returns the root orbits.
fn root_orbits_of(cone: &ClippedCone, action: &FiniteAction) -> Result<Vec<Vec<usize>>> {
    let m = cone.roots.len();
    let mut perms = Vec::new();
    for (gi, g) in action.generators().iter().enumerate() {
        let p: Vec<usize> = cone
            .roots
            .iter()
            .map(|r| {
                let ge = g.mul_vec(&r.e);
                cone.roots
                    .iter()
                    .position(|t| t.e == ge)
                    .ok_or_else(|| Error::PreconditionFailure(format!("roots not permuted by generator {gi}")))
            })
            .collect::<Result<_>>()?;
        perms.push(p);
    }
    let mut seen = vec![false; m];
    let mut out = Vec::new();
    for i in 0..m {
        if seen[i] {
            continue;
        }
        seen[i] = true;
        let mut orb = vec![i];
        let mut k = 0;
        while k < orb.len() {
            for p in &perms {
                let t = p[orb[k]];
                if !seen[t] {
                    seen[t] = true;
                    orb.push(t);
                }
            }
            k += 1;
        }
        orb.sort_unstable();
        out.push(orb);
    }
    Ok(out)
}

fn check_preconditions(cone: &ClippedCone, action: &FiniteAction) -> Result<Vec<Vec<usize>>> {
    let sym = &cone.ambient;
    let n = sym.rank();
    if action.dim() != n {
        return Err(Error::DimensionMismatch { expected: n, got: action.dim() });
    }
    if let Err(Error::NotIsometry(i)) = action.check_isometry(&sym.lattice) {
        return Err(Error::PreconditionFailure(format!("generator {i} does not preserve the form")));
    }
    let orbits = factor_orbits(sym, action).ok_or_else(|| Error::PreconditionFailure("group does not permute the factors".into()))?;
    for g in action.generators() {
        for (k, f) in sym.factors.iter().enumerate() {
            let t = factor_image(sym, g, k).ok_or_else(|| Error::PreconditionFailure("group does not permute the factors".into()))?;
            let ft = &sym.factors[t];
            if f.kind.name() != ft.kind.name() {
                return Err(Error::PreconditionFailure(format!("factor {k} is sent to factor {t} of another kind")));
            }
            match &f.kind {
                FactorKind::Halfline => {
                    if !g.get(ft.coords[0], f.coords[0]).is_positive() {
                        return Err(Error::PreconditionFailure(format!("halfline {k} is reversed")));
                    }
                }
                FactorKind::Lorentz { h } => {
                    let FactorKind::Lorentz { h: ht } = &ft.kind else { unreachable!() };
                    let gh = g.mul_vec(&embed(&f.coords, h, n));
                    if !sym.lattice.q(&gh, &embed(&ft.coords, ht, n)).is_positive() {
                        return Err(Error::PreconditionFailure(format!("Lorentz component {k} is sent to the opposite cone")));
                    }
                }
                FactorKind::Psd { m } => {
                    if t != k {
                        return Err(Error::PsdOrbitUnsupported(k));
                    }
                    let unit = embed(&f.coords, &psd_vector(&Matrix::identity(*m)), n);
                    if !sym.factor_member(k, &sym.restrict(k, &g.mul_vec(&unit)), Mode::Interior)? {
                        return Err(Error::PreconditionFailure(format!("PSD component {k} not preserved")));
                    }
                }
                FactorKind::Plane { .. } | FactorKind::PsdSection { .. } => {
                    return Err(Error::Unsupported(format!("descent through a {} factor", f.kind.name())));
                }
            }
        }
    }
    for g in action.elements() {
        if !cone.member(&g.mul_vec(&cone.witness), Mode::Interior)? {
            return Err(Error::PreconditionFailure("cone not preserved".into()));
        }
    }
    Ok(orbits)
}

// Oriented isotropic rays of a binary form of signature (1,1).
fn isotropic_rays(gram: &Matrix, hp: &[Rational]) -> Result<[Vec<QuadElem>; 2]> {
    let (a, b, c) = (gram.get(0, 0).clone(), gram.get(0, 1).clone(), gram.get(1, 1).clone());
    let disc = b.clone() * b.clone() - a.clone() * c.clone();
    if !disc.is_positive() {
        return Err(Error::SignatureAnomaly { dim: 2, signature: signature(gram) });
    }
    let (s, d) = sqrt_rational(&disc);
    let root = |sign: i64| -> QuadElem {
        let t = s.clone() * Rational::from_integer(sign.into());
        if d == 1 {
            QuadElem::rational(-b.clone() + t)
        } else {
            QuadElem::new(-b.clone(), t, d)
        }
    };
    let q = |x: Rational| QuadElem::rational(x);
    let mut rays: [Vec<QuadElem>; 2] = if !a.is_zero() {
        [vec![root(1), q(a.clone())], vec![root(-1), q(a.clone())]]
    } else {
        [vec![q(Rational::from_integer(1.into())), q(<Rational as Field>::zero())], vec![q(-c.clone()), q(b.clone() * Rational::from_integer(2.into()))]]
    };
    let gq = gram.map(|x| QuadElem::rational(x.clone()));
    let hq: Vec<QuadElem> = hp.iter().map(|x| QuadElem::rational(x.clone())).collect();
    for r in rays.iter_mut() {
        if dot(r, &gq.mul_vec(&hq)).is_negative() {
            *r = vneg(r);
        }
    }
    Ok(rays)
}

// Clips the sector between two rays by `phi ≥ 0`.
fn clip_sector(rays: &mut [Vec<QuadElem>; 2], phi: &[Rational]) -> Result<()> {
    let pq: Vec<QuadElem> = phi.iter().map(|x| QuadElem::rational(x.clone())).collect();
    let v0 = dot(&pq, &rays[0]);
    let v1 = dot(&pq, &rays[1]);
    if !v0.is_negative() && !v1.is_negative() {
        return Ok(());
    }
    if !v0.is_positive() && !v1.is_positive() {
        return Err(Error::DegenerateB(format!("halfplane ({}, {}) ≥ 0 leaves at most a ray", phi[0], phi[1])));
    }
    let mut k = vec![QuadElem::rational(-phi[1].clone()), QuadElem::rational(phi[0].clone())];
    let (a, b) = plane_coefficients(rays, &[-phi[1].clone(), phi[0].clone()]);
    if a.is_negative() || b.is_negative() {
        k = vneg(&k);
    }
    if v0.is_negative() {
        rays[0] = k;
    } else {
        rays[1] = k;
    }
    Ok(())
}

fn sample_invariant(base: &[Rational], seed: u64, index: u64) -> Vec<Rational> {
    let mut r = rng(seed, index);
    let (scale, noise, den) = match r.gen_range(0..4) {
        0 => (1, 1, 4),
        1 => (r.gen_range(1..=3), 6, 3),
        2 => (r.gen_range(0..=2), 20, 2),
        _ => (0, 10, 5),
    };
    let t = Rational::from_integer(scale.into());
    base.iter().map(|b| b * &t + small_rational(&mut r, noise, den)).collect()
}

/// Runs the whole descent pipeline. Structural hypotheses that fail raise
/// errors; numerical verdicts land in the report's checks.
pub fn descend(cone: &ClippedCone, action: &FiniteAction, opts: &DescentOptions) -> Result<DescentReport> {
    let forbits = check_preconditions(cone, action)?;
    let sym = &cone.ambient;
    let lat = &sym.lattice;
    let n = sym.rank();
    let reynolds = action.reynolds();
    let pc = reynolds.mul_vec(&cone.witness);

    // invariant basis, block by factor orbit
    let mut cols: Vec<Vec<Rational>> = Vec::new();
    let mut orbits: Vec<FactorOrbit> = Vec::new();
    let mut htypes = Vec::new();
    for orb in &forbits {
        let kind = sym.factors[orb[0]].kind.name();
        let (mut basis, ht) = if kind == "lorentz" {
            let t = invariant_hyperbolic_type(sym, orb, action)?;
            (t.basis.clone(), Some(t.kind))
        } else {
            let mut coords: Vec<usize> = orb.iter().flat_map(|&k| sym.factors[k].coords.iter().copied()).collect();
            coords.sort_unstable();
            (invariant_basis_on(action, &coords, n), None)
        };
        if basis.cols() == 1 && kind != "psd" {
            let b = basis.col(0);
            if lat.q(&b, &pc).is_negative() {
                basis = basis.scale(&Rational::from_integer((-1).into()));
            }
        }
        let start = cols.len();
        cols.extend(basis.to_cols());
        let sig = signature(&lat.restrict(&basis));
        orbits.push(FactorOrbit {
            factors: orb.clone(),
            kind,
            d: basis.cols(),
            hyperbolic_type: ht,
            signature: sig,
            columns: (start..cols.len()).collect(),
            descended_factor: orbits.len(),
        });
        htypes.push(ht);
    }
    let k = cols.len();
    let basis = Matrix::from_cols(n, &cols);
    let in_basis = |x: &[Rational]| -> Result<Vec<Rational>> {
        basis.solve(x).ok_or_else(|| Error::PreconditionFailure("vector outside the invariant span".into()))
    };
    let gram_b = lat.restrict(&basis);
    let lat_b = QuadLattice::new(gram_b.clone())?;
    let pc_y = in_basis(&pc)?;

    let lorentz_d = |o: usize, pred: &dyn Fn(usize) -> bool| orbits[o].kind == "lorentz" && pred(orbits[o].d);
    let j1: Vec<usize> = (0..orbits.len()).filter(|&o| lorentz_d(o, &|d| d == 1)).collect();
    let j2: Vec<usize> = (0..orbits.len()).filter(|&o| lorentz_d(o, &|d| d == 2)).collect();
    let jd: Vec<usize> = (0..orbits.len()).filter(|&o| lorentz_d(o, &|d| d >= 3)).collect();
    let orbit_of_factor = |f: usize| forbits.iter().position(|o| o.contains(&f)).expect("factor in an orbit");

    // root orbits and ε
    let rorbits = root_orbits_of(cone, action)?;
    let mut root_orbits = Vec::new();
    for ro in &rorbits {
        let rep = &cone.roots[ro[0]];
        let eps = ro.iter().fold(zeros(n), |acc, &i| vadd(&acc, &cone.roots[i].e));
        let qe = lat.norm(&eps);
        let carrier = orbit_of_factor(rep.factor);
        let d = orbits[carrier].d;
        let (kept, reason) = if d < 3 {
            (false, format!("carrier invariant dimension {d}"))
        } else if !qe.is_negative() {
            (false, "q(eps) >= 0".to_string())
        } else {
            (true, "carrier dimension at least 3 and q(eps) < 0".to_string())
        };
        root_orbits.push(RootOrbit {
            roots: ro.clone(),
            carrier,
            q_e_epsilon: lat.q(&rep.e, &eps).to_string(),
            q_epsilon: qe.to_string(),
            s: rep.s.to_string(),
            epsilon: eps,
            kept,
            reason,
        });
    }
    let i_star: Vec<usize> = (0..root_orbits.len()).filter(|&i| root_orbits[i].kept).collect();

    // corrected ambient cone on the invariant lattice
    let mut bfactors = Vec::new();
    let mut ruled = Vec::new();
    for (o, fo) in orbits.iter().enumerate() {
        let c = fo.columns.clone();
        let factor = match (fo.kind, fo.d) {
            ("halfline", _) | ("lorentz", 1) => Factor { kind: FactorKind::Halfline, coords: c },
            ("psd", _) => {
                let f = fo.factors[0];
                let FactorKind::Psd { m } = sym.factors[f].kind else { unreachable!() };
                let emb = basis.select(&sym.factors[f].coords, &c);
                if emb.is_identity() && c.len() == psd_dim(m) {
                    Factor { kind: FactorKind::Psd { m }, coords: c }
                } else {
                    Factor { kind: FactorKind::PsdSection { m, embed: emb }, coords: c }
                }
            }
            ("lorentz", 2) => {
                let g2 = gram_b.select(&c, &c);
                let hp: Vec<Rational> = c.iter().map(|&j| pc_y[j].clone()).collect();
                let sigma = isotropic_rays(&g2, &hp)?;
                let mut rays = sigma.clone();
                for ro in root_orbits.iter().filter(|r| r.carrier == o) {
                    let phi: Vec<Rational> = c.iter().map(|&j| lat.q(&basis.col(j), &ro.epsilon)).collect();
                    clip_sector(&mut rays, &phi)?;
                }
                let s_cone = PolyCone::from_rays(2, &sigma)?;
                let x_cone = PolyCone::from_rays(2, &rays)?;
                ruled.push((o, rules(&s_cone, &x_cone)?));
                Factor { kind: FactorKind::Plane { rays }, coords: c }
            }
            ("lorentz", _) => {
                let hsum = fo.factors.iter().fold(zeros(n), |acc, &f| {
                    let FactorKind::Lorentz { h } = &sym.factors[f].kind else { unreachable!() };
                    vadd(&acc, &embed(&sym.factors[f].coords, h, n))
                });
                let hy = in_basis(&reynolds.mul_vec(&hsum))?;
                Factor { kind: FactorKind::Lorentz { h: c.iter().map(|&j| hy[j].clone()).collect() }, coords: c }
            }
            (other, _) => return Err(Error::Unsupported(format!("descent through a {other} factor"))),
        };
        bfactors.push(factor);
    }
    let bsym = SymCone::new(lat_b.clone(), bfactors);

    // descended roots
    let mut epsilons = Vec::new();
    for &i in &i_star {
        epsilons.push(in_basis(&root_orbits[i].epsilon)?);
    }
    let (descended, canon) = ClippedCone::new(bsym, &epsilons, pc_y.clone())?;
    let validation = validate_clipped(&descended, canon);

    let mut checks = Vec::new();
    let two = Rational::from_integer(2.into());
    for &i in &i_star {
        let ro = &root_orbits[i];
        let rep = &cone.roots[ro.roots[0]];
        let v = lat.q(&rep.e, &ro.epsilon);
        let ok = v == -rep.s.clone() || v == -rep.s.clone() / two.clone();
        checks.push(Check::new("q(e, eps) in {-s, -s/2}", ok, Some(i), format!("q(e, eps) = {v}, s = {}", rep.s)));
    }
    checks.push(Check::new("descended ambient structure", validation.ambient.ok(), None, ""));
    checks.push(Check::new("descended witness interior", validation.witness_interior, None, ""));
    checks.push(Check::new(
        "assumption (i) on the invariant lattice",
        validation.canonicalization.rejected.is_empty(),
        None,
        validation.canonicalization.rejected.iter().map(|r| r.reason.clone()).collect::<Vec<_>>().join("; "),
    ));
    checks.push(Check::new(
        "assumption (ii) on the invariant lattice",
        validation.integrality.iter().all(|x| x.integral),
        None,
        "",
    ));
    checks.push(Check::new(
        "assumption (iii) on the invariant lattice",
        validation.pairwise.ok(),
        None,
        format!("{} violating pairs", validation.pairwise.violations().len()),
    ));

    // reflections on V^G and their lifts
    let mut taus = Vec::new();
    let mut lifts = Vec::new();
    for (t, &i) in i_star.iter().enumerate() {
        let ro = &root_orbits[i];
        let rep = &cone.roots[ro.roots[0]];
        let qee = lat.q(&rep.e, &ro.epsilon);
        let mut tcols = Vec::with_capacity(k);
        for j in 0..k {
            let b = basis.col(j);
            let f = two.clone() * lat.q(&rep.e, &b) / qee.clone();
            tcols.push(in_basis(&vadd(&b, &vscale(&ro.epsilon, &-f)))?);
        }
        let tau = Matrix::from_cols(k, &tcols);
        let ey = &epsilons[t];
        checks.push(Check::new("tau integral", tau.is_integral(), Some(i), ""));
        checks.push(Check::new("tau involution", tau.mul(&tau).is_identity(), Some(i), ""));
        checks.push(Check::new("tau isometry", lat_b.is_isometry(&tau), Some(i), ""));
        checks.push(Check::new("tau keeps the witness side", lat_b.q(ey, &pc_y).is_positive(), Some(i), ""));
        checks.push(Check::new("tau is the reflection in eps", tau == reflection_in(ey, &lat_b), Some(i), ""));

        let orbit_roots: Vec<Root> = ro.roots.iter().map(|&r| cone.roots[r].clone()).collect();
        let mut lift = centralizer_lift(&orbit_roots, action, lat)?;
        lift.word = lift.word.iter().map(|&p| ro.roots[p]).collect();
        lift.blocks = lift.blocks.iter().map(|b| b.iter().map(|&p| ro.roots[p]).collect()).collect();
        checks.push(Check::new("lift blocks commute", lift.blocks_commute, Some(i), ""));
        checks.push(Check::new("lift commutes with G", lift.commutes_with_group, Some(i), ""));
        checks.push(Check::new("lift restricts to tau", lift.matrix.mul(&basis) == basis.mul(&tau), Some(i), ""));
        taus.push(tau);
        lifts.push(lift);
    }

    let equality = compare(cone, &descended, &basis, &orbits, &pc_y, opts)?;
    checks.push(Check::new(
        &format!("invariant cone equals descended cone ({})", equality.method),
        equality.disagreements == 0 && equality.exact != Some(false),
        None,
        format!("{} of {} samples disagree", equality.disagreements, equality.samples),
    ));
    checks.push(Check::new(
        "round parts agree",
        equality.round_disagreements == 0,
        None,
        format!("{} of {} samples disagree", equality.round_disagreements, equality.samples),
    ));

    Ok(DescentReport {
        group_order: action.order(),
        basis,
        orbits,
        j1,
        j2,
        jd,
        root_orbits,
        i_star,
        epsilons,
        descended,
        validation,
        taus,
        lifts,
        equality,
        ruled,
        checks,
    })
}

// Membership of C ∩ V^G against the descended cone, on samples; exact
// facet comparison when everything is polyhedral.
fn compare(
    cone: &ClippedCone,
    desc: &ClippedCone,
    basis: &Matrix,
    orbits: &[FactorOrbit],
    base: &[Rational],
    opts: &DescentOptions,
) -> Result<Equality> {
    let sym = &cone.ambient;
    let round: Vec<usize> = orbits.iter().filter(|o| o.kind == "psd" || (o.kind == "lorentz" && o.d >= 3)).map(|o| o.descended_factor).collect();
    let round_ambient: Vec<usize> = orbits.iter().filter(|o| round.contains(&o.descended_factor)).flat_map(|o| o.factors.clone()).collect();
    let results: Vec<(bool, bool, bool)> = (0..opts.samples)
        .into_par_iter()
        .map(|i| -> Result<(bool, bool, bool)> {
            let y = sample_invariant(base, opts.seed, i as u64);
            let x = basis.mul_vec(&y);
            let a = cone.member(&x, Mode::Interior)?;
            let b = desc.member(&y, Mode::Interior)?;
            let mut ra = true;
            for &f in &round_ambient {
                ra &= sym.factor_member(f, &sym.restrict(f, &x), Mode::Interior)?;
            }
            let mut rb = true;
            for &f in &round {
                rb &= desc.ambient.factor_member(f, &desc.ambient.restrict(f, &y), Mode::Interior)?;
            }
            Ok((a, a != b, ra != rb))
        })
        .collect::<Result<_>>()?;
    let exact = if sym.factors.iter().all(|f| f.kind == FactorKind::Halfline) {
        let k = basis.cols();
        let mut left: Vec<Vec<Rational>> = basis.to_rows();
        left.extend(cone.roots.iter().map(|r| basis.transpose().mul_vec(&sym.lattice.gram().mul_vec(&r.e))));
        let mut right: Vec<Vec<Rational>> = (0..k).map(|j| (0..k).map(|i| Rational::from_integer(((i == j) as i64).into())).collect()).collect();
        right.extend(desc.roots.iter().map(|r| desc.lattice().gram().mul_vec(&r.e)));
        Some(same_cone(&PolyCone::from_facets(k, &left)?, &PolyCone::from_facets(k, &right)?))
    } else {
        None
    };
    Ok(Equality {
        method: if exact.is_some() { "exact" } else { "sampled" },
        samples: opts.samples,
        inside: results.iter().filter(|r| r.0).count(),
        disagreements: results.iter().filter(|r| r.1).count(),
        round_disagreements: results.iter().filter(|r| r.2).count(),
        exact,
    })
}
