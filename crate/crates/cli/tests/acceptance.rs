//! Acceptance suite: one PASS/FAIL line per criterion.

use std::path::PathBuf;
use std::process::Command;
use std::time::{Duration, Instant};

use clipcone::chamber::{dirichlet_domain, reduce, root_reflections, satisfies_roots, translate_disjointness, word_closure};
use clipcone::clipping::{check_integrality, coxeter_fuzz, reflection_identities, reflection_in, validate_clipped, AngleClass};
use clipcone::corpus;
use clipcone::descent::{descend, DescentOptions};
use clipcone::jordan::{check_suite, JordanAlgebra};
use clipcone::lattice::{signature, FiniteAction};
use clipcone::linalg::Matrix;
use clipcone::polycone::Mode;
use clipcone::sample::{cone_point, rational_vec, rng, DEFAULT_SEED};
use clipcone::scalar::{int, Rational};
use clipcone::symcone::{invariant_hyperbolic_type, HyperbolicType};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn c1_klt() -> (Outcome, Duration) {
    let inst = corpus::load("klt_k3").unwrap();
    let root = &inst.cone.roots[0];
    let lat = inst.cone.lattice();
    // best of a few runs of the exact check, to keep scheduler noise out
    let mut best = Duration::MAX;
    let mut verdict = None;
    for _ in 0..5 {
        let t = Instant::now();
        let v = check_integrality(root, lat);
        best = best.min(t.elapsed());
        verdict = Some(v);
    }
    let v = verdict.unwrap();
    let failed_ii = !validate_clipped(&inst.cone, inst.canon.clone()).ok();
    let coeff = v.witness.as_ref().map(|w| w.1.clone()).unwrap_or_default();
    let pass = !v.integral && coeff == "4/3" && failed_ii && best < Duration::from_millis(1);
    (outcome(pass, format!("coefficient {coeff}, check took {best:?}")), best)
}

fn c2_coxeter() -> Outcome {
    let f = coxeter_fuzz(100_000, DEFAULT_SEED);
    outcome(
        f.passing >= 100_000 && f.exceptions.is_empty(),
        format!(
            "{} passing of {} tried in {} lattices, classes [0,1/4,1/2,3/4,1,>1] = {:?}, {} exceptions",
            f.passing,
            f.tried,
            f.lattices,
            f.histogram,
            f.exceptions.len()
        ),
    )
}

fn c3_thirteen_gon() -> Outcome {
    let inst = corpus::thirteen_gon();
    let v = validate_clipped(&inst.cone, inst.canon.clone());
    let bad = v.pairwise.pairs.iter().filter(|p| p.class == AngleClass::Violation).count();
    outcome(inst.cone.roots.len() == 13 && !v.ok() && bad >= 1, format!("13 roots, {bad} pairs outside the allowed set"))
}

fn c4_reflections() -> Outcome {
    let mut roots = 0;
    let mut failures = Vec::new();
    for inst in corpus::all() {
        let lat = inst.cone.lattice();
        for r in &inst.cone.roots {
            roots += 1;
            let s = reflection_in(&r.e, lat);
            let n = lat.rank();
            let exact = s.mul(&s) == Matrix::identity(n)
                && s.transpose().mul(lat.gram()).mul(&s) == *lat.gram()
                && s.mul_vec(&r.e) == r.e.iter().map(|x| -x.clone()).collect::<Vec<_>>()
                && s.is_integral() == check_integrality(r, lat).integral
                && reflection_identities(r, lat).ok();
            if !exact {
                failures.push(format!("{} {:?}", inst.name, r.e));
            }
        }
    }
    outcome(failures.is_empty(), format!("{roots} roots, failures {failures:?}"))
}

fn c5_reduction() -> Outcome {
    let mut points = 0;
    let mut failures = Vec::new();
    for inst in corpus::valid() {
        let c = &inst.cone;
        let lat = c.lattice();
        let roots: Vec<Vec<Rational>> = c.roots.iter().map(|r| r.e.clone()).collect();
        for i in 0..1000u64 {
            let x = cone_point(&c.ambient, &c.witness, DEFAULT_SEED, i);
            points += 1;
            let ok = match reduce(&x, c, 100_000) {
                Ok(t) => {
                    satisfies_roots(lat, &roots, &t.end)
                        && t.word.len() <= t.crossings_initial
                        && t.crossings.windows(2).all(|w| w[1] < w[0])
                        && t.certified
                }
                Err(_) => false,
            };
            if !ok {
                failures.push(format!("{} point {i}", inst.name));
            }
        }
    }
    outcome(failures.is_empty(), format!("{points} points, failures {:?}", &failures[..failures.len().min(5)]))
}

fn c6_descent() -> Outcome {
    let mut runs: Vec<(String, clipcone::instance::Instance, FiniteAction)> = Vec::new();
    for inst in corpus::valid() {
        if !inst.generators.is_empty() {
            let a = inst.action.clone();
            runs.push((inst.name.clone(), inst, a));
        }
    }
    let u = corpus::load("u_minus2").unwrap();
    runs.push(("u_minus2 (identity)".into(), u.clone(), FiniteAction::trivial(u.rank())));
    let mut failures = Vec::new();
    let mut has = (false, false, false);
    for (name, inst, action) in &runs {
        let group = action.order();
        let r = match descend(&inst.cone, action, &DescentOptions::default()) {
            Ok(r) => r,
            Err(e) => {
                failures.push(format!("{name}: {e}"));
                continue;
            }
        };
        if inst.rank() > 8 || group > 16 {
            failures.push(format!("{name}: outside rank/order bounds"));
        }
        has.0 |= group == 1;
        has.1 |= name.contains("swap");
        has.2 |= name.contains("sign_flip");
        let lat = inst.cone.lattice();
        // (a) recomputed in ambient coordinates
        let a = r.i_star.iter().all(|&o| {
            let orbit = &r.root_orbits[o];
            orbit.roots.iter().all(|&j| {
                let root = &inst.cone.roots[j];
                let p = lat.q(&root.e, &orbit.epsilon);
                p == -root.s.clone() || p == -root.s.clone() / int(2)
            })
        });
        // (b)
        let b = r.validation.ok();
        // (c)
        let glat = r.descended.lattice();
        let m = glat.rank();
        let c = r.taus.iter().all(|t| t.is_integral() && t.mul(t) == Matrix::identity(m) && glat.is_isometry(t));
        // (d) the lift restricted to the invariant lattice is tau
        let d = r.lifts.iter().zip(&r.taus).all(|(l, t)| {
            action.elements().iter().all(|g| l.matrix.mul(g) == g.mul(&l.matrix)) && l.matrix.mul(&r.basis) == r.basis.mul(t)
        });
        // (e)
        let e = r.equality.samples >= 1000 && r.equality.disagreements == 0;
        if !(a && b && c && d && e && r.ok()) {
            failures.push(format!("{name}: a={a} b={b} c={c} d={d} e={e} checks={:?}", r.failures()));
        }
    }
    let pass = failures.is_empty() && runs.len() >= 10 && has.0 && has.1 && has.2;
    outcome(pass, format!("{} instances, failures {failures:?}", runs.len()))
}

fn c7_jordan() -> Outcome {
    const PAIRS: usize = 10_000;
    let mut algebras: Vec<(String, JordanAlgebra)> = vec![
        ("R".into(), JordanAlgebra::real()),
        ("Sym2".into(), JordanAlgebra::sym_matrices(2)),
        ("Sym3".into(), JordanAlgebra::sym_matrices(3)),
    ];
    let mut invariant = 0;
    for inst in corpus::valid() {
        let Ok(alg) = JordanAlgebra::from_symcone(&inst.cone.ambient) else { continue };
        if !inst.generators.is_empty() && inst.action.elements().iter().all(|g| alg.check_automorphism(g).is_ok()) {
            if let Ok((sub, _)) = alg.invariant_subalgebra(&inst.action) {
                invariant += 1;
                algebras.push((format!("{}^G", inst.name), sub));
            }
        }
        algebras.push((inst.name.clone(), alg));
    }
    let mut failures = Vec::new();
    for (k, (name, alg)) in algebras.iter().enumerate() {
        let suite = check_suite(alg, PAIRS, DEFAULT_SEED + k as u64);
        if !suite.ok() {
            failures.push(format!("{name}: {suite:?}"));
        }
        let n = alg.dim();
        let mut r = rng(DEFAULT_SEED, 7000 + k as u64);
        for _ in 0..3 {
            let b = rational_vec(&mut r, n, 4, 3);
            if !alg.is_invertible(&b) {
                continue;
            }
            let q = alg.quadratic_rep(&b);
            if q.mul_vec(alg.unit()) != alg.jmul(&b, &b).unwrap() {
                failures.push(format!("{name}: Q(b)e != b∘b"));
            }
            for _ in 0..100 {
                // y∘y plus a little unit is interior
                let y = rational_vec(&mut r, n, 4, 3);
                let mut x = alg.jmul(&y, &y).unwrap();
                for (xi, ui) in x.iter_mut().zip(alg.unit()) {
                    *xi += ui.clone() / int(10);
                }
                if !alg.is_interior(&x) || !alg.is_interior(&q.mul_vec(&x)) {
                    failures.push(format!("{name}: Q(b) leaves the cone"));
                    break;
                }
            }
        }
    }
    outcome(
        failures.is_empty() && invariant > 0,
        format!("{} algebras ({invariant} invariant subalgebras), {PAIRS} pairs each, failures {failures:?}", algebras.len()),
    )
}

fn c8_trichotomy() -> Outcome {
    let mut counts = [0usize; 3];
    let mut failures = Vec::new();
    for i in 0..100 {
        let (sym, act) = corpus::random_lorentz_action(DEFAULT_SEED, i).unwrap();
        match invariant_hyperbolic_type(&sym, &[0], &act) {
            Ok(t) => {
                let sig = signature(&sym.lattice.restrict(&t.basis));
                let expected = match t.d {
                    1 => HyperbolicType::Halfline,
                    2 => HyperbolicType::TwoHalflines,
                    _ => HyperbolicType::Hyperbolic,
                };
                let cert = sig == t.signature && sig.pos == 1 && sig.neg == t.d - 1 && sig.zero == 0;
                if t.kind != expected || !cert {
                    failures.push(format!("pair {i}: {:?} d={} {:?}", t.kind, t.d, sig));
                }
                counts[t.d.min(3) - 1] += 1;
            }
            Err(e) => failures.push(format!("pair {i}: {e}")),
        }
    }
    outcome(failures.is_empty(), format!("Halfline/TwoHalflines/Hyperbolic = {counts:?}, failures {failures:?}"))
}

fn c9_dirichlet() -> Outcome {
    const SAMPLES: usize = 10_000;
    let mut failures = Vec::new();
    let mut lines = Vec::new();
    for inst in corpus::valid() {
        let c = &inst.cone;
        let n = c.rank();
        let roots: Vec<Vec<Rational>> = c.roots.iter().map(|r| r.e.clone()).collect();
        let els = word_closure(n, &root_reflections(c), 4);
        let d = match dirichlet_domain(&c.witness, &els, &c.ambient, &roots) {
            Ok(d) => d,
            Err(e) => {
                failures.push(format!("{}: {e}", inst.name));
                continue;
            }
        };
        let mut inside = 0;
        for i in 0..SAMPLES as u64 {
            let x = cone_point(&c.ambient, &c.witness, DEFAULT_SEED ^ 0x91, i);
            if d.poly.contains(&x, Mode::Interior) {
                inside += 1;
                if !satisfies_roots(c.lattice(), &roots, &x) {
                    failures.push(format!("{}: interior point of the domain outside the chamber", inst.name));
                    break;
                }
            }
        }
        match translate_disjointness(&d, &els, &c.ambient, SAMPLES, DEFAULT_SEED) {
            Ok(rep) if rep.max_count == 1 => {}
            Ok(rep) => failures.push(format!("{}: multiplicity {}", inst.name, rep.max_count)),
            Err(e) => failures.push(format!("{}: {e}", inst.name)),
        }
        lines.push(format!("{}:{}el/{}in", inst.name, els.len(), inside));
    }
    outcome(failures.is_empty(), format!("{}; failures {failures:?}", lines.join(" ")))
}

fn c10_determinism() -> Outcome {
    let bin = env!("CARGO_BIN_EXE_clipcone");
    let corpus_dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/corpus");
    let mut failures = Vec::new();
    let mut runs = 0;
    for (cmd, name) in [("validate", "u_minus2"), ("validate", "klt_k3"), ("validate", "swap4"), ("descend", "swap4"), ("descend", "plane_sqrt2"), ("descend", "dihedral_flip")] {
        let path = corpus_dir.join(format!("{name}.json"));
        let outs: Vec<Vec<u8>> = ["1", "1", "3"]
            .iter()
            .map(|threads| {
                runs += 1;
                Command::new(bin).args([cmd, path.to_str().unwrap(), "--seed", "17"]).env("CLIPCONE_THREADS", threads).output().unwrap().stdout
            })
            .collect();
        if outs.iter().any(|o| o.is_empty() || *o != outs[0]) {
            failures.push(format!("{cmd} {name}"));
        }
    }
    outcome(failures.is_empty(), format!("{runs} runs, differing {failures:?}"))
}

fn main() {
    let budgets: [(&str, Option<Duration>); 10] = [
        ("klt-K3 regression", None),
        ("Coxeter angle law", Some(Duration::from_secs(10))),
        ("13-gon impossibility", Some(Duration::from_secs(1))),
        ("reflection algebra", None),
        ("chamber reduction", Some(Duration::from_secs(30))),
        ("descent suite", Some(Duration::from_secs(60))),
        ("Jordan layer", Some(Duration::from_secs(30))),
        ("hyperbolic invariant trichotomy", Some(Duration::from_secs(10))),
        ("Dirichlet truncation", Some(Duration::from_secs(60))),
        ("determinism", None),
    ];
    let mut all = true;
    for (k, (name, budget)) in budgets.iter().enumerate() {
        let t = Instant::now();
        let o = match k {
            0 => c1_klt().0,
            1 => c2_coxeter(),
            2 => c3_thirteen_gon(),
            3 => c4_reflections(),
            4 => c5_reduction(),
            5 => c6_descent(),
            6 => c7_jordan(),
            7 => c8_trichotomy(),
            8 => c9_dirichlet(),
            _ => c10_determinism(),
        };
        let el = t.elapsed();
        let in_time = budget.is_none_or(|b| el <= b);
        let pass = o.pass && in_time;
        all &= pass;
        let limit = budget.map(|b| format!(" (limit {b:?})")).unwrap_or_default();
        println!("acceptance {:>2} {} {name}: {:.2?}{limit}; {}", k + 1, if pass { "PASS" } else { "FAIL" }, el, o.detail);
    }
    if !all {
        std::process::exit(1);
    }
}
