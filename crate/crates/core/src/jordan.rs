//! Formally real Jordan algebras for the implemented cone factors.

use num_bigint::BigInt;
use num_integer::Integer;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::{invariant_sublattice, is_positive_definite, FiniteAction};
use crate::linalg::{dot, vsub, Matrix};
use crate::sample::{rational_vec, rng};
use crate::scalar::{rationalize, to_f64, Field, Rational};
use crate::symcone::{psd_matrix, psd_pairs, psd_vector, FactorKind, SymCone};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum AlgebraKind {
    SpinFactor,
    SymMatrices,
    Product,
}

type Sparse = Vec<(usize, Rational)>;

#[derive(Debug, Clone)]
pub struct JordanAlgebra {
    n: usize,
    unit: Vec<Rational>,
    // table[i][j] = e_i ∘ e_j, sparse
    table: Vec<Vec<Sparse>>,
    table_f64: Vec<Vec<Vec<(usize, f64)>>>,
    // table scaled by a common denominator, for integer accumulation
    table_int: Vec<Vec<Vec<(usize, BigInt)>>>,
    table_den: BigInt,
    kind: AlgebraKind,
    // quadratic norm of a spin factor, positive at the unit
    spin_form: Option<Matrix>,
    sym_size: Option<usize>,
}

fn scaled(v: &[Rational]) -> (Vec<BigInt>, BigInt) {
    let l = v.iter().fold(BigInt::from(1), |acc, x| acc.lcm(x.denom()));
    (v.iter().map(|x| x.numer() * (&l / x.denom())).collect(), l)
}

fn unit_vec(n: usize, i: usize) -> Vec<Rational> {
    (0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }).collect()
}

impl JordanAlgebra {
    fn build(n: usize, unit: Vec<Rational>, kind: AlgebraKind, f: impl Fn(usize, usize) -> Vec<Rational>) -> Self {
        let mut table = vec![vec![Vec::new(); n]; n];
        for (i, row) in table.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell = f(i, j).into_iter().enumerate().filter(|(_, x)| !x.is_zero()).collect();
            }
        }
        let table_f64 = table
            .iter()
            .map(|row| row.iter().map(|c| c.iter().map(|(k, x)| (*k, to_f64(x))).collect()).collect())
            .collect();
        let table_den = table.iter().flatten().flatten().fold(BigInt::from(1), |acc, (_, x)| acc.lcm(x.denom()));
        let table_int = table
            .iter()
            .map(|row| row.iter().map(|c| c.iter().map(|(k, x)| (*k, (x * Rational::from_integer(table_den.clone())).to_integer())).collect()).collect())
            .collect();
        JordanAlgebra { n, unit, table, table_f64, table_int, table_den, kind, spin_form: None, sym_size: None }
    }

    /// Spin factor on `R ⊕ Rⁿ⁻¹`: `(x₀,x̄)∘(y₀,ȳ) = (x₀y₀ + b(x̄,ȳ), x₀ȳ + y₀x̄)`.
    pub fn spin_factor(b: &Matrix) -> Self {
        let n = b.rows() + 1;
        let mut mink = Matrix::zeros(n, n);
        mink.set(0, 0, Rational::one());
        for i in 1..n {
            for j in 1..n {
                mink.set(i, j, -b.get(i - 1, j - 1).clone());
            }
        }
        let mut a = Self::build(n, unit_vec(n, 0), AlgebraKind::SpinFactor, |i, j| {
            let mut v = vec![Rational::zero(); n];
            match (i, j) {
                (0, k) | (k, 0) => v[k] = Rational::one(),
                (i, j) => v[0] = b.get(i - 1, j - 1).clone(),
            }
            v
        });
        a.spin_form = Some(mink);
        a
    }

    /// The one-dimensional algebra `R`.
    pub fn real() -> Self {
        Self::spin_factor(&Matrix::zeros(0, 0))
    }

    /// Spin factor of a Lorentzian form with unit `h`:
    /// `x∘y = N(x,h)y + N(y,h)x − N(x,y)h`, `N = q/q(h)`.
    pub fn lorentz(gram: &Matrix, h: &[Rational]) -> Self {
        let n = gram.rows();
        let qh = dot(h, &gram.mul_vec(h));
        let nf = |x: &[Rational], y: &[Rational]| dot(x, &gram.mul_vec(y)) / qh.clone();
        let mut a = Self::build(n, h.to_vec(), AlgebraKind::SpinFactor, |i, j| {
            let (x, y) = (unit_vec(n, i), unit_vec(n, j));
            let (a, b, c) = (nf(&x, h), nf(&y, h), nf(&x, &y));
            (0..n).map(|k| a.clone() * y[k].clone() + b.clone() * x[k].clone() - c.clone() * h[k].clone()).collect()
        });
        a.spin_form = Some(gram.clone());
        a
    }

    /// Real symmetric `m×m` matrices with `X∘Y = (XY+YX)/2`.
    pub fn sym_matrices(m: usize) -> Self {
        let pairs = psd_pairs(m);
        let n = pairs.len();
        let basis = |k: usize| psd_matrix(m, &unit_vec(n, k));
        let half = Rational::new(1.into(), 2.into());
        let mut a = Self::build(n, psd_vector(&Matrix::identity(m)), AlgebraKind::SymMatrices, |i, j| {
            let (x, y) = (basis(i), basis(j));
            psd_vector(&x.mul(&y).add(&y.mul(&x)).scale(&half))
        });
        a.sym_size = Some(m);
        a
    }

    /// Direct product; part `p` occupies coordinates `coords[p]` of `Rⁿ`.
    pub fn product(n: usize, parts: &[(JordanAlgebra, Vec<usize>)]) -> Self {
        if parts.len() == 1 && parts[0].1.iter().copied().eq(0..n) {
            return parts[0].0.clone();
        }
        let mut owner = vec![(usize::MAX, 0); n];
        let mut unit = vec![Rational::zero(); n];
        for (p, (alg, coords)) in parts.iter().enumerate() {
            for (a, &c) in coords.iter().enumerate() {
                owner[c] = (p, a);
                unit[c] = alg.unit[a].clone();
            }
        }
        Self::build(n, unit, AlgebraKind::Product, |i, j| {
            let mut v = vec![Rational::zero(); n];
            let ((pi, ai), (pj, aj)) = (owner[i], owner[j]);
            if pi == pj {
                let (alg, coords) = &parts[pi];
                for (k, x) in &alg.table[ai][aj] {
                    v[coords[*k]] = x.clone();
                }
            }
            v
        })
    }

    /// Algebra of one factor, in factor-local coordinates.
    pub fn from_factor(sym: &SymCone, k: usize) -> Result<Self> {
        match &sym.factors[k].kind {
            FactorKind::Halfline => Ok(Self::real()),
            FactorKind::Lorentz { h } => Ok(Self::lorentz(&sym.factor_gram(k), h)),
            FactorKind::Psd { m } => Ok(Self::sym_matrices(*m)),
            other => Err(Error::Unsupported(format!("Jordan algebra for a {} factor", other.name()))),
        }
    }

    /// Product of the factor algebras, on the ambient coordinates.
    pub fn from_symcone(sym: &SymCone) -> Result<Self> {
        let parts = (0..sym.factors.len())
            .map(|k| Ok((Self::from_factor(sym, k)?, sym.factors[k].coords.clone())))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::product(sym.rank(), &parts))
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn unit(&self) -> &[Rational] {
        &self.unit
    }

    pub fn kind(&self) -> AlgebraKind {
        self.kind
    }

    fn mul(&self, x: &[Rational], y: &[Rational]) -> Vec<Rational> {
        // Σ x_i y_j T_ijk over integers, one normalization per coordinate
        let (xs, dx) = scaled(x);
        let (ys, dy) = scaled(y);
        let mut acc = vec![BigInt::from(0); self.n];
        for (i, xi) in xs.iter().enumerate() {
            if num_traits::Zero::is_zero(xi) {
                continue;
            }
            for (j, yj) in ys.iter().enumerate() {
                if num_traits::Zero::is_zero(yj) {
                    continue;
                }
                let c = xi * yj;
                for (k, t) in &self.table_int[i][j] {
                    acc[*k] += &c * t;
                }
            }
        }
        let den = dx * dy * &self.table_den;
        acc.into_iter().map(|a| Rational::new(a, den.clone())).collect()
    }

    fn mul_f64(&self, x: &[f64], y: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.n];
        for (i, xi) in x.iter().enumerate() {
            for (j, yj) in y.iter().enumerate() {
                for (k, t) in &self.table_f64[i][j] {
                    out[*k] += xi * yj * t;
                }
            }
        }
        out
    }

    pub fn jmul(&self, x: &[Rational], y: &[Rational]) -> Result<Vec<Rational>> {
        for v in [x, y] {
            if v.len() != self.n {
                return Err(Error::DimensionMismatch { expected: self.n, got: v.len() });
            }
        }
        Ok(self.mul(x, y))
    }

    /// Matrix of `L(x) : y ↦ x∘y`.
    pub fn l_matrix(&self, x: &[Rational]) -> Matrix {
        let cols: Vec<Vec<Rational>> = (0..self.n).map(|j| self.mul(x, &unit_vec(self.n, j))).collect();
        Matrix::from_cols(self.n, &cols)
    }

    /// `Q(b) = 2L(b)² − L(b∘b)`.
    pub fn quadratic_rep(&self, b: &[Rational]) -> Matrix {
        let l = self.l_matrix(b);
        let two = Rational::from_integer(2.into());
        l.mul(&l).scale(&two).sub(&self.l_matrix(&self.mul(b, b)))
    }

    /// `T_ij = tr L(e_i ∘ e_j)`.
    pub fn trace_form(&self) -> Matrix {
        let t: Vec<Rational> = (0..self.n)
            .map(|k| {
                let l = self.l_matrix(&unit_vec(self.n, k));
                (0..self.n).fold(Rational::zero(), |acc, i| acc + l.get(i, i).clone())
            })
            .collect();
        Matrix::from_fn(self.n, self.n, |i, j| self.table[i][j].iter().fold(Rational::zero(), |acc, (k, x)| acc + x.clone() * t[*k].clone()))
    }

    /// Sums of squares vanish only trivially: the trace form is definite.
    pub fn is_formally_real(&self) -> bool {
        is_positive_definite(&self.trace_form())
    }

    /// `a` lies in the interior of the cone of squares.
    pub fn is_interior(&self, a: &[Rational]) -> bool {
        is_positive_definite(&self.trace_form().mul(&self.l_matrix(a)))
    }

    pub fn is_invertible(&self, b: &[Rational]) -> bool {
        if let Some(m) = &self.spin_form {
            return !dot(b, &m.mul_vec(b)).is_zero();
        }
        if let Some(m) = self.sym_size {
            return !psd_matrix(m, b).det().is_zero();
        }
        !self.quadratic_rep(b).det().is_zero()
    }

    /// `g(e) = e` and `g(x∘y) = g(x)∘g(y)` on basis pairs.
    pub fn check_automorphism(&self, g: &Matrix) -> Result<()> {
        if g.mul_vec(&self.unit) != self.unit {
            return Err(Error::NotAutomorphism("the unit is moved".into()));
        }
        for i in 0..self.n {
            for j in i..self.n {
                let lhs = g.mul_vec(&self.mul(&unit_vec(self.n, i), &unit_vec(self.n, j)));
                let rhs = self.mul(&g.col(i), &g.col(j));
                if lhs != rhs {
                    return Err(Error::NotAutomorphism(format!("product of basis vectors {i} and {j}")));
                }
            }
        }
        Ok(())
    }

    /// Induced algebra on the fixed subspace, with its basis (columns).
    pub fn invariant_subalgebra(&self, action: &FiniteAction) -> Result<(JordanAlgebra, Matrix)> {
        if action.dim() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, got: action.dim() });
        }
        for g in action.generators() {
            self.check_automorphism(g)?;
        }
        let b = invariant_sublattice(action);
        let k = b.cols();
        let coords = |v: &[Rational]| b.solve(v).expect("fixed space is a subalgebra");
        let cols = b.to_cols();
        let unit = coords(&self.unit);
        let mut alg = Self::build(k, unit, self.kind, |i, j| coords(&self.mul(&cols[i], &cols[j])));
        alg.spin_form = self.spin_form.as_ref().map(|m| b.transpose().mul(m).mul(&b));
        Ok((alg, b))
    }

    /// Some `b` with `b∘b` within `precision` of `a` (sup norm), and the
    /// exact residual. Perfect squares with small rational roots are found
    /// exactly.
    pub fn transporter(&self, a: &[Rational], precision: &Rational) -> Result<(Vec<Rational>, Rational)> {
        if a.len() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, got: a.len() });
        }
        if !self.is_interior(a) {
            return Err(Error::NotInterior);
        }
        let af: Vec<f64> = a.iter().map(to_f64).collect();
        let mut b: Vec<f64> = self.unit.iter().map(to_f64).collect();
        // Newton for b² = a, staying in the associative subalgebra generated by a
        for _ in 0..200 {
            let inv = self.inverse_f64(&b);
            let step = self.mul_f64(&inv, &af);
            let next: Vec<f64> = b.iter().zip(&step).map(|(x, y)| 0.5 * (x + y)).collect();
            let delta = next.iter().zip(&b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
            b = next;
            if delta < 1e-15 * (1.0 + b.iter().map(|x| x.abs()).fold(0.0, f64::max)) {
                break;
            }
        }
        let mut best: Option<(Vec<Rational>, Rational)> = None;
        let mut den = 1u64;
        while den <= 1_000_000_000_000 {
            let cand: Vec<Rational> = b.iter().map(|&x| rationalize(x, den)).collect();
            let res = vsub(&self.mul(&cand, &cand), a).iter().map(|x| x.abs()).fold(Rational::zero(), |m, x| if x > m { x } else { m });
            let better = best.as_ref().is_none_or(|(_, r)| res < *r);
            if better {
                best = Some((cand, res.clone()));
            }
            if res.is_zero() || res <= *precision {
                break;
            }
            den *= 10;
        }
        Ok(best.expect("at least one candidate"))
    }

    fn inverse_f64(&self, b: &[f64]) -> Vec<f64> {
        // b⁻¹ = Q(b)⁻¹ b
        let n = self.n;
        let l = |x: &[f64]| -> Vec<Vec<f64>> {
            let mut m = vec![vec![0.0; n]; n];
            for j in 0..n {
                let mut e = vec![0.0; n];
                e[j] = 1.0;
                let c = self.mul_f64(x, &e);
                for i in 0..n {
                    m[i][j] = c[i];
                }
            }
            m
        };
        let lb = l(b);
        let lb2 = l(&self.mul_f64(b, b));
        let mut q = vec![vec![0.0; n]; n];
        for i in 0..n {
            for j in 0..n {
                let s: f64 = (0..n).map(|k| lb[i][k] * lb[k][j]).sum();
                q[i][j] = 2.0 * s - lb2[i][j];
            }
        }
        solve_f64(q, b.to_vec())
    }
}

fn solve_f64(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Vec<f64> {
    let n = b.len();
    for c in 0..n {
        let p = (c..n).max_by(|&i, &j| a[i][c].abs().total_cmp(&a[j][c].abs())).unwrap();
        a.swap(c, p);
        b.swap(c, p);
        let d = a[c][c];
        if d == 0.0 {
            continue;
        }
        for i in c + 1..n {
            let f = a[i][c] / d;
            for j in c..n {
                a[i][j] -= f * a[c][j];
            }
            b[i] -= f * b[c];
        }
    }
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let s: f64 = (i + 1..n).map(|j| a[i][j] * x[j]).sum();
        x[i] = if a[i][i] == 0.0 { 0.0 } else { (b[i] - s) / a[i][i] };
    }
    x
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct JordanSuite {
    pub commutative: bool,
    pub unit: bool,
    pub jordan_identity: bool,
    pub formally_real: bool,
    pub pairs: usize,
}

impl JordanSuite {
    pub fn ok(&self) -> bool {
        self.commutative && self.unit && self.jordan_identity && self.formally_real
    }
}

/// Axiom checks on basis pairs plus `pairs` sampled rational pairs.
pub fn check_suite(alg: &JordanAlgebra, pairs: usize, seed: u64) -> JordanSuite {
    let n = alg.n;
    let basis_comm = (0..n).all(|i| (0..n).all(|j| alg.table[i][j] == alg.table[j][i]));
    let basis_unit = (0..n).all(|i| alg.mul(&alg.unit, &unit_vec(n, i)) == unit_vec(n, i));
    let sampled: Vec<(bool, bool, bool)> = (0..pairs)
        .into_par_iter()
        .map(|s| {
            let mut r = rng(seed, s as u64);
            let x = rational_vec(&mut r, n, 5, 3);
            let y = rational_vec(&mut r, n, 5, 3);
            let xy = alg.mul(&x, &y);
            let comm = xy == alg.mul(&y, &x);
            let unit = alg.mul(&alg.unit, &x) == x;
            let x2 = alg.mul(&x, &x);
            let jid = alg.mul(&x2, &xy) == alg.mul(&x, &alg.mul(&x2, &y));
            (comm, unit, jid)
        })
        .collect();
    JordanSuite {
        commutative: basis_comm && sampled.iter().all(|t| t.0),
        unit: basis_unit && sampled.iter().all(|t| t.1),
        jordan_identity: sampled.iter().all(|t| t.2),
        formally_real: alg.is_formally_real(),
        pairs,
    }
}
