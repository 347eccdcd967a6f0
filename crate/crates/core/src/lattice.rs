//! Lattices with a rational quadratic form, and finite matrix groups acting
//! on them.

use std::collections::{HashSet, VecDeque};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::intmat::{from_int_rows, integer_kernel, to_int_rows};
use crate::linalg::{dot, Matrix};
use crate::scalar::{Field, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Signature {
    pub pos: usize,
    pub neg: usize,
    pub zero: usize,
}

impl Signature {
    pub fn is_hyperbolic(&self) -> bool {
        self.pos == 1 && self.zero == 0
    }
}

/// `Zⁿ` with the symmetric bilinear form given by `gram`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadLattice {
    gram: Matrix,
}

impl QuadLattice {
    pub fn new(gram: Matrix) -> Result<Self> {
        if !gram.is_square() {
            return Err(Error::DimensionMismatch { expected: gram.rows(), got: gram.cols() });
        }
        if !gram.is_symmetric() {
            return Err(Error::NotSymmetric);
        }
        if gram.rows() == 0 || gram.det().is_zero() {
            return Err(Error::DegenerateForm);
        }
        Ok(QuadLattice { gram })
    }

    pub fn rank(&self) -> usize {
        self.gram.rows()
    }

    pub fn gram(&self) -> &Matrix {
        &self.gram
    }

    /// `q(u, v)`.
    pub fn q(&self, u: &[Rational], v: &[Rational]) -> Rational {
        dot(u, &self.gram.mul_vec(v))
    }

    pub fn norm(&self, v: &[Rational]) -> Rational {
        self.q(v, v)
    }

    pub fn signature(&self) -> Signature {
        signature(&self.gram)
    }

    /// True when every element of `g` satisfies `gᵀ G g = G`.
    pub fn is_isometry(&self, g: &Matrix) -> bool {
        g.transpose().mul(&self.gram).mul(g) == self.gram
    }

    /// Gram matrix of the form restricted to the column span of `basis`.
    pub fn restrict(&self, basis: &Matrix) -> Matrix {
        basis.transpose().mul(&self.gram).mul(basis)
    }
}

/// Inertia of a symmetric rational matrix by symmetric Gaussian reduction.
pub fn signature(m: &Matrix) -> Signature {
    assert!(m.is_symmetric(), "signature of a non-symmetric matrix");
    let n = m.rows();
    let mut a = m.clone();
    let mut sig = Signature { pos: 0, neg: 0, zero: 0 };
    for k in 0..n {
        if a.get(k, k).is_zero() {
            if let Some(j) = (k + 1..n).find(|&j| !a.get(j, j).is_zero()) {
                sym_swap(&mut a, k, j);
            } else if let Some(j) = (k + 1..n).find(|&j| !a.get(k, j).is_zero()) {
                // all remaining diagonals vanish: x_k += x_j makes a_kk = 2 a_kj
                sym_add(&mut a, k, j);
            } else {
                sig.zero += 1;
                continue;
            }
        }
        let p = a.get(k, k).clone();
        match p.sign() {
            std::cmp::Ordering::Greater => sig.pos += 1,
            std::cmp::Ordering::Less => sig.neg += 1,
            std::cmp::Ordering::Equal => unreachable!(),
        }
        for i in k + 1..n {
            if a.get(i, k).is_zero() {
                continue;
            }
            let f = a.get(i, k).clone() / p.clone();
            for j in k..n {
                let v = a.get(i, j).clone() - f.clone() * a.get(k, j).clone();
                a.set(i, j, v);
            }
            for j in k..n {
                let v = a.get(j, i).clone() - f.clone() * a.get(j, k).clone();
                a.set(j, i, v);
            }
        }
    }
    sig
}

fn sym_swap(a: &mut Matrix, i: usize, j: usize) {
    let n = a.rows();
    let p: Vec<usize> = (0..n).map(|x| if x == i { j } else if x == j { i } else { x }).collect();
    *a = a.select(&p, &p);
}

// row_i += row_j, col_i += col_j
fn sym_add(a: &mut Matrix, i: usize, j: usize) {
    let n = a.rows();
    for c in 0..n {
        let v = a.get(i, c).clone() + a.get(j, c).clone();
        a.set(i, c, v);
    }
    for r in 0..n {
        let v = a.get(r, i).clone() + a.get(r, j).clone();
        a.set(r, i, v);
    }
}

/// Leading principal minors all positive.
pub fn is_positive_definite(m: &Matrix) -> bool {
    m.is_symmetric() && (1..=m.rows()).all(|k| {
        let idx: Vec<usize> = (0..k).collect();
        m.select(&idx, &idx).det().is_positive()
    })
}

/// A finite group of integer matrices, closed by enumeration.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteAction {
    dim: usize,
    generators: Vec<Matrix>,
    elements: Vec<Matrix>,
}

impl FiniteAction {
    pub fn trivial(n: usize) -> Self {
        FiniteAction { dim: n, generators: vec![], elements: vec![Matrix::identity(n)] }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn generators(&self) -> &[Matrix] {
        &self.generators
    }

    /// All elements; the identity comes first.
    pub fn elements(&self) -> &[Matrix] {
        &self.elements
    }

    pub fn is_trivial(&self) -> bool {
        self.elements.len() == 1
    }

    /// Checks every generator against the form; reports the first offender.
    pub fn check_isometry(&self, lattice: &QuadLattice) -> Result<()> {
        if lattice.rank() != self.dim {
            return Err(Error::DimensionMismatch { expected: lattice.rank(), got: self.dim });
        }
        for (i, g) in self.generators.iter().enumerate() {
            if !lattice.is_isometry(g) {
                return Err(Error::NotIsometry(i));
            }
        }
        Ok(())
    }

    /// Orbit of a vector, distinct elements in order of discovery.
    pub fn orbit(&self, v: &[Rational]) -> Vec<Vec<Rational>> {
        let mut out: Vec<Vec<Rational>> = Vec::new();
        for g in &self.elements {
            let w = g.mul_vec(v);
            if !out.contains(&w) {
                out.push(w);
            }
        }
        out
    }

    /// `(1/|G|) Σ g`, the projection onto the fixed space.
    pub fn reynolds(&self) -> Matrix {
        let n = self.dim;
        let mut s = Matrix::zeros(n, n);
        for g in &self.elements {
            s = s.add(g);
        }
        s.scale(&Rational::new(BigInt::one(), BigInt::from(self.order())))
    }

    /// Sum of `g·v` over the whole group, with multiplicity.
    pub fn group_sum(&self, v: &[Rational]) -> Vec<Rational> {
        let mut s = vec![<Rational as Field>::zero(); v.len()];
        for g in &self.elements {
            s = crate::linalg::vadd(&s, &g.mul_vec(v));
        }
        s
    }
}

/// Closes the group generated by `generators` (all `n×n`), failing once
/// more than `cap` elements are found.
pub fn group_closure(n: usize, generators: &[Matrix], cap: usize) -> Result<FiniteAction> {
    for (i, g) in generators.iter().enumerate() {
        if g.rows() != n || g.cols() != n {
            return Err(Error::DimensionMismatch { expected: n, got: g.rows() });
        }
        if !g.is_integral() || !g.det().abs().is_one() {
            return Err(Error::NotLatticePreserving(i));
        }
    }
    let id = Matrix::identity(n);
    let mut seen: HashSet<Matrix> = HashSet::new();
    let mut elements = vec![id.clone()];
    seen.insert(id.clone());
    let mut queue = VecDeque::from([id]);
    while let Some(x) = queue.pop_front() {
        for g in generators {
            let y = g.mul(&x);
            if seen.insert(y.clone()) {
                if elements.len() >= cap {
                    return Err(Error::CapExceeded(cap));
                }
                elements.push(y.clone());
                queue.push_back(y);
            }
        }
    }
    Ok(FiniteAction { dim: n, generators: generators.to_vec(), elements })
}

/// Integer basis (as columns of an `n×k` matrix) of the saturated
/// sublattice of vectors fixed by the whole group.
pub fn invariant_sublattice(action: &FiniteAction) -> Matrix {
    let n = action.dim;
    let id = Matrix::identity(n);
    let mut rows = Vec::new();
    for g in &action.generators {
        let d = to_int_rows(&g.sub(&id)).expect("generators are integral");
        rows.extend(d);
    }
    if rows.is_empty() {
        return id;
    }
    let ker = integer_kernel(&rows, n);
    if ker.is_empty() {
        return Matrix::zeros(n, 0);
    }
    from_int_rows(&ker).transpose()
}

/// G-equivariant projection onto the fixed space: the average of
/// `g p g⁻¹` for `p` the orthogonal projection with respect to a
/// positive-definite invariant form.
pub fn maschke_projection(action: &FiniteAction) -> Matrix {
    let n = action.dim;
    let b = invariant_sublattice(action);
    if b.cols() == 0 {
        return Matrix::zeros(n, n);
    }
    let s = invariant_form(action, &Matrix::identity(n)).expect("identity seed is positive definite");
    let bts = b.transpose().mul(&s);
    let p = b.mul(&bts.mul(&b).inverse().expect("restricted definite form")).mul(&bts);
    let mut acc = Matrix::zeros(n, n);
    for g in &action.elements {
        let gi = g.inverse().expect("group elements are invertible");
        acc = acc.add(&g.mul(&p).mul(&gi));
    }
    acc.scale(&Rational::new(BigInt::one(), BigInt::from(action.order())))
}

/// Smallest integral multiple of `(1/|G|) Σ gᵀ S g` for a positive-definite
/// seed `S`.
pub fn invariant_form(action: &FiniteAction, seed: &Matrix) -> Result<Matrix> {
    if seed.rows() != action.dim || !seed.is_square() {
        return Err(Error::DimensionMismatch { expected: action.dim, got: seed.rows() });
    }
    if !is_positive_definite(seed) {
        return Err(Error::NotPositiveDefinite);
    }
    let n = action.dim;
    let mut acc = Matrix::zeros(n, n);
    for g in &action.elements {
        acc = acc.add(&g.transpose().mul(seed).mul(g));
    }
    let avg = acc.scale(&Rational::new(BigInt::one(), BigInt::from(action.order())));
    let mut l = BigInt::one();
    for i in 0..n {
        for j in 0..n {
            l = l.lcm(avg.get(i, j).denom());
        }
    }
    Ok(avg.scale(&Rational::from_integer(l)))
}
