//! Exact linear algebra over the chain rings `ℤ/p^n` and `W_n(F_q)`.
//!
//! Both rings are local with principal maximal ideal `(p)` and `p^n = 0`:
//! every element is `p^v · unit`, every ideal is `(p^v)`. Smith normal form
//! therefore needs no gcd steps: pick the entry of least valuation, scale it
//! to `p^v` by a unit, and all quotients in the elimination are exact. The
//! diagonal valuations come out nondecreasing automatically.
//!
//! On top of the SNF sit presentations of finite modules `⊕_j R/p^{a_j}`:
//! kernels, linear solves, and subquotients with explicit generators plus an
//! `express` map writing an element in those generators. The same engine is
//! instantiated at `ℤ/p^n` (for everything `1 - F`-related, see
//! [`crate::solver`]) and at `W_n(F_q)` (for cohomology of complexes with
//! induced semilinear structure, see [`crate::complex`]).
//!
//! Pivot selection is minimal valuation first, then lowest row-major index,
//! so identical inputs produce identical output: invariant factors and
//! transforms alike.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::fq::FieldDesc;
use crate::witt::WittVec;

/// Scalars of a local chain ring with nilpotent `p`.
pub trait LocalRing {
    type Elem: Clone + PartialEq + core::fmt::Debug;

    /// Smallest `e` with `p^e = 0` (the working precision `n`).
    fn nil_exp(&self) -> usize;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    /// p-adic valuation; `nil_exp()` for zero.
    fn valuation(&self, a: &Self::Elem) -> usize;
    /// The unit `u` in `a = p^{v(a)} · u` (canonical choice; `1` for zero).
    fn unit_part(&self, a: &Self::Elem) -> Self::Elem;
    /// Inverse of a unit.
    fn inv_unit(&self, a: &Self::Elem) -> Self::Elem;
    fn p_pow(&self, e: usize) -> Self::Elem;
    /// Canonical representative of `a mod p^e`.
    fn reduce_mod_p_pow(&self, a: &Self::Elem, e: usize) -> Self::Elem;

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.neg(b))
    }
}

/// `ℤ/p^n` with canonical representatives in `0..p^n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Zpn {
    p: u64,
    n: usize,
    pn: u64,
}

impl Zpn {
    pub fn new(p: u64, n: usize) -> Self {
        assert!(n >= 1, "precision must be >= 1");
        let pn = p.checked_pow(n as u32).expect("p^n fits u64");
        Zpn { p, n, pn }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn modulus(&self) -> u64 {
        self.pn
    }

    pub fn from_u64(&self, v: u64) -> u64 {
        v % self.pn
    }

    pub fn from_i64(&self, v: i64) -> u64 {
        v.rem_euclid(self.pn as i64) as u64
    }
}

impl LocalRing for Zpn {
    type Elem = u64;

    fn nil_exp(&self) -> usize {
        self.n
    }

    fn zero(&self) -> u64 {
        0
    }

    fn one(&self) -> u64 {
        1 % self.pn
    }

    fn add(&self, a: &u64, b: &u64) -> u64 {
        (a + b) % self.pn
    }

    fn neg(&self, a: &u64) -> u64 {
        (self.pn - a % self.pn) % self.pn
    }

    fn mul(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 * *b as u128) % self.pn as u128) as u64
    }

    fn is_zero(&self, a: &u64) -> bool {
        a.is_multiple_of(self.pn)
    }

    fn valuation(&self, a: &u64) -> usize {
        let mut x = a % self.pn;
        if x == 0 {
            return self.n;
        }
        let mut v = 0;
        while x.is_multiple_of(self.p) {
            x /= self.p;
            v += 1;
        }
        v
    }

    fn unit_part(&self, a: &u64) -> u64 {
        let x = a % self.pn;
        if x == 0 {
            return 1 % self.pn;
        }
        x / self.p.pow(self.valuation(a) as u32)
    }

    fn inv_unit(&self, a: &u64) -> u64 {
        // extended Euclid on (a, p^n)
        let (mut r0, mut r1) = (*a as i128, self.pn as i128);
        let (mut s0, mut s1) = (1i128, 0i128);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (s0, s1) = (s1, s0 - q * s1);
        }
        assert!(r0 == 1 || r0 == -1, "not a unit mod p^n");
        let s = if r0 == 1 { s0 } else { -s0 };
        s.rem_euclid(self.pn as i128) as u64
    }

    fn p_pow(&self, e: usize) -> u64 {
        if e >= self.n {
            0
        } else {
            self.p.pow(e as u32)
        }
    }

    fn reduce_mod_p_pow(&self, a: &u64, e: usize) -> u64 {
        if e >= self.n {
            a % self.pn
        } else {
            a % self.p.pow(e as u32)
        }
    }
}

/// `W_n(F_q)` as a chain ring.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WittLocal {
    field: FieldDesc,
    n: usize,
}

impl WittLocal {
    pub fn new(field: FieldDesc, n: usize) -> Self {
        assert!(n >= 1, "precision must be >= 1");
        WittLocal { field, n }
    }

    pub fn field(&self) -> &FieldDesc {
        &self.field
    }

    pub fn n(&self) -> usize {
        self.n
    }
}

impl LocalRing for WittLocal {
    type Elem = WittVec;

    fn nil_exp(&self) -> usize {
        self.n
    }

    fn zero(&self) -> WittVec {
        WittVec::zero(&self.field, self.n)
    }

    fn one(&self) -> WittVec {
        WittVec::one(&self.field, self.n)
    }

    fn add(&self, a: &WittVec, b: &WittVec) -> WittVec {
        a.add(b).expect("same Witt ring")
    }

    fn neg(&self, a: &WittVec) -> WittVec {
        a.neg()
    }

    fn mul(&self, a: &WittVec, b: &WittVec) -> WittVec {
        a.mul(b).expect("same Witt ring")
    }

    fn is_zero(&self, a: &WittVec) -> bool {
        a.is_zero()
    }

    fn valuation(&self, a: &WittVec) -> usize {
        a.valuation()
    }

    fn unit_part(&self, a: &WittVec) -> WittVec {
        a.unit_part()
    }

    fn inv_unit(&self, a: &WittVec) -> WittVec {
        a.inv_unit().expect("unit in W_n")
    }

    fn p_pow(&self, e: usize) -> WittVec {
        WittVec::p_pow(&self.field, self.n, e)
    }

    fn reduce_mod_p_pow(&self, a: &WittVec, e: usize) -> WittVec {
        if e >= self.n {
            a.clone()
        } else {
            a.clear_from(e)
        }
    }
}

/// Dense row-major matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mat<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Clone> Mat<T> {
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Mat { rows, cols, data }
    }

    pub fn filled(rows: usize, cols: usize, v: T) -> Self {
        Mat {
            rows,
            cols,
            data: vec![v; rows * cols],
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.cols + j] = v;
    }

    pub fn col(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self.at(i, j).clone()).collect()
    }

    pub fn from_cols(rows: usize, cols: Vec<Vec<T>>) -> Self
    where
        T: core::fmt::Debug,
    {
        let ncols = cols.len();
        Mat::from_fn(rows, ncols, |i, j| cols[j][i].clone())
    }

    /// Horizontal concatenation.
    pub fn hcat(&self, other: &Mat<T>) -> Mat<T> {
        assert_eq!(self.rows, other.rows);
        Mat::from_fn(self.rows, self.cols + other.cols, |i, j| {
            if j < self.cols {
                self.at(i, j).clone()
            } else {
                other.at(i, j - self.cols).clone()
            }
        })
    }
}

pub fn mat_zero<R: LocalRing>(ring: &R, rows: usize, cols: usize) -> Mat<R::Elem> {
    Mat::filled(rows, cols, ring.zero())
}

pub fn mat_identity<R: LocalRing>(ring: &R, size: usize) -> Mat<R::Elem> {
    Mat::from_fn(size, size, |i, j| if i == j { ring.one() } else { ring.zero() })
}

pub fn mat_mul<R: LocalRing>(ring: &R, a: &Mat<R::Elem>, b: &Mat<R::Elem>) -> Mat<R::Elem> {
    assert_eq!(a.cols(), b.rows());
    Mat::from_fn(a.rows(), b.cols(), |i, j| {
        let mut acc = ring.zero();
        for k in 0..a.cols() {
            acc = ring.add(&acc, &ring.mul(a.at(i, k), b.at(k, j)));
        }
        acc
    })
}

pub fn mat_apply<R: LocalRing>(ring: &R, a: &Mat<R::Elem>, x: &[R::Elem]) -> Vec<R::Elem> {
    assert_eq!(a.cols(), x.len());
    (0..a.rows())
        .map(|i| {
            let mut acc = ring.zero();
            for (k, xk) in x.iter().enumerate() {
                acc = ring.add(&acc, &ring.mul(a.at(i, k), xk));
            }
            acc
        })
        .collect()
}

/// Smith normal form data: `p · m · q = d` with `d` diagonal `p^{c_0} | p^{c_1} | …`.
pub struct Snf<R: LocalRing> {
    /// Valuations `c_k` of the diagonal entries, length `min(rows, cols)`;
    /// zero diagonal entries are recorded as `nil_exp`.
    pub diag: Vec<usize>,
    pub d: Mat<R::Elem>,
    pub p: Mat<R::Elem>,
    pub p_inv: Mat<R::Elem>,
    pub q: Mat<R::Elem>,
    pub q_inv: Mat<R::Elem>,
}

pub fn smith<R: LocalRing>(ring: &R, m: &Mat<R::Elem>) -> Snf<R> {
    let rows = m.rows();
    let cols = m.cols();
    let nil = ring.nil_exp();
    let mut a = m.clone();
    let mut p = mat_identity(ring, rows);
    let mut p_inv = mat_identity(ring, rows);
    let mut q = mat_identity(ring, cols);
    let mut q_inv = mat_identity(ring, cols);
    let steps = rows.min(cols);
    let mut diag = Vec::with_capacity(steps);

    for k in 0..steps {
        // pivot: minimal valuation, then lowest row-major index
        let mut best: Option<(usize, usize, usize)> = None;
        for i in k..rows {
            for j in k..cols {
                let v = ring.valuation(a.at(i, j));
                if v >= nil {
                    continue;
                }
                if best.is_none_or(|(_, _, bv)| v < bv) {
                    best = Some((i, j, v));
                }
            }
        }
        let Some((pi, pj, pv)) = best else {
            break;
        };
        if pi != k {
            swap_rows(&mut a, k, pi);
            swap_rows(&mut p, k, pi);
            swap_cols(&mut p_inv, k, pi);
        }
        if pj != k {
            swap_cols(&mut a, k, pj);
            swap_cols(&mut q, k, pj);
            swap_rows(&mut q_inv, k, pj);
        }
        // scale row k so the pivot becomes exactly p^{pv}
        let u_inv = ring.inv_unit(&ring.unit_part(a.at(k, k)));
        let u = ring.unit_part(a.at(k, k));
        scale_row(ring, &mut a, k, &u_inv);
        scale_row(ring, &mut p, k, &u_inv);
        scale_col(ring, &mut p_inv, k, &u);
        debug_assert_eq!(*a.at(k, k), ring.p_pow(pv));

        // clear column k: row_i -= t · row_k with t = p^{v-pv} · unit(a_ik)
        for i in (k + 1)..rows {
            if ring.is_zero(a.at(i, k)) {
                continue;
            }
            let v = ring.valuation(a.at(i, k));
            let t = ring.mul(&ring.p_pow(v - pv), &ring.unit_part(a.at(i, k)));
            row_axpy_neg(ring, &mut a, i, k, &t);
            row_axpy_neg(ring, &mut p, i, k, &t);
            col_axpy_pos(ring, &mut p_inv, k, i, &t);
        }
        // clear row k: col_j -= t · col_k
        for j in (k + 1)..cols {
            if ring.is_zero(a.at(k, j)) {
                continue;
            }
            let v = ring.valuation(a.at(k, j));
            let t = ring.mul(&ring.p_pow(v - pv), &ring.unit_part(a.at(k, j)));
            col_axpy_neg(ring, &mut a, j, k, &t);
            col_axpy_neg(ring, &mut q, j, k, &t);
            row_axpy_pos(ring, &mut q_inv, k, j, &t);
        }
        diag.push(pv);
    }
    diag.resize(steps, nil);

    Snf {
        diag,
        d: a,
        p,
        p_inv,
        q,
        q_inv,
    }
}

fn swap_rows<T>(m: &mut Mat<T>, i: usize, k: usize) {
    for j in 0..m.cols {
        m.data.swap(i * m.cols + j, k * m.cols + j);
    }
}

fn swap_cols<T>(m: &mut Mat<T>, j: usize, k: usize) {
    for i in 0..m.rows {
        m.data.swap(i * m.cols + j, i * m.cols + k);
    }
}

fn scale_row<R: LocalRing>(ring: &R, m: &mut Mat<R::Elem>, i: usize, u: &R::Elem) {
    for j in 0..m.cols() {
        let v = ring.mul(m.at(i, j), u);
        m.set(i, j, v);
    }
}

fn scale_col<R: LocalRing>(ring: &R, m: &mut Mat<R::Elem>, j: usize, u: &R::Elem) {
    for i in 0..m.rows() {
        let v = ring.mul(m.at(i, j), u);
        m.set(i, j, v);
    }
}

/// `row_i -= t · row_k`
fn row_axpy_neg<R: LocalRing>(ring: &R, m: &mut Mat<R::Elem>, i: usize, k: usize, t: &R::Elem) {
    for j in 0..m.cols() {
        let v = ring.sub(m.at(i, j), &ring.mul(t, m.at(k, j)));
        m.set(i, j, v);
    }
}

/// `row_i += t · row_k`
fn row_axpy_pos<R: LocalRing>(ring: &R, m: &mut Mat<R::Elem>, i: usize, k: usize, t: &R::Elem) {
    for j in 0..m.cols() {
        let v = ring.add(m.at(i, j), &ring.mul(t, m.at(k, j)));
        m.set(i, j, v);
    }
}

/// `col_j -= t · col_k`
fn col_axpy_neg<R: LocalRing>(ring: &R, m: &mut Mat<R::Elem>, j: usize, k: usize, t: &R::Elem) {
    for i in 0..m.rows() {
        let v = ring.sub(m.at(i, j), &ring.mul(t, m.at(i, k)));
        m.set(i, j, v);
    }
}

/// `col_j += t · col_k`
fn col_axpy_pos<R: LocalRing>(ring: &R, m: &mut Mat<R::Elem>, j: usize, k: usize, t: &R::Elem) {
    for i in 0..m.rows() {
        let v = ring.add(m.at(i, j), &ring.mul(t, m.at(i, k)));
        m.set(i, j, v);
    }
}

/// Generators of `{x ∈ R^cols : m·x = 0}`: with `p m q = d`, the solutions
/// are `q · p^{n - c_j} e_j` (and all of `q e_j` past the diagonal).
pub fn kernel_lattice<R: LocalRing>(ring: &R, m: &Mat<R::Elem>) -> Mat<R::Elem> {
    let snf = smith(ring, m);
    let nil = ring.nil_exp();
    let mut cols: Vec<Vec<R::Elem>> = Vec::new();
    for j in 0..m.cols() {
        let c = snf.diag.get(j).copied().unwrap_or(nil);
        let mult = nil - c.min(nil);
        if mult >= nil {
            continue; // c = 0: only the zero multiple kills a unit
        }
        let scale = ring.p_pow(mult);
        let col: Vec<R::Elem> = (0..m.cols())
            .map(|i| ring.mul(snf.q.at(i, j), &scale))
            .collect();
        if col.iter().any(|e| !ring.is_zero(e)) {
            cols.push(col);
        }
    }
    Mat::from_cols(m.cols(), cols)
}

/// Solve `m·x = b` over `R`, if possible.
pub fn solve<R: LocalRing>(ring: &R, snf: &Snf<R>, b: &[R::Elem]) -> Option<Vec<R::Elem>> {
    let rows = snf.p.rows();
    let cols = snf.q.rows();
    assert_eq!(b.len(), rows);
    let y = mat_apply(ring, &snf.p, b);
    let nil = ring.nil_exp();
    let mut x_prime = vec![ring.zero(); cols];
    for (i, yi) in y.iter().enumerate() {
        let c = snf.diag.get(i).copied().unwrap_or(nil);
        if c >= nil {
            if !ring.is_zero(yi) {
                return None;
            }
            continue;
        }
        if ring.is_zero(yi) {
            continue;
        }
        let v = ring.valuation(yi);
        if v < c {
            return None;
        }
        if i >= cols {
            return None;
        }
        x_prime[i] = ring.mul(&ring.p_pow(v - c), &ring.unit_part(yi));
    }
    Some(mat_apply(ring, &snf.q, &x_prime))
}

/// A map between presented modules `⊕_j R/p^{a_j} → ⊕_l R/p^{b_l}`.
///
/// Entries are lattice representatives; well-definedness requires
/// `v(entry_{l,j}) ≥ b_l - a_j`, which [`ShapedMap::validate`] checks.
#[derive(Debug, Clone, PartialEq)]
pub struct ShapedMap<R: LocalRing> {
    pub src_exps: Vec<usize>,
    pub tgt_exps: Vec<usize>,
    pub mat: Mat<R::Elem>,
}

impl<R: LocalRing> ShapedMap<R> {
    pub fn new(
        ring: &R,
        src_exps: Vec<usize>,
        tgt_exps: Vec<usize>,
        mat: Mat<R::Elem>,
    ) -> Result<Self> {
        if mat.rows() != tgt_exps.len() || mat.cols() != src_exps.len() {
            return Err(Error::Shape(String::from(
                "matrix shape does not match module shapes",
            )));
        }
        let map = ShapedMap {
            src_exps,
            tgt_exps,
            mat,
        };
        map.validate(ring)?;
        Ok(map)
    }

    pub fn validate(&self, ring: &R) -> Result<()> {
        for (l, &b) in self.tgt_exps.iter().enumerate() {
            for (j, &a) in self.src_exps.iter().enumerate() {
                let needed = b.saturating_sub(a);
                let v = ring.valuation(self.mat.at(l, j));
                if v < needed {
                    return Err(Error::Shape(String::from(
                        "matrix entry does not respect component annihilators",
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Relation matrix `diag(p^{e_j})` of a presented module.
pub fn relation_mat<R: LocalRing>(ring: &R, exps: &[usize]) -> Mat<R::Elem> {
    Mat::from_fn(exps.len(), exps.len(), |i, j| {
        if i == j {
            ring.p_pow(exps[i])
        } else {
            ring.zero()
        }
    })
}

/// Lattice representatives generating the kernel of a shaped map.
pub fn kernel_shaped<R: LocalRing>(ring: &R, map: &ShapedMap<R>) -> Mat<R::Elem> {
    let aug = map.mat.hcat(&relation_mat(ring, &map.tgt_exps));
    let k = kernel_lattice(ring, &aug);
    let src = map.src_exps.len();
    let cols: Vec<Vec<R::Elem>> = (0..k.cols())
        .map(|j| (0..src).map(|i| k.at(i, j).clone()).collect())
        .filter(|col: &Vec<R::Elem>| col.iter().any(|e| !ring.is_zero(e)))
        .collect();
    Mat::from_cols(src, cols)
}

/// A subquotient `span(Z) / (span(B) + relations)` of a presented module
/// `⊕_j R/p^{a_j}`, with explicit generators and coordinates.
pub struct Subquotient<R: LocalRing> {
    pub amb_exps: Vec<usize>,
    /// Factor exponents (ascending, as produced by the SNF); zero factors
    /// are dropped.
    pub exps: Vec<usize>,
    /// Lattice representatives of the generators, one column per factor.
    pub gens: Mat<R::Elem>,
    num_z: usize,
    z_aug_snf: Snf<R>,
    rel_p: Mat<R::Elem>,
    kept: Vec<usize>,
}

impl<R: LocalRing> Subquotient<R> {
    /// Annihilator exponents sorted descending: the invariant factors of the
    /// subquotient as an abelian group over `R`.
    pub fn factors_desc(&self) -> Vec<usize> {
        let mut out = self.exps.clone();
        out.sort_unstable_by(|a, b| b.cmp(a));
        out
    }

    /// Coordinates of `v` (a lattice representative) over the generators:
    /// `v ≡ Σ cᵢ gᵢ` modulo the denominator. `None` if `v` is not in
    /// `span(Z) + relations`.
    pub fn express(&self, ring: &R, v: &[R::Elem]) -> Option<Vec<R::Elem>> {
        let sol = solve(ring, &self.z_aug_snf, v)?;
        let y: Vec<R::Elem> = sol[..self.num_z].to_vec();
        let w = mat_apply(ring, &self.rel_p, &y);
        Some(
            self.kept
                .iter()
                .zip(&self.exps)
                .map(|(&i, &e)| ring.reduce_mod_p_pow(&w[i], e))
                .collect(),
        )
    }
}

/// Present `span(z_gens) / (span(b_gens) + ambient relations)`.
///
/// `z_gens` columns must contain `b_gens` columns and the ambient relations
/// in their span (this is asserted); both are lattice representatives over
/// the ambient `⊕_j R/p^{amb_exps_j}`.
pub fn subquotient<R: LocalRing>(
    ring: &R,
    amb_exps: &[usize],
    z_gens: &Mat<R::Elem>,
    b_gens: &Mat<R::Elem>,
) -> Subquotient<R> {
    let dim = amb_exps.len();
    assert_eq!(z_gens.rows(), dim);
    assert_eq!(b_gens.rows(), dim);
    let t = z_gens.cols();
    let amb_rel = relation_mat(ring, amb_exps);
    let z_aug = z_gens.hcat(&amb_rel);
    let z_aug_snf = smith(ring, &z_aug);

    // denominator columns written in Z-coordinates
    let mut rel_cols: Vec<Vec<R::Elem>> = Vec::new();
    let denom = b_gens.hcat(&amb_rel);
    for j in 0..denom.cols() {
        let b = denom.col(j);
        let sol = solve(ring, &z_aug_snf, &b)
            .expect("denominator must lie in the span of the numerator generators");
        rel_cols.push(sol[..t].to_vec());
    }
    // syzygies of the Z generators inside the presented ambient module
    let syz = kernel_lattice(ring, &z_aug);
    for j in 0..syz.cols() {
        rel_cols.push((0..t).map(|i| syz.at(i, j).clone()).collect());
    }
    let rel = Mat::from_cols(t, rel_cols);
    let rel_snf = smith(ring, &rel);

    let nil = ring.nil_exp();
    let mut kept = Vec::new();
    let mut exps = Vec::new();
    for i in 0..t {
        let c = rel_snf.diag.get(i).copied().unwrap_or(nil).min(nil);
        if c > 0 {
            kept.push(i);
            exps.push(c);
        }
    }
    let gen_cols: Vec<Vec<R::Elem>> = kept
        .iter()
        .map(|&i| {
            let coeffs = rel_snf.p_inv.col(i);
            mat_apply(ring, z_gens, &coeffs)
        })
        .collect();
    let gens = Mat::from_cols(dim, gen_cols);

    Subquotient {
        amb_exps: amb_exps.to_vec(),
        exps,
        gens,
        num_z: t,
        z_aug_snf,
        rel_p: rel_snf.p,
        kept,
    }
}

/// Full-module generators (the standard lattice basis) as a matrix.
pub fn ambient_gens<R: LocalRing>(ring: &R, dim: usize) -> Mat<R::Elem> {
    mat_identity(ring, dim)
}
