//! Truncated p-typical Witt vectors `W_n(F_q)`.
//!
//! Ring operations evaluate the universal Witt polynomials on integral lifts:
//! coordinates are lifted to `O = ℤ[t]/(m̃(t))` (`m̃` the monic integer lift
//! of the field modulus), the ghost-component recursion
//! `ghost_m(x) = Σ_{i≤m} p^i x_i^{p^{m-i}}` is solved for the result
//! coordinates with all known-integral divisions performed exactly, and the
//! results are reduced mod p. This computes the same values as expanding the
//! universal polynomials symbolically (see [`crate::wittpoly`], which the
//! test-suite checks against this path on exhaustive grids) without their
//! doubly-exponential term growth.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::fq::{FieldDesc, FqElem};

/// Default cap for the Witt length; coordinate values in the ghost recursion
/// grow like `p^{p^{n-1}}`.
pub const DEFAULT_WITT_CAP: usize = 8;

/// An element of `W_n(F_q)`: exactly `n` coordinates in `F_q`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct WittVec {
    field: FieldDesc,
    n: usize,
    coords: Vec<FqElem>,
}

impl WittVec {
    pub fn new(field: FieldDesc, coords: Vec<FqElem>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::Shape(String::from("Witt length must be >= 1")));
        }
        if coords.iter().any(|c| c.field() != &field) {
            return Err(Error::Shape(String::from(
                "coordinate field differs from Witt ring field",
            )));
        }
        let n = coords.len();
        Ok(WittVec { field, n, coords })
    }

    pub fn zero(field: &FieldDesc, n: usize) -> Self {
        WittVec {
            field: field.clone(),
            n,
            coords: vec![field.zero(); n],
        }
    }

    pub fn one(field: &FieldDesc, n: usize) -> Self {
        Self::teichmuller(&field.one(), n)
    }

    /// Teichmüller lift `τ(a) = (a, 0, …, 0)`.
    pub fn teichmuller(a: &FqElem, n: usize) -> Self {
        let field = a.field().clone();
        let mut coords = vec![field.zero(); n];
        coords[0] = a.clone();
        WittVec { field, n, coords }
    }

    pub fn field(&self) -> &FieldDesc {
        &self.field
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn coords(&self) -> &[FqElem] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    /// Index of the first nonzero coordinate, or `n` for zero. This equals
    /// the p-adic valuation: `p^v W_n = V^v W_n` is exactly the set of
    /// vectors whose first `v` coordinates vanish.
    pub fn valuation(&self) -> usize {
        self.coords
            .iter()
            .position(|c| !c.is_zero())
            .unwrap_or(self.n)
    }

    pub fn is_unit(&self) -> bool {
        !self.coords[0].is_zero()
    }

    fn check_compatible(&self, other: &WittVec) -> Result<()> {
        if self.field != other.field || self.n != other.n {
            return Err(Error::Shape(String::from(
                "Witt vectors of different rings",
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &WittVec) -> Result<WittVec> {
        self.check_compatible(other)?;
        let ring = LiftRing::new(&self.field);
        let x = ring.lift_all(&self.coords);
        let y = ring.lift_all(&other.coords);
        let ghosts: Vec<_> = (0..self.n)
            .map(|m| ring.o_add(&ring.ghost(&x, m), &ring.ghost(&y, m)))
            .collect();
        Ok(self.solve_ghosts(&ring, ghosts))
    }

    pub fn neg(&self) -> WittVec {
        let ring = LiftRing::new(&self.field);
        let x = ring.lift_all(&self.coords);
        let ghosts: Vec<_> = (0..self.n).map(|m| ring.o_neg(&ring.ghost(&x, m))).collect();
        self.solve_ghosts(&ring, ghosts)
    }

    pub fn sub(&self, other: &WittVec) -> Result<WittVec> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &WittVec) -> Result<WittVec> {
        self.check_compatible(other)?;
        let ring = LiftRing::new(&self.field);
        let x = ring.lift_all(&self.coords);
        let y = ring.lift_all(&other.coords);
        let ghosts: Vec<_> = (0..self.n)
            .map(|m| ring.o_mul(&ring.ghost(&x, m), &ring.ghost(&y, m)))
            .collect();
        Ok(self.solve_ghosts(&ring, ghosts))
    }

    /// Solve `ghost_m(s) = g_m` for the coordinates `s_m`. The divisions are
    /// exact whenever the ghost family comes from an integral polynomial
    /// identity, which is the case for sums, products and negations.
    fn solve_ghosts(&self, ring: &LiftRing, ghosts: Vec<Vec<BigInt>>) -> WittVec {
        let mut exact: Vec<Vec<BigInt>> = Vec::with_capacity(self.n);
        let mut coords = Vec::with_capacity(self.n);
        for (m, g) in ghosts.iter().enumerate() {
            let mut num = g.clone();
            for (i, s) in exact.iter().enumerate() {
                let pw = ring.o_pow(s, ring.p.pow((m - i) as u32));
                let term = ring.o_scale(&pw, &BigInt::from(ring.p).pow((i) as u32));
                num = ring.o_sub(&num, &term);
            }
            let s_m = ring.o_div_exact_pow_p(&num, m);
            coords.push(ring.reduce(&self.field, &s_m));
            exact.push(s_m);
        }
        WittVec {
            field: self.field.clone(),
            n: self.n,
            coords,
        }
    }

    /// Coordinate-wise `x ↦ x^{p^s}`; a ring automorphism, invertible for
    /// any `s` because the residue field is perfect.
    pub fn sigma(&self, s: i64) -> WittVec {
        let coords = self.coords.iter().map(|c| c.frobenius_iter(s)).collect();
        WittVec {
            field: self.field.clone(),
            n: self.n,
            coords,
        }
    }

    /// `V(x_0, …, x_{n-1}) = (0, x_0, …, x_{n-2})`.
    pub fn verschiebung(&self) -> WittVec {
        let mut coords = vec![self.field.zero()];
        coords.extend_from_slice(&self.coords[..self.n - 1]);
        WittVec {
            field: self.field.clone(),
            n: self.n,
            coords,
        }
    }

    /// `p·x`, definitionally `x` added to itself `p` times. The identity
    /// `p·x = V(σ(x))` holds in `W_n(k)` for perfect `k` and is checked by
    /// the test-suite.
    pub fn p_mult(&self) -> WittVec {
        self.scalar_mul(self.field.p() as u128)
    }

    /// `k·x` by double-and-add.
    pub fn scalar_mul(&self, mut k: u128) -> WittVec {
        let mut acc = WittVec::zero(&self.field, self.n);
        let mut base = self.clone();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.add(&base).expect("same ring");
            }
            base = base.add(&base).expect("same ring");
            k >>= 1;
        }
        acc
    }

    /// `p^e · 1 = V^e(1)`, in closed form.
    pub fn p_pow(field: &FieldDesc, n: usize, e: usize) -> WittVec {
        let mut coords = vec![field.zero(); n];
        if e < n {
            coords[e] = field.one();
        }
        WittVec {
            field: field.clone(),
            n,
            coords,
        }
    }

    /// First `m` coordinates: the image under `W_n ↠ W_n/p^m ≅ W_m`.
    pub fn truncate(&self, m: usize) -> WittVec {
        assert!(m >= 1 && m <= self.n);
        WittVec {
            field: self.field.clone(),
            n: m,
            coords: self.coords[..m].to_vec(),
        }
    }

    /// Zero-pad to length `m >= n`; a section of the truncation.
    pub fn zero_pad(&self, m: usize) -> WittVec {
        assert!(m >= self.n);
        let mut coords = self.coords.clone();
        coords.resize(m, self.field.zero());
        WittVec {
            field: self.field.clone(),
            n: m,
            coords,
        }
    }

    /// Zero all coordinates from index `m` on (canonical representative of
    /// the class mod `p^m`, kept at length `n`).
    pub fn clear_from(&self, m: usize) -> WittVec {
        let mut coords = self.coords.clone();
        for c in coords.iter_mut().skip(m) {
            *c = self.field.zero();
        }
        WittVec {
            field: self.field.clone(),
            n: self.n,
            coords,
        }
    }

    /// Write `x = p^v · u` with `u` a unit and return `u` (canonically, with
    /// the coordinates beyond `n - v` set to zero). Returns `1` for zero.
    pub fn unit_part(&self) -> WittVec {
        let v = self.valuation();
        if v >= self.n {
            return WittVec::one(&self.field, self.n);
        }
        let mut coords: Vec<FqElem> = self.coords[v..].to_vec();
        coords.resize(self.n, self.field.zero());
        let shifted = WittVec {
            field: self.field.clone(),
            n: self.n,
            coords,
        };
        shifted.sigma(-(v as i64))
    }

    /// Inverse of a unit by Newton iteration `x ← x(2 - wx)`, which doubles
    /// the p-adic accuracy each step.
    pub fn inv_unit(&self) -> Result<WittVec> {
        if !self.is_unit() {
            return Err(Error::Shape(String::from("not a unit in W_n")));
        }
        let inv0 = self.coords[0].inv().expect("unit has invertible x_0");
        let mut x = WittVec::teichmuller(&inv0, self.n);
        let two = WittVec::one(&self.field, self.n)
            .add(&WittVec::one(&self.field, self.n))
            .expect("same ring");
        let mut k = 1usize;
        while k < self.n {
            let wx = self.mul(&x).expect("same ring");
            let corr = two.sub(&wx).expect("same ring");
            x = x.mul(&corr).expect("same ring");
            k *= 2;
        }
        Ok(x)
    }

    /// Expand `x` in the Teichmüller basis: the unique `(c_1, …, c_f)`,
    /// `c_m ∈ ℤ/p^n`, with `x = Σ c_m · τ(x^{m-1})` for the polynomial basis
    /// of `F_q` over `F_p`. Inverse of [`WittVec::from_zpn_coords`].
    pub fn to_zpn_coords(&self) -> Vec<u64> {
        let p = self.field.p();
        let f = self.field.f();
        let mut out = vec![0u64; f];
        let mut cur = self.clone();
        let mut pk = 1u64;
        for k in 0..self.n {
            let digits: Vec<u64> = cur.coords()[0].coeffs().to_vec();
            for (m, d) in digits.iter().enumerate() {
                out[m] += d * pk;
            }
            if k + 1 == self.n {
                break;
            }
            let len = cur.n;
            let mut corr = WittVec::zero(&self.field, len);
            for (m, d) in digits.iter().enumerate() {
                if *d == 0 {
                    continue;
                }
                let basis = WittVec::teichmuller(&self.field.monomial(m), len);
                corr = corr.add(&basis.scalar_mul(*d as u128)).expect("same ring");
            }
            let diff = cur.sub(&corr).expect("same ring");
            debug_assert!(diff.coords()[0].is_zero());
            // diff = V(y) = p · σ^{-1}(y): peel one level
            let coords = diff.coords()[1..].to_vec();
            cur = WittVec {
                field: self.field.clone(),
                n: len - 1,
                coords,
            }
            .sigma(-1);
            pk *= p;
        }
        out
    }

    /// `Σ c_m · τ(x^{m-1})` for coefficients `c_m ∈ ℤ/p^n`.
    pub fn from_zpn_coords(field: &FieldDesc, n: usize, coords: &[u64]) -> Result<WittVec> {
        if coords.len() != field.f() {
            return Err(Error::Shape(format!(
                "expected {} Teichmüller-basis coordinates, got {}",
                field.f(),
                coords.len()
            )));
        }
        let mut acc = WittVec::zero(field, n);
        for (m, c) in coords.iter().enumerate() {
            if *c == 0 {
                continue;
            }
            let basis = WittVec::teichmuller(&field.monomial(m), n);
            acc = acc.add(&basis.scalar_mul(*c as u128))?;
        }
        Ok(acc)
    }

    /// All `q^n` elements. Desk scale only.
    pub fn elements(field: &FieldDesc, n: usize) -> Vec<WittVec> {
        let fq_elems = field.elements();
        let q = fq_elems.len();
        let total = q.checked_pow(n as u32).expect("enumeration too large");
        let mut out = Vec::with_capacity(total);
        for idx in 0..total {
            let mut rest = idx;
            let mut coords = Vec::with_capacity(n);
            for _ in 0..n {
                coords.push(fq_elems[rest % q].clone());
                rest /= q;
            }
            out.push(WittVec {
                field: field.clone(),
                n,
                coords,
            });
        }
        out
    }
}

/// The lift ring `O = ℤ[t]/(m̃(t))`: a free `ℤ`-module of rank `f` in which
/// the ghost recursion runs exactly.
struct LiftRing {
    p: u64,
    f: usize,
    modulus: Vec<BigInt>,
}

impl LiftRing {
    fn new(field: &FieldDesc) -> Self {
        LiftRing {
            p: field.p(),
            f: field.f(),
            modulus: field.modulus().iter().map(|&c| BigInt::from(c)).collect(),
        }
    }

    fn lift(&self, a: &FqElem) -> Vec<BigInt> {
        a.coeffs().iter().map(|&c| BigInt::from(c)).collect()
    }

    fn lift_all(&self, coords: &[FqElem]) -> Vec<Vec<BigInt>> {
        coords.iter().map(|c| self.lift(c)).collect()
    }

    fn o_zero(&self) -> Vec<BigInt> {
        vec![BigInt::zero(); self.f]
    }

    fn o_add(&self, a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
        a.iter().zip(b).map(|(x, y)| x + y).collect()
    }

    fn o_sub(&self, a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
        a.iter().zip(b).map(|(x, y)| x - y).collect()
    }

    fn o_neg(&self, a: &[BigInt]) -> Vec<BigInt> {
        a.iter().map(|x| -x).collect()
    }

    fn o_scale(&self, a: &[BigInt], c: &BigInt) -> Vec<BigInt> {
        a.iter().map(|x| x * c).collect()
    }

    fn o_mul(&self, a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
        let mut raw = vec![BigInt::zero(); 2 * self.f];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                raw[i + j] += x * y;
            }
        }
        // t^f = -Σ m_i t^i
        for k in (self.f..raw.len()).rev() {
            if raw[k].is_zero() {
                continue;
            }
            let lead = core::mem::take(&mut raw[k]);
            for (i, m) in self.modulus.iter().enumerate() {
                let sub = &lead * m;
                raw[k - self.f + i] -= sub;
            }
        }
        raw.truncate(self.f);
        raw
    }

    fn o_pow(&self, a: &[BigInt], mut e: u64) -> Vec<BigInt> {
        let mut base = a.to_vec();
        let mut acc = self.o_zero();
        acc[0] = BigInt::from(1);
        while e > 0 {
            if e & 1 == 1 {
                acc = self.o_mul(&acc, &base);
            }
            base = self.o_mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    /// `ghost_m(x) = Σ_{i≤m} p^i x_i^{p^{m-i}}`.
    fn ghost(&self, lifts: &[Vec<BigInt>], m: usize) -> Vec<BigInt> {
        let mut acc = self.o_zero();
        for (i, lift) in lifts.iter().enumerate().take(m + 1) {
            let pw = self.o_pow(lift, self.p.pow((m - i) as u32));
            let term = self.o_scale(&pw, &BigInt::from(self.p).pow(i as u32));
            acc = self.o_add(&acc, &term);
        }
        acc
    }

    fn o_div_exact_pow_p(&self, a: &[BigInt], m: usize) -> Vec<BigInt> {
        if m == 0 {
            return a.to_vec();
        }
        let d = BigInt::from(self.p).pow(m as u32);
        a.iter()
            .map(|x| {
                let (q, r) = (x / &d, x % &d);
                assert!(r.is_zero(), "ghost recursion division must be exact");
                q
            })
            .collect()
    }

    fn reduce(&self, field: &FieldDesc, a: &[BigInt]) -> FqElem {
        let p = BigInt::from(self.p);
        let coeffs: Vec<u64> = a
            .iter()
            .map(|x| {
                let mut r = x % &p;
                if r.is_negative() {
                    r += &p;
                }
                u64::try_from(r).expect("residue fits u64")
            })
            .collect();
        field.element(&coeffs).expect("reduced coefficients")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(field: &FieldDesc, vals: &[u64]) -> WittVec {
        let coords = vals.iter().map(|&v| field.from_u64(v)).collect();
        WittVec::new(field.clone(), coords).unwrap()
    }

    #[test]
    fn one_plus_one_in_w2_f2() {
        // 1 + 1 = 2 = V(F(1)) = (0, 1)
        let f2 = FieldDesc::new(2, 1).unwrap();
        let one = w(&f2, &[1, 0]);
        assert_eq!(one.add(&one).unwrap(), w(&f2, &[0, 1]));
    }

    #[test]
    fn two_in_w3_f2() {
        // p·1 has Witt coordinates (0, 1, 0)
        let f2 = FieldDesc::new(2, 1).unwrap();
        let one = WittVec::one(&f2, 3);
        assert_eq!(one.p_mult(), w(&f2, &[0, 1, 0]));
    }

    #[test]
    fn additive_identity_and_negation() {
        let f9 = FieldDesc::new(3, 2).unwrap();
        for x in WittVec::elements(&f9, 2) {
            let z = WittVec::zero(&f9, 2);
            assert_eq!(x.add(&z).unwrap(), x);
            assert!(x.add(&x.neg()).unwrap().is_zero());
        }
    }

    #[test]
    fn teichmuller_is_multiplicative() {
        let f4 = FieldDesc::new(2, 2).unwrap();
        for a in f4.elements() {
            for b in f4.elements() {
                let lhs = WittVec::teichmuller(&a, 3)
                    .mul(&WittVec::teichmuller(&b, 3))
                    .unwrap();
                let rhs = WittVec::teichmuller(&a.mul(&b).unwrap(), 3);
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn p_mult_is_v_sigma_on_w2_f4() {
        let f4 = FieldDesc::new(2, 2).unwrap();
        for x in WittVec::elements(&f4, 2) {
            assert_eq!(x.p_mult(), x.sigma(1).verschiebung());
        }
    }

    #[test]
    fn sigma_is_ring_automorphism() {
        let f4 = FieldDesc::new(2, 2).unwrap();
        let xs = WittVec::elements(&f4, 2);
        for x in &xs {
            assert_eq!(x.sigma(1).sigma(-1), *x);
            for y in &xs {
                assert_eq!(
                    x.mul(y).unwrap().sigma(1),
                    x.sigma(1).mul(&y.sigma(1)).unwrap()
                );
            }
        }
        // f = 1: σ is the identity
        let f3 = FieldDesc::new(3, 1).unwrap();
        for x in WittVec::elements(&f3, 3) {
            assert_eq!(x.sigma(1), x);
        }
    }

    #[test]
    fn w3_f2_is_z8() {
        let f2 = FieldDesc::new(2, 1).unwrap();
        let one = WittVec::one(&f2, 3);
        let mut acc = WittVec::zero(&f2, 3);
        let mut seen = alloc::collections::BTreeSet::new();
        for _ in 0..8 {
            assert!(seen.insert(acc.clone()));
            acc = acc.add(&one).unwrap();
        }
        // 8·1 = 0: the ring is cyclic of order 8
        assert!(acc.is_zero());
    }

    #[test]
    fn zpn_coords_roundtrip() {
        for (p, f, n) in [(2, 2, 2), (2, 1, 3), (3, 2, 2)] {
            let field = FieldDesc::new(p, f).unwrap();
            for x in WittVec::elements(&field, n) {
                let coords = x.to_zpn_coords();
                let back = WittVec::from_zpn_coords(&field, n, &coords).unwrap();
                assert_eq!(back, x, "roundtrip failed for {x:?}");
                let pn = p.pow(n as u32);
                assert!(coords.iter().all(|&c| c < pn));
            }
        }
    }

    #[test]
    fn unit_inverse() {
        let f4 = FieldDesc::new(2, 2).unwrap();
        for x in WittVec::elements(&f4, 3) {
            if x.is_unit() {
                let inv = x.inv_unit().unwrap();
                assert_eq!(x.mul(&inv).unwrap(), WittVec::one(&f4, 3));
            } else {
                assert!(x.inv_unit().is_err());
            }
        }
    }

    #[test]
    fn unit_part_times_p_pow_recovers() {
        let f9 = FieldDesc::new(3, 2).unwrap();
        for x in WittVec::elements(&f9, 2) {
            if x.is_zero() {
                continue;
            }
            let v = x.valuation();
            let u = x.unit_part();
            assert!(u.is_unit());
            let back = u.mul(&WittVec::p_pow(&f9, 2, v)).unwrap();
            assert_eq!(back, x);
        }
    }

    #[test]
    fn valuation_matches_p_divisibility() {
        let f2 = FieldDesc::new(2, 1).unwrap();
        // In W_3(F_2) ≅ ℤ/8: 2 = (0,1,0) has valuation 1, 4 = (0,0,1) has 2.
        let two = WittVec::one(&f2, 3).p_mult();
        assert_eq!(two.valuation(), 1);
        assert_eq!(two.p_mult().valuation(), 2);
        assert_eq!(WittVec::zero(&f2, 3).valuation(), 3);
    }

    #[test]
    fn shape_errors() {
        let f2 = FieldDesc::new(2, 1).unwrap();
        let f3 = FieldDesc::new(3, 1).unwrap();
        let a = WittVec::one(&f2, 2);
        let b = WittVec::one(&f3, 2);
        assert!(matches!(a.add(&b), Err(Error::Shape(_))));
        let c = WittVec::one(&f2, 3);
        assert!(matches!(a.add(&c), Err(Error::Shape(_))));
    }
}
