//! Universal Witt sum/product polynomials, computed exactly over `ℤ`.
//!
//! `S_m, P_m ∈ ℤ[x_0..x_{n-1}, y_0..y_{n-1}]` are determined by the ghost
//! recursion `ghost_m(S) = ghost_m(x) + ghost_m(y)` (resp. the product),
//! with `ghost_m(x) = Σ_{i≤m} p^i x_i^{p^{m-i}}`. All divisions by `p^m` in
//! the recursion are exact over `ℤ`; this is asserted, not assumed.
//!
//! Term counts grow doubly exponentially in `n`, hence the cap. The Witt
//! ring arithmetic in [`crate::witt`] evaluates the same recursion on
//! integral lifts instead of expanding these polynomials; the test-suite
//! pins the two paths against each other.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::witt::DEFAULT_WITT_CAP;

/// Maximum number of variables a sparse polynomial can carry (2 · cap).
pub const MAX_VARS: usize = 2 * DEFAULT_WITT_CAP;

type Monomial = [u32; MAX_VARS];

/// Sparse multivariate polynomial over `ℤ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntPoly {
    nvars: usize,
    terms: BTreeMap<Monomial, BigInt>,
}

impl IntPoly {
    pub fn zero(nvars: usize) -> Self {
        assert!(nvars <= MAX_VARS);
        IntPoly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: BigInt) -> Self {
        let mut poly = Self::zero(nvars);
        if !c.is_zero() {
            poly.terms.insert([0; MAX_VARS], c);
        }
        poly
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        assert!(i < nvars);
        let mut mono = [0u32; MAX_VARS];
        mono[i] = 1;
        let mut poly = Self::zero(nvars);
        poly.terms.insert(mono, BigInt::from(1));
        poly
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigInt)> {
        self.terms.iter()
    }

    pub fn add(&self, other: &IntPoly) -> IntPoly {
        let mut terms = self.terms.clone();
        for (m, c) in &other.terms {
            let entry = terms.entry(*m).or_insert_with(BigInt::zero);
            *entry += c;
            if entry.is_zero() {
                terms.remove(m);
            }
        }
        IntPoly {
            nvars: self.nvars.max(other.nvars),
            terms,
        }
    }

    pub fn neg(&self) -> IntPoly {
        IntPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, c)| (*m, -c)).collect(),
        }
    }

    pub fn sub(&self, other: &IntPoly) -> IntPoly {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &BigInt) -> IntPoly {
        if c.is_zero() {
            return IntPoly::zero(self.nvars);
        }
        IntPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, k)| (*m, k * c)).collect(),
        }
    }

    pub fn mul(&self, other: &IntPoly) -> IntPoly {
        let mut terms: BTreeMap<Monomial, BigInt> = BTreeMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let mut m = *ma;
                for (dst, src) in m.iter_mut().zip(mb.iter()) {
                    *dst = dst.checked_add(*src).expect("monomial exponent overflow");
                }
                let entry = terms.entry(m).or_insert_with(BigInt::zero);
                *entry += ca * cb;
                if entry.is_zero() {
                    terms.remove(&m);
                }
            }
        }
        IntPoly {
            nvars: self.nvars.max(other.nvars),
            terms,
        }
    }

    pub fn pow(&self, mut e: u64) -> IntPoly {
        let mut base = self.clone();
        let mut acc = IntPoly::constant(self.nvars, BigInt::from(1));
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    /// Divide every coefficient by `d`, asserting exactness.
    pub fn div_exact(&self, d: &BigInt) -> IntPoly {
        IntPoly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| {
                    let (q, r) = (c / d, c % d);
                    assert!(r.is_zero(), "inexact division in Witt recursion");
                    (*m, q)
                })
                .collect(),
        }
    }

    /// Coefficients reduced into `0..p`, zero terms dropped.
    pub fn reduce_mod(&self, p: u64) -> IntPoly {
        let pb = BigInt::from(p);
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            let mut r = c % &pb;
            if r.is_negative() {
                r += &pb;
            }
            if !r.is_zero() {
                terms.insert(*m, r);
            }
        }
        IntPoly {
            nvars: self.nvars,
            terms,
        }
    }

    pub fn eval(&self, vals: &[BigInt]) -> BigInt {
        assert!(vals.len() >= self.nvars);
        let mut acc = BigInt::zero();
        for (m, c) in &self.terms {
            let mut term = c.clone();
            for (i, &e) in m.iter().enumerate().take(self.nvars) {
                if e > 0 {
                    term *= vals[i].pow(e);
                }
            }
            acc += term;
        }
        acc
    }
}

/// The first `n` universal sum and product polynomials for the prime `p`,
/// over `ℤ`, in the variables `x_0..x_{n-1}, y_0..y_{n-1}` (indices
/// `0..n` and `n..2n`).
#[derive(Debug, Clone)]
pub struct WittPolys {
    pub p: u64,
    pub n: usize,
    pub sum: Vec<IntPoly>,
    pub prod: Vec<IntPoly>,
}

/// Ghost polynomial `ghost_m` in the block of variables starting at
/// `offset` (so `offset = 0` gives `ghost_m(x)`, `offset = n` gives
/// `ghost_m(y)`).
pub fn ghost_poly(p: u64, nvars: usize, offset: usize, m: usize) -> IntPoly {
    let mut acc = IntPoly::zero(nvars);
    for i in 0..=m {
        let xi = IntPoly::var(nvars, offset + i);
        let pw = xi.pow(p.pow((m - i) as u32));
        acc = acc.add(&pw.scale(&BigInt::from(p).pow(i as u32)));
    }
    acc
}

pub fn universal_witt_polys(p: u64, n: usize) -> Result<WittPolys> {
    universal_witt_polys_capped(p, n, DEFAULT_WITT_CAP)
}

pub fn universal_witt_polys_capped(p: u64, n: usize, cap: usize) -> Result<WittPolys> {
    if n == 0 {
        return Err(Error::Shape(format!("Witt length must be >= 1, got {n}")));
    }
    if n > cap || cap > DEFAULT_WITT_CAP {
        return Err(Error::PrecisionLimit(format!(
            "universal Witt polynomials requested for n = {n}, cap = {cap}"
        )));
    }
    let nvars = 2 * n;
    let mut sum: Vec<IntPoly> = Vec::with_capacity(n);
    let mut prod: Vec<IntPoly> = Vec::with_capacity(n);
    for m in 0..n {
        let gx = ghost_poly(p, nvars, 0, m);
        let gy = ghost_poly(p, nvars, n, m);
        let mut sum_num = gx.add(&gy);
        let mut prod_num = gx.mul(&gy);
        for i in 0..m {
            let pi = BigInt::from(p).pow(i as u32);
            let e = p.pow((m - i) as u32);
            sum_num = sum_num.sub(&sum[i].pow(e).scale(&pi));
            prod_num = prod_num.sub(&prod[i].pow(e).scale(&pi));
        }
        let pm = BigInt::from(p).pow(m as u32);
        sum.push(sum_num.div_exact(&pm));
        prod.push(prod_num.div_exact(&pm));
    }
    Ok(WittPolys { p, n, sum, prod })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mono(pairs: &[(usize, u32)]) -> Monomial {
        let mut m = [0u32; MAX_VARS];
        for &(i, e) in pairs {
            m[i] = e;
        }
        m
    }

    #[test]
    fn s0_is_x0_plus_y0() {
        for p in [2u64, 3, 5] {
            let polys = universal_witt_polys(p, 2).unwrap();
            let expect = IntPoly::var(4, 0).add(&IntPoly::var(4, 2));
            assert_eq!(polys.sum[0], expect);
        }
    }

    #[test]
    fn s1_mod_2_matches_closed_form() {
        // Over ℤ: S_1 = x_1 + y_1 - x_0 y_0; mod 2 the mixed term flips sign.
        let polys = universal_witt_polys(2, 2).unwrap();
        let s1 = &polys.sum[1];
        assert_eq!(s1.num_terms(), 3);
        let reduced = s1.reduce_mod(2);
        let mixed = mono(&[(0, 1), (2, 1)]);
        assert_eq!(reduced.terms.get(&mixed), Some(&BigInt::from(1)));
        assert_eq!(
            reduced.terms.get(&mono(&[(1, 1)])),
            Some(&BigInt::from(1))
        );
        assert_eq!(
            reduced.terms.get(&mono(&[(3, 1)])),
            Some(&BigInt::from(1))
        );
    }

    #[test]
    fn ghost_identity_symbolically_small() {
        // ghost_m(S(x,y)) = ghost_m(x) + ghost_m(y) as polynomials over ℤ.
        for p in [2u64, 3] {
            let n = 3;
            let polys = universal_witt_polys(p, n).unwrap();
            for m in 0..n {
                let mut lhs = IntPoly::zero(2 * n);
                for i in 0..=m {
                    let pw = polys.sum[i].pow(p.pow((m - i) as u32));
                    lhs = lhs.add(&pw.scale(&BigInt::from(p).pow(i as u32)));
                }
                let rhs = ghost_poly(p, 2 * n, 0, m).add(&ghost_poly(p, 2 * n, n, m));
                assert!(lhs.sub(&rhs).is_zero(), "p={p} m={m}");
            }
        }
    }

    #[test]
    fn cap_is_enforced() {
        assert!(matches!(
            universal_witt_polys_capped(2, 5, 4),
            Err(Error::PrecisionLimit(_))
        ));
        assert!(universal_witt_polys(2, 1).is_ok());
    }
}
