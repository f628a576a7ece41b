//! The residue field `F_q`, `q = p^f`, presented as `F_p[x]/(m(x))` for a
//! fixed monic irreducible `m` of degree `f`.
//!
//! The modulus for a given `(p, f)` is the lexicographically least monic
//! irreducible polynomial, where polynomials `x^f + c_{f-1}x^{f-1} + … + c_0`
//! are ordered by the integer value `Σ c_i p^i`. This makes serialized values
//! reproducible across runs and machines.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Hard cap on the extension degree; the exhaustive irreducibility check and
/// the exhaustive oracles in the test-suite are only meant for desk scale.
pub const MAX_EXTENSION_DEGREE: usize = 12;

/// Description of the base field `F_q = F_p[x]/(m)`.
///
/// `modulus` holds the non-leading coefficients `c_0, …, c_{f-1}` of the
/// monic modulus `m = x^f + c_{f-1} x^{f-1} + … + c_0`, each in `0..p`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct FieldDesc {
    p: u64,
    f: usize,
    modulus: Vec<u64>,
}

impl FieldDesc {
    /// Field with the canonical (lexicographically least) modulus.
    pub fn new(p: u64, f: usize) -> Result<Self> {
        check_prime(p)?;
        if f == 0 || f > MAX_EXTENSION_DEGREE {
            return Err(Error::Shape(format!(
                "extension degree {f} out of range 1..={MAX_EXTENSION_DEGREE}"
            )));
        }
        let modulus = least_irreducible(p, f);
        Ok(FieldDesc { p, f, modulus })
    }

    /// Field with an explicit modulus; verified irreducible by exhaustive
    /// trial division.
    pub fn with_modulus(p: u64, f: usize, modulus: Vec<u64>) -> Result<Self> {
        check_prime(p)?;
        if f == 0 || f > MAX_EXTENSION_DEGREE {
            return Err(Error::Shape(format!(
                "extension degree {f} out of range 1..={MAX_EXTENSION_DEGREE}"
            )));
        }
        if modulus.len() != f || modulus.iter().any(|&c| c >= p) {
            return Err(Error::Shape(String::from(
                "modulus must list f coefficients reduced mod p",
            )));
        }
        if !is_irreducible(p, &modulus) {
            return Err(Error::Shape(format!(
                "modulus {modulus:?} is reducible over F_{p}"
            )));
        }
        Ok(FieldDesc { p, f, modulus })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn f(&self) -> usize {
        self.f
    }

    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    /// `q = p^f`.
    pub fn order(&self) -> u128 {
        (self.p as u128).pow(self.f as u32)
    }

    pub fn zero(&self) -> FqElem {
        FqElem {
            field: self.clone(),
            coeffs: vec![0; self.f],
        }
    }

    pub fn one(&self) -> FqElem {
        self.from_u64(1)
    }

    /// The scalar `v mod p` as a constant polynomial.
    pub fn from_u64(&self, v: u64) -> FqElem {
        let mut coeffs = vec![0; self.f];
        coeffs[0] = v % self.p;
        FqElem {
            field: self.clone(),
            coeffs,
        }
    }

    /// The class of `x^k`, reduced. `x^0, …, x^{f-1}` form the polynomial
    /// basis of `F_q` over `F_p`.
    pub fn monomial(&self, k: usize) -> FqElem {
        let mut raw = vec![0u64; k + 1];
        raw[k] = 1;
        FqElem {
            field: self.clone(),
            coeffs: reduce_poly(self.p, &self.modulus, &raw),
        }
    }

    /// Build an element from little-endian polynomial coefficients.
    pub fn element(&self, coeffs: &[u64]) -> Result<FqElem> {
        if coeffs.len() > self.f {
            return Err(Error::Shape(format!(
                "{} coefficients for degree-{} field",
                coeffs.len(),
                self.f
            )));
        }
        let mut c = coeffs.to_vec();
        c.resize(self.f, 0);
        for v in &mut c {
            *v %= self.p;
        }
        Ok(FqElem {
            field: self.clone(),
            coeffs: c,
        })
    }

    /// All `q` elements, in lexicographic digit order. Desk scale only.
    pub fn elements(&self) -> Vec<FqElem> {
        let q = self.order() as usize;
        let mut out = Vec::with_capacity(q);
        for v in 0..q {
            let mut coeffs = vec![0u64; self.f];
            let mut rest = v as u64;
            for c in coeffs.iter_mut() {
                *c = rest % self.p;
                rest /= self.p;
            }
            out.push(FqElem {
                field: self.clone(),
                coeffs,
            });
        }
        out
    }
}

/// An element of `F_q`: polynomial residue with coefficients in `0..p`,
/// little-endian, of length exactly `f`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct FqElem {
    field: FieldDesc,
    coeffs: Vec<u64>,
}

impl FqElem {
    pub fn field(&self) -> &FieldDesc {
        &self.field
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    fn check_same_field(&self, other: &FqElem) -> Result<()> {
        if self.field != other.field {
            return Err(Error::Shape(String::from(
                "elements of different fields",
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &FqElem) -> Result<FqElem> {
        self.check_same_field(other)?;
        let p = self.field.p;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| (a + b) % p)
            .collect();
        Ok(FqElem {
            field: self.field.clone(),
            coeffs,
        })
    }

    pub fn neg(&self) -> FqElem {
        let p = self.field.p;
        let coeffs = self.coeffs.iter().map(|&a| (p - a) % p).collect();
        FqElem {
            field: self.field.clone(),
            coeffs,
        }
    }

    pub fn sub(&self, other: &FqElem) -> Result<FqElem> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &FqElem) -> Result<FqElem> {
        self.check_same_field(other)?;
        let p = self.field.p;
        let mut raw = vec![0u64; 2 * self.field.f];
        for (i, a) in self.coeffs.iter().enumerate() {
            if *a == 0 {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                raw[i + j] = (raw[i + j] + a * b) % p;
            }
        }
        Ok(FqElem {
            field: self.field.clone(),
            coeffs: reduce_poly(p, &self.field.modulus, &raw),
        })
    }

    pub fn pow(&self, mut e: u128) -> FqElem {
        let mut base = self.clone();
        let mut acc = self.field.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).expect("same field");
            }
            base = base.mul(&base).expect("same field");
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self) -> Option<FqElem> {
        if self.is_zero() {
            return None;
        }
        Some(self.pow(self.field.order() - 2))
    }

    /// The arithmetic Frobenius `x ↦ x^p`.
    pub fn frobenius(&self) -> FqElem {
        self.pow(self.field.p as u128)
    }

    /// `x ↦ x^{p^s}`; for `s < 0` the inverse Frobenius is realized as
    /// `x ↦ x^{p^{f-1}}` iterated, which is valid because `x^{p^f} = x`.
    pub fn frobenius_iter(&self, s: i64) -> FqElem {
        let f = self.field.f as i64;
        let steps = s.rem_euclid(f) as usize;
        let mut out = self.clone();
        for _ in 0..steps {
            out = out.frobenius();
        }
        out
    }
}

fn check_prime(p: u64) -> Result<()> {
    if p < 2 {
        return Err(Error::Shape(format!("{p} is not prime")));
    }
    let mut d = 2;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return Err(Error::Shape(format!("{p} is not prime")));
        }
        d += 1;
    }
    Ok(())
}

/// Reduce `raw` (little-endian, any length) modulo `x^f + Σ m_i x^i`.
fn reduce_poly(p: u64, modulus: &[u64], raw: &[u64]) -> Vec<u64> {
    let f = modulus.len();
    let mut work: Vec<u64> = raw.iter().map(|&c| c % p).collect();
    if work.len() < f {
        work.resize(f, 0);
    }
    // x^f = -Σ m_i x^i
    for k in (f..work.len()).rev() {
        let lead = work[k];
        if lead == 0 {
            continue;
        }
        work[k] = 0;
        for (i, &m) in modulus.iter().enumerate() {
            let sub = (lead * m) % p;
            work[k - f + i] = (work[k - f + i] + p - sub) % p;
        }
    }
    work.truncate(f);
    work
}

/// Exhaustive trial division by every monic polynomial of degree `1..=f/2`.
fn is_irreducible(p: u64, modulus: &[u64]) -> bool {
    let f = modulus.len();
    if f == 1 {
        return true;
    }
    let mut full = modulus.to_vec();
    full.push(1);
    for d in 1..=f / 2 {
        let count = (p as u128).pow(d as u32);
        for v in 0..count {
            // monic divisor candidate of degree d
            let mut g = vec![0u64; d + 1];
            let mut rest = v;
            for c in g.iter_mut().take(d) {
                *c = (rest % p as u128) as u64;
                rest /= p as u128;
            }
            g[d] = 1;
            if poly_rem_is_zero(p, &full, &g) {
                return false;
            }
        }
    }
    true
}

/// Whether monic `g` divides monic `h` over `F_p`.
fn poly_rem_is_zero(p: u64, h: &[u64], g: &[u64]) -> bool {
    let mut rem = h.to_vec();
    let dg = g.len() - 1;
    while rem.len() > dg {
        let lead = *rem.last().unwrap() % p;
        let k = rem.len() - 1;
        if lead != 0 {
            for (i, &gc) in g.iter().enumerate() {
                let idx = k - dg + i;
                rem[idx] = (rem[idx] + p - (lead * gc) % p) % p;
            }
        }
        rem.pop();
    }
    rem.iter().all(|&c| c % p == 0)
}

fn least_irreducible(p: u64, f: usize) -> Vec<u64> {
    let count = (p as u128).pow(f as u32);
    for v in 0..count {
        let mut modulus = vec![0u64; f];
        let mut rest = v;
        for c in modulus.iter_mut() {
            *c = (rest % p as u128) as u64;
            rest /= p as u128;
        }
        if is_irreducible(p, &modulus) {
            return modulus;
        }
    }
    unreachable!("an irreducible polynomial of each degree exists over F_p")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_moduli() {
        // F_4 = F_2[x]/(x^2 + x + 1), the only irreducible quadratic.
        let f4 = FieldDesc::new(2, 2).unwrap();
        assert_eq!(f4.modulus(), &[1, 1]);
        // F_9: x^2 + 1 is irreducible over F_3 and least in the ordering.
        let f9 = FieldDesc::new(3, 2).unwrap();
        assert_eq!(f9.modulus(), &[1, 0]);
        // F_25: x^2 + 2 (value 2) is the least irreducible over F_5.
        let f25 = FieldDesc::new(5, 2).unwrap();
        assert_eq!(f25.modulus(), &[2, 0]);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(FieldDesc::new(4, 1).is_err());
        assert!(FieldDesc::new(2, 0).is_err());
        // x^2 + 1 = (x+1)^2 over F_2
        assert!(FieldDesc::with_modulus(2, 2, vec![1, 0]).is_err());
    }

    #[test]
    fn f4_arithmetic() {
        let f4 = FieldDesc::new(2, 2).unwrap();
        let w = f4.monomial(1);
        // ω^2 = ω + 1
        let w2 = w.mul(&w).unwrap();
        assert_eq!(w2.coeffs(), &[1, 1]);
        // ω^3 = 1
        assert_eq!(w2.mul(&w).unwrap(), f4.one());
        // Frobenius swaps ω and ω^2 and fixes F_2.
        assert_eq!(w.frobenius(), w2);
        assert_eq!(f4.one().frobenius(), f4.one());
    }

    #[test]
    fn inverse_and_frobenius_inverse() {
        for (p, f) in [(2, 2), (3, 2), (5, 1), (3, 3)] {
            let fq = FieldDesc::new(p, f).unwrap();
            for x in fq.elements() {
                if x.is_zero() {
                    assert!(x.inv().is_none());
                } else {
                    assert_eq!(x.mul(&x.inv().unwrap()).unwrap(), fq.one());
                }
                // σ ∘ σ^{-1} = id
                assert_eq!(x.frobenius_iter(1).frobenius_iter(-1), x);
            }
        }
    }

    #[test]
    fn field_mismatch_is_shape_error() {
        let f4 = FieldDesc::new(2, 2).unwrap();
        let f9 = FieldDesc::new(3, 2).unwrap();
        assert!(matches!(
            f4.one().add(&f9.one()),
            Err(Error::Shape(_))
        ));
    }
}
