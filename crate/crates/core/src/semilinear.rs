//! Additive maps between components of graded modules over `W_n(F_q)`.
//!
//! A component is `⊕_j W_{a_j}(F_q)`, `a_j ≤ n`, with `W_{a}` realized as
//! `W_n/p^a`; elements are tuples of length-`n` Witt vectors kept canonical
//! (coordinates from index `a_j` on are zero). A [`SemilinearMap`] is a
//! matrix of `W_n`-entries together with a twist `s`: it acts by
//! `x ↦ A·σ^s(x)`. `F` carries twist `+1`, `V` twist `-1`, differentials
//! twist `0`. Composition follows `(A,s)∘(B,t) = (A·σ^s(B), s+t)`.
//!
//! Entry `(l, j)` maps `W_{a_j} → W_{b_l}` and is well-defined exactly when
//! its valuation is at least `b_l - a_j`; constructors enforce this and
//! canonicalize entries mod `p^{b_l}`.

use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::fq::FieldDesc;
use crate::linalg::Mat;
use crate::witt::WittVec;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SemilinearMap {
    field: FieldDesc,
    n: usize,
    src: Vec<usize>,
    tgt: Vec<usize>,
    twist: i64,
    entries: Mat<WittVec>,
}

impl SemilinearMap {
    pub fn new(
        field: FieldDesc,
        n: usize,
        src: Vec<usize>,
        tgt: Vec<usize>,
        twist: i64,
        entries: Mat<WittVec>,
    ) -> Result<Self> {
        if entries.rows() != tgt.len() || entries.cols() != src.len() {
            return Err(Error::Shape(String::from(
                "matrix shape does not match component shapes",
            )));
        }
        if src.iter().chain(tgt.iter()).any(|&a| a == 0 || a > n) {
            return Err(Error::Shape(String::from(
                "summand lengths must lie in 1..=n",
            )));
        }
        for i in 0..entries.rows() {
            for j in 0..entries.cols() {
                let e = entries.at(i, j);
                if e.field() != &field || e.len() != n {
                    return Err(Error::Shape(String::from(
                        "matrix entry from a different Witt ring",
                    )));
                }
            }
        }
        let mut map = SemilinearMap {
            field,
            n,
            src,
            tgt,
            twist,
            entries,
        };
        map.canonicalize();
        map.check_annihilators()?;
        Ok(map)
    }

    fn canonicalize(&mut self) {
        let tgt = self.tgt.clone();
        for (l, &b) in tgt.iter().enumerate() {
            for j in 0..self.src.len() {
                let e = self.entries.at(l, j).clear_from(b);
                self.entries.set(l, j, e);
            }
        }
    }

    fn check_annihilators(&self) -> Result<()> {
        for (l, &b) in self.tgt.iter().enumerate() {
            for (j, &a) in self.src.iter().enumerate() {
                let needed = b.saturating_sub(a);
                if self.entries.at(l, j).valuation() < needed {
                    return Err(Error::Shape(String::from(
                        "matrix entry does not respect component annihilators",
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn zero(
        field: &FieldDesc,
        n: usize,
        src: Vec<usize>,
        tgt: Vec<usize>,
        twist: i64,
    ) -> Self {
        let entries = Mat::filled(tgt.len(), src.len(), WittVec::zero(field, n));
        SemilinearMap {
            field: field.clone(),
            n,
            src,
            tgt,
            twist,
            entries,
        }
    }

    /// `c · σ^twist` on a single component.
    pub fn scalar(
        field: &FieldDesc,
        n: usize,
        shape: Vec<usize>,
        twist: i64,
        c: &WittVec,
    ) -> Result<Self> {
        let dim = shape.len();
        let entries = Mat::from_fn(dim, dim, |i, j| {
            if i == j {
                c.clone()
            } else {
                WittVec::zero(field, n)
            }
        });
        SemilinearMap::new(field.clone(), n, shape.clone(), shape, twist, entries)
    }

    pub fn identity(field: &FieldDesc, n: usize, shape: Vec<usize>) -> Self {
        Self::scalar(field, n, shape, 0, &WittVec::one(field, n)).expect("identity is valid")
    }

    /// `p^e · id` with twist 0.
    pub fn p_pow_identity(field: &FieldDesc, n: usize, shape: Vec<usize>, e: usize) -> Self {
        Self::scalar(field, n, shape, 0, &WittVec::p_pow(field, n, e))
            .expect("p-power scalar is valid")
    }

    pub fn field(&self) -> &FieldDesc {
        &self.field
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn src(&self) -> &[usize] {
        &self.src
    }

    pub fn tgt(&self) -> &[usize] {
        &self.tgt
    }

    pub fn twist(&self) -> i64 {
        self.twist
    }

    pub fn entries(&self) -> &Mat<WittVec> {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        (0..self.entries.rows())
            .all(|i| (0..self.entries.cols()).all(|j| self.entries.at(i, j).is_zero()))
    }

    /// Apply to a canonical component element.
    pub fn apply(&self, x: &[WittVec]) -> Result<Vec<WittVec>> {
        if x.len() != self.src.len() {
            return Err(Error::Shape(String::from("element shape mismatch")));
        }
        let mut out = Vec::with_capacity(self.tgt.len());
        for (l, &b) in self.tgt.iter().enumerate() {
            let mut acc = WittVec::zero(&self.field, self.n);
            for (j, xj) in x.iter().enumerate() {
                let term = self.entries.at(l, j).mul(&xj.sigma(self.twist))?;
                acc = acc.add(&term)?;
            }
            out.push(acc.clear_from(b));
        }
        Ok(out)
    }

    /// `self ∘ other` with the twisted product rule.
    pub fn compose(&self, other: &SemilinearMap) -> Result<SemilinearMap> {
        if self.field != other.field || self.n != other.n {
            return Err(Error::Shape(String::from("maps over different rings")));
        }
        if self.src != other.tgt {
            return Err(Error::Shape(String::from(
                "composition shape mismatch",
            )));
        }
        let entries = Mat::from_fn(self.tgt.len(), other.src.len(), |l, j| {
            let mut acc = WittVec::zero(&self.field, self.n);
            for k in 0..self.src.len() {
                let twisted = other.entries.at(k, j).sigma(self.twist);
                let term = self.entries.at(l, k).mul(&twisted).expect("same ring");
                acc = acc.add(&term).expect("same ring");
            }
            acc
        });
        SemilinearMap::new(
            self.field.clone(),
            self.n,
            other.src.clone(),
            self.tgt.clone(),
            self.twist + other.twist,
            entries,
        )
    }

    /// Entry-wise sum; twists and shapes must agree.
    pub fn add(&self, other: &SemilinearMap) -> Result<SemilinearMap> {
        if self.twist != other.twist || self.src != other.src || self.tgt != other.tgt {
            return Err(Error::Shape(String::from(
                "sum of maps with different twist or shape",
            )));
        }
        let entries = Mat::from_fn(self.tgt.len(), self.src.len(), |i, j| {
            self.entries
                .at(i, j)
                .add(other.entries.at(i, j))
                .expect("same ring")
        });
        SemilinearMap::new(
            self.field.clone(),
            self.n,
            self.src.clone(),
            self.tgt.clone(),
            self.twist,
            entries,
        )
    }

    pub fn neg(&self) -> SemilinearMap {
        let entries = Mat::from_fn(self.tgt.len(), self.src.len(), |i, j| {
            self.entries.at(i, j).neg()
        });
        SemilinearMap {
            field: self.field.clone(),
            n: self.n,
            src: self.src.clone(),
            tgt: self.tgt.clone(),
            twist: self.twist,
            entries,
        }
    }

    /// Left-multiply every entry by the scalar `c`.
    pub fn scale(&self, c: &WittVec) -> Result<SemilinearMap> {
        let entries = Mat::from_fn(self.tgt.len(), self.src.len(), |i, j| {
            c.mul(self.entries.at(i, j)).expect("same ring")
        });
        SemilinearMap::new(
            self.field.clone(),
            self.n,
            self.src.clone(),
            self.tgt.clone(),
            self.twist,
            entries,
        )
    }

    /// Block-diagonal assembly of maps of equal twist.
    pub fn block_diag(parts: &[SemilinearMap]) -> Result<SemilinearMap> {
        let first = parts.first().ok_or_else(|| {
            Error::Shape(String::from("block_diag needs at least one part"))
        })?;
        let field = first.field.clone();
        let n = first.n;
        let twist = first.twist;
        let mut src = Vec::new();
        let mut tgt = Vec::new();
        for part in parts {
            if part.field != field || part.n != n {
                return Err(Error::Shape(String::from("blocks over different rings")));
            }
            if part.twist != twist {
                return Err(Error::Shape(String::from("blocks of different twist")));
            }
            src.extend_from_slice(&part.src);
            tgt.extend_from_slice(&part.tgt);
        }
        let zero = WittVec::zero(&field, n);
        let mut entries = Mat::filled(tgt.len(), src.len(), zero);
        let mut row0 = 0;
        let mut col0 = 0;
        for part in parts {
            for i in 0..part.tgt.len() {
                for j in 0..part.src.len() {
                    entries.set(row0 + i, col0 + j, part.entries.at(i, j).clone());
                }
            }
            row0 += part.tgt.len();
            col0 += part.src.len();
        }
        SemilinearMap::new(field, n, src, tgt, twist, entries)
    }

    /// Truncate source, target and entries to a lower precision `m`
    /// (summand lengths capped at `m`, entries reduced).
    pub fn truncate_precision(&self, m: usize) -> SemilinearMap {
        assert!(m >= 1 && m <= self.n);
        let src: Vec<usize> = self.src.iter().map(|&a| a.min(m)).collect();
        let tgt: Vec<usize> = self.tgt.iter().map(|&b| b.min(m)).collect();
        let entries = Mat::from_fn(self.tgt.len(), self.src.len(), |i, j| {
            self.entries.at(i, j).truncate(m).zero_pad(m)
        });
        SemilinearMap::new(self.field.clone(), m, src, tgt, self.twist, entries)
            .expect("truncation preserves validity")
    }
}

/// A finite sum of semilinear maps of distinct twists: `Σ_s A_s σ^s`.
/// Closed under composition and needed for geometric series like
/// `(1 - F)^{-1} = Σ F^k`, whose terms carry different twists.
#[derive(Debug, Clone, PartialEq)]
pub struct AdditiveOp {
    field: FieldDesc,
    n: usize,
    shape: Vec<usize>,
    terms: alloc::collections::BTreeMap<i64, SemilinearMap>,
}

impl AdditiveOp {
    pub fn zero(field: &FieldDesc, n: usize, shape: Vec<usize>) -> Self {
        AdditiveOp {
            field: field.clone(),
            n,
            shape,
            terms: alloc::collections::BTreeMap::new(),
        }
    }

    pub fn identity(field: &FieldDesc, n: usize, shape: Vec<usize>) -> Self {
        let mut op = Self::zero(field, n, shape.clone());
        op.add_term(SemilinearMap::identity(field, n, shape));
        op
    }

    pub fn from_map(map: &SemilinearMap) -> Result<Self> {
        if map.src() != map.tgt() {
            return Err(Error::Shape(String::from(
                "additive operators are endomorphisms",
            )));
        }
        let mut op = Self::zero(map.field(), map.n(), map.src().to_vec());
        op.add_term(map.clone());
        Ok(op)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&i64, &SemilinearMap)> {
        self.terms.iter()
    }

    fn add_term(&mut self, term: SemilinearMap) {
        if term.is_zero() {
            return;
        }
        let twist = term.twist();
        let merged = match self.terms.remove(&twist) {
            Some(existing) => existing.add(&term).expect("same twist and shape"),
            None => term,
        };
        if !merged.is_zero() {
            self.terms.insert(twist, merged);
        }
    }

    pub fn add(&self, other: &AdditiveOp) -> AdditiveOp {
        let mut out = self.clone();
        for term in other.terms.values() {
            out.add_term(term.clone());
        }
        out
    }

    pub fn neg(&self) -> AdditiveOp {
        AdditiveOp {
            field: self.field.clone(),
            n: self.n,
            shape: self.shape.clone(),
            terms: self
                .terms
                .iter()
                .map(|(t, m)| (*t, m.neg()))
                .collect(),
        }
    }

    pub fn sub(&self, other: &AdditiveOp) -> AdditiveOp {
        self.add(&other.neg())
    }

    pub fn compose(&self, other: &AdditiveOp) -> AdditiveOp {
        let mut out = Self::zero(&self.field, self.n, self.shape.clone());
        for a in self.terms.values() {
            for b in other.terms.values() {
                out.add_term(a.compose(b).expect("endomorphism shapes"));
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn apply(&self, x: &[WittVec]) -> Result<Vec<WittVec>> {
        let mut acc: Vec<WittVec> = self
            .shape
            .iter()
            .map(|_| WittVec::zero(&self.field, self.n))
            .collect();
        for term in self.terms.values() {
            let y = term.apply(x)?;
            for (a, b) in acc.iter_mut().zip(y) {
                *a = a.add(&b)?;
            }
        }
        Ok(acc
            .into_iter()
            .zip(&self.shape)
            .map(|(v, &a)| v.clear_from(a))
            .collect())
    }
}
