//! Graded modules over the Raynaud ring at Witt precision `n`.
//!
//! A graded R-module is a complex of `W_n(F_q)`-modules: a finite family of
//! components `M^i = ⊕_j W_{a_j}(F_q)` carrying `F` (twist `+1`), `V`
//! (twist `-1`) and a degree-raising differential `d` (twist `0`) subject to
//!
//! ```text
//! FV = p = VF,   d² = 0,   FdV = d.
//! ```
//!
//! [`validate_module`](GradedRModule::validate) checks every relation as a
//! matrix identity, which suffices: two additive maps with the same twist
//! agree iff they agree on the lattice generators.
//!
//! The unit object is `𝟙 = (W, F = σ, V = pσ^{-1})` concentrated in degree
//! zero; `T` reindexes components down by one and negates `d`.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::fq::FieldDesc;
use crate::semilinear::SemilinearMap;
use crate::witt::WittVec;

pub use crate::semilinear::AdditiveOp;

/// A violated Raynaud relation, reported by [`GradedRModule::validate`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub degree: i64,
    pub rule: ViolationKind,
    pub detail: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ViolationKind {
    MissingOperator,
    WrongTwist,
    ShapeMismatch,
    Annihilator,
    FvNotP,
    VfNotP,
    DSquareNotZero,
    FdvNotD,
}

impl core::fmt::Display for Violation {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "degree {}: {:?} ({})", self.degree, self.rule, self.detail)
    }
}

/// Finite-support graded R-module with finite-length components.
#[derive(Debug, Clone, PartialEq)]
pub struct GradedRModule {
    field: FieldDesc,
    n: usize,
    components: BTreeMap<i64, Vec<usize>>,
    f_ops: BTreeMap<i64, SemilinearMap>,
    v_ops: BTreeMap<i64, SemilinearMap>,
    d_ops: BTreeMap<i64, SemilinearMap>,
}

impl GradedRModule {
    pub fn new(field: FieldDesc, n: usize) -> Self {
        GradedRModule {
            field,
            n,
            components: BTreeMap::new(),
            f_ops: BTreeMap::new(),
            v_ops: BTreeMap::new(),
            d_ops: BTreeMap::new(),
        }
    }

    /// Insert a component with its `F` and `V`.
    pub fn insert_component(
        &mut self,
        degree: i64,
        shape: Vec<usize>,
        f: SemilinearMap,
        v: SemilinearMap,
    ) -> Result<()> {
        if shape.iter().any(|&a| a == 0 || a > self.n) {
            return Err(Error::Shape(format!(
                "summand lengths at degree {degree} must lie in 1..={}",
                self.n
            )));
        }
        if f.src() != shape.as_slice() || f.tgt() != shape.as_slice() {
            return Err(Error::Shape(String::from("F shape mismatch")));
        }
        if v.src() != shape.as_slice() || v.tgt() != shape.as_slice() {
            return Err(Error::Shape(String::from("V shape mismatch")));
        }
        self.components.insert(degree, shape);
        self.f_ops.insert(degree, f);
        self.v_ops.insert(degree, v);
        Ok(())
    }

    /// Set the differential out of `degree` (into `degree + 1`).
    pub fn set_d(&mut self, degree: i64, d: SemilinearMap) -> Result<()> {
        let src = self
            .components
            .get(&degree)
            .ok_or_else(|| Error::Shape(format!("no component at degree {degree}")))?;
        let tgt = self
            .components
            .get(&(degree + 1))
            .ok_or_else(|| Error::Shape(format!("no component at degree {}", degree + 1)))?;
        if d.src() != src.as_slice() || d.tgt() != tgt.as_slice() {
            return Err(Error::Shape(String::from("d shape mismatch")));
        }
        self.d_ops.insert(degree, d);
        Ok(())
    }

    pub fn field(&self) -> &FieldDesc {
        &self.field
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn degrees(&self) -> impl Iterator<Item = i64> + '_ {
        self.components.keys().copied()
    }

    pub fn component(&self, degree: i64) -> Option<&Vec<usize>> {
        self.components.get(&degree)
    }

    pub fn f_op(&self, degree: i64) -> Option<&SemilinearMap> {
        self.f_ops.get(&degree)
    }

    pub fn v_op(&self, degree: i64) -> Option<&SemilinearMap> {
        self.v_ops.get(&degree)
    }

    pub fn d_op(&self, degree: i64) -> Option<&SemilinearMap> {
        self.d_ops.get(&degree)
    }

    /// Check all Raynaud relations; an empty report means the module is
    /// valid. Violations are data, not errors.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        for (&i, shape) in &self.components {
            let Some(f) = self.f_ops.get(&i) else {
                out.push(Violation {
                    degree: i,
                    rule: ViolationKind::MissingOperator,
                    detail: String::from("F missing"),
                });
                continue;
            };
            let Some(v) = self.v_ops.get(&i) else {
                out.push(Violation {
                    degree: i,
                    rule: ViolationKind::MissingOperator,
                    detail: String::from("V missing"),
                });
                continue;
            };
            if f.twist() != 1 {
                out.push(Violation {
                    degree: i,
                    rule: ViolationKind::WrongTwist,
                    detail: format!("F has twist {}", f.twist()),
                });
            }
            if v.twist() != -1 {
                out.push(Violation {
                    degree: i,
                    rule: ViolationKind::WrongTwist,
                    detail: format!("V has twist {}", v.twist()),
                });
            }
            let p_id = SemilinearMap::p_pow_identity(&self.field, self.n, shape.clone(), 1);
            match f.compose(v) {
                Ok(fv) => {
                    if fv != p_id {
                        out.push(Violation {
                            degree: i,
                            rule: ViolationKind::FvNotP,
                            detail: String::from("F∘V ≠ p·id"),
                        });
                    }
                }
                Err(e) => out.push(Violation {
                    degree: i,
                    rule: ViolationKind::ShapeMismatch,
                    detail: format!("F∘V: {e}"),
                }),
            }
            match v.compose(f) {
                Ok(vf) => {
                    if vf != p_id {
                        out.push(Violation {
                            degree: i,
                            rule: ViolationKind::VfNotP,
                            detail: String::from("V∘F ≠ p·id"),
                        });
                    }
                }
                Err(e) => out.push(Violation {
                    degree: i,
                    rule: ViolationKind::ShapeMismatch,
                    detail: format!("V∘F: {e}"),
                }),
            }
            // differential relations
            if let Some(d) = self.d_ops.get(&i) {
                if d.twist() != 0 {
                    out.push(Violation {
                        degree: i,
                        rule: ViolationKind::WrongTwist,
                        detail: format!("d has twist {}", d.twist()),
                    });
                }
                if self.components.get(&(i + 1)).map(Vec::as_slice) != Some(d.tgt()) {
                    out.push(Violation {
                        degree: i,
                        rule: ViolationKind::ShapeMismatch,
                        detail: String::from("d target shape mismatch"),
                    });
                    continue;
                }
                if let Some(d_next) = self.d_ops.get(&(i + 1)) {
                    match d_next.compose(d) {
                        Ok(dd) => {
                            if !dd.is_zero() {
                                out.push(Violation {
                                    degree: i,
                                    rule: ViolationKind::DSquareNotZero,
                                    detail: String::from("d∘d ≠ 0"),
                                });
                            }
                        }
                        Err(e) => out.push(Violation {
                            degree: i,
                            rule: ViolationKind::ShapeMismatch,
                            detail: format!("d∘d: {e}"),
                        }),
                    }
                }
                // FdV = d, with F taken on the target component
                if let Some(f_next) = self.f_ops.get(&(i + 1)) {
                    let fdv = f_next
                        .compose(d)
                        .and_then(|fd| fd.compose(v));
                    match fdv {
                        Ok(m) => {
                            if m != *d {
                                out.push(Violation {
                                    degree: i,
                                    rule: ViolationKind::FdvNotD,
                                    detail: String::from("F∘d∘V ≠ d"),
                                });
                            }
                        }
                        Err(e) => out.push(Violation {
                            degree: i,
                            rule: ViolationKind::ShapeMismatch,
                            detail: format!("F∘d∘V: {e}"),
                        }),
                    }
                }
            }
        }
        out
    }
}

/// The unit object `𝟙 = (W_n, F = σ, V = pσ^{-1})` in degree zero.
pub fn make_unit(field: &FieldDesc, n: usize) -> GradedRModule {
    let shape = vec![n];
    let one = WittVec::one(field, n);
    let p = WittVec::p_pow(field, n, 1);
    let f = SemilinearMap::scalar(field, n, shape.clone(), 1, &one).expect("σ is valid");
    let v = SemilinearMap::scalar(field, n, shape.clone(), -1, &p).expect("pσ^{-1} is valid");
    let mut m = GradedRModule::new(field.clone(), n);
    m.insert_component(0, shape, f, v).expect("unit component");
    m
}

/// `(TM)^i = M^{i+1}` with `T(d) = -d`; `F`, `V` are carried along.
pub fn twist_t(m: &GradedRModule) -> GradedRModule {
    let mut out = GradedRModule::new(m.field.clone(), m.n);
    for (&i, shape) in &m.components {
        out.insert_component(
            i - 1,
            shape.clone(),
            m.f_ops[&i].clone(),
            m.v_ops[&i].clone(),
        )
        .expect("reindexed component");
    }
    for (&i, d) in &m.d_ops {
        out.set_d(i - 1, d.neg()).expect("reindexed differential");
    }
    out
}

/// Inverse of [`twist_t`].
pub fn twist_t_inv(m: &GradedRModule) -> GradedRModule {
    let mut out = GradedRModule::new(m.field.clone(), m.n);
    for (&i, shape) in &m.components {
        out.insert_component(
            i + 1,
            shape.clone(),
            m.f_ops[&i].clone(),
            m.v_ops[&i].clone(),
        )
        .expect("reindexed component");
    }
    for (&i, d) in &m.d_ops {
        out.set_d(i + 1, d.neg()).expect("reindexed differential");
    }
    out
}

/// Componentwise direct sum.
pub fn direct_sum(summands: &[GradedRModule]) -> Result<GradedRModule> {
    let first = summands
        .first()
        .ok_or_else(|| Error::Shape(String::from("direct sum of nothing")))?;
    let field = first.field.clone();
    let n = first.n;
    if summands.iter().any(|m| m.field != field || m.n != n) {
        return Err(Error::Shape(String::from(
            "direct sum over mismatched scalars",
        )));
    }
    let mut degrees: Vec<i64> = Vec::new();
    for m in summands {
        for &i in m.components.keys() {
            if !degrees.contains(&i) {
                degrees.push(i);
            }
        }
    }
    degrees.sort_unstable();

    let empty: Vec<usize> = Vec::new();
    let mut out = GradedRModule::new(field.clone(), n);
    for &i in &degrees {
        let mut f_parts = Vec::new();
        let mut v_parts = Vec::new();
        let mut shape = Vec::new();
        for m in summands {
            let part_shape = m.components.get(&i).unwrap_or(&empty);
            if part_shape.is_empty() {
                continue;
            }
            shape.extend_from_slice(part_shape);
            f_parts.push(m.f_ops[&i].clone());
            v_parts.push(m.v_ops[&i].clone());
        }
        if shape.is_empty() {
            continue;
        }
        out.insert_component(
            i,
            shape,
            SemilinearMap::block_diag(&f_parts)?,
            SemilinearMap::block_diag(&v_parts)?,
        )?;
    }
    for &i in &degrees {
        if !out.components.contains_key(&i) || !out.components.contains_key(&(i + 1)) {
            continue;
        }
        // block-diagonal d, inserting zero blocks for summands without one
        let mut d_parts = Vec::new();
        let mut any = false;
        for m in summands {
            let src = m.components.get(&i).unwrap_or(&empty);
            let tgt = m.components.get(&(i + 1)).unwrap_or(&empty);
            if src.is_empty() && tgt.is_empty() {
                continue;
            }
            match m.d_ops.get(&i) {
                Some(d) => {
                    any = true;
                    d_parts.push(d.clone());
                }
                None => {
                    d_parts.push(SemilinearMap::zero(&field, n, src.clone(), tgt.clone(), 0))
                }
            }
        }
        if any {
            out.set_d(i, SemilinearMap::block_diag(&d_parts)?)?;
        }
    }
    Ok(out)
}

/// A formal direct sum of twisted shifted units: the summand `(j, s)`
/// stands for `T^{-j}(𝟙)[-s]`, supported in module degree `j` and complex
/// degree `s`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DSumSummand {
    pub twist_pow: i64,
    pub shift: i64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DSumModel(pub Vec<DSumSummand>);

impl DSumModel {
    /// Whether every summand is a diagonal complex: the sum of its module
    /// degree and its complex degree is zero. `𝕋 = T(𝟙)[-1]` (module degree
    /// `-1`, complex degree `+1`) is diagonal; `T^{-1}(𝟙)` alone is not.
    pub fn is_diagonal(&self) -> bool {
        self.0.iter().all(|s| s.twist_pow + s.shift == 0)
    }
}
