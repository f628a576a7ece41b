//! Closed-form models of `RΓ(WΩ_X)` for the catalog varieties.
//!
//! The catalog is the point and the projective spaces: `Spec k` has
//! `RΓ(WΩ) = 𝟙` concentrated in bidegree `(0,0)`, and `ℙ^N` decomposes as
//! `⊕_{j=0}^{N} T^{-j}(𝟙)[-j]`: one unit summand at bidegree `(j, j)`
//! with `F = σ`, `V = pσ^{-1}` and all differentials zero. For `N = 1`
//! this is the decomposition `𝟙 ⊕ T^{-1}(𝟙)[-1]` of `RΓ(WΩ_{ℙ¹})`.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::complex::{direct_sum_cx, RComplex};
use crate::error::{Error, Result};
use crate::fq::FieldDesc;
use crate::module::{make_unit, DSumModel, DSumSummand};
use crate::semilinear::SemilinearMap;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VarietyKind {
    Point,
    ProjectiveSpace(usize),
}

/// A catalog variety over a named base field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VarietyDesc {
    kind: VarietyKind,
    field: FieldDesc,
    label: String,
}

impl VarietyDesc {
    pub fn new(kind: VarietyKind, field: FieldDesc) -> Self {
        let label = match kind {
            VarietyKind::Point => String::from("point"),
            VarietyKind::ProjectiveSpace(1) => String::from("p1"),
            VarietyKind::ProjectiveSpace(n) => format!("pN:{n}"),
        };
        VarietyDesc { kind, field, label }
    }

    /// Parse the CLI selector: `point`, `p1`, or `pN:<N>`.
    pub fn parse(selector: &str, field: FieldDesc) -> Result<Self> {
        let kind = match selector {
            "point" => VarietyKind::Point,
            "p1" => VarietyKind::ProjectiveSpace(1),
            other => match other.strip_prefix("pN:") {
                Some(num) => {
                    let n: usize = num.parse().map_err(|_| {
                        Error::UnsupportedVariety(format!("bad dimension in {other:?}"))
                    })?;
                    VarietyKind::ProjectiveSpace(n)
                }
                None => {
                    return Err(Error::UnsupportedVariety(format!(
                        "unknown variety {selector:?} (expected point, p1, or pN:<N>)"
                    )))
                }
            },
        };
        Ok(VarietyDesc::new(kind, field))
    }

    pub fn kind(&self) -> VarietyKind {
        self.kind
    }

    pub fn field(&self) -> &FieldDesc {
        &self.field
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn dimension(&self) -> usize {
        match self.kind {
            VarietyKind::Point => 0,
            VarietyKind::ProjectiveSpace(n) => n,
        }
    }
}

/// A catalog model: the bicomplex together with its formal direct-sum
/// description.
#[derive(Debug, Clone, PartialEq)]
pub struct VarietyModel {
    pub complex: RComplex,
    pub dsum: DSumModel,
}

/// The model of `RΓ(WΩ_X)` at Witt precision `n`.
pub fn model_rgamma(v: &VarietyDesc, n: usize) -> Result<VarietyModel> {
    if n < 1 {
        return Err(Error::Shape(String::from("precision must be >= 1")));
    }
    let unit_cx = RComplex::from_module(&make_unit(&v.field, n), 0);
    match v.kind {
        VarietyKind::Point => Ok(VarietyModel {
            complex: unit_cx,
            dsum: DSumModel(alloc::vec![DSumSummand {
                twist_pow: 0,
                shift: 0,
            }]),
        }),
        VarietyKind::ProjectiveSpace(dim) => {
            let summands: Vec<RComplex> = (0..=dim)
                .map(|j| unit_cx.twist_t_cx(-(j as i64)).shift(-(j as i64)))
                .collect();
            let complex = direct_sum_cx(&summands)?;
            let dsum = DSumModel(
                (0..=dim)
                    .map(|j| DSumSummand {
                        twist_pow: j as i64,
                        shift: j as i64,
                    })
                    .collect(),
            );
            Ok(VarietyModel { complex, dsum })
        }
    }
}

/// One Hodge–Witt spot `H^j(X, WΩ^i)` at finite level: its shape and the
/// operator `F` acting on it.
#[derive(Debug, Clone, PartialEq)]
pub struct HodgeWittEntry {
    pub shape: Vec<usize>,
    pub f: SemilinearMap,
}

/// The table `(i, j) ↦ H^j(X, WΩ^i)` read off from the bicomplex
/// cohomology of the model.
pub fn hodge_witt_table(
    v: &VarietyDesc,
    n: usize,
) -> Result<BTreeMap<(i64, i64), HodgeWittEntry>> {
    let model = model_rgamma(v, n)?;
    let mut out = BTreeMap::new();
    let complex_degrees: alloc::collections::BTreeSet<i64> =
        model.complex.entry_keys().map(|(_, j)| j).collect();
    for j in complex_degrees {
        let h = model.complex.cohomology_h(j);
        for i in h.degrees().collect::<Vec<_>>() {
            let shape = h.component(i).unwrap().clone();
            let f = h.f_op(i).unwrap().clone();
            out.insert((i, j), HodgeWittEntry { shape, f });
        }
    }
    Ok(out)
}
