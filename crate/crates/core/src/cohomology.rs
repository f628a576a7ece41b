//! `H^i(X, ℤ_p(r))` and `H^i(X, ℤ/p^m(r))` at finite Witt precision, and
//! the table driver behind the CLI.
//!
//! The group `Hom(𝟙, RΓ(WΩ_X)(r)[i])` is computed as `H^{i-r}` of the
//! mapping fiber of `1 - F` on the column `M^{r•}` of the model bicomplex.
//! The projective limit over `n` is never asserted: computing a cell at two
//! consecutive precisions yields a labeled guess (`Z_p`, `finite`, …)
//! following the factor pattern, nothing more.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::complex::RComplex;
use crate::error::{Error, Result};
use crate::fq::FieldDesc;
use crate::solver::{
    fiber_cohomology, ker_coker_1_minus_f, oracle_fiber_cohomology, FinAbPGroup,
};
use crate::variety::{model_rgamma, VarietyDesc};

/// `Hom(𝟙, C(r)[i])` for a complete complex `C`: the `(i-r)`-th fiber
/// cohomology of `1 - F` on the `r`-th column.
pub fn hom_unit_derived(c: &RComplex, i: i64, r: i64) -> Result<FinAbPGroup> {
    fiber_cohomology(&c.column(r), i - r)
}

/// One computed cohomology cell.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CohomologyCell {
    pub variety: String,
    pub i: i64,
    pub r: i64,
    pub n: usize,
    pub group: FinAbPGroup,
    /// Present only when the cell was also computed at precision `n - 1`.
    pub limit_label: Option<String>,
}

/// `H^i(X, ℤ_p(r))` at precision `n`, with the limit label inferred from a
/// second computation at `n - 1` when `n ≥ 2`.
pub fn zp_cohomology(v: &VarietyDesc, i: i64, r: i64, n: usize) -> Result<CohomologyCell> {
    let model = model_rgamma(v, n)?;
    let group = hom_unit_derived(&model.complex, i, r)?;
    let limit_label = if n >= 2 {
        let prev_model = model_rgamma(v, n - 1)?;
        let prev = hom_unit_derived(&prev_model.complex, i, r)?;
        Some(infer_limit_label(&group, &prev, n))
    } else {
        None
    };
    Ok(CohomologyCell {
        variety: String::from(v.label()),
        i,
        r,
        n,
        group,
        limit_label,
    })
}

/// Factor-pattern heuristic for the projective limit: `a` full-precision
/// factors that track `n` across both levels are read as `a` copies of
/// `ℤ_p`; factors strictly below `n` must be stable to be read as a finite
/// part. Anything else is labeled unstable.
pub fn infer_limit_label(at_n: &FinAbPGroup, at_prev: &FinAbPGroup, n: usize) -> String {
    let full: usize = at_n.factors().iter().filter(|&&e| e == n).count();
    let rest: Vec<usize> = at_n
        .factors()
        .iter()
        .copied()
        .filter(|&e| e < n)
        .collect();
    let mut expected_prev: Vec<usize> = core::iter::repeat_n(n - 1, full)
        .chain(rest.iter().copied())
        .collect();
    expected_prev.sort_unstable_by(|a, b| b.cmp(a));
    if at_prev.factors() != expected_prev.as_slice() {
        return String::from("unstable");
    }
    let zp_part = match full {
        0 => None,
        1 => Some(String::from("Z_p")),
        a => Some(format!("Z_p^{a}")),
    };
    match (zp_part, rest.is_empty()) {
        (None, _) => String::from("finite"),
        (Some(zp), true) => zp,
        (Some(zp), false) => format!("{zp} + finite"),
    }
}

/// `H^i(X, ℤ/p^m(r))` via the derived reduction: the `1 - F` fiber on the
/// cone of `p^m` over the precision-`n` model. Needs headroom `m < n`.
pub fn modpn_cohomology(
    v: &VarietyDesc,
    i: i64,
    r: i64,
    m: usize,
    n: usize,
) -> Result<FinAbPGroup> {
    if m >= n {
        return Err(Error::PrecisionLimit(format!(
            "mod p^{m} needs Witt precision headroom (n = {n})"
        )));
    }
    let model = model_rgamma(v, n)?;
    hom_unit_derived(&model.complex.cone_mult(m)?, i, r)
}

/// Order-level shadow of the long exact `1 - F` sequence: checks
/// `|H^i| = |coker(1-F on H^{i-r-1}(M^{r•}))| · |ker(1-F on H^{i-r}(M^{r•}))|`
/// for the given complex, computing the column cohomology as W-modules with
/// their induced `F`.
pub fn les_order_check(c: &RComplex, i: i64, r: i64) -> Result<bool> {
    let group = hom_unit_derived(c, i, r)?;
    let mut expected = 0usize;
    for (j, want_coker) in [(i - r - 1, true), (i - r, false)] {
        let h = c.cohomology_h(j);
        let Some(_) = h.component(r) else { continue };
        let f_op = h
            .f_op(r)
            .ok_or_else(|| Error::InvariantViolation(String::from("missing induced F")))?;
        let (ker, coker) = ker_coker_1_minus_f(f_op)?;
        expected += if want_coker {
            coker.order_exp()
        } else {
            ker.order_exp()
        };
    }
    Ok(group.order_exp() == expected)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OracleStatus {
    Agree,
    Skipped,
}

/// A table cell as produced by [`run_table`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableCell {
    pub i: i64,
    pub r: i64,
    pub group: FinAbPGroup,
    pub limit: Option<String>,
    pub oracle: Option<OracleStatus>,
}

/// A validated table request.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableRequest {
    pub variety: String,
    pub p: u64,
    pub f: usize,
    pub n: usize,
    pub i_min: i64,
    pub i_max: i64,
    pub r_min: i64,
    pub r_max: i64,
    /// `Some(m)`: compute `H^i(X, ℤ/p^m(r))` instead of the `ℤ_p`-level.
    pub mod_pm: Option<usize>,
    pub oracle: bool,
}

impl TableRequest {
    fn validate(&self) -> Result<()> {
        if self.n < 1 {
            return Err(Error::InvalidRequest(String::from("n must be >= 1")));
        }
        if let Some(m) = self.mod_pm {
            if m >= self.n {
                return Err(Error::InvalidRequest(format!(
                    "--mod-pm {m} needs m < n = {}",
                    self.n
                )));
            }
        }
        Ok(())
    }
}

/// Evaluate a request: deterministic cells sorted by `(i, r)`. With the
/// oracle flag set, every cell is re-derived by exhaustive enumeration when
/// its fiber is small enough; a disagreement is an invariant violation and
/// must abort the run.
pub fn run_table(req: &TableRequest) -> Result<Vec<TableCell>> {
    req.validate()?;
    let field = FieldDesc::new(req.p, req.f)
        .map_err(|e| Error::InvalidRequest(format!("bad field: {e}")))?;
    let variety = VarietyDesc::parse(&req.variety, field)
        .map_err(|e| Error::InvalidRequest(format!("{e}")))?;

    let model = model_rgamma(&variety, req.n)?;
    if !model.complex.validate().is_empty() {
        return Err(Error::InvariantViolation(String::from(
            "catalog model violates the ring relations",
        )));
    }
    let complex = match req.mod_pm {
        Some(m) => model.complex.cone_mult(m)?,
        None => model.complex.clone(),
    };
    let prev_complex = if req.mod_pm.is_none() && req.n >= 2 {
        Some(model_rgamma(&variety, req.n - 1)?.complex)
    } else {
        None
    };

    let mut cells = Vec::new();
    for i in req.i_min..=req.i_max {
        for r in req.r_min..=req.r_max {
            let group = hom_unit_derived(&complex, i, r)?;
            let limit = match &prev_complex {
                Some(prev) => {
                    let prev_group = hom_unit_derived(prev, i, r)?;
                    Some(infer_limit_label(&group, &prev_group, req.n))
                }
                None => None,
            };
            let oracle = if req.oracle {
                let col = complex.column(r);
                match oracle_fiber_cohomology(&col, i - r) {
                    Ok(check) => {
                        if check != group {
                            return Err(Error::InvariantViolation(format!(
                                "oracle disagreement at (i={i}, r={r}): solver {group}, enumeration {check}"
                            )));
                        }
                        Some(OracleStatus::Agree)
                    }
                    Err(Error::OracleBound(_)) => Some(OracleStatus::Skipped),
                    Err(e) => return Err(e),
                }
            } else {
                None
            };
            cells.push(TableCell {
                i,
                r,
                group,
                limit,
                oracle,
            });
        }
    }
    Ok(cells)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn variety(selector: &str, p: u64, f: usize) -> VarietyDesc {
        VarietyDesc::parse(selector, FieldDesc::new(p, f).unwrap()).unwrap()
    }

    #[test]
    fn point_cells() {
        // H^0 = H^1 = ℤ/p^n at r = 0, trivial elsewhere
        let v = variety("point", 2, 1);
        let c0 = zp_cohomology(&v, 0, 0, 3).unwrap();
        assert_eq!(c0.group.factors(), &[3]);
        assert_eq!(c0.limit_label.as_deref(), Some("Z_p"));
        let c1 = zp_cohomology(&v, 1, 0, 3).unwrap();
        assert_eq!(c1.group.factors(), &[3]);
        for (i, r) in [(2, 0), (0, 1), (5, 2), (-1, 0)] {
            assert!(zp_cohomology(&v, i, r, 3).unwrap().group.is_trivial());
        }
    }

    #[test]
    fn p1_golden_spots() {
        let v = variety("p1", 2, 1);
        let n = 4;
        for i in 0..=5 {
            for r in 0..=2 {
                let cell = zp_cohomology(&v, i, r, n).unwrap();
                let expect_nonzero =
                    matches!((i, r), (0, 0) | (1, 0) | (2, 1) | (3, 1));
                if expect_nonzero {
                    assert_eq!(cell.group.factors(), &[n], "(i,r)=({i},{r})");
                    assert_eq!(cell.limit_label.as_deref(), Some("Z_p"));
                } else {
                    assert!(cell.group.is_trivial(), "(i,r)=({i},{r})");
                    assert_eq!(cell.limit_label.as_deref(), Some("finite"));
                }
            }
        }
    }

    #[test]
    fn empty_column_is_trivial() {
        let v = variety("p1", 2, 1);
        let model = model_rgamma(&v, 2).unwrap();
        assert!(hom_unit_derived(&model.complex, 5, 2).unwrap().is_trivial());
    }

    #[test]
    fn modpn_point_and_p1() {
        // point: ℤ/p at (0,0) and (1,0)
        let v = variety("point", 2, 1);
        assert_eq!(modpn_cohomology(&v, 0, 0, 1, 3).unwrap().factors(), &[1]);
        assert_eq!(modpn_cohomology(&v, 1, 0, 1, 3).unwrap().factors(), &[1]);
        assert!(modpn_cohomology(&v, 2, 0, 1, 3).unwrap().is_trivial());
        assert!(modpn_cohomology(&v, -1, 0, 1, 3).unwrap().is_trivial());
        // precision headroom
        assert!(matches!(
            modpn_cohomology(&v, 0, 0, 3, 3),
            Err(Error::PrecisionLimit(_))
        ));
        // ℙ¹, m = 1, n = 3: ℤ/p at the four spots, zero elsewhere
        let v = variety("p1", 3, 1);
        for i in -1..=5 {
            for r in 0..=2 {
                let g = modpn_cohomology(&v, i, r, 1, 3).unwrap();
                if matches!((i, r), (0, 0) | (1, 0) | (2, 1) | (3, 1)) {
                    assert_eq!(g.factors(), &[1], "(i,r)=({i},{r})");
                } else {
                    assert!(g.is_trivial(), "(i,r)=({i},{r})");
                }
            }
        }
    }

    #[test]
    fn twist_coherence() {
        // computing at twist r equals twisting the complex and computing at 0
        let v = variety("p1", 2, 2);
        let model = model_rgamma(&v, 2).unwrap();
        for i in 0..=4 {
            for r in -1..=2 {
                let direct = hom_unit_derived(&model.complex, i, r).unwrap();
                let twisted =
                    hom_unit_derived(&model.complex.tate_twist(r), i, 0).unwrap();
                assert_eq!(direct, twisted, "(i,r)=({i},{r})");
            }
        }
    }

    #[test]
    fn les_order_identity_on_catalog() {
        let v = variety("p1", 2, 1);
        let model = model_rgamma(&v, 3).unwrap();
        for i in 0..=4 {
            for r in 0..=2 {
                assert!(les_order_check(&model.complex, i, r).unwrap());
            }
        }
        let cone = model.complex.cone_mult(1).unwrap();
        for i in 0..=4 {
            for r in 0..=1 {
                assert!(les_order_check(&cone, i, r).unwrap());
            }
        }
    }

    #[test]
    fn limit_labels() {
        let g = |factors: &[usize]| FinAbPGroup::new(2, factors.to_vec());
        assert_eq!(infer_limit_label(&g(&[3]), &g(&[2]), 3), "Z_p");
        assert_eq!(infer_limit_label(&g(&[3, 3]), &g(&[2, 2]), 3), "Z_p^2");
        assert_eq!(infer_limit_label(&g(&[1]), &g(&[1]), 3), "finite");
        assert_eq!(infer_limit_label(&g(&[]), &g(&[]), 3), "finite");
        assert_eq!(
            infer_limit_label(&g(&[3, 1]), &g(&[2, 1]), 3),
            "Z_p + finite"
        );
        assert_eq!(infer_limit_label(&g(&[3]), &g(&[1]), 3), "unstable");
        // a finite factor at exactly n-1 overlaps the capped ℤ_p pattern
        assert_eq!(infer_limit_label(&g(&[3, 2]), &g(&[2, 2]), 3), "Z_p + finite");
    }

    #[test]
    fn run_table_smoke() {
        let req = TableRequest {
            variety: String::from("p1"),
            p: 2,
            f: 1,
            n: 3,
            i_min: 0,
            i_max: 4,
            r_min: 0,
            r_max: 2,
            mod_pm: None,
            oracle: true,
        };
        let cells = run_table(&req).unwrap();
        assert_eq!(cells.len(), 15);
        let nonzero: Vec<(i64, i64)> = cells
            .iter()
            .filter(|c| !c.group.is_trivial())
            .map(|c| (c.i, c.r))
            .collect();
        assert_eq!(nonzero, alloc::vec![(0, 0), (1, 0), (2, 1), (3, 1)]);
        assert!(cells
            .iter()
            .all(|c| c.oracle == Some(OracleStatus::Agree)));
        // an empty range is a valid request with an empty table
        let mut empty = req.clone();
        empty.i_min = 5;
        empty.i_max = 0;
        assert_eq!(run_table(&empty).unwrap(), alloc::vec![]);
        // invalid requests
        let mut bad = req;
        bad.p = 6;
        assert!(matches!(run_table(&bad), Err(Error::InvalidRequest(_))));
    }

    #[test]
    fn run_table_empty_range() {
        let req = TableRequest {
            variety: String::from("point"),
            p: 3,
            f: 1,
            n: 2,
            i_min: 0,
            i_max: 1,
            r_min: 0,
            r_max: 0,
            mod_pm: None,
            oracle: false,
        };
        let cells = run_table(&req).unwrap();
        assert_eq!(cells.len(), 2);
        assert!(cells.iter().all(|c| c.group.factors() == [2]));
    }
}
