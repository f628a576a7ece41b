//! Bounded complexes of graded R-modules, viewed as bicomplexes.
//!
//! The first index `i` is the R-grading, the second `j` the complex degree.
//! Row `j` (fixed complex degree) is a graded R-module with its horizontal
//! `d`; the vertical differential `∂` is a morphism of graded R-modules, so
//! it commutes with `F`, `V` and the horizontal `d`. Column `i` is a complex
//! of `W_n`-modules with the operator `F` on each term: the input of the
//! `1 - F` fiber computation.
//!
//! `shift` and the Tate twist `(r) = T^r(·)[-r]` act on indices with the
//! usual signs. The derived reduction mod `p^m` is the mapping cone of the
//! injective map `p^m : trunc_{n-m}(C) → C` (multiply a lift by `p^m`);
//! keeping the source at precision `n - m` makes the map injective entrywise,
//! which is what the infinite-precision `p^m : WΩ → WΩ` looks like at a
//! finite truncation: the naive same-precision cone would acquire spurious
//! `p^m`-torsion cohomology in every degree.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::fq::FieldDesc;
use crate::linalg::{
    ambient_gens, kernel_shaped, subquotient, LocalRing, Mat, ShapedMap, Subquotient, WittLocal,
};
use crate::module::GradedRModule;
use crate::semilinear::SemilinearMap;
use crate::witt::WittVec;

/// A bounded bicomplex of `W_n(F_q)`-modules with `F`, `V`, horizontal `d`
/// and vertical `∂`. Missing entries and maps are zero.
#[derive(Debug, Clone, PartialEq)]
pub struct RComplex {
    field: FieldDesc,
    n: usize,
    entries: BTreeMap<(i64, i64), Vec<usize>>,
    f_ops: BTreeMap<(i64, i64), SemilinearMap>,
    v_ops: BTreeMap<(i64, i64), SemilinearMap>,
    d_h: BTreeMap<(i64, i64), SemilinearMap>,
    d_v: BTreeMap<(i64, i64), SemilinearMap>,
}

impl RComplex {
    pub fn new(field: FieldDesc, n: usize) -> Self {
        RComplex {
            field,
            n,
            entries: BTreeMap::new(),
            f_ops: BTreeMap::new(),
            v_ops: BTreeMap::new(),
            d_h: BTreeMap::new(),
            d_v: BTreeMap::new(),
        }
    }

    pub fn field(&self) -> &FieldDesc {
        &self.field
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn insert_entry(
        &mut self,
        i: i64,
        j: i64,
        shape: Vec<usize>,
        f: SemilinearMap,
        v: SemilinearMap,
    ) -> Result<()> {
        if shape.is_empty() {
            return Ok(());
        }
        if shape.iter().any(|&a| a == 0 || a > self.n) {
            return Err(Error::Shape(format!(
                "summand lengths at ({i},{j}) must lie in 1..={}",
                self.n
            )));
        }
        if f.src() != shape.as_slice()
            || f.tgt() != shape.as_slice()
            || v.src() != shape.as_slice()
            || v.tgt() != shape.as_slice()
        {
            return Err(Error::Shape(String::from("F/V shape mismatch")));
        }
        self.entries.insert((i, j), shape);
        self.f_ops.insert((i, j), f);
        self.v_ops.insert((i, j), v);
        Ok(())
    }

    pub fn set_d_h(&mut self, i: i64, j: i64, d: SemilinearMap) -> Result<()> {
        let src = self.entry_shape(i, j);
        let tgt = self.entry_shape(i + 1, j);
        if d.src() != src || d.tgt() != tgt {
            return Err(Error::Shape(String::from("horizontal d shape mismatch")));
        }
        self.d_h.insert((i, j), d);
        Ok(())
    }

    pub fn set_d_v(&mut self, i: i64, j: i64, d: SemilinearMap) -> Result<()> {
        let src = self.entry_shape(i, j);
        let tgt = self.entry_shape(i, j + 1);
        if d.src() != src || d.tgt() != tgt {
            return Err(Error::Shape(String::from("vertical ∂ shape mismatch")));
        }
        self.d_v.insert((i, j), d);
        Ok(())
    }

    pub fn entry_shape(&self, i: i64, j: i64) -> &[usize] {
        self.entries.get(&(i, j)).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn entry_keys(&self) -> impl Iterator<Item = (i64, i64)> + '_ {
        self.entries.keys().copied()
    }

    pub fn f_op(&self, i: i64, j: i64) -> Option<&SemilinearMap> {
        self.f_ops.get(&(i, j))
    }

    pub fn v_op(&self, i: i64, j: i64) -> Option<&SemilinearMap> {
        self.v_ops.get(&(i, j))
    }

    pub fn d_h_op(&self, i: i64, j: i64) -> Option<&SemilinearMap> {
        self.d_h.get(&(i, j))
    }

    pub fn d_v_op(&self, i: i64, j: i64) -> Option<&SemilinearMap> {
        self.d_v.get(&(i, j))
    }

    /// A graded R-module concentrated in complex degree `j0`.
    pub fn from_module(m: &GradedRModule, j0: i64) -> RComplex {
        let mut c = RComplex::new(m.field().clone(), m.n());
        for i in m.degrees() {
            let shape = m.component(i).unwrap().clone();
            c.insert_entry(
                i,
                j0,
                shape,
                m.f_op(i).unwrap().clone(),
                m.v_op(i).unwrap().clone(),
            )
            .expect("valid module component");
        }
        for i in m.degrees() {
            if let Some(d) = m.d_op(i) {
                c.set_d_h(i, j0, d.clone()).expect("valid module differential");
            }
        }
        c
    }

    /// Row `j` as a graded R-module.
    pub fn row(&self, j: i64) -> GradedRModule {
        let mut m = GradedRModule::new(self.field.clone(), self.n);
        for (&(i, jj), shape) in &self.entries {
            if jj != j {
                continue;
            }
            m.insert_component(
                i,
                shape.clone(),
                self.f_ops[&(i, j)].clone(),
                self.v_ops[&(i, j)].clone(),
            )
            .expect("row component");
        }
        for (&(i, jj), d) in &self.d_h {
            if jj == j {
                m.set_d(i, d.clone()).expect("row differential");
            }
        }
        m
    }

    /// Row validity plus `∂² = 0` plus commutation of `∂` with `F`, `V`
    /// and the horizontal `d`. Empty report = valid.
    pub fn validate(&self) -> Vec<String> {
        let mut out = Vec::new();
        let rows: alloc::collections::BTreeSet<i64> =
            self.entries.keys().map(|&(_, j)| j).collect();
        for j in rows {
            for v in self.row(j).validate() {
                out.push(format!("row {j}: {v}"));
            }
        }
        for &(i, j) in self.entries.keys() {
            // ∂∘∂ = 0
            if let (Some(d1), Some(d2)) = (self.d_v.get(&(i, j)), self.d_v.get(&(i, j + 1))) {
                if !d2.compose(d1).map(|m| m.is_zero()).unwrap_or(false) {
                    out.push(format!("∂∘∂ ≠ 0 at ({i},{j})"));
                }
            }
            // ∂ commutes with F and V
            for (name, ops) in [("F", &self.f_ops), ("V", &self.v_ops)] {
                let lhs = compose_opt(
                    ops.get(&(i, j + 1)),
                    self.d_v.get(&(i, j)),
                );
                let rhs = compose_opt(
                    self.d_v.get(&(i, j)),
                    ops.get(&(i, j)),
                );
                if !maps_equal_as_zeroable(&lhs, &rhs) {
                    out.push(format!("∂ does not commute with {name} at ({i},{j})"));
                }
            }
            // ∂ commutes with horizontal d
            let lhs = compose_opt(self.d_v.get(&(i + 1, j)), self.d_h.get(&(i, j)));
            let rhs = compose_opt(self.d_h.get(&(i, j + 1)), self.d_v.get(&(i, j)));
            if !maps_equal_as_zeroable(&lhs, &rhs) {
                out.push(format!("∂ does not commute with d at ({i},{j})"));
            }
        }
        out
    }

    /// The column `M^{r•}`: terms, vertical maps and `F`.
    pub fn column(&self, r: i64) -> ColumnComplex {
        let mut terms = BTreeMap::new();
        let mut deltas = BTreeMap::new();
        let mut f_ops = BTreeMap::new();
        for (&(i, j), shape) in &self.entries {
            if i != r {
                continue;
            }
            terms.insert(j, shape.clone());
            f_ops.insert(j, self.f_ops[&(i, j)].clone());
            if let Some(d) = self.d_v.get(&(i, j)) {
                deltas.insert(j, d.clone());
            }
        }
        ColumnComplex {
            field: self.field.clone(),
            n: self.n,
            r,
            terms,
            deltas,
            f_ops,
        }
    }

    /// `C[k]`: complex degree `j ↦ j - k`, vertical differential scaled by
    /// `(-1)^k`.
    pub fn shift(&self, k: i64) -> RComplex {
        let mut out = RComplex::new(self.field.clone(), self.n);
        out.entries = remap(&self.entries, |(i, j)| (i, j - k));
        out.f_ops = remap(&self.f_ops, |(i, j)| (i, j - k));
        out.v_ops = remap(&self.v_ops, |(i, j)| (i, j - k));
        out.d_h = remap(&self.d_h, |(i, j)| (i, j - k));
        let flip = k.rem_euclid(2) == 1;
        out.d_v = self
            .d_v
            .iter()
            .map(|(&(i, j), d)| ((i, j - k), if flip { d.neg() } else { d.clone() }))
            .collect();
        out
    }

    /// `T^k` applied row-wise: entries move `(i, j) ↦ (i - k, j)` and the
    /// horizontal `d` is scaled by `(-1)^k`; `∂`, `F`, `V` carried along.
    pub fn twist_t_cx(&self, k: i64) -> RComplex {
        let mut out = RComplex::new(self.field.clone(), self.n);
        out.entries = remap(&self.entries, |(i, j)| (i - k, j));
        out.f_ops = remap(&self.f_ops, |(i, j)| (i - k, j));
        out.v_ops = remap(&self.v_ops, |(i, j)| (i - k, j));
        out.d_v = remap(&self.d_v, |(i, j)| (i - k, j));
        let flip = k.rem_euclid(2) == 1;
        out.d_h = self
            .d_h
            .iter()
            .map(|(&(i, j), d)| ((i - k, j), if flip { d.neg() } else { d.clone() }))
            .collect();
        out
    }

    /// The Tate twist `C(r) = T^r(C)[-r]`.
    pub fn tate_twist(&self, r: i64) -> RComplex {
        self.twist_t_cx(r).shift(-r)
    }

    /// Derived reduction mod `p^m`: the mapping cone of
    /// `p^m : trunc_{n-m}(C) → C`. Requires `m < n` so that `p^m` is not the
    /// zero map at the working precision; `m = 0` gives the (acyclic) cone of
    /// the identity.
    pub fn cone_mult(&self, m: usize) -> Result<RComplex> {
        if m >= self.n {
            return Err(Error::PrecisionLimit(format!(
                "cone of p^{m} at Witt precision {} needs m < n",
                self.n
            )));
        }
        let cap = self.n - m;
        let capped =
            |shape: &[usize]| -> Vec<usize> { shape.iter().map(|&a| a.min(cap)).collect() };
        // recanonicalize an operator on the capped shapes (entries are
        // reduced mod the capped annihilators by the constructor)
        let cap_map = |op: &SemilinearMap| -> SemilinearMap {
            SemilinearMap::new(
                self.field.clone(),
                self.n,
                capped(op.src()),
                capped(op.tgt()),
                op.twist(),
                op.entries().clone(),
            )
            .expect("capping preserves validity")
        };

        let mut out = RComplex::new(self.field.clone(), self.n);
        let mut keys: alloc::collections::BTreeSet<(i64, i64)> = alloc::collections::BTreeSet::new();
        for &(i, j) in self.entries.keys() {
            keys.insert((i, j));
            keys.insert((i, j - 1));
        }
        for &(i, j) in &keys {
            // cone entry at (i, j) = trunc C^{i, j+1} ⊕ C^{i, j}
            let src_part = capped(self.entry_shape(i, j + 1));
            let tgt_part = self.entry_shape(i, j).to_vec();
            let mut shape = src_part.clone();
            shape.extend_from_slice(&tgt_part);
            if shape.is_empty() {
                continue;
            }
            let mut f_parts = Vec::new();
            let mut v_parts = Vec::new();
            if !src_part.is_empty() {
                f_parts.push(cap_map(&self.f_ops[&(i, j + 1)]));
                v_parts.push(cap_map(&self.v_ops[&(i, j + 1)]));
            }
            if !tgt_part.is_empty() {
                f_parts.push(self.f_ops[&(i, j)].clone());
                v_parts.push(self.v_ops[&(i, j)].clone());
            }
            out.insert_entry(
                i,
                j,
                shape,
                SemilinearMap::block_diag(&f_parts)?,
                SemilinearMap::block_diag(&v_parts)?,
            )?;
        }
        // horizontal d: block diagonal
        for &(i, j) in &keys {
            if out.entry_shape(i, j).is_empty() || out.entry_shape(i + 1, j).is_empty() {
                continue;
            }
            let blocks = [
                self.d_h
                    .get(&(i, j + 1))
                    .map(cap_map)
                    .or_else(|| zero_between(self, i, j + 1, i + 1, j + 1).map(|z| cap_map(&z))),
                self.d_h.get(&(i, j)).cloned().or_else(|| {
                    zero_between(self, i, j, i + 1, j)
                }),
            ];
            let parts: Vec<SemilinearMap> = blocks.into_iter().flatten().collect();
            if parts.iter().any(|d| !d.is_zero()) {
                out.set_d_h(i, j, SemilinearMap::block_diag(&parts)?)?;
            }
        }
        // vertical ∂: [[-trunc ∂, 0], [p^m·lift, ∂]]
        for &(i, j) in &keys {
            let src_shape = out.entry_shape(i, j).to_vec();
            let tgt_shape = out.entry_shape(i, j + 1).to_vec();
            if src_shape.is_empty() || tgt_shape.is_empty() {
                continue;
            }
            let a_src = capped(self.entry_shape(i, j + 1)); // trunc C^{j+1}
            let b_src = self.entry_shape(i, j).to_vec(); // C^{j}
            let a_tgt = capped(self.entry_shape(i, j + 2)); // trunc C^{j+2}
            let b_tgt = self.entry_shape(i, j + 1).to_vec(); // C^{j+1}
            let zero = WittVec::zero(&self.field, self.n);
            let mut mat = Mat::filled(tgt_shape.len(), src_shape.len(), zero);
            // block (0,0): -trunc ∂^{i,j+1}
            if let Some(d) = self.d_v.get(&(i, j + 1)) {
                let d = cap_map(d).neg();
                for l in 0..a_tgt.len() {
                    for k in 0..a_src.len() {
                        mat.set(l, k, d.entries().at(l, k).clone());
                    }
                }
            }
            // block (1,0): the connector p^m (diagonal)
            for (k, _) in a_src.iter().enumerate() {
                mat.set(a_tgt.len() + k, k, WittVec::p_pow(&self.field, self.n, m));
            }
            // block (1,1): ∂^{i,j}
            if let Some(d) = self.d_v.get(&(i, j)) {
                for l in 0..b_tgt.len() {
                    for k in 0..b_src.len() {
                        mat.set(a_tgt.len() + l, a_src.len() + k, d.entries().at(l, k).clone());
                    }
                }
            }
            let map = SemilinearMap::new(
                self.field.clone(),
                self.n,
                src_shape,
                tgt_shape,
                0,
                mat,
            )?;
            out.set_d_v(i, j, map)?;
        }
        Ok(out)
    }

    /// The `j`-th cohomology of the bicomplex: the graded R-module
    /// `i ↦ ker(∂^{i,j})/im(∂^{i,j-1})` with the induced `F`, `V` and
    /// horizontal `d`.
    pub fn cohomology_h(&self, j: i64) -> GradedRModule {
        let ring = WittLocal::new(self.field.clone(), self.n);
        let r_degrees: alloc::collections::BTreeSet<i64> = self
            .entries
            .keys()
            .filter(|&&(_, jj)| jj == j)
            .map(|&(i, _)| i)
            .collect();

        let mut pieces: BTreeMap<i64, HPiece> = BTreeMap::new();
        for &i in &r_degrees {
            let amb = self.entry_shape(i, j).to_vec();
            let z = match self.d_v.get(&(i, j)) {
                Some(d) => {
                    let shaped = ShapedMap::new(
                        &ring,
                        d.src().to_vec(),
                        d.tgt().to_vec(),
                        d.entries().clone(),
                    )
                    .expect("validated vertical map");
                    kernel_shaped(&ring, &shaped)
                }
                None => ambient_gens(&ring, amb.len()),
            };
            let b = match self.d_v.get(&(i, j - 1)) {
                Some(d) => d.entries().clone(),
                None => Mat::filled(amb.len(), 0, ring.zero()),
            };
            let sq = subquotient(&ring, &amb, &z, &b);
            // canonical component order: exponents descending
            let mut order: Vec<usize> = (0..sq.exps.len()).collect();
            order.sort_by(|&a, &b| sq.exps[b].cmp(&sq.exps[a]).then(a.cmp(&b)));
            let shape: Vec<usize> = order.iter().map(|&k| sq.exps[k]).collect();
            pieces.insert(i, HPiece { sq, order, shape });
        }

        let mut out = GradedRModule::new(self.field.clone(), self.n);
        // induced endomorphisms F, V
        for &i in &r_degrees {
            let piece = &pieces[&i];
            if piece.shape.is_empty() {
                continue;
            }
            let f = induced_map(&ring, piece, piece, &self.f_ops[&(i, j)]);
            let v = induced_map(&ring, piece, piece, &self.v_ops[&(i, j)]);
            out.insert_component(i, piece.shape.clone(), f, v)
                .expect("induced component");
        }
        // induced horizontal d
        for &i in &r_degrees {
            let piece = &pieces[&i];
            if piece.shape.is_empty() {
                continue;
            }
            let Some(next) = pieces.get(&(i + 1)) else {
                continue;
            };
            if next.shape.is_empty() {
                continue;
            }
            if let Some(dh) = self.d_h.get(&(i, j)) {
                let d = induced_map(&ring, piece, next, dh);
                if !d.is_zero() {
                    out.set_d(i, d).expect("induced differential");
                }
            }
        }
        out
    }
}

/// One cohomology component: subquotient data plus the descending
/// presentation order.
struct HPiece {
    sq: Subquotient<WittLocal>,
    order: Vec<usize>,
    shape: Vec<usize>,
}

impl HPiece {
    /// Generator `k` (in descending order) as a canonical component element.
    fn generator(&self, k: usize) -> Vec<WittVec> {
        let col = self.sq.gens.col(self.order[k]);
        col.into_iter()
            .zip(&self.sq.amb_exps)
            .map(|(w, &a)| w.clear_from(a))
            .collect()
    }

    fn express_desc(&self, ring: &WittLocal, v: &[WittVec]) -> Vec<WittVec> {
        let coords = self
            .sq
            .express(ring, v)
            .expect("image must lie in the kernel subquotient");
        self.order.iter().map(|&k| coords[k].clone()).collect()
    }
}

/// The matrix of `op` on the subquotient generators: apply `op` to each
/// generator of `src` and express the result in the generators of `tgt`.
fn induced_map(
    ring: &WittLocal,
    src: &HPiece,
    tgt: &HPiece,
    op: &SemilinearMap,
) -> SemilinearMap {
    let cols: Vec<Vec<WittVec>> = (0..src.shape.len())
        .map(|k| {
            let img = op.apply(&src.generator(k)).expect("validated shapes");
            tgt.express_desc(ring, &img)
        })
        .collect();
    let mat = Mat::from_cols(tgt.shape.len(), cols);
    SemilinearMap::new(
        op.field().clone(),
        op.n(),
        src.shape.clone(),
        tgt.shape.clone(),
        op.twist(),
        mat,
    )
    .expect("induced operators are well-defined")
}

fn compose_opt(
    a: Option<&SemilinearMap>,
    b: Option<&SemilinearMap>,
) -> Option<SemilinearMap> {
    match (a, b) {
        (Some(a), Some(b)) => Some(a.compose(b).expect("validated shapes")),
        _ => None,
    }
}

fn maps_equal_as_zeroable(a: &Option<SemilinearMap>, b: &Option<SemilinearMap>) -> bool {
    match (a, b) {
        (Some(x), Some(y)) => x == y,
        (Some(x), None) => x.is_zero(),
        (None, Some(y)) => y.is_zero(),
        (None, None) => true,
    }
}

fn remap<T: Clone>(
    map: &BTreeMap<(i64, i64), T>,
    f: impl Fn((i64, i64)) -> (i64, i64),
) -> BTreeMap<(i64, i64), T> {
    map.iter().map(|(&k, v)| (f(k), v.clone())).collect()
}

fn zero_between(
    c: &RComplex,
    i0: i64,
    j0: i64,
    i1: i64,
    j1: i64,
) -> Option<SemilinearMap> {
    let src = c.entry_shape(i0, j0);
    let tgt = c.entry_shape(i1, j1);
    if src.is_empty() && tgt.is_empty() {
        return None;
    }
    Some(SemilinearMap::zero(
        &c.field,
        c.n,
        src.to_vec(),
        tgt.to_vec(),
        0,
    ))
}

/// A single column `M^{r•}` of a bicomplex: terms with `F` and vertical `∂`.
#[derive(Debug, Clone, PartialEq)]
pub struct ColumnComplex {
    field: FieldDesc,
    n: usize,
    r: i64,
    terms: BTreeMap<i64, Vec<usize>>,
    deltas: BTreeMap<i64, SemilinearMap>,
    f_ops: BTreeMap<i64, SemilinearMap>,
}

impl ColumnComplex {
    pub fn field(&self) -> &FieldDesc {
        &self.field
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn r_degree(&self) -> i64 {
        self.r
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degrees(&self) -> impl Iterator<Item = i64> + '_ {
        self.terms.keys().copied()
    }

    pub fn term(&self, j: i64) -> &[usize] {
        self.terms.get(&j).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn delta(&self, j: i64) -> Option<&SemilinearMap> {
        self.deltas.get(&j)
    }

    pub fn f_op(&self, j: i64) -> Option<&SemilinearMap> {
        self.f_ops.get(&j)
    }
}

/// Entry-wise direct sum of bicomplexes over the same scalars.
pub fn direct_sum_cx(summands: &[RComplex]) -> Result<RComplex> {
    let first = summands
        .first()
        .ok_or_else(|| Error::Shape(String::from("direct sum of nothing")))?;
    let field = first.field.clone();
    let n = first.n;
    if summands.iter().any(|c| c.field != field || c.n != n) {
        return Err(Error::Shape(String::from(
            "direct sum over mismatched scalars",
        )));
    }
    let mut keys: alloc::collections::BTreeSet<(i64, i64)> = alloc::collections::BTreeSet::new();
    for c in summands {
        keys.extend(c.entries.keys().copied());
    }
    let mut out = RComplex::new(field.clone(), n);
    for &(i, j) in &keys {
        let mut shape = Vec::new();
        let mut f_parts = Vec::new();
        let mut v_parts = Vec::new();
        for c in summands {
            let part = c.entry_shape(i, j);
            if part.is_empty() {
                continue;
            }
            shape.extend_from_slice(part);
            f_parts.push(c.f_ops[&(i, j)].clone());
            v_parts.push(c.v_ops[&(i, j)].clone());
        }
        if shape.is_empty() {
            continue;
        }
        out.insert_entry(
            i,
            j,
            shape,
            SemilinearMap::block_diag(&f_parts)?,
            SemilinearMap::block_diag(&v_parts)?,
        )?;
    }
    // block-diagonal differentials, with zero blocks where a summand has none
    for &(i, j) in &keys {
        for (horizontal, (ti, tj)) in [(true, (i + 1, j)), (false, (i, j + 1))] {
            if out.entry_shape(i, j).is_empty() || out.entry_shape(ti, tj).is_empty() {
                continue;
            }
            let mut parts = Vec::new();
            let mut any = false;
            for c in summands {
                let src = c.entry_shape(i, j);
                let tgt = c.entry_shape(ti, tj);
                if src.is_empty() && tgt.is_empty() {
                    continue;
                }
                let found = if horizontal {
                    c.d_h.get(&(i, j))
                } else {
                    c.d_v.get(&(i, j))
                };
                match found {
                    Some(d) => {
                        any = true;
                        parts.push(d.clone());
                    }
                    None => parts.push(SemilinearMap::zero(
                        &field,
                        n,
                        src.to_vec(),
                        tgt.to_vec(),
                        0,
                    )),
                }
            }
            if any {
                let block = SemilinearMap::block_diag(&parts)?;
                if horizontal {
                    out.set_d_h(i, j, block)?;
                } else {
                    out.set_d_v(i, j, block)?;
                }
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::module::make_unit;

    fn unit_cx(p: u64, f: usize, n: usize) -> RComplex {
        RComplex::from_module(&make_unit(&FieldDesc::new(p, f).unwrap(), n), 0)
    }

    #[test]
    fn column_extraction() {
        let c = unit_cx(2, 1, 3);
        let col0 = c.column(0);
        assert_eq!(col0.term(0), &[3]);
        assert!(col0.delta(0).is_none());
        assert!(c.column(1).is_zero());
        assert!(c.column(-5).is_zero());
    }

    #[test]
    fn validate_unit_complex() {
        assert!(unit_cx(2, 2, 2).validate().is_empty());
        assert!(unit_cx(3, 1, 3).validate().is_empty());
    }

    #[test]
    fn shift_composes_and_signs() {
        let c = unit_cx(2, 1, 2);
        assert_eq!(c.shift(2).shift(3), c.shift(5));
        assert_eq!(c.shift(0), c);
        assert_eq!(c.shift(1).entry_shape(0, -1), &[2]);
    }

    #[test]
    fn tate_twist_functor_laws() {
        let c = unit_cx(2, 2, 2);
        assert_eq!(c.tate_twist(0), c);
        // (r)∘(s) = (r+s)
        for r in -2..=2 {
            for s in -2..=2 {
                assert_eq!(c.tate_twist(s).tate_twist(r), c.tate_twist(r + s));
            }
        }
        // 𝟙(1) sits at (R-degree -1, complex degree 1)
        let t = c.tate_twist(1);
        assert_eq!(t.entry_shape(-1, 1), &[2]);
        assert!(t.entry_shape(0, 0).is_empty());
        // T ∘ T^{-1} = id row-wise
        assert_eq!(c.twist_t_cx(1).twist_t_cx(-1), c);
        // functors preserve validity
        assert!(c.tate_twist(2).validate().is_empty());
        assert!(c.shift(-3).validate().is_empty());
    }

    #[test]
    fn twist_matches_column_reindexing() {
        // column(C(r), 0) at degree j equals column(C, r) at degree j - r
        let c = unit_cx(3, 1, 2);
        for r in -2..=2i64 {
            let t = c.tate_twist(r);
            let col_t = t.column(0);
            let col_c = c.column(r);
            for j in -3..=3i64 {
                assert_eq!(col_t.term(j), col_c.term(j - r));
            }
        }
    }

    #[test]
    fn cohomology_of_one_entry_complex() {
        let c = unit_cx(2, 1, 3);
        let h0 = c.cohomology_h(0);
        assert_eq!(h0.component(0), Some(&alloc::vec![3]));
        assert!(h0.validate().is_empty());
        // F survives as σ (the identity matrix here)
        let f = h0.f_op(0).unwrap();
        assert_eq!(f.twist(), 1);
        assert!(!f.is_zero());
        let h1 = c.cohomology_h(1);
        assert!(h1.degrees().next().is_none());
    }

    #[test]
    fn cone_of_identity_is_acyclic() {
        let c = unit_cx(2, 1, 3);
        let cone = c.cone_mult(0).unwrap();
        assert!(cone.validate().is_empty());
        for j in -2..=2 {
            assert!(cone.cohomology_h(j).degrees().next().is_none());
        }
    }

    #[test]
    fn cone_of_p_m_has_mod_pm_cohomology() {
        // H^0(cone(p^m on 𝟙)) = W_n/p^m ≅ W_m, and the cone map is
        // injective by construction, so H^{-1} vanishes.
        let c = unit_cx(2, 1, 3);
        let cone = c.cone_mult(1).unwrap();
        assert!(cone.validate().is_empty());
        assert_eq!(cone.entry_shape(0, -1), &[2]);
        assert_eq!(cone.entry_shape(0, 0), &[3]);
        let h0 = cone.cohomology_h(0);
        assert_eq!(h0.component(0), Some(&alloc::vec![1]));
        assert!(h0.validate().is_empty());
        let hm1 = cone.cohomology_h(-1);
        assert!(hm1.degrees().next().is_none());
        // m >= n is a precision error
        assert!(matches!(
            c.cone_mult(3),
            Err(Error::PrecisionLimit(_))
        ));
    }

    #[test]
    fn cohomology_commutes_with_direct_sum() {
        let a = unit_cx(2, 2, 2);
        let b = a.tate_twist(-1);
        let sum = direct_sum_cx(&[a.clone(), b.clone()]).unwrap();
        assert!(sum.validate().is_empty());
        for j in -1..=2 {
            let hs = sum.cohomology_h(j);
            let ha = a.cohomology_h(j);
            let hb = b.cohomology_h(j);
            for i in -3..=3 {
                let mut expect: Vec<usize> = Vec::new();
                expect.extend(ha.component(i).cloned().unwrap_or_default());
                expect.extend(hb.component(i).cloned().unwrap_or_default());
                expect.sort_unstable_by(|x, y| y.cmp(x));
                let got = hs.component(i).cloned().unwrap_or_default();
                assert_eq!(got, expect, "j={j} i={i}");
            }
        }
    }
}
