//! Factor curves over the projective line in `y0`, their fiber product, and
//! the evaluation set lying above the completely split base values.
//!
//! Every factor is a relation between the base coordinate `y0` and one extra
//! coordinate `y_i` of the shape `A(y_i) = c * y0^m`, where `A` is one of the
//! Artin-Schreier, trace or norm forms. A `swapped` factor reads the other
//! way round, `A(y0) = c * y_i^m`, as in `y0^q + y0 = y1^(q+1)`.

use std::ops::Range;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf::{Field, FieldElement};

/// Largest field order that is enumerated point by point.
pub const ENUM_CAP: u64 = 1 << 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CurveForm {
    /// `A(y) = y^p - y`
    #[serde(rename = "AS")]
    ArtinSchreier,
    /// `A(y) = y^q + y`
    #[serde(rename = "trace")]
    Trace,
    /// `A(y) = y^(q+1)`
    #[serde(rename = "norm")]
    Norm,
}

/// One factor curve. Serializes as `{family, c, m, swapped}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorCurve {
    #[serde(rename = "family")]
    pub form: CurveForm,
    pub c: FieldElement,
    pub m: u64,
    #[serde(default)]
    pub swapped: bool,
}

impl FactorCurve {
    pub fn new(form: CurveForm, c: FieldElement, m: u64) -> Self {
        FactorCurve { form, c, m, swapped: false }
    }

    pub fn swapped(form: CurveForm, c: FieldElement, m: u64) -> Self {
        FactorCurve { form, c, m, swapped: true }
    }

    fn form_degree(&self, field: &Field) -> u64 {
        match self.form {
            CurveForm::ArtinSchreier => field.p() as u64,
            CurveForm::Trace => field.half_order().unwrap_or(0),
            CurveForm::Norm => field.half_order().unwrap_or(0) + 1,
        }
    }

    /// Degree `d_h` of the projection of this factor onto the `y0` line.
    pub fn map_degree(&self, field: &Field) -> u64 {
        if self.swapped {
            self.m
        } else {
            self.form_degree(field)
        }
    }

    /// Degree of `y_i` as a function on the factor curve itself.
    pub fn coordinate_degree(&self, field: &Field) -> u64 {
        if self.swapped {
            self.form_degree(field)
        } else {
            self.m
        }
    }

    pub fn lhs(&self, field: &Field, y: FieldElement) -> FieldElement {
        match self.form {
            CurveForm::ArtinSchreier => field.artin_schreier(y),
            CurveForm::Trace => field.rel_trace(y).expect("validated even degree"),
            CurveForm::Norm => field.rel_norm(y).expect("validated even degree"),
        }
    }

    fn monomial(&self, field: &Field, y: FieldElement) -> FieldElement {
        field.mul(self.c, field.pow(y, self.m as u128))
    }

    /// Does `(y0, yi)` satisfy the relation?
    pub fn holds(&self, field: &Field, y0: FieldElement, yi: FieldElement) -> bool {
        if self.swapped {
            self.lhs(field, y0) == self.monomial(field, yi)
        } else {
            self.lhs(field, yi) == self.monomial(field, y0)
        }
    }

    /// The `y_i`-side value that must match the `y0`-side target.
    fn key(&self, field: &Field, yi: FieldElement) -> FieldElement {
        if self.swapped {
            self.monomial(field, yi)
        } else {
            self.lhs(field, yi)
        }
    }

    fn target(&self, field: &Field, y0: FieldElement) -> FieldElement {
        if self.swapped {
            self.lhs(field, y0)
        } else {
            self.monomial(field, y0)
        }
    }
}

/// Bucketed inverse of `y -> key(y)` over the whole field.
#[derive(Clone, Debug)]
struct Solver {
    starts: Vec<u32>,
    items: Vec<FieldElement>,
}

impl Solver {
    fn build(field: &Field, factor: &FactorCurve) -> Solver {
        let order = field.order() as usize;
        let keys: Vec<u32> = field.elements().map(|y| factor.key(field, y).enc()).collect();
        let mut starts = vec![0u32; order + 1];
        for &k in &keys {
            starts[k as usize + 1] += 1;
        }
        for i in 0..order {
            starts[i + 1] += starts[i];
        }
        let mut fill = starts.clone();
        let mut items = vec![FieldElement::ZERO; order];
        for (y, &k) in keys.iter().enumerate() {
            items[fill[k as usize] as usize] = FieldElement::from_enc(y as u32);
            fill[k as usize] += 1;
        }
        Solver { starts, items }
    }

    fn solve(&self, target: FieldElement) -> &[FieldElement] {
        let k = target.enc() as usize;
        &self.items[self.starts[k] as usize..self.starts[k + 1] as usize]
    }
}

/// A fiber product of factor curves over the `y0` line, with the per-factor
/// degrees `d_{y_i}` of the coordinate functions on the whole product.
#[derive(Clone, Debug)]
pub struct FiberProduct {
    field: Arc<Field>,
    factors: Vec<FactorCurve>,
    d_y: Vec<u64>,
    solvers: Vec<Solver>,
}

/// The split locus and the fiber size of every base value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitLocus {
    pub split: Vec<FieldElement>,
    /// `fiber_sizes[enc(alpha)]`
    pub fiber_sizes: Vec<u64>,
}

impl FiberProduct {
    pub fn new(field: Arc<Field>, factors: Vec<FactorCurve>, d_y: Vec<u64>) -> Result<FiberProduct> {
        if factors.is_empty() {
            return Err(Error::BadParams("a fiber product needs at least one factor".into()));
        }
        if d_y.len() != factors.len() {
            return Err(Error::BadParams("one coordinate degree per factor is required".into()));
        }
        if field.order() > ENUM_CAP {
            return Err(Error::TooLargeToEnumerate { order: field.order(), cap: ENUM_CAP });
        }
        for f in &factors {
            if f.c.is_zero() || !field.contains(f.c) {
                return Err(Error::BadParams("factor coefficient must be a nonzero field element".into()));
            }
            if matches!(f.form, CurveForm::Trace | CurveForm::Norm) {
                field.half_order()?;
            }
            if f.map_degree(&field) < 2 {
                return Err(Error::BadParams("every factor map needs degree at least 2".into()));
            }
        }
        let solvers = factors.par_iter().map(|f| Solver::build(&field, f)).collect();
        Ok(FiberProduct { field, factors, d_y, solvers })
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    pub fn factors(&self) -> &[FactorCurve] {
        &self.factors
    }

    /// Availability.
    pub fn t(&self) -> usize {
        self.factors.len()
    }

    pub fn d_h(&self) -> Vec<u64> {
        self.factors.iter().map(|f| f.map_degree(&self.field)).collect()
    }

    pub fn d_g(&self) -> u64 {
        self.d_h().iter().product()
    }

    pub fn d_y(&self) -> &[u64] {
        &self.d_y
    }

    /// Degrees of `y_i` on the factor curves `Y_i` (as opposed to the product).
    pub fn psi(&self) -> Vec<u64> {
        self.factors.iter().map(|f| f.coordinate_degree(&self.field)).collect()
    }

    pub fn localities(&self) -> Vec<u64> {
        self.d_h().iter().map(|d| d - 1).collect()
    }

    /// Per-factor solution sets above `alpha`, each sorted by `enc`.
    pub fn fiber_solutions(&self, alpha: FieldElement) -> Vec<&[FieldElement]> {
        self.factors.iter().zip(&self.solvers).map(|(f, s)| s.solve(f.target(&self.field, alpha))).collect()
    }

    pub fn fiber_size(&self, alpha: FieldElement) -> u64 {
        self.fiber_solutions(alpha).iter().map(|s| s.len() as u64).product()
    }

    /// All points `(alpha, y1, ..., yt)` above `alpha`, lexicographically ordered.
    pub fn fiber(&self, alpha: FieldElement) -> Vec<Vec<FieldElement>> {
        let mut out = Vec::new();
        self.push_fiber(alpha, &mut |pt| out.push(pt.to_vec()));
        out
    }

    fn push_fiber(&self, alpha: FieldElement, sink: &mut dyn FnMut(&[FieldElement])) {
        let sols = self.fiber_solutions(alpha);
        if sols.iter().any(|s| s.is_empty()) {
            return;
        }
        let t = sols.len();
        let mut idx = vec![0usize; t];
        let mut pt = vec![alpha; t + 1];
        loop {
            for i in 0..t {
                pt[i + 1] = sols[i][idx[i]];
            }
            sink(&pt);
            // odometer, last coordinate fastest
            let mut i = t;
            loop {
                if i == 0 {
                    return;
                }
                i -= 1;
                idx[i] += 1;
                if idx[i] < sols[i].len() {
                    break;
                }
                idx[i] = 0;
            }
        }
    }

    pub fn satisfies(&self, point: &[FieldElement]) -> bool {
        point.len() == self.t() + 1
            && self.factors.iter().enumerate().all(|(i, f)| f.holds(&self.field, point[0], point[i + 1]))
    }

    pub fn split_locus(&self) -> SplitLocus {
        let d_g = self.d_g();
        let fiber_sizes: Vec<u64> =
            self.field.elements().collect::<Vec<_>>().par_iter().map(|&a| self.fiber_size(a)).collect();
        let split = self.field.elements().filter(|a| fiber_sizes[a.enc() as usize] == d_g).collect();
        SplitLocus { split, fiber_sizes }
    }

    /// Number of affine points, summed over all base values.
    pub fn affine_point_count(&self) -> u64 {
        self.split_locus().fiber_sizes.iter().sum()
    }

    /// The points above the (optionally filtered) split locus.
    pub fn evaluation_set(&self, filter: Option<&(dyn Fn(FieldElement) -> bool + Sync)>) -> Result<EvaluationSet> {
        let locus = self.split_locus();
        let d_g = self.d_g();
        let mut base = Vec::new();
        let mut omega = Vec::new();
        for a in self.field.elements() {
            let size = locus.fiber_sizes[a.enc() as usize];
            if size == 0 {
                continue;
            }
            let keep = size == d_g && filter.is_none_or(|f| f(a));
            if keep {
                base.push(a);
            } else {
                omega.push(a);
            }
        }
        if base.is_empty() {
            return Err(Error::EmptyEvaluationSet);
        }
        let t = self.t();
        let chunks: Vec<Vec<FieldElement>> = base
            .par_iter()
            .map(|&a| {
                let mut flat = Vec::with_capacity(d_g as usize * (t + 1));
                self.push_fiber(a, &mut |pt| flat.extend_from_slice(pt));
                flat
            })
            .collect();
        let coords = chunks.concat();
        Ok(EvaluationSet { t, d_g: d_g as usize, base, omega, coords })
    }
}

/// The ordered point list `B` above the split locus `S`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EvaluationSet {
    t: usize,
    d_g: usize,
    base: Vec<FieldElement>,
    omega: Vec<FieldElement>,
    /// row-major `(y0, ..., yt)` per point
    coords: Vec<FieldElement>,
}

impl EvaluationSet {
    pub fn len(&self) -> usize {
        self.coords.len() / (self.t + 1)
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn d_g(&self) -> usize {
        self.d_g
    }

    /// The split locus `S` used, sorted by `enc`.
    pub fn base_values(&self) -> &[FieldElement] {
        &self.base
    }

    /// Base values with points above them that were left out of `S`.
    pub fn omega(&self) -> &[FieldElement] {
        &self.omega
    }

    pub fn point(&self, i: usize) -> &[FieldElement] {
        let w = self.t + 1;
        &self.coords[i * w..(i + 1) * w]
    }

    pub fn coordinate(&self, i: usize, c: usize) -> FieldElement {
        self.coords[i * (self.t + 1) + c]
    }

    pub fn points(&self) -> impl Iterator<Item = &[FieldElement]> {
        self.coords.chunks(self.t + 1)
    }

    /// Positions of the fiber above the `s`-th base value.
    pub fn fiber_range(&self, s: usize) -> Range<usize> {
        s * self.d_g..(s + 1) * self.d_g
    }

    /// Distinct values of coordinate `c` over `B`, sorted by `enc`.
    pub fn coordinate_values(&self, c: usize) -> Vec<FieldElement> {
        let mut v: Vec<FieldElement> = self.points().map(|p| p[c]).collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    /// Number of points of `B` whose coordinate `c` equals `value`.
    pub fn count_with(&self, c: usize, value: FieldElement) -> usize {
        self.points().filter(|p| p[c] == value).count()
    }
}

/// Enumerated versus closed-form point counts.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PointCountReport {
    pub affine_enumerated: Option<u64>,
    pub points_at_infinity: u64,
    pub closed_form_total: u64,
    /// `None` when the field was too large to enumerate.
    pub matches: Option<bool>,
}

impl PointCountReport {
    pub fn total_enumerated(&self) -> Option<u64> {
        self.affine_enumerated.map(|a| a + self.points_at_infinity)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::make_field;

    fn thc(q_p: u32, h: u32) -> FiberProduct {
        let field = Arc::new(make_field(q_p, 2 * h, None).unwrap());
        let q = field.half_order().unwrap();
        let factors = vec![
            FactorCurve::swapped(CurveForm::Trace, FieldElement::ONE, q + 1),
            FactorCurve::new(CurveForm::Trace, FieldElement::ONE, q + 1),
        ];
        FiberProduct::new(field, factors, vec![q * q, (q + 1) * (q + 1)]).unwrap()
    }

    #[test]
    fn two_hermitian_fibers() {
        let fp = thc(3, 1);
        let field = fp.field().clone();
        assert_eq!(fp.d_h(), vec![4, 3]);
        let locus = fp.split_locus();
        assert_eq!(locus.split.len(), 6);
        for a in field.elements() {
            let expect = if field.rel_trace(a).unwrap().is_zero() { 3 } else { 12 };
            assert_eq!(fp.fiber_size(a), expect);
        }
        // 72 above S and 3 above each trace-zero value; with the point at infinity q^4 + 1
        assert_eq!(fp.affine_point_count(), 81);
        let b = fp.evaluation_set(None).unwrap();
        assert_eq!(b.len(), 72);
        assert_eq!(b.omega().len(), 3);
        assert!(b.points().all(|p| fp.satisfies(p)));
        let pts: Vec<_> = b.points().map(|p| p.to_vec()).collect();
        let mut sorted = pts.clone();
        sorted.sort();
        assert_eq!(pts, sorted);
    }

    #[test]
    fn filter_and_empty_set() {
        let fp = thc(2, 1);
        let none = fp.evaluation_set(Some(&|_| false));
        assert_eq!(none.unwrap_err(), Error::EmptyEvaluationSet);
    }

    #[test]
    fn rejects_degenerate_factors() {
        let field = Arc::new(make_field(3, 2, None).unwrap());
        let zero_c = FactorCurve::new(CurveForm::ArtinSchreier, FieldElement::ZERO, 4);
        assert!(FiberProduct::new(field.clone(), vec![zero_c], vec![1]).is_err());
        let odd = Arc::new(make_field(3, 3, None).unwrap());
        let tr = FactorCurve::new(CurveForm::Trace, FieldElement::ONE, 2);
        assert_eq!(FiberProduct::new(odd, vec![tr], vec![1]).unwrap_err(), Error::OddDegree(3));
    }

    #[test]
    fn curve_spec_json() {
        let f = FactorCurve::swapped(CurveForm::Trace, FieldElement::ONE, 4);
        let s = serde_json::to_string(&f).unwrap();
        assert_eq!(s, r#"{"family":"trace","c":1,"m":4,"swapped":true}"#);
        let back: FactorCurve = serde_json::from_str(r#"{"family":"AS","c":5,"m":10}"#).unwrap();
        assert_eq!(back, FactorCurve::new(CurveForm::ArtinSchreier, FieldElement::from_enc(5), 10));
    }
}
