//! Minimum distance: brute force for tiny codes, minimum-weight witnesses
//! built from value sets `F_0, ..., F_t`, a backtracking search for such
//! sets, the counting criterion, and a combined certifier.

use std::collections::HashSet;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::code_builder::LrcCode;
use crate::curves::{CurveForm, FactorCurve};
use crate::error::{Error, Result};
use crate::family::{Family, Instance, Shape};
use crate::gf::{Field, FieldElement, FieldMap};
use crate::linalg::Matrix;

pub const DEFAULT_BRUTE_FORCE_CAP: u128 = 100_000_000;
pub const DEFAULT_SEARCH_BUDGET: usize = 10_000;

// ---------------------------------------------------------------- brute force

/// Minimum weight over all nonzero codewords of `code`.
pub fn exact_distance_bruteforce(code: &LrcCode, cap: u128) -> Result<u64> {
    min_weight_bruteforce(code.field(), code.generator(), cap)
}

/// Minimum nonzero weight of the row space of `g` over `field`.
///
/// The space is walked as an `F_p`-space with a modular `p`-ary Gray code,
/// so each step adds one basis row to a running word.
pub fn min_weight_bruteforce(field: &Field, g: &Matrix, cap: u128) -> Result<u64> {
    let p = field.p() as u64;
    let deg = field.degree();
    let n = g.cols;
    let dims = g.rows * deg as usize;
    let total = (p as u128).checked_pow(dims as u32);
    let count = total.map_or(u128::MAX, |t| t - 1);
    if count > cap {
        return Err(Error::TooLarge { count, cap });
    }
    if dims == 0 {
        return Ok(n as u64);
    }
    let total = total.unwrap() as u64;
    // F_p basis rows b^e * G_r
    let mut basis: Vec<Vec<FieldElement>> = Vec::with_capacity(dims);
    for r in 0..g.rows {
        for e in 0..deg {
            let s = FieldElement::from_enc((p as u32).pow(e));
            basis.push(g.row(r).iter().map(|&x| field.mul(s, x)).collect());
        }
    }
    let chunks = total.min(1024);
    let size = total.div_ceil(chunks);
    let best = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let start = c * size;
            let end = ((c + 1) * size).min(total);
            if start >= end {
                return u64::MAX;
            }
            let mut digits = to_digits(start, p, dims);
            let mut word = vec![FieldElement::ZERO; n];
            for i in 0..dims {
                let next = if i + 1 < dims { digits[i + 1] } else { 0 };
                let gi = (digits[i] + p - next) % p;
                if gi != 0 {
                    let s = field.from_int(gi as i64);
                    for (w, &b) in word.iter_mut().zip(&basis[i]) {
                        *w = field.add(*w, field.mul(s, b));
                    }
                }
            }
            let mut best = if start == 0 { u64::MAX } else { weight(&word) };
            for _ in start + 1..end {
                // digits holds s-1; the Gray digit that moves is the count of trailing p-1 digits
                let mut j = 0;
                while digits[j] == p - 1 {
                    digits[j] = 0;
                    j += 1;
                }
                digits[j] += 1;
                for (w, &b) in word.iter_mut().zip(&basis[j]) {
                    *w = field.add(*w, b);
                }
                best = best.min(weight(&word));
            }
            best
        })
        .min()
        .unwrap_or(u64::MAX);
    Ok(best)
}

fn to_digits(mut v: u64, p: u64, len: usize) -> Vec<u64> {
    let mut d = vec![0; len + 1];
    for x in d.iter_mut() {
        *x = v % p;
        v /= p;
    }
    d
}

fn weight(w: &[FieldElement]) -> u64 {
    w.iter().filter(|x| !x.is_zero()).count() as u64
}

// ---------------------------------------------------------------- witnesses

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    ConstructedByTheorem,
    Searched,
    UserSupplied,
}

/// Value sets `F_0` (base values) and `F_1..F_t`; only the first
/// `d_{h_i} - 2` elements of each `F_i` enter the witness function.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessSpec {
    pub l: u64,
    #[serde(rename = "F0")]
    pub f0: Vec<FieldElement>,
    #[serde(rename = "F")]
    pub f: Vec<Vec<FieldElement>>,
    #[serde(default)]
    pub certified_weight: Option<u64>,
    #[serde(default = "user_supplied")]
    pub provenance: Provenance,
}

fn user_supplied() -> Provenance {
    Provenance::UserSupplied
}

fn invalid(condition: u8, detail: impl Into<String>) -> Error {
    Error::InvalidWitness { condition, detail: detail.into() }
}

fn consumed<'a>(code: &LrcCode, w: &'a WitnessSpec, i: usize) -> &'a [FieldElement] {
    let take = (code.d_h()[i] as usize - 2).min(w.f[i].len());
    &w.f[i][..take]
}

/// The relation of `factor` with `y_i = gamma`, as a polynomial in `y0`
/// (low degree first).
fn relation_in_y0(field: &Field, factor: &FactorCurve, gamma: FieldElement) -> Vec<FieldElement> {
    let m = factor.m as usize;
    if !factor.swapped {
        // c y0^m - A(gamma)
        let mut v = vec![FieldElement::ZERO; m + 1];
        v[0] = field.neg(factor.lhs(field, gamma));
        v[m] = field.add(v[m], factor.c);
        v
    } else {
        // A(y0) - c gamma^m
        let q = field.half_order().unwrap_or(0) as usize;
        let one = FieldElement::ONE;
        let mut v = match factor.form {
            CurveForm::ArtinSchreier => {
                let p = field.p() as usize;
                let mut v = vec![FieldElement::ZERO; p + 1];
                v[p] = one;
                v[1] = field.neg(one);
                v
            }
            CurveForm::Trace => {
                let mut v = vec![FieldElement::ZERO; q + 1];
                v[q] = one;
                v[1] = field.add(v[1], one);
                v
            }
            CurveForm::Norm => {
                let mut v = vec![FieldElement::ZERO; q + 2];
                v[q + 1] = one;
                v
            }
        };
        v[0] = field.sub(v[0], field.mul(factor.c, field.pow(gamma, factor.m as u128)));
        v
    }
}

fn trim(v: &mut Vec<FieldElement>) {
    while v.last().is_some_and(|x| x.is_zero()) {
        v.pop();
    }
}

fn poly_rem(field: &Field, a: &[FieldElement], m: &[FieldElement]) -> Vec<FieldElement> {
    let mut r = a.to_vec();
    trim(&mut r);
    let dm = m.len() - 1;
    let inv = field.inv(m[dm]);
    while r.len() > dm {
        let top = r.len() - 1;
        let f = field.mul(r[top], inv);
        let shift = top - dm;
        for (i, &c) in m.iter().enumerate() {
            r[shift + i] = field.sub(r[shift + i], field.mul(f, c));
        }
        trim(&mut r);
    }
    r
}

/// Degree of `gcd(a, b)`; `None` when both vanish identically.
fn gcd_degree(field: &Field, a: &[FieldElement], b: &[FieldElement]) -> Option<usize> {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    trim(&mut x);
    trim(&mut y);
    while !y.is_empty() {
        let r = poly_rem(field, &x, &y);
        x = y;
        y = r;
    }
    (!x.is_empty()).then(|| x.len() - 1)
}

/// Is there a point over the algebraic closure with `y_i = gi` and `y_j = gj`?
fn closure_conflict(field: &Field, fi: &FactorCurve, gi: FieldElement, fj: &FactorCurve, gj: FieldElement) -> bool {
    let a = relation_in_y0(field, fi, gi);
    let b = relation_in_y0(field, fj, gj);
    gcd_degree(field, &a, &b).is_none_or(|d| d > 0)
}

struct Checker<'a> {
    code: &'a LrcCode,
    factors: Vec<FactorCurve>,
    /// `counts[c][enc]` = points of `B` with coordinate `c` equal to `enc`
    counts: Vec<Vec<u32>>,
}

impl<'a> Checker<'a> {
    fn new(code: &'a LrcCode, factors: &[FactorCurve]) -> Self {
        let order = code.field().order() as usize;
        let eval = code.evaluation_set();
        let mut counts = vec![vec![0u32; order]; code.t() + 1];
        for pt in eval.points() {
            for (c, y) in pt.iter().enumerate() {
                counts[c][y.enc() as usize] += 1;
            }
        }
        Checker { code, factors: factors.to_vec(), counts }
    }

    fn d_y(&self, c: usize) -> u32 {
        if c == 0 {
            self.code.d_g() as u32
        } else {
            self.code.d_y()[c - 1] as u32
        }
    }

    /// Conditions (1) and (5) for a single value.
    fn value_ok(&self, c: usize, v: FieldElement) -> bool {
        let k = self.counts[c].get(v.enc() as usize).copied().unwrap_or(0);
        k == self.d_y(c)
    }

    fn base_conflict(&self, i: usize, beta: FieldElement, gamma: FieldElement) -> bool {
        self.factors[i].holds(self.code.field(), beta, gamma)
    }

    fn pair_conflict(&self, i: usize, gi: FieldElement, j: usize, gj: FieldElement) -> bool {
        closure_conflict(self.code.field(), &self.factors[i], gi, &self.factors[j], gj)
    }
}

fn factors_of(code: &LrcCode, factors: &[FactorCurve]) -> Result<()> {
    if factors.len() != code.t() {
        return Err(Error::BadParams("factor list does not match the code".into()));
    }
    Ok(())
}

/// Checks conditions (1)-(5) against the enumerated evaluation set. Pairs of
/// coordinate sets are tested for common points over the algebraic closure
/// through the gcd of their relations in `y0`.
pub fn verify_witness(code: &LrcCode, factors: &[FactorCurve], w: &WitnessSpec) -> Result<()> {
    factors_of(code, factors)?;
    let t = code.t();
    if w.f.len() != t {
        return Err(invalid(3, format!("expected {t} coordinate sets, got {}", w.f.len())));
    }
    if w.f0.len() as u64 != w.l || w.l != code.l() {
        return Err(invalid(2, format!("|F0| = {} but l = {}", w.f0.len(), code.l())));
    }
    for i in 0..t {
        let need = code.d_h()[i] as usize - 2;
        if w.f[i].len() < need {
            return Err(invalid(3, format!("|F{}| = {} < {need}", i + 1, w.f[i].len())));
        }
    }
    let ck = Checker::new(code, factors);
    let field = code.field();
    let distinct = |v: &[FieldElement]| v.iter().collect::<HashSet<_>>().len() == v.len();
    if !distinct(&w.f0) {
        return Err(invalid(2, "F0 has repeated values"));
    }
    for i in 0..t {
        if !distinct(consumed(code, w, i)) {
            return Err(invalid(3, format!("F{} has repeated values", i + 1)));
        }
    }
    for &b in &w.f0 {
        if !field.contains(b) || ck.counts[0][b.enc() as usize] == 0 {
            return Err(invalid(1, format!("{b} is not a y0 value of B")));
        }
        if !ck.value_ok(0, b) {
            return Err(invalid(5, format!("y0 = {b} does not have {} points", ck.d_y(0))));
        }
    }
    for i in 0..t {
        for &g in consumed(code, w, i) {
            if !field.contains(g) || ck.counts[i + 1][g.enc() as usize] == 0 {
                return Err(invalid(1, format!("{g} is not a y{} value of B", i + 1)));
            }
            if !ck.value_ok(i + 1, g) {
                return Err(invalid(5, format!("y{} = {g} does not have {} points in B", i + 1, ck.d_y(i + 1))));
            }
            if let Some(&b) = w.f0.iter().find(|&&b| ck.base_conflict(i, b, g)) {
                return Err(invalid(4, format!("a point has y0 = {b} and y{} = {g}", i + 1)));
            }
        }
    }
    for i in 0..t {
        for j in i + 1..t {
            for &gi in consumed(code, w, i) {
                for &gj in consumed(code, w, j) {
                    if ck.pair_conflict(i, gi, j, gj) {
                        return Err(invalid(4, format!("a point has y{} = {gi} and y{} = {gj}", i + 1, j + 1)));
                    }
                }
            }
        }
    }
    Ok(())
}

/// Evaluates `prod (y0 - beta) * prod prod (y_i - gamma)` over `B`.
pub fn evaluate_witness(code: &LrcCode, w: &WitnessSpec) -> (Vec<FieldElement>, u64) {
    let field = code.field();
    let eval = code.evaluation_set();
    let word: Vec<FieldElement> = eval
        .points()
        .map(|pt| {
            let mut v = FieldElement::ONE;
            for &b in &w.f0 {
                v = field.mul(v, field.sub(pt[0], b));
            }
            for i in 0..code.t() {
                for &g in consumed(code, w, i) {
                    v = field.mul(v, field.sub(pt[i + 1], g));
                }
            }
            v
        })
        .collect();
    let wt = weight(&word);
    (word, wt)
}

/// Verifies `w` and returns its codeword and weight.
pub fn witness_weight(code: &LrcCode, factors: &[FactorCurve], w: &WitnessSpec) -> Result<(Vec<FieldElement>, u64)> {
    verify_witness(code, factors, w)?;
    Ok(evaluate_witness(code, w))
}

fn certified(code: &LrcCode) -> Option<u64> {
    u64::try_from(code.params().d_lower).ok()
}

fn subfield_nonzero(field: &Field) -> Result<Vec<FieldElement>> {
    let h = field.half_order().map(|_| field.degree() / 2)?;
    Ok(field.subfield_elements(h).into_iter().filter(|x| !x.is_zero()).collect())
}

fn require_family(inst: &Instance, ok: bool) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::BadParams(format!("witness does not apply to the {} family", inst.family.name())))
    }
}

/// Witness for `y^q + y = x^(q+1)` on all affine points, `l <= q^2 - q - 2`.
pub fn witness_hermitian_rational(inst: &Instance, l: u64) -> Result<WitnessSpec> {
    require_family(inst, matches!(inst.family, Family::HermitianRational { .. }))?;
    let field = inst.fiber_product.field();
    let q = field.half_order()?;
    let max = (q * q).saturating_sub(q + 2);
    if l > max || q * q < q + 2 {
        return Err(Error::LOutOfRange { l, max });
    }
    let f0: Vec<FieldElement> = field
        .elements()
        .filter(|&b| !b.is_zero() && field.rel_norm(b).unwrap() != FieldElement::ONE)
        .take(l as usize)
        .collect();
    let f1 = field.preimage_set(FieldMap::RelTrace, FieldElement::ONE)?;
    let f1 = f1[..(q as usize - 2)].to_vec();
    let n = q * q * q;
    Ok(WitnessSpec {
        l,
        f0,
        f: vec![f1],
        certified_weight: Some(n - l * q - (q - 2) * (q + 1)),
        provenance: Provenance::ConstructedByTheorem,
    })
}

/// Witness for the Hermitian curve with two recovery sets (`l = 0`).
pub fn witness_hermitian_lrc2(inst: &Instance) -> Result<WitnessSpec> {
    require_family(inst, matches!(inst.family, Family::HermitianLrc2 { .. }))?;
    let field = inst.fiber_product.field();
    let q = field.half_order()?;
    if q < 3 {
        return Err(Error::FieldTooSmall);
    }
    let units = subfield_nonzero(field)?;
    let (a1, a2) = (units[0], units[1]);
    // norm side `y` carries q-1 factors, trace side `x` carries q-2
    let fy = field.preimage_set(FieldMap::RelNorm, a1)?;
    let fx = field.preimage_set(FieldMap::RelTrace, a2)?;
    Ok(WitnessSpec {
        l: 0,
        f0: Vec::new(),
        f: vec![fy[..q as usize - 1].to_vec(), fx[..q as usize - 2].to_vec()],
        certified_weight: Some(q * q * q - 2 * q * q + q + 2),
        provenance: Provenance::ConstructedByTheorem,
    })
}

/// Candidate pool for `F_0` in the Artin-Schreier construction:
/// `beta != 0` with `N(a_i beta) != 1` for every `i`, by direct filtering.
pub fn as_f0_pool(field: &Field, kernel: &[FieldElement]) -> Vec<FieldElement> {
    field
        .elements()
        .filter(|&b| {
            !b.is_zero() && kernel.iter().all(|&a| field.rel_norm(field.mul(a, b)).unwrap() != FieldElement::ONE)
        })
        .collect()
}

/// Witness for `A_{q,t}` with `0 <= l <= q^2 - tq - t - 1`.
pub fn witness_as(inst: &Instance, l: u64) -> Result<WitnessSpec> {
    let Family::ArtinSchreier { t, .. } = inst.family else {
        return require_family(inst, false).map(|_| unreachable!());
    };
    let field = inst.fiber_product.field();
    let q = field.half_order()?;
    let p = field.p() as u64;
    let t = t as u64;
    let max = (q * q).saturating_sub(t * q + t + 1);
    if l > max || q * q < t * q + t + 1 {
        return Err(Error::LOutOfRange { l, max });
    }
    let pool = as_f0_pool(field, &inst.kernel);
    if (pool.len() as u64) < l {
        return Err(Error::PoolTooSmall { need: l as usize, have: pool.len() });
    }
    let mut f = Vec::new();
    for &a in &inst.kernel {
        let target = field.pow(field.inv(a), q as u128);
        f.push(field.preimage_set(FieldMap::ArtinSchreier, target)?);
    }
    let n = p.pow(t as u32) * q * q;
    Ok(WitnessSpec {
        l,
        f0: pool[..l as usize].to_vec(),
        f,
        certified_weight: Some(n - l * p.pow(t as u32) - t * (p - 2) * (q + 1) * p.pow(t as u32 - 1)),
        provenance: Provenance::ConstructedByTheorem,
    })
}

/// Smallest `mu` in `F_q^*` (by `enc`) avoiding `N(alpha)` for every `alpha`
/// with `N(alpha) = Tr(alpha)`.
pub fn find_mu(field: &Field) -> Result<FieldElement> {
    let q = field.half_order()?;
    if q <= 3 {
        return Err(Error::FieldTooSmall);
    }
    let forbidden: HashSet<FieldElement> = field
        .elements()
        .filter(|&a| field.rel_norm(a).unwrap() == field.rel_trace(a).unwrap())
        .map(|a| field.rel_norm(a).unwrap())
        .collect();
    subfield_nonzero(field)?.into_iter().find(|m| !forbidden.contains(m)).ok_or(Error::NoValidMu)
}

/// Witness for the product of two Hermitian curves, `q > 3`, `0 <= l <= q`.
pub fn witness_thc(inst: &Instance, l: u64) -> Result<WitnessSpec> {
    require_family(inst, matches!(inst.family, Family::Thc { .. }))?;
    let field = inst.fiber_product.field();
    let q = field.half_order()?;
    if q <= 3 {
        return Err(Error::FieldTooSmall);
    }
    if l > q {
        return Err(Error::LOutOfRange { l, max: q });
    }
    let mu = find_mu(field)?;
    let pool: Vec<FieldElement> = field
        .elements()
        .filter(|&x| !x.is_zero() && field.rel_norm(x).unwrap() == field.rel_trace(x).unwrap())
        .collect();
    if (pool.len() as u64) < l {
        return Err(Error::PoolTooSmall { need: l as usize, have: pool.len() });
    }
    let f1 = field.preimage_set(FieldMap::RelNorm, mu)?;
    let f2 = field.preimage_set(FieldMap::RelTrace, mu)?;
    let n = q * q * (q * q - 1);
    Ok(WitnessSpec {
        l,
        f0: pool[..l as usize].to_vec(),
        f: vec![f1, f2],
        certified_weight: Some(n - l * q * (q + 1) - (q - 1) * q * q - (q - 2) * (q + 1) * (q + 1)),
        provenance: Provenance::ConstructedByTheorem,
    })
}

/// The theorem-backed witness of the instance's family at `l`.
pub fn family_witness(inst: &Instance, l: u64) -> Result<WitnessSpec> {
    match inst.family {
        Family::HermitianRational { .. } => witness_hermitian_rational(inst, l),
        Family::HermitianLrc2 { .. } if l == 0 => witness_hermitian_lrc2(inst),
        Family::HermitianLrc2 { .. } => Err(Error::LOutOfRange { l, max: 0 }),
        Family::Thc { .. } => witness_thc(inst, l),
        Family::ArtinSchreier { .. } => witness_as(inst, l),
    }
}

// ---------------------------------------------------------------- search

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum NotFoundReason {
    /// Every candidate combination was tried.
    Exhausted,
    /// The node budget ran out first.
    BudgetExhausted,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", rename_all = "kebab-case")]
pub enum SearchOutcome {
    Found { witness: WitnessSpec },
    NotFound { reason: NotFoundReason, nodes: usize },
}

struct Search<'a> {
    ck: Checker<'a>,
    base: Vec<FieldElement>,
    cands: Vec<Vec<FieldElement>>,
    need: Vec<usize>,
    budget: usize,
    nodes: usize,
    target: usize,
    chosen: Vec<Vec<FieldElement>>,
    /// `excluded[s]` = how many chosen values rule out base value `s`
    excluded: Vec<u32>,
    pool: usize,
    best: Option<(usize, Vec<Vec<FieldElement>>)>,
    stop_at_first: bool,
}

impl Search<'_> {
    fn compatible(&self, i: usize, g: FieldElement) -> bool {
        (0..self.chosen.len()).all(|j| j == i || self.chosen[j].iter().all(|&h| !self.ck.pair_conflict(i, g, j, h)))
    }

    fn apply(&mut self, i: usize, g: FieldElement, sign: i32) {
        for s in 0..self.base.len() {
            if self.ck.base_conflict(i, self.base[s], g) {
                if sign > 0 {
                    if self.excluded[s] == 0 {
                        self.pool -= 1;
                    }
                    self.excluded[s] += 1;
                } else {
                    self.excluded[s] -= 1;
                    if self.excluded[s] == 0 {
                        self.pool += 1;
                    }
                }
            }
        }
    }

    /// Returns true to stop.
    fn dfs(&mut self, i: usize, from: usize) -> bool {
        if i == self.cands.len() {
            if self.best.as_ref().is_none_or(|(b, _)| self.pool > *b) {
                self.best = Some((self.pool, self.chosen.clone()));
            }
            return self.stop_at_first;
        }
        if self.chosen[i].len() == self.need[i] {
            return self.dfs(i + 1, 0);
        }
        for idx in from..self.cands[i].len() {
            if self.nodes >= self.budget {
                return true;
            }
            self.nodes += 1;
            let g = self.cands[i][idx];
            if !self.compatible(i, g) {
                continue;
            }
            self.apply(i, g, 1);
            if self.pool >= self.target {
                self.chosen[i].push(g);
                if self.dfs(i, idx + 1) {
                    self.chosen[i].pop();
                    self.apply(i, g, -1);
                    return true;
                }
                self.chosen[i].pop();
            }
            self.apply(i, g, -1);
        }
        false
    }
}

fn run_search(
    code: &LrcCode,
    factors: &[FactorCurve],
    min_pool: usize,
    budget: usize,
    stop_at_first: bool,
) -> Result<(Option<(usize, Vec<Vec<FieldElement>>)>, usize)> {
    factors_of(code, factors)?;
    let ck = Checker::new(code, factors);
    let eval = code.evaluation_set();
    let base: Vec<FieldElement> = eval.base_values().iter().copied().filter(|&b| ck.value_ok(0, b)).collect();
    let t = code.t();
    let cands: Vec<Vec<FieldElement>> =
        (1..=t).map(|c| eval.coordinate_values(c).into_iter().filter(|&g| ck.value_ok(c, g)).collect()).collect();
    let need: Vec<usize> = code.d_h().iter().map(|&d| d as usize - 2).collect();
    let pool = base.len();
    let mut s = Search {
        ck,
        excluded: vec![0; base.len()],
        base,
        cands,
        need,
        budget,
        nodes: 0,
        target: min_pool,
        chosen: vec![Vec::new(); t],
        pool,
        best: None,
        stop_at_first,
    };
    if s.pool >= min_pool {
        s.dfs(0, 0);
    }
    Ok((s.best.take(), s.nodes))
}

fn pool_after(code: &LrcCode, factors: &[FactorCurve], chosen: &[Vec<FieldElement>]) -> Vec<FieldElement> {
    let ck = Checker::new(code, factors);
    code.evaluation_set()
        .base_values()
        .iter()
        .copied()
        .filter(|&b| ck.value_ok(0, b))
        .filter(|&b| (0..chosen.len()).all(|i| chosen[i].iter().all(|&g| !ck.base_conflict(i, b, g))))
        .collect()
}

/// Backtracking search for value sets satisfying conditions (1)-(5) at the
/// code's `l`. `NotFound` is advisory.
pub fn find_f_sets(code: &LrcCode, factors: &[FactorCurve], budget: usize) -> Result<SearchOutcome> {
    let l = code.l() as usize;
    let (found, nodes) = run_search(code, factors, l, budget, true)?;
    match found {
        Some((_, chosen)) => {
            let pool = pool_after(code, factors, &chosen);
            let w = WitnessSpec {
                l: l as u64,
                f0: pool[..l].to_vec(),
                f: chosen,
                certified_weight: certified(code),
                provenance: Provenance::Searched,
            };
            verify_witness(code, factors, &w)?;
            Ok(SearchOutcome::Found { witness: w })
        }
        None => {
            let reason = if nodes >= budget { NotFoundReason::BudgetExhausted } else { NotFoundReason::Exhausted };
            Ok(SearchOutcome::NotFound { reason, nodes })
        }
    }
}

/// Coordinate sets leaving the largest `F_0` pool found within the budget,
/// with that pool.
pub fn best_pool(
    code: &LrcCode,
    factors: &[FactorCurve],
    budget: usize,
) -> Result<Option<(Vec<Vec<FieldElement>>, Vec<FieldElement>)>> {
    let (best, _) = run_search(code, factors, 0, budget, false)?;
    Ok(best.map(|(_, chosen)| {
        let pool = pool_after(code, factors, &chosen);
        (chosen, pool)
    }))
}

// ---------------------------------------------------------------- counting

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CountingCheck {
    pub l: u128,
    pub eta: Vec<u128>,
    pub psi: Vec<u128>,
    pub s0: u128,
    pub s_i: Vec<u128>,
    /// Right-hand sides of the per-factor inequalities, as displayed.
    pub rhs_i: Vec<u128>,
    pub rhs_0: u128,
    pub verdict_i: Vec<bool>,
    pub verdict_0: bool,
    pub verdict: bool,
    /// The variant read off the proof's removal steps.
    pub alt_rhs_i: Vec<u128>,
    pub alt_rhs_0: u128,
    pub alt_verdict: bool,
}

/// Evaluates the counting inequalities for `|S_0| = s0`, map degrees `eta`
/// and factor-curve degrees `psi` of `y_1..y_t`.
pub fn check_counting_raw(s0: u128, eta: &[u128], psi: &[u128], l: u128) -> Result<CountingCheck> {
    let ovf = || Error::Overflow;
    let t = eta.len();
    let mut e = vec![1u128];
    e.extend_from_slice(eta);
    let mut s = vec![l];
    s.extend_from_slice(psi);
    let mul = |a: u128, b: u128| a.checked_mul(b).ok_or_else(ovf);
    let add = |a: u128, b: u128| a.checked_add(b).ok_or_else(ovf);
    let s_i: Vec<u128> = eta.iter().map(|&x| mul(x, s0)).collect::<Result<_>>()?;
    let mut rhs_i = Vec::with_capacity(t);
    let mut alt_rhs_i = Vec::with_capacity(t);
    for i in 1..=t {
        let own = mul(e[i].saturating_sub(2), s[i])?;
        let own_full = mul(e[i], s[i])?;
        let mut sum = 0u128;
        let mut alt = mul(s[0], own_full)?;
        for j in 0..=t {
            if j == i {
                continue;
            }
            sum = add(sum, mul(own, mul(e[j], s[j])?)?)?;
            if j >= 1 {
                alt = add(alt, mul(mul(e[j].saturating_sub(2), s[j])?, own_full)?)?;
            }
        }
        rhs_i.push(sum);
        alt_rhs_i.push(alt);
    }
    let mut rhs_0 = 0u128;
    let mut alt_rhs_0 = l;
    for j in 0..=t {
        rhs_0 = add(rhs_0, mul(e[j], s[j])?)?;
        if j >= 1 {
            alt_rhs_0 = add(alt_rhs_0, mul(e[j].saturating_sub(2), s[j])?)?;
        }
    }
    let verdict_i: Vec<bool> = s_i.iter().zip(&rhs_i).map(|(a, b)| a >= b).collect();
    let verdict_0 = s0 >= rhs_0;
    let verdict = verdict_0 && verdict_i.iter().all(|&v| v);
    let alt_verdict = s0 >= alt_rhs_0 && s_i.iter().zip(&alt_rhs_i).all(|(a, b)| a >= b);
    Ok(CountingCheck {
        l,
        eta: eta.to_vec(),
        psi: psi.to_vec(),
        s0,
        s_i,
        rhs_i,
        rhs_0,
        verdict_i,
        verdict_0,
        verdict,
        alt_rhs_i,
        alt_rhs_0,
        alt_verdict,
    })
}

pub fn check_counting(shape: &Shape, l: u128) -> Result<CountingCheck> {
    check_counting_raw(shape.s_size, &shape.d_h, &shape.psi, l)
}

/// `|S_0|` for `A_{q,t}` read over `GF(q^6)` with `h = t`:
/// `p^(5h) + p^(4h) - p^(3h)`.
pub fn as_sextic_s0(p: u32, h: u32) -> Result<u128> {
    let p = p as u128;
    let a = p.checked_pow(5 * h).ok_or(Error::Overflow)?;
    let b = p.checked_pow(4 * h).ok_or(Error::Overflow)?;
    let c = p.checked_pow(3 * h).ok_or(Error::Overflow)?;
    a.checked_add(b).and_then(|x| x.checked_sub(c)).ok_or(Error::Overflow)
}

// ---------------------------------------------------------------- certify

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum Certification {
    Exact { d: u64, provenance: String },
    Interval { lower: u64, upper: u64, lower_provenance: String, upper_provenance: String },
}

impl Certification {
    pub fn exact(&self) -> Option<u64> {
        match self {
            Certification::Exact { d, .. } => Some(*d),
            Certification::Interval { .. } => None,
        }
    }

    pub fn bounds(&self) -> (u64, u64) {
        match *self {
            Certification::Exact { d, .. } => (d, d),
            Certification::Interval { lower, upper, .. } => (lower, upper),
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct CertifyOptions {
    pub brute_force_cap: u128,
    pub search_budget: usize,
}

impl Default for CertifyOptions {
    fn default() -> Self {
        CertifyOptions { brute_force_cap: DEFAULT_BRUTE_FORCE_CAP, search_budget: DEFAULT_SEARCH_BUDGET }
    }
}

/// Witness-equals-bound first, then brute force, then an interval whose
/// upper end is the lightest nonzero witness codeword found.
pub fn certify_distance(code: &LrcCode, inst: Option<&Instance>, opts: CertifyOptions) -> Result<Certification> {
    let factors: Vec<FactorCurve> = match inst {
        Some(i) => i.fiber_product.factors().to_vec(),
        None => return Err(Error::BadParams("certification needs the curve factors".into())),
    };
    let bound = code.params().d_lower.max(1) as u64;
    let l = code.l();

    let mut upper = (code.n() - code.k() + 1) as u64;
    let mut upper_prov = "singleton".to_string();
    let note_upper = |w: u64, prov: String, upper: &mut u64, upper_prov: &mut String| {
        if w > 0 && w < *upper {
            *upper = w;
            *upper_prov = prov;
        }
    };

    if let Some(inst) = inst {
        if let Ok(w) = family_witness(inst, l) {
            if verify_witness(code, &factors, &w).is_ok() {
                let (_, wt) = evaluate_witness(code, &w);
                if wt == bound && code.params().d_lower >= 1 {
                    return Ok(Certification::Exact { d: wt, provenance: "witness-equals-bound".into() });
                }
                note_upper(wt, format!("witness at l={l}"), &mut upper, &mut upper_prov);
            }
        }
    }
    if let SearchOutcome::Found { witness } = find_f_sets(code, &factors, opts.search_budget)? {
        let (_, wt) = evaluate_witness(code, &witness);
        if wt == bound && code.params().d_lower >= 1 {
            return Ok(Certification::Exact { d: wt, provenance: "searched-witness-equals-bound".into() });
        }
        note_upper(wt, format!("searched witness at l={l}"), &mut upper, &mut upper_prov);
    }
    match exact_distance_bruteforce(code, opts.brute_force_cap) {
        Ok(d) => return Ok(Certification::Exact { d, provenance: "brute-force".into() }),
        Err(Error::TooLarge { .. }) => {}
        Err(e) => return Err(e),
    }

    // nested subcodes: a witness for l' < l is a codeword of this code
    if let Some(inst) = inst {
        if let Ok(Some(lmax)) = inst.family.exact_distance_max_l() {
            let lp = (lmax as u64).min(l);
            if let Ok(mut w) = family_witness(inst, lp) {
                w.l = l;
                let (_, wt) = evaluate_witness(code, &w);
                note_upper(wt, format!("witness at l={lp}"), &mut upper, &mut upper_prov);
            }
        }
    }
    if let Some((chosen, pool)) = best_pool(code, &factors, opts.search_budget)? {
        let lp = (pool.len() as u64).min(l);
        let w = WitnessSpec {
            l,
            f0: pool[..lp as usize].to_vec(),
            f: chosen,
            certified_weight: None,
            provenance: Provenance::Searched,
        };
        let (_, wt) = evaluate_witness(code, &w);
        note_upper(wt, format!("searched witness at l={lp}"), &mut upper, &mut upper_prov);
    }
    Ok(Certification::Interval {
        lower: bound,
        upper,
        lower_provenance: "construction-bound".into(),
        upper_provenance: upper_prov,
    })
}
