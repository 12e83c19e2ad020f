//! Monomial function space, generator matrix by evaluation, and the
//! closed-form parameter record of the construction.

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::curves::{EvaluationSet, FiberProduct};
use crate::error::{Error, Result};
use crate::family::{Family, Instance, Shape};
use crate::gf::{Field, FieldElement};
use crate::linalg::Matrix;

/// Exponent tuples `(j, e_1, ..., e_t)` with `j <= l` and `e_i <= d_{h_i} - 2`,
/// lexicographically ordered.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MonomialBasis {
    pub l: u64,
    pub d_h: Vec<u64>,
    pub exponents: Vec<Vec<u64>>,
}

impl MonomialBasis {
    pub fn new(l: u64, d_h: &[u64]) -> MonomialBasis {
        let mut bounds = vec![l + 1];
        bounds.extend(d_h.iter().map(|d| d - 1));
        let mut exponents = Vec::new();
        let mut cur = vec![0u64; bounds.len()];
        if bounds.iter().all(|&b| b > 0) {
            loop {
                exponents.push(cur.clone());
                let mut i = bounds.len();
                loop {
                    if i == 0 {
                        return MonomialBasis { l, d_h: d_h.to_vec(), exponents };
                    }
                    i -= 1;
                    cur[i] += 1;
                    if cur[i] < bounds[i] {
                        break;
                    }
                    cur[i] = 0;
                }
            }
        }
        MonomialBasis { l, d_h: d_h.to_vec(), exponents }
    }

    pub fn len(&self) -> usize {
        self.exponents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exponents.is_empty()
    }

    /// Value of monomial `r` at a point `(y0, ..., yt)`.
    pub fn evaluate(&self, field: &Field, r: usize, point: &[FieldElement]) -> FieldElement {
        self.exponents[r]
            .iter()
            .zip(point)
            .fold(FieldElement::ONE, |acc, (&e, &y)| field.mul(acc, field.pow(y, e as u128)))
    }
}

/// `(n, k, d_lower, localities, rate)`. `d_lower` may be non-positive when
/// the bound is vacuous.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CodeParams {
    pub n: u128,
    pub k: u128,
    pub d_lower: i128,
    pub localities: Vec<u128>,
    #[serde(serialize_with = "ratio_as_f64")]
    pub rate: BigRational,
}

fn ratio_as_f64<S: Serializer>(r: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_f64(ratio_to_f64(r))
}

pub fn ratio_to_f64(r: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or(f64::NAN)
}

pub fn ratio(num: u128, den: u128) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

fn params_from(s_size: u128, d_h: &[u128], d_y: &[u128], l: u128) -> Result<CodeParams> {
    let ovf = || Error::Overflow;
    let d_g = d_h.iter().try_fold(1u128, |a, &d| a.checked_mul(d)).ok_or_else(ovf)?;
    let n = s_size.checked_mul(d_g).ok_or_else(ovf)?;
    let per_fiber = d_h.iter().try_fold(1u128, |a, &d| a.checked_mul(d - 1)).ok_or_else(ovf)?;
    let k = (l + 1).checked_mul(per_fiber).ok_or_else(ovf)?;
    let mut zeros = l.checked_mul(d_g).ok_or_else(ovf)?;
    for (&dh, &dy) in d_h.iter().zip(d_y) {
        zeros = zeros.checked_add((dh - 2).checked_mul(dy).ok_or_else(ovf)?).ok_or_else(ovf)?;
    }
    let d_lower = i128::try_from(n).map_err(|_| ovf())? - i128::try_from(zeros).map_err(|_| ovf())?;
    Ok(CodeParams { n, k, d_lower, localities: d_h.iter().map(|d| d - 1).collect(), rate: ratio(k, n) })
}

/// Closed-form parameters for a family shape at `l`; pure arithmetic.
pub fn construction_params(shape: &Shape, l: u128) -> Result<CodeParams> {
    params_from(shape.s_size, &shape.d_h, &shape.d_y, l)
}

fn max_l(s_size: u128, d_h: &[u128], d_y: &[u128]) -> Result<Option<u128>> {
    let base = params_from(s_size, d_h, d_y, 0)?;
    if base.d_lower < 1 || s_size == 0 {
        return Ok(None);
    }
    let d_g: u128 = d_h.iter().product();
    let by_distance = (base.d_lower as u128 - 1) / d_g;
    Ok(Some(by_distance.min(s_size - 1)))
}

/// Largest `l` with `d_lower >= 1` (and `l < |S|`).
pub fn max_l_positive(shape: &Shape) -> Result<Option<u128>> {
    max_l(shape.s_size, &shape.d_h, &shape.d_y)
}

#[derive(Clone, Debug)]
pub struct LrcCode {
    field: Arc<Field>,
    eval: EvaluationSet,
    basis: MonomialBasis,
    generator: Matrix,
    params: CodeParams,
    d_h: Vec<u64>,
    d_y: Vec<u64>,
    family: Option<Family>,
}

fn widen(v: &[u64]) -> Vec<u128> {
    v.iter().map(|&x| x as u128).collect()
}

/// Builds `C(V, B)` for `V` of degree `l` in `y0` over a given evaluation set.
pub fn build_code(fp: &FiberProduct, eval: EvaluationSet, l: u64) -> Result<LrcCode> {
    let d_h = fp.d_h();
    let d_y = fp.d_y().to_vec();
    let s_size = eval.base_values().len() as u128;
    let max = max_l(s_size, &widen(&d_h), &widen(&d_y))?;
    match max {
        Some(m) if (l as u128) <= m => {}
        _ => return Err(Error::LTooLarge { l, max: max.map_or(0, |m| m as u64) }),
    }
    let params = params_from(s_size, &widen(&d_h), &widen(&d_y), l as u128)?;
    let field = fp.field().clone();
    let basis = MonomialBasis::new(l, &d_h);
    let n = eval.len();
    let t = eval.t();

    // power tables: pw[c][e * n + i] = y_c(P_i)^e
    let max_exp: Vec<usize> = std::iter::once(l as usize).chain(d_h.iter().map(|&d| d as usize - 2)).collect();
    let pw: Vec<Vec<FieldElement>> = (0..=t)
        .into_par_iter()
        .map(|c| {
            let mut table = Vec::with_capacity((max_exp[c] + 1) * n);
            table.extend(std::iter::repeat_n(FieldElement::ONE, n));
            for e in 1..=max_exp[c] {
                let prev = (e - 1) * n;
                for i in 0..n {
                    let v = field.mul(table[prev + i], eval.coordinate(i, c));
                    table.push(v);
                }
            }
            table
        })
        .collect();

    let rows: Vec<Vec<FieldElement>> = basis
        .exponents
        .par_iter()
        .map(|exps| {
            (0..n)
                .map(|i| {
                    exps.iter()
                        .enumerate()
                        .fold(FieldElement::ONE, |acc, (c, &e)| field.mul(acc, pw[c][e as usize * n + i]))
                })
                .collect()
        })
        .collect();
    let generator = Matrix::from_rows(rows);
    let k = basis.len();
    let rank = generator.rank(&field);
    if rank != k {
        return Err(Error::RankDeficient { rank, expected: k });
    }
    Ok(LrcCode { field, eval, basis, generator, params, d_h, d_y, family: None })
}

/// Builds the code of a family instance, applying the family's base filter.
pub fn build_family_code(inst: &Instance, l: u64) -> Result<LrcCode> {
    let mut code = build_code(&inst.fiber_product, inst.evaluation_set()?, l)?;
    code.family = Some(inst.family);
    Ok(code)
}

impl LrcCode {
    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    pub fn evaluation_set(&self) -> &EvaluationSet {
        &self.eval
    }

    pub fn basis(&self) -> &MonomialBasis {
        &self.basis
    }

    pub fn generator(&self) -> &Matrix {
        &self.generator
    }

    pub fn params(&self) -> &CodeParams {
        &self.params
    }

    pub fn family(&self) -> Option<Family> {
        self.family
    }

    pub fn l(&self) -> u64 {
        self.basis.l
    }

    pub fn n(&self) -> usize {
        self.generator.cols
    }

    pub fn k(&self) -> usize {
        self.generator.rows
    }

    pub fn t(&self) -> usize {
        self.d_h.len()
    }

    pub fn d_h(&self) -> &[u64] {
        &self.d_h
    }

    pub fn d_y(&self) -> &[u64] {
        &self.d_y
    }

    pub fn d_g(&self) -> u64 {
        self.d_h.iter().product()
    }

    pub fn encode(&self, message: &[FieldElement]) -> Result<Vec<FieldElement>> {
        if message.len() != self.k() {
            return Err(Error::LengthMismatch { expected: self.k(), got: message.len() });
        }
        if let Some(bad) = message.iter().find(|m| !self.field.contains(**m)) {
            return Err(Error::FieldMismatch { enc: bad.enc() as u64, order: self.field.order() });
        }
        Ok(self.generator.left_mul(&self.field, message))
    }

    /// Positions of an information set (pivot columns of `G`).
    pub fn information_set(&self) -> Vec<usize> {
        self.generator.clone().row_reduce(&self.field)
    }
}
