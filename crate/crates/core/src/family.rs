//! The four concrete code families, as closed-form shapes (valid at any field
//! size) and as enumerable fiber products over `GF(p^(2h))`.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::curves::{CurveForm, EvaluationSet, FactorCurve, FiberProduct, PointCountReport, ENUM_CAP};
use crate::error::{Error, Result};
use crate::gf::{is_prime, make_field, FieldElement};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum Family {
    /// `y^q + y = x^(q+1)` over the `x` line, all `q^3` affine points, one recovery set.
    HermitianRational { p: u32, h: u32 },
    /// The Hermitian curve as `u = y^(q+1)` times `u = x^q + x` over the `u` line.
    HermitianLrc2 { p: u32, h: u32 },
    /// Two Hermitian curves `y0^q + y0 = y1^(q+1)` and `y2^q + y2 = y0^(q+1)`.
    Thc { p: u32, h: u32 },
    /// `t` Artin-Schreier curves `y_i^p - y_i = a_i y0^(q+1)`.
    #[serde(rename = "as")]
    ArtinSchreier { p: u32, h: u32, t: u32 },
}

/// Closed-form structure constants of a family, in exact integers.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Shape {
    pub q: u128,
    /// Size of the (filtered) split locus.
    pub s_size: u128,
    pub d_h: Vec<u128>,
    /// Degree of `y_i` on the fiber product.
    pub d_y: Vec<u128>,
    /// Degree of `y_i` on its own factor curve.
    pub psi: Vec<u128>,
}

impl Shape {
    pub fn d_g(&self) -> Result<u128> {
        self.d_h.iter().try_fold(1u128, |acc, &d| acc.checked_mul(d).ok_or(Error::Overflow))
    }

    pub fn n(&self) -> Result<u128> {
        self.s_size.checked_mul(self.d_g()?).ok_or(Error::Overflow)
    }
}

/// Field and kernel overrides for building an instance.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FamilyOptions {
    pub modulus: Option<Vec<u32>>,
    /// Explicit trace-kernel elements `a_i` (Artin-Schreier family only).
    pub kernel: Option<Vec<FieldElement>>,
}

pub(crate) fn pow_u128(base: u128, exp: u32) -> Result<u128> {
    base.checked_pow(exp).ok_or(Error::Overflow)
}

pub(crate) fn mul_all(xs: &[u128]) -> Result<u128> {
    xs.iter().try_fold(1u128, |acc, &x| acc.checked_mul(x).ok_or(Error::Overflow))
}

impl Family {
    pub fn from_name(name: &str, p: u32, h: u32, t: Option<u32>) -> Result<Family> {
        let f = match name {
            "hermitian_rational" => Family::HermitianRational { p, h },
            "hermitian_lrc2" => Family::HermitianLrc2 { p, h },
            "thc" => Family::Thc { p, h },
            "as" => Family::ArtinSchreier { p, h, t: t.unwrap_or(h) },
            other => return Err(Error::BadParams(format!("unknown family {other:?}"))),
        };
        f.validate()?;
        Ok(f)
    }

    pub fn name(&self) -> &'static str {
        match self {
            Family::HermitianRational { .. } => "hermitian_rational",
            Family::HermitianLrc2 { .. } => "hermitian_lrc2",
            Family::Thc { .. } => "thc",
            Family::ArtinSchreier { .. } => "as",
        }
    }

    pub fn p(&self) -> u32 {
        match *self {
            Family::HermitianRational { p, .. }
            | Family::HermitianLrc2 { p, .. }
            | Family::Thc { p, .. }
            | Family::ArtinSchreier { p, .. } => p,
        }
    }

    pub fn h(&self) -> u32 {
        match *self {
            Family::HermitianRational { h, .. }
            | Family::HermitianLrc2 { h, .. }
            | Family::Thc { h, .. }
            | Family::ArtinSchreier { h, .. } => h,
        }
    }

    /// Availability.
    pub fn t(&self) -> usize {
        match *self {
            Family::HermitianRational { .. } => 1,
            Family::HermitianLrc2 { .. } | Family::Thc { .. } => 2,
            Family::ArtinSchreier { t, .. } => t as usize,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let (p, h) = (self.p(), self.h());
        if !is_prime(p as u64) {
            return Err(Error::NotPrime(p as u64));
        }
        if h == 0 {
            return Err(Error::InvalidDegree);
        }
        if let Family::ArtinSchreier { t, .. } = *self {
            if t == 0 || t > h {
                return Err(Error::BadParams(format!("availability t = {t} must lie in 1..={h}")));
            }
        }
        Ok(())
    }

    pub fn q(&self) -> Result<u128> {
        pow_u128(self.p() as u128, self.h())
    }

    pub fn shape(&self) -> Result<Shape> {
        self.validate()?;
        let q = self.q()?;
        let q2 = q.checked_mul(q).ok_or(Error::Overflow)?;
        let p = self.p() as u128;
        Ok(match *self {
            Family::HermitianRational { .. } => {
                Shape { q, s_size: q2, d_h: vec![q], d_y: vec![q + 1], psi: vec![q + 1] }
            }
            Family::HermitianLrc2 { .. } => {
                Shape { q, s_size: q - 1, d_h: vec![q + 1, q], d_y: vec![q, q + 1], psi: vec![1, 1] }
            }
            Family::Thc { .. } => Shape {
                q,
                s_size: q2 - q,
                d_h: vec![q + 1, q],
                d_y: vec![q2, (q + 1).checked_mul(q + 1).ok_or(Error::Overflow)?],
                psi: vec![q, q + 1],
            },
            Family::ArtinSchreier { t, .. } => {
                let dy = (q + 1).checked_mul(pow_u128(p, t - 1)?).ok_or(Error::Overflow)?;
                Shape {
                    q,
                    s_size: q2,
                    d_h: vec![p; t as usize],
                    d_y: vec![dy; t as usize],
                    psi: vec![q + 1; t as usize],
                }
            }
        })
    }

    /// Number of points over `GF(q^2)` including those at infinity.
    pub fn closed_form_point_count(&self) -> Result<u128> {
        let q = self.q()?;
        let total = match *self {
            Family::HermitianRational { .. } | Family::HermitianLrc2 { .. } => pow_u128(q, 3)?,
            Family::Thc { .. } => pow_u128(q, 4)?,
            Family::ArtinSchreier { p, t, .. } => mul_all(&[pow_u128(p as u128, t)?, q, q])?,
        };
        total.checked_add(1).ok_or(Error::Overflow)
    }

    /// The exact minimum distance when a closed-form result covers `l`.
    pub fn exact_distance(&self, l: u128) -> Result<Option<u128>> {
        let s = self.shape()?;
        let q = s.q;
        let n = s.n()?;
        let covered = match *self {
            Family::HermitianRational { .. } => l + q + 2 <= q * q,
            Family::HermitianLrc2 { .. } => l == 0,
            Family::Thc { .. } => q > 3 && l <= q,
            Family::ArtinSchreier { t, .. } => {
                let t = t as u128;
                // l <= q^2 - tq - t - 1
                l + t * q + t < q * q
            }
        };
        if !covered {
            return Ok(None);
        }
        let mut zeros = l.checked_mul(s.d_g()?).ok_or(Error::Overflow)?;
        for (dh, dy) in s.d_h.iter().zip(&s.d_y) {
            zeros += (dh - 2) * dy;
        }
        Ok(n.checked_sub(zeros))
    }

    /// Largest `l` covered by [`Family::exact_distance`].
    pub fn exact_distance_max_l(&self) -> Result<Option<u128>> {
        let q = self.q()?;
        Ok(match *self {
            Family::HermitianRational { .. } => (q * q).checked_sub(q + 2),
            Family::HermitianLrc2 { .. } => Some(0),
            Family::Thc { .. } => (q > 3).then_some(q),
            Family::ArtinSchreier { t, .. } => {
                let t = t as u128;
                (q * q).checked_sub(t * q + t + 1)
            }
        })
    }

    pub fn instance(&self, opts: &FamilyOptions) -> Result<Instance> {
        self.validate()?;
        let (p, h) = (self.p(), self.h());
        let order = (p as u128).checked_pow(2 * h).unwrap_or(u128::MAX);
        if order > ENUM_CAP as u128 {
            return Err(Error::TooLargeToEnumerate { order: order.min(u64::MAX as u128) as u64, cap: ENUM_CAP });
        }
        if opts.kernel.is_some() && !matches!(self, Family::ArtinSchreier { .. }) {
            return Err(Error::BadParams("kernel overrides apply to the as family only".into()));
        }
        let field = Arc::new(make_field(p, 2 * h, opts.modulus.as_deref())?);
        let q = field.half_order()?;
        let one = FieldElement::ONE;
        let shape = self.shape()?;
        let d_y: Vec<u64> = shape.d_y.iter().map(|&d| d as u64).collect();
        let mut kernel = Vec::new();
        let factors = match *self {
            Family::HermitianRational { .. } => vec![FactorCurve::new(CurveForm::Trace, one, q + 1)],
            Family::HermitianLrc2 { .. } => {
                vec![FactorCurve::new(CurveForm::Norm, one, 1), FactorCurve::new(CurveForm::Trace, one, 1)]
            }
            Family::Thc { .. } => {
                vec![FactorCurve::swapped(CurveForm::Trace, one, q + 1), FactorCurve::new(CurveForm::Trace, one, q + 1)]
            }
            Family::ArtinSchreier { t, .. } => {
                let basis = field.trace_kernel_basis(opts.kernel.as_deref())?;
                if basis.len() < t as usize {
                    return Err(Error::BadParams(format!("need {t} kernel elements, got {}", basis.len())));
                }
                kernel = basis[..t as usize].to_vec();
                kernel.iter().map(|&a| FactorCurve::new(CurveForm::ArtinSchreier, a, q + 1)).collect()
            }
        };
        let fiber_product = FiberProduct::new(field, factors, d_y)?;
        Ok(Instance { family: *self, fiber_product, kernel })
    }

    /// Enumerated versus closed-form point count; large fields report the
    /// closed form only.
    pub fn point_count_check(&self) -> Result<PointCountReport> {
        let closed = self.closed_form_point_count()?;
        let closed = u64::try_from(closed).map_err(|_| Error::Overflow)?;
        match self.instance(&FamilyOptions::default()) {
            Ok(inst) => {
                let affine = inst.fiber_product.affine_point_count();
                Ok(PointCountReport {
                    affine_enumerated: Some(affine),
                    points_at_infinity: 1,
                    closed_form_total: closed,
                    matches: Some(affine + 1 == closed),
                })
            }
            Err(e) if e.is_infeasible() => Ok(PointCountReport {
                affine_enumerated: None,
                points_at_infinity: 1,
                closed_form_total: closed,
                matches: None,
            }),
            Err(e) => Err(e),
        }
    }
}

/// A family realized over an explicit field.
#[derive(Clone, Debug)]
pub struct Instance {
    pub family: Family,
    pub fiber_product: FiberProduct,
    /// The `a_i` used by the Artin-Schreier factors; empty otherwise.
    pub kernel: Vec<FieldElement>,
}

impl Instance {
    pub fn evaluation_set(&self) -> Result<EvaluationSet> {
        let field = self.fiber_product.field().clone();
        match self.family {
            // y(P) != 0, equivalently u != 0
            Family::HermitianLrc2 { .. } => self.fiber_product.evaluation_set(Some(&|u: FieldElement| !u.is_zero())),
            Family::Thc { .. } => {
                self.fiber_product.evaluation_set(Some(&move |a| !field.rel_trace(a).expect("even degree").is_zero()))
            }
            _ => self.fiber_product.evaluation_set(None),
        }
    }
}
