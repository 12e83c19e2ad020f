//! Upper bounds on minimum distance and rate, reference constructions, and
//! decimal rendering of exact rationals.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use crate::code_builder::{ratio, ratio_to_f64};
use crate::error::{Error, Result};

fn check_nk(n: u128, k: u128) -> Result<()> {
    if k < 1 || k > n {
        return Err(Error::BadParams(format!("need 1 <= k <= n, got n={n}, k={k}")));
    }
    Ok(())
}

fn to_i128(x: u128) -> Result<i128> {
    i128::try_from(x).map_err(|_| Error::Overflow)
}

pub fn singleton(n: u128, k: u128) -> Result<i128> {
    check_nk(n, k)?;
    to_i128(n - k + 1)
}

/// `n - sum_{i=0}^t floor((k-1)/r^i)`.
pub fn tamo_barg_d(n: u128, k: u128, r: u128, t: u32) -> Result<i128> {
    check_nk(n, k)?;
    if r < 1 || t < 1 {
        return Err(Error::BadParams("locality and availability must be positive".into()));
    }
    let mut sum = 0u128;
    let mut pw = 1u128;
    for _ in 0..=t {
        sum += (k - 1) / pw;
        pw = pw.saturating_mul(r);
    }
    Ok(to_i128(n)? - to_i128(sum)?)
}

/// `1 / prod_{j=1}^t (1 + 1/(jr))`.
pub fn tamo_barg_rate_cap(r: u128, t: u32) -> Result<BigRational> {
    if r < 1 || t < 1 {
        return Err(Error::BadParams("locality and availability must be positive".into()));
    }
    let mut den = BigRational::one();
    for j in 1..=t as u128 {
        den *= BigRational::one() + ratio(1, j * r);
    }
    Ok(den.recip())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BtBound {
    pub bound: i128,
    /// Whether the localities had to be reordered.
    pub sorted: bool,
}

/// `n - k + 1 - sum_i floor((k-1) / (r_1 ... r_i))` over ascending localities.
pub fn bhadane_thangaraj(n: u128, k: u128, localities: &[u128]) -> Result<BtBound> {
    check_nk(n, k)?;
    if localities.contains(&0) {
        return Err(Error::BadParams("localities must be positive".into()));
    }
    let mut rs = localities.to_vec();
    let sorted = rs.windows(2).any(|w| w[0] > w[1]);
    rs.sort_unstable();
    let mut bound = to_i128(n - k + 1)?;
    let mut prod = 1u128;
    for r in rs {
        prod = prod.saturating_mul(r);
        bound -= to_i128((k - 1) / prod)?;
    }
    Ok(BtBound { bound, sorted })
}

/// `n - k - ceil(((k-1)t + 1) / (1 + sum r_i)) + 2`.
pub fn bmq(n: u128, k: u128, localities: &[u128]) -> Result<i128> {
    check_nk(n, k)?;
    if localities.is_empty() {
        return Err(Error::BadParams("at least one locality is required".into()));
    }
    let t = localities.len() as u128;
    let num = (k - 1).checked_mul(t).and_then(|x| x.checked_add(1)).ok_or(Error::Overflow)?;
    let den = 1 + localities.iter().sum::<u128>();
    Ok(to_i128(n)? - to_i128(k)? - to_i128(num.div_ceil(den))? + 2)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RefCode {
    pub n: u128,
    pub k: u128,
    pub d: u128,
    #[serde(serialize_with = "rational_f64")]
    pub rate: BigRational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RefConstructions {
    pub product: RefCode,
    pub wang: RefCode,
}

fn binom(n: u128, k: u128) -> Result<u128> {
    let mut acc = 1u128;
    for i in 0..k {
        acc = acc.checked_mul(n - i).ok_or(Error::Overflow)? / (i + 1);
    }
    Ok(acc)
}

/// Product code `[(r+1)^t, r^t, 2^t]` and the `[C(r+t,t), C(r+t,t) - C(r+t-1,t-1), t+1]` code.
pub fn reference_constructions(r: u128, t: u32) -> Result<RefConstructions> {
    if r < 1 || t < 1 {
        return Err(Error::BadParams("locality and availability must be positive".into()));
    }
    let pn = (r + 1).checked_pow(t).ok_or(Error::Overflow)?;
    let pk = r.checked_pow(t).ok_or(Error::Overflow)?;
    let tt = t as u128;
    let wn = binom(r + tt, tt)?;
    let wk = wn - binom(r + tt - 1, tt - 1)?;
    Ok(RefConstructions {
        product: RefCode { n: pn, k: pk, d: 1u128 << t, rate: ratio(pk, pn) },
        wang: RefCode { n: wn, k: wk, d: tt + 1, rate: ratio(r, r + tt) },
    })
}

/// `(q^2 - 2q, (q^2 - 2q) / (q^3 - q))` for the two-set Hermitian code.
pub fn hermitian_defect(q: u128) -> Result<(u128, BigRational)> {
    if q < 2 {
        return Err(Error::BadParams("q must be at least 2".into()));
    }
    let defect = q * q - 2 * q;
    Ok((defect, ratio(defect, q * q * q - q)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundKind {
    Singleton,
    TamoBarg,
    BhadaneThangaraj,
    Bmq,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundReport {
    pub n: u128,
    pub k: u128,
    pub localities: Vec<u128>,
    pub singleton: i128,
    /// Only for uniform locality.
    pub tamo_barg_d: Option<i128>,
    pub bhadane_thangaraj: i128,
    pub bmq: i128,
    #[serde(serialize_with = "opt_rational_f64")]
    pub tb_rate_cap: Option<BigRational>,
    #[serde(serialize_with = "opt_rational_f64")]
    pub product_rate: Option<BigRational>,
    #[serde(serialize_with = "opt_rational_f64")]
    pub wang_rate: Option<BigRational>,
    pub selected: BoundKind,
    pub d: Option<i128>,
    pub defect: Option<i128>,
    #[serde(serialize_with = "opt_rational_f64")]
    pub relative_defect: Option<BigRational>,
}

fn rational_f64<S: Serializer>(r: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_f64(ratio_to_f64(r))
}

fn opt_rational_f64<S: Serializer>(r: &Option<BigRational>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match r {
        Some(r) => s.serialize_f64(ratio_to_f64(r)),
        None => s.serialize_none(),
    }
}

impl BoundReport {
    pub fn value(&self, kind: BoundKind) -> Option<i128> {
        match kind {
            BoundKind::Singleton => Some(self.singleton),
            BoundKind::TamoBarg => self.tamo_barg_d,
            BoundKind::BhadaneThangaraj => Some(self.bhadane_thangaraj),
            BoundKind::Bmq => Some(self.bmq),
        }
    }

    /// All available distance bounds.
    pub fn all(&self) -> Vec<i128> {
        [BoundKind::Singleton, BoundKind::TamoBarg, BoundKind::BhadaneThangaraj, BoundKind::Bmq]
            .iter()
            .filter_map(|&k| self.value(k))
            .collect()
    }
}

pub fn bound_report(
    n: u128,
    k: u128,
    localities: &[u128],
    d: Option<i128>,
    selected: BoundKind,
) -> Result<BoundReport> {
    let uniform = localities.first().filter(|&&r| localities.iter().all(|&x| x == r)).copied();
    let t = localities.len() as u32;
    let tamo_barg_d = uniform.map(|r| tamo_barg_d(n, k, r, t)).transpose()?;
    let tb_rate_cap = uniform.map(|r| tamo_barg_rate_cap(r, t)).transpose()?;
    let refs = uniform.map(|r| reference_constructions(r, t)).transpose()?;
    let mut rep = BoundReport {
        n,
        k,
        localities: localities.to_vec(),
        singleton: singleton(n, k)?,
        tamo_barg_d,
        bhadane_thangaraj: bhadane_thangaraj(n, k, localities)?.bound,
        bmq: bmq(n, k, localities)?,
        tb_rate_cap,
        product_rate: refs.as_ref().map(|r| r.product.rate.clone()),
        wang_rate: refs.map(|r| r.wang.rate),
        selected,
        d,
        defect: None,
        relative_defect: None,
    };
    if let (Some(d), Some(b)) = (d, rep.value(selected)) {
        rep.defect = Some(b - d);
        rep.relative_defect = Some(BigRational::new(BigInt::from(b - d), BigInt::from(n)));
    }
    Ok(rep)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Rounding {
    #[default]
    HalfEven,
    /// Toward zero.
    Truncate,
}

/// Fixed-point rendering of an exact rational.
pub fn render_decimal(x: &BigRational, places: u32, mode: Rounding) -> String {
    let scale = BigInt::from(10u32).pow(places);
    let scaled = x * BigRational::from_integer(scale.clone());
    let neg = scaled.is_negative();
    let a = scaled.abs();
    let (q, r) = a.numer().div_rem(a.denom());
    let mut q = q;
    if mode == Rounding::HalfEven && !r.is_zero() {
        let twice = &r * 2;
        if twice > *a.denom() || (twice == *a.denom() && q.is_odd()) {
            q += 1;
        }
    }
    let digits = q.to_string();
    let width = places as usize + 1;
    let digits = format!("{digits:0>width$}");
    let (int, frac) = digits.split_at(digits.len() - places as usize);
    let sign = if neg && !q.is_zero() { "-" } else { "" };
    if places == 0 {
        format!("{sign}{int}")
    } else {
        format!("{sign}{int}.{frac}")
    }
}

/// Parses a printed decimal such as `0.1333` into an exact rational.
pub fn parse_decimal(text: &str) -> Result<BigRational> {
    let t = text.trim();
    let (neg, t) = t.strip_prefix('-').map_or((false, t), |r| (true, r));
    let (int, frac) = t.split_once('.').unwrap_or((t, ""));
    let digits = format!("{int}{frac}");
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(Error::BadParams(format!("not a decimal: {text}")));
    }
    let num: BigInt = digits.parse().map_err(|_| Error::BadParams(format!("not a decimal: {text}")))?;
    let den = BigInt::from(10u32).pow(frac.len() as u32);
    let v = BigRational::new(num, den);
    Ok(if neg { -v } else { v })
}

/// Does `x` render to the printed decimal under `mode` at the printed precision?
pub fn matches_printed(x: &BigRational, printed: &str, places: u32, mode: Rounding) -> Result<bool> {
    let want = parse_decimal(printed)?;
    let got = parse_decimal(&render_decimal(x, places, mode))?;
    Ok(want == got)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn singleton_examples() {
        assert_eq!(singleton(6, 2).unwrap(), 5);
        assert_eq!(singleton(240, 60).unwrap(), 181);
        assert_eq!(singleton(729, 4).unwrap(), 726);
        assert!(singleton(3, 4).is_err());
    }

    #[test]
    fn tamo_barg_examples() {
        assert_eq!(tamo_barg_d(729, 4, 2, 2).unwrap(), 725);
        assert_eq!(render_decimal(&tamo_barg_rate_cap(2, 2).unwrap(), 3, Rounding::HalfEven), "0.533");
        assert_eq!(render_decimal(&tamo_barg_rate_cap(4, 2).unwrap(), 3, Rounding::HalfEven), "0.711");
    }

    #[test]
    fn bt_and_bmq() {
        assert_eq!(bhadane_thangaraj(60, 12, &[3, 4]).unwrap(), BtBound { bound: 46, sorted: false });
        assert_eq!(bhadane_thangaraj(24, 6, &[3, 2]).unwrap(), BtBound { bound: 17, sorted: true });
        assert_eq!(bhadane_thangaraj(240, 48, &[3, 4]).unwrap().bound, 175);
        assert_eq!(bhadane_thangaraj(10, 4, &[]).unwrap().bound, singleton(10, 4).unwrap());
        assert_eq!(bmq(60, 12, &[3, 4]).unwrap(), 47);
        assert_eq!(bmq(17, 1, &[5, 6]).unwrap(), 17);
    }

    #[test]
    fn references() {
        let r = reference_constructions(2, 2).unwrap();
        assert_eq!((r.product.n, r.product.k, r.product.d), (9, 4, 4));
        assert_eq!(r.product.rate, ratio(4, 9));
        let r = reference_constructions(4, 2).unwrap();
        assert_eq!((r.wang.n, r.wang.k, r.wang.d), (15, 10, 3));
        assert_eq!(r.wang.rate, ratio(4, 6));
        let r = reference_constructions(5, 1).unwrap();
        assert_eq!((r.product.n, r.product.k, r.product.d), (6, 5, 2));
    }

    #[test]
    fn defects() {
        assert_eq!(hermitian_defect(4).unwrap().1, ratio(8, 60));
        assert_eq!(render_decimal(&hermitian_defect(9).unwrap().1, 4, Rounding::HalfEven), "0.0875");
        assert_eq!(hermitian_defect(2).unwrap().0, 0);
    }

    #[test]
    fn rendering() {
        assert_eq!(render_decimal(&ratio(1, 8), 2, Rounding::HalfEven), "0.12");
        assert_eq!(render_decimal(&ratio(3, 8), 2, Rounding::HalfEven), "0.38");
        assert_eq!(render_decimal(&ratio(205, 600), 4, Rounding::Truncate), "0.3416");
        assert_eq!(render_decimal(&ratio(205, 600), 4, Rounding::HalfEven), "0.3417");
        assert_eq!(render_decimal(&ratio(0, 6), 1, Rounding::HalfEven), "0.0");
        assert_eq!(render_decimal(&-ratio(1, 3), 2, Rounding::HalfEven), "-0.33");
        assert!(matches_printed(&ratio(21, 60), "0.35", 4, Rounding::HalfEven).unwrap());
    }

    #[test]
    fn report_defect() {
        let r = bound_report(24, 6, &[2, 3], Some(14), BoundKind::BhadaneThangaraj).unwrap();
        assert_eq!(r.defect, Some(3));
        assert_eq!(r.tamo_barg_d, None);
        let r = bound_report(729, 4, &[2, 2], Some(669), BoundKind::TamoBarg).unwrap();
        assert_eq!(r.defect, Some(56));
        assert!(r.all().iter().all(|&b| b >= 669));
    }
}
