//! Exact arithmetic in GF(p^n) with a polynomial basis.
//!
//! Elements are identified with their canonical integer encoding
//! `enc(x) = c0 + c1*p + c2*p^2 + ...` where `c_i` are the coefficients of
//! the representative polynomial in the generator `b`. All orderings in this
//! crate (points, matrix columns, candidate sets) follow `enc` ascending.
//!
//! Fields up to [`TABLE_LIMIT`] elements carry exponential/logarithm tables;
//! larger ones fall back to polynomial multiplication modulo the modulus.

mod fp_poly;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Fields with at most this many elements get log/exp tables.
pub const TABLE_LIMIT: u64 = 1 << 20;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FieldElement(u32);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);
    pub const ONE: FieldElement = FieldElement(1);

    pub const fn from_enc(enc: u32) -> Self {
        FieldElement(enc)
    }

    pub const fn enc(self) -> u32 {
        self.0
    }

    pub const fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Serializable description of a field: `{p, degree, modulus}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldSpec {
    pub p: u32,
    pub degree: u32,
    /// Monic modulus, low-degree coefficient first, length `degree + 1`.
    pub modulus: Vec<u32>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Op {
    Add,
    Sub,
    Mul,
    Div,
    Pow(u128),
    Inv,
    Neg,
}

/// The maps whose fibers the constructions need.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FieldMap {
    /// `x^q + x` onto the half-degree subfield.
    RelTrace,
    /// `x^(q+1)` onto the half-degree subfield.
    RelNorm,
    /// `x^p - x`.
    ArtinSchreier,
}

#[derive(Clone, Debug)]
struct LogTables {
    /// `exp[i] = g^i` for `i < 2(order-1)`, doubled to skip a reduction.
    exp: Vec<u32>,
    log: Vec<u32>,
}

#[derive(Clone, Debug)]
pub struct Field {
    p: u32,
    degree: u32,
    modulus: Vec<u32>,
    order: u32,
    tables: Option<LogTables>,
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Builds GF(p^degree). When `modulus` is `None` the lexicographically least
/// monic irreducible polynomial is used, comparing the non-leading
/// coefficients by their `enc` value.
pub fn make_field(p: u32, degree: u32, modulus: Option<&[u32]>) -> Result<Field> {
    if !is_prime(p as u64) {
        return Err(Error::NotPrime(p as u64));
    }
    if degree == 0 {
        return Err(Error::InvalidDegree);
    }
    let order =
        (p as u64).checked_pow(degree).filter(|&o| o <= u32::MAX as u64).ok_or(Error::FieldTooLarge { p, degree })?;
    let modulus = match modulus {
        Some(m) => {
            if m.len() != degree as usize + 1 {
                return Err(Error::DegreeMismatch { expected: degree, got: m.len().saturating_sub(1) as u32 });
            }
            if m.iter().any(|&c| c >= p) {
                return Err(Error::BadParams(format!("modulus coefficient out of range for GF({p})")));
            }
            if m[degree as usize] != 1 {
                return Err(Error::NotMonic);
            }
            if !fp_poly::is_irreducible(m, p) {
                return Err(Error::ReducibleModulus { p });
            }
            m.to_vec()
        }
        None => least_irreducible(p, degree),
    };
    let mut field = Field { p, degree, modulus, order: order as u32, tables: None };
    if order <= TABLE_LIMIT {
        field.tables = Some(field.build_tables());
    }
    Ok(field)
}

fn least_irreducible(p: u32, degree: u32) -> Vec<u32> {
    let count = (p as u64).pow(degree);
    for low in 0..count {
        let mut m = digits_of(low, p, degree);
        m.push(1);
        if fp_poly::is_irreducible(&m, p) {
            return m;
        }
    }
    unreachable!("an irreducible polynomial exists for every degree")
}

fn digits_of(mut v: u64, p: u32, len: u32) -> Vec<u32> {
    let mut out = Vec::with_capacity(len as usize);
    for _ in 0..len {
        out.push((v % p as u64) as u32);
        v /= p as u64;
    }
    out
}

impl Field {
    pub fn from_spec(spec: &FieldSpec) -> Result<Field> {
        make_field(spec.p, spec.degree, Some(&spec.modulus))
    }

    pub fn spec(&self) -> FieldSpec {
        FieldSpec { p: self.p, degree: self.degree, modulus: self.modulus.clone() }
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn order(&self) -> u64 {
        self.order as u64
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    /// All elements in `enc` order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + Clone {
        (0..self.order).map(FieldElement)
    }

    pub fn contains(&self, a: FieldElement) -> bool {
        a.0 < self.order
    }

    fn check(&self, a: FieldElement) -> Result<()> {
        if self.contains(a) {
            Ok(())
        } else {
            Err(Error::FieldMismatch { enc: a.0 as u64, order: self.order as u64 })
        }
    }

    /// Element of the prime subfield with the given residue.
    pub fn from_int(&self, n: i64) -> FieldElement {
        FieldElement(n.rem_euclid(self.p as i64) as u32)
    }

    pub fn coeffs(&self, a: FieldElement) -> Vec<u32> {
        digits_of(a.0 as u64, self.p, self.degree)
    }

    pub fn from_coeffs(&self, coeffs: &[u32]) -> Result<FieldElement> {
        let poly: Vec<u32> = coeffs.iter().map(|&c| c % self.p).collect();
        let reduced = fp_poly::rem(&poly, &self.modulus, self.p);
        Ok(FieldElement(self.encode(&reduced)))
    }

    fn encode(&self, coeffs: &[u32]) -> u32 {
        let mut enc = 0u64;
        for &c in coeffs.iter().rev() {
            enc = enc * self.p as u64 + c as u64;
        }
        enc as u32
    }

    /// The generator `b` of the polynomial basis (the class of `x`).
    pub fn generator(&self) -> FieldElement {
        if self.degree == 1 {
            // GF(p) = GF(p)[x]/(x - c): x reduces to the constant root
            FieldElement((self.p - self.modulus[0]) % self.p)
        } else {
            FieldElement(self.p)
        }
    }

    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if self.p == 2 {
            return FieldElement(a.0 ^ b.0);
        }
        let p = self.p as u64;
        let (mut x, mut y) = (a.0 as u64, b.0 as u64);
        let (mut out, mut pw) = (0u64, 1u64);
        while x > 0 || y > 0 {
            out += (x % p + y % p) % p * pw;
            x /= p;
            y /= p;
            pw *= p;
        }
        FieldElement(out as u32)
    }

    pub fn neg(&self, a: FieldElement) -> FieldElement {
        if self.p == 2 {
            return a;
        }
        let p = self.p as u64;
        let mut x = a.0 as u64;
        let (mut out, mut pw) = (0u64, 1u64);
        while x > 0 {
            out += (p - x % p) % p * pw;
            x /= p;
            pw *= p;
        }
        FieldElement(out as u32)
    }

    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if a.0 == 0 || b.0 == 0 {
            return FieldElement::ZERO;
        }
        match &self.tables {
            Some(t) => FieldElement(t.exp[(t.log[a.0 as usize] + t.log[b.0 as usize]) as usize]),
            None => self.mul_poly(a, b),
        }
    }

    fn mul_poly(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        let prod = fp_poly::mul(&self.coeffs(a), &self.coeffs(b), self.p);
        FieldElement(self.encode(&fp_poly::rem(&prod, &self.modulus, self.p)))
    }

    /// Multiplicative inverse; panics on zero. Use [`Field::arith`] for a checked form.
    pub fn inv(&self, a: FieldElement) -> FieldElement {
        assert!(!a.is_zero(), "inverse of zero");
        match &self.tables {
            Some(t) => {
                let n = self.order - 1;
                FieldElement(t.exp[((n - t.log[a.0 as usize]) % n) as usize])
            }
            None => self.pow(a, self.order as u128 - 2),
        }
    }

    pub fn div(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.mul(a, self.inv(b))
    }

    pub fn pow(&self, a: FieldElement, e: u128) -> FieldElement {
        if e == 0 {
            return FieldElement::ONE;
        }
        if a.is_zero() {
            return FieldElement::ZERO;
        }
        let group = (self.order - 1) as u128;
        let e = e % group;
        match &self.tables {
            Some(t) => {
                let idx = (t.log[a.0 as usize] as u128 * e) % group;
                FieldElement(t.exp[idx as usize])
            }
            None => {
                let mut acc = FieldElement::ONE;
                let mut base = a;
                let mut e = e;
                while e > 0 {
                    if e & 1 == 1 {
                        acc = self.mul_poly(acc, base);
                    }
                    base = self.mul_poly(base, base);
                    e >>= 1;
                }
                acc
            }
        }
    }

    /// Checked arithmetic entry point.
    pub fn arith(&self, a: FieldElement, b: FieldElement, op: Op) -> Result<FieldElement> {
        self.check(a)?;
        if matches!(op, Op::Add | Op::Sub | Op::Mul | Op::Div) {
            self.check(b)?;
        }
        Ok(match op {
            Op::Add => self.add(a, b),
            Op::Sub => self.sub(a, b),
            Op::Mul => self.mul(a, b),
            Op::Div => {
                if b.is_zero() {
                    return Err(Error::DivisionByZero);
                }
                self.div(a, b)
            }
            Op::Pow(e) => self.pow(a, e),
            Op::Inv => {
                if a.is_zero() {
                    return Err(Error::DivisionByZero);
                }
                self.inv(a)
            }
            Op::Neg => self.neg(a),
        })
    }

    fn build_tables(&self) -> LogTables {
        let g = self.primitive_element();
        let n = self.order as usize - 1;
        let mut exp = vec![0u32; 2 * n.max(1)];
        let mut log = vec![0u32; self.order as usize];
        let mut cur = FieldElement::ONE;
        for i in 0..n {
            exp[i] = cur.0;
            log[cur.0 as usize] = i as u32;
            cur = self.mul_poly(cur, g);
        }
        for i in n..2 * n {
            exp[i] = exp[i - n];
        }
        LogTables { exp, log }
    }

    fn primitive_element(&self) -> FieldElement {
        let n = self.order as u64 - 1;
        if n == 1 {
            return FieldElement::ONE;
        }
        let mut factors = Vec::new();
        let mut m = n;
        let mut d = 2;
        while d * d <= m {
            if m.is_multiple_of(d) {
                factors.push(d);
                while m.is_multiple_of(d) {
                    m /= d;
                }
            }
            d += 1;
        }
        if m > 1 {
            factors.push(m);
        }
        let pow_slow = |a: FieldElement, mut e: u64| {
            let mut acc = FieldElement::ONE;
            let mut base = a;
            while e > 0 {
                if e & 1 == 1 {
                    acc = self.mul_poly(acc, base);
                }
                base = self.mul_poly(base, base);
                e >>= 1;
            }
            acc
        };
        (1..self.order)
            .map(FieldElement)
            .find(|&g| factors.iter().all(|&r| pow_slow(g, n / r) != FieldElement::ONE))
            .expect("multiplicative group is cyclic")
    }

    /// `a^(p^k)`.
    pub fn frobenius(&self, a: FieldElement, k: u32) -> FieldElement {
        let mut x = a;
        for _ in 0..k {
            x = self.pow(x, self.p as u128);
        }
        x
    }

    /// Absolute trace down to GF(p).
    pub fn abs_trace(&self, a: FieldElement) -> FieldElement {
        let mut acc = FieldElement::ZERO;
        let mut x = a;
        for _ in 0..self.degree {
            acc = self.add(acc, x);
            x = self.pow(x, self.p as u128);
        }
        acc
    }

    /// Order `q = p^(degree/2)` of the half-degree subfield.
    pub fn half_order(&self) -> Result<u64> {
        if !self.degree.is_multiple_of(2) {
            return Err(Error::OddDegree(self.degree));
        }
        Ok((self.p as u64).pow(self.degree / 2))
    }

    /// Relative trace to the half-degree subfield, `x^q + x`.
    pub fn rel_trace(&self, x: FieldElement) -> Result<FieldElement> {
        let q = self.half_order()?;
        Ok(self.add(self.pow(x, q as u128), x))
    }

    /// Relative norm to the half-degree subfield, `x^(q+1)`.
    pub fn rel_norm(&self, x: FieldElement) -> Result<FieldElement> {
        let q = self.half_order()?;
        Ok(self.pow(x, q as u128 + 1))
    }

    pub fn artin_schreier(&self, x: FieldElement) -> FieldElement {
        self.sub(self.pow(x, self.p as u128), x)
    }

    pub fn apply(&self, map: FieldMap, x: FieldElement) -> Result<FieldElement> {
        match map {
            FieldMap::RelTrace => self.rel_trace(x),
            FieldMap::RelNorm => self.rel_norm(x),
            FieldMap::ArtinSchreier => Ok(self.artin_schreier(x)),
        }
    }

    /// True when `x` lies in the subfield of order `p^sub_degree`.
    pub fn in_subfield(&self, x: FieldElement, sub_degree: u32) -> bool {
        self.frobenius(x, sub_degree) == x
    }

    /// Elements of the subfield of order `p^sub_degree`, in `enc` order.
    pub fn subfield_elements(&self, sub_degree: u32) -> Vec<FieldElement> {
        self.elements().filter(|&x| self.in_subfield(x, sub_degree)).collect()
    }

    /// Exhaustive solution set of `map(x) = target`, sorted by `enc`.
    pub fn preimage_set(&self, map: FieldMap, target: FieldElement) -> Result<Vec<FieldElement>> {
        self.check(target)?;
        if matches!(map, FieldMap::RelTrace | FieldMap::RelNorm) {
            self.half_order()?;
        }
        let mut out = Vec::new();
        for x in self.elements() {
            if self.apply(map, x)? == target {
                out.push(x);
            }
        }
        Ok(out)
    }

    /// An F_p-basis of the kernel of the relative trace. Without an override
    /// the elements are scanned in `enc` order and each one independent of
    /// those already kept is retained.
    pub fn trace_kernel_basis(&self, overrides: Option<&[FieldElement]>) -> Result<Vec<FieldElement>> {
        let h = self.half_order().map(|_| self.degree / 2)?;
        let mut echelon = PrimeEchelon::new(self.p, self.degree);
        match overrides {
            Some(given) => {
                if given.is_empty() || given.len() > h as usize {
                    return Err(Error::BadParams(format!("expected between 1 and {h} kernel elements")));
                }
                for &a in given {
                    self.check(a)?;
                    if !self.rel_trace(a)?.is_zero() {
                        return Err(Error::NotAKernelElement(a.enc()));
                    }
                    if !echelon.insert(&self.coeffs(a)) {
                        return Err(Error::NotIndependent);
                    }
                }
                Ok(given.to_vec())
            }
            None => {
                let mut out = Vec::with_capacity(h as usize);
                for x in self.elements().skip(1) {
                    if out.len() == h as usize {
                        break;
                    }
                    if self.rel_trace(x)?.is_zero() && echelon.insert(&self.coeffs(x)) {
                        out.push(x);
                    }
                }
                Ok(out)
            }
        }
    }

    /// Parses either a decimal `enc` value or a polynomial in `b` such as
    /// `"b^3+2*b+1"`, optionally followed by `"(mod p)"`.
    pub fn parse_element(&self, text: &str) -> Result<FieldElement> {
        let err = || Error::ParseElement(text.to_string());
        let mut s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if let Some(idx) = s.find("(mod") {
            let tail = &s[idx + 4..];
            let modp: u32 = tail.trim_end_matches(')').parse().map_err(|_| err())?;
            if modp != self.p {
                return Err(err());
            }
            s.truncate(idx);
        }
        if s.is_empty() {
            return Err(err());
        }
        if s.chars().all(|c| c.is_ascii_digit()) {
            let enc: u64 = s.parse().map_err(|_| err())?;
            if enc >= self.order as u64 {
                return Err(Error::FieldMismatch { enc, order: self.order as u64 });
            }
            return Ok(FieldElement(enc as u32));
        }
        let mut coeffs: Vec<u64> = Vec::new();
        for term in s.split('+') {
            if term.is_empty() {
                return Err(err());
            }
            let (coef, power) = match term.find('b') {
                None => (term.parse::<u64>().map_err(|_| err())?, 0usize),
                Some(pos) => {
                    let head = term[..pos].trim_end_matches('*');
                    let coef = if head.is_empty() { 1 } else { head.parse::<u64>().map_err(|_| err())? };
                    let tail = &term[pos + 1..];
                    let power = if tail.is_empty() {
                        1
                    } else {
                        tail.strip_prefix('^').ok_or_else(err)?.parse::<usize>().map_err(|_| err())?
                    };
                    (coef, power)
                }
            };
            if coeffs.len() <= power {
                coeffs.resize(power + 1, 0);
            }
            coeffs[power] = (coeffs[power] + coef) % self.p as u64;
        }
        let coeffs: Vec<u32> = coeffs.into_iter().map(|c| c as u32).collect();
        self.from_coeffs(&coeffs)
    }

    /// Polynomial rendering in the generator `b`, e.g. `"1+2*b+b^3"`.
    pub fn format_poly(&self, a: FieldElement) -> String {
        if a.is_zero() {
            return "0".to_string();
        }
        let mut terms = Vec::new();
        for (i, &c) in self.coeffs(a).iter().enumerate() {
            if c == 0 {
                continue;
            }
            let term = match (i, c) {
                (0, c) => c.to_string(),
                (1, 1) => "b".to_string(),
                (1, c) => format!("{c}*b"),
                (i, 1) => format!("b^{i}"),
                (i, c) => format!("{c}*b^{i}"),
            };
            terms.push(term);
        }
        terms.join("+")
    }
}

/// Incremental row echelon form over GF(p) for independence tests.
pub(crate) struct PrimeEchelon {
    p: u32,
    /// rows indexed by pivot column
    rows: Vec<Option<Vec<u32>>>,
}

impl PrimeEchelon {
    pub(crate) fn new(p: u32, width: u32) -> Self {
        PrimeEchelon { p, rows: vec![None; width as usize] }
    }

    /// Inserts `v`; returns false when it is dependent on earlier rows.
    pub(crate) fn insert(&mut self, v: &[u32]) -> bool {
        let p = self.p as u64;
        let mut v: Vec<u32> = v.to_vec();
        for col in 0..v.len() {
            if v[col] == 0 {
                continue;
            }
            match &self.rows[col] {
                Some(row) => {
                    let f = v[col] as u64;
                    for (x, &r) in v.iter_mut().zip(row.iter()) {
                        *x = ((*x as u64 + p * p - f * r as u64) % p) as u32;
                    }
                }
                None => {
                    let inv = fp_poly::pow_mod(v[col] as u64, p - 2, p);
                    for x in v.iter_mut() {
                        *x = (*x as u64 * inv % p) as u32;
                    }
                    self.rows[col] = Some(v);
                    return true;
                }
            }
        }
        false
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_irreducible(m: &[u32], p: u32) -> bool {
        // trial division by every monic polynomial of degree 1..=deg/2
        let deg = m.len() as u32 - 1;
        for d in 1..=deg / 2 {
            for low in 0..(p as u64).pow(d) {
                let mut f = digits_of(low, p, d);
                f.push(1);
                if fp_poly::rem(m, &f, p).is_empty() {
                    return false;
                }
            }
        }
        true
    }

    #[test]
    fn default_moduli() {
        assert_eq!(make_field(2, 2, None).unwrap().modulus(), &[1, 1, 1]);
        assert_eq!(make_field(3, 1, None).unwrap().modulus(), &[0, 1]);
        let f = make_field(3, 4, None).unwrap();
        assert!(brute_irreducible(f.modulus(), 3));
        // and it is the least one
        for low in 0..81u64 {
            let mut m = digits_of(low, 3, 4);
            m.push(1);
            if m == f.modulus() {
                break;
            }
            assert!(!brute_irreducible(&m, 3));
        }
    }

    #[test]
    fn constructor_errors() {
        assert_eq!(make_field(4, 1, None).unwrap_err(), Error::NotPrime(4));
        assert_eq!(make_field(3, 0, None).unwrap_err(), Error::InvalidDegree);
        assert_eq!(make_field(3, 4, Some(&[1, 0, 0, 0, 1])).unwrap_err(), Error::ReducibleModulus { p: 3 });
        assert!(matches!(make_field(3, 4, Some(&[1, 1, 1])).unwrap_err(), Error::DegreeMismatch { .. }));
        assert_eq!(make_field(3, 2, Some(&[1, 0, 2])).unwrap_err(), Error::NotMonic);
        assert!(make_field(2, 40, None).unwrap_err().is_infeasible());
    }

    #[test]
    fn gf4_unit_products() {
        let f = make_field(2, 2, None).unwrap();
        // the two non-identity units multiply to one
        assert_eq!(f.mul(FieldElement(2), FieldElement(3)), FieldElement::ONE);
        let table: Vec<Vec<u32>> =
            (0..4).map(|a| (0..4).map(|b| f.mul(FieldElement(a), FieldElement(b)).0).collect()).collect();
        assert_eq!(table, vec![vec![0, 0, 0, 0], vec![0, 1, 2, 3], vec![0, 2, 3, 1], vec![0, 3, 1, 2]]);
    }

    #[test]
    fn table_and_polynomial_paths_agree() {
        let f = make_field(3, 4, None).unwrap();
        for a in f.elements() {
            for b in f.elements().step_by(7) {
                assert_eq!(f.mul(a, b), if a.is_zero() || b.is_zero() { FieldElement::ZERO } else { f.mul_poly(a, b) });
            }
        }
    }

    #[test]
    fn arith_errors() {
        let f = make_field(5, 1, None).unwrap();
        assert_eq!(f.arith(FieldElement(1), FieldElement(0), Op::Div), Err(Error::DivisionByZero));
        assert_eq!(f.arith(FieldElement(0), FieldElement(0), Op::Inv), Err(Error::DivisionByZero));
        assert!(matches!(f.arith(FieldElement(9), FieldElement(1), Op::Add), Err(Error::FieldMismatch { .. })));
        assert_eq!(f.arith(FieldElement(2), FieldElement(0), Op::Pow(4)), Ok(FieldElement::ONE));
    }

    #[test]
    fn trace_norm_basics() {
        let f = make_field(3, 2, None).unwrap();
        assert_eq!(f.rel_trace(FieldElement::ZERO).unwrap(), FieldElement::ZERO);
        assert_eq!(f.rel_norm(FieldElement::ZERO).unwrap(), FieldElement::ZERO);
        let mut fibers = [0; 3];
        for x in f.elements() {
            let t = f.rel_trace(x).unwrap();
            assert!(t.enc() < 3);
            fibers[t.enc() as usize] += 1;
        }
        assert_eq!(fibers, [3, 3, 3]);
        let odd = make_field(3, 3, None).unwrap();
        assert_eq!(odd.rel_trace(FieldElement::ONE), Err(Error::OddDegree(3)));
    }

    #[test]
    fn preimages() {
        let f = make_field(2, 4, None).unwrap();
        let q = 4;
        assert_eq!(f.preimage_set(FieldMap::RelNorm, FieldElement::ONE).unwrap().len(), q + 1);
        assert_eq!(f.preimage_set(FieldMap::RelTrace, FieldElement::ONE).unwrap().len(), q);
        let prime: Vec<_> = f.preimage_set(FieldMap::ArtinSchreier, FieldElement::ZERO).unwrap();
        assert_eq!(prime, vec![FieldElement(0), FieldElement(1)]);
    }

    #[test]
    fn kernel_basis_default_and_overrides() {
        let f = make_field(3, 4, None).unwrap();
        let basis = f.trace_kernel_basis(None).unwrap();
        assert_eq!(basis.len(), 2);
        let kernel = f.elements().filter(|&x| f.rel_trace(x).unwrap().is_zero()).count();
        assert_eq!(kernel, 9);
        let a = basis[0];
        let two_a = f.mul(f.from_int(2), a);
        assert_eq!(f.trace_kernel_basis(Some(&[a, two_a])), Err(Error::NotIndependent));
        assert_eq!(f.trace_kernel_basis(Some(&[FieldElement::ONE])), Err(Error::NotAKernelElement(1)));
    }

    #[test]
    fn explicit_overrides_accepted() {
        // b a primitive fifth root of unity: b^4+b^3+b^2+b+1 = 0
        let f = make_field(3, 4, Some(&[1, 1, 1, 1, 1])).unwrap();
        let a1 = f.parse_element("b^2+b+2").unwrap();
        let a2 = f.parse_element("b^3+b+2").unwrap();
        assert_eq!(f.trace_kernel_basis(Some(&[a1, a2])).unwrap(), vec![a1, a2]);
        assert_eq!(f.pow(f.generator(), 5), FieldElement::ONE);
    }

    #[test]
    fn parse_and_format() {
        let f = make_field(3, 4, None).unwrap();
        for x in f.elements() {
            assert_eq!(f.parse_element(&f.format_poly(x)).unwrap(), x);
            assert_eq!(f.parse_element(&x.enc().to_string()).unwrap(), x);
        }
        assert_eq!(f.parse_element("2+1*b (mod 3)").unwrap(), FieldElement(5));
        assert!(f.parse_element("b^").is_err());
        assert!(f.parse_element("1+2*b(mod 5)").is_err());
        assert!(f.parse_element("81").is_err());
    }

    #[test]
    fn prime_field_generator() {
        let f = make_field(7, 1, None).unwrap();
        assert_eq!(f.generator(), FieldElement::ZERO);
        assert_eq!(f.mul(f.from_int(3), f.from_int(5)), f.from_int(1));
    }
}
