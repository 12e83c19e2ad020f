//! Parameter tables and figure series, from closed forms or by building and
//! certifying the codes.

use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;
use serde::{Serialize, Serializer};

use crate::bounds::{
    bhadane_thangaraj, reference_constructions, render_decimal, tamo_barg_d, tamo_barg_rate_cap, Rounding,
};
use crate::code_builder::{build_family_code, construction_params, max_l_positive, ratio};
use crate::curves::ENUM_CAP;
use crate::distance::{certify_distance, Certification, CertifyOptions};
use crate::error::{Error, Result};
use crate::family::{Family, FamilyOptions};

/// Enumerate mode only builds codes with `n * k` at most this.
pub const ENUMERATE_CELL_CAP: u128 = 2_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TableId {
    Hermitian,
    Thc,
    AsP3t2,
    AsP5t2,
    AsRate,
    AsDist,
}

impl TableId {
    pub const ALL: [TableId; 6] =
        [TableId::Hermitian, TableId::Thc, TableId::AsP3t2, TableId::AsP5t2, TableId::AsRate, TableId::AsDist];

    pub fn name(self) -> &'static str {
        match self {
            TableId::Hermitian => "hermitian",
            TableId::Thc => "thc",
            TableId::AsP3t2 => "as_p3t2",
            TableId::AsP5t2 => "as_p5t2",
            TableId::AsRate => "as_rate",
            TableId::AsDist => "as_dist",
        }
    }

    pub fn number(self) -> usize {
        TableId::ALL.iter().position(|&t| t == self).unwrap() + 1
    }
}

impl FromStr for TableId {
    type Err = Error;

    /// Accepts the name or the table number.
    fn from_str(s: &str) -> Result<TableId> {
        let s = s.trim();
        TableId::ALL
            .into_iter()
            .find(|t| t.name() == s || t.number().to_string() == s)
            .ok_or_else(|| Error::UnknownTable(s.to_string()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    #[default]
    ClosedForm,
    Enumerate,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Cell {
    Int(i128),
    Text(String),
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cell::Int(v) => write!(f, "{v}"),
            Cell::Text(s) => f.write_str(s),
        }
    }
}

impl Serialize for Cell {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Cell::Int(v) => s.serialize_i128(*v),
            Cell::Text(t) => s.serialize_str(t),
        }
    }
}

impl From<u128> for Cell {
    fn from(v: u128) -> Cell {
        Cell::Int(v as i128)
    }
}

impl From<i128> for Cell {
    fn from(v: i128) -> Cell {
        Cell::Int(v)
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Cell {
        Cell::Text(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Cell {
        Cell::Text(v.to_string())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Table {
    pub id: TableId,
    pub mode: Mode,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|&c| c == name)
    }

    pub fn cell(&self, row: usize, name: &str) -> Option<&Cell> {
        self.column(name).and_then(|c| self.rows.get(row).map(|r| &r[c]))
    }

    /// Rows as JSON objects keyed by column name.
    pub fn records(&self) -> Vec<serde_json::Map<String, serde_json::Value>> {
        self.rows
            .iter()
            .map(|r| {
                self.columns
                    .iter()
                    .zip(r)
                    .map(|(c, v)| {
                        let v = match v {
                            Cell::Int(i) => serde_json::Value::from(*i as i64),
                            Cell::Text(s) => serde_json::Value::from(s.as_str()),
                        };
                        (c.to_string(), v)
                    })
                    .collect()
            })
            .collect()
    }
}

/// Rounding used for each table's decimal columns.
pub fn table_rounding(id: TableId) -> Rounding {
    match id {
        TableId::Thc => Rounding::Truncate,
        _ => Rounding::HalfEven,
    }
}

pub const HERMITIAN_ROWS: [(u32, u32); 16] = [
    (2, 1),
    (2, 2),
    (2, 3),
    (2, 4),
    (3, 1),
    (3, 2),
    (3, 3),
    (3, 4),
    (5, 1),
    (5, 2),
    (5, 3),
    (5, 4),
    (7, 1),
    (7, 2),
    (7, 3),
    (7, 4),
];

pub const THC_ROWS: [(u32, u32, &[u128]); 5] =
    [(2, 2, &[0, 1, 2, 3, 4]), (5, 1, &[0, 3, 5]), (7, 1, &[0, 3, 7]), (11, 1, &[0, 5, 11]), (13, 1, &[0, 13])];

pub const AS_GRID: [(u32, u32); 9] = [(3, 2), (3, 3), (3, 4), (5, 2), (5, 3), (5, 4), (7, 2), (7, 3), (7, 4)];

/// Outcome of trying to build and certify one row.
enum Enumerated {
    Done(Certification),
    Skipped(&'static str),
}

fn enumerate_row(family: Family, l: u128, n: u128, k: u128) -> Result<Enumerated> {
    let order = family.q()?.saturating_mul(family.q()?);
    if order > ENUM_CAP as u128 {
        return Ok(Enumerated::Skipped("closed-form (field too large to enumerate)"));
    }
    if n.saturating_mul(k) > ENUMERATE_CELL_CAP {
        return Ok(Enumerated::Skipped("closed-form (code too large to enumerate)"));
    }
    let inst = family.instance(&FamilyOptions::default())?;
    let code = build_family_code(&inst, l as u64)?;
    if code.n() as u128 != n || code.k() as u128 != k {
        return Err(Error::BadParams(format!("built [{}, {}] but closed form says [{n}, {k}]", code.n(), code.k())));
    }
    Ok(Enumerated::Done(certify_distance(&code, Some(&inst), CertifyOptions::default())?))
}

fn provenance_of(c: &Certification) -> String {
    match c {
        Certification::Exact { provenance, .. } => format!("certified-exact ({provenance})"),
        Certification::Interval { upper_provenance, .. } => format!("interval (upper: {upper_provenance})"),
    }
}

/// Distance cell plus provenance, either from a closed form or from certification.
fn distance_cell(
    mode: Mode,
    family: Family,
    l: u128,
    n: u128,
    k: u128,
    closed: Option<u128>,
) -> Result<(Option<i128>, Cell, String)> {
    let closed_cell = |d: Option<u128>| match d {
        Some(d) => (Some(d as i128), Cell::from(d), "closed-form".to_string()),
        None => (None, Cell::from("-"), "closed-form".to_string()),
    };
    if mode == Mode::ClosedForm {
        return Ok(closed_cell(closed));
    }
    match enumerate_row(family, l, n, k)? {
        Enumerated::Skipped(why) => {
            let (d, c, _) = closed_cell(closed);
            Ok((d, c, why.to_string()))
        }
        Enumerated::Done(cert) => {
            let prov = provenance_of(&cert);
            Ok(match cert {
                Certification::Exact { d, .. } => (Some(d as i128), Cell::from(d as u128), prov),
                Certification::Interval { lower, upper, .. } => (None, Cell::from(format!("[{lower},{upper}]")), prov),
            })
        }
    }
}

fn rel(num: i128, den: u128) -> BigRational {
    BigRational::new(num.into(), den.into())
}

pub fn build_table(id: TableId, mode: Mode) -> Result<Table> {
    let rounding = table_rounding(id);
    let mut rows = Vec::new();
    let columns: Vec<&'static str> = match id {
        TableId::Hermitian => {
            for (p, h) in HERMITIAN_ROWS {
                let fam = Family::HermitianLrc2 { p, h };
                let s = fam.shape()?;
                let par = construction_params(&s, 0)?;
                let q = s.q;
                let bt = bhadane_thangaraj(par.n, par.k, &par.localities)?.bound;
                let (d, dcell, prov) = distance_cell(mode, fam, 0, par.n, par.k, fam.exact_distance(0)?)?;
                let defect = d.map_or("-".to_string(), |d| render_decimal(&rel(bt - d, par.n), 4, rounding));
                rows.push(vec![
                    Cell::from(q * q),
                    Cell::from(q - 1),
                    Cell::from(q),
                    Cell::from(par.n),
                    Cell::from(par.k),
                    dcell,
                    Cell::from(bt),
                    Cell::from(defect),
                    Cell::from(prov),
                ]);
            }
            vec!["q2", "r1", "r2", "n", "k", "d", "bt_bound", "rel_defect", "provenance"]
        }
        TableId::Thc => {
            for (p, h, ls) in THC_ROWS {
                let fam = Family::Thc { p, h };
                let s = fam.shape()?;
                for &l in ls {
                    let par = construction_params(&s, l)?;
                    let bt = bhadane_thangaraj(par.n, par.k, &par.localities)?.bound;
                    let (d, dcell, prov) = distance_cell(mode, fam, l, par.n, par.k, fam.exact_distance(l)?)?;
                    let defect = d.map_or("-".to_string(), |d| render_decimal(&rel(bt - d, par.n), 4, rounding));
                    rows.push(vec![
                        Cell::from(s.q),
                        Cell::from(par.n),
                        Cell::from(l),
                        Cell::from(par.k),
                        dcell,
                        Cell::from(bt),
                        Cell::from(defect),
                        Cell::from(prov),
                    ]);
                }
            }
            vec!["q", "n", "l", "k", "d", "bt_bound", "rel_defect", "provenance"]
        }
        TableId::AsP3t2 | TableId::AsP5t2 => {
            let p = if id == TableId::AsP3t2 { 3 } else { 5 };
            let fam = Family::ArtinSchreier { p, h: 2, t: 2 };
            let s = fam.shape()?;
            let lmax = max_l_positive(&s)?.ok_or(Error::Overflow)?;
            let lexact = fam.exact_distance_max_l()?.unwrap_or(0);
            for l in [0, lexact, lmax] {
                let par = construction_params(&s, l)?;
                let r = par.localities[0];
                let tb = tamo_barg_d(par.n, par.k, r, 2)?;
                let closed = fam.exact_distance(l)?;
                let (_, mut dcell, prov) = distance_cell(mode, fam, l, par.n, par.k, closed)?;
                if closed.is_none() && dcell == Cell::from("-") {
                    dcell = Cell::from(format!("{}*", par.d_lower));
                }
                rows.push(vec![
                    Cell::from(l),
                    Cell::from(par.k),
                    Cell::from(render_decimal(&par.rate, 3, rounding)),
                    dcell,
                    Cell::from(tb),
                    Cell::from(prov),
                ]);
            }
            vec!["l", "k", "rate", "d", "tb_bound", "provenance"]
        }
        TableId::AsRate => {
            for (p, t) in AS_GRID {
                let fam = Family::ArtinSchreier { p, h: t, t };
                let s = fam.shape()?;
                let l = max_l_positive(&s)?.ok_or(Error::Overflow)?;
                let par = construction_params(&s, l)?;
                let r = par.localities[0];
                let upper = fam.exact_distance_max_l()?.map(|lp| fam.exact_distance(lp)).transpose()?.flatten();
                let closed = || (par.d_lower, upper.map_or(Cell::from("-"), Cell::from));
                let (lo, hi, prov) = if mode == Mode::ClosedForm {
                    let (a, b) = closed();
                    (a, b, "closed-form".to_string())
                } else {
                    match enumerate_row(fam, l, par.n, par.k)? {
                        Enumerated::Done(c) => {
                            let (a, b) = c.bounds();
                            (a as i128, Cell::from(b as u128), provenance_of(&c))
                        }
                        Enumerated::Skipped(why) => {
                            let (a, b) = closed();
                            (a, b, why.to_string())
                        }
                    }
                };
                rows.push(vec![
                    Cell::from(p as u128),
                    Cell::from(t as u128),
                    Cell::from(l),
                    Cell::from(s.q * s.q),
                    Cell::from(r),
                    Cell::from(par.n),
                    Cell::from(par.k),
                    Cell::from(lo),
                    hi,
                    Cell::from(render_decimal(&par.rate, 3, rounding)),
                    Cell::from(render_decimal(&tamo_barg_rate_cap(r, t)?, 3, rounding)),
                    Cell::from(prov),
                ]);
            }
            vec!["p", "t", "l", "q2", "r", "n", "k", "d_lower", "d_upper", "rate", "tb_rate_cap", "provenance"]
        }
        TableId::AsDist => {
            for (p, t) in AS_GRID {
                let fam = Family::ArtinSchreier { p, h: t, t };
                let s = fam.shape()?;
                let par = construction_params(&s, 0)?;
                let r = par.localities[0];
                let tb = tamo_barg_d(par.n, par.k, r, t)?;
                let (d, dcell, prov) = distance_cell(mode, fam, 0, par.n, par.k, fam.exact_distance(0)?)?;
                let defect = d.map_or("-".to_string(), |d| render_decimal(&rel(tb - d, par.n), 4, rounding));
                rows.push(vec![
                    Cell::from(p as u128),
                    Cell::from(t as u128),
                    Cell::from(r),
                    Cell::from(par.n),
                    Cell::from(par.k),
                    dcell,
                    Cell::from(tb),
                    Cell::from(defect),
                    Cell::from(prov),
                ]);
            }
            vec!["p", "t", "r", "n", "k", "d", "tb_bound", "rel_defect", "provenance"]
        }
    };
    Ok(Table { id, mode, columns, rows })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LPolicy {
    #[default]
    MaxRate,
    Zero,
}

impl FromStr for LPolicy {
    type Err = Error;

    fn from_str(s: &str) -> Result<LPolicy> {
        match s {
            "max_rate" | "max-rate" => Ok(LPolicy::MaxRate),
            "zero" => Ok(LPolicy::Zero),
            _ => Err(Error::BadParams(format!("unknown l policy {s}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FigureRow {
    pub p: u32,
    pub t: u32,
    pub h: u32,
    pub l: u128,
    pub n: u128,
    pub k: u128,
    pub rate: BigRational,
    pub tb_rate_cap: BigRational,
    pub product_rate: BigRational,
    pub wang_rate: BigRational,
}

/// Closed-form rate series for `A_{p^h, t}` over `t` in `ts`; `h = t`
/// unless fixed.
pub fn figure_rows(
    p: u32,
    ts: std::ops::RangeInclusive<u32>,
    policy: LPolicy,
    h: Option<u32>,
) -> Result<Vec<FigureRow>> {
    let mut out = Vec::new();
    for t in ts {
        let h = h.unwrap_or(t);
        let fam = Family::ArtinSchreier { p, h, t };
        let s = fam.shape()?;
        let l = match policy {
            LPolicy::MaxRate => max_l_positive(&s)?.ok_or(Error::Overflow)?,
            LPolicy::Zero => 0,
        };
        let par = construction_params(&s, l)?;
        let r = (p - 1) as u128;
        let refs = reference_constructions(r, t)?;
        out.push(FigureRow {
            p,
            t,
            h,
            l,
            n: par.n,
            k: par.k,
            rate: par.rate,
            tb_rate_cap: tamo_barg_rate_cap(r, t)?,
            product_rate: refs.product.rate,
            wang_rate: refs.wang.rate,
        });
    }
    Ok(out)
}

pub fn figure_table(rows: &[FigureRow], places: u32) -> (Vec<&'static str>, Vec<Vec<Cell>>) {
    let cols = vec!["p", "t", "h", "l", "n", "k", "rate", "tb_rate_cap", "product_rate", "wang_rate"];
    let r = |x: &BigRational| Cell::from(render_decimal(x, places, Rounding::HalfEven));
    let body = rows
        .iter()
        .map(|row| {
            vec![
                Cell::from(row.p as u128),
                Cell::from(row.t as u128),
                Cell::from(row.h as u128),
                Cell::from(row.l),
                Cell::from(row.n.to_string()),
                Cell::from(row.k.to_string()),
                r(&row.rate),
                r(&row.tb_rate_cap),
                r(&row.product_rate),
                r(&row.wang_rate),
            ]
        })
        .collect();
    (cols, body)
}

/// Exact `k / n`.
pub fn rate_of(k: u128, n: u128) -> BigRational {
    ratio(k, n)
}
