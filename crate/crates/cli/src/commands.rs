use std::fs;
use std::path::PathBuf;

use clap::{Args, ValueEnum};
use fiberlrc::bounds::{bound_report, render_decimal, BoundKind, Rounding};
use fiberlrc::code_builder::{build_family_code, construction_params, LrcCode};
use fiberlrc::distance::{
    certify_distance, evaluate_witness, family_witness, find_f_sets, verify_witness, Certification, CertifyOptions,
    SearchOutcome, WitnessSpec, DEFAULT_BRUTE_FORCE_CAP, DEFAULT_SEARCH_BUDGET,
};
use fiberlrc::family::{Family, FamilyOptions, Instance};
use fiberlrc::gf::{make_field, Field, FieldElement, FieldMap, Op};
use fiberlrc::recovery::{build_recovery_index, recover_multi, RecoveryReport, Word};
use fiberlrc::tables::{build_table, figure_rows, figure_table, LPolicy, Mode, TableId};
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Map, Value};

use crate::output::{io_err, json_text, to_csv, Doc, OutDir};
use crate::{CliError, FamilyArgs};

pub struct Ctx {
    pub seed: u64,
    pub out: OutDir,
}

type Res<T> = Result<T, CliError>;

fn parse_u32_list(s: &str) -> Res<Vec<u32>> {
    s.split(',')
        .map(|x| x.trim().parse::<u32>().map_err(|_| CliError::Input(format!("not a list of integers: {s:?}"))))
        .collect()
}

fn instance(f: &FamilyArgs) -> Res<Instance> {
    let fam = Family::from_name(&f.family, f.p, f.h, f.t)?;
    let modulus = f.modulus.as_deref().map(parse_u32_list).transpose()?;
    let kernel = match &f.kernel {
        Some(text) => {
            let field = make_field(f.p, 2 * f.h, modulus.as_deref())?;
            Some(text.split(',').map(|e| field.parse_element(e)).collect::<Result<Vec<_>, _>>()?)
        }
        None => None,
    };
    Ok(fam.instance(&FamilyOptions { modulus, kernel })?)
}

fn family_json(inst: &Instance) -> Map<String, Value> {
    let fam = inst.family;
    let mut m = Map::new();
    m.insert("family".into(), fam.name().into());
    m.insert("p".into(), fam.p().into());
    m.insert("h".into(), fam.h().into());
    m.insert("t".into(), fam.t().into());
    m.insert("modulus".into(), json!(inst.fiber_product.field().modulus()));
    if !inst.kernel.is_empty() {
        m.insert("kernel".into(), json!(inst.kernel));
    }
    m
}

fn enc_row(v: &[FieldElement]) -> Vec<String> {
    v.iter().map(|x| x.enc().to_string()).collect()
}

fn rate_text(code: &LrcCode) -> String {
    render_decimal(&code.params().rate, 6, Rounding::HalfEven)
}

// ------------------------------------------------------------------ field

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum OpName {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
    Inv,
    Neg,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum MapName {
    RelTrace,
    RelNorm,
    ArtinSchreier,
}

#[derive(Args, Debug)]
pub struct FieldArgs {
    #[arg(long)]
    p: u32,
    #[arg(long, default_value_t = 1)]
    degree: u32,
    /// Modulus, low coefficient first.
    #[arg(long)]
    modulus: Option<String>,
    #[arg(long, value_enum, requires = "a")]
    op: Option<OpName>,
    /// Operand, as an enc value or a polynomial in `b`.
    #[arg(long)]
    a: Option<String>,
    #[arg(long)]
    b: Option<String>,
    /// Exponent for `--op pow`.
    #[arg(long)]
    exp: Option<u128>,
    #[arg(long, value_enum, requires = "target")]
    preimage: Option<MapName>,
    #[arg(long)]
    target: Option<String>,
    /// Print the default basis of the relative-trace kernel.
    #[arg(long)]
    kernel_basis: bool,
}

fn elem_json(f: &Field, x: FieldElement) -> Value {
    json!({ "enc": x.enc(), "poly": f.format_poly(x) })
}

pub fn field(a: &FieldArgs) -> Res<Doc> {
    let modulus = a.modulus.as_deref().map(parse_u32_list).transpose()?;
    let f = make_field(a.p, a.degree, modulus.as_deref())?;
    let mut m = Map::new();
    m.insert("p".into(), f.p().into());
    m.insert("degree".into(), f.degree().into());
    m.insert("order".into(), f.order().into());
    m.insert("modulus".into(), json!(f.modulus()));
    m.insert("generator".into(), f.generator().enc().into());
    if let Some(op) = a.op {
        let x = f.parse_element(a.a.as_deref().unwrap_or_default())?;
        let y = match &a.b {
            Some(b) => f.parse_element(b)?,
            None => FieldElement::ZERO,
        };
        let needs_b = matches!(op, OpName::Add | OpName::Sub | OpName::Mul | OpName::Div);
        if needs_b && a.b.is_none() {
            return Err(CliError::Input("this operation needs --b".into()));
        }
        let op = match op {
            OpName::Add => Op::Add,
            OpName::Sub => Op::Sub,
            OpName::Mul => Op::Mul,
            OpName::Div => Op::Div,
            OpName::Pow => Op::Pow(a.exp.ok_or_else(|| CliError::Input("--op pow needs --exp".into()))?),
            OpName::Inv => Op::Inv,
            OpName::Neg => Op::Neg,
        };
        m.insert("result".into(), elem_json(&f, f.arith(x, y, op)?));
    }
    if let Some(map) = a.preimage {
        let target = f.parse_element(a.target.as_deref().unwrap_or_default())?;
        let map = match map {
            MapName::RelTrace => FieldMap::RelTrace,
            MapName::RelNorm => FieldMap::RelNorm,
            MapName::ArtinSchreier => FieldMap::ArtinSchreier,
        };
        let sols = f.preimage_set(map, target)?;
        m.insert("preimage_size".into(), sols.len().into());
        m.insert("preimage".into(), json!(sols));
    }
    if a.kernel_basis {
        let basis = f.trace_kernel_basis(None)?;
        m.insert("kernel_basis".into(), Value::Array(basis.iter().map(|&x| elem_json(&f, x)).collect()));
    }
    Ok(Doc::Object(Value::Object(m)))
}

// ------------------------------------------------------------------ curve

fn points_csv(code_points: impl Iterator<Item = Vec<FieldElement>>, t: usize) -> Res<String> {
    let mut cols = vec!["position".to_string()];
    cols.extend((0..=t).map(|c| format!("y{c}")));
    let rows: Vec<Vec<String>> =
        code_points.enumerate().map(|(i, pt)| std::iter::once(i.to_string()).chain(enc_row(&pt)).collect()).collect();
    to_csv(&cols, &rows)
}

pub fn curve(ctx: &Ctx, fa: &FamilyArgs) -> Res<Doc> {
    let inst = instance(fa)?;
    let fp = &inst.fiber_product;
    let locus = fp.split_locus();
    let eval = inst.evaluation_set()?;
    let affine: u64 = locus.fiber_sizes.iter().sum();
    let closed = inst.family.closed_form_point_count()?;
    let mut m = family_json(&inst);
    m.insert("q".into(), fp.field().half_order().map_err(CliError::Core)?.into());
    m.insert("factors".into(), serde_json::to_value(fp.factors())?);
    m.insert("d_h".into(), json!(fp.d_h()));
    m.insert("d_y".into(), json!(fp.d_y()));
    m.insert("localities".into(), json!(fp.localities()));
    m.insert("split_locus_size".into(), locus.split.len().into());
    m.insert("base_values_used".into(), eval.base_values().len().into());
    m.insert("n".into(), eval.len().into());
    m.insert("affine_points".into(), affine.into());
    m.insert("points_closed_form".into(), closed.to_string().into());
    m.insert("point_count_matches".into(), (affine as u128 + 1 == closed).into());
    let doc = Value::Object(m);
    ctx.out.write("curve.json", &json_text(&doc))?;
    if ctx.out.is_set() {
        ctx.out.write("evaluation_set.csv", &points_csv(eval.points().map(<[_]>::to_vec), eval.t())?)?;
    }
    Ok(Doc::Object(doc))
}

// ------------------------------------------------------------------ build

fn metadata(inst: &Instance, code: &LrcCode) -> Value {
    let mut m = family_json(inst);
    m.insert("l".into(), code.l().into());
    m.insert("n".into(), code.n().into());
    m.insert("k".into(), code.k().into());
    m.insert("d_lower".into(), (code.params().d_lower as i64).into());
    m.insert("localities".into(), json!(code.params().localities.iter().map(|&r| r as u64).collect::<Vec<_>>()));
    m.insert("rate".into(), rate_text(code).into());
    Value::Object(m)
}

fn generator_csv(code: &LrcCode) -> Res<String> {
    let cols: Vec<String> = (0..code.n()).map(|c| c.to_string()).collect();
    let rows: Vec<Vec<String>> = (0..code.k()).map(|r| enc_row(code.generator().row(r))).collect();
    to_csv(&cols, &rows)
}

fn recovery_csv(code: &LrcCode) -> Res<String> {
    let idx = build_recovery_index(code)?;
    let cols = vec!["position".to_string(), "set".to_string(), "members".to_string()];
    let mut rows = Vec::new();
    for i in 0..code.n() {
        for j in 1..=idx.t() {
            let members: Vec<String> = idx.set(i, j).iter().map(ToString::to_string).collect();
            rows.push(vec![i.to_string(), j.to_string(), members.join(" ")]);
        }
    }
    to_csv(&cols, &rows)
}

pub fn build(ctx: &Ctx, fa: &FamilyArgs, l: u64) -> Res<Doc> {
    let inst = instance(fa)?;
    let code = build_family_code(&inst, l)?;
    let meta = metadata(&inst, &code);
    if ctx.out.is_set() {
        ctx.out.write("metadata.json", &json_text(&meta))?;
        ctx.out.write("generator.csv", &generator_csv(&code)?)?;
        let eval = code.evaluation_set();
        ctx.out.write("evaluation_set.csv", &points_csv(eval.points().map(<[_]>::to_vec), eval.t())?)?;
        ctx.out.write("recovery_index.csv", &recovery_csv(&code)?)?;
    }
    Ok(Doc::Object(meta))
}

// ------------------------------------------------------------------ recover

#[derive(Args, Debug)]
pub struct RecoverArgs {
    #[command(flatten)]
    fam: FamilyArgs,
    #[arg(long, default_value_t = 0)]
    l: u64,
    /// Received word as CSV `position,symbol`; `?` marks an erasure.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Demo mode: number of random erasures in a random codeword.
    #[arg(long, default_value_t = 1)]
    erase: usize,
}

fn word_csv(word: &Word) -> Res<String> {
    let cols = vec!["position".to_string(), "symbol".to_string()];
    let rows: Vec<Vec<String>> = (0..word.symbols.len())
        .map(|i| {
            let s = if word.present[i] { word.symbols[i].enc().to_string() } else { "?".to_string() };
            vec![i.to_string(), s]
        })
        .collect();
    to_csv(&cols, &rows)
}

fn read_word(path: &PathBuf, code: &LrcCode) -> Res<Word> {
    let text = fs::read_to_string(path).map_err(|e| io_err(path, e))?;
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    let mut values: Vec<Option<FieldElement>> = vec![None; code.n()];
    let mut seen = vec![false; code.n()];
    for rec in rdr.records() {
        let rec = rec?;
        let (pos, sym) = match (rec.get(0), rec.get(1)) {
            (Some(p), Some(s)) => (p.trim(), s.trim()),
            _ => return Err(CliError::Input("expected rows position,symbol".into())),
        };
        let pos: usize = pos.parse().map_err(|_| CliError::Input(format!("bad position {pos:?}")))?;
        if pos >= code.n() || seen[pos] {
            return Err(CliError::Input(format!("position {pos} out of range or repeated")));
        }
        seen[pos] = true;
        if sym != "?" {
            values[pos] = Some(code.field().parse_element(sym)?);
        }
    }
    if let Some(missing) = seen.iter().position(|s| !s) {
        return Err(CliError::Input(format!("position {missing} missing from input")));
    }
    Ok(Word::from_options(&values))
}

fn report_json(rep: &RecoveryReport) -> Res<Map<String, Value>> {
    match serde_json::to_value(rep)? {
        Value::Object(m) => Ok(m),
        _ => unreachable!("reports serialize as objects"),
    }
}

pub fn recover(ctx: &Ctx, a: &RecoverArgs) -> Res<Doc> {
    let inst = instance(&a.fam)?;
    let code = build_family_code(&inst, a.l)?;
    let idx = build_recovery_index(&code)?;
    if let Some(path) = &a.input {
        let word = read_word(path, &code)?;
        let rep = recover_multi(&code, &idx, &word)?;
        let text = word_csv(&rep.word)?;
        ctx.out.write("recovered.csv", &text)?;
        ctx.out.write("report.json", &json_text(&Value::Object(report_json(&rep)?)))?;
        let mut rdr = csv::Reader::from_reader(text.as_bytes());
        let rows: Vec<Vec<String>> =
            rdr.records().map(|r| r.map(|r| r.iter().map(String::from).collect())).collect::<Result<_, _>>()?;
        return Ok(Doc::table(vec!["position".into(), "symbol".into()], rows));
    }
    if a.erase > code.n() {
        return Err(CliError::Input(format!("cannot erase {} of {} positions", a.erase, code.n())));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(ctx.seed);
    let order = code.field().order() as u32;
    let msg: Vec<FieldElement> = (0..code.k()).map(|_| FieldElement::from_enc(rng.gen_range(0..order))).collect();
    let cw = code.encode(&msg)?;
    let mut word = Word::complete(cw.clone());
    let mut erased: Vec<usize> = sample(&mut rng, code.n(), a.erase).into_vec();
    erased.sort_unstable();
    for &e in &erased {
        word.erase(e);
    }
    let rep = recover_multi(&code, &idx, &word)?;
    let correct = rep.failed.is_empty() && rep.word.symbols == cw;
    let mut m = report_json(&rep)?;
    m.insert("n".into(), code.n().into());
    m.insert("k".into(), code.k().into());
    m.insert("seed".into(), ctx.seed.into());
    m.insert("erased".into(), json!(erased));
    m.insert("success".into(), correct.into());
    if ctx.out.is_set() {
        ctx.out.write("received.csv", &word_csv(&word)?)?;
        ctx.out.write("recovered.csv", &word_csv(&rep.word)?)?;
        ctx.out.write("report.json", &json_text(&Value::Object(m.clone())))?;
    }
    Ok(Doc::Object(Value::Object(m)))
}

// ------------------------------------------------------------------ certify

#[derive(Args, Debug)]
pub struct CertifyArgs {
    #[command(flatten)]
    fam: FamilyArgs,
    #[arg(long, default_value_t = 0)]
    l: u64,
    /// Check this witness JSON instead of certifying.
    #[arg(long)]
    witness: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_BRUTE_FORCE_CAP)]
    brute_force_cap: u128,
    #[arg(long, default_value_t = DEFAULT_SEARCH_BUDGET)]
    search_budget: usize,
}

pub fn certify(ctx: &Ctx, a: &CertifyArgs) -> Res<Doc> {
    let inst = instance(&a.fam)?;
    let code = build_family_code(&inst, a.l)?;
    let factors = inst.fiber_product.factors();
    let mut m = family_json(&inst);
    m.insert("l".into(), code.l().into());
    m.insert("n".into(), code.n().into());
    m.insert("k".into(), code.k().into());
    m.insert("d_lower".into(), (code.params().d_lower as i64).into());

    if let Some(path) = &a.witness {
        let text = fs::read_to_string(path).map_err(|e| io_err(path, e))?;
        let w: WitnessSpec = serde_json::from_str(&text)?;
        if w.l != code.l() {
            return Err(CliError::Input(format!("witness is for l={}, code has l={}", w.l, code.l())));
        }
        let (_, weight) = evaluate_witness(&code, &w);
        m.insert("weight".into(), weight.into());
        match verify_witness(&code, factors, &w) {
            Ok(()) => {
                m.insert("valid".into(), true.into());
                m.insert("equals_bound".into(), (weight as i128 == code.params().d_lower).into());
            }
            Err(fiberlrc::Error::InvalidWitness { condition, detail }) => {
                m.insert("valid".into(), false.into());
                m.insert("failed_condition".into(), condition.into());
                m.insert("detail".into(), detail.into());
            }
            Err(e) => return Err(e.into()),
        }
        return Ok(Doc::Object(Value::Object(m)));
    }

    let opts = CertifyOptions { brute_force_cap: a.brute_force_cap, search_budget: a.search_budget };
    let cert = certify_distance(&code, Some(&inst), opts)?;
    if let Value::Object(c) = serde_json::to_value(&cert)? {
        m.extend(c);
    }
    if let Certification::Interval { .. } = cert {
        m.insert("note".into(), "not certified exact".into());
    }
    if ctx.out.is_set() {
        // prefer a verified witness; otherwise keep the published sets for inspection
        let published = family_witness(&inst, code.l()).ok();
        let witness = match published {
            Some(w) if verify_witness(&code, factors, &w).is_ok() => Some((w, true)),
            other => match find_f_sets(&code, factors, a.search_budget)? {
                SearchOutcome::Found { witness } => Some((witness, true)),
                SearchOutcome::NotFound { .. } => other.map(|w| (w, false)),
            },
        };
        if let Some((w, ok)) = witness {
            m.insert("witness_verified".into(), ok.into());
            ctx.out.write("witness.json", &json_text(&serde_json::to_value(&w)?))?;
        }
        ctx.out.write("certification.json", &json_text(&Value::Object(m.clone())))?;
    }
    Ok(Doc::Object(Value::Object(m)))
}

// ------------------------------------------------------------------ bounds

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum BoundName {
    Singleton,
    TamoBarg,
    Bt,
    Bmq,
}

#[derive(Args, Debug)]
pub struct BoundsArgs {
    #[arg(long, required_unless_present = "family")]
    n: Option<u128>,
    #[arg(long, required_unless_present = "family")]
    k: Option<u128>,
    /// Comma-separated localities, e.g. `3,4`.
    #[arg(long, required_unless_present = "family")]
    localities: Option<String>,
    /// Known minimum distance, for the defect.
    #[arg(long)]
    d: Option<i128>,
    /// Take n, k, localities and d from a family's closed form instead.
    #[arg(long, conflicts_with_all = ["n", "k", "localities"])]
    family: Option<String>,
    #[arg(long, requires = "family")]
    p: Option<u32>,
    #[arg(long, default_value_t = 1)]
    h: u32,
    #[arg(long)]
    t: Option<u32>,
    #[arg(long, default_value_t = 0)]
    l: u128,
    #[arg(long, value_enum, default_value_t = BoundName::Bt)]
    selected: BoundName,
}

pub fn bounds(a: &BoundsArgs) -> Res<Doc> {
    let (n, k, loc, d) = match &a.family {
        Some(name) => {
            let p = a.p.ok_or_else(|| CliError::Input("--family needs --p".into()))?;
            let fam = Family::from_name(name, p, a.h, a.t)?;
            let par = construction_params(&fam.shape()?, a.l)?;
            let d = match a.d {
                Some(d) => Some(d),
                None => fam.exact_distance(a.l)?.map(|d| d as i128),
            };
            (par.n, par.k, par.localities, d)
        }
        None => {
            let loc = parse_u32_list(a.localities.as_deref().unwrap_or_default())?;
            (a.n.unwrap_or(0), a.k.unwrap_or(0), loc.into_iter().map(u128::from).collect(), a.d)
        }
    };
    let selected = match a.selected {
        BoundName::Singleton => BoundKind::Singleton,
        BoundName::TamoBarg => BoundKind::TamoBarg,
        BoundName::Bt => BoundKind::BhadaneThangaraj,
        BoundName::Bmq => BoundKind::Bmq,
    };
    let rep = bound_report(n, k, &loc, d, selected)?;
    let mut v = serde_json::to_value(&rep)?;
    if let (Value::Object(m), Some(rd)) = (&mut v, &rep.relative_defect) {
        m.insert("relative_defect_4dp".into(), render_decimal(rd, 4, Rounding::HalfEven).into());
    }
    Ok(Doc::Object(v))
}

// ------------------------------------------------------------------ tables

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum ModeName {
    ClosedForm,
    Enumerate,
}

#[derive(Args, Debug)]
pub struct TableArgs {
    /// `hermitian`, `thc`, `as_p3t2`, `as_p5t2`, `as_rate`, `as_dist`, or 1-6.
    id: String,
    #[arg(long, value_enum, default_value_t = ModeName::ClosedForm)]
    mode: ModeName,
}

pub fn table(ctx: &Ctx, a: &TableArgs) -> Res<Doc> {
    let id: TableId = a.id.parse()?;
    let mode = match a.mode {
        ModeName::ClosedForm => Mode::ClosedForm,
        ModeName::Enumerate => Mode::Enumerate,
    };
    let t = build_table(id, mode)?;
    let columns: Vec<String> = t.columns.iter().map(|c| c.to_string()).collect();
    let rows: Vec<Vec<String>> = t.rows.iter().map(|r| r.iter().map(ToString::to_string).collect()).collect();
    ctx.out.write(&format!("table_{}.csv", id.name()), &to_csv(&columns, &rows)?)?;
    Ok(Doc::Table { columns, rows, records: Some(t.records()) })
}

#[derive(Args, Debug)]
pub struct FigureArgs {
    #[arg(long)]
    p: u32,
    #[arg(long, default_value_t = 2)]
    t_min: u32,
    #[arg(long, default_value_t = 10)]
    t_max: u32,
    /// `max-rate` or `zero`.
    #[arg(long, default_value = "max-rate")]
    l_policy: String,
    /// Fix h instead of h = t.
    #[arg(long)]
    h: Option<u32>,
    #[arg(long, default_value_t = 6)]
    places: u32,
}

pub fn figure_data(ctx: &Ctx, a: &FigureArgs) -> Res<Doc> {
    if a.t_min < 1 || a.t_min > a.t_max {
        return Err(CliError::Input(format!("bad t range {}..={}", a.t_min, a.t_max)));
    }
    let policy: LPolicy = a.l_policy.parse()?;
    let rows = figure_rows(a.p, a.t_min..=a.t_max, policy, a.h)?;
    let (cols, cells) = figure_table(&rows, a.places);
    let columns: Vec<String> = cols.iter().map(|c| c.to_string()).collect();
    let rows: Vec<Vec<String>> = cells.iter().map(|r| r.iter().map(ToString::to_string).collect()).collect();
    ctx.out.write(&format!("figure_p{}.csv", a.p), &to_csv(&columns, &rows)?)?;
    Ok(Doc::table(columns, rows))
}
