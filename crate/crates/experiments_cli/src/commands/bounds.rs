use serde::Serialize;
use speclab_counting::{
    khovanskii_cell_bound, khovanskii_complement_bound, khovanskii_floor, warren_component_bound, warren_thresholds,
};
use speclab_holder_bump::{
    analytic_floor_constant, lower_bound_constant, norm_constant_m, EntireFamilyParams, HolderClass, NormCase,
};
use speclab_truncation::{floor_lower_bound, tail_bound, truncation_degree};

use super::{Env, Produced};
use crate::cli::{BoundsTarget, CaseArg, ConstantsArgs, FamilyArgs, FloorArgs, KhovanskiiArgs, WarrenArgs};
use crate::config::{HolderSpec, Resolver};
use crate::output::Artifacts;
use crate::reference::{Big, CrossCheck};
use crate::summary::Check;
use crate::CliError;

pub(crate) fn command_name(t: &BoundsTarget) -> &'static str {
    match t {
        BoundsTarget::Warren(_) => "bounds-warren",
        BoundsTarget::Khovanskii(_) => "bounds-khovanskii",
        BoundsTarget::Floor(_) => "bounds-floor",
        BoundsTarget::Constants(_) => "bounds-constants",
    }
}

pub(crate) fn run(target: &BoundsTarget, env: &mut Env) -> Result<Produced, CliError> {
    let mut big = Big::new()?;
    let mut checks = Vec::new();
    let mut artifacts = Artifacts::default();
    match target {
        BoundsTarget::Warren(a) => warren(a, env, &mut big, &mut checks, &mut artifacts)?,
        BoundsTarget::Khovanskii(a) => khovanskii(a, env, &mut big, &mut checks, &mut artifacts)?,
        BoundsTarget::Floor(a) => floor(a, env, &mut big, &mut checks, &mut artifacts)?,
        BoundsTarget::Constants(a) => constants(a, env, &mut big, &mut checks, &mut artifacts)?,
    }
    env.cfg.validate()?;
    Ok(Produced { checks, artifacts })
}

fn reference_check(name: &str, anchor: &str, c: &CrossCheck) -> Check {
    Check::new(name, anchor, c.agrees, c.value, c.reference).with_detail(format!("reference {}", c.reference_digits))
}

#[derive(Serialize)]
struct WarrenTable {
    n: u64,
    d: u64,
    q: u64,
    log2_bound: f64,
    bound: f64,
    reference_log2: CrossCheck,
    /// (⌈8 n log₂d⌉, ⌈18 n log₂d⌉); absent for d = 1.
    thresholds: Option<(u64, u64)>,
}

fn warren(a: &WarrenArgs, env: &mut Env, big: &mut Big, checks: &mut Vec<Check>, art: &mut Artifacts) -> Result<(), CliError> {
    let res = env.res;
    let (n, d, q): (u64, u64, u64) = (res.req("n", a.n)?, res.req("d", a.d)?, res.req("q", a.q)?);
    let b = warren_component_bound(n, d, q).map_err(|e| CliError::Usage(e.to_string()))?;
    let r = big.warren_log2(n, d, q);
    let cross = big.check(b.log2(), &r)?;
    checks.push(reference_check("warren_log2", "log₂ (4edq/n)^n", &cross));
    let table = WarrenTable {
        n,
        d,
        q,
        log2_bound: b.log2(),
        bound: b.value(),
        reference_log2: cross,
        thresholds: warren_thresholds(n, d).ok(),
    };
    for (k, v) in [("n", n), ("d", d), ("q", q)] {
        env.cfg.param(k, v);
    }
    art.json("bounds.json", &table)
}

#[derive(Serialize)]
struct KhovanskiiTable {
    n: u64,
    k: u64,
    d: u64,
    cell_log2: CrossCheck,
    complement_log2: Option<CrossCheck>,
    floor: Option<CrossCheck>,
}

fn khovanskii(a: &KhovanskiiArgs, env: &mut Env, big: &mut Big, checks: &mut Vec<Check>, art: &mut Artifacts) -> Result<(), CliError> {
    let res = env.res;
    let (n, k, d): (u64, u64, u64) = (res.req("n", a.n)?, res.req("k", a.k)?, res.req("d", a.d)?);
    let bad = |e: speclab_counting::CountingError| CliError::Usage(e.to_string());
    let cell = khovanskii_cell_bound(n, k, d).map_err(bad)?;
    let r = big.khovanskii_cell_log2(n, k, d);
    let cell_x = big.check(cell.log2(), &r)?;
    checks.push(reference_check("cell_log2", "log₂ 2^{k(k−1)/2} d^{n+k} n^{n+2k}", &cell_x));
    env.cfg.param("n", n);
    env.cfg.param("k", k);
    env.cfg.param("d", d);

    let complement = match res.get::<u64>("m", a.m)? {
        Some(m) => {
            let c = khovanskii_complement_bound(n, k, d, m).map_err(bad)?;
            let r = big.khovanskii_complement_log2(n, k, d, m);
            let x = big.check(c.log2(), &r)?;
            checks.push(reference_check("complement_log2", "log₂ 2^{k(k−1)/2} (4emdn)^{n+2k}", &x));
            env.cfg.param("m", m);
            Some(x)
        }
        None => None,
    };
    let floor = match res.get::<f64>("l", a.l)? {
        Some(l) => {
            let s: usize = res.or("s", a.s, 1)?;
            let h = HolderClass::new(l, s).map_err(|e| CliError::Usage(e.to_string()))?;
            let v = khovanskii_floor(n, k, d, &h).map_err(bad)?;
            let r = big.khovanskii_floor(n, k, d, l, s);
            let x = big.check(v, &r)?;
            checks.push(reference_check("floor", "C(l,s)/(k² n log₂n log₂d)^{l/s}", &x));
            env.cfg.holder = Some(HolderSpec { l, s });
            Some(x)
        }
        None => None,
    };
    art.json("bounds.json", &KhovanskiiTable { n, k, d, cell_log2: cell_x, complement_log2: complement, floor })
}

fn family(f: &FamilyArgs, res: &Resolver, n: u64) -> Result<EntireFamilyParams, CliError> {
    let given = [f.a, f.u, f.v, f.b, f.t, f.d, f.big_b, f.r];
    if f.all_ones && given.iter().any(Option::is_some) {
        return Err(CliError::Usage("--all-ones conflicts with explicit family parameters".into()));
    }
    let one = |key: &str, v: Option<f64>| res.or(key, v, 1.0);
    let p = if f.all_ones || res.flag("all-ones", false)? {
        EntireFamilyParams::all_ones(n)
    } else {
        EntireFamilyParams {
            a: one("A", f.a)?,
            u: one("u", f.u)?,
            v: one("v", f.v)?,
            b: one("b", f.b)?,
            t: one("t", f.t)?,
            d: one("d", f.d)?,
            big_b: one("B", f.big_b)?,
            r: one("r", f.r)?,
            n,
        }
    };
    p.validate().map_err(|e| CliError::Usage(e.to_string()))?;
    Ok(p)
}

fn cases(c: CaseArg) -> Vec<NormCase> {
    match c {
        CaseArg::Uniform => vec![NormCase::Uniform],
        CaseArg::L1 => vec![NormCase::L1],
        CaseArg::Both => vec![NormCase::Uniform, NormCase::L1],
    }
}

#[derive(Serialize)]
struct FloorRow {
    case: NormCase,
    c_prime: CrossCheck,
    floor: CrossCheck,
    truncation_degree: u64,
    tail_log2: f64,
    tail_valid: bool,
}

#[derive(Serialize)]
struct FloorTable {
    params: EntireFamilyParams,
    l: f64,
    s: usize,
    n_log2_n: f64,
    rows: Vec<FloorRow>,
}

fn holder_from(res: &Resolver, l: Option<f64>, s: Option<usize>) -> Result<HolderClass, CliError> {
    let l: f64 = res.req("l", l)?;
    let s: usize = res.or("s", s, 1)?;
    HolderClass::new(l, s).map_err(|e| CliError::Usage(e.to_string()))
}

fn floor(a: &FloorArgs, env: &mut Env, big: &mut Big, checks: &mut Vec<Check>, art: &mut Artifacts) -> Result<(), CliError> {
    let res = env.res;
    let n: u64 = res.req("N", a.n)?;
    let h = holder_from(res, a.l, a.s)?;
    let p = family(&a.family, res, n)?;
    let case = res.or("case", a.case.map(case_key), "both".to_string())?;
    let case = parse_case(&case)?;
    let mut rows = Vec::new();
    for c in cases(case) {
        let tag = case_key(match c {
            NormCase::Uniform => CaseArg::Uniform,
            NormCase::L1 => CaseArg::L1,
        });
        let cp = analytic_floor_constant(c, &h, &p)?;
        let fl = floor_lower_bound(&p, &h, c).map_err(|e| CliError::Usage(e.to_string()))?;
        let cp_ref = big.floor_constant(c, h.l, h.s, &p);
        let fl_ref = big.floor_value(c, h.l, h.s, &p);
        let cp_x = big.check(cp, &cp_ref)?;
        let fl_x = big.check(fl, &fl_ref)?;
        checks.push(reference_check(&format!("c_prime_{tag}"), "C′ in 256-bit arithmetic", &cp_x));
        checks.push(reference_check(&format!("floor_{tag}"), "C′/(N log₂N)^{l/s}", &fl_x));
        let k = truncation_degree(&p, &h, lower_bound_constant(c, &h))?;
        let tail = tail_bound(&p, k)?;
        checks.push(Check::new(
            format!("tail_at_degree_{tag}"),
            "K clears N and e b d 2^{(4e+1)d} B^d N^{d(r+1)+t}",
            tail.valid,
            k,
            tail.threshold,
        ));
        rows.push(FloorRow {
            case: c,
            c_prime: cp_x,
            floor: fl_x,
            truncation_degree: k,
            tail_log2: tail.value.log2(),
            tail_valid: tail.valid,
        });
    }
    env.cfg.holder = Some(HolderSpec { l: h.l, s: h.s });
    env.cfg.param("family", p);
    env.cfg.param("case", case_key(case));
    let nf = n as f64;
    art.json("bounds.json", &FloorTable { params: p, l: h.l, s: h.s, n_log2_n: nf * nf.log2(), rows })
}

fn case_key(c: CaseArg) -> String {
    match c {
        CaseArg::Uniform => "uniform",
        CaseArg::L1 => "l1",
        CaseArg::Both => "both",
    }
    .to_string()
}

fn parse_case(s: &str) -> Result<CaseArg, CliError> {
    match s {
        "uniform" => Ok(CaseArg::Uniform),
        "l1" => Ok(CaseArg::L1),
        "both" => Ok(CaseArg::Both),
        other => Err(CliError::Usage(format!("case must be uniform, l1 or both, got {other}"))),
    }
}

#[derive(Serialize)]
struct ConstantsTable {
    l: f64,
    s: usize,
    m_norm: f64,
    c_inf: CrossCheck,
    c_l1: CrossCheck,
    family: Option<EntireFamilyParams>,
    c_prime_inf: Option<CrossCheck>,
    c_prime_l1: Option<CrossCheck>,
}

fn constants(a: &ConstantsArgs, env: &mut Env, big: &mut Big, checks: &mut Vec<Check>, art: &mut Artifacts) -> Result<(), CliError> {
    let res = env.res;
    let h = holder_from(res, a.l, a.s)?;
    let mut one = |case: NormCase, name: &str, checks: &mut Vec<Check>| -> Result<CrossCheck, CliError> {
        let r = big.lower_bound_constant(case, h.l, h.s);
        let x = big.check(lower_bound_constant(case, &h), &r)?;
        checks.push(reference_check(name, "C = 4/K with K the closed-form denominator", &x));
        Ok(x)
    };
    let c_inf = one(NormCase::Uniform, "c_inf", checks)?;
    let c_l1 = one(NormCase::L1, "c_l1", checks)?;
    checks.push(Check::new("l1_below_uniform", "C_{L¹} < C∞", c_l1.value < c_inf.value, c_l1.value, c_inf.value));
    let mut table = ConstantsTable {
        l: h.l,
        s: h.s,
        m_norm: norm_constant_m(&h),
        c_inf,
        c_l1,
        family: None,
        c_prime_inf: None,
        c_prime_l1: None,
    };
    if let Some(n) = res.get::<u64>("N", a.n)? {
        let p = family(&a.family, res, n)?;
        let mut prime = |case: NormCase, name: &str, checks: &mut Vec<Check>| -> Result<CrossCheck, CliError> {
            let r = big.floor_constant(case, h.l, h.s, &p);
            let x = big.check(analytic_floor_constant(case, &h, &p)?, &r)?;
            checks.push(reference_check(name, "C′ in 256-bit arithmetic", &x));
            Ok(x)
        };
        table.c_prime_inf = Some(prime(NormCase::Uniform, "c_prime_inf", checks)?);
        table.c_prime_l1 = Some(prime(NormCase::L1, "c_prime_l1", checks)?);
        table.family = Some(p);
        env.cfg.param("family", p);
    }
    env.cfg.holder = Some(HolderSpec { l: h.l, s: h.s });
    art.json("bounds.json", &table)
}
