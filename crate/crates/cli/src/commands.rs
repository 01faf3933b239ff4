use std::collections::BTreeMap;
use std::ops::RangeInclusive;

use avset_core::bounds::{self, aux_profiles, check_bounds, corollary_bound, main_bound, mu, restricted_bound};
use avset_core::exact::{chi_counts, formula_from_chi, run_exact, DEFAULT_BUDGET};
use avset_core::rational::{factorial, render, RationalJson};
use avset_core::seed::seeded_a;
use avset_core::suite::{Status, Suite, SuiteConfig};
use avset_core::symcore::{assemble_r, build_h_integer};
use avset_core::varscan::{chi_estimate_check, count_points, singular_scan, DEFAULT_SCAN_BUDGET};
use avset_core::{
    validate_regime, Budget, Error, FamilySpec, FieldCtx, Method, ScanMode, ScanOptions,
};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::args::{
    BoundsGridArgs, BoundsPointArgs, BoundsSweepArgs, ChiArgs, EvaluatorArg, ExactArgs, FamilyArgs, HtableArgs, MethodArg,
    ModeArg, ScanArgs, VerifyArgs,
};
use crate::output::Report;

/// A report plus whether it records a property violation.
pub struct Outcome {
    pub report: Report,
    pub violation: Option<String>,
}

impl Outcome {
    fn ok(report: Report) -> Self {
        Outcome { report, violation: None }
    }
}

pub type CmdResult = Result<Outcome, Error>;

fn warn(msg: &str) {
    eprintln!("warning: {msg}");
}

fn budget_or(budget: Option<f64>, default: u128) -> Budget {
    Budget(budget.map(|b| b as u128).unwrap_or(default))
}

fn choose_a(q: u32, s: usize, a: &Option<Vec<u32>>, seed: Option<u64>) -> Vec<u32> {
    match (a, seed) {
        (Some(a), _) => a.clone(),
        (None, Some(seed)) => seeded_a(q, s, seed),
        (None, None) => vec![0; s],
    }
}

/// Parses the field and checks the identity hypotheses before building the
/// family.
fn family(args: &FamilyArgs) -> Result<FamilySpec, Error> {
    let field = FieldCtx::parse(&args.field)?;
    let q = field.q();
    let regime = validate_regime(q as u64, args.d as u64, args.s as u64, None);
    if !regime.identity {
        return Err(Error::Regime(format!(
            "need d < q and 1 <= s <= d-2 (q={q}, d={}, s={})",
            args.d, args.s
        )));
    }
    FamilySpec::new(&field, args.d, args.s, choose_a(q, args.s, &args.a, args.seed))
}

fn r_range(spec: &FamilySpec, r: &Option<RangeInclusive<usize>>) -> Result<RangeInclusive<usize>, Error> {
    let full = spec.m() + 1..=spec.d();
    let range = r.clone().unwrap_or(full.clone());
    if range.start() < full.start() || range.end() > full.end() {
        return Err(Error::Regime(format!(
            "r must lie in [{}, {}], got {}..{}",
            full.start(),
            full.end(),
            range.start(),
            range.end()
        )));
    }
    Ok(range)
}

fn family_json(spec: &FamilySpec) -> Value {
    json!({
        "field": spec.field().spec_string(),
        "q": spec.field().q(),
        "d": spec.d(),
        "s": spec.s(),
        "a": spec.a(),
    })
}

fn join(a: &[u32]) -> String {
    a.iter().map(u32::to_string).collect::<Vec<_>>().join(";")
}

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|v| v.to_string()).unwrap_or_default()
}

pub fn exact(args: &ExactArgs, budget: Option<f64>) -> CmdResult {
    let spec = family(&args.family)?;
    let method = match args.method {
        MethodArg::Brute => Method::Brute,
        MethodArg::Formula => Method::Formula,
        MethodArg::Both => Method::Both,
    };
    let rep = run_exact(&spec, method, budget_or(budget, DEFAULT_BUDGET))?;
    let row = rep.csv_row();
    let mut report = Report::new(
        rep.to_json(),
        &["q", "p", "k", "d", "s", "a", "avg_brute", "avg_formula", "first_sum", "chi", "identity_holds", "elapsed_ms"],
    );
    report.row(vec![
        row.q.to_string(),
        row.p.to_string(),
        row.k.to_string(),
        row.d.to_string(),
        row.s.to_string(),
        row.a,
        row.avg_brute,
        row.avg_formula,
        row.first_sum,
        row.chi,
        row.identity_holds,
        row.elapsed_ms.to_string(),
    ]);
    let violation = (rep.identity_holds == Some(false)).then(|| "exhaustive and formula averages differ".to_string());
    Ok(Outcome { report, violation })
}

pub fn chi(args: &ChiArgs, budget: Option<f64>) -> CmdResult {
    let spec = family(&args.family)?;
    let range = r_range(&spec, &args.r)?;
    let budget = budget_or(budget, DEFAULT_BUDGET);
    let counts = chi_counts(&spec, *range.end(), budget)?;
    let q = spec.field().q() as u64;
    let mut rows = Vec::new();
    let mut report = Report::new(Value::Null, &["r", "chi", "estimate_bound", "estimate_holds"]);
    let mut violation = None;
    for r in range.clone() {
        let in_regime = validate_regime(q, spec.d() as u64, spec.s() as u64, Some(r as u64)).chi_estimate;
        let estimate = if in_regime {
            Some(chi_estimate_check(&spec, r, budget)?)
        } else {
            None
        };
        if estimate.as_ref().is_some_and(|e| !e.holds) {
            violation = Some(format!("chi estimate fails at r={r}"));
        }
        report.row(vec![
            r.to_string(),
            counts[&r].to_string(),
            opt(estimate.as_ref().map(|e| e.bound.clone())),
            opt(estimate.as_ref().map(|e| e.holds)),
        ]);
        rows.push(json!({ "r": r, "chi": counts[&r], "estimate": estimate }));
    }
    if !validate_regime(q, spec.d() as u64, spec.s() as u64, None).chi_estimate {
        warn("outside q > d, 2(s+1) <= d: the chi estimate is not checked");
    }
    report.json = json!({ "family": family_json(&spec), "counts": rows });
    Ok(Outcome { report, violation })
}

pub fn scan(args: &ScanArgs, budget: Option<f64>) -> CmdResult {
    let spec = family(&args.family)?;
    let range = r_range(&spec, &args.r)?;
    let opts = ScanOptions {
        mode: match args.mode {
            ModeArg::Odometer => ScanMode::Odometer,
            ModeArg::Orbit => ScanMode::Orbit,
        },
        evaluator: match args.evaluator {
            EvaluatorArg::Symbolic => avset_core::varscan::Evaluator::Symbolic,
            EvaluatorArg::Remainder => avset_core::varscan::Evaluator::Remainder,
        },
        budget: budget_or(budget, DEFAULT_SCAN_BUDGET),
    };
    let q = spec.field().q() as u64;
    let chi = match chi_counts(&spec, *range.end(), Budget(DEFAULT_BUDGET)) {
        Ok(c) => Some(c),
        Err(Error::BudgetExceeded { .. }) => {
            warn("chi counts exceed the budget; cross-check skipped");
            None
        }
        Err(e) => return Err(e),
    };
    let mut report = Report::new(
        Value::Null,
        &[
            "r",
            "total",
            "distinct_coords",
            "rank_deficient",
            "equal_coords",
            "equal_coords_bound",
            "rank_deficiency_check",
            "chi_cross_check",
            "estimate_check",
        ],
    );
    let mut rows = Vec::new();
    let mut violations = Vec::new();
    for r in range {
        let pc = count_points(&spec, r, opts)?;
        let (singular_ok, reps) = match singular_scan(&spec, r, opts) {
            Ok(reps) => (true, reps),
            Err(Error::PropertyViolation(msg)) => {
                violations.push(msg);
                (false, Vec::new())
            }
            Err(e) => return Err(e),
        };
        let cross = chi
            .as_ref()
            .map(|c| factorial(r as u64) * c[&r] == pc.distinct_coords.into());
        let estimate = if validate_regime(q, spec.d() as u64, spec.s() as u64, Some(r as u64)).chi_estimate {
            Some(chi_estimate_check(&spec, r, Budget(DEFAULT_BUDGET))?.holds)
        } else {
            None
        };
        if cross == Some(false) {
            violations.push(format!("r={r}: distinct points != r! chi_r"));
        }
        if estimate == Some(false) {
            violations.push(format!("r={r}: chi estimate fails"));
        }
        report.row(vec![
            r.to_string(),
            pc.total.to_string(),
            pc.distinct_coords.to_string(),
            pc.rank_deficient.to_string(),
            pc.equal_coords.to_string(),
            pc.equal_coords_bound.clone(),
            singular_ok.to_string(),
            opt(cross),
            opt(estimate),
        ]);
        let mut row = json!({
            "r": r,
            "total": pc.total,
            "distinct_coords": pc.distinct_coords,
            "rank_deficient": pc.rank_deficient,
            "equal_coords": pc.equal_coords,
            "equal_coords_bound": pc.equal_coords_bound,
            "rank_deficiency_check": singular_ok,
            "chi_cross_check": cross,
            "estimate_check": estimate,
        });
        if args.singular {
            row["singular"] = json!(reps);
        }
        rows.push(row);
    }
    report.json = json!({ "family": family_json(&spec), "scans": rows });
    let violation = (!violations.is_empty()).then(|| violations.join("; "));
    Ok(Outcome { report, violation })
}

pub fn bounds_point(args: &BoundsPointArgs, budget: Option<f64>) -> CmdResult {
    let spec = family(&args.family)?;
    let (q, d, s) = (spec.field().q() as u64, spec.d() as u64, spec.s() as u64);
    let regime = validate_regime(q, d, s, None);
    if !regime.main {
        warn("outside q > d, 1 <= s <= d/2-1: the corollary and main bounds do not apply");
    }
    let mu_d = mu(d)?;
    let corollary = regime.main.then(|| corollary_bound(q, d, s)).transpose()?;
    let main = regime.main.then(|| main_bound(q, d)).transpose()?;
    let restricted = regime.restricted.then(|| restricted_bound(q, d)).transpose()?;
    let mut json = json!({
        "family": family_json(&spec),
        "regime": regime,
        "mu_d": RationalJson::from(&mu_d),
        "mu_d_q": RationalJson::from(&(mu_d.clone() * avset_core::rational::int(q))),
        "corollary_bound": corollary.as_ref().map(RationalJson::from),
        "main_bound": main.as_ref().map(|m| [avset_core::rational::to_f64(m.lo()), avset_core::rational::to_f64(m.hi())]),
        "restricted_bound": restricted.as_ref().map(|m| [avset_core::rational::to_f64(m.lo()), avset_core::rational::to_f64(m.hi())]),
    });
    let mut report = Report::new(Value::Null, &["quantity", "value"]);
    report.row(vec!["mu_d".into(), render(&mu_d)]);
    report.row(vec!["corollary_bound".into(), opt(corollary.as_ref().map(render))]);
    report.row(vec!["main_bound".into(), opt(main.as_ref().map(|m| avset_core::rational::to_f64(m.hi())))]);
    report.row(vec!["restricted_bound".into(), opt(restricted.as_ref().map(|m| avset_core::rational::to_f64(m.hi())))]);
    let mut violation = None;
    if args.check {
        let counts = chi_counts(&spec, spec.d(), budget_or(budget, DEFAULT_BUDGET))?;
        let avg = formula_from_chi(q, spec.d(), spec.s(), &counts);
        let check = check_bounds(q, d, s, &avg)?;
        let failed: Vec<&str> = [
            ("corollary", check.corollary_holds),
            ("main", check.main_holds),
            ("restricted", check.restricted_holds),
        ]
        .into_iter()
        .filter(|(_, h)| *h == Some(false))
        .map(|(n, _)| n)
        .collect();
        if !failed.is_empty() {
            violation = Some(format!("bounds fail: {}", failed.join(", ")));
        }
        report.row(vec!["average".into(), render(&avg)]);
        report.row(vec!["deviation_hi".into(), check.lhs[1].to_string()]);
        report.row(vec!["corollary_holds".into(), opt(check.corollary_holds)]);
        report.row(vec!["main_holds".into(), opt(check.main_holds)]);
        report.row(vec!["restricted_holds".into(), opt(check.restricted_holds)]);
        json["average"] = json!(RationalJson::from(&avg));
        json["check"] = json!(check);
    }
    report.json = json;
    Ok(Outcome { report, violation })
}

pub fn bounds_sweep(args: &BoundsSweepArgs) -> CmdResult {
    let mut report = Report::new(
        Value::Null,
        &[
            "d",
            "s",
            "f",
            "g",
            "k0",
            "h_argmax",
            "expected_argmax",
            "unimodal",
            "h_total",
            "c",
            "c_envelope",
            "h_le_c",
            "c_le_envelope",
        ],
    );
    let mut rows = Vec::new();
    let mut bad = Vec::new();
    for d in 4..=args.d_max.max(4) {
        let f = bounds::f_profile(d).midpoint_f64();
        let g = bounds::g_profile(d).midpoint_f64();
        for s in 1..=d / 2 - 1 {
            let aux = aux_profiles(d, s)?;
            if !(aux.h_le_c && aux.c_le_envelope && aux.unimodal && aux.h_argmax == aux.expected_argmax) {
                bad.push(format!("(d={d}, s={s})"));
            }
            report.row(vec![
                d.to_string(),
                s.to_string(),
                format!("{f:.6e}"),
                format!("{g:.6e}"),
                format!("{:.6}", aux.k0),
                aux.h_argmax.to_string(),
                aux.expected_argmax.to_string(),
                aux.unimodal.to_string(),
                aux.h_total.clone(),
                aux.c.clone(),
                format!("{:.6e}", aux.c_envelope),
                aux.h_le_c.to_string(),
                aux.c_le_envelope.to_string(),
            ]);
            rows.push(json!({ "f": f, "g": g, "profile": aux }));
        }
    }
    let argmax_f = bounds::certified_argmax(4, args.d_max.max(4), bounds::f_profile);
    let argmax_g = bounds::certified_argmax(4, args.d_max.max(4), bounds::g_profile);
    report.preamble.push(format!("argmax f = {}, argmax g = {}", opt(argmax_f), opt(argmax_g)));
    report.json = json!({ "d_max": args.d_max, "argmax_f": argmax_f, "argmax_g": argmax_g, "rows": rows });
    let violation = (!bad.is_empty()).then(|| format!("profile properties fail at {}", bad.join(" ")));
    Ok(Outcome { report, violation })
}

pub fn bounds_grid(args: &BoundsGridArgs, budget: Option<f64>) -> CmdResult {
    let budget = budget_or(budget, DEFAULT_BUDGET);
    let mut cases = Vec::new();
    for name in &args.fields {
        let field = FieldCtx::parse(name)?;
        let q = field.q();
        let d_top = args.d_max.map_or(q as usize - 1, |m| m.min(q as usize - 1));
        for d in 4..=d_top {
            for s in 1..=d / 2 - 1 {
                cases.push((FamilySpec::zero_a(&field, d, s)?, None));
                for &seed in &args.seeds {
                    cases.push((FamilySpec::new(&field, d, s, seeded_a(q, s, seed))?, Some(seed)));
                }
            }
        }
    }
    let results: Vec<Result<bounds::BoundReport, Error>> = cases
        .par_iter()
        .map(|(spec, _)| {
            let (q, d, s) = (spec.field().q() as u64, spec.d() as u64, spec.s() as u64);
            let chi = chi_counts(spec, spec.d(), budget)?;
            check_bounds(q, d, s, &formula_from_chi(q, spec.d(), spec.s(), &chi))
        })
        .collect();
    let mut report = Report::new(
        Value::Null,
        &[
            "q",
            "d",
            "s",
            "seed",
            "a",
            "lhs_lo",
            "lhs_hi",
            "rhs_corollary",
            "rhs_main",
            "rhs_restricted",
            "corollary_holds",
            "main_holds",
            "restricted_holds",
        ],
    );
    let mut rows = Vec::new();
    let mut refused = 0;
    let mut failed = 0;
    for ((spec, seed), res) in cases.iter().zip(results) {
        let rep = match res {
            Ok(rep) => rep,
            Err(Error::BudgetExceeded { .. }) => {
                refused += 1;
                continue;
            }
            Err(e) => return Err(e),
        };
        if [rep.corollary_holds, rep.main_holds, rep.restricted_holds].contains(&Some(false)) {
            failed += 1;
        }
        report.row(vec![
            rep.q.to_string(),
            rep.d.to_string(),
            rep.s.to_string(),
            opt(*seed),
            join(spec.a()),
            rep.lhs[0].to_string(),
            rep.lhs[1].to_string(),
            opt(rep.rhs_corollary),
            opt(rep.rhs_main),
            opt(rep.rhs_restricted),
            opt(rep.corollary_holds),
            opt(rep.main_holds),
            opt(rep.restricted_holds),
        ]);
        rows.push(json!({ "seed": seed, "a": spec.a(), "report": rep }));
    }
    if refused > 0 {
        warn(&format!("{refused} instances refused by the budget"));
    }
    report.json = json!({ "refused": refused, "rows": rows });
    let violation = (failed > 0).then(|| format!("{failed} instances violate a bound"));
    Ok(Outcome { report, violation })
}

pub fn verify(args: &VerifyArgs, budget: Option<f64>) -> CmdResult {
    let mut cfg = SuiteConfig::default();
    if let Some(f) = &args.fields {
        cfg.fields = f.clone();
    }
    if let Some(s) = &args.seeds {
        cfg.seeds = s.clone();
    }
    if let Some(n) = args.samples {
        cfg.symbolic_samples = n;
        cfg.det_samples = n;
    }
    if let Some(l) = args.scan_limit {
        cfg.scan_limit = l as u128;
    }
    if let Some(b) = budget {
        cfg.budget = Budget(b as u128);
    }
    let ids = args.criteria.clone().unwrap_or_else(|| (1..=10).collect());
    if let Some(bad) = ids.iter().find(|id| !(1..=10).contains(*id)) {
        return Err(Error::OutOfRange {
            what: "criterion",
            value: *bad as i64,
            range: "[1, 10]".into(),
        });
    }
    let suite = Suite::new(cfg)?;
    let mut report = Report::new(Value::Null, &["id", "title", "status", "detail", "elapsed_ms"]);
    let mut results = Vec::new();
    let mut failed = Vec::new();
    for id in ids {
        let res = suite.run(id);
        eprintln!("{}", res.line());
        if res.status == Status::Fail {
            failed.push(id.to_string());
        }
        report.row(vec![
            id.to_string(),
            res.title.to_string(),
            format!("{:?}", res.status),
            res.detail.clone(),
            res.elapsed_ms.to_string(),
        ]);
        results.push(res);
    }
    report.json = json!({ "instances": suite.instances.len(), "results": results });
    let violation = (!failed.is_empty()).then(|| format!("criteria failed: {}", failed.join(", ")));
    Ok(Outcome { report, violation })
}

pub fn htable(args: &HtableArgs) -> CmdResult {
    let mut report = Report::new(Value::Null, &["j", "i", "entry"]);
    let mut entries = BTreeMap::new();
    if args.system {
        let fam = FamilyArgs {
            field: args.field.clone().expect("required by clap"),
            d: args.d.expect("required by clap"),
            s: args.s.expect("required by clap"),
            a: args.a.clone(),
            seed: args.seed,
        };
        let spec = family(&fam)?;
        let sys = assemble_r(&spec, args.r)?;
        if !sys.symbolic_regime {
            warn("outside 2(s+1) <= d: R_j need not be monic in Pi_{d-j}");
        }
        for (j, p) in &sys.equations {
            report.row(vec![j.to_string(), String::new(), p.to_string()]);
            entries.insert(format!("R[{j}]"), p.to_string());
        }
        report.json = json!({ "family": family_json(&spec), "r": args.r, "system": entries, "text": sys.render() });
        report.preamble.push(format!("a = {}", join(spec.a())));
        return Ok(Outcome::ok(report));
    }
    let d = args.d.ok_or_else(|| Error::InvalidFamily("htable needs --d".into()))?;
    let table = build_h_integer(args.r, d)?;
    let rendered: Vec<(usize, usize, String)> = match &args.field {
        Some(f) => {
            let field = FieldCtx::parse(f)?;
            table.reduce(&field).entries().map(|(i, j, h)| (i, j, h.to_string())).collect()
        }
        None => table.entries().map(|(i, j, h)| (i, j, h.to_string())).collect(),
    };
    for (i, j, h) in &rendered {
        report.row(vec![j.to_string(), i.to_string(), h.clone()]);
        entries.insert(format!("H[{i}][{j}]"), h.clone());
    }
    report.json = json!({ "r": args.r, "d": d, "field": args.field, "entries": entries });
    Ok(Outcome::ok(report))
}
