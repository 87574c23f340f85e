use std::fs;
use std::path::PathBuf;
use std::time::Instant;

use num_rational::BigRational;
use serde_json::{json, Value};

use qratio_core::identities::{self, borwein_sum, r_poly};
use qratio_core::{
    canonicalize, classical_ratio, d_polynomial, enumerate_tuples, landau_check, par, Canonical, EnumerateOptions,
    IntPoly, QError, TupleSpec,
};

use crate::output::{content_name, exit_for, persist, Exit, Output, PolySummary, Record, Status};

pub const DEFAULT_MAX_SUM_BOUND: u32 = 64;
pub const MAX_IDENTITIES_N: u32 = 24;

/// Flags shared by every subcommand.
#[derive(Clone, Debug, Default)]
pub struct Settings {
    pub full: bool,
    pub raw: bool,
    pub timing: bool,
    pub out: Option<PathBuf>,
}

#[derive(Debug)]
pub struct UsageError(pub String);

impl From<QError> for UsageError {
    fn from(e: QError) -> Self {
        UsageError(e.to_string())
    }
}

type CmdResult = Result<Output, UsageError>;

struct Clock {
    start: Instant,
    on: bool,
}

impl Clock {
    fn start(on: bool) -> Self {
        Clock {
            start: Instant::now(),
            on,
        }
    }

    fn ms(&self) -> Option<u64> {
        self.on.then(|| self.start.elapsed().as_millis() as u64)
    }
}

fn tuple_json(t: &TupleSpec) -> Value {
    json!({ "a": t.a(), "b": t.b() })
}

fn prepare(t: &TupleSpec, settings: &Settings) -> TupleSpec {
    if settings.raw {
        return t.clone();
    }
    match canonicalize(t) {
        Ok(c) => c.tuple,
        Err(_) => Canonical::trivial().tuple,
    }
}

fn join(v: &[u32]) -> String {
    v.iter().map(u32::to_string).collect::<Vec<_>>().join(",")
}

fn finish(mut out: Output, settings: &Settings, prefix: &str, input: &Value) -> CmdResult {
    if out.exit == Exit::Success {
        out.exit = exit_for(&out.records);
    }
    if let Some(dir) = &settings.out {
        persist(dir, prefix, input, &out.records).map_err(|e| UsageError(format!("cannot write to {}: {e}", dir.display())))?;
    }
    Ok(out)
}

pub fn cmd_landau(t: &TupleSpec, settings: &Settings) -> CmdResult {
    let clock = Clock::start(settings.timing);
    let work = prepare(t, settings);
    let verdict = landau_check(&work);
    let witness = verdict.witness.map(|w| format!("{}/{}", w.numer(), w.denom()));
    let input = tuple_json(t);
    let mut out = Output::new(vec!["a", "b", "holds", "witness", "min_value"]);
    out.csv_rows.push(vec![
        join(work.a()),
        join(work.b()),
        verdict.holds.to_string(),
        witness.clone().unwrap_or_default(),
        verdict.min_value.to_string(),
    ]);
    out.records.push(Record {
        command: "landau",
        input: input.clone(),
        status: Status::Ok,
        payload: json!({
            "canonical": tuple_json(&work),
            "holds": verdict.holds,
            "witness": witness,
            "min_value": verdict.min_value,
            "sum_a": work.sum_a(),
            "sum_b": work.sum_b(),
        }),
        elapsed_ms: clock.ms(),
    });
    finish(out, settings, "landau", &input)
}

fn sweep_header() -> Vec<&'static str> {
    vec!["n", "degree", "num_terms", "min_coeff", "is_positive"]
}

/// `D_n` for one `n` with its report and the `q = 1` cross-check.
fn dpoly_record(
    command: &'static str,
    t: &TupleSpec,
    n: u32,
    result: Result<IntPoly, QError>,
    include_coeffs: bool,
    clock: &Clock,
) -> (Record, Option<PolySummary>) {
    let input = json!({ "a": t.a(), "b": t.b(), "n": n });
    match result {
        Ok(p) => {
            let summary = PolySummary::of(&p);
            let classical = t.scaled(n).map(|s| classical_ratio(&s));
            let value = p.eval_at_one();
            let agrees = classical.as_ref().is_ok_and(|c| *c == BigRational::from_integer(value.clone()));
            let mut payload = summary.to_json(include_coeffs.then_some(&p));
            payload["value_at_one"] = json!(value.to_string());
            payload["classical_ratio"] = json!(classical.map(|c| c.to_string()).unwrap_or_default());
            let status = if !agrees {
                Status::IdentityViolation
            } else {
                summary.status()
            };
            (
                Record {
                    command,
                    input,
                    status,
                    payload,
                    elapsed_ms: clock.ms(),
                },
                Some(summary),
            )
        }
        Err(e) => (
            Record {
                command,
                input,
                status: Status::NotPolynomial,
                payload: json!({ "error": e.to_string() }),
                elapsed_ms: clock.ms(),
            },
            None,
        ),
    }
}

pub fn cmd_dpoly(t: &TupleSpec, n: u32, settings: &Settings) -> CmdResult {
    if n == 0 {
        return Err(UsageError("--n must be positive".into()));
    }
    let clock = Clock::start(settings.timing);
    let work = prepare(t, settings);
    let result = work.scaled(n).and_then(|s| d_polynomial(&s));
    let (mut record, summary) = dpoly_record("dpoly", &work, n, result, true, &clock);
    let input = json!({ "a": t.a(), "b": t.b(), "n": n });
    record.input = input.clone();
    record.payload["canonical"] = tuple_json(&work);
    let mut out = Output::new(sweep_header());
    if let Some(s) = summary {
        out.csv_rows.push(s.csv_row(n.to_string()));
    }
    out.records.push(record);
    finish(out, settings, "dpoly", &input)
}

pub fn cmd_sweep(t: &TupleSpec, n_max: u32, settings: &Settings) -> CmdResult {
    if n_max == 0 {
        return Err(UsageError("--n-max must be positive".into()));
    }
    let clock = Clock::start(settings.timing);
    let work = prepare(t, settings);
    let input = json!({ "a": t.a(), "b": t.b(), "n_max": n_max });
    let mut out = Output::new(sweep_header());
    let verdict = landau_check(&work);
    if !verdict.holds {
        out.records.push(Record {
            command: "sweep",
            input: input.clone(),
            status: Status::NotPolynomial,
            payload: json!({
                "canonical": tuple_json(&work),
                "error": "tuple fails Landau's criterion",
                "witness": verdict.witness.map(|w| format!("{}/{}", w.numer(), w.denom())),
                "min_value": verdict.min_value,
            }),
            elapsed_ms: clock.ms(),
        });
        out.exit = Exit::Usage;
        return finish(out, settings, "sweep", &input);
    }
    let results = qratio_core::d_n_sweep(&work, n_max);
    let mut negative_ns = Vec::new();
    for (i, res) in results.into_iter().enumerate() {
        let n = i as u32 + 1;
        let (record, summary) = dpoly_record("sweep", &work, n, res, settings.full, &clock);
        if let Some(s) = summary {
            out.csv_rows.push(s.csv_row(n.to_string()));
        }
        if record.status == Status::NegativeFound {
            negative_ns.push(n);
        }
        out.records.push(record);
    }
    let status = out.records.iter().map(|r| r.status).max().unwrap_or(Status::Ok);
    out.records.push(Record {
        command: "sweep",
        input: input.clone(),
        status,
        payload: json!({
            "canonical": tuple_json(&work),
            "summary": true,
            "polynomials": n_max,
            "negative_n": negative_ns,
        }),
        elapsed_ms: clock.ms(),
    });
    finish(out, settings, "sweep", &input)
}

pub struct EnumerateArgs {
    pub r: usize,
    pub s: usize,
    pub sum_bound: u32,
    pub balanced: bool,
    pub imprimitive: bool,
    pub sweep_n: Option<u32>,
    pub max_sum_bound: u32,
}

/// Sweep record for one enumerated tuple, reusing a persisted one when
/// present in the output directory.
fn enumerate_sweep(t: &TupleSpec, n_max: u32, settings: &Settings) -> Record {
    let clock = Clock::start(settings.timing);
    let input = json!({ "a": t.a(), "b": t.b(), "sweep_n": n_max });
    if let Some(dir) = &settings.out {
        let cached = dir.join(content_name("enumerate-tuple", &input));
        if let Some(record) = fs::read_to_string(&cached).ok().and_then(|s| parse_cached(&s)) {
            return record;
        }
    }
    let mut negative_ns = Vec::new();
    let mut failed_ns = Vec::new();
    let mut min_coeff: Option<String> = None;
    let mut worst = Status::Ok;
    for (i, res) in qratio_core::d_n_sweep(t, n_max).into_iter().enumerate() {
        let n = i as u32 + 1;
        let (rec, summary) = dpoly_record("enumerate", t, n, res, false, &clock);
        worst = worst.max(rec.status);
        match rec.status {
            Status::NegativeFound => negative_ns.push(n),
            Status::NotPolynomial | Status::IdentityViolation => failed_ns.push(n),
            Status::Ok => {}
        }
        if let Some(s) = summary {
            if n == 1 {
                min_coeff = Some(s.min_coeff);
            }
        }
    }
    let record = Record {
        command: "enumerate",
        input: input.clone(),
        status: worst,
        payload: json!({
            "polynomials": n_max as usize - failed_ns.len(),
            "negative_n": negative_ns,
            "failed_n": failed_ns,
            "min_coeff_n1": min_coeff,
        }),
        elapsed_ms: clock.ms(),
    };
    if let Some(dir) = &settings.out {
        let _ = persist(dir, "enumerate-tuple", &input, std::slice::from_ref(&record));
    }
    record
}

fn parse_cached(s: &str) -> Option<Record> {
    let v: Value = serde_json::from_str(s.lines().next()?).ok()?;
    let status = match v.get("status")?.as_str()? {
        "ok" => Status::Ok,
        "not-polynomial" => Status::NotPolynomial,
        "negative-found" => Status::NegativeFound,
        "identity-violation" => Status::IdentityViolation,
        _ => return None,
    };
    Some(Record {
        command: "enumerate",
        input: v.get("input")?.clone(),
        status,
        payload: v.get("payload")?.clone(),
        elapsed_ms: v.get("elapsed_ms").and_then(Value::as_u64),
    })
}

pub fn cmd_enumerate(args: &EnumerateArgs, settings: &Settings) -> CmdResult {
    if args.r == 0 || args.s == 0 {
        return Err(UsageError("--r and --s must be positive".into()));
    }
    if args.sum_bound < 2 || args.sum_bound > args.max_sum_bound {
        return Err(UsageError(format!(
            "--sum-bound must lie in 2..={} (raise --max-sum-bound to allow more)",
            args.max_sum_bound
        )));
    }
    let clock = Clock::start(settings.timing);
    let input = json!({
        "r": args.r,
        "s": args.s,
        "sum_bound": args.sum_bound,
        "balanced": args.balanced,
        "primitive_only": !args.imprimitive,
        "sweep_n": args.sweep_n,
    });
    let mut opts = EnumerateOptions::new(args.r, args.s, args.sum_bound, args.balanced);
    opts.primitive_only = !args.imprimitive;
    let tuples = enumerate_tuples(&opts);

    let mut out = Output::new(vec!["a", "b", "sweep_n", "is_positive", "negative_n"]);
    let records: Vec<Record> = match args.sweep_n {
        Some(n_max) => par::map(tuples.clone(), |t| enumerate_sweep(&t, n_max, settings)),
        None => tuples
            .iter()
            .map(|t| Record {
                command: "enumerate",
                input: tuple_json(t),
                status: Status::Ok,
                payload: json!({ "sum_a": t.sum_a(), "sum_b": t.sum_b() }),
                elapsed_ms: None,
            })
            .collect(),
    };
    for (t, r) in tuples.iter().zip(&records) {
        let negative = r.payload.get("negative_n").map(Value::to_string).unwrap_or_default();
        out.csv_rows.push(vec![
            join(t.a()),
            join(t.b()),
            args.sweep_n.map(|n| n.to_string()).unwrap_or_default(),
            (r.status != Status::NegativeFound).to_string(),
            negative,
        ]);
    }
    let worst = records.iter().map(|r| r.status).max().unwrap_or(Status::Ok);
    let negatives = records.iter().filter(|r| r.status == Status::NegativeFound).count();
    out.records = records;
    out.records.push(Record {
        command: "enumerate",
        input: input.clone(),
        status: worst,
        payload: json!({ "summary": true, "tuples": tuples.len(), "tuples_with_negative": negatives }),
        elapsed_ms: clock.ms(),
    });
    finish(out, settings, "enumerate", &input)
}

pub fn cmd_identities(max_n: u32, settings: &Settings) -> CmdResult {
    if max_n > MAX_IDENTITIES_N {
        return Err(UsageError(format!("--max-n must be at most {MAX_IDENTITIES_N}")));
    }
    let clock = Clock::start(settings.timing);
    let input = json!({ "max_n": max_n });
    let mut out = Output::new(vec!["identity", "cases", "failures", "passed"]);
    for o in identities::run_all(max_n) {
        out.csv_rows.push(vec![
            o.name.to_string(),
            o.cases.to_string(),
            o.failures.len().to_string(),
            o.passed().to_string(),
        ]);
        out.records.push(Record {
            command: "identities",
            input: json!({ "max_n": max_n, "identity": o.name }),
            status: if o.passed() { Status::Ok } else { Status::IdentityViolation },
            payload: json!({ "cases": o.cases, "failures": o.failures }),
            elapsed_ms: clock.ms(),
        });
    }
    let worst = out.records.iter().map(|r| r.status).max().unwrap_or(Status::Ok);
    out.records.push(Record {
        command: "identities",
        input: input.clone(),
        status: worst,
        payload: json!({ "summary": true, "identities": out.csv_rows.len() }),
        elapsed_ms: clock.ms(),
    });
    finish(out, settings, "identities", &input)
}

pub fn cmd_borwein(n_max: u32, settings: &Settings) -> CmdResult {
    let clock = Clock::start(settings.timing);
    let input = json!({ "n_max": n_max });
    let mut out = Output::new(sweep_header());
    let polys = par::map((0..=n_max).collect(), borwein_sum);
    for (n, p) in polys.iter().enumerate() {
        let summary = PolySummary::of(p);
        out.csv_rows.push(summary.csv_row(n.to_string()));
        out.records.push(Record {
            command: "borwein",
            input: json!({ "n": n }),
            status: summary.status(),
            payload: summary.to_json(settings.full.then_some(p)),
            elapsed_ms: clock.ms(),
        });
    }
    let worst = out.records.iter().map(|r| r.status).max().unwrap_or(Status::Ok);
    out.records.push(Record {
        command: "borwein",
        input: input.clone(),
        status: worst,
        payload: json!({ "summary": true, "polynomials": polys.len() }),
        elapsed_ms: clock.ms(),
    });
    finish(out, settings, "borwein", &input)
}

pub fn cmd_rpoly(n: u32, m: u32, r: u32, s: u32, settings: &Settings) -> CmdResult {
    if r == 0 || s == 0 {
        return Err(UsageError("--r and --s must be positive".into()));
    }
    let clock = Clock::start(settings.timing);
    let input = json!({ "n": n, "m": m, "r": r, "s": s });
    let mut out = Output::new(sweep_header());
    let record = match r_poly(n, m, r, s) {
        Ok(p) => {
            let summary = PolySummary::of(&p);
            out.csv_rows.push(summary.csv_row(n.to_string()));
            Record {
                command: "rpoly",
                input: input.clone(),
                status: summary.status(),
                payload: summary.to_json(Some(&p)),
                elapsed_ms: clock.ms(),
            }
        }
        Err(e) => Record {
            command: "rpoly",
            input: input.clone(),
            status: Status::IdentityViolation,
            payload: json!({ "error": e.to_string() }),
            elapsed_ms: clock.ms(),
        },
    };
    out.records.push(record);
    finish(out, settings, "rpoly", &input)
}
