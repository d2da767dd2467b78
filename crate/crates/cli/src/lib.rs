//! Batch verification suites over the frobkp library.

use std::path::PathBuf;
use std::time::Instant;

use frobkp_core::hierarchy::{bkp_biham_check, recursion_check, BkpTime, LoopPoint};
use frobkp_core::io::read_point;
use frobkp_core::manifold::diag::admissibility;
use frobkp_core::manifold::{
    c_closed, c_direct, coordinate_covector, coordinate_vector, eta_inverse, eta_map, metric, pair,
    tan_product, FlatChart, Label, Mode, Point,
};
use frobkp_core::potential::{
    build_f, check_quasi_homogeneity, fourth_derivative_symmetry, known_potential, wdvv_check,
    Superpotential,
};
use frobkp_core::sample::{gen_loop_point, gen_point};
use frobkp_core::submanifold::{canonical_check, canonical_exact, LPoint};
use frobkp_core::{q, qi, Error, Series, Q};
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

pub const SUITES: [&str; 7] = [
    "gram",
    "frobenius",
    "potential",
    "wdvv",
    "recursion",
    "appendix",
    "canonical",
];

#[derive(Clone, Debug)]
pub struct SuiteConfig {
    pub suite: String,
    pub m: u32,
    pub n: u32,
    pub depth: i64,
    pub t_range: i64,
    pub seed: u64,
    pub samples: u32,
    pub point: Option<PathBuf>,
    pub tol: f64,
    pub out: Option<PathBuf>,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            suite: "all".into(),
            m: 1,
            n: 1,
            depth: 16,
            t_range: 4,
            seed: 7,
            samples: 1,
            point: None,
            tol: 1e-9,
            out: None,
        }
    }
}

#[derive(Debug)]
pub enum RunError {
    Config(String),
    Point(Error),
}

impl std::fmt::Display for RunError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RunError::Config(s) => write!(f, "config error: {s}"),
            RunError::Point(e) => write!(f, "point error: {e}"),
        }
    }
}

impl std::error::Error for RunError {}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skip,
}

#[derive(Clone, Debug, Serialize)]
pub struct Record {
    pub check: String,
    pub params: Value,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
    pub elapsed: f64,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct Report {
    pub records: Vec<Record>,
}

impl Report {
    pub fn count(&self, s: Status) -> usize {
        self.records.iter().filter(|r| r.status == s).count()
    }

    pub fn exit_code(&self) -> i32 {
        if self.count(Status::Fail) > 0 {
            1
        } else {
            0
        }
    }

    pub fn to_jsonl(&self) -> String {
        self.records
            .iter()
            .map(|r| serde_json::to_string(r).expect("record serializes") + "\n")
            .collect()
    }
}

type Outcome = Result<(Status, Option<Value>), Error>;

fn verdict(pass: bool) -> Status {
    if pass {
        Status::Pass
    } else {
        Status::Fail
    }
}

/// A pending record: name, parameters and the computation behind it.
struct Job {
    check: &'static str,
    params: Value,
    run: Box<dyn Fn() -> Outcome + Send + Sync>,
}

fn job(
    check: &'static str,
    params: Value,
    run: impl Fn() -> Outcome + Send + Sync + 'static,
) -> Job {
    Job {
        check,
        params,
        run: Box::new(run),
    }
}

fn execute(j: &Job) -> Record {
    let start = Instant::now();
    let (status, witness) = match (j.run)() {
        Ok(r) => r,
        Err(e @ Error::UntrustedRegion { .. }) => (Status::Skip, Some(json!(e.to_string()))),
        Err(e) => (Status::Fail, Some(json!(e.to_string()))),
    };
    Record {
        check: j.check.to_string(),
        params: j.params.clone(),
        status,
        witness,
        elapsed: start.elapsed().as_secs_f64(),
    }
}

fn validate(cfg: &SuiteConfig) -> Result<(), RunError> {
    if cfg.m == 0 || cfg.n == 0 {
        return Err(RunError::Config("m and n must be at least 1".into()));
    }
    if cfg.depth < 1 {
        return Err(RunError::Config("depth must be positive".into()));
    }
    if cfg.tol.is_nan() || cfg.tol <= 0.0 {
        return Err(RunError::Config("tolerance must be positive".into()));
    }
    if cfg.t_range < 0 {
        return Err(RunError::Config("t-range must be non-negative".into()));
    }
    if cfg.samples == 0 {
        return Err(RunError::Config("samples must be at least 1".into()));
    }
    if cfg.suite != "all" && !SUITES.contains(&cfg.suite.as_str()) {
        return Err(RunError::Config(format!("unknown suite {:?}", cfg.suite)));
    }
    Ok(())
}

/// Test points: the point file if one is given, otherwise `samples`
/// seeded polynomial-mode points.
fn points(cfg: &SuiteConfig) -> Result<Vec<(Value, Point<Q>)>, RunError> {
    if let Some(path) = &cfg.point {
        let pt = read_point(path).map_err(RunError::Point)?;
        if (pt.m(), pt.n()) != (cfg.m, cfg.n) {
            return Err(RunError::Config(format!(
                "point file has (m, n) = ({}, {})",
                pt.m(),
                pt.n()
            )));
        }
        let name = json!(path.display().to_string());
        return Ok(vec![(name, pt.with_depth(cfg.depth))]);
    }
    (0..cfg.samples as u64)
        .map(|k| {
            let seed = cfg.seed.wrapping_add(k);
            gen_point(cfg.m, cfg.n, seed, Mode::Polynomial)
                .map(|p| (json!(seed), p.with_depth(cfg.depth)))
                .map_err(RunError::Point)
        })
        .collect()
}

fn gram(u: Label, v: Label, m: u32, n: u32) -> Q {
    match (u, v) {
        (Label::T(i), Label::T(k)) if i + k == 0 => q(-1, 2),
        (Label::H(a), Label::H(b)) if a + b == m + 1 => q(1, 2 * m as i64),
        (Label::HHat(a), Label::HHat(b)) if a + b == n + 1 => q(1, 2 * n as i64),
        _ => qi(0),
    }
}

fn mismatch(what: String, got: &Q, want: &Q) -> Option<Value> {
    Some(json!({"entry": what, "got": got.to_string(), "want": want.to_string()}))
}

fn gram_jobs(cfg: &SuiteConfig, pts: &[(Value, Point<Q>)]) -> Vec<Job> {
    let mut jobs = Vec::new();
    for (name, pt) in pts {
        let (m, n, tr) = (cfg.m, cfg.n, cfg.t_range);
        let p = pt.clone();
        jobs.push(job(
            "gram",
            json!({"m": m, "n": n, "point": name}),
            move || {
                let labels = Label::all(m, n, tr);
                let xs = labels
                    .iter()
                    .map(|&u| coordinate_vector(&p, u))
                    .collect::<Result<Vec<_>, _>>()?;
                for (a, &u) in labels.iter().enumerate() {
                    for (b, &v) in labels.iter().enumerate().skip(a) {
                        let g = metric(&p, &xs[a], &xs[b])?;
                        let want = gram(u, v, m, n);
                        if g != want {
                            return Ok((Status::Fail, mismatch(format!("<{u},{v}>"), &g, &want)));
                        }
                    }
                }
                Ok((Status::Pass, None))
            },
        ));
        let p = pt.clone();
        jobs.push(job(
            "duality",
            json!({"m": m, "n": n, "point": name}),
            move || {
                let labels = Label::all(m, n, tr);
                for &u in &labels {
                    let du = coordinate_covector(&p, u)?;
                    for &v in &labels {
                        let d = pair(&du, &coordinate_vector(&p, v)?)?;
                        let want = if u == v { qi(1) } else { qi(0) };
                        if d != want {
                            return Ok((Status::Fail, mismatch(format!("d{u}({v})"), &d, &want)));
                        }
                    }
                }
                Ok((Status::Pass, None))
            },
        ));
        let p = pt.clone();
        jobs.push(job(
            "admissible",
            json!({"m": m, "n": n, "point": name}),
            move || {
                if p.mode() != Mode::Polynomial {
                    return Ok((
                        Status::Skip,
                        Some(json!("admissibility needs a polynomial-mode point")),
                    ));
                }
                let a = admissibility(&p)?;
                Ok((verdict(a.ok), (!a.ok).then(|| json!(a))))
            },
        ));
    }
    jobs
}

fn frobenius_jobs(cfg: &SuiteConfig, pts: &[(Value, Point<Q>)]) -> Vec<Job> {
    let mut jobs = Vec::new();
    let (m, n) = (cfg.m, cfg.n);
    let tr = cfg.t_range.min(2);
    for (name, pt) in pts {
        let params = json!({"m": m, "n": n, "point": name, "t_range": tr});
        let p = pt.clone();
        jobs.push(job("frobenius_algebra", params.clone(), move || {
            let labels = Label::all(m, n, tr);
            let xs = labels
                .iter()
                .map(|&u| coordinate_vector(&p, u))
                .collect::<Result<Vec<_>, _>>()?;
            let e = coordinate_vector(&p, Label::H(m))?;
            for (a, x1) in xs.iter().enumerate() {
                if !tan_product(&p, &e, x1)?.agrees_with(x1) {
                    return Ok((
                        Status::Fail,
                        Some(json!(format!("e·∂{} ≠ ∂{}", labels[a], labels[a]))),
                    ));
                }
                for (b, x2) in xs.iter().enumerate().skip(a) {
                    let p12 = tan_product(&p, x1, x2)?;
                    if !p12.agrees_with(&tan_product(&p, x2, x1)?) {
                        return Ok((
                            Status::Fail,
                            Some(json!(format!(
                                "commutativity at ({},{})",
                                labels[a], labels[b]
                            ))),
                        ));
                    }
                    for (c, x3) in xs.iter().enumerate() {
                        let l = tan_product(&p, &p12, x3)?;
                        let r = tan_product(&p, x1, &tan_product(&p, x2, x3)?)?;
                        if !l.agrees_with(&r) {
                            return Ok((
                                Status::Fail,
                                Some(json!(format!(
                                    "associativity at ({},{},{})",
                                    labels[a], labels[b], labels[c]
                                ))),
                            ));
                        }
                        let g1 = metric(&p, &p12, x3)?;
                        let g2 = metric(&p, &tan_product(&p, x1, x3)?, x2)?;
                        if g1 != g2 {
                            return Ok((
                                Status::Fail,
                                mismatch(
                                    format!(
                                        "invariance at ({},{},{})",
                                        labels[a], labels[b], labels[c]
                                    ),
                                    &g1,
                                    &g2,
                                ),
                            ));
                        }
                    }
                }
            }
            Ok((Status::Pass, None))
        }));
        let p = pt.clone();
        jobs.push(job("c_tensor", params.clone(), move || {
            let labels = Label::all(m, n, tr);
            for (a, &u) in labels.iter().enumerate() {
                for (b, &v) in labels.iter().enumerate().skip(a) {
                    for &s in &labels[b..] {
                        let d = c_direct(&p, u, v, s)?;
                        let c = c_closed(&p, u, v, s)?;
                        if d != c {
                            return Ok((Status::Fail, mismatch(format!("c({u},{v},{s})"), &c, &d)));
                        }
                    }
                }
            }
            Ok((Status::Pass, None))
        }));
        let p = pt.clone();
        jobs.push(job("eta_round_trip", params.clone(), move || {
            for u in Label::all(m, n, tr) {
                let x = coordinate_vector(&p, u)?;
                if !eta_map(&p, &eta_inverse(&p, &x)?)?.agrees_with(&x) {
                    return Ok((Status::Fail, Some(json!(format!("η η⁻¹ ∂{u} ≠ ∂{u}")))));
                }
                let om = coordinate_covector(&p, u)?;
                if !eta_inverse(&p, &eta_map(&p, &om)?)?.agrees_with(&om) {
                    return Ok((Status::Fail, Some(json!(format!("η⁻¹ η d{u} ≠ d{u}")))));
                }
            }
            Ok((Status::Pass, None))
        }));
        let (p, depth, trange) = (pt.clone(), cfg.depth, cfg.t_range);
        jobs.push(job("chart_round_trip", params, move || {
            // A chart with |i| ≤ R fixes w down to z^{−2R−1}.
            let full = FlatChart::of_point(&p, depth)?.reconstruct(depth)?;
            let w = p.w().truncate_below(-2 * depth - 1);
            if !full.w().agrees_with(&w) || !full.l().agrees_with(p.l()) {
                return Ok((Status::Fail, Some(json!("reconstructed point differs"))));
            }
            let chart = FlatChart::of_point(&p, trange)?;
            let back = chart.reconstruct(depth)?;
            let again = FlatChart::of_point(&back, trange)?;
            for u in Label::all(m, n, trange) {
                let (a, b) = (chart.get(u), again.get(u));
                if a != b {
                    return Ok((
                        Status::Fail,
                        Some(json!({"coordinate": u.to_string(),
                        "before": a.map(|v| v.to_string()), "after": b.map(|v| v.to_string())})),
                    ));
                }
            }
            Ok((Status::Pass, None))
        }));
    }
    jobs
}

fn potential_jobs(cfg: &SuiteConfig) -> Vec<Job> {
    let (m, n) = (cfg.m, cfg.n);
    vec![job("potential", json!({"m": m, "n": n}), move || {
        let f = build_f(m, n)?;
        let text = format!("{f:?}");
        match known_potential(m, n) {
            Some(k) if k == f => Ok((Status::Pass, Some(json!({"F": text})))),
            Some(k) => Ok((
                Status::Fail,
                Some(json!({"F": text, "expected": format!("{k:?}")})),
            )),
            None => Ok((Status::Pass, Some(json!({"F": text, "reference": "none"})))),
        }
    })]
}

fn wdvv_jobs(cfg: &SuiteConfig) -> Vec<Job> {
    let (m, n) = (cfg.m, cfg.n);
    let params = json!({"m": m, "n": n});
    vec![
        job("wdvv", params.clone(), move || {
            let r = wdvv_check(&build_f(m, n)?, m, n);
            Ok((verdict(r.pass), r.witness.map(Value::from)))
        }),
        job("quasi_homogeneity", params, move || {
            let r = check_quasi_homogeneity(&build_f(m, n)?, m, n);
            Ok((verdict(r.pass), r.witness.map(Value::from)))
        }),
    ]
}

fn appendix_jobs(cfg: &SuiteConfig) -> Vec<Job> {
    let (m, n) = (cfg.m, cfg.n);
    let d = (m + n) as usize;
    let shared = std::sync::Arc::new(std::sync::OnceLock::new());
    let mut jobs = Vec::new();
    for s in 1..=d {
        let cache = shared.clone();
        jobs.push(job(
            "appendix",
            json!({"m": m, "n": n, "s": s}),
            move || {
                let pair = cache
                    .get_or_init(|| Ok::<_, Error>((Superpotential::new(m, n)?, build_f(m, n)?)));
                let (sp, f) = pair.as_ref().map_err(|e| e.clone())?;
                for u in s..=d {
                    for v in u..=d {
                        for w in v..=d {
                            let r = fourth_derivative_symmetry(sp, [s, u, v, w], Some(f))?;
                            if !r.pass {
                                return Ok((
                                    Status::Fail,
                                    Some(json!({"index": [s, u, v, w], "witness": r.witness})),
                                ));
                            }
                        }
                    }
                }
                Ok((Status::Pass, None))
            },
        ));
    }
    jobs
}

fn loop_labels(m: u32, n: u32, t_range: i64) -> Vec<Label> {
    Label::all(m, n, t_range.min(2))
}

fn recursion_jobs(cfg: &SuiteConfig) -> Result<Vec<Job>, RunError> {
    let (m, n) = (cfg.m, cfg.n);
    let lp: LoopPoint = gen_loop_point(m, n, cfg.seed, 2)
        .map_err(RunError::Point)?
        .with_depth(cfg.depth.min(8));
    let lp = std::sync::Arc::new(lp);
    let mut jobs = Vec::new();
    for u in loop_labels(m, n, cfg.t_range) {
        for p in 1..=2u32 {
            let pt = lp.clone();
            let params = json!({"m": m, "n": n, "seed": cfg.seed, "label": u.to_string(), "p": p});
            jobs.push(job("recursion", params, move || {
                let r = recursion_check(&pt, u, p)?;
                Ok((verdict(r.pass), r.witness.map(Value::from)))
            }));
        }
    }
    for k in [1u32, 3, 5] {
        for t in [BkpTime::S(k), BkpTime::SHat(k)] {
            let pt = lp.clone();
            let params = json!({"m": m, "n": n, "seed": cfg.seed, "time": format!("{t:?}")});
            jobs.push(job("bkp_recursion", params, move || {
                let r = bkp_biham_check(&pt, t)?;
                Ok((verdict(r.pass), r.witness.map(Value::from)))
            }));
        }
    }
    Ok(jobs)
}

fn float(x: &Q) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

fn canonical_jobs(cfg: &SuiteConfig) -> Result<Vec<Job>, RunError> {
    let (m, n, tol) = (cfg.m, cfg.n, cfg.tol);
    let d = (m + n) as usize;
    let mut sets: Vec<(Value, Vec<f64>)> = Vec::new();
    if let Some(path) = &cfg.point {
        let pt = read_point(path).map_err(RunError::Point)?;
        let lp = LPoint::new(m, n, pt.l().clone(), pt.rho().clone()).map_err(RunError::Point)?;
        let w = lp.flat().map_err(RunError::Point)?;
        sets.push((
            json!(path.display().to_string()),
            w.iter().map(float).collect(),
        ));
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        for k in 0..cfg.samples {
            let mut w: Vec<f64> = (0..d).map(|_| rng.gen_range(-1.0..1.0)).collect();
            w[d - 1] = rng.gen_range(0.5..1.5);
            sets.push((json!(k), w));
        }
    }
    let sp = std::sync::Arc::new(std::sync::OnceLock::new());
    let mut jobs: Vec<Job> = sets
        .into_iter()
        .map(|(name, w)| {
            let sp = sp.clone();
            let params = json!({"m": m, "n": n, "sample": name, "w": w.clone(), "tol": tol});
            job("canonical", params, move || {
                let sp = sp
                    .get_or_init(|| Superpotential::new(m, n))
                    .as_ref()
                    .map_err(|e| e.clone())?;
                let r = canonical_check(sp, &w, tol)?;
                let u: Vec<[f64; 2]> = r.critical.iter().map(|c| c.u).collect();
                Ok((verdict(r.pass), Some(json!({"u": u, "report": r}))))
            })
        })
        .collect();
    if (m, n) == (1, 1) {
        jobs.push(job(
            "canonical_exact",
            json!({"m": 1, "n": 1, "l": "z^2 + z^-2"}),
            || {
                let l = Series::from_terms([(2, qi(1)), (-2, qi(1))]);
                let lp = LPoint::new(1, 1, l, qi(1))?;
                let c = canonical_exact(&lp)?;
                let ok = c.as_ref().is_some_and(|c| {
                    let mut u = c.u.clone();
                    u.sort();
                    u == ["-2", "2"] && c.eta.iter().all(|e| e == "1/4")
                });
                Ok((verdict(ok), Some(json!(c))))
            },
        ));
    }
    Ok(jobs)
}

fn jobs_for(
    cfg: &SuiteConfig,
    suite: &str,
    pts: &[(Value, Point<Q>)],
) -> Result<Vec<Job>, RunError> {
    Ok(match suite {
        "gram" => gram_jobs(cfg, pts),
        "frobenius" => frobenius_jobs(cfg, pts),
        "potential" => potential_jobs(cfg),
        "wdvv" => wdvv_jobs(cfg),
        "recursion" => recursion_jobs(cfg)?,
        "appendix" => appendix_jobs(cfg),
        "canonical" => canonical_jobs(cfg)?,
        s => return Err(RunError::Config(format!("unknown suite {s:?}"))),
    })
}

fn thread_pool() -> Result<rayon::ThreadPool, RunError> {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Ok(v) = std::env::var("FROBKP_THREADS") {
        let k: usize = v.parse().ok().filter(|&k| k > 0).ok_or_else(|| {
            RunError::Config(format!("FROBKP_THREADS={v:?} is not a positive integer"))
        })?;
        b = b.num_threads(k);
    }
    b.build().map_err(|e| RunError::Config(e.to_string()))
}

/// Runs the configured suite. Records come back sorted by suite order,
/// then by check name and parameters, independent of scheduling.
pub fn run_suite(cfg: &SuiteConfig) -> Result<Report, RunError> {
    validate(cfg)?;
    let suites: Vec<&str> = if cfg.suite == "all" {
        SUITES.to_vec()
    } else {
        vec![cfg.suite.as_str()]
    };
    let needs_points = suites.iter().any(|s| matches!(*s, "gram" | "frobenius"));
    let pts = if needs_points {
        points(cfg)?
    } else {
        Vec::new()
    };
    let pool = thread_pool()?;
    let mut records = Vec::new();
    for s in suites {
        let jobs = jobs_for(cfg, s, &pts)?;
        let mut recs: Vec<Record> = pool.install(|| jobs.par_iter().map(execute).collect());
        recs.sort_by_cached_key(|r| (r.check.clone(), r.params.to_string()));
        records.extend(recs);
    }
    Ok(Report { records })
}

/// One line per check name: pass/fail/skip counts.
pub fn summary(report: &Report) -> String {
    let mut names: Vec<&str> = Vec::new();
    for r in &report.records {
        if !names.contains(&r.check.as_str()) {
            names.push(&r.check);
        }
    }
    let mut out = String::new();
    for name in names {
        let of = |s: Status| {
            report
                .records
                .iter()
                .filter(|r| r.check == name && r.status == s)
                .count()
        };
        out += &format!(
            "{name:<20} pass {:>4}  fail {:>4}  skip {:>4}\n",
            of(Status::Pass),
            of(Status::Fail),
            of(Status::Skip)
        );
    }
    out += &format!(
        "total: {} pass, {} fail, {} skip\n",
        report.count(Status::Pass),
        report.count(Status::Fail),
        report.count(Status::Skip)
    );
    out
}
