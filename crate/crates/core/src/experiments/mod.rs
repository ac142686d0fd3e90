//! Experiment configs, dispatch and reports.

mod report;

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

pub use report::{Data, Format, Meta, Report, Row, CSV_HEADER};

use crate::constellation::{count_constellations, find_constellations, SearchOptions, Shape};
use crate::error::{Error, Result};
use crate::field::{AlgInt, Field, FieldKind};
use crate::lattice::DomainSpec;
use crate::primes;
use crate::quadform::{self, FormSearch, Order, QuadForm};
use crate::weights::{self, Chi, GyInput, WeightParams};

pub const EXPERIMENTS: [&str; 10] = [
    "primes-count",
    "chebotarev",
    "kappa",
    "gy-check",
    "constellation-find",
    "quadform-constellation",
    "short-interval",
    "classical-stats",
    "nl-witness",
    "correspondence-roundtrip",
];

/// Environment variable holding the default worker count.
pub const WORKERS_ENV: &str = "NFCONST_WORKERS";

/// Work above this many elementary steps is refused as infeasible.
pub const WORK_BUDGET: f64 = 5e9;

/// Everything an experiment may read. Keys follow the command-line names.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub field: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub class_number: Option<u64>,
    #[serde(rename = "L", default, skip_serializing_if = "Option::is_none")]
    pub l: Option<f64>,
    #[serde(rename = "M", default, skip_serializing_if = "Option::is_none")]
    pub big_m: Option<f64>,
    #[serde(rename = "R", default, skip_serializing_if = "Option::is_none")]
    pub r: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub w: Option<f64>,
    #[serde(rename = "W", default, skip_serializing_if = "Option::is_none")]
    pub big_w: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chi: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k_max: Option<i64>,
    /// path of a shape file
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shape: Option<String>,
    /// inline shape, e.g. "(0,0);(1,0);(0,1)"
    #[serde(rename = "S", default, skip_serializing_if = "Option::is_none")]
    pub s: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub box_sides: Option<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub box_start: Option<i64>,
    #[serde(rename = "kappa_L", default, skip_serializing_if = "Option::is_none")]
    pub kappa_l: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub form: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sign: Option<i8>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub distinct_primes: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub no_associates: Option<bool>,
    /// restrict element searches to the fundamental domain
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub domain: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub center: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_disc: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub limit: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub format: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub workers: Option<usize>,
}

const NUMBER_KEYS: [&str; 16] = [
    "class_number", "L", "M", "R", "w", "W", "a", "theta", "k_max", "m", "box_start", "kappa_L", "sign", "max_disc", "samples",
    "limit",
];
const INT_KEYS: [&str; 2] = ["seed", "workers"];
const BOOL_KEYS: [&str; 3] = ["distinct_primes", "no_associates", "domain"];
const FIELD_KEYS: [&str; 3] = ["d", "poly", "index"];

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<ExperimentConfig> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn from_file(path: &Path) -> Result<ExperimentConfig> {
        ExperimentConfig::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// Overlays `key=value` tokens; `d=`, `poly=` and `index=` extend the field spec.
    pub fn apply_args<S: AsRef<str>>(&self, args: &[S]) -> Result<ExperimentConfig> {
        let mut map = match serde_json::to_value(self)? {
            Value::Object(m) => m,
            _ => unreachable!(),
        };
        let mut field_extra: Vec<String> = Vec::new();
        for tok in args {
            let tok = tok.as_ref();
            let (k, v) = tok.split_once('=').ok_or_else(|| Error::parse(format!("expected key=value, got '{tok}'")))?;
            if FIELD_KEYS.contains(&k) {
                field_extra.push(format!("{k}={v}"));
                continue;
            }
            let value = if NUMBER_KEYS.contains(&k) {
                let x: f64 = v.parse().map_err(|_| Error::parse(format!("{k} expects a number, got '{v}'")))?;
                if x.fract() == 0.0 && x.abs() < 9e15 {
                    json!(x as i64)
                } else {
                    json!(x)
                }
            } else if INT_KEYS.contains(&k) {
                json!(v.parse::<u64>().map_err(|_| Error::parse(format!("{k} expects an integer, got '{v}'")))?)
            } else if BOOL_KEYS.contains(&k) {
                json!(v.parse::<bool>().map_err(|_| Error::parse(format!("{k} expects true or false, got '{v}'")))?)
            } else if k == "box_sides" {
                let sides = v
                    .split(',')
                    .map(|x| {
                        x.trim().parse::<f64>().map(|f| f as i64).map_err(|_| Error::parse(format!("bad box side '{x}'")))
                    })
                    .collect::<Result<Vec<i64>>>()?;
                json!(sides)
            } else {
                json!(v)
            };
            map.insert(k.to_string(), value);
        }
        if !field_extra.is_empty() {
            let base = match map.get("field") {
                Some(Value::String(s)) => s.clone(),
                _ => return Err(Error::parse("d=, poly= or index= given without field=")),
            };
            // later tokens replace keys already in the spec
            let mut words: Vec<String> = base.split_whitespace().map(String::from).collect();
            for kv in field_extra {
                let key = kv.split('=').next().unwrap().to_string();
                words.retain(|w| !w.starts_with(&format!("{key}=")));
                words.push(kv);
            }
            map.insert("field".into(), json!(words.join(" ")));
        }
        serde_json::from_value(Value::Object(map)).map_err(|e| Error::parse(e.to_string()))
    }

    pub fn field_spec(&self) -> Result<Field> {
        let f = Field::parse(self.field.as_deref().unwrap_or("rational"))?;
        Ok(match self.class_number {
            Some(h) => f.with_class_number(h),
            None => f,
        })
    }

    fn need<T: Copy>(&self, v: Option<T>, name: &str) -> Result<T> {
        v.ok_or_else(|| Error::invalid(format!("experiment {} needs {name}=", self.experiment)))
    }

    pub fn shape_spec(&self) -> Result<Shape> {
        match (&self.shape, &self.s) {
            (Some(path), _) => Shape::from_file(Path::new(path)).map_err(|e| match e {
                Error::Io(io) => Error::invalid(format!("cannot read shape file {path}: {io}")),
                other => other,
            }),
            (None, Some(s)) => Shape::parse_list(s),
            (None, None) => Err(Error::invalid(format!("experiment {} needs shape= or S=", self.experiment))),
        }
    }

    pub fn format_spec(&self) -> Result<Format> {
        Format::parse(self.format.as_deref().unwrap_or("json"))
    }

    pub fn worker_count(&self) -> usize {
        self.workers
            .or_else(|| std::env::var(WORKERS_ENV).ok().and_then(|v| v.parse().ok()))
            .filter(|&w| w > 0)
            .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
    }
}

fn budget(work: f64, what: &str) -> Result<()> {
    if work > WORK_BUDGET {
        return Err(Error::Infeasible(format!("{what} needs about {work:.2e} steps (budget {WORK_BUDGET:.0e})")));
    }
    Ok(())
}

fn box_points(n: usize, m: f64) -> f64 {
    (2.0 * m.floor() + 1.0).powi(n as i32)
}

type Outcome = (Vec<Row>, Value);

/// Runs an experiment on a pool of the configured size.
pub fn run(config: &ExperimentConfig) -> Result<Report> {
    if !EXPERIMENTS.contains(&config.experiment.as_str()) {
        return Err(Error::invalid(format!("unknown experiment '{}' (one of: {})", config.experiment, EXPERIMENTS.join(", "))));
    }
    let workers = config.worker_count();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::Internal(format!("thread pool: {e}")))?;
    let start = Instant::now();
    let (rows, details) = pool.install(|| dispatch(config))?;
    let row_seconds = rows.iter().map(|r| r.seconds).collect();
    Ok(Report {
        meta: Meta {
            experiment: config.experiment.clone(),
            config: config.clone(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            seconds: start.elapsed().as_secs_f64(),
            row_seconds,
            workers,
        },
        data: Data { rows, details },
    })
}

fn dispatch(c: &ExperimentConfig) -> Result<Outcome> {
    match c.experiment.as_str() {
        "primes-count" => primes_count(c),
        "chebotarev" => chebotarev(c),
        "kappa" => kappa(c),
        "gy-check" => gy_check(c),
        "constellation-find" => constellation_find(c),
        "quadform-constellation" => quadform_constellation(c),
        "short-interval" => short_interval(c),
        "classical-stats" => classical_stats(c),
        "nl-witness" => nl_witness(c),
        "correspondence-roundtrip" => correspondence_roundtrip(c),
        _ => unreachable!(),
    }
}

fn density(r: primes::DensityReport) -> Result<Outcome> {
    let details = serde_json::to_value(&r)?;
    Ok((vec![Row::from(&r)], details))
}

fn primes_count(c: &ExperimentConfig) -> Result<Outcome> {
    let field = c.field_spec()?;
    let l = c.need(c.l, "L")?;
    budget(l * field.degree() as f64, "prime ideal counting")?;
    density(primes::prime_ideal_count(&field, l)?)
}

fn chebotarev(c: &ExperimentConfig) -> Result<Outcome> {
    let field = c.field_spec()?;
    let l = c.need(c.l, "L")?;
    if l < 10.0 {
        return Err(Error::invalid("chebotarev needs L >= 10"));
    }
    budget(l * l.sqrt() / l.ln(), "principal prime search")?;
    density(primes::chebotarev_ratio(&field, l, c.class_number)?)
}

fn kappa(c: &ExperimentConfig) -> Result<Outcome> {
    let field = c.field_spec()?;
    let l = c.need(c.l, "L")?;
    budget(l * 4.0, "ideal counting")?;
    density(weights::estimate_kappa(&field, l)?)
}

fn parse_elem(s: &str, n: usize) -> Result<AlgInt> {
    let e = AlgInt::parse(s, n)?;
    Ok(e)
}

fn gy_check(c: &ExperimentConfig) -> Result<Outcome> {
    let start = Instant::now();
    let field = c.field_spec()?;
    let n = field.degree();
    let chi: Chi = c.chi.as_deref().unwrap_or("bump").parse()?;
    let params = WeightParams::new(c.need(c.r, "R")?, chi, c.w, c.big_w)?;
    let m = c.m.unwrap_or(1);
    let b = match &c.b {
        Some(s) => parse_elem(s, n)?,
        None => field.one(),
    };
    let forms: Vec<Vec<Vec<i64>>> = if c.shape.is_some() || c.s.is_some() {
        let fam = weights::build_linear_forms(&c.shape_spec()?)?;
        if fam.dim != n {
            return Err(Error::invalid("shape dimension must equal the field degree"));
        }
        if m > fam.forms.len() {
            return Err(Error::invalid(format!("m = {m} exceeds the {} available forms", fam.forms.len())));
        }
        fam.forms[..m].iter().map(|f| f.matrix.clone()).collect()
    } else {
        if m != 1 {
            return Err(Error::invalid("m > 1 needs a shape"));
        }
        vec![(0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect()]
    };
    let t = forms[0][0].len();
    let sides = c.need(c.box_sides.as_ref(), "box_sides")?.clone();
    let sides: Vec<i64> = if sides.len() == 1 { vec![sides[0]; t] } else { sides };
    if sides.len() != t || sides.iter().any(|&s| s < 1) {
        return Err(Error::invalid(format!("box_sides needs 1 or {t} positive entries")));
    }
    let lo = c.box_start.unwrap_or(1);
    let total: f64 = sides.iter().map(|&s| s as f64).product();
    budget(total * m as f64 * params.r, "GY average")?;
    let input = GyInput {
        params,
        forms,
        shifts: vec![b; m],
        box_lo: vec![lo; t],
        box_hi: sides.iter().map(|s| lo + s - 1).collect(),
        kappa: None,
        kappa_l: c.kappa_l.unwrap_or(1e5),
    };
    let rep = weights::gy_average(&field, &input)?;
    for w in &rep.warnings {
        eprintln!("warning: {w}");
    }
    let row = Row {
        experiment: "gy-check".into(),
        field: field.to_string(),
        scale: sides[0] as f64,
        count: rep.points,
        reference: Some(rep.main_term),
        ratio: Some(rep.ratio),
        seconds: start.elapsed().as_secs_f64(),
    };
    Ok((vec![row], json!({ "chi": chi.to_string(), "W": input.params.big_w, "R": input.params.r, "report": rep })))
}

fn limited<T: Serialize>(items: &[T], limit: usize) -> Result<Value> {
    Ok(serde_json::to_value(&items[..items.len().min(limit)])?)
}

fn constellation_find(c: &ExperimentConfig) -> Result<Outcome> {
    let start = Instant::now();
    let field = Arc::new(c.field_spec()?);
    let m = c.need(c.big_m, "M")?;
    let shape = c.shape_spec()?;
    let k_max = c.k_max.unwrap_or(5);
    if shape.dim() != field.degree() {
        return Err(Error::invalid(format!("shape dimension {} differs from the field degree {}", shape.dim(), field.degree())));
    }
    budget(box_points(field.degree(), m) * 50.0, "prime element enumeration")?;
    let domain = if c.domain.unwrap_or(false) { Some(DomainSpec::standard(field.clone())?) } else { None };
    let a = primes::enumerate_prime_elements(&field, m, domain.as_ref())?;
    let opts = SearchOptions { no_associates: c.no_associates.unwrap_or(false).then_some(field.as_ref()), allow_negative_k: false };
    let found = find_constellations(&a, &shape, k_max, &opts)?;
    let counts = count_constellations(&field, &a, &shape, k_max)?;
    let row = Row {
        experiment: "constellation-find".into(),
        field: field.to_string(),
        scale: m,
        count: found.len() as u64,
        reference: None,
        ratio: None,
        seconds: start.elapsed().as_secs_f64(),
    };
    let details = json!({
        "primes_in_box": a.len(),
        "k_max": k_max,
        "shape": shape.points(),
        "counts": counts,
        "constellations": limited(&found, c.limit.unwrap_or(1000))?,
    });
    Ok((vec![row], details))
}

fn quadform_constellation(c: &ExperimentConfig) -> Result<Outcome> {
    let start = Instant::now();
    let form = QuadForm::parse(c.form.as_deref().unwrap_or("1,0,1"))?;
    let m = c.need(c.big_m, "M")?;
    budget(box_points(2, m) * 30.0, "prime value search")?;
    let shape = c.shape_spec()?;
    if shape.dim() != 2 {
        return Err(Error::invalid("quadratic form shapes live in Z^2"));
    }
    let pts: Vec<(i64, i64)> = shape.points().iter().map(|p| (p[0], p[1])).collect();
    let opts = FormSearch {
        m: m.floor() as i64,
        k_max: c.k_max.unwrap_or(5),
        sign: c.sign.unwrap_or(1),
        distinct_primes: c.distinct_primes.unwrap_or(true),
        theta: c.theta.unwrap_or(0.5),
        limit: None,
    };
    let found = quadform::quadform_constellation(&form, &pts, &opts)?;
    let best = found.iter().map(|f| f.closeness).fold(f64::INFINITY, f64::min);
    let row = Row {
        experiment: "quadform-constellation".into(),
        field: format!("form {form}"),
        scale: m,
        count: found.len() as u64,
        reference: None,
        ratio: None,
        seconds: start.elapsed().as_secs_f64(),
    };
    let details = json!({
        "form": form,
        "invariants": form.invariants(),
        "shape": shape.points(),
        "min_closeness": if found.is_empty() { Value::Null } else { json!(best) },
        "constellations": limited(&found, c.limit.unwrap_or(1000))?,
    });
    Ok((vec![row], details))
}

fn short_interval(c: &ExperimentConfig) -> Result<Outcome> {
    let field = c.field_spec()?;
    let a = c.a.unwrap_or(0.525);
    match (field.kind(), &c.center) {
        (FieldKind::Rational, None) => {
            let m = c.need(c.big_m, "M")?;
            budget(m.powf(a) * 10.0, "short interval sieve")?;
            density(primes::short_interval_count(m, a)?)
        }
        (_, Some(center)) => {
            let x = parse_elem(center, field.degree())?;
            let radius = (x.linf() as f64).powf(a);
            budget(box_points(field.degree(), radius) * 50.0, "short interval search")?;
            density(primes::short_interval_count_field(&field, &x, a)?)
        }
        _ => Err(Error::invalid("short-interval in a number field needs center=")),
    }
}

fn classical_stats(c: &ExperimentConfig) -> Result<Outcome> {
    let start = Instant::now();
    let l = c.need(c.l, "L")?;
    budget(l * 2.0, "prime sieve")?;
    let s = primes::classical_stats(l)?;
    let count = crate::arith::primes_up_to(l.floor() as u64).len() as u64;
    let row = Row {
        experiment: "classical-stats".into(),
        field: "rational".into(),
        scale: l,
        count,
        reference: Some(s.chebyshev_bound),
        ratio: Some(s.theta / s.chebyshev_bound),
        seconds: start.elapsed().as_secs_f64(),
    };
    Ok((vec![row], serde_json::to_value(&s)?))
}

fn nl_witness(c: &ExperimentConfig) -> Result<Outcome> {
    let start = Instant::now();
    let field = Arc::new(c.field_spec()?);
    let n = field.degree();
    let m = c.need(c.big_m, "M")?;
    budget(box_points(n, m) * 20.0, "domain scan")?;
    let d = DomainSpec::standard(field.clone())?;
    let (cmin, cmax) = d.nl_constants(m)?;
    let theta_n = d.theta.powi(n as i32);
    let mut in_domain = 0u64;
    for p in crate::field::enumerate_box(n, m, Some(1.0)) {
        if d.in_domain(&AlgInt::new(p))? {
            in_domain += 1;
        }
    }
    let row = Row {
        experiment: "nl-witness".into(),
        field: field.to_string(),
        scale: m,
        count: in_domain,
        reference: Some(theta_n),
        ratio: Some(cmax / theta_n),
        seconds: start.elapsed().as_secs_f64(),
    };
    let details = json!({ "domain": d.to_json(), "C_min": cmin, "C_max": cmax, "Theta_pow_n": theta_n });
    Ok((vec![row], details))
}

#[derive(Serialize)]
struct RoundtripFailure {
    form: QuadForm,
    reason: String,
}

fn correspondence_roundtrip(c: &ExperimentConfig) -> Result<Outcome> {
    let start = Instant::now();
    let max_disc = c.max_disc.unwrap_or(200);
    if !(3..=100_000).contains(&max_disc) {
        return Err(Error::invalid("max_disc must lie in [3, 100000]"));
    }
    let mut checked = 0u64;
    let mut failures: Vec<RoundtripFailure> = Vec::new();
    let mut classes: BTreeMap<i64, u64> = BTreeMap::new();
    for d in -max_disc..=max_disc {
        let dd = d as i128;
        if d == 0 || dd.rem_euclid(4) > 1 || (d > 0 && crate::arith::is_square(dd)) {
            continue;
        }
        let forms = if d < 0 {
            let pos = quadform::reduced_forms_definite(dd)?;
            let neg: Vec<QuadForm> = pos.iter().map(|f| f.negate()).collect();
            pos.into_iter().chain(neg).collect::<Vec<_>>()
        } else {
            quadform::reduced_forms_indefinite(dd)?
        };
        classes.insert(d, quadform::form_class_count(dd)?);
        for f in forms {
            checked += 1;
            let outcome = (|| -> Result<Option<String>> {
                let (id, eps) = quadform::form_to_ideal(&f)?;
                let g = quadform::ideal_to_form(&id, eps)?;
                if quadform::reduce_form(&g)? != quadform::reduce_form(&f)? {
                    return Ok(Some(format!("roundtrip gave {g}")));
                }
                Ok(None)
            })();
            match outcome {
                Ok(None) => {}
                Ok(Some(reason)) => failures.push(RoundtripFailure { form: f, reason }),
                Err(e) => failures.push(RoundtripFailure { form: f, reason: e.to_string() }),
            }
        }
    }
    // N(c) = N(c O_K) on ideals of conductor-2 orders
    let samples = c.samples.unwrap_or(50);
    let mut rng = ChaCha8Rng::seed_from_u64(c.seed.unwrap_or(0));
    let mut norm_checks = 0u64;
    let mut norm_failures = 0u64;
    let ds = [-1i64, -2, -3, -5, -6, -7, 2, 3, 5, 6, 7, 10, 13];
    while norm_checks < samples {
        let order = Order::new(ds[rng.gen_range(0..ds.len())], 2)?;
        let disc = order.disc;
        let (a, b) = (rng.gen_range(1..40i128), rng.gen_range(-40..40i128));
        if (b * b - disc) % (4 * a) != 0 {
            continue;
        }
        let cc = (b * b - disc) / (4 * a);
        let f = QuadForm::new(a as i64, b as i64, cc as i64);
        if !f.is_primitive() {
            continue;
        }
        norm_checks += 1;
        let (id, _) = quadform::form_to_ideal(&f)?;
        if quadform::order_ideal_norm(&id)? != quadform::order_ideal_norm(&id.extend_to_maximal()?)? {
            norm_failures += 1;
        }
    }
    let passed = checked - failures.len() as u64;
    let row = Row {
        experiment: "correspondence-roundtrip".into(),
        field: "quadratic orders".into(),
        scale: max_disc as f64,
        count: passed,
        reference: Some(checked as f64),
        ratio: Some(passed as f64 / checked.max(1) as f64),
        seconds: start.elapsed().as_secs_f64(),
    };
    let details = json!({
        "forms_checked": checked,
        "failures": failures,
        "form_class_counts": classes,
        "conductor2_norm_checks": norm_checks,
        "conductor2_norm_failures": norm_failures,
    });
    Ok((vec![row], details))
}

/// Convenience: a config for `experiment` with the given `key=value` tokens.
pub fn config_from_args<S: AsRef<str>>(experiment: &str, args: &[S]) -> Result<ExperimentConfig> {
    ExperimentConfig { experiment: experiment.to_string(), ..Default::default() }.apply_args(args)
}

/// Keys accepted on the command line, for help output.
pub fn known_keys() -> Vec<&'static str> {
    let mut v: Vec<&str> = NUMBER_KEYS.iter().chain(&INT_KEYS).chain(&BOOL_KEYS).chain(&FIELD_KEYS).copied().collect();
    v.extend(["field", "chi", "shape", "S", "b", "box_sides", "form", "center", "output", "format"]);
    v
}
