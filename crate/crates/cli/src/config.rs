//! Flat `key = value` problem files.
//!
//! Keys are dotted paths (`set.kind`, `map_t.inner.c`), values are JSON
//! numbers, arrays, booleans or bare words. `#` starts a comment. Parsing
//! never panics: every problem found is collected and returned.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::{self, Write as _};

use extragradient::operators::{MaximalMonotone, PseudoKind, Resolvent, StrictPseudocontraction};
use extragradient::schemes::ScheduleKind;
use extragradient::{
    ConvexSet, IsmKind, IsmOperator, Matrix, NonexpansiveMap, Problem, Schedule, SchemeKind, StoppingRule, Vector,
};
use serde_json::Value;

#[derive(Debug, Clone, PartialEq)]
pub struct ProblemConfig {
    pub dimension: usize,
    pub scheme: SchemeKind,
    pub problem: Problem<f64>,
    pub x0: Vector<f64>,
    pub stop: StoppingRule<f64>,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigError {
    pub line: Option<usize>,
    pub key: String,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(line) = self.line {
            write!(f, "line {line}: ")?;
        }
        if self.key.is_empty() {
            f.write_str(&self.message)
        } else {
            write!(f, "{}: {}", self.key, self.message)
        }
    }
}

struct Entry {
    line: usize,
    value: Value,
}

struct Reader {
    entries: BTreeMap<String, Entry>,
    used: BTreeSet<String>,
    errors: Vec<ConfigError>,
}

fn key_path(prefix: &str, key: &str) -> String {
    if prefix.is_empty() {
        key.to_string()
    } else {
        format!("{prefix}.{key}")
    }
}

fn is_word(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl Reader {
    fn parse(text: &str) -> Self {
        let mut reader = Reader {
            entries: BTreeMap::new(),
            used: BTreeSet::new(),
            errors: Vec::new(),
        };
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let Some((key, value)) = content.split_once('=') else {
                reader.error_at(line, "", format!("expected `key = value`, got `{content}`"));
                continue;
            };
            let (key, value) = (key.trim(), value.trim());
            if key.is_empty() || !key.split('.').all(is_word) {
                reader.error_at(line, key, "malformed key".to_string());
                continue;
            }
            let value = match serde_json::from_str::<Value>(value) {
                Ok(v) => v,
                Err(_) if is_word(value) => Value::String(value.to_string()),
                Err(_) => {
                    reader.error_at(line, key, format!("malformed value `{value}`"));
                    continue;
                }
            };
            if reader.entries.contains_key(key) {
                reader.error_at(line, key, "duplicate key".to_string());
                continue;
            }
            reader.entries.insert(key.to_string(), Entry { line, value });
        }
        reader
    }

    fn error_at(&mut self, line: usize, key: &str, message: String) {
        self.errors.push(ConfigError {
            line: Some(line),
            key: key.to_string(),
            message,
        });
    }

    fn error(&mut self, key: &str, message: impl Into<String>) {
        let line = self.entries.get(key).map(|e| e.line);
        self.errors.push(ConfigError {
            line,
            key: key.to_string(),
            message: message.into(),
        });
    }

    fn has(&self, key: &str) -> bool {
        self.entries.contains_key(key)
    }

    fn take(&mut self, key: &str) -> Option<Value> {
        let value = self.entries.get(key)?.value.clone();
        self.used.insert(key.to_string());
        Some(value)
    }

    fn require(&mut self, key: &str) -> Option<Value> {
        let v = self.take(key);
        if v.is_none() {
            self.error(key, "missing");
        }
        v
    }

    fn convert<T>(
        &mut self,
        key: &str,
        value: Option<Value>,
        what: &str,
        f: impl Fn(&Value) -> Option<T>,
    ) -> Option<T> {
        let value = value?;
        let out = f(&value);
        if out.is_none() {
            self.error(key, format!("expected {what}, got {value}"));
        }
        out
    }

    fn word(&mut self, key: &str) -> Option<String> {
        let v = self.require(key);
        self.convert(key, v, "a word", |v| v.as_str().map(str::to_string))
    }

    fn number(&mut self, key: &str) -> Option<f64> {
        let v = self.require(key);
        self.convert(key, v, "a number", Value::as_f64)
    }

    fn opt_number(&mut self, key: &str) -> Option<f64> {
        let v = self.take(key);
        self.convert(key, v, "a number", Value::as_f64)
    }

    fn integer(&mut self, key: &str) -> Option<u64> {
        let v = self.require(key);
        self.convert(key, v, "a nonnegative integer", Value::as_u64)
    }

    fn opt_bool(&mut self, key: &str) -> Option<bool> {
        let v = self.take(key);
        self.convert(key, v, "true or false", Value::as_bool)
    }

    fn numbers(&mut self, key: &str) -> Option<Vec<f64>> {
        let v = self.require(key);
        self.convert(key, v, "an array of numbers", numbers_of)
    }

    fn vector(&mut self, key: &str, dim: usize) -> Option<Vector<f64>> {
        let values = self.numbers(key)?;
        if values.len() != dim {
            self.error(key, format!("expected {dim} components, got {}", values.len()));
            return None;
        }
        self.lib(key, Vector::new(values))
    }

    fn opt_vector(&mut self, key: &str, dim: usize) -> Option<Vector<f64>> {
        if self.has(key) {
            self.vector(key, dim)
        } else {
            None
        }
    }

    fn matrix(&mut self, key: &str, dim: usize) -> Option<Matrix<f64>> {
        let v = self.require(key);
        let rows: Vec<Vec<f64>> = self.convert(key, v, "an array of rows", |v| {
            v.as_array()?.iter().map(numbers_of).collect::<Option<Vec<_>>>()
        })?;
        if rows.len() != dim || rows.iter().any(|r| r.len() != dim) {
            self.error(key, format!("expected a {dim}x{dim} matrix"));
            return None;
        }
        self.lib(key, Matrix::from_rows(rows))
    }

    fn lib<T>(&mut self, key: &str, result: extragradient::Result<T>) -> Option<T> {
        match result {
            Ok(v) => Some(v),
            Err(e) => {
                self.error(key, e.to_string());
                None
            }
        }
    }

    fn unknown_kind(&mut self, key: &str, kind: &str, allowed: &[&str]) {
        self.error(
            key,
            format!("unknown kind `{kind}`, expected one of {}", allowed.join(", ")),
        );
    }

    fn finish(mut self) -> Vec<ConfigError> {
        let unused: Vec<(String, usize)> = self
            .entries
            .iter()
            .filter(|(k, _)| !self.used.contains(*k))
            .map(|(k, e)| (k.clone(), e.line))
            .collect();
        for (key, line) in unused {
            self.error_at(line, &key, "unknown key".to_string());
        }
        self.errors.sort_by_key(|e| e.line.unwrap_or(usize::MAX));
        self.errors
    }
}

fn numbers_of(v: &Value) -> Option<Vec<f64>> {
    v.as_array()?.iter().map(Value::as_f64).collect()
}

const SET_KINDS: [&str; 5] = ["whole_space", "box", "ball", "halfspace", "simplex"];

fn read_set(r: &mut Reader, prefix: &str, dim: usize) -> Option<ConvexSet<f64>> {
    let kind_key = key_path(prefix, "kind");
    let kind = r.word(&kind_key)?;
    let k = |name: &str| key_path(prefix, name);
    match kind.as_str() {
        "whole_space" => Some(ConvexSet::WholeSpace),
        "box" => {
            let lo = r.vector(&k("lo"), dim);
            let hi = r.vector(&k("hi"), dim);
            let (lo, hi) = (lo?, hi?);
            r.lib(&kind_key, ConvexSet::new_box(lo, hi))
        }
        "ball" => {
            let center = r.vector(&k("center"), dim);
            let radius = r.number(&k("radius"));
            r.lib(&kind_key, ConvexSet::new_ball(center?, radius?))
        }
        "halfspace" => {
            let a = r.vector(&k("a"), dim);
            let b = r.number(&k("b"));
            r.lib(&kind_key, ConvexSet::new_halfspace(a?, b?))
        }
        "simplex" => r.lib(&kind_key, ConvexSet::new_simplex(dim)),
        other => {
            r.unknown_kind(&kind_key, other, &SET_KINDS);
            None
        }
    }
}

const MAP_KINDS: [&str; 5] = ["identity", "projection", "contraction", "rotation", "average"];

fn read_map(r: &mut Reader, prefix: &str, dim: usize) -> Option<NonexpansiveMap<f64>> {
    let kind_key = key_path(prefix, "kind");
    let kind = r.word(&kind_key)?;
    let k = |name: &str| key_path(prefix, name);
    match kind.as_str() {
        "identity" => Some(NonexpansiveMap::Identity),
        "projection" => read_set(r, &k("set"), dim).map(NonexpansiveMap::ProjectionOnto),
        "contraction" => {
            let c = r.number(&k("c"));
            let fp = r.vector(&k("fixed_point"), dim);
            r.lib(&kind_key, NonexpansiveMap::contraction(c?, fp?))
        }
        "rotation" => {
            let angle = r.number(&k("angle"));
            if dim != 2 {
                r.error(&kind_key, "rotation needs dimension 2");
                return None;
            }
            r.lib(&kind_key, NonexpansiveMap::rotation(angle?))
        }
        "average" => {
            let weight = r.number(&k("weight"));
            let inner = read_map(r, &k("inner"), dim);
            r.lib(&kind_key, NonexpansiveMap::average(inner?, weight?))
        }
        other => {
            r.unknown_kind(&kind_key, other, &MAP_KINDS);
            None
        }
    }
}

fn read_pseudo(r: &mut Reader, prefix: &str, dim: usize) -> Option<StrictPseudocontraction<f64>> {
    let kind_key = key_path(prefix, "kind");
    let kind_word = r.word(&kind_key)?;
    let k = |name: &str| key_path(prefix, name);
    let kind = match kind_word.as_str() {
        "scaled_negation" => PseudoKind::ScaledNegation { s: r.number(&k("s"))? },
        "nonexpansive" => PseudoKind::Nonexpansive(read_map(r, &k("t"), dim)?),
        other => {
            r.unknown_kind(&kind_key, other, &["scaled_negation", "nonexpansive"]);
            return None;
        }
    };
    match r.opt_number(&k("k")) {
        Some(coef) => r.lib(&kind_key, StrictPseudocontraction::new(kind, coef)),
        None => r.lib(&kind_key, StrictPseudocontraction::with_minimal_k(kind)),
    }
}

const ISM_KINDS: [&str; 5] = [
    "zero",
    "shift_residual",
    "affine_gradient",
    "from_pseudocontraction",
    "rotation90",
];

fn read_ism(r: &mut Reader, prefix: &str, dim: usize) -> Option<IsmOperator<f64>> {
    let kind_key = key_path(prefix, "kind");
    let kind_word = r.word(&kind_key)?;
    let k = |name: &str| key_path(prefix, name);
    let kind = match kind_word.as_str() {
        "zero" => IsmKind::Zero,
        "shift_residual" => IsmKind::ShiftResidual {
            target: r.vector(&k("target"), dim)?,
        },
        "affine_gradient" => {
            let matrix = r.matrix(&k("matrix"), dim);
            let offset = r.vector(&k("q"), dim);
            IsmKind::AffineGradient {
                matrix: matrix?,
                offset: offset?,
            }
        }
        "from_pseudocontraction" => IsmKind::FromPseudocontraction(Box::new(read_pseudo(r, &k("s"), dim)?)),
        "rotation90" => IsmKind::Rotation90,
        other => {
            r.unknown_kind(&kind_key, other, &ISM_KINDS);
            return None;
        }
    };
    let alpha_key = k("alpha");
    match r.opt_number(&alpha_key) {
        Some(alpha) => r.lib(&alpha_key, IsmOperator::new(kind, alpha)),
        None => r.lib(&alpha_key, IsmOperator::with_default_alpha(kind)),
    }
}

fn read_maximal(r: &mut Reader, prefix: &str, dim: usize) -> Option<Resolvent<f64>> {
    let kind_key = key_path(prefix, "kind");
    let kind_word = r.word(&kind_key)?;
    let k = |name: &str| key_path(prefix, name);
    let op = match kind_word.as_str() {
        "normal_cone" => read_set(r, &k("set"), dim).map(MaximalMonotone::NormalCone),
        "abs" => Some(MaximalMonotone::AbsSubdifferential),
        "linear" => {
            let m = r.matrix(&k("matrix"), dim);
            m.and_then(|m| r.lib(&k("matrix"), MaximalMonotone::linear_monotone(m)))
        }
        other => {
            r.unknown_kind(&kind_key, other, &["normal_cone", "abs", "linear"]);
            None
        }
    };
    let radius = r.number(&k("r"));
    r.lib(&k("r"), Resolvent::new(op?, radius?))
}

fn read_schedule(r: &mut Reader, prefix: &str) -> Option<Schedule<f64>> {
    let kind_key = key_path(prefix, "kind");
    let kind_word = r.word(&kind_key)?;
    let k = |name: &str| key_path(prefix, name);
    let kind = match kind_word.as_str() {
        "constant" => ScheduleKind::Constant(r.number(&k("value"))?),
        "table" => {
            let values = r.numbers(&k("values"))?;
            if values.is_empty() {
                r.error(&k("values"), "table needs at least one value");
                return None;
            }
            ScheduleKind::Table(values)
        }
        other => {
            r.unknown_kind(&kind_key, other, &["constant", "table"]);
            return None;
        }
    };
    let (min, max) = match &kind {
        ScheduleKind::Constant(v) => (*v, *v),
        ScheduleKind::Table(vs) => vs.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
            (lo.min(v), hi.max(v))
        }),
    };
    let low = r.opt_number(&k("low")).unwrap_or(min);
    let high = r.opt_number(&k("high")).unwrap_or(max);
    r.lib(&kind_key, Schedule::new(kind, low, high))
}

fn read_stop(r: &mut Reader) -> Option<StoppingRule<f64>> {
    let max_iterations = r.integer("stop.max_iterations");
    let threshold = r.number("stop.residual_threshold");
    let stall = r.opt_number("stop.stall_threshold").unwrap_or(0.0);
    let max_iterations = usize::try_from(max_iterations?).ok()?;
    r.lib("stop", StoppingRule::new(max_iterations, threshold?, stall))
}

/// Reads every field without checking the scheme's requirements.
pub fn parse_unvalidated(text: &str) -> Result<ProblemConfig, Vec<ConfigError>> {
    let mut r = Reader::parse(text);
    let dimension = r.integer("dimension").and_then(|d| {
        let d = usize::try_from(d).ok().filter(|&d| d >= 1);
        if d.is_none() {
            r.error("dimension", "must be at least 1");
        }
        d
    });
    let scheme = r.word("scheme").and_then(|s| {
        let parsed = s.parse::<SchemeKind>();
        r.lib("scheme", parsed)
    });
    let seed = if r.has("seed") { r.integer("seed") } else { Some(0) };
    let nt_literal = r.opt_bool("nt_literal").unwrap_or(false);
    let alpha_n = read_schedule(&mut r, "alpha_n");
    let stop = read_stop(&mut r);

    let Some(dim) = dimension else {
        return Err(r.finish());
    };
    let x0 = r.vector("x0", dim);
    let known_solution = r.opt_vector("known_solution", dim);
    let set = if r.has("set.kind") {
        read_set(&mut r, "set", dim)
    } else {
        Some(ConvexSet::WholeSpace)
    };
    let operator_a = r.has("operator_a.kind").then(|| read_ism(&mut r, "operator_a", dim));
    let map_t = r.has("map_t.kind").then(|| read_map(&mut r, "map_t", dim));
    let map_s = r.has("map_s.kind").then(|| read_pseudo(&mut r, "map_s", dim));
    let operator_b = r
        .has("operator_b.kind")
        .then(|| read_maximal(&mut r, "operator_b", dim));
    let lambda = r.has("lambda.kind").then(|| read_schedule(&mut r, "lambda"));

    let errors = r.finish();
    if !errors.is_empty() {
        return Err(errors);
    }
    let built = (|| {
        let problem = Problem {
            set: set?,
            operator_a: slot(operator_a)?,
            map_t: slot(map_t)?,
            map_s: slot(map_s)?,
            operator_b: slot(operator_b)?,
            lambda: slot(lambda)?,
            alpha_n: alpha_n?,
            known_solution,
            nt_literal,
        };
        Some(ProblemConfig {
            dimension: dim,
            scheme: scheme?,
            problem,
            x0: x0?,
            stop: stop?,
            seed: seed?,
        })
    })();
    built.ok_or_else(|| {
        vec![ConfigError {
            line: None,
            key: String::new(),
            message: "incomplete configuration".into(),
        }]
    })
}

/// `None` when a present section failed to build.
fn slot<T>(section: Option<Option<T>>) -> Option<Option<T>> {
    match section {
        None => Some(None),
        Some(built) => built.map(Some),
    }
}

/// Errors that keep `scheme` from running on this config: missing slots,
/// then violated schedule bounds.
pub fn scheme_errors(config: &ProblemConfig, scheme: SchemeKind) -> Vec<ConfigError> {
    let missing = config.problem.missing_slots(scheme);
    if !missing.is_empty() {
        return missing
            .into_iter()
            .map(|slot| ConfigError {
                line: None,
                key: slot.to_string(),
                message: format!("missing {slot} for scheme {scheme}"),
            })
            .collect();
    }
    match config.problem.validate_schedules(scheme) {
        Ok(()) => Vec::new(),
        Err(violations) => violations
            .into_iter()
            .map(|v| ConfigError {
                line: None,
                key: format!("{}.{}", v.schedule, v.bound.split(' ').next().unwrap_or("")),
                message: v.to_string(),
            })
            .collect(),
    }
}

/// Parses and validates for the configured scheme.
pub fn parse_config(text: &str) -> Result<ProblemConfig, Vec<ConfigError>> {
    let config = parse_unvalidated(text)?;
    let errors = scheme_errors(&config, config.scheme);
    if errors.is_empty() {
        Ok(config)
    } else {
        Err(errors)
    }
}

fn num(x: f64) -> String {
    serde_json::Number::from_f64(x)
        .map(|n| n.to_string())
        .unwrap_or_else(|| x.to_string())
}

fn nums(xs: &[f64]) -> String {
    let parts: Vec<String> = xs.iter().map(|&x| num(x)).collect();
    format!("[{}]", parts.join(","))
}

fn matrix_text(m: &Matrix<f64>) -> String {
    let rows: Vec<String> = m.rows().map(nums).collect();
    format!("[{}]", rows.join(","))
}

struct Writer {
    out: String,
}

impl Writer {
    fn put(&mut self, key: &str, value: impl fmt::Display) {
        writeln!(self.out, "{key} = {value}").expect("writing to a string");
    }

    fn set(&mut self, prefix: &str, set: &ConvexSet<f64>) {
        let k = |name: &str| key_path(prefix, name);
        match set {
            ConvexSet::WholeSpace => self.put(&k("kind"), "whole_space"),
            ConvexSet::Box { lo, hi } => {
                self.put(&k("kind"), "box");
                self.put(&k("lo"), nums(lo.as_slice()));
                self.put(&k("hi"), nums(hi.as_slice()));
            }
            ConvexSet::Ball { center, radius } => {
                self.put(&k("kind"), "ball");
                self.put(&k("center"), nums(center.as_slice()));
                self.put(&k("radius"), num(*radius));
            }
            ConvexSet::Halfspace { a, b } => {
                self.put(&k("kind"), "halfspace");
                self.put(&k("a"), nums(a.as_slice()));
                self.put(&k("b"), num(*b));
            }
            ConvexSet::Simplex { .. } => self.put(&k("kind"), "simplex"),
        }
    }

    fn map(&mut self, prefix: &str, map: &NonexpansiveMap<f64>) {
        let k = |name: &str| key_path(prefix, name);
        match map {
            NonexpansiveMap::Identity => self.put(&k("kind"), "identity"),
            NonexpansiveMap::ProjectionOnto(set) => {
                self.put(&k("kind"), "projection");
                self.set(&k("set"), set);
            }
            NonexpansiveMap::Contraction { c, fixed_point } => {
                self.put(&k("kind"), "contraction");
                self.put(&k("c"), num(*c));
                self.put(&k("fixed_point"), nums(fixed_point.as_slice()));
            }
            NonexpansiveMap::Rotation { angle } => {
                self.put(&k("kind"), "rotation");
                self.put(&k("angle"), num(*angle));
            }
            NonexpansiveMap::Average { inner, weight } => {
                self.put(&k("kind"), "average");
                self.put(&k("weight"), num(*weight));
                self.map(&k("inner"), inner);
            }
        }
    }

    fn pseudo(&mut self, prefix: &str, s: &StrictPseudocontraction<f64>) {
        let k = |name: &str| key_path(prefix, name);
        match &s.kind {
            PseudoKind::ScaledNegation { s } => {
                self.put(&k("kind"), "scaled_negation");
                self.put(&k("s"), num(*s));
            }
            PseudoKind::Nonexpansive(t) => {
                self.put(&k("kind"), "nonexpansive");
                self.map(&k("t"), t);
            }
        }
        self.put(&k("k"), num(s.k));
    }

    fn ism(&mut self, prefix: &str, a: &IsmOperator<f64>) {
        let k = |name: &str| key_path(prefix, name);
        match &a.kind {
            IsmKind::Zero => self.put(&k("kind"), "zero"),
            IsmKind::ShiftResidual { target } => {
                self.put(&k("kind"), "shift_residual");
                self.put(&k("target"), nums(target.as_slice()));
            }
            IsmKind::AffineGradient { matrix, offset } => {
                self.put(&k("kind"), "affine_gradient");
                self.put(&k("matrix"), matrix_text(matrix));
                self.put(&k("q"), nums(offset.as_slice()));
            }
            IsmKind::FromPseudocontraction(s) => {
                self.put(&k("kind"), "from_pseudocontraction");
                self.pseudo(&k("s"), s);
            }
            IsmKind::Rotation90 => self.put(&k("kind"), "rotation90"),
        }
        self.put(&k("alpha"), num(a.alpha));
    }

    fn maximal(&mut self, prefix: &str, b: &Resolvent<f64>) {
        let k = |name: &str| key_path(prefix, name);
        match &b.operator {
            MaximalMonotone::NormalCone(set) => {
                self.put(&k("kind"), "normal_cone");
                self.set(&k("set"), set);
            }
            MaximalMonotone::AbsSubdifferential => self.put(&k("kind"), "abs"),
            MaximalMonotone::LinearMonotone(m) => {
                self.put(&k("kind"), "linear");
                self.put(&k("matrix"), matrix_text(m));
            }
        }
        self.put(&k("r"), num(b.r));
    }

    fn schedule(&mut self, prefix: &str, s: &Schedule<f64>) {
        let k = |name: &str| key_path(prefix, name);
        match s.kind() {
            ScheduleKind::Constant(v) => {
                self.put(&k("kind"), "constant");
                self.put(&k("value"), num(*v));
            }
            ScheduleKind::Table(vs) => {
                self.put(&k("kind"), "table");
                self.put(&k("values"), nums(vs));
            }
        }
        self.put(&k("low"), num(s.low()));
        self.put(&k("high"), num(s.high()));
    }
}

/// Renders a config that parses back to an equal value.
pub fn serialize(config: &ProblemConfig) -> String {
    let mut w = Writer { out: String::new() };
    let p = &config.problem;
    w.put("dimension", config.dimension);
    w.put("scheme", config.scheme);
    w.put("seed", config.seed);
    if p.nt_literal {
        w.put("nt_literal", true);
    }
    w.put("x0", nums(config.x0.as_slice()));
    if let Some(z) = &p.known_solution {
        w.put("known_solution", nums(z.as_slice()));
    }
    w.set("set", &p.set);
    if let Some(a) = &p.operator_a {
        w.ism("operator_a", a);
    }
    if let Some(t) = &p.map_t {
        w.map("map_t", t);
    }
    if let Some(s) = &p.map_s {
        w.pseudo("map_s", s);
    }
    if let Some(b) = &p.operator_b {
        w.maximal("operator_b", b);
    }
    if let Some(l) = &p.lambda {
        w.schedule("lambda", l);
    }
    w.schedule("alpha_n", &p.alpha_n);
    w.put("stop.max_iterations", config.stop.max_iterations);
    w.put("stop.residual_threshold", num(config.stop.residual_threshold));
    w.put("stop.stall_threshold", num(config.stop.stall_threshold));
    w.out
}
