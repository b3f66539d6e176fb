//! Job specifications: the field configuration plus command parameters, with
//! every parse failure reported against the JSON path that caused it.

use serde::de::DeserializeOwned;
use serde::Deserialize;
use serde_json::{Map, Value};

use padic_transfer::coset::{CosetFunction, CosetSpace};
use padic_transfer::cyclo::Cyclo;
use padic_transfer::ext::{ExtElement, QuadExtension};
use padic_transfer::matrix::{MatE, MatF, Matrix};
use padic_transfer::padic::{DeltaClass, FieldConfig, PadicNumber};
use padic_transfer::pairs::{HElem, LieS, LieSPrime};

use crate::error::CliError;

/// Keys read by the field configuration; everything else belongs to the command.
const FIELD_KEYS: [&str; 5] = ["cmd", "p", "precision", "delta_class", "gamma"];

/// A number in a spec: an integer, or a string `"a/b"`, `"v:mantissa"`.
#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum Num {
    Int(i64),
    Text(String),
}

/// An `F`-matrix as rows, or a bare number for a `1 x 1` matrix.
#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum MatSpec {
    Scalar(Num),
    Rows(Vec<Vec<Num>>),
}

/// An element `a + b delta` of `E` as `[a, b]`, or `a` alone.
#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum ExtSpec {
    Pair([Num; 2]),
    Base(Num),
}

#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum MatESpec {
    Scalar(ExtSpec),
    Rows(Vec<Vec<ExtSpec>>),
}

/// A point of `s` as `{a1, a2}` or of `s'` as `{b}`.
#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum ElementSpec {
    S { a1: MatSpec, a2: MatSpec },
    Prime { b: MatESpec },
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HSpec {
    pub h1: MatSpec,
    pub h2: MatSpec,
}

/// One term `coeff mu8^k psi(<w, X>) 1[X in center + Lambda_scale]`.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermSpec {
    #[serde(default)]
    pub coeff: Option<Num>,
    #[serde(default)]
    pub mu8: u8,
    #[serde(default)]
    pub w: Option<ElementSpec>,
    #[serde(default)]
    pub center: Option<ElementSpec>,
    #[serde(default)]
    pub scale: i64,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct FieldSpec {
    #[serde(default)]
    cmd: Option<String>,
    #[serde(default = "default_p")]
    p: u32,
    #[serde(default = "default_precision")]
    precision: u32,
    #[serde(default = "default_class")]
    delta_class: String,
    #[serde(default)]
    gamma: Option<Num>,
}

fn default_p() -> u32 {
    3
}

fn default_precision() -> u32 {
    12
}

fn default_class() -> String {
    "u0".into()
}

/// Deserializes `value` into `T`, turning errors into usage errors at `$.path`.
pub fn parse_at<T: DeserializeOwned>(value: Value, prefix: &str) -> Result<T, CliError> {
    serde_path_to_error::deserialize(value).map_err(|e| {
        let inner = e.path().to_string();
        let path = match (prefix, inner.as_str()) {
            (p, ".") => p.to_string(),
            (p, i) if i.starts_with('[') => format!("{p}{i}"),
            (p, i) => format!("{p}.{i}"),
        };
        CliError::Usage(format!("{path}: {}", e.into_inner()))
    })
}

/// A validated job: the field and the command parameters still as JSON.
pub struct Job {
    pub cfg: FieldConfig,
    pub params: Value,
}

impl Job {
    pub fn from_value(spec: &Value, command: &str) -> Result<Job, CliError> {
        let obj = spec.as_object().ok_or_else(|| CliError::Usage("$: the spec must be a JSON object".into()))?;
        let (mut field, mut params) = (Map::new(), Map::new());
        for (k, v) in obj {
            if FIELD_KEYS.contains(&k.as_str()) {
                field.insert(k.clone(), v.clone());
            } else {
                params.insert(k.clone(), v.clone());
            }
        }
        let fs: FieldSpec = parse_at(Value::Object(field), "$")?;
        if let Some(cmd) = &fs.cmd {
            if cmd != command {
                return Err(CliError::Usage(format!("$.cmd: spec is for {cmd:?}, not {command:?}")));
            }
        }
        let class: DeltaClass = fs.delta_class.parse().map_err(|e| CliError::Usage(format!("$.delta_class: {e}")))?;
        let cfg = FieldConfig::new(fs.p, fs.precision, class).map_err(|e| CliError::Usage(format!("$.p: {e}")))?;
        let cfg = match &fs.gamma {
            Some(g) => {
                let g = num(&cfg, g, "$.gamma")?;
                cfg.with_gamma(g).map_err(|e| CliError::Usage(format!("$.gamma: {e}")))?
            }
            None => cfg,
        };
        Ok(Job { cfg, params: Value::Object(params) })
    }

    pub fn params<T: DeserializeOwned>(&self) -> Result<T, CliError> {
        parse_at(self.params.clone(), "$")
    }
}

pub fn num(cfg: &FieldConfig, n: &Num, path: &str) -> Result<PadicNumber, CliError> {
    match n {
        Num::Int(k) => Ok(cfg.int(*k)),
        Num::Text(s) => cfg.parse(s).map_err(|e| CliError::Usage(format!("{path}: {e}"))),
    }
}

/// A rational coefficient `a` or `a/b`.
pub fn coefficient(p: u32, n: &Num, path: &str) -> Result<Cyclo, CliError> {
    let bad = || CliError::Usage(format!("{path}: expected an integer or a fraction a/b"));
    match n {
        Num::Int(k) => Ok(Cyclo::int(p, *k)),
        Num::Text(s) => {
            let (a, b) = s.split_once('/').unwrap_or((s.as_str(), "1"));
            let a: i64 = a.trim().parse().map_err(|_| bad())?;
            let b: i64 = b.trim().parse().map_err(|_| bad())?;
            if b == 0 {
                return Err(bad());
            }
            Ok(Cyclo::ratio(p, a, b))
        }
    }
}

fn square<T>(rows: &[Vec<T>], path: &str) -> Result<usize, CliError> {
    let n = rows.len();
    if n == 0 || rows.iter().any(|r| r.len() != n) {
        return Err(CliError::Usage(format!("{path}: expected a non-empty square matrix")));
    }
    Ok(n)
}

pub fn mat_f(cfg: &FieldConfig, m: &MatSpec, path: &str) -> Result<MatF, CliError> {
    match m {
        MatSpec::Scalar(x) => Ok(Matrix::diag(&[num(cfg, x, path)?])),
        MatSpec::Rows(rows) => {
            square(rows, path)?;
            let rows = rows
                .iter()
                .enumerate()
                .map(|(i, r)| r.iter().enumerate().map(|(j, x)| num(cfg, x, &format!("{path}[{i}][{j}]"))).collect())
                .collect::<Result<Vec<Vec<_>>, _>>()?;
            Ok(Matrix::from_rows(rows)?)
        }
    }
}

pub fn ext_elem(cfg: &FieldConfig, ext: &QuadExtension, e: &ExtSpec, path: &str) -> Result<ExtElement, CliError> {
    match e {
        ExtSpec::Base(a) => Ok(ext.from_f(num(cfg, a, path)?)),
        ExtSpec::Pair([a, b]) => Ok(ext.elem(num(cfg, a, &format!("{path}[0]"))?, num(cfg, b, &format!("{path}[1]"))?)),
    }
}

pub fn mat_e(cfg: &FieldConfig, m: &MatESpec, path: &str) -> Result<MatE, CliError> {
    let ext = cfg.ext();
    match m {
        MatESpec::Scalar(x) => Ok(Matrix::diag(&[ext_elem(cfg, &ext, x, path)?])),
        MatESpec::Rows(rows) => {
            square(rows, path)?;
            let rows = rows
                .iter()
                .enumerate()
                .map(|(i, r)| r.iter().enumerate().map(|(j, x)| ext_elem(cfg, &ext, x, &format!("{path}[{i}][{j}]"))).collect())
                .collect::<Result<Vec<Vec<_>>, _>>()?;
            Ok(Matrix::from_rows(rows)?)
        }
    }
}

/// A parsed point on one of the two sides.
#[derive(Clone, Debug)]
pub enum Element {
    S(LieS),
    Prime(LieSPrime),
}

impl Element {
    pub fn n(&self) -> usize {
        match self {
            Element::S(x) => x.n(),
            Element::Prime(y) => y.n(),
        }
    }
}

pub fn element(cfg: &FieldConfig, e: &ElementSpec, path: &str) -> Result<Element, CliError> {
    match e {
        ElementSpec::S { a1, a2 } => {
            let (a1, a2) = (mat_f(cfg, a1, &format!("{path}.a1"))?, mat_f(cfg, a2, &format!("{path}.a2"))?);
            if a1.rows() != a2.rows() {
                return Err(CliError::Usage(format!("{path}: a1 and a2 differ in size")));
            }
            Ok(Element::S(LieS::new(a1, a2)?))
        }
        ElementSpec::Prime { b } => Ok(Element::Prime(LieSPrime::new(mat_e(cfg, b, &format!("{path}.b"))?, cfg.gamma())?)),
    }
}

pub fn lie_s(cfg: &FieldConfig, e: &ElementSpec, path: &str) -> Result<LieS, CliError> {
    match element(cfg, e, path)? {
        Element::S(x) => Ok(x),
        Element::Prime(_) => Err(CliError::Usage(format!("{path}: expected a point {{a1, a2}} of s"))),
    }
}

pub fn lie_sprime(cfg: &FieldConfig, e: &ElementSpec, path: &str) -> Result<LieSPrime, CliError> {
    match element(cfg, e, path)? {
        Element::Prime(y) => Ok(y),
        Element::S(_) => Err(CliError::Usage(format!("{path}: expected a point {{b}} of s'"))),
    }
}

pub fn h_elem(cfg: &FieldConfig, h: &HSpec, path: &str) -> Result<HElem, CliError> {
    let (h1, h2) = (mat_f(cfg, &h.h1, &format!("{path}.h1"))?, mat_f(cfg, &h.h2, &format!("{path}.h2"))?);
    Ok(HElem::new(h1, h2)?)
}

/// Builds a coset function on the side of `origin`; `None` gives the
/// characteristic function of the standard lattice.
pub fn coset_function<P: CosetSpace>(
    cfg: &FieldConfig,
    origin: &P,
    terms: Option<&[TermSpec]>,
    path: &str,
    point: impl Fn(&ElementSpec, &str) -> Result<P, CliError>,
) -> Result<CosetFunction<P>, CliError> {
    let Some(terms) = terms else {
        return Ok(CosetFunction::standard(origin));
    };
    let p = cfg.p();
    let mut f = CosetFunction::zero(origin);
    for (i, t) in terms.iter().enumerate() {
        let tp = format!("{path}[{i}]");
        let c = match &t.coeff {
            Some(c) => coefficient(p, c, &format!("{tp}.coeff"))?,
            None => Cyclo::one(p),
        };
        if t.mu8 >= 8 {
            return Err(CliError::Usage(format!("{tp}.mu8: expected an index in 0..8")));
        }
        let c = c * Cyclo::mu8(p, t.mu8);
        let w = match &t.w {
            Some(w) => point(w, &format!("{tp}.w"))?,
            None => origin.origin(),
        };
        let center = match &t.center {
            Some(x) => point(x, &format!("{tp}.center"))?,
            None => origin.origin(),
        };
        f.push(c, w, center, t.scale);
    }
    Ok(f)
}
