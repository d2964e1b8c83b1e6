//! Run configuration: flags take precedence over the (flat key=value)
//! config file, which takes precedence over defaults.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use num_bigint::BigInt;
use num_rational::BigRational;
use serde_json::{json, Value};

use wt1::chars::DirichletCharacter;
use wt1::error::Error;
use wt1::linv::{PUnitData, SigmaAction};

use crate::GlobalOpts;

pub struct RunConfig {
    pub char_spec: String,
    pub chi: DirichletCharacter,
    pub embed_index: u64,
    pub p: u64,
    pub prec: u32,
    pub mx: usize,
    pub jet: usize,
    pub nmax: usize,
    pub units_path: Option<PathBuf>,
}

fn read_kv_file(path: &Path) -> wt1::Result<BTreeMap<String, String>> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::InvalidInput(format!("cannot read {}: {}", path.display(), e)))?;
    let mut map = BTreeMap::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((k, v)) = line.split_once('=') else {
            return Err(Error::InvalidInput(format!(
                "{}:{}: expected key=value",
                path.display(),
                i + 1
            )));
        };
        map.insert(k.trim().to_string(), v.trim().to_string());
    }
    Ok(map)
}

fn parse_from<T: std::str::FromStr>(map: &BTreeMap<String, String>, key: &str) -> wt1::Result<Option<T>> {
    match map.get(key) {
        None => Ok(None),
        Some(v) => v
            .parse::<T>()
            .map(Some)
            .map_err(|_| Error::InvalidInput(format!("config key {}: bad value \"{}\"", key, v))),
    }
}

/// "kronecker:D" or "mod:N:g1=e1,g2=e2,order=m[,embed=j]".
pub fn parse_char_spec(spec: &str) -> wt1::Result<(DirichletCharacter, u64)> {
    if let Some(d) = spec.strip_prefix("kronecker:") {
        let d: i64 = d
            .parse()
            .map_err(|_| Error::InvalidInput(format!("bad discriminant in \"{}\"", spec)))?;
        return Ok((DirichletCharacter::kronecker(d)?, 1));
    }
    if let Some(rest) = spec.strip_prefix("mod:") {
        let Some((n, body)) = rest.split_once(':') else {
            return Err(Error::InvalidInput(format!(
                "expected mod:N:g1=e1,...,order=m in \"{}\"",
                spec
            )));
        };
        let modulus: u64 = n
            .parse()
            .map_err(|_| Error::InvalidInput(format!("bad modulus in \"{}\"", spec)))?;
        let mut gens = Vec::new();
        let mut order = None;
        let mut embed = 1u64;
        for part in body.split(',') {
            let Some((k, v)) = part.split_once('=') else {
                return Err(Error::InvalidInput(format!("bad item \"{}\" in \"{}\"", part, spec)));
            };
            let v: u64 = v
                .parse()
                .map_err(|_| Error::InvalidInput(format!("bad value \"{}\" in \"{}\"", v, spec)))?;
            match k {
                "order" => order = Some(v),
                "embed" => embed = v,
                g => {
                    let g: u64 = g.parse().map_err(|_| {
                        Error::InvalidInput(format!("bad generator \"{}\" in \"{}\"", g, spec))
                    })?;
                    gens.push((g, v));
                }
            }
        }
        let order =
            order.ok_or_else(|| Error::InvalidInput(format!("missing order=m in \"{}\"", spec)))?;
        return Ok((DirichletCharacter::tabulated(modulus, &gens, order)?, embed));
    }
    Err(Error::InvalidInput(format!(
        "unknown character spec \"{}\": use kronecker:D or mod:N:...",
        spec
    )))
}

impl RunConfig {
    pub fn resolve(opts: &GlobalOpts) -> wt1::Result<RunConfig> {
        let file = match &opts.config {
            Some(p) => read_kv_file(p)?,
            None => BTreeMap::new(),
        };
        let char_spec = opts
            .char_spec
            .clone()
            .or_else(|| file.get("char").cloned())
            .ok_or_else(|| Error::InvalidInput("no character given: use --char or a config file".into()))?;
        let p = opts
            .p
            .or(parse_from(&file, "p")?)
            .ok_or_else(|| Error::InvalidInput("no prime given: use --p or a config file".into()))?;
        let prec = opts.prec.or(parse_from(&file, "prec")?).unwrap_or(30);
        let mx = opts.mx.or(parse_from(&file, "mx")?).unwrap_or(8);
        let jet = opts.jet.or(parse_from(&file, "jet")?).unwrap_or(3);
        let nmax = opts.nmax.or(parse_from(&file, "nmax")?).unwrap_or(1000);
        let units_path = opts
            .units
            .clone()
            .or_else(|| file.get("units").map(PathBuf::from));

        let (chi, embed_index) = parse_char_spec(&char_spec)?;
        if p < 3 || p % 2 == 0 {
            return Err(Error::Precondition(format!("p = {} must be an odd prime", p)));
        }
        if !is_prime(p) {
            return Err(Error::Precondition(format!("p = {} is not prime", p)));
        }
        if chi.modulus() % p == 0 {
            return Err(Error::Precondition(format!(
                "p = {} divides the modulus {}",
                p,
                chi.modulus()
            )));
        }
        if !chi.is_odd() {
            return Err(Error::Precondition(format!(
                "the character \"{}\" is even; the working character must be odd",
                char_spec
            )));
        }
        if prec < 10 {
            return Err(Error::InvalidInput("precision below 10 digits is not useful".into()));
        }
        Ok(RunConfig {
            char_spec,
            chi,
            embed_index,
            p,
            prec,
            mx,
            jet,
            nmax,
            units_path,
        })
    }

    pub fn as_json(&self) -> Value {
        json!({
            "char": self.char_spec,
            "p": self.p,
            "prec": self.prec,
            "mx": self.mx,
            "jet": self.jet,
            "nmax": self.nmax,
            "embed": self.embed_index,
            "units": self.units_path.as_ref().map(|p| p.display().to_string()),
        })
    }

    pub fn load_units(&self) -> wt1::Result<Vec<PUnitData>> {
        let Some(path) = &self.units_path else {
            return Ok(Vec::new());
        };
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidInput(format!("cannot read {}: {}", path.display(), e)))?;
        let value: Value = serde_json::from_str(&text)
            .map_err(|e| Error::InvalidInput(format!("{}: bad JSON: {}", path.display(), e)))?;
        let entries = match value {
            Value::Array(v) => v,
            obj @ Value::Object(_) => vec![obj],
            _ => {
                return Err(Error::InvalidInput(format!(
                    "{}: expected a unit object or an array of them",
                    path.display()
                )))
            }
        };
        entries.iter().map(parse_unit_entry).collect()
    }
}

fn parse_unit_entry(v: &Value) -> wt1::Result<PUnitData> {
    let bad = |msg: &str| Error::InvalidInput(format!("unit data: {}", msg));
    let label = v
        .get("label")
        .and_then(Value::as_str)
        .unwrap_or("phi")
        .to_string();
    let coeffs = v
        .get("coeffs")
        .and_then(Value::as_array)
        .ok_or_else(|| bad("missing \"coeffs\" array"))?
        .iter()
        .map(|c| c.as_i64().map(BigInt::from).ok_or_else(|| bad("coefficients must be integers")))
        .collect::<wt1::Result<Vec<_>>>()?;
    let valuation = v
        .get("valuation")
        .and_then(Value::as_u64)
        .ok_or_else(|| bad("missing integer \"valuation\""))?;
    let sigma = match v.get("sigma") {
        None | Some(Value::Null) => None,
        Some(s) => {
            let poly = s
                .get("poly")
                .and_then(Value::as_array)
                .ok_or_else(|| bad("sigma needs a \"poly\" array of [num, den] pairs"))?
                .iter()
                .map(|pair| {
                    let arr = pair.as_array().filter(|a| a.len() == 2)
                        .ok_or_else(|| bad("sigma poly entries are [num, den] pairs"))?;
                    let n = arr[0].as_i64().ok_or_else(|| bad("bad numerator"))?;
                    let d = arr[1].as_i64().filter(|&d| d != 0).ok_or_else(|| bad("bad denominator"))?;
                    Ok(BigRational::new(BigInt::from(n), BigInt::from(d)))
                })
                .collect::<wt1::Result<Vec<_>>>()?;
            let artin_class = s
                .get("artin_class")
                .and_then(Value::as_u64)
                .ok_or_else(|| bad("sigma needs an integer \"artin_class\""))?;
            Some(SigmaAction { poly, artin_class })
        }
    };
    Ok(PUnitData {
        label,
        coeffs,
        valuation,
        sigma,
    })
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut f = 2;
    while f * f <= n {
        if n % f == 0 {
            return false;
        }
        f += 1;
    }
    true
}
