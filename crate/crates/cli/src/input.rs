//! JSON input documents.

use corners::complex::{corpus, CornerComplex};
use corners::linalg::{fmt_q, parse_q, Matrix, Q};
use corners::model::ModelCorner;
use corners::poly::{germ_of, PolyMap};
use corners::CornerMapGerm;
use serde::Deserialize;
use serde_json::{json, Value};
use std::collections::BTreeMap;

#[derive(Debug)]
pub enum CliError {
    /// Bad input: exit code 2.
    Input(String),
    /// A negative mathematical verdict: exit code 1.
    Negative(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 2,
            CliError::Negative(_) => 1,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Input(m) => write!(f, "input error: {m}"),
            CliError::Negative(m) => f.write_str(m),
        }
    }
}

impl From<corners::Error> for CliError {
    fn from(e: corners::Error) -> Self {
        use corners::Error::*;
        match e {
            NotSubmersion | NotJoyceSmooth | NotTransverse | NoMediator(_) | HypothesisNotMet(_)
            | InternalInvariantViolation(_) => CliError::Negative(e.to_string()),
            _ => CliError::Input(e.to_string()),
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

fn bad(msg: impl Into<String>) -> CliError {
    CliError::Input(msg.into())
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelDoc {
    pub dim: usize,
    pub depth: usize,
}

impl ModelDoc {
    pub fn model(self) -> CliResult<ModelCorner> {
        Ok(ModelCorner::new(self.dim, self.depth)?)
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum MapDoc {
    Poly {
        source: ModelDoc,
        target: ModelDoc,
        components: Vec<String>,
    },
    Germ {
        source: ModelDoc,
        target: ModelDoc,
        #[serde(rename = "P", default)]
        p: Option<Vec<usize>>,
        #[serde(rename = "Pi", default)]
        pi: BTreeMap<String, usize>,
        jacobian: Vec<Vec<Value>>,
    },
}

fn rational(v: &Value) -> CliResult<Q> {
    match v {
        Value::String(s) => parse_q(s.trim()).ok_or_else(|| bad(format!("not a rational: {s:?}"))),
        Value::Number(n) => n
            .as_i64()
            .map(|i| Q::from_integer(i.into()))
            .ok_or_else(|| bad(format!("numbers must be integers or \"p/q\" strings, got {n}"))),
        other => Err(bad(format!("not a rational: {other}"))),
    }
}

impl MapDoc {
    pub fn poly(&self) -> CliResult<PolyMap> {
        match self {
            MapDoc::Poly { source, target, components } => {
                let refs: Vec<&str> = components.iter().map(|s| s.as_str()).collect();
                Ok(PolyMap::parse(source.model()?, target.model()?, &refs)?)
            }
            MapDoc::Germ { .. } => Err(bad("expected a polynomial map with \"components\"")),
        }
    }

    /// The germ at the origin; polynomial maps must be smooth there.
    pub fn resolve(&self) -> CliResult<CornerMapGerm> {
        match self {
            MapDoc::Poly { .. } => Ok(germ_of(&self.poly()?)?),
            MapDoc::Germ { source, target, p, pi, jacobian } => {
                let (s, t) = (source.model()?, target.model()?);
                let mut transfer = BTreeMap::new();
                for (j, &i) in pi {
                    let j: usize = j.trim().parse().map_err(|_| bad(format!("bad key in \"Pi\": {j:?}")))?;
                    transfer.insert(j, i);
                }
                if let Some(p) = p {
                    let mut listed = p.clone();
                    listed.sort_unstable();
                    listed.dedup();
                    if listed.len() != p.len() || !listed.iter().eq(transfer.keys()) {
                        return Err(bad("\"P\" must list exactly the keys of \"Pi\""));
                    }
                }
                if jacobian.len() != t.dim {
                    return Err(bad(format!("jacobian has {} rows, target dimension is {}", jacobian.len(), t.dim)));
                }
                let rows = jacobian
                    .iter()
                    .map(|r| {
                        if r.len() != s.dim {
                            return Err(bad(format!("jacobian row has {} entries, expected {}", r.len(), s.dim)));
                        }
                        r.iter().map(rational).collect()
                    })
                    .collect::<CliResult<Vec<Vec<Q>>>>()?;
                Ok(CornerMapGerm::new(s, t, transfer, Matrix::from_rows(s.dim, rows))?)
            }
        }
    }
}

#[derive(Debug, Deserialize)]
pub struct PairDoc {
    pub f: MapDoc,
    pub g: MapDoc,
    #[serde(default)]
    pub orientations: Option<[i8; 3]>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IdentityDoc {
    pub identity: String,
    pub maps: Vec<MapDoc>,
    pub signs: Vec<i8>,
}

pub fn parse_json<T: serde::de::DeserializeOwned>(text: &str, what: &str) -> CliResult<T> {
    serde_json::from_str(text).map_err(|e| bad(format!("cannot read {what}: {e}")))
}

pub fn read_input(path: Option<&std::path::Path>) -> CliResult<String> {
    use std::io::Read;
    match path {
        Some(p) if p.as_os_str() != "-" => {
            std::fs::read_to_string(p).map_err(|e| bad(format!("{}: {e}", p.display())))
        }
        _ => {
            let mut s = String::new();
            std::io::stdin().read_to_string(&mut s).map_err(|e| bad(format!("stdin: {e}")))?;
            Ok(s)
        }
    }
}

pub fn complex_from(text: Option<&str>, corpus_name: Option<&str>) -> CliResult<(String, CornerComplex)> {
    if let Some(name) = corpus_name {
        let c = corpus::by_name(name).ok_or_else(|| {
            let names: Vec<String> = corpus::all().into_iter().map(|(n, _)| n.to_string()).collect();
            bad(format!("unknown corpus complex {name:?}; known: {}", names.join(", ")))
        })?;
        return Ok((name.to_string(), c));
    }
    let c: CornerComplex = parse_json(text.unwrap_or_default(), "complex")?;
    c.validate()?;
    Ok(("input".into(), c))
}

pub fn model_json(m: ModelCorner) -> Value {
    json!({ "dim": m.dim, "depth": m.depth })
}

/// The germ in the input schema, so output can be fed back in.
pub fn germ_json(g: &CornerMapGerm) -> Value {
    let pi: BTreeMap<String, usize> = g.transfer().iter().map(|(j, i)| (j.to_string(), *i)).collect();
    let jac: Vec<Vec<String>> =
        (0..g.target().dim).map(|r| g.jacobian().row(r).iter().map(fmt_q).collect()).collect();
    json!({
        "source": model_json(g.source()),
        "target": model_json(g.target()),
        "P": g.transfer().keys().collect::<Vec<_>>(),
        "Pi": pi,
        "jacobian": jac,
    })
}

pub fn jacobian_text(g: &CornerMapGerm) -> String {
    let rows: Vec<String> = (0..g.target().dim)
        .map(|r| g.jacobian().row(r).iter().map(fmt_q).collect::<Vec<_>>().join(" "))
        .collect();
    format!("[{}]", rows.join("; "))
}

pub fn germ_text(g: &CornerMapGerm) -> String {
    let pi: Vec<String> = g.transfer().iter().map(|(j, i)| format!("{j}->{i}")).collect();
    format!("{} -> {}, Pi {{{}}}, J = {}", g.source(), g.target(), pi.join(", "), jacobian_text(g))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn germ_round_trip() {
        let doc = r#"{"source":{"dim":2,"depth":1},"target":{"dim":1,"depth":1},
                      "P":[1],"Pi":{"1":1},"jacobian":[["1/2",0]]}"#;
        let m: MapDoc = parse_json(doc, "map").unwrap();
        let g = m.resolve().unwrap();
        let back: MapDoc = serde_json::from_value(germ_json(&g)).unwrap();
        assert_eq!(back.resolve().unwrap(), g);
    }

    #[test]
    fn rejects_inconsistent_p() {
        let doc = r#"{"source":{"dim":1,"depth":1},"target":{"dim":1,"depth":1},
                      "P":[],"Pi":{"1":1},"jacobian":[["1"]]}"#;
        let m: MapDoc = parse_json(doc, "map").unwrap();
        assert!(matches!(m.resolve(), Err(CliError::Input(_))));
    }
}
