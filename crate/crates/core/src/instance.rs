//! JSON problem instances.

use num_bigint::BigInt;
use serde_json::{json, Value};

use crate::clipping::{Canonicalized, ClippedCone};
use crate::error::{Error, Result};
use crate::lattice::{group_closure, FiniteAction, QuadLattice};
use crate::linalg::Matrix;
use crate::polycone::Mode;
use crate::scalar::{rational_from_json, square_free_part, Rational};
use crate::symcone::{Factor, SymCone};

pub const SCHEMA: u64 = 1;
pub const DEFAULT_CAP: usize = 1000;

/// A parsed instance. The witness is checked against the clipped cone on
/// load.
#[derive(Debug, Clone)]
pub struct Instance {
    pub name: String,
    pub cone: ClippedCone,
    pub canon: Canonicalized,
    pub raw_roots: Vec<Vec<Rational>>,
    pub action: FiniteAction,
    pub generators: Vec<Matrix>,
    pub cap: usize,
    pub field: Option<u64>,
    pub walls: Vec<Vec<Rational>>,
}

fn bad(s: impl Into<String>) -> Error {
    Error::Parse(s.into())
}

fn vector(v: &Value, what: &str) -> Result<Vec<Rational>> {
    v.as_array()
        .ok_or_else(|| bad(format!("{what}: expected an array")))?
        .iter()
        .map(|x| rational_from_json(x).map_err(|e| bad(format!("{what}: {e}"))))
        .collect()
}

fn integer_vector(v: &Value, what: &str) -> Result<Vec<Rational>> {
    let out = vector(v, what)?;
    if out.iter().any(|x| !x.is_integer()) {
        return Err(bad(format!("{what}: entries must be integers")));
    }
    Ok(out)
}

fn matrix(v: &Value, what: &str, n: usize) -> Result<Matrix> {
    let rows = v.as_array().ok_or_else(|| bad(format!("{what}: expected rows")))?;
    let rows: Vec<Vec<Rational>> = rows.iter().map(|r| vector(r, what)).collect::<Result<_>>()?;
    if rows.len() != n || rows.iter().any(|r| r.len() != n) {
        return Err(bad(format!("{what}: expected a {n}x{n} matrix")));
    }
    Ok(Matrix::from_rows(rows))
}

fn sized(v: Vec<Rational>, n: usize, what: &str) -> Result<Vec<Rational>> {
    if v.len() != n {
        return Err(bad(format!("{what}: length {} but rank {n}", v.len())));
    }
    Ok(v)
}

impl Instance {
    pub fn parse(text: &str) -> Result<Self> {
        let v: Value = serde_json::from_str(text).map_err(|e| bad(format!("malformed JSON: {e}")))?;
        Self::from_json(&v)
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        if let Some(s) = v.get("schema") {
            if s.as_u64() != Some(SCHEMA) {
                return Err(bad(format!("unsupported schema {s}")));
            }
        }
        let name = v.get("name").and_then(Value::as_str).unwrap_or("unnamed").to_string();
        let n = v.get("rank").and_then(Value::as_u64).ok_or_else(|| bad("missing rank"))? as usize;
        let gram = matrix(v.get("gram").ok_or_else(|| bad("missing gram"))?, "gram", n)?;
        let lattice = QuadLattice::new(gram).map_err(|e| bad(format!("gram: {e}")))?;
        let factors: Vec<Factor> = v
            .get("factors")
            .and_then(Value::as_array)
            .ok_or_else(|| bad("missing factors"))?
            .iter()
            .map(Factor::from_json)
            .collect::<Result<_>>()?;
        if let Some(c) = factors.iter().flat_map(|f| f.coords.iter()).find(|&&c| c >= n) {
            return Err(bad(format!("factor coordinate {c} out of range")));
        }
        let sym = SymCone::new(lattice, factors);
        // layout problems are schema errors; form-level problems are left
        // for validation to report
        let structure = sym.validate();
        if let Some(c) = structure.checks.iter().find(|c| !c.passed && c.factor.is_none()) {
            return Err(bad(format!("factors: {} {}", c.name, c.detail)));
        }
        let raw_roots: Vec<Vec<Rational>> = match v.get("roots") {
            None => Vec::new(),
            Some(r) => r
                .as_array()
                .ok_or_else(|| bad("roots: expected an array"))?
                .iter()
                .map(|x| integer_vector(x, "root").and_then(|e| sized(e, n, "root")))
                .collect::<Result<_>>()?,
        };
        let witness = sized(vector(v.get("witness").ok_or_else(|| bad("missing witness"))?, "witness")?, n, "witness")?;
        let walls: Vec<Vec<Rational>> = match v.get("walls") {
            None => Vec::new(),
            Some(w) => w
                .as_array()
                .ok_or_else(|| bad("walls: expected an array"))?
                .iter()
                .map(|x| integer_vector(x, "wall").and_then(|e| sized(e, n, "wall")))
                .collect::<Result<_>>()?,
        };
        let field = match v.get("field").and_then(|f| f.get("d")) {
            None => None,
            Some(d) => {
                let d = d.as_u64().ok_or_else(|| bad("field.d must be a positive integer"))?;
                let (_, core) = square_free_part(&BigInt::from(d));
                if d < 2 || core != BigInt::from(d) {
                    return Err(bad(format!("field.d = {d} is not a square-free integer above 1")));
                }
                Some(d)
            }
        };
        let (generators, cap) = match v.get("group") {
            None => (Vec::new(), DEFAULT_CAP),
            Some(g) => {
                let gens = g
                    .get("generators")
                    .and_then(Value::as_array)
                    .ok_or_else(|| bad("group: missing generators"))?
                    .iter()
                    .map(|m| matrix(m, "generator", n))
                    .collect::<Result<Vec<_>>>()?;
                let cap = g.get("cap").map_or(Some(DEFAULT_CAP as u64), Value::as_u64).ok_or_else(|| bad("group.cap"))? as usize;
                (gens, cap)
            }
        };
        let action = if generators.is_empty() { FiniteAction::trivial(n) } else { group_closure(n, &generators, cap)? };
        let (cone, canon) = ClippedCone::new(sym, &raw_roots, witness)?;
        if !cone.member(&cone.witness, Mode::Interior)? {
            return Err(Error::InvalidCone("witness is not interior to the clipped cone".into()));
        }
        Ok(Instance { name, cone, canon, raw_roots, action, generators, cap, field, walls })
    }

    pub fn rank(&self) -> usize {
        self.cone.rank()
    }

    /// Same instance with another group.
    pub fn with_generators(&self, generators: Vec<Matrix>, cap: usize) -> Result<Self> {
        let action = if generators.is_empty() { FiniteAction::trivial(self.rank()) } else { group_closure(self.rank(), &generators, cap)? };
        Ok(Instance { action, generators, cap, ..self.clone() })
    }

    pub fn to_json(&self) -> Value {
        let mut v = json!({
            "schema": SCHEMA,
            "name": self.name,
            "rank": self.rank(),
            "gram": self.cone.lattice().gram().to_strings(),
            "factors": self.cone.ambient.factors.iter().map(Factor::to_json).collect::<Vec<_>>(),
            "roots": self.raw_roots.iter().map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>()).collect::<Vec<_>>(),
            "witness": self.cone.witness.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
        });
        if !self.generators.is_empty() {
            v["group"] = json!({"generators": self.generators.iter().map(Matrix::to_strings).collect::<Vec<_>>(), "cap": self.cap});
        }
        if let Some(d) = self.field {
            v["field"] = json!({"d": d});
        }
        if !self.walls.is_empty() {
            v["walls"] = self.walls.iter().map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>()).collect();
        }
        v
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SMALL: &str = r#"{"schema": 1, "rank": 3, "gram": [[0,1,0],[1,0,0],[0,0,-2]],
        "factors": [{"kind": "lorentz", "coords": [0,1,2], "h": [1,1,0]}],
        "roots": [[0,0,1]], "witness": ["2","1","-1"]}"#;

    #[test]
    fn parses_and_round_trips() {
        let i = Instance::parse(SMALL).unwrap();
        assert_eq!(i.rank(), 3);
        assert!(i.action.is_trivial());
        let again = Instance::from_json(&i.to_json()).unwrap();
        assert_eq!(again.cone, i.cone);
    }

    #[test]
    fn schema_errors() {
        assert!(matches!(Instance::parse("{"), Err(Error::Parse(_))));
        assert!(matches!(Instance::parse(&SMALL.replace("[0,1,2]", "[0,1,5]")), Err(Error::Parse(_))));
        assert!(matches!(Instance::parse(&SMALL.replace("\"schema\": 1", "\"schema\": 2")), Err(Error::Parse(_))));
        // witness on the wrong side of the only root is repaired by orientation, but
        // a witness outside the Lorentz cone is not
        assert!(matches!(Instance::parse(&SMALL.replace(r#"["2","1","-1"]"#, r#"["-2","-1","0"]"#)), Err(Error::InvalidCone(_))));
        assert!(matches!(Instance::parse(&SMALL.replace("[[0,0,1]]", "[[0,0,\"1/2\"]]")), Err(Error::Parse(_))));
    }
}
