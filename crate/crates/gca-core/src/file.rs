//! JSON presentation files.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::algebra::{Algebra, Generator};
use crate::coeff::Field;
use crate::error::{GcaError, Result};
use crate::parse::parse_elem;
use crate::presentation::Presentation;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeneratorSpec {
    pub name: String,
    pub degree: i32,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PresentationFile {
    pub field: Field,
    #[serde(default)]
    pub units: Vec<String>,
    pub generators: Vec<GeneratorSpec>,
    #[serde(default)]
    pub differential: BTreeMap<String, String>,
}

impl PresentationFile {
    pub fn from_json(s: &str) -> Result<PresentationFile> {
        serde_json::from_str(s).map_err(|e| GcaError::Parse { line: e.line(), col: e.column(), msg: e.to_string() })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data serializes")
    }

    pub fn build(&self) -> Result<Presentation> {
        let gens = self.generators.iter().map(|g| Generator::new(g.name.clone(), g.degree)).collect();
        let alg = Algebra::with_units(self.field, gens, &self.units)?;
        let mut diff = Vec::new();
        for (name, poly) in &self.differential {
            let e = parse_elem(&alg, poly).map_err(|e| match e {
                GcaError::Parse { line, col, msg } => GcaError::Parse { line, col, msg: format!("in d({name}): {msg}") },
                other => other,
            })?;
            diff.push((name.clone(), e));
        }
        Presentation::from_names(alg, diff)
    }

    pub fn from_presentation(p: &Presentation) -> PresentationFile {
        let alg: &Arc<Algebra> = p.algebra();
        PresentationFile {
            field: alg.field(),
            units: alg.unit_strings(),
            generators: alg
                .generators()
                .iter()
                .map(|g| GeneratorSpec { name: g.name.clone(), degree: g.degree })
                .collect(),
            differential: p.diff_table().into_iter().filter(|(_, v)| v != "0").collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let json = r#"{"field":"Q","units":["1+x"],
            "generators":[{"name":"x","degree":0},{"name":"y","degree":-1}],
            "differential":{"y":"x^2/(1+x) - x"}}"#;
        let f = PresentationFile::from_json(json).unwrap();
        let p = f.build().unwrap();
        let back = PresentationFile::from_presentation(&p);
        let p2 = back.build().unwrap();
        assert_eq!(p.diff_by_name("y").unwrap().to_string(), p2.diff_by_name("y").unwrap().to_string());
        assert!(p.check_d_squared().passed());
    }
}
