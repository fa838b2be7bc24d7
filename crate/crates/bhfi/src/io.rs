//! Structure files and builtin constructors used by the CLI.
//!
//! A structure file looks like
//!
//! ```json
//! {"kind":"D","circle":{"k":1,"matching":[[1,3],[2,4]]},
//!  "generators":[{"label":"x","idem":[1]}],
//!  "ops":[{"src":"x","inputs":[],"out":[{"left_idem":[1],"moving":[[1,3]],"horizontal":[]}],"dst":"x"}]}
//! ```
//!
//! Points and pairs are 1-based. `idem` is the idempotent on the type D side
//! (the only side for kinds `D` and `A`); `in_idem` is the second side of a
//! `DA` or `DD` generator. Each op is a single basis term: `out` holds one
//! diagram, or two for `DD` (left factor, then the right factor read in the
//! opposite algebra), and is empty for kind `A`.

use std::collections::HashMap;
use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::algebra::Alg;
use crate::error::{Error, Result};
use crate::strands::{DiagramJson, Idempotent, PmcJson, PointedMatchedCircle, StrandsAlgebra};
use crate::structures::{check_structure, Arrow, Generator, Kind, Structure, NONE};

/// One generator in a structure file.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorJson {
    /// Label, unique within the file.
    pub label: String,
    /// Occupied pairs on the primary side.
    pub idem: Vec<usize>,
    /// Occupied pairs on the second side.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub in_idem: Option<Vec<usize>>,
}

/// One operation term in a structure file.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OpJson {
    /// Source label.
    pub src: String,
    /// Input diagrams.
    #[serde(default)]
    pub inputs: Vec<DiagramJson>,
    /// Output coefficient.
    #[serde(default)]
    pub out: Vec<DiagramJson>,
    /// Target label.
    pub dst: String,
}

/// A structure file.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructureJson {
    /// `D`, `A`, `DA` or `DD`.
    pub kind: String,
    /// The circle shared by all sides.
    pub circle: PmcJson,
    /// Generators.
    pub generators: Vec<GeneratorJson>,
    /// Operation terms.
    pub ops: Vec<OpJson>,
}

fn pairs_of(alg: &StrandsAlgebra, e: u32) -> Vec<usize> {
    alg.idem_set(e).pairs().iter().map(|p| p + 1).collect()
}

fn idem_of(alg: &StrandsAlgebra, pairs: &[usize]) -> Result<u32> {
    let p: Vec<usize> = pairs.iter().map(|p| p.wrapping_sub(1)).collect();
    if p.iter().any(|&x| x >= alg.pmc().num_pairs()) {
        return Err(Error::Parse(format!("pair out of range in {pairs:?}")));
    }
    alg.idempotent(Idempotent::from_pairs(&p)).ok_or_else(|| Error::Parse(format!("not an idempotent: {pairs:?}")))
}

fn base_algebra(s: &Structure) -> Result<Arc<StrandsAlgebra>> {
    let unsupported =
        || Error::InvalidArgument(format!("no file encoding for a {:?} structure over this algebra", s.kind));
    let out = match (s.kind, s.out.as_ref()) {
        (Kind::D | Kind::DA, Some(Alg::Strands(a))) => Some(a.clone()),
        (Kind::DD, Some(Alg::Tensor(x, y))) => match (&**x, &**y) {
            (Alg::Strands(a), Alg::Opposite(b)) if Arc::ptr_eq(a, b) || a.pmc() == b.pmc() => Some(a.clone()),
            _ => return Err(unsupported()),
        },
        (Kind::A, None) => None,
        _ => return Err(unsupported()),
    };
    match (out, s.inp.as_ref()) {
        (Some(a), Some(b)) if a.pmc() != b.pmc() => Err(unsupported()),
        (Some(a), _) => Ok(a),
        (None, Some(b)) => Ok(b.clone()),
        (None, None) => Err(unsupported()),
    }
}

/// Encodes a structure.
pub fn structure_to_json(s: &Structure) -> Result<StructureJson> {
    let alg = base_algebra(s)?;
    let kind = match s.kind {
        Kind::D => "D",
        Kind::A => "A",
        Kind::DA => "DA",
        Kind::DD => "DD",
        Kind::Chain => return Err(Error::InvalidArgument("chain complexes use the complex format".into())),
    };
    let tensor = s.out.as_ref().filter(|_| s.kind == Kind::DD);
    let generators = s
        .gens
        .iter()
        .map(|g| {
            let (idem, in_idem) = match s.kind {
                Kind::D => (pairs_of(&alg, g.out_idem), None),
                Kind::A => (pairs_of(&alg, g.in_idem), None),
                Kind::DA => (pairs_of(&alg, g.out_idem), Some(pairs_of(&alg, g.in_idem))),
                _ => {
                    let (l, r) = tensor.expect("DD").split(g.out_idem);
                    (pairs_of(&alg, l), Some(pairs_of(&alg, r)))
                }
            };
            GeneratorJson { label: g.label.clone(), idem, in_idem }
        })
        .collect();
    let ops = s
        .arrows
        .iter()
        .map(|a| {
            let out = match (s.kind, tensor) {
                (Kind::A, _) => Vec::new(),
                (Kind::DD, Some(t)) => {
                    let (l, r) = t.split(a.coef);
                    vec![alg.diagram_json(l), alg.diagram_json(r)]
                }
                _ => vec![alg.diagram_json(a.coef)],
            };
            OpJson {
                src: s.gens[a.src as usize].label.clone(),
                inputs: a.inputs.iter().map(|&x| alg.diagram_json(x)).collect(),
                out,
                dst: s.gens[a.dst as usize].label.clone(),
            }
        })
        .collect();
    Ok(StructureJson { kind: kind.into(), circle: PmcJson::from(alg.pmc()), generators, ops })
}

/// Decodes a structure. The result has consistent idempotents but its
/// structure relations are not checked here.
pub fn structure_from_json(j: &StructureJson) -> Result<Structure> {
    let pmc = PointedMatchedCircle::try_from(&j.circle).map_err(|e| Error::Parse(e.to_string()))?;
    let alg = Arc::new(StrandsAlgebra::new(pmc));
    let kind = match j.kind.as_str() {
        "D" => Kind::D,
        "A" => Kind::A,
        "DA" => Kind::DA,
        "DD" => Kind::DD,
        other => return Err(Error::Parse(format!("unknown kind {other}"))),
    };
    let out = match kind {
        Kind::D | Kind::DA => Some(Alg::Strands(alg.clone())),
        Kind::DD => Some(Alg::Tensor(Box::new(Alg::Strands(alg.clone())), Box::new(Alg::Opposite(alg.clone())))),
        _ => None,
    };
    let inp = matches!(kind, Kind::A | Kind::DA).then(|| alg.clone());
    let mut index = HashMap::new();
    let mut gens = Vec::with_capacity(j.generators.len());
    for (i, g) in j.generators.iter().enumerate() {
        if index.insert(g.label.as_str(), i as u32).is_some() {
            return Err(Error::Parse(format!("duplicate label {}", g.label)));
        }
        let first = idem_of(&alg, &g.idem)?;
        let second = match (kind, &g.in_idem) {
            (Kind::DA | Kind::DD, Some(p)) => idem_of(&alg, p)?,
            (Kind::DA | Kind::DD, None) => return Err(Error::Parse(format!("{} needs in_idem", g.label))),
            _ => NONE,
        };
        let (out_idem, in_idem) = match kind {
            Kind::D => (first, NONE),
            Kind::A => (NONE, first),
            Kind::DA => (first, second),
            _ => (out.as_ref().expect("DD").join(first, second), NONE),
        };
        gens.push(Generator { label: g.label.clone(), out_idem, in_idem });
    }
    let lookup = |l: &str| index.get(l).copied().ok_or_else(|| Error::Parse(format!("unknown generator {l}")));
    let mut arrows = Vec::with_capacity(j.ops.len());
    for op in &j.ops {
        let inputs: Vec<u32> = op.inputs.iter().map(|d| alg.diagram_from_json(d)).collect::<Result<_>>()?;
        if !inputs.is_empty() && inp.is_none() {
            return Err(Error::Parse("inputs on a structure without a type A side".into()));
        }
        let coef = match (kind, op.out.as_slice()) {
            (Kind::A, []) => NONE,
            (Kind::D | Kind::DA, [d]) => alg.diagram_from_json(d)?,
            (Kind::DD, [l, r]) => out.as_ref().expect("DD").join(alg.diagram_from_json(l)?, alg.diagram_from_json(r)?),
            _ => return Err(Error::Parse(format!("wrong number of output diagrams in op {} -> {}", op.src, op.dst))),
        };
        arrows.push(Arrow::with_inputs(lookup(&op.src)?, &inputs, coef, lookup(&op.dst)?));
    }
    Structure::new(kind, out, inp, gens, arrows).map_err(|e| match e {
        Error::RelationViolation(m) => Error::Parse(m),
        e => e,
    })
}

/// Reads a structure file and checks its relations.
pub fn load_structure(path: &Path) -> Result<Structure> {
    let text = std::fs::read_to_string(path)?;
    let j: StructureJson = serde_json::from_str(&text)?;
    let s = structure_from_json(&j)?;
    let v = check_structure(&s);
    if let Some(first) = v.first() {
        return Err(Error::RelationViolation(format!(
            "{}: {} violations, first: {}",
            path.display(),
            v.len(),
            first.message
        )));
    }
    Ok(s)
}

/// Writes a structure file.
pub fn save_structure(s: &Structure, path: &Path) -> Result<()> {
    let text = serde_json::to_string_pretty(&structure_to_json(s)?)?;
    std::fs::write(path, text + "\n")?;
    Ok(())
}

/// Builds a named standard object.
pub fn builtin(name: &str) -> Result<Structure> {
    use crate::standard::*;
    let genus = |prefix: &str| -> Option<usize> { name.strip_prefix(prefix)?.parse().ok() };
    match name {
        "cfd_inf" => return cfd_solid_torus(Framing::Infinity),
        "cfd_m1" => return cfd_solid_torus(Framing::MinusOne),
        "cfd0" => return cfd_solid_torus(Framing::Zero),
        _ => {}
    }
    if let Some(k) = genus("cfd0_k") {
        return cfd_zero_handlebody(k);
    }
    if let Some(k) = genus("cfa0_k") {
        return cfa_zero_handlebody(k);
    }
    if let Some(k) = genus("ddid_k") {
        return dd_identity(&split_algebra(k)?);
    }
    if let Some(k) = genus("azbar_k") {
        return cfda_azbar(&split_algebra(k)?);
    }
    if let Some(k) = genus("az_k") {
        return cfda_az(&split_algebra(k)?);
    }
    Err(Error::InvalidArgument(format!("unknown builtin {name}")))
}

/// Builtins written by `dump-standard`, with their file names.
pub fn standard_fixtures() -> Vec<(&'static str, &'static str)> {
    vec![
        ("cfd_inf", "cfd_inf.json"),
        ("cfd_m1", "cfd_m1.json"),
        ("cfd0", "cfd0.json"),
        ("cfd0_k2", "cfd0_genus2.json"),
        ("cfa0_k1", "cfa0_genus1.json"),
        ("cfa0_k2", "cfa0_genus2.json"),
        ("ddid_k1", "ddid_genus1.json"),
        ("az_k1", "cfda_az_genus1.json"),
        ("azbar_k1", "cfda_azbar_genus1.json"),
        ("az_k2", "cfda_az_genus2.json"),
        ("azbar_k2", "cfda_azbar_genus2.json"),
    ]
}

/// Structural equality up to arrow order: same kind, labels, idempotents and terms.
pub fn same_structure(a: &Structure, b: &Structure) -> bool {
    match (structure_to_json(a), structure_to_json(b)) {
        (Ok(x), Ok(y)) => {
            let key = |s: &StructureJson| {
                let mut ops: Vec<String> = s.ops.iter().map(|o| serde_json::to_string(o).unwrap_or_default()).collect();
                ops.sort();
                ops
            };
            x.kind == y.kind && x.circle == y.circle && x.generators == y.generators && key(&x) == key(&y)
        }
        _ => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtins_round_trip() {
        for (name, _) in standard_fixtures() {
            let s = builtin(name).unwrap();
            let j = structure_to_json(&s).unwrap();
            let text = serde_json::to_string(&j).unwrap();
            let back = structure_from_json(&serde_json::from_str(&text).unwrap()).unwrap();
            assert!(same_structure(&s, &back), "{name}");
            assert_eq!(s.arrows.len(), back.arrows.len(), "{name}");
        }
    }

    #[test]
    fn az_has_eight_generators() {
        let s = builtin("az_k1").unwrap();
        assert_eq!(structure_to_json(&s).unwrap().generators.len(), 8);
    }

    #[test]
    fn bad_files_are_parse_errors() {
        let mut j = structure_to_json(&builtin("cfd0").unwrap()).unwrap();
        j.ops[0].dst = "nope".into();
        assert!(matches!(structure_from_json(&j), Err(Error::Parse(_))));
        j.kind = "X".into();
        assert!(matches!(structure_from_json(&j), Err(Error::Parse(_))));
        assert!(builtin("cfd7").is_err());
    }
}
