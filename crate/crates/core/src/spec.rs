//! JSON documents describing groups, torus extensions and patch cocycles.
//!
//! ```json
//! {"format": "catalog", "name": "Q8"}
//! {"format": "perm", "degree": 3, "generators": [[1, 0, 2], [1, 2, 0]]}
//! {"format": "table", "table": [[0, 1], [1, 0]], "names": ["1", "a"]}
//!
//! {"rank": 1, "finite": {"format": "catalog", "name": "Z2"},
//!  "action": {"a": [[-1]]}, "quotient": [{"t": ["1/2"], "f": "1"}]}
//!
//! {"a12": [{"time": "0", "t": ["0"], "f": "1"}, {"time": "1", "t": ["1"], "f": "1"}],
//!  "a13": [...], "a23": [...]}
//! ```
//!
//! Rationals are strings `"p/q"` or integers. An extension document may
//! instead be `{"catalog": "O2"}`.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::clutching::{PatchCocycle, PlPath};
use crate::error::{Error, Result};
use crate::group::catalog;
use crate::group::FiniteGroup;
use crate::torus::{parse_rational, Rational, TorusExtension};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "format", rename_all = "lowercase", deny_unknown_fields)]
pub enum GroupSpec {
    Catalog {
        name: String,
    },
    Table {
        table: Vec<Vec<usize>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        names: Option<Vec<String>>,
    },
    Perm {
        degree: usize,
        generators: Vec<Vec<usize>>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuotientSpec {
    pub t: Vec<String>,
    pub f: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExtensionSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub catalog: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rank: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub finite: Option<GroupSpec>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub action: BTreeMap<String, Vec<Vec<i64>>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub quotient: Vec<QuotientSpec>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BreakpointSpec {
    pub time: String,
    pub t: Vec<String>,
    pub f: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CocycleSpec {
    pub a12: Vec<BreakpointSpec>,
    pub a13: Vec<BreakpointSpec>,
    pub a23: Vec<BreakpointSpec>,
}

fn from_json<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| {
        let location = if e.line() == 0 {
            "document".to_string()
        } else {
            format!("line {} column {}", e.line(), e.column())
        };
        Error::parse(location, e.to_string())
    })
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path)
        .map_err(|e| Error::parse(path.display().to_string(), e.to_string()))
}

fn at(location: String) -> impl Fn(Error) -> Error {
    move |e| match e {
        Error::Parse { location: inner, message } => {
            Error::parse(format!("{location}: {inner}"), message)
        }
        other => other,
    }
}

fn rationals(items: &[String], location: &str) -> Result<Vec<Rational>> {
    items
        .iter()
        .enumerate()
        .map(|(i, s)| parse_rational(s).map_err(at(format!("{location}[{i}]"))))
        .collect()
}

fn element(g: &FiniteGroup, label: &str, location: &str) -> Result<usize> {
    g.element(label)
        .ok_or_else(|| Error::parse(location, format!("unknown element '{label}'")))
}

impl GroupSpec {
    pub fn build(&self) -> Result<FiniteGroup> {
        match self {
            GroupSpec::Catalog { name } => catalog::group(name),
            GroupSpec::Table { table, names } => FiniteGroup::from_table(table.clone(), names.clone()),
            GroupSpec::Perm { degree, generators } => FiniteGroup::from_permutations(*degree, generators),
        }
    }

    /// Explicit table with element names.
    pub fn of(g: &FiniteGroup) -> Self {
        GroupSpec::Table {
            table: g.table_rows(),
            names: Some(g.names().to_vec()),
        }
    }
}

impl ExtensionSpec {
    pub fn build(&self) -> Result<TorusExtension> {
        if let Some(name) = &self.catalog {
            return crate::torus::catalog::extension(name);
        }
        let rank = self.rank.ok_or_else(|| Error::parse("rank", "missing field"))?;
        let finite = self
            .finite
            .as_ref()
            .ok_or_else(|| Error::parse("finite", "missing field"))?
            .build()
            .map_err(at("finite".into()))?;
        let mut generators = Vec::new();
        for (label, m) in &self.action {
            let g = element(&finite, label, &format!("action.{label}"))?;
            generators.push((g, m.clone()));
        }
        let mut quotient = Vec::new();
        for (i, q) in self.quotient.iter().enumerate() {
            let loc = format!("quotient[{i}]");
            let t = rationals(&q.t, &format!("{loc}.t"))?;
            quotient.push((t, element(&finite, &q.f, &format!("{loc}.f"))?));
        }
        let name = self.name.clone().unwrap_or_else(|| "custom".to_string());
        TorusExtension::from_generators(name, rank, finite, &generators, quotient)
    }

    /// Full description listing the matrix of every finite element.
    pub fn of(ext: &TorusExtension) -> Self {
        let f = ext.finite();
        ExtensionSpec {
            catalog: None,
            name: Some(ext.name().to_string()),
            rank: Some(ext.rank()),
            finite: Some(GroupSpec::of(f)),
            action: (0..f.order())
                .map(|g| (f.name(g).to_string(), ext.action_rows(g).to_vec()))
                .collect(),
            quotient: ext
                .quotient_generators()
                .iter()
                .map(|(t, g)| QuotientSpec {
                    t: t.iter().map(ToString::to_string).collect(),
                    f: f.name(*g).to_string(),
                })
                .collect(),
        }
    }
}

fn build_path(ext: &TorusExtension, points: &[BreakpointSpec], arc: &str) -> Result<PlPath> {
    let mut label = None;
    let mut breakpoints = Vec::new();
    for (i, p) in points.iter().enumerate() {
        let loc = format!("{arc}[{i}]");
        let time = parse_rational(&p.time).map_err(at(format!("{loc}.time")))?;
        let t = rationals(&p.t, &format!("{loc}.t"))?;
        let f = element(ext.finite(), &p.f, &format!("{loc}.f"))?;
        if *label.get_or_insert(f) != f {
            return Err(Error::parse(loc, "the finite part must be constant along an arc"));
        }
        breakpoints.push((time, t));
    }
    PlPath::new(breakpoints, label.unwrap_or(0)).map_err(|e| Error::parse(arc, e.to_string()))
}

fn path_spec(ext: &TorusExtension, p: &PlPath) -> Vec<BreakpointSpec> {
    p.breakpoints()
        .map(|(time, t)| BreakpointSpec {
            time: time.to_string(),
            t: t.iter().map(ToString::to_string).collect(),
            f: ext.finite().name(p.label()).to_string(),
        })
        .collect()
}

impl CocycleSpec {
    pub fn build(&self, ext: &TorusExtension) -> Result<PatchCocycle> {
        PatchCocycle::new(
            ext,
            build_path(ext, &self.a12, "a12")?,
            build_path(ext, &self.a13, "a13")?,
            build_path(ext, &self.a23, "a23")?,
        )
    }

    pub fn of(ext: &TorusExtension, c: &PatchCocycle) -> Self {
        CocycleSpec {
            a12: path_spec(ext, &c.a12),
            a13: path_spec(ext, &c.a13),
            a23: path_spec(ext, &c.a23),
        }
    }
}

pub fn parse_group_str(text: &str) -> Result<FiniteGroup> {
    from_json::<GroupSpec>(text)?.build()
}

pub fn parse_extension_str(text: &str) -> Result<TorusExtension> {
    from_json::<ExtensionSpec>(text)?.build()
}

pub fn parse_cocycle_str(ext: &TorusExtension, text: &str) -> Result<PatchCocycle> {
    from_json::<CocycleSpec>(text)?.build(ext)
}

pub fn parse_group(path: &Path) -> Result<FiniteGroup> {
    parse_group_str(&read(path)?)
}

pub fn parse_extension(path: &Path) -> Result<TorusExtension> {
    parse_extension_str(&read(path)?)
}

pub fn parse_cocycle(ext: &TorusExtension, path: &Path) -> Result<PatchCocycle> {
    parse_cocycle_str(ext, &read(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clutching::{clutch, validate, Winding};
    use crate::group::catalog::STANDARD_CORPUS;
    use crate::torus::catalog::{extension, EXTENSIONS};
    use num_bigint::BigInt;

    #[test]
    fn catalog_and_perm_groups() {
        let q8 = parse_group_str(r#"{"format": "catalog", "name": "Q8"}"#).unwrap();
        assert_eq!(q8.order(), 8);
        let s3 = parse_group_str(r#"{"format":"perm","degree":3,"generators":[[1,0,2],[1,2,0]]}"#)
            .unwrap();
        assert_eq!(s3.order(), 6);
        assert!(!s3.is_abelian());
    }

    #[test]
    fn group_round_trip() {
        for name in STANDARD_CORPUS {
            let g = catalog::group(name).unwrap();
            let text = serde_json::to_string(&GroupSpec::of(&g)).unwrap();
            let back = parse_group_str(&text).unwrap();
            assert_eq!(back.table_rows(), g.table_rows(), "{name}");
            assert_eq!(back.names(), g.names());
        }
    }

    #[test]
    fn group_errors_have_locations() {
        let e = parse_group_str("{\"format\": \"catalog\",\n \"name\": \"Q8\",}").unwrap_err();
        assert!(matches!(&e, Error::Parse { location, .. } if location.starts_with("line 2")), "{e}");
        let e = parse_group_str(r#"{"format": "catalog", "nme": "Q8"}"#).unwrap_err();
        assert!(e.to_string().contains("nme"), "{e}");
        let e = parse_group_str(r#"{"format": "table", "table": [[0, 1], [0, 1]]}"#).unwrap_err();
        assert!(matches!(e, Error::InvalidGroup(_)));
    }

    #[test]
    fn o2_extension() {
        let text = r#"{"name": "O2", "rank": 1, "finite": {"format": "catalog", "name": "Z2"},
                       "action": {"a": [[-1]]}}"#;
        let e = parse_extension_str(text).unwrap();
        assert_eq!(e.psi_star(1).to_rows(), vec![vec![BigInt::from(2)]]);
        let c = parse_extension_str(r#"{"catalog": "O2"}"#).unwrap();
        assert_eq!(c.action_rows(1), e.action_rows(1));
    }

    #[test]
    fn extension_errors() {
        let not_hom = r#"{"rank": 1, "finite": {"format": "catalog", "name": "Z3"},
                          "action": {"a": [[-1]]}}"#;
        assert!(matches!(parse_extension_str(not_hom), Err(Error::InvalidExtension(_))));
        let bad_t = r#"{"rank": 1, "finite": {"format": "catalog", "name": "Z2"},
                        "action": {"a": [[-1]]}, "quotient": [{"t": ["1/0"], "f": "1"}]}"#;
        let e = parse_extension_str(bad_t).unwrap_err();
        assert!(matches!(&e, Error::Parse { location, .. } if location.starts_with("quotient[0].t[0]")), "{e}");
        let bad_f = r#"{"rank": 1, "finite": {"format": "catalog", "name": "Z2"},
                        "action": {"b": [[-1]]}}"#;
        assert!(matches!(parse_extension_str(bad_f), Err(Error::Parse { .. })));
    }

    #[test]
    fn extension_round_trip() {
        for name in EXTENSIONS {
            let e = extension(name).unwrap();
            let text = serde_json::to_string(&ExtensionSpec::of(&e)).unwrap();
            let back = parse_extension_str(&text).unwrap();
            assert_eq!(ExtensionSpec::of(&back), ExtensionSpec::of(&e), "{name}");
            assert_eq!(back.central_subgroup(), e.central_subgroup());
        }
    }

    #[test]
    fn cocycle_round_trip_and_clutch() {
        let e = extension("O2").unwrap();
        let text = r#"{
            "a12": [{"time": "0", "t": ["0"], "f": "1"}, {"time": "1", "t": ["1"], "f": "1"}],
            "a13": [{"time": "0", "t": ["0"], "f": "1"}, {"time": "1/2", "t": ["3/2"], "f": "1"},
                    {"time": "1", "t": ["1"], "f": "1"}],
            "a23": [{"time": "0", "t": ["0"], "f": "1"}, {"time": "1", "t": ["0"], "f": "1"}]
        }"#;
        let c = parse_cocycle_str(&e, text).unwrap();
        assert!(validate(&e, &c).unwrap().passed());
        assert_eq!(clutch(&e, &c).unwrap().winding, Winding::Class(vec![BigInt::from(0)]));
        let again = serde_json::to_string(&CocycleSpec::of(&e, &c)).unwrap();
        let back = parse_cocycle_str(&e, &again).unwrap();
        assert_eq!(CocycleSpec::of(&e, &back), CocycleSpec::of(&e, &c));
    }

    #[test]
    fn cocycle_errors() {
        let e = extension("O2").unwrap();
        let mixed = r#"{
            "a12": [{"time": "0", "t": ["0"], "f": "1"}, {"time": "1", "t": ["0"], "f": "a"}],
            "a13": [{"time": "0", "t": ["0"], "f": "1"}, {"time": "1", "t": ["0"], "f": "1"}],
            "a23": [{"time": "0", "t": ["0"], "f": "1"}, {"time": "1", "t": ["0"], "f": "1"}]
        }"#;
        let err = parse_cocycle_str(&e, mixed).unwrap_err();
        assert!(matches!(&err, Error::Parse { location, .. } if location == "a12[1]"), "{err}");
        let bad_time = mixed.replace(r#""f": "a""#, r#""f": "1""#).replace(r#""time": "1", "t": ["0"], "f": "1"}],
            "a13""#, r#""time": "2", "t": ["0"], "f": "1"}],
            "a13""#);
        assert!(matches!(parse_cocycle_str(&e, &bad_time), Err(Error::Parse { .. })));
    }
}
