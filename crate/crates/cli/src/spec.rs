//! JSON file formats for channels, compounds, channel families and input
//! distributions.
//!
//! Files are first deserialised into raw shapes, which reports syntax and
//! type errors at their position. The raw shapes are then validated entry
//! by entry, and an invariant violation names the JSON path of the
//! offending entry together with the line and column where it starts.
//!
//! A channel file holds one of
//! - a single channel object,
//! - an array of channel objects (a literal compound),
//! - `{"members": [...], "net": {"tau": .., "seed": .., "family": ..}}`.
//!
//! A channel object is either joint, `{"dims": [dB, dE], "outputs": [..]}`,
//! with one `dB*dE` square matrix per input letter, or a product,
//! `{"bob": [..], "eve": [..]}`. Matrix entries are numbers or `[re, im]`
//! pairs.

use std::path::Path;

use qbclab_core::channels::{
    ChannelFamily, CompoundSet, CqChannel, CqqBroadcastChannel, DepolarizingFamily, FiniteFamily, Provenance,
};
use qbclab_core::linalg::{ComplexOperator, DensityOperator, C64};
use qbclab_core::regions::FactorizedInput;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{CliError, CliResult};
use crate::locate::{locate, JsonPath};
use crate::output::canonical_json;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
enum Entry {
    Real(f64),
    Complex([f64; 2]),
}

impl Entry {
    fn value(self) -> C64 {
        match self {
            Entry::Real(re) => C64::new(re, 0.0),
            Entry::Complex([re, im]) => C64::new(re, im),
        }
    }

    fn canonical(z: C64) -> Self {
        let clean = |x: f64| if x == 0.0 { 0.0 } else { x };
        if z.im == 0.0 {
            Entry::Real(clean(z.re))
        } else {
            Entry::Complex([clean(z.re), clean(z.im)])
        }
    }
}

type RawMatrix = Vec<Vec<Entry>>;

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawChannel {
    #[serde(skip_serializing_if = "Option::is_none")]
    dims: Option<[usize; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    outputs: Option<Vec<RawMatrix>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    bob: Option<Vec<RawMatrix>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    eve: Option<Vec<RawMatrix>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct NetTag {
    tau: f64,
    seed: u64,
    #[serde(default = "external_family")]
    family: String,
}

fn external_family() -> String {
    "external".into()
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCompound {
    members: Vec<RawChannel>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    net: Option<NetTag>,
}

#[derive(Deserialize)]
#[serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)]
enum RawFamily {
    Depolarizing {
        #[serde(default)]
        p_min: f64,
        #[serde(default = "one")]
        p_max: f64,
    },
    Finite {
        members: Vec<RawChannel>,
    },
}

fn one() -> f64 {
    1.0
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawInput {
    #[serde(default = "one_block")]
    l: usize,
    q: Vec<f64>,
    r: Vec<Vec<f64>>,
    t: Vec<Vec<f64>>,
}

fn one_block() -> usize {
    1
}

/// A validation failure and the JSON path of the offending entry.
struct Invalid {
    path: JsonPath,
    message: String,
}

fn invalid(path: &JsonPath, err: impl std::fmt::Display) -> Invalid {
    Invalid {
        path: path.clone(),
        message: err.to_string(),
    }
}

fn state(rows: &RawMatrix, path: &JsonPath) -> Result<DensityOperator, Invalid> {
    let rows: Vec<Vec<C64>> = rows.iter().map(|r| r.iter().map(|e| e.value()).collect()).collect();
    ComplexOperator::from_rows(&rows)
        .and_then(DensityOperator::new)
        .map_err(|e| invalid(path, e))
}

fn states(list: &[RawMatrix], path: &JsonPath) -> Result<Vec<DensityOperator>, Invalid> {
    list.iter().enumerate().map(|(i, m)| state(m, &path.index(i))).collect()
}

fn channel(raw: &RawChannel, path: &JsonPath) -> Result<CqqBroadcastChannel, Invalid> {
    match raw {
        RawChannel {
            dims: Some([db, de]),
            outputs: Some(outputs),
            bob: None,
            eve: None,
        } => {
            let outputs = states(outputs, &path.key("outputs"))?;
            CqqBroadcastChannel::new(outputs, (*db, *de)).map_err(|e| invalid(path, e))
        }
        RawChannel {
            dims: None,
            outputs: None,
            bob: Some(bob),
            eve: Some(eve),
        } => {
            let bob = CqChannel::new(states(bob, &path.key("bob"))?).map_err(|e| invalid(&path.key("bob"), e))?;
            let eve = CqChannel::new(states(eve, &path.key("eve"))?).map_err(|e| invalid(&path.key("eve"), e))?;
            CqqBroadcastChannel::product(&bob, &eve).map_err(|e| invalid(path, e))
        }
        _ => Err(invalid(path, "a channel needs either `dims` with `outputs`, or `bob` with `eve`")),
    }
}

fn channels(list: &[RawChannel], path: &JsonPath) -> Result<Vec<CqqBroadcastChannel>, Invalid> {
    list.iter().enumerate().map(|(k, c)| channel(c, &path.index(k))).collect()
}

fn compound(raw: &RawCompound) -> Result<CompoundSet, Invalid> {
    let root = JsonPath::root();
    let provenance = match &raw.net {
        None => Provenance::Literal,
        Some(tag) => {
            if !(tag.tau > 0.0 && tag.tau.is_finite()) {
                return Err(invalid(
                    &root.key("net").key("tau"),
                    format!("invariant `net fineness` violated: tau = {} must be positive", tag.tau),
                ));
            }
            Provenance::Net {
                tau: tag.tau,
                seed: tag.seed,
                family: tag.family.clone(),
            }
        }
    };
    let members = channels(&raw.members, &root.key("members"))?;
    CompoundSet::with_provenance(members, provenance).map_err(|e| invalid(&root.key("members"), e))
}

fn raw_matrix(state: &DensityOperator) -> RawMatrix {
    let m = state.matrix();
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| Entry::canonical(m[(i, j)])).collect())
        .collect()
}

fn raw_compound(compound: &CompoundSet) -> RawCompound {
    let net = match compound.provenance() {
        Provenance::Literal => None,
        Provenance::Net { tau, seed, family } => Some(NetTag {
            tau: *tau,
            seed: *seed,
            family: family.clone(),
        }),
    };
    let members = compound
        .members()
        .iter()
        .map(|c| {
            let (db, de) = c.dims();
            RawChannel {
                dims: Some([db, de]),
                outputs: Some(c.outputs().iter().map(raw_matrix).collect()),
                ..RawChannel::default()
            }
        })
        .collect();
    RawCompound { members, net }
}

/// A parametric family to be discretised by a net.
#[derive(Clone, Debug)]
pub enum FamilySpec {
    Depolarizing(DepolarizingFamily),
    Finite(FiniteFamily),
}

impl FamilySpec {
    pub fn family(&self) -> &dyn ChannelFamily {
        match self {
            FamilySpec::Depolarizing(f) => f,
            FamilySpec::Finite(f) => f,
        }
    }
}

fn syntax_error(origin: &str, err: serde_json::Error) -> CliError {
    CliError::Spec {
        origin: origin.to_string(),
        message: err.to_string(),
    }
}

fn validation_error(text: &str, origin: &str, err: Invalid) -> CliError {
    let place = match locate(text, &err.path) {
        Some((line, column)) => format!("{} (line {line} column {column})", err.path),
        None => err.path.to_string(),
    };
    CliError::Spec {
        origin: origin.to_string(),
        message: format!("{place}: {}", err.message),
    }
}

fn parse_as<T: serde::de::DeserializeOwned>(text: &str, origin: &str) -> CliResult<T> {
    serde_json::from_str(text).map_err(|e| syntax_error(origin, e))
}

/// Parses a channel file into a validated compound set.
pub fn parse_compound(text: &str, origin: &str) -> CliResult<CompoundSet> {
    let shape: Value = parse_as(text, origin)?;
    let validated = match &shape {
        Value::Array(_) => {
            let list: Vec<RawChannel> = parse_as(text, origin)?;
            channels(&list, &JsonPath::root())
                .and_then(|members| CompoundSet::new(members).map_err(|e| invalid(&JsonPath::root(), e)))
        }
        Value::Object(map) if map.contains_key("members") => compound(&parse_as(text, origin)?),
        Value::Object(_) => channel(&parse_as(text, origin)?, &JsonPath::root()).map(CompoundSet::singleton),
        _ => {
            return Err(CliError::Spec {
                origin: origin.into(),
                message: "expected a channel object, an array of channels or a compound object".into(),
            })
        }
    };
    validated.map_err(|e| validation_error(text, origin, e))
}

/// Parses a family file: `{"family": "depolarizing", "p_min": .., "p_max": ..}`
/// or `{"family": "finite", "members": [...]}`.
pub fn parse_family(text: &str, origin: &str) -> CliResult<FamilySpec> {
    let root = JsonPath::root();
    let validated = match parse_as(text, origin)? {
        RawFamily::Depolarizing { p_min, p_max } => DepolarizingFamily::new(p_min, p_max)
            .map(FamilySpec::Depolarizing)
            .map_err(|e| invalid(&root, e)),
        RawFamily::Finite { members } => channels(&members, &root.key("members")).and_then(|m| {
            FiniteFamily::new(m)
                .map(FamilySpec::Finite)
                .map_err(|e| invalid(&root.key("members"), e))
        }),
    };
    validated.map_err(|e| validation_error(text, origin, e))
}

/// Parses an input-distribution file `{"l": .., "q": .., "r": .., "t": ..}`.
pub fn parse_input(text: &str, origin: &str) -> CliResult<FactorizedInput> {
    let raw: RawInput = parse_as(text, origin)?;
    FactorizedInput::new(raw.l, raw.q, raw.r, raw.t).map_err(|e| validation_error(text, origin, invalid(&JsonPath::root(), e)))
}

/// The validated contents of one specification file.
#[derive(Clone, Debug)]
pub enum SpecFile {
    Compound(CompoundSet),
    Family(FamilySpec),
    Input(FactorizedInput),
}

/// Reads and validates specification files, classifying each by its
/// top-level keys.
pub fn parse_specs<P: AsRef<Path>>(paths: &[P]) -> CliResult<Vec<SpecFile>> {
    paths
        .iter()
        .map(|p| {
            let (text, origin) = read(p.as_ref())?;
            let shape: Value = parse_as(&text, &origin)?;
            let has = |key: &str| shape.as_object().is_some_and(|m| m.contains_key(key));
            if has("family") {
                parse_family(&text, &origin).map(SpecFile::Family)
            } else if has("q") {
                parse_input(&text, &origin).map(SpecFile::Input)
            } else {
                parse_compound(&text, &origin).map(SpecFile::Compound)
            }
        })
        .collect()
}

pub fn read(path: &Path) -> CliResult<(String, String)> {
    let origin = path.display().to_string();
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: origin.clone(),
        source,
    })?;
    Ok((text, origin))
}

pub fn load_compound(path: &Path) -> CliResult<CompoundSet> {
    let (text, origin) = read(path)?;
    parse_compound(&text, &origin)
}

pub fn load_family(path: &Path) -> CliResult<FamilySpec> {
    let (text, origin) = read(path)?;
    parse_family(&text, &origin)
}

pub fn load_input(path: &Path) -> CliResult<FactorizedInput> {
    let (text, origin) = read(path)?;
    parse_input(&text, &origin)
}

/// Canonical JSON of a compound in the `{"members": ..}` form.
pub fn compound_to_json(compound: &CompoundSet) -> String {
    canonical_json(&raw_compound(compound))
}

/// Canonical JSON of an input distribution.
pub fn input_to_json(input: &FactorizedInput) -> String {
    canonical_json(&RawInput {
        l: input.l,
        q: input.q.clone(),
        r: input.r.clone(),
        t: input.t.clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const BIT: &str = r#"{"dims": [2, 1], "outputs": [[[1, 0], [0, 0]], [[0, 0], [0, 1]]]}"#;

    #[test]
    fn singleton_channel_file() {
        let c = parse_compound(BIT, "bit").unwrap();
        assert_eq!(c.len(), 1);
        assert_eq!(c.dims(), (2, 1));
        assert_eq!(c.alphabet_size(), 2);
    }

    #[test]
    fn product_form_matches_joint_form() {
        let product = r#"{"bob": [[[1, 0], [0, 0]], [[0, 0], [0, 1]]], "eve": [[[1]], [[1]]]}"#;
        assert_eq!(parse_compound(product, "p").unwrap(), parse_compound(BIT, "j").unwrap());
    }

    #[test]
    fn complex_entries_are_accepted() {
        let plus_i = r#"{"dims": [2, 1], "outputs": [[[0.5, [0, -0.5]], [[0, 0.5], 0.5]]]}"#;
        let c = parse_compound(plus_i, "y").unwrap();
        assert_eq!(c.members()[0].output(0).matrix()[(0, 1)], C64::new(0.0, -0.5));
    }

    #[test]
    fn trace_violation_names_invariant_and_line() {
        let bad = "[\n  {\"dims\": [2, 1],\n   \"outputs\": [[[0.5, 0], [0, 0.4]]]}\n]";
        let err = parse_compound(bad, "bad.json").unwrap_err().to_string();
        assert!(err.contains("bad.json"), "{err}");
        assert!(err.contains("`trace`"), "{err}");
        assert!(err.contains("[0].outputs[0] (line 3 column 16)"), "{err}");
    }

    #[test]
    fn mismatched_members_are_rejected() {
        let text = format!(r#"{{"members": [{BIT}, {{"dims": [1, 1], "outputs": [[[1]], [[1]]]}}]}}"#);
        let err = parse_compound(&text, "m").unwrap_err().to_string();
        assert!(err.contains("uniform member shapes"), "{err}");
    }

    #[test]
    fn mixed_channel_forms_are_rejected() {
        let text = r#"{"dims": [1, 1], "outputs": [[[1]]], "bob": [[[1]]]}"#;
        assert!(parse_compound(text, "x").is_err());
    }

    #[test]
    fn net_tag_round_trips() {
        let text = format!(r#"{{"members": [{BIT}], "net": {{"tau": 0.1, "seed": 3}}}}"#);
        let c = parse_compound(&text, "n").unwrap();
        assert_eq!(c.tau(), Some(0.1));
        let again = parse_compound(&compound_to_json(&c), "again").unwrap();
        assert_eq!(again, c);
    }

    #[test]
    fn family_files() {
        assert!(matches!(
            parse_family(r#"{"family": "depolarizing", "p_max": 0.5}"#, "f").unwrap(),
            FamilySpec::Depolarizing(_)
        ));
        let finite = format!(r#"{{"family": "finite", "members": [{BIT}]}}"#);
        assert!(matches!(parse_family(&finite, "f").unwrap(), FamilySpec::Finite(_)));
        assert!(parse_family(r#"{"family": "depolarizing", "p_max": 2}"#, "f").is_err());
    }

    #[test]
    fn input_files_validate() {
        let ok = r#"{"q": [1], "r": [[0.5, 0.5]], "t": [[1, 0], [0, 1]]}"#;
        let input = parse_input(ok, "i").unwrap();
        assert_eq!(input.l, 1);
        assert_eq!(parse_input(&input_to_json(&input), "again").unwrap(), input);
        let bad = r#"{"q": [0.7], "r": [[0.5, 0.5]], "t": [[1, 0], [0, 1]]}"#;
        assert!(parse_input(bad, "i").is_err());
    }
}
