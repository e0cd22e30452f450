//! JSON file formats for posets, valuations, predicates, power elements and
//! state transformers, and canonical JSON output.
//!
//! A `"poset"` field (or `"source"`/`"target"`) is either an inline poset
//! object or a path, resolved relative to the file that mentions it.
//! Rationals are written `"p/q"` or as integers; predicate values may also
//! be `"inf"`.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Deserialize;
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::poset::FinitePoset;
use crate::powerdomain::{Flavor, PowerElement, StateTransformer};
use crate::predicate::{IntervalPredicate, Predicate, RangeMode};
use crate::rat::{fmt_rat, parse_rat, ExtRat, Interval, Rat};
use crate::valuation::Valuation;

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PosetSpec {
    elements: Vec<String>,
    #[serde(default)]
    covers: Vec<(String, String)>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum PosetRef {
    Path(String),
    Inline(PosetSpec),
}

#[derive(Deserialize)]
#[serde(untagged)]
enum Number {
    Text(String),
    Int(i64),
}

impl Number {
    fn rat(&self) -> Result<Rat> {
        match self {
            Number::Text(t) => parse_rat(t),
            Number::Int(n) => Ok(Rat::from_integer((*n).into())),
        }
    }

    fn ext(&self) -> Result<ExtRat> {
        match self {
            Number::Text(t) => ExtRat::parse(t),
            Number::Int(_) => self.rat().map(ExtRat::Fin),
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ValuationSpec {
    poset: Option<PosetRef>,
    mass: BTreeMap<String, Number>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PredicateSpec {
    poset: Option<PosetRef>,
    mode: Option<RangeMode>,
    values: Option<BTreeMap<String, Number>>,
    lower: Option<BTreeMap<String, Number>>,
    upper: Option<BTreeMap<String, Number>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PowerSpec {
    flavor: Option<Flavor>,
    poset: Option<PosetRef>,
    generators: Vec<ValuationSpec>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct TransformerSpec {
    flavor: Flavor,
    source: PosetRef,
    target: Option<PosetRef>,
    table: BTreeMap<String, PowerSpec>,
}

/// Reads input files, resolving poset references against a cap.
#[derive(Clone, Debug)]
pub struct Loader {
    pub cap: usize,
}

impl Default for Loader {
    fn default() -> Self {
        Loader {
            cap: crate::poset::DEFAULT_CAP,
        }
    }
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).map_err(|e| Error::Invalid(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::Invalid(format!("{}: {e}", path.display())))
}

fn base_dir(path: &Path) -> PathBuf {
    path.parent().map(Path::to_path_buf).unwrap_or_default()
}

impl Loader {
    pub fn new(cap: usize) -> Self {
        Loader { cap }
    }

    pub fn poset(&self, path: &Path) -> Result<FinitePoset> {
        let spec: PosetSpec = read_json(path)?;
        self.build_poset(&spec)
    }

    fn build_poset(&self, spec: &PosetSpec) -> Result<FinitePoset> {
        FinitePoset::new(&spec.elements, &spec.covers, self.cap)
    }

    fn resolve(&self, r: &PosetRef, dir: &Path) -> Result<FinitePoset> {
        match r {
            PosetRef::Inline(spec) => self.build_poset(spec),
            PosetRef::Path(p) => self.poset(&dir.join(p)),
        }
    }

    fn resolve_or(&self, r: Option<&PosetRef>, inherited: Option<&FinitePoset>, dir: &Path) -> Result<FinitePoset> {
        match (r, inherited) {
            (Some(r), _) => {
                let p = self.resolve(r, dir)?;
                if let Some(q) = inherited {
                    q.ensure_same(&p)?;
                }
                Ok(p)
            }
            (None, Some(q)) => Ok(q.clone()),
            (None, None) => Err(Error::Invalid("missing \"poset\"".into())),
        }
    }

    pub fn valuation(&self, path: &Path) -> Result<Valuation> {
        let spec: ValuationSpec = read_json(path)?;
        self.build_valuation(&spec, None, &base_dir(path))
    }

    fn build_valuation(&self, spec: &ValuationSpec, inherited: Option<&FinitePoset>, dir: &Path) -> Result<Valuation> {
        let poset = self.resolve_or(spec.poset.as_ref(), inherited, dir)?;
        let pairs = spec
            .mass
            .iter()
            .map(|(k, v)| Ok((k.as_str(), v.rat()?)))
            .collect::<Result<Vec<_>>>()?;
        Valuation::from_pairs(&poset, &pairs)
    }

    /// Reads either a plain predicate (`"values"`) or an interval predicate
    /// (`"lower"` and `"upper"`); plain predicates come back degenerate.
    /// Without a `"poset"` field the predicate lives on `on`.
    pub fn interval_predicate(
        &self,
        path: &Path,
        mode: Option<RangeMode>,
        on: Option<&FinitePoset>,
    ) -> Result<IntervalPredicate> {
        let spec: PredicateSpec = read_json(path)?;
        let dir = base_dir(path);
        let poset = self.resolve_or(spec.poset.as_ref(), on, &dir)?;
        let mode = match (spec.mode, mode) {
            (Some(a), Some(b)) if a != b => {
                return Err(Error::ModeMismatch(format!(
                    "file says {}, requested {}",
                    a.as_str(),
                    b.as_str()
                )))
            }
            (a, b) => a.or(b).unwrap_or_default(),
        };
        match (&spec.values, &spec.lower, &spec.upper) {
            (Some(v), None, None) => Ok(IntervalPredicate::lift(&values(&poset, v, mode)?)),
            (None, Some(l), Some(u)) => IntervalPredicate::new(values(&poset, l, mode)?, values(&poset, u, mode)?),
            _ => Err(Error::Invalid(
                "predicate needs either \"values\" or both \"lower\" and \"upper\"".into(),
            )),
        }
    }

    pub fn predicate(&self, path: &Path, mode: Option<RangeMode>, on: Option<&FinitePoset>) -> Result<Predicate> {
        let g = self.interval_predicate(path, mode, on)?;
        if !g.is_degenerate() {
            return Err(Error::Invalid("expected a plain predicate, got an interval".into()));
        }
        Ok(g.lower().clone())
    }

    pub fn power_element(&self, path: &Path) -> Result<PowerElement> {
        let spec: PowerSpec = read_json(path)?;
        self.build_power(&spec, None, None, &base_dir(path))
    }

    fn build_power(
        &self,
        spec: &PowerSpec,
        flavor: Option<Flavor>,
        inherited: Option<&FinitePoset>,
        dir: &Path,
    ) -> Result<PowerElement> {
        let flavor = match (spec.flavor, flavor) {
            (Some(a), Some(b)) => {
                a.ensure_same(b)?;
                a
            }
            (Some(a), None) | (None, Some(a)) => a,
            (None, None) => return Err(Error::Invalid("missing \"flavor\"".into())),
        };
        let poset = self.resolve_or(spec.poset.as_ref(), inherited, dir)?;
        let gens = spec
            .generators
            .iter()
            .map(|g| self.build_valuation(g, Some(&poset), dir))
            .collect::<Result<Vec<_>>>()?;
        PowerElement::new(flavor, &poset, gens)
    }

    /// Table entries inherit the flavor and the target poset; a missing
    /// `"target"` means the source.
    pub fn transformer(&self, path: &Path) -> Result<StateTransformer> {
        let spec: TransformerSpec = read_json(path)?;
        let dir = base_dir(path);
        let source = self.resolve(&spec.source, &dir)?;
        let target = match &spec.target {
            Some(t) => self.resolve(t, &dir)?,
            None => source.clone(),
        };
        for k in spec.table.keys() {
            source.index_of(k)?;
        }
        let table = source
            .elements()
            .iter()
            .map(|name| {
                let entry = spec.table.get(name).ok_or_else(|| Error::MissingEntry(name.clone()))?;
                self.build_power(entry, Some(spec.flavor), Some(&target), &dir)
            })
            .collect::<Result<Vec<_>>>()?;
        StateTransformer::new(spec.flavor, &source, &target, table)
    }
}

/// A transformer file read without the subprobability and monotonicity
/// checks, for probing candidate tables that may be unhealthy.
#[derive(Clone, Debug)]
pub struct GeneratorTable {
    pub flavor: Flavor,
    pub source: FinitePoset,
    pub target: FinitePoset,
    pub rows: Vec<Vec<Valuation>>,
}

impl Loader {
    pub fn generator_table(&self, path: &Path) -> Result<GeneratorTable> {
        let spec: TransformerSpec = read_json(path)?;
        let dir = base_dir(path);
        let source = self.resolve(&spec.source, &dir)?;
        let target = match &spec.target {
            Some(t) => self.resolve(t, &dir)?,
            None => source.clone(),
        };
        for k in spec.table.keys() {
            source.index_of(k)?;
        }
        let rows = source
            .elements()
            .iter()
            .map(|name| {
                let entry = spec.table.get(name).ok_or_else(|| Error::MissingEntry(name.clone()))?;
                if let Some(f) = entry.flavor {
                    f.ensure_same(spec.flavor)?;
                }
                let poset = self.resolve_or(entry.poset.as_ref(), Some(&target), &dir)?;
                if entry.generators.is_empty() {
                    return Err(Error::EmptyGeneratorSet);
                }
                entry
                    .generators
                    .iter()
                    .map(|g| self.build_valuation(g, Some(&poset), &dir))
                    .collect()
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(GeneratorTable {
            flavor: spec.flavor,
            source,
            target,
            rows,
        })
    }
}

fn values(poset: &FinitePoset, map: &BTreeMap<String, Number>, mode: RangeMode) -> Result<Predicate> {
    for k in map.keys() {
        poset.index_of(k)?;
    }
    let vals = poset
        .elements()
        .iter()
        .map(|name| {
            map.get(name)
                .ok_or_else(|| Error::Invalid(format!("predicate has no value for `{name}`")))?
                .ext()
        })
        .collect::<Result<Vec<_>>>()?;
    Predicate::new(poset, vals, mode)
}

// ---------------------------------------------------------------------------
// output

pub fn rat_json(r: &Rat) -> Value {
    Value::String(fmt_rat(r))
}

pub fn ext_json(r: &ExtRat) -> Value {
    Value::String(r.to_string())
}

pub fn interval_json(i: &Interval) -> Value {
    json!({ "lower": ext_json(&i.lo), "upper": ext_json(&i.hi) })
}

pub fn poset_json(p: &FinitePoset) -> Value {
    let covers: Vec<Value> = p
        .covers()
        .into_iter()
        .map(|(i, j)| json!([p.name(i), p.name(j)]))
        .collect();
    json!({ "elements": p.elements(), "covers": covers })
}

/// `{"mass": {...}}` with every element listed.
pub fn valuation_json(mu: &Valuation) -> Value {
    let mass: Map<String, Value> = mu
        .masses()
        .iter()
        .enumerate()
        .map(|(i, m)| (mu.poset().name(i).to_string(), rat_json(m)))
        .collect();
    json!({ "mass": mass })
}

pub fn values_json(f: &Predicate) -> Value {
    let values: Map<String, Value> = f
        .values()
        .iter()
        .enumerate()
        .map(|(i, v)| (f.poset().name(i).to_string(), ext_json(v)))
        .collect();
    Value::Object(values)
}

pub fn predicate_json(f: &Predicate) -> Value {
    json!({ "mode": f.mode().as_str(), "values": values_json(f) })
}

/// Degenerate intervals print as plain predicates.
pub fn interval_predicate_json(g: &IntervalPredicate) -> Value {
    if g.is_degenerate() {
        predicate_json(g.lower())
    } else {
        json!({
            "mode": g.lower().mode().as_str(),
            "lower": values_json(g.lower()),
            "upper": values_json(g.upper()),
        })
    }
}

fn generators_json(x: &PowerElement) -> Value {
    Value::Array(x.generators().iter().map(valuation_json).collect())
}

pub fn power_element_json(x: &PowerElement) -> Value {
    json!({
        "flavor": x.flavor().as_str(),
        "poset": poset_json(x.poset()),
        "generators": generators_json(x),
    })
}

/// Readable back by [`Loader::transformer`].
pub fn transformer_json(s: &StateTransformer) -> Value {
    let table: Map<String, Value> = s
        .table()
        .iter()
        .enumerate()
        .map(|(i, x)| (s.source().name(i).to_string(), json!({ "generators": generators_json(x) })))
        .collect();
    json!({
        "flavor": s.flavor().as_str(),
        "source": poset_json(s.source()),
        "target": poset_json(s.target()),
        "table": table,
    })
}

/// Pretty JSON with sorted keys and a trailing newline.
pub fn to_canonical_string(v: &Value) -> String {
    // serde_json's default map is ordered by key
    let mut s = serde_json::to_string_pretty(v).expect("JSON values always serialize");
    s.push('\n');
    s
}
