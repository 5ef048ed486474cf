//! JSON input files: models, hypergraphs and criterion weights.
//!
//! Sites are declared either as a count (labels `"0"`, `"1"`, …) or as a
//! list of distinct string labels; indices are assigned in file order and
//! every other reference resolves through the labels.

use crate::CliError;
use latgas::hypergraph::Hypergraph;
use latgas::{C64, Model64, Params64, SiteSet, MAX_SITES};
use serde::Deserialize;
use std::collections::BTreeMap;
use std::path::Path;

/// A complex number, written either as a bare real or as `{"re": .., "im": ..}`.
#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(untagged)]
pub enum ComplexDecl {
    Real(f64),
    ReIm {
        re: f64,
        #[serde(default)]
        im: f64,
    },
}

impl ComplexDecl {
    pub fn value(self) -> C64 {
        match self {
            ComplexDecl::Real(re) => C64::new(re, 0.0),
            ComplexDecl::ReIm { re, im } => C64::new(re, im),
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum SitesDecl {
    Count(usize),
    Labels(Vec<String>),
}

/// Label ↔ site-index map; indices follow the order of the declaration.
#[derive(Debug, Clone)]
pub struct LabelTable {
    labels: Vec<String>,
}

impl LabelTable {
    fn new(decl: SitesDecl) -> Result<Self, CliError> {
        let labels = match decl {
            SitesDecl::Count(n) => (0..n).map(|i| i.to_string()).collect(),
            SitesDecl::Labels(l) => l,
        };
        if labels.len() > MAX_SITES {
            return Err(CliError::Input(format!(
                "{} sites exceed the supported maximum of {MAX_SITES}",
                labels.len()
            )));
        }
        for (i, label) in labels.iter().enumerate() {
            if labels[..i].contains(label) {
                return Err(CliError::Input(format!("duplicate site label {label:?}")));
            }
        }
        Ok(LabelTable { labels })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn resolve(&self, label: &str) -> Result<usize, CliError> {
        self.labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| CliError::Input(format!("unknown site label {label:?}")))
    }

    pub fn subset(&self, labels: &[String]) -> Result<SiteSet, CliError> {
        let mut set = SiteSet::EMPTY;
        for label in labels {
            let site = self.resolve(label)?;
            if set.contains(site) {
                return Err(CliError::Input(format!(
                    "site {label:?} listed twice in one subset"
                )));
            }
            set = set.insert(site);
        }
        Ok(set)
    }

    pub fn label(&self, site: usize) -> &str {
        &self.labels[site]
    }

    /// The labels of a subset, in ascending site order.
    pub fn names(&self, set: SiteSet) -> Vec<String> {
        set.sites().map(|x| self.labels[x].clone()).collect()
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ModelFile {
    sites: SitesDecl,
    activity: BTreeMap<String, ComplexDecl>,
    #[serde(default)]
    interaction: Vec<InteractionDecl>,
    #[serde(default)]
    potential: Vec<PotentialDecl>,
    query: Option<QueryDecl>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct InteractionDecl {
    subset: Vec<String>,
    w: ComplexDecl,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct PotentialDecl {
    subset: Vec<String>,
    v: ComplexDecl,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct QueryDecl {
    #[serde(default)]
    pinned: Vec<String>,
    volume: Option<Vec<String>>,
    #[serde(default)]
    boundary: Vec<String>,
    support: Option<Vec<String>>,
}

/// The query block with defaults applied; the volume defaults to every site
/// that is neither pinned nor on the boundary.
pub struct ResolvedQuery {
    pub pinned: SiteSet,
    pub volume: SiteSet,
    pub boundary: SiteSet,
    pub support: Option<SiteSet>,
}

/// A model file after label resolution.
pub struct LoadedModel {
    pub labels: LabelTable,
    pub model: Model64,
    pub query: ResolvedQuery,
}

impl LoadedModel {
    /// Solver support: as declared in the query, else the volume, the pinned
    /// sites and every stored interaction subset, minus the boundary.
    pub fn solver_support(&self) -> SiteSet {
        match self.query.support {
            Some(s) => s,
            None => {
                let mut union = self.query.volume | self.query.pinned;
                for (bond, _) in self.model.w_entries() {
                    union = union | bond;
                }
                union - self.query.boundary
            }
        }
    }
}

pub fn load_model(path: &Path) -> Result<LoadedModel, CliError> {
    let file: ModelFile = parse_file(path)?;
    let labels = LabelTable::new(file.sites)?;
    for key in file.activity.keys() {
        labels.resolve(key)?;
    }
    let mut activity = Vec::with_capacity(labels.len());
    for x in 0..labels.len() {
        let decl = file.activity.get(labels.label(x)).ok_or_else(|| {
            CliError::Input(format!("no activity for site {:?}", labels.label(x)))
        })?;
        activity.push(decl.value());
    }
    let mut model = Model64::new(activity).map_err(model_err)?;
    for entry in &file.interaction {
        let subset = labels.subset(&entry.subset)?;
        model.set_interaction(subset, entry.w.value()).map_err(model_err)?;
    }
    for entry in &file.potential {
        let subset = labels.subset(&entry.subset)?;
        model.set_potential(subset, entry.v.value()).map_err(model_err)?;
    }
    let query = resolve_query(file.query.unwrap_or_default(), &labels, model.lattice())?;
    Ok(LoadedModel { labels, model, query })
}

fn resolve_query(
    q: QueryDecl,
    labels: &LabelTable,
    lattice: SiteSet,
) -> Result<ResolvedQuery, CliError> {
    let pinned = labels.subset(&q.pinned)?;
    let boundary = labels.subset(&q.boundary)?;
    if !pinned.is_disjoint(boundary) {
        return Err(CliError::Input("pinned and boundary sites overlap".into()));
    }
    let volume = match q.volume {
        Some(v) => {
            let volume = labels.subset(&v)?;
            if !volume.is_disjoint(pinned) {
                return Err(CliError::Input("pinned sites must lie outside the volume".into()));
            }
            if !volume.is_disjoint(boundary) {
                return Err(CliError::Input("boundary sites must lie outside the volume".into()));
            }
            volume
        }
        None => lattice - pinned - boundary,
    };
    let support = q.support.map(|s| labels.subset(&s)).transpose()?;
    Ok(ResolvedQuery { pinned, volume, boundary, support })
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct HypergraphFile {
    sites: SitesDecl,
    #[serde(default)]
    edges: Vec<Vec<String>>,
    activity: Option<BTreeMap<String, ComplexDecl>>,
}

/// A hypergraph file after label resolution; activities are optional (the
/// polydisc scans draw their own).
pub struct LoadedHypergraph {
    pub labels: LabelTable,
    pub graph: Hypergraph,
    pub activity: Option<Vec<C64>>,
}

pub fn load_hypergraph(path: &Path) -> Result<LoadedHypergraph, CliError> {
    let file: HypergraphFile = parse_file(path)?;
    let labels = LabelTable::new(file.sites)?;
    let mut edges = Vec::with_capacity(file.edges.len());
    for edge in &file.edges {
        edges.push(labels.subset(edge)?);
    }
    let graph = Hypergraph::new(labels.len(), edges).map_err(model_err)?;
    let activity = match file.activity {
        Some(map) => {
            for key in map.keys() {
                labels.resolve(key)?;
            }
            let mut values = Vec::with_capacity(labels.len());
            for x in 0..labels.len() {
                let decl = map.get(labels.label(x)).ok_or_else(|| {
                    CliError::Input(format!("no activity for site {:?}", labels.label(x)))
                })?;
                values.push(decl.value());
            }
            Some(values)
        }
        None => None,
    };
    Ok(LoadedHypergraph { labels, graph, activity })
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ParamsFile {
    r: Option<BTreeMap<String, f64>>,
    alpha: Option<BTreeMap<String, f64>>,
}

/// Per-site criterion weights, given as exactly one of an `"r"` or an
/// `"alpha"` block covering every site.
pub fn load_params(path: &Path, labels: &LabelTable) -> Result<Params64, CliError> {
    let file: ParamsFile = parse_file(path)?;
    let (map, is_r) = match (file.r, file.alpha) {
        (Some(r), None) => (r, true),
        (None, Some(alpha)) => (alpha, false),
        (Some(_), Some(_)) => {
            return Err(CliError::Input(
                "give either \"r\" or \"alpha\" weights, not both".into(),
            ))
        }
        (None, None) => {
            return Err(CliError::Input(
                "weights file needs an \"r\" or an \"alpha\" block".into(),
            ))
        }
    };
    for key in map.keys() {
        labels.resolve(key)?;
    }
    let mut values = Vec::with_capacity(labels.len());
    for x in 0..labels.len() {
        let v = map.get(labels.label(x)).ok_or_else(|| {
            CliError::Input(format!("no weight for site {:?}", labels.label(x)))
        })?;
        values.push(*v);
    }
    let params = if is_r { Params64::from_r(values) } else { Params64::from_alpha(values) };
    params.map_err(model_err)
}

fn parse_file<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn model_err(e: latgas::ModelError) -> CliError {
    CliError::Input(e.to_string())
}
