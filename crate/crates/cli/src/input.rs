use std::fs;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::Deserialize;
use serde_json::Value;
use sharpmin_core::funcspace::{CloudFile, GridFile, MetricFile, TreeFile};
use sharpmin_core::metricopt::{FiniteFunctional, MetricFunctional, TreeForm, TreeFunctional};
use sharpmin_core::{
    DistanceCombination, ExtReal, FiniteMetricSpace, Fixture, GridFunction, MetricPoint, MetricTree, PointCloudFunction,
    TreeLocation,
};

use crate::error::{CliError, CliResult};

/// Reads a JSON file, keeping line/column information on syntax and schema errors.
pub fn read_json<T: DeserializeOwned>(path: &Path) -> CliResult<T> {
    parse_as(path, &read_text(path)?)
}

/// A named fixture together with the cube it is sampled on.
#[derive(Clone, Debug, Deserialize)]
pub struct FixtureFile {
    #[serde(flatten)]
    pub fixture: Fixture,
    pub half_width: f64,
    pub step: f64,
}

impl FixtureFile {
    pub fn bounds(&self) -> Vec<(f64, f64)> {
        self.fixture
            .center()
            .iter()
            .map(|&c| (c - self.half_width, c + self.half_width))
            .collect()
    }
}

pub enum EuclideanInput {
    Cloud(PointCloudFunction),
    Grid(GridFunction),
    Fixture(FixtureFile),
}

pub enum SpaceInput {
    Metric(FiniteMetricSpace),
    Tree(MetricTree),
}

pub enum AnyInput {
    Euclidean(EuclideanInput),
    Space(SpaceInput),
}

fn has(v: &Value, key: &str) -> bool {
    v.get(key).is_some()
}

fn read_text(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn parse_as<T: DeserializeOwned>(path: &Path, text: &str) -> CliResult<T> {
    serde_json::from_str(text).map_err(|e| CliError::parse(path, e))
}

/// Reads any supported input file, dispatching on its top-level keys.
pub fn load(path: &Path) -> CliResult<AnyInput> {
    let text = read_text(path)?;
    let v: Value = parse_as(path, &text)?;
    Ok(if has(&v, "fixture") {
        let f: FixtureFile = parse_as(path, &text)?;
        f.fixture.validate()?;
        AnyInput::Euclidean(EuclideanInput::Fixture(f))
    } else if has(&v, "points") {
        AnyInput::Euclidean(EuclideanInput::Cloud(parse_as::<CloudFile>(path, &text)?.into_cloud()?))
    } else if has(&v, "bounds") {
        AnyInput::Euclidean(EuclideanInput::Grid(parse_as::<GridFile>(path, &text)?.into_grid()?))
    } else if has(&v, "matrix") {
        AnyInput::Space(SpaceInput::Metric(parse_as::<MetricFile>(path, &text)?.into_space()?))
    } else if has(&v, "edges") {
        AnyInput::Space(SpaceInput::Tree(parse_as::<TreeFile>(path, &text)?.into_tree()?))
    } else {
        return Err(CliError::Usage(format!(
            "{}: not a cloud, grid, fixture, metric or tree file",
            path.display()
        )));
    })
}

pub fn load_euclidean(path: &Path) -> CliResult<EuclideanInput> {
    match load(path)? {
        AnyInput::Euclidean(e) => Ok(e),
        AnyInput::Space(_) => Err(CliError::Usage(format!(
            "{}: expected a cloud, grid or fixture file",
            path.display()
        ))),
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermFile {
    pub coef: f64,
    pub anchor: TreeLocation,
}

pub fn combination(tree: &MetricTree, terms: &[TermFile]) -> CliResult<DistanceCombination> {
    Ok(DistanceCombination::new(tree, terms.iter().map(|t| (t.coef, t.anchor)).collect())?)
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SquaredFile {
    pub anchor: TreeLocation,
    pub coef: f64,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NearestFile {
    pub anchors: Vec<TreeLocation>,
    pub coef: f64,
}

/// A functional on a metric space or tree: node values or one closed form.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FunctionalFile {
    #[serde(default)]
    pub values: Option<Vec<ExtReal>>,
    #[serde(default)]
    pub combination: Option<Vec<TermFile>>,
    #[serde(default)]
    pub squared_distance: Option<SquaredFile>,
    #[serde(default)]
    pub nearest_anchor: Option<NearestFile>,
    pub reference: MetricPoint,
    /// Lattice spacing on trees; an eighth of the shortest edge by default.
    #[serde(default)]
    pub resolution: Option<f64>,
}

pub fn load_functional(path: &Path, space: &SpaceInput) -> CliResult<MetricFunctional> {
    let f: FunctionalFile = read_json(path)?;
    let forms = [
        f.values.is_some(),
        f.combination.is_some(),
        f.squared_distance.is_some(),
        f.nearest_anchor.is_some(),
    ];
    if forms.iter().filter(|&&b| b).count() != 1 {
        return Err(CliError::Usage(format!(
            "{}: give exactly one of values, combination, squared_distance, nearest_anchor",
            path.display()
        )));
    }
    let index = |p: MetricPoint| match p {
        MetricPoint::Index(i) => Ok(i),
        MetricPoint::Location(_) => Err(CliError::Usage("node-value functionals need an index reference".into())),
    };
    if let Some(values) = f.values {
        let s = match space {
            SpaceInput::Metric(s) => s.clone(),
            SpaceInput::Tree(t) => t.node_metric(),
        };
        return Ok(MetricFunctional::Finite(FiniteFunctional::new(s, values, index(f.reference)?)?));
    }
    let SpaceInput::Tree(tree) = space else {
        return Err(CliError::Usage("closed-form functionals need a tree input".into()));
    };
    let form = if let Some(terms) = &f.combination {
        TreeForm::Combination(combination(tree, terms)?)
    } else if let Some(sq) = f.squared_distance {
        TreeForm::SquaredDistance {
            anchor: sq.anchor,
            coef: sq.coef,
        }
    } else {
        let n = f.nearest_anchor.expect("one form is present");
        TreeForm::NearestAnchor {
            anchors: n.anchors,
            coef: n.coef,
        }
    };
    let reference = match f.reference {
        MetricPoint::Index(i) => TreeLocation::Node(i),
        MetricPoint::Location(l) => l,
    };
    let resolution = f.resolution.unwrap_or(tree.min_edge_length() / 8.0);
    Ok(MetricFunctional::Tree(TreeFunctional::new(
        tree.clone(),
        form,
        reference,
        resolution,
    )?))
}

#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum Anchors {
    Indices(Vec<usize>),
    Points(Vec<Vec<f64>>),
}

#[derive(Clone, Debug, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum PerturbationFile {
    /// `min_i (g_i + L d(., a_i))`
    Mcshane {
        anchors: Anchors,
        values: Vec<f64>,
        constant: f64,
    },
    /// `coef |. - center|`
    ScaledDistance { center: Vec<f64>, coef: f64 },
    /// Nonnegative distance combination on a tree.
    Combination(Vec<TermFile>),
}
