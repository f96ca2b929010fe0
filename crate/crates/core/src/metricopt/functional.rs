use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::extended::ExtReal;
use crate::funcspace::{DistanceCombination, FiniteMetricSpace, MetricTree, TreeLocation};

/// A real function on the continuum of a metric tree.
pub trait TreeField {
    fn eval(&self, tree: &MetricTree, at: TreeLocation) -> f64;

    /// Points where the function may fail to be smooth along geodesics.
    fn kinks(&self) -> Vec<TreeLocation> {
        Vec::new()
    }

    /// Bound on the second derivative along unit-speed geodesics away from kinks.
    fn curvature_bound(&self) -> f64 {
        0.0
    }
}

fn d(tree: &MetricTree, a: TreeLocation, b: TreeLocation) -> f64 {
    crate::funcspace::tree_distance(tree, a, b).expect("validated locations")
}

impl TreeField for DistanceCombination {
    fn eval(&self, tree: &MetricTree, at: TreeLocation) -> f64 {
        DistanceCombination::eval(self, tree, at)
    }

    fn kinks(&self) -> Vec<TreeLocation> {
        self.terms().iter().map(|&(_, a)| a).collect()
    }
}

/// `-phi`; used to build functionals that break geodesic convexity on purpose.
#[derive(Clone, Debug)]
pub struct Negated<T>(pub T);

impl<T: TreeField> TreeField for Negated<T> {
    fn eval(&self, tree: &MetricTree, at: TreeLocation) -> f64 {
        -self.0.eval(tree, at)
    }

    fn kinks(&self) -> Vec<TreeLocation> {
        self.0.kinks()
    }

    fn curvature_bound(&self) -> f64 {
        self.0.curvature_bound()
    }
}

/// Closed-form functionals on trees.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TreeForm {
    /// `sum c_i d(., a_i)`
    Combination(DistanceCombination),
    /// `coef * d(., anchor)^2`
    SquaredDistance { anchor: TreeLocation, coef: f64 },
    /// `coef * min_i d(., a_i)`
    NearestAnchor { anchors: Vec<TreeLocation>, coef: f64 },
}

impl TreeForm {
    fn validated(self, tree: &MetricTree) -> Result<Self> {
        let positive = |c: f64| {
            if c >= 0.0 && c.is_finite() {
                Ok(())
            } else {
                Err(Error::OutOfRange {
                    name: "coefficient",
                    detail: format!("{c} must be nonnegative"),
                })
            }
        };
        Ok(match self {
            TreeForm::Combination(c) => TreeForm::Combination(DistanceCombination::new(tree, c.terms().to_vec())?),
            TreeForm::SquaredDistance { anchor, coef } => {
                positive(coef)?;
                TreeForm::SquaredDistance {
                    anchor: tree.normalize(anchor)?,
                    coef,
                }
            }
            TreeForm::NearestAnchor { anchors, coef } => {
                positive(coef)?;
                if anchors.is_empty() {
                    return Err(Error::InvalidInput("nearest-anchor form needs anchors".into()));
                }
                TreeForm::NearestAnchor {
                    anchors: anchors.into_iter().map(|a| tree.normalize(a)).collect::<Result<_>>()?,
                    coef,
                }
            }
        })
    }
}

impl TreeField for TreeForm {
    fn eval(&self, tree: &MetricTree, at: TreeLocation) -> f64 {
        match self {
            TreeForm::Combination(c) => c.eval(tree, at),
            TreeForm::SquaredDistance { anchor, coef } => coef * d(tree, at, *anchor).powi(2),
            TreeForm::NearestAnchor { anchors, coef } => {
                coef * anchors.iter().map(|&a| d(tree, at, a)).fold(f64::INFINITY, f64::min)
            }
        }
    }

    fn kinks(&self) -> Vec<TreeLocation> {
        match self {
            TreeForm::Combination(c) => TreeField::kinks(c),
            TreeForm::SquaredDistance { anchor, .. } => vec![*anchor],
            TreeForm::NearestAnchor { anchors, .. } => anchors.clone(),
        }
    }

    fn curvature_bound(&self) -> f64 {
        match self {
            TreeForm::SquaredDistance { coef, .. } => 2.0 * coef,
            _ => 0.0,
        }
    }
}

/// A value vector on a finite metric space with a reference minimizer.
#[derive(Clone, Debug, PartialEq)]
pub struct FiniteFunctional {
    space: FiniteMetricSpace,
    values: Vec<ExtReal>,
    reference: usize,
}

impl FiniteFunctional {
    pub fn new(space: FiniteMetricSpace, values: Vec<ExtReal>, reference: usize) -> Result<Self> {
        if values.len() != space.len() {
            return Err(Error::InvalidInput(format!(
                "{} values for {} points",
                values.len(),
                space.len()
            )));
        }
        if reference >= values.len() {
            return Err(Error::InvalidInput(format!("reference {reference} out of range")));
        }
        if !values[reference].is_finite() {
            return Err(Error::InfiniteValue(reference));
        }
        Ok(FiniteFunctional {
            space,
            values,
            reference,
        })
    }

    pub fn from_finite(space: FiniteMetricSpace, values: &[f64], reference: usize) -> Result<Self> {
        let values = values.iter().map(|&v| ExtReal::new(v)).collect::<Result<_>>()?;
        FiniteFunctional::new(space, values, reference)
    }

    pub fn space(&self) -> &FiniteMetricSpace {
        &self.space
    }

    pub fn values(&self) -> &[ExtReal] {
        &self.values
    }

    pub fn value(&self, i: usize) -> ExtReal {
        self.values[i]
    }

    pub fn reference(&self) -> usize {
        self.reference
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn infimum(&self) -> f64 {
        self.values.iter().filter_map(|v| v.finite()).fold(f64::INFINITY, f64::min)
    }

    pub fn with_reference(&self, reference: usize) -> Result<Self> {
        FiniteFunctional::new(self.space.clone(), self.values.clone(), reference)
    }
}

/// A closed-form functional on a metric tree with a reference minimizer.
///
/// `resolution` is the lattice spacing used wherever the continuum has to be sampled.
#[derive(Clone, Debug, PartialEq)]
pub struct TreeFunctional {
    tree: MetricTree,
    form: TreeForm,
    reference: TreeLocation,
    resolution: f64,
}

impl TreeFunctional {
    pub fn new(tree: MetricTree, form: TreeForm, reference: TreeLocation, resolution: f64) -> Result<Self> {
        if !(resolution > 0.0 && resolution.is_finite()) {
            return Err(Error::OutOfRange {
                name: "resolution",
                detail: format!("{resolution} must be positive"),
            });
        }
        let form = form.validated(&tree)?;
        let reference = tree.normalize(reference)?;
        Ok(TreeFunctional {
            tree,
            form,
            reference,
            resolution,
        })
    }

    pub fn tree(&self) -> &MetricTree {
        &self.tree
    }

    pub fn form(&self) -> &TreeForm {
        &self.form
    }

    pub fn reference(&self) -> TreeLocation {
        self.reference
    }

    pub fn resolution(&self) -> f64 {
        self.resolution
    }

    pub fn with_resolution(&self, resolution: f64) -> Result<Self> {
        TreeFunctional::new(self.tree.clone(), self.form.clone(), self.reference, resolution)
    }

    pub fn eval(&self, at: TreeLocation) -> f64 {
        self.form.eval(&self.tree, at)
    }

    pub fn dist(&self, a: TreeLocation, b: TreeLocation) -> f64 {
        d(&self.tree, a, b)
    }

    /// Lattice points at the functional's resolution plus the reference and kinks.
    pub fn samples(&self) -> Vec<TreeLocation> {
        let mut pts = self.tree.lattice(self.resolution);
        for p in std::iter::once(self.reference).chain(self.form.kinks()) {
            if !pts.contains(&p) {
                pts.push(p);
            }
        }
        pts
    }

    /// Same functional restricted to the node set, as a finite functional.
    pub fn on_nodes(&self) -> Result<FiniteFunctional> {
        let TreeLocation::Node(r) = self.reference else {
            return Err(Error::Precondition("reference must be a node to restrict to the node set".into()));
        };
        let values = (0..self.tree.node_count())
            .map(|x| ExtReal::Finite(self.eval(TreeLocation::Node(x))))
            .collect();
        FiniteFunctional::new(self.tree.node_metric(), values, r)
    }
}

/// Either kind of metric-space functional.
#[derive(Clone, Debug, PartialEq)]
pub enum MetricFunctional {
    Finite(FiniteFunctional),
    Tree(TreeFunctional),
}

/// A point of the space a [`MetricFunctional`] lives on.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MetricPoint {
    Index(usize),
    Location(TreeLocation),
}

impl MetricFunctional {
    pub fn reference(&self) -> MetricPoint {
        match self {
            MetricFunctional::Finite(j) => MetricPoint::Index(j.reference()),
            MetricFunctional::Tree(j) => MetricPoint::Location(j.reference()),
        }
    }
}
