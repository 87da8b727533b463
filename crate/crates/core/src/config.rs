//! Run configuration: a TOML file with `space`, `group`, `gifs`, `solver`
//! and `output` sections. Unknown keys are rejected; schema problems come
//! back as a list of `key.path: message` strings.

use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fixpoint::{ConvergenceMode, SeedStrategy, SolverConfig};
use crate::gifs::{AffineMap, GifSystem, GifsMap, TableMap};
use crate::space::{GridMetric, GridSpace, PermGroup, Space, TableSpace};
use crate::tnorm::TNorm;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    /// Global seed for the contraction sampler and diagnostic dictionary.
    #[serde(default)]
    pub seed: u64,
    pub space: SpaceConfig,
    #[serde(default)]
    pub group: GroupConfig,
    pub gifs: GifsConfig,
    #[serde(default)]
    pub solver: SolverSection,
    #[serde(default)]
    pub output: OutputConfig,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpaceConfig {
    pub kind: SpaceKind,
    /// Grid: per-axis closed interval `[lo, hi]`.
    #[serde(default, rename = "box")]
    pub bounds: Option<Vec<[f64; 2]>>,
    /// Grid: nodes per axis (at least 2).
    #[serde(default)]
    pub resolution: Option<Vec<usize>>,
    #[serde(default = "default_metric")]
    pub metric: GridMetric,
    /// Table: full symmetric distance matrix.
    #[serde(default)]
    pub distances: Option<Vec<Vec<f64>>>,
}

fn default_metric() -> GridMetric {
    GridMetric::Chebyshev
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SpaceKind {
    Grid,
    Table,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupConfig {
    /// Generator permutations, 1-based; empty means the trivial group.
    #[serde(default)]
    pub generators: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GifsConfig {
    pub m: usize,
    pub tnorm: TNorm,
    pub weights: Vec<f64>,
    pub maps: Vec<MapConfig>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapConfig {
    /// Affine map: `m` blocks of `d x d` row-major coefficients.
    #[serde(default, rename = "A")]
    pub blocks: Option<Vec<Vec<f64>>>,
    /// Affine map: offset vector of length `d`.
    #[serde(default)]
    pub b: Option<Vec<f64>>,
    /// Table map: `n^m` image point indices (0-based), first slot slowest.
    #[serde(default)]
    pub table: Option<Vec<usize>>,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverSection {
    #[serde(default)]
    pub seed_strategy: Option<SeedStrategy>,
    #[serde(default)]
    pub epsilon: Option<f64>,
    #[serde(default)]
    pub max_iter: Option<usize>,
    #[serde(default)]
    pub mode: Option<ConvergenceMode>,
    #[serde(default)]
    pub q: Option<u32>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    /// Whether `solve` writes a PGM image (2D grids; 1D grids write a
    /// one-row strip).
    #[serde(default = "default_true")]
    pub render: bool,
}

fn default_true() -> bool {
    true
}

impl Default for OutputConfig {
    fn default() -> Self {
        Self { render: true }
    }
}

/// Everything a run needs, built from a validated config.
#[derive(Debug, Clone)]
pub struct BuiltRun {
    pub config: RunConfig,
    pub space: Arc<Space>,
    pub system: GifSystem,
    pub solver: SolverConfig,
    pub seed: u64,
    pub render: bool,
}

impl RunConfig {
    /// Parses a config file. Syntax errors and unknown keys surface as a
    /// config error; semantic schema checks happen in [`RunConfig::build`].
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        toml::from_str(&text).map_err(|e| Error::Config(vec![e.to_string()]))
    }

    /// Validates the schema and constructs the domain objects. All schema
    /// problems are collected and reported together with their key paths.
    pub fn build(&self) -> Result<BuiltRun> {
        let mut errors: Vec<String> = Vec::new();

        let space = match self.build_space(&mut errors) {
            Some(s) => Arc::new(s),
            None => return Err(Error::Config(errors)),
        };

        if self.gifs.m == 0 {
            errors.push("gifs.m: arity must be at least 1".into());
        }
        let group = match self.build_group(&mut errors) {
            Some(g) => g,
            None => return Err(Error::Config(errors)),
        };

        if self.gifs.weights.is_empty() {
            errors.push("gifs.weights: must be nonempty".into());
        }
        if self.gifs.weights.len() != self.gifs.maps.len() {
            errors.push(format!(
                "gifs.weights: {} weights for {} maps",
                self.gifs.weights.len(),
                self.gifs.maps.len()
            ));
        }
        for (i, &w) in self.gifs.weights.iter().enumerate() {
            if !(0.0..=1.0).contains(&w) {
                errors.push(format!("gifs.weights[{i}]: {w} is outside [0, 1]"));
            }
        }
        let max_w = self
            .gifs
            .weights
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max);
        if !self.gifs.weights.is_empty() && max_w != 1.0 {
            errors.push("gifs.weights: max weight must equal 1".into());
        }

        let maps = self.build_maps(&space, &mut errors);

        if !errors.is_empty() {
            return Err(Error::Config(errors));
        }

        let system = GifSystem::new(
            space.clone(),
            group,
            maps,
            self.gifs.weights.clone(),
            self.gifs.tnorm,
        )
        .map_err(|e| Error::Config(vec![format!("gifs: {e}")]))?;

        let mut solver = SolverConfig::default_for(&space);
        if let Some(strategy) = self.solver.seed_strategy {
            solver.seed = strategy;
        }
        if let Some(mode) = self.solver.mode {
            solver.mode = mode;
        }
        if let Some(q) = self.solver.q {
            if q == 0 {
                return Err(Error::Config(vec!["solver.q: must be at least 1".into()]));
            }
            solver.q = q;
            solver.epsilon = space.cell_diagonal() + 1.0 / q as f64;
        }
        if let Some(eps) = self.solver.epsilon {
            if !eps.is_finite() || eps <= 0.0 {
                return Err(Error::Config(vec![format!(
                    "solver.epsilon: {eps} must be positive"
                )]));
            }
            solver.epsilon = eps;
        }
        if let Some(max_iter) = self.solver.max_iter {
            if max_iter == 0 {
                return Err(Error::Config(vec![
                    "solver.max_iter: must be at least 1".into()
                ]));
            }
            solver.max_iter = max_iter;
        }

        Ok(BuiltRun {
            config: self.clone(),
            space,
            system,
            solver,
            seed: self.seed,
            render: self.output.render,
        })
    }

    fn build_space(&self, errors: &mut Vec<String>) -> Option<Space> {
        match self.space.kind {
            SpaceKind::Grid => {
                if self.space.distances.is_some() {
                    errors.push("space.distances: not allowed for grid spaces".into());
                }
                let bounds = match &self.space.bounds {
                    Some(b) => b.clone(),
                    None => {
                        errors.push("space.box: required for grid spaces".into());
                        return None;
                    }
                };
                let resolution = match &self.space.resolution {
                    Some(r) => r.clone(),
                    None => {
                        errors.push("space.resolution: required for grid spaces".into());
                        return None;
                    }
                };
                match GridSpace::new(bounds, resolution, self.space.metric) {
                    Ok(g) => Some(Space::Grid(g)),
                    Err(e) => {
                        errors.push(format!("space: {e}"));
                        None
                    }
                }
            }
            SpaceKind::Table => {
                if self.space.bounds.is_some() || self.space.resolution.is_some() {
                    errors.push("space.box/resolution: not allowed for table spaces".into());
                }
                let distances = match &self.space.distances {
                    Some(d) => d.clone(),
                    None => {
                        errors.push("space.distances: required for table spaces".into());
                        return None;
                    }
                };
                match TableSpace::new(distances) {
                    Ok(t) => Some(Space::Table(t)),
                    Err(e) => {
                        errors.push(format!("space.distances: {e}"));
                        None
                    }
                }
            }
        }
    }

    fn build_group(&self, errors: &mut Vec<String>) -> Option<PermGroup> {
        if self.group.generators.is_empty() {
            return Some(PermGroup::trivial(self.gifs.m.max(1)));
        }
        for (i, g) in self.group.generators.iter().enumerate() {
            if g.len() != self.gifs.m {
                errors.push(format!(
                    "group.generators[{i}]: permutation of length {} but gifs.m = {}",
                    g.len(),
                    self.gifs.m
                ));
                return None;
            }
        }
        match PermGroup::from_generators_one_based(self.gifs.m, &self.group.generators) {
            Ok(g) => Some(g),
            Err(e) => {
                errors.push(format!("group.generators: {e}"));
                None
            }
        }
    }

    fn build_maps(&self, space: &Arc<Space>, errors: &mut Vec<String>) -> Vec<GifsMap> {
        let mut maps = Vec::with_capacity(self.gifs.maps.len());
        if self.gifs.maps.is_empty() {
            errors.push("gifs.maps: must be nonempty".into());
        }
        for (i, map) in self.gifs.maps.iter().enumerate() {
            match (&map.blocks, &map.b, &map.table, space.as_ref()) {
                (Some(blocks), Some(b), None, Space::Grid(grid)) => {
                    let d = grid.dim();
                    if blocks.len() != self.gifs.m {
                        errors.push(format!(
                            "gifs.maps[{i}].A: {} blocks for arity m = {}",
                            blocks.len(),
                            self.gifs.m
                        ));
                        continue;
                    }
                    if blocks.iter().any(|bl| bl.len() != d * d) {
                        errors.push(format!("gifs.maps[{i}].A: blocks must be {d}x{d} row-major"));
                        continue;
                    }
                    if b.len() != d {
                        errors.push(format!("gifs.maps[{i}].b: offset must have {d} entries"));
                        continue;
                    }
                    maps.push(GifsMap::Affine(AffineMap {
                        blocks: blocks.clone(),
                        offset: b.clone(),
                    }));
                }
                (None, None, Some(table), Space::Table(t)) => {
                    let expected = t.len().pow(self.gifs.m as u32);
                    if table.len() != expected {
                        errors.push(format!(
                            "gifs.maps[{i}].table: {} entries, expected {}^{} = {expected}",
                            table.len(),
                            t.len(),
                            self.gifs.m
                        ));
                        continue;
                    }
                    if let Some(&bad) = table.iter().find(|&&y| y >= t.len()) {
                        errors.push(format!(
                            "gifs.maps[{i}].table: image index {bad} out of range"
                        ));
                        continue;
                    }
                    maps.push(GifsMap::Table(TableMap {
                        images: table.clone(),
                    }));
                }
                (Some(_), Some(_), None, Space::Table(_)) => {
                    errors.push(format!("gifs.maps[{i}]: affine maps need a grid space"));
                }
                (None, None, Some(_), Space::Grid(_)) => {
                    errors.push(format!("gifs.maps[{i}]: table maps need a table space"));
                }
                _ => {
                    errors.push(format!(
                        "gifs.maps[{i}]: give either A and b (affine) or table"
                    ));
                }
            }
        }
        maps
    }
}
