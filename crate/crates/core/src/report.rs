//! Run reports and the trace CSV. The JSON keys and CSV columns here are a
//! compatibility contract; see the README.

use std::path::Path;

use serde::Serialize;

use crate::config::RunConfig;
use crate::error::Result;
use crate::fixpoint::{ConvergenceMode, IterationTrace, SolverConfig};
use crate::gifs::{ContractionReport, ValidationReport};

pub const ENGINE_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Serialize)]
pub struct RunReport<'a> {
    pub engine_version: &'static str,
    pub command: &'a str,
    pub config: &'a RunConfig,
    pub validation: &'a ValidationReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub contraction: Option<&'a ContractionReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub converged: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub iterations: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub final_residual: Option<f64>,
    pub epsilon: f64,
    pub mode: ConvergenceMode,
    pub q: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub support_size: Option<usize>,
    pub warnings: Vec<String>,
    pub timings: Timings,
}

#[derive(Debug, Default, Serialize)]
pub struct Timings {
    pub total_us: u64,
    pub solve_us: u64,
}

impl<'a> RunReport<'a> {
    pub fn new(
        command: &'a str,
        config: &'a RunConfig,
        solver: &SolverConfig,
        validation: &'a ValidationReport,
    ) -> Self {
        Self {
            engine_version: ENGINE_VERSION,
            command,
            config,
            validation,
            contraction: None,
            converged: None,
            iterations: None,
            final_residual: None,
            epsilon: solver.epsilon,
            mode: solver.mode,
            q: solver.q,
            support_size: None,
            warnings: Vec::new(),
            timings: Timings::default(),
        }
    }

    pub fn write_json(&self, path: &Path) -> Result<()> {
        let mut text = serde_json::to_string_pretty(self).expect("report serializes");
        text.push('\n');
        std::fs::write(path, text)?;
        Ok(())
    }
}

/// Trace CSV columns:
/// `step,distance,residual_sup,support,nesting_violation,wall_us`.
pub fn write_trace_csv(trace: &IterationTrace, path: &Path) -> Result<()> {
    let mut out = String::new();
    out.push_str("step,distance,residual_sup,support,nesting_violation,wall_us\n");
    for s in &trace.steps {
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            s.step, s.distance, s.residual_sup, s.support, s.nesting_violation, s.wall_us
        ));
    }
    std::fs::write(path, out)?;
    Ok(())
}

/// Point-set CSV for attractors: `point_index` plus one coordinate column
/// per grid axis.
pub fn write_point_set_csv(
    space: &crate::space::Space,
    points: &[usize],
    path: &Path,
) -> Result<()> {
    let mut out = String::new();
    match space.as_grid() {
        Some(grid) => {
            out.push_str("point_index");
            for axis in 0..grid.dim() {
                out.push_str(&format!(",x{axis}"));
            }
            out.push('\n');
            for &p in points {
                out.push_str(&p.to_string());
                for c in grid.coords(p) {
                    out.push_str(&format!(",{c}"));
                }
                out.push('\n');
            }
        }
        None => {
            out.push_str("point_index\n");
            for &p in points {
                out.push_str(&format!("{p}\n"));
            }
        }
    }
    std::fs::write(path, out)?;
    Ok(())
}
