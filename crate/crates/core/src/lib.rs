//! Computation, verification and rendering of invariant idempotent
//! measures of generalized iterated function systems on discretized
//! compact metric spaces.
//!
//! The pipeline: a finite metric space ([`space`]), a triangular norm
//! ([`tnorm`]), measures as normal `[0,1]`-valued functions ([`measure`]),
//! a weighted system of maps from a symmetric power of the space back into
//! it ([`gifs`]), and a fixed-point solver for the induced operator on
//! measures ([`fixpoint`]). The [`oracle`] module is an independent exact
//! model on tiny quantized spaces that anchors the algebra of the main
//! path.
//!
//! With the default `parallel` feature the tuple-enumeration kernels run
//! on rayon; built without it they fall back to the sequential path.
//! Either way results are bit-identical for any worker count, because the
//! only cross-worker combination is a pointwise maximum.

pub mod config;
pub mod error;
pub mod fixpoint;
pub mod gifs;
pub mod measure;
pub mod oracle;
pub mod render;
pub mod report;
pub mod space;
pub mod tnorm;

pub use error::{Error, Result};
