//! File formats, rendering and the end-to-end runs behind the command line.

mod export;
mod manifest;
mod pipeline;
mod svg;

pub use export::{graph_to_dot, signature_csv, GadgetJson, GraphJson, VerificationJson, WitnessBundle, WitnessComponentJson};
pub use manifest::RunManifest;
pub use pipeline::{
    run_pipeline_separate, verify_bundle, verify_certificate, BundleCheck, CertificateCheck, PipelineOptions, SeparationRun,
};
pub use svg::{alpha_color, gadget_scene, graph_scene, render_svg, witness_scene, Annulus, Polyline, Scene};

use std::fs;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::Serialize;
use thiserror::Error;

use crate::geometry::{BodySpec, BuiltBody, GeometryError, SymmetricBody};

#[derive(Debug, Error)]
pub enum IoError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: parse error: {source}")]
    Parse {
        path: String,
        #[source]
        source: serde_json::Error,
    },
    #[error("invalid body: {0}")]
    InvalidBody(#[from] GeometryError),
    #[error("nothing to render")]
    EmptyScene,
    #[error("{stage}: {message}")]
    Stage { stage: &'static str, message: String },
}

pub fn read_text(path: &Path) -> Result<String, IoError> {
    fs::read_to_string(path).map_err(|source| IoError::Io {
        path: path.display().to_string(),
        source,
    })
}

pub fn write_text(path: &Path, text: &str) -> Result<(), IoError> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|source| IoError::Io {
            path: dir.display().to_string(),
            source,
        })?;
    }
    fs::write(path, text).map_err(|source| IoError::Io {
        path: path.display().to_string(),
        source,
    })
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, IoError> {
    let text = read_text(path)?;
    serde_json::from_str(&text).map_err(|source| IoError::Parse {
        path: path.display().to_string(),
        source,
    })
}

/// Pretty JSON with a trailing newline. Reals use the shortest
/// representation that parses back to the same `f64`.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable value");
    s.push('\n');
    s
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), IoError> {
    write_text(path, &to_json(value))
}

pub fn load_body_spec(path: &Path) -> Result<BodySpec, IoError> {
    read_json(path)
}

/// Reads, discretizes and validates a body description.
pub fn load_body(path: &Path) -> Result<SymmetricBody, IoError> {
    Ok(load_body_spec(path)?.build()?)
}

pub fn load_body_with_info(path: &Path, segments: Option<usize>, tolerance: Option<f64>) -> Result<BuiltBody, IoError> {
    let mut spec = load_body_spec(path)?;
    if let Some(n) = segments {
        spec = spec.with_segments(n);
    }
    if tolerance.is_some() {
        spec.tolerance = tolerance;
    }
    Ok(spec.build_with_info()?)
}
