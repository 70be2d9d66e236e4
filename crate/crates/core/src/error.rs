use std::path::PathBuf;

use crate::label::ClassLabel;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("malformed style profile: {0}")]
    ProfileParse(String),

    /// A value violates a documented invariant; `field` is the dotted path of the offender.
    #[error("invalid `{field}`: {reason}")]
    Validation { field: String, reason: String },

    #[error("unsatisfiable page geometry: {0}")]
    UnsatisfiableGeometry(String),

    #[error("asset pool exhausted for class {0}")]
    ExhaustedAssets(ClassLabel),

    #[error("asset pool has no {0} assets")]
    EmptyAssetClass(ClassLabel),

    #[error("failed to load asset {path}: {reason}")]
    AssetLoad { path: PathBuf, reason: String },

    #[error("page composition failed: {0}")]
    ComposeFailure(String),

    #[error("no font mapped for {0}")]
    FontResolution(String),

    #[error("unknown image id {0}")]
    UnknownImage(u64),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),

    #[error("image error: {0}")]
    Image(#[from] image::ImageError),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn validation(field: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Validation {
            field: field.into(),
            reason: reason.into(),
        }
    }
}
