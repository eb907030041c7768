use std::path::PathBuf;

/// Errors produced by the simulator and its file readers.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error(
        "mode below cutoff: wide side {wide_side_m} m must exceed half the free-space wavelength {wavelength_m} m"
    )]
    BelowCutoff { wavelength_m: f64, wide_side_m: f64 },

    #[error("mode unrealizable at this wide side: mode {mode} gives a non-positive arc radius")]
    UnrealizableMode { mode: f64 },

    #[error("azimuth undefined at x=y=0")]
    OnAxis,

    #[error("degenerate abscissa: all wavefront angles are equal")]
    DegenerateAbscissa,

    #[error("target must contain at least one scatterer")]
    EmptyTarget,

    #[error("{source_name}: line {line}: {message}")]
    Parse {
        source_name: String,
        line: u64,
        message: String,
    },

    #[error("{source_name}: {message}")]
    Format { source_name: String, message: String },

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("angle grids differ: {0}")]
    GridMismatch(String),

    #[error("reference angle {0}° is outside the curve's grid")]
    OutsideGrid(f64),

    #[error("at observation angle {angle_deg}°: {source}")]
    AtAngle {
        angle_deg: f64,
        #[source]
        source: Box<Error>,
    },

    #[error("negative RCS {0} m²")]
    NegativeRcs(f64),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }
}
