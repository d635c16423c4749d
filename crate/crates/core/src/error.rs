use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("cannot parse `{0}` as a scalar")]
pub struct ParseScalarError(pub String);

#[derive(Debug, Error)]
pub enum Error {
    /// The chord-midpoint (Brock) map is only defined here on single intervals.
    #[error("map requires a single interval, got {components} components")]
    MultiComponentInput { components: usize },

    #[error("dyadic chain index k={k} outside [-2^(2m), 0] for m={m}")]
    IndexOutOfRange { k: i64, m: u32 },

    #[error("segment slope {slope} is outside [-1, 1]")]
    NotLipschitz { slope: String },

    #[error("invalid piecewise-linear data: {0}")]
    InvalidContraction(String),

    #[error("image of [{lo}, {hi}] is not a ball: {image}")]
    NotABall {
        lo: String,
        hi: String,
        image: String,
    },

    #[error("dimension {0} is not supported here")]
    InvalidDimension(usize),

    #[error("images B(psi1(x), r) and B(psi2(x), r) are disjoint (distance {distance} > 2r)")]
    DisjointImages { distance: f64 },

    #[error("direction is not a unit vector (|u|^2 = {norm_sq})")]
    NotUnit { norm_sq: String },

    #[error("fiber grids or directions differ")]
    GridMismatch,

    #[error("fold does not map the voxel grid to itself")]
    GridIncompatibleFold,

    #[error("reflection center {0} is not on the grid or half-grid")]
    MisalignedCenter(String),

    #[error("invalid step function: {0}")]
    InvalidStepFunction(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("set is unbounded or empty where a compact set is required")]
    UnboundedSet,

    #[error("invalid descriptor: {0}")]
    Descriptor(String),

    #[error(transparent)]
    Parse(#[from] ParseScalarError),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
