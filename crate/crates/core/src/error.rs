use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("function index {0} out of range (expected 0..={max})", max = crate::ternary::FUNCTION_COUNT - 1)]
    IndexOutOfRange(u32),

    #[error("invalid ternary value {0} (expected -1, 0 or 1)")]
    InvalidTrit(i64),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid spin system: {0}")]
    InvalidSystem(String),

    #[error("sequence template must use exactly the placeholders $A and $B (found {0})")]
    TemplateArity(String),

    #[error("simulated value {0} outside [-1, 1]")]
    RawOutOfRange(f64),

    #[error("magnitude {r} is not encodable with alpha = {alpha}")]
    Unencodable { r: f64, alpha: f64 },

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
