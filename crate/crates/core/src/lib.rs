//! Soft-skill detection and disambiguation for job-market text.
//!
//! The pipeline goes: normalize raw text ([`preprocess`]), find occurrences
//! of lexicon phrases ([`lexicon`], [`matcher`]), cut a context snippet
//! around each occurrence, turn snippets into classifier inputs under one of
//! four representations ([`represent`], [`embed`]), and classify each input
//! as describing the job candidate or something else ([`model`]). The
//! [`eval`] module provides metrics and precision-fixed threshold
//! calibration, and [`augment`] builds weakly-labeled training data from
//! seed skills.

pub mod augment;
pub mod embed;
pub mod error;
pub mod eval;
pub mod lexicon;
pub mod matcher;
pub mod model;
pub mod preprocess;
pub mod records;
pub mod represent;

pub use error::Error;
pub use represent::Label;

/// Result alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

/// Mask token substituted for each skill word under masking.
pub const MASK_TOKEN: &str = "xxx";
/// Opening tag inserted before the skill under tagging.
pub const BEGIN_TOKEN: &str = "<begin>";
/// Closing tag inserted after the skill under tagging.
pub const END_TOKEN: &str = "<end>";

/// Tokens with special meaning in classifier inputs. They may not occur in
/// lexicon phrases or matcher input.
pub const RESERVED_TOKENS: [&str; 3] = [MASK_TOKEN, BEGIN_TOKEN, END_TOKEN];

/// Returns true if `token` is one of the reserved vocabulary entries.
pub fn is_reserved_token(token: &str) -> bool {
    RESERVED_TOKENS.contains(&token)
}
