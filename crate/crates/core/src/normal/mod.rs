//! Normal numbers built by concatenating digit expansions, and their
//! block statistics.

pub mod stats;
pub mod stream;

pub use stats::{block_frequencies, normality_report, proxy_points, window_digits, BlockTable, NormalityReport};
pub use stream::{
    champernowne_digits, digit_prefix, digits_to_string, Construction, DigitStream, StreamSpec,
    MAX_DIGITS,
};
