//! Weyl sums, uniform-distribution screening and star discrepancy.

pub mod discrepancy;
pub mod udtest;
pub mod weyl;

pub use crate::generators::sequence::difference_family;
pub use discrepancy::{star_discrepancy, DiscrepancyMethod, DiscrepancyReport};
pub use udtest::{
    default_threshold, frequency_budget, ud_test, ud_test_phases, FrequencyModulus, UdOptions,
    UdReport, UdVerdict,
};
pub use weyl::{weyl_sum, weyl_sum_box, weyl_sum_fixed, WeylReport};
