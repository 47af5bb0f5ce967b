//! The direct sum `⊕_z M_{p_z}(ℂ)` at finite truncation.

pub mod block;
pub mod growth;
pub mod matrix;

pub use block::{
    diagonal_embed, sandwich_check, socle_norm_op, socle_norms_l1_sup, two_sided_ideal_check, BlockElement,
    DimensionSequence, Sandwich, TwoSidedReport,
};
pub use growth::{
    ell_min_max, gamma_block_enumeration, growth_condition_check, nondecreasing_reorder, reorder_with_padding,
    standard_schwartz_classify, BlockEnumeration, Classification, GrowthReport,
};
pub use matrix::CMatrix;
