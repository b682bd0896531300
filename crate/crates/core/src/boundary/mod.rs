//! Exact boundary model for free groups: the boundary is the space of
//! infinite reduced words, cylinders are its basic open sets and the
//! Patterson–Sullivan measure is the uniform measure on cylinders.
//!
//! Geodesics in a tree are unique, so shadows and strong shadows coincide;
//! every report says so.

mod conformal;
mod cylinder;
mod shadow;

pub use conformal::{busemann, verify_conformality, ConformalityReport, ConformalityRow};
pub use cylinder::{children, cylinder_mass, patterson_cylinder_mass, total_mass};
pub use shadow::{
    shadow_decompose, verify_partial_shadow_lemma, verify_shadow_lemma, ShadowDecomposition, ShadowKind,
    ShadowLemmaReport, ShadowRow,
};

pub(crate) const TREE_NOTE: &str = "tree model: geodesics are unique, so shadows and strong shadows coincide";
