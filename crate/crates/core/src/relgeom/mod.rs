//! Peripheral structures, deep and transition points, Floyd metrics,
//! partial cones and their types.

mod cones;
mod floyd;
mod peripheral;
mod stability;
mod transition;

pub use cones::{
    companion_cone, cone_members, enumerate_types, in_cone, in_partial_cone, partial_cone_members,
    partial_cone_type, translated_cone, type_soundness, Companion, PartialConeType, TypeCensus,
};
pub use floyd::{floyd_distance, floyd_length, tree_floyd_distance, FloydInterval};
pub use peripheral::{CosetId, DistanceBound, PeripheralIndex, PeripheralStructure};
pub use stability::{transition_stability, visibility_table, StabilityReport, VisibilityRow};
pub use transition::{path_of, Classifier, Verdict, VertexClassification};
