//! One-dimensional contractions `φ`, their `n`-dimensional counterparts `ψ`
//! and the quantitative lemmas relating them.

pub mod class_i;
pub mod geometry;
pub mod lemmas;
pub mod pl;
pub mod volume;

pub use class_i::{class_i_decide, is_witness, triggers, ClassIVerdict};
pub use geometry::{
    axis, dist_sq, dot, parallel_factor, phi_from_setmap, phi_of, phi_value, Contraction,
    FnContraction, Fold, FoldChain, Identity, StructuredMap,
};
pub use lemmas::{
    almost_affine_check, almost_affine_gap, ball_symdiff_volume, cap_volume, center_distance_bound,
    center_distance_bound_check, convergence_mode_check, kappa, pseudo_contraction_check,
    pseudo_contraction_holds, pseudo_contraction_violation, Body, ConvergenceReport,
};
pub use pl::PlContraction;
pub use volume::{image_volume_brock, image_volume_refined, image_volume_voxel, VoxelVolume};
