//! Representations of a bound linear quiver over a prime field.

mod decompose;
mod exact;
mod ext;
mod hom;
mod module;
mod morphism;
mod quiver;
mod submodules;

pub use decompose::{
    decompose, decompose_with, DecomposeOptions, Decomposition, DEFAULT_EXHAUSTION_CAP,
};
pub use exact::{cokernel, image, kernel, quotient_by_bases, submodule_from_bases, Ses};
pub use ext::{ext_dim, is_split, realize_blocks, ExtSpace};
pub use hom::{express_in_span, factor_through_source, factor_through_target, hom_dim, hom_space};
pub use module::Module;
pub use morphism::{DirectSum, Morphism};
pub use quiver::QuiverPresentation;
pub use submodules::{for_each_submodule, submodules, DEFAULT_SUBMODULE_DIM_CAP};
