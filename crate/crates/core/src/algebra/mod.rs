//! Weight bases and `gl_N[t]` actions on tensor products of evaluation modules.

mod kostka;
mod module;
mod partition;
mod tensor;

pub use kostka::{compositions, dimension_oracle, kostka};
pub use module::{
    build_embedded_module, find_singular_vector, irreducible_weight_spaces, Ambient, EmbeddedModule, ModuleSpec,
};
pub use partition::Partition;
pub use tensor::{act_e, e_op, enumerate_weight_basis, TensorIndex, WeightSpace};
