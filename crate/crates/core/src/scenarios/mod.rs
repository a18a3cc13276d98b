//! Builders for concrete seeds and elements: the standard `sl_2` quiver with
//! its generator images, `A_n` chains, the Markov quiver and amalgamations.

pub mod amalgam;
pub mod an_chain;
pub mod markov;
pub mod sl2;

pub use amalgam::{amalgamate, coproduct_images, sl2_coproduct, Amalgamation, AmalgamationSpec, Coproduct, TensorOrder};
pub use an_chain::{build_an_chain, build_an_chain_in, check_an_hypotheses, AnChain};
pub use markov::build_markov;
pub use sl2::{build_sl2_standard, sl2_standard_seed, search_sl2, GeneratorImages};
