//! Riemannian-manifold Hamiltonian Monte Carlo, Lagrangian Monte Carlo and
//! Langevin mixture kernels, with the benchmark targets and convergence
//! diagnostics used to compare them.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod diagnostics;
pub mod error;
pub mod fd;
pub mod geometry;
pub mod hamiltonian;
pub mod integrators;
pub mod kernels;
pub mod linalg;
pub mod targets;

pub use error::{Error, Result};

use rand_chacha::ChaCha8Rng;

/// Per-chain generator: chain `i` reads stream `i` of the base seed, so draws
/// do not depend on how chains are scheduled.
pub fn chain_rng(base_seed: u64, chain_index: u64) -> ChaCha8Rng {
    use rand::SeedableRng;
    let mut rng = ChaCha8Rng::seed_from_u64(base_seed);
    rng.set_stream(chain_index);
    rng
}
