//! Edge-disjoint routing of bounded-degree demand multigraphs in complete
//! grid graphs `K_t^n` (Hamming graphs).
//!
//! Given a demand multigraph `D` on the vertices of `K_t^n` whose maximum
//! degree fits an even budget `q <= floor(t/6) - 1`, [`solve`] returns one
//! trail per demand such that no grid edge is used twice. In particular every
//! perfect pairing of `K_t^n` with `t >= 18` is routable. [`verify`] checks a
//! routing from scratch.
//!
//! ```
//! use gridpair_core::{generate::random_pairing, solve, verify, GridSpec, SolveOptions};
//! use rand::SeedableRng;
//!
//! let spec = GridSpec::new(18, 2).unwrap();
//! let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
//! let demands = random_pairing(spec, &mut rng).unwrap();
//! let routing = solve(&demands, &SolveOptions::default()).unwrap();
//! assert!(verify(&spec, &demands, &routing).ok);
//! ```

pub mod demand;
pub mod error;
pub mod factorization;
pub mod generate;
pub mod grid;
pub mod io;
pub mod router;
pub mod verify;

pub use demand::{choose_q, DemandEdge, DemandGraph, DemandId};
pub use error::{Claim, Error, Result};
pub use grid::{GridSpec, Trail, Vertex};
pub use router::{
    solve, solve_complete, solve_with_report, BaseOptions, PipelineReport, Routing, SolveOptions,
};
pub use verify::{degree_ratio, oracle_solve, verify, VerificationReport, ViolationKind};
