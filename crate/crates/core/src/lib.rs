//! Hironaka's polyhedral resolution game: a host picks a coordinate subset,
//! an agent picks one of its coordinates, and the point set is transformed
//! until it collapses.
//!
//! The crate provides the exact engine for five rule variants, the classical
//! host and agent strategies, an exact bounded solver, UCT planning, the
//! games-per-step benchmark metric, and the file and process formats used by
//! the `hironaka` binary.
//!
//! ```
//! use hironaka::{GameState, VariantRules, CoordinateSubset};
//!
//! let rules = VariantRules::basic_shifted();
//! let start = GameState::from_i64(&[[2, 0, 0], [0, 2, 0], [0, 0, 3]]).unwrap();
//! let all = CoordinateSubset::full(3);
//! let next = rules.apply(&start, all, 2).unwrap();
//! assert_eq!(next.config.to_string(), "{(0,0,1), (0,2,0), (2,0,0)}");
//! assert!(rules.is_terminal(&rules.apply(&start, all, 0).unwrap()));
//! ```

pub mod cli;
pub mod error;
pub mod eval;
pub mod game;
pub mod geometry;
pub mod io;
pub mod lp;
pub mod policy;
pub mod scalar;
pub mod search;
pub mod wire;

pub use error::{GameError, Result};
pub use game::{AgentMove, GameState, HostMove, StateKey, Variant, VariantRules};
pub use geometry::{CoordinateSubset, Point, PointConfiguration};
pub use io::StateDocument;
pub use policy::{AgentPolicy, AgentSpec, HostPolicy, HostSpec, SeatRngs};
pub use scalar::Scalar;
pub use search::{minimax_solve, MctsConfig, MinimaxSolver, SolveResult, SolveValue};
