//! The shift (adjacency) operator `(Sf)(u) = sum_{v ~ u} f(v)` on lp spaces of
//! infinite graphs.
//!
//! * [`graph`]: neighbor oracles, BFS truncations, coordination sequences
//! * [`families`]: lattices, tessellations, ladder, ray, tail graphs, infinite comb, rooted trees
//! * [`lp`]: applying the shift, lp norms, witness functions and certified norm brackets
//! * [`kernel`]: kernel elements of the shift on leafless trees and their classification
//! * [`poly`]: exact polynomial families and real root isolation
//! * [`spectra`]: eigenvalues and spectra of finite graphs with an infinite tail, and of the infinite comb

pub mod error;
pub mod families;
pub mod graph;
pub mod kernel;
pub mod lp;
pub mod poly;
pub mod spectra;

pub use error::{Error, Result};
pub use families::{
    make_homogeneous, make_infinite_comb, make_tail_graph, make_tree, FamilyKind, Homogeneous,
    NamedSequence, TSequence, TailKind, TreeSpec,
};
pub use graph::{
    degree_bounds, euclidean_ratio, gamma_sequence, gamma_sequence_with_cap, truncate, truncate_with_cap,
    GammaSequence,
    GraphFamily, TailRole, Truncation, VertexId, DEFAULT_VERTEX_CAP,
};
pub use lp::{Exponent, LpFunction, NormBracket, WitnessKind};
pub use spectra::{Branch, Spectrum, TailEigenpair};
