//! Electoral control via exact matching.
//!
//! The library models two families of decision problems and the bridges
//! between them:
//!
//! * *control problems*: can a campaign make a preferred candidate win by
//!   adding unregistered voters, or by replacing registered ones with
//!   unregistered ones, under a budget that is either an upper bound or an
//!   exact count — scored by first-last (+1 for a first place, −1 for a
//!   last place) or by 2-approval (+1 for each of the top two places);
//! * *matching problems*: perfect (b-)matchings of edge-colored multigraphs
//!   with prescribed color counts, maximum-cardinality and maximum-weight
//!   b-matchings, and families of disjoint cycles with a prescribed total
//!   length.
//!
//! [`reductions`] holds the instance transformations in both directions,
//! [`matching`] the matching engines (brute-force oracles, a randomized
//! exact-matching decider, and an exact-integer blossom matcher), and
//! [`solve`] the user-facing solvers that compose them.

pub mod election;
pub mod graph;
pub mod matching;
pub mod reductions;
pub mod solve;
