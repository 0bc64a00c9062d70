//! Finite extensive-form games as sets of quintuples ⟨i, j, w, a, y⟩:
//! player, situation, decision node, action, successor node.
//!
//! [`relation`] holds the set algebra, [`axioms`] decides the eight
//! pentaform axioms, [`tree`] recovers the game tree, [`game`] converts
//! to and from tree-adorned games, and [`analysis`] covers subgames, block
//! composition and recall.

pub mod analysis;
pub mod axioms;
pub mod dot;
pub mod fixtures;
pub mod game;
pub mod io;
pub mod relation;
pub mod tree;
pub mod value;

pub use axioms::{validate, AxiomId, AxiomReport, Violation};
pub use game::{ExtendedReal, GmGame, PentaformGame, RawGmGame, UtilityProfile};
pub use relation::{Coord, Coords, Quintuple, QuintupleSet};
pub use tree::{OutTree, Run};
pub use value::{Atom, Value};
