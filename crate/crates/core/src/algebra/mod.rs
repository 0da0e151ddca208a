//! The string-topology algebra `L_G = ⊕_{[g]} H_{*+n}(C_g)`: the intersection
//! pairing on subgroup homology, the double-coset splitting, the string
//! product, its independent oracles and the axiom checker.

mod axioms;
mod element;
mod engine;
mod oracle;
mod store;

pub use axioms::{check_axioms, AxiomReport, Law, LawReport, SampleSpec};
pub use element::{LGClass, LGElement};
pub use engine::{CosetSummand, Engine, PairTerm, Perturbation};
pub use oracle::{abelian_oracle, global_intersection_oracle, TrivialDuality};
pub use store::{MemoryStore, Store};
