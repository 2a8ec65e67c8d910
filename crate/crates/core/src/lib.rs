pub mod enumerate;
pub mod error;
pub mod lattice;
pub mod montecarlo;
pub mod structure;
pub mod surgery;
pub mod verify;

pub use error::{Error, Result};
pub use lattice::{Bridge, LatticePoint, SelfAvoidingWalk, Step, Walk};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../README.md")]
    mod readme {}
    #[doc = include_str!("../../../book/src/walks.md")]
    mod walks {}
    #[doc = include_str!("../../../book/src/counting.md")]
    mod counting {}
    #[doc = include_str!("../../../book/src/structure.md")]
    mod structure {}
    #[doc = include_str!("../../../book/src/surgery.md")]
    mod surgery {}
    #[doc = include_str!("../../../book/src/sampling.md")]
    mod sampling {}
    #[doc = include_str!("../../../book/src/verification.md")]
    mod verification {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
