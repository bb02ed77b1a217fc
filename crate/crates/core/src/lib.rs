pub mod bounds;
pub mod chromatic;
pub mod error;
pub mod graph;
pub mod interpolation;
pub mod poly;
pub mod potts;
pub mod ratio;
pub mod roots;
pub mod zeros;

pub use error::{PottsError, Result};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/graphs.md")]
    mod graphs {}
    #[doc = include_str!("../../../book/src/partition.md")]
    mod partition {}
    #[doc = include_str!("../../../book/src/ratios.md")]
    mod ratios {}
    #[doc = include_str!("../../../book/src/bounds.md")]
    mod bounds {}
    #[doc = include_str!("../../../book/src/zeros.md")]
    mod zeros {}
    #[doc = include_str!("../../../book/src/counting.md")]
    mod counting {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
