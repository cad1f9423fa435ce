//! Bit-string commitment over unfair noisy channels.
//!
//! [`capacity`] derives instance parameters, [`channel`] and [`hashing`]
//! provide the primitives, [`protocol`] runs the two parties and
//! [`adversary`] measures what cheating buys at tiny sizes. [`entropy`]
//! computes entropies of small explicit distributions and [`harness`] turns
//! all of it into seeded reports.

pub mod adversary;
pub mod bits;
pub mod capacity;
pub mod channel;
pub mod entropy;
pub mod error;
pub mod harness;
pub mod hashing;
pub mod protocol;

// The guide's snippets run as doctests.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/capacity.md")]
    mod capacity {}
    #[doc = include_str!("../../../book/src/channel.md")]
    mod channel {}
    #[doc = include_str!("../../../book/src/hashing.md")]
    mod hashing {}
    #[doc = include_str!("../../../book/src/protocol.md")]
    mod protocol {}
    #[doc = include_str!("../../../book/src/adversary.md")]
    mod adversary {}
    #[doc = include_str!("../../../book/src/entropy.md")]
    mod entropy {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
