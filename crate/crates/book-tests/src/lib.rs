//! Runs the code blocks of the guide in `book/src` as doc-tests. mdbook
//! cannot link against workspace crates on its own.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}
#[doc = include_str!("../../../book/src/models.md")]
pub mod models {}
#[doc = include_str!("../../../book/src/special-functions.md")]
pub mod special_functions {}
#[doc = include_str!("../../../book/src/poles.md")]
pub mod poles {}
#[doc = include_str!("../../../book/src/time-delay.md")]
pub mod time_delay {}
#[doc = include_str!("../../../book/src/gamow.md")]
pub mod gamow {}
#[doc = include_str!("../../../book/src/oracle.md")]
pub mod oracle {}
#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
