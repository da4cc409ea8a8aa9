// mdbook cannot run the listings of a book against a library crate, so each
// chapter is pulled in as the docs of an empty module and `cargo test --doc`
// runs them. One module per chapter keeps failures traceable to a file.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}
#[doc = include_str!("../../../book/src/networks.md")]
pub mod networks {}
#[doc = include_str!("../../../book/src/markov.md")]
pub mod markov {}
#[doc = include_str!("../../../book/src/morphisms.md")]
pub mod morphisms {}
#[doc = include_str!("../../../book/src/algebra.md")]
pub mod algebra {}
#[doc = include_str!("../../../book/src/linear.md")]
pub mod linear {}
#[doc = include_str!("../../../book/src/structure.md")]
pub mod structure {}
#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
#[doc = include_str!("../../../README.md")]
pub mod readme {}
