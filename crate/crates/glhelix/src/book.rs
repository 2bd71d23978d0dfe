//! The guide's chapters, re-exported as rustdoc pages so their fenced code
//! blocks run under `cargo test --doc` and cannot drift from the API.

#[doc = include_str!("../../../book/src/intro.md")]
pub mod intro {}

#[doc = include_str!("../../../book/src/profiles.md")]
pub mod profiles {}

#[doc = include_str!("../../../book/src/fields.md")]
pub mod fields {}

#[doc = include_str!("../../../book/src/norms.md")]
pub mod norms {}

#[doc = include_str!("../../../book/src/reduction.md")]
pub mod reduction {}

#[doc = include_str!("../../../book/src/helices.md")]
pub mod helices {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
