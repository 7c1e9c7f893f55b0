//! Exact symbolic computation for the Kronecker quantum cluster algebra with
//! principal coefficients.
//!
//! The crate is layered bottom-up:
//!
//! - [`qtorus`]: quantum torus arithmetic over `Z[v^{±1}]`, `v^2 = q`.
//! - [`seedmut`]: quantum seeds, compatibility, and mutation.
//! - [`kronrec`]: the Kronecker instance, its cluster variables and
//!   Chebyshev families, and the identity sweeps.
//! - [`repchar`]: Kronecker representations over `F_p`, subrepresentation
//!   counting, and the quantum cluster character.
//! - [`basisdec`]: pointed elements, basis decomposition, and positivity audits.
//! - [`cli`]: the `kronq` command-line front end.

pub mod basisdec;
pub mod cli;
pub mod expr;
pub mod int;
pub mod kronrec;
pub mod qtorus;
pub mod repchar;
pub mod seedmut;
