//! Polynomials, rational functions, Laurent polynomials and the input parser.

pub mod laurent;
pub mod mobius;
pub mod multi;
pub mod parse;
pub mod upoly;

pub use laurent::{clearing_constant, to_laurent, LaurentPoly};
pub use mobius::{mobius_substitute, Mobius};
pub use multi::{Monomial, PolyQ, Var};
pub use parse::{parse_curve, parse_poly, parse_ratfunc, parse_ratfunc_list};
pub use upoly::{rational_roots, RatFunc, UPoly};
