//! Prime-field substrate: the modulus, dense subsets of `Z_p`, set algebra,
//! bipartite pair graphs and exact convolution.

mod bitmap;
pub mod conv;
pub mod graph;
pub mod ops;
pub mod prime;
pub mod repfn;
pub mod set;
pub mod setspec;

pub use graph::{partial_sumset, PairGraph};
pub use ops::{diffset, dilate, negate, prodset, quotient_set, reciprocals, sumset, translate};
pub use prime::{is_prime, Prime, DEFAULT_MAX_P};
pub use repfn::{cyclic_convolve_exact, RepFn};
pub use set::{FpSet, SetJson};
pub use setspec::{parse_set, SetSpec};
