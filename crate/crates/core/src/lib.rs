//! Exact computer algebra for the Frobenius manifolds M_{m,n} and the
//! principal two-component BKP hierarchy.

pub mod dual;
pub mod error;
pub mod hierarchy;
pub mod io;
pub mod manifold;
pub mod numeric;
pub mod poly;
pub mod potential;
pub mod radical;
pub mod sample;
pub mod scalar;
pub mod series;
pub mod submanifold;

pub use dual::Dual;
pub use error::{Error, Result, Window};
pub use poly::Poly;
pub use radical::{Radical, RadicalField};
pub use scalar::{gamma_ratio, q, qi, Scalar, Q};
pub use series::{At, Parity, Selector, Series, Side};
