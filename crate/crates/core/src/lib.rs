//! Exact p-adic cohomology of a catalog of smooth complete varieties over
//! finite fields.
//!
//! The engine works at a finite Witt precision `n` throughout:
//!
//! * [`fq`]: arithmetic in `F_q`, `q = p^f`, with a fixed reproducible
//!   modulus polynomial per `(p, f)`;
//! * [`witt`]: the truncated Witt ring `W_n(F_q)` with Frobenius `σ`,
//!   Verschiebung `V` and Teichmüller lifts;
//! * [`wittpoly`]: the universal sum/product polynomials behind the Witt
//!   ring operations, computed exactly over `ℤ`;
//! * [`module`]: graded modules over the Raynaud ring: components with
//!   semilinear `F`, `V` and a differential `d` subject to `FV = VF = p`,
//!   `d² = 0`, `FdV = d`;
//! * [`raynaud`]: the `(n, K)`-truncated Raynaud ring itself, its normal
//!   form multiplication and the augmentation onto `W_n`;
//! * [`complex`]: bounded complexes of graded modules seen as bicomplexes:
//!   columns, cohomology, shifts, Tate twists, derived mod-`p^m` reduction;
//! * [`linalg`]: Smith normal form and subquotient presentations over the
//!   chain rings `ℤ/p^n` and `W_n(F_q)`;
//! * [`solver`]: kernel/cokernel of `1 − F` and mapping-fiber cohomology by
//!   restriction of scalars to `ℤ/p^n`, plus an enumeration oracle;
//! * [`variety`]: closed-form models of `RΓ(WΩ_X)` for the catalog
//!   (the point and projective spaces);
//! * [`cohomology`]: the top-level `H^i(X, ℤ_p(r))` and
//!   `H^i(X, ℤ/p^m(r))` computations and the table driver.
//!
//! Every value is immutable after construction and every operation is a pure
//! function, so the whole crate is safe to use from multiple threads.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod cohomology;
pub mod complex;
pub mod error;
pub mod fq;
pub mod linalg;
pub mod module;
pub mod raynaud;
pub mod semilinear;
pub mod solver;
pub mod variety;
pub mod witt;
pub mod wittpoly;

pub use error::Error;
pub use fq::{FieldDesc, FqElem};
pub use module::{make_unit, DSumModel, GradedRModule};
pub use semilinear::SemilinearMap;
pub use witt::WittVec;
