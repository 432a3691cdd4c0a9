//! Partial computations, executable.
//!
//! * [`delay`]: the delay monad, lazily unfolded computations that either
//!   answer now or take another step.
//! * [`seq`]: monotone sequences, the quotient-free representation of
//!   partial values, with fuel-bounded termination, ordering and
//!   bisimilarity checks and least upper bounds of chains.
//! * [`cpo`]: least fixed points of monotone functionals and the stream
//!   search example.
//! * [`reals`]: exact rationals, Cauchy reals and sign semidecision.
//! * [`lang`]: a small functional language with an interpreter, a compiler
//!   to a stack machine and a compiler-correctness check.
//!
//! ```
//! use partiality::{bisim_within, converges_within, Delay, Seq, Verdict};
//!
//! let slow = Seq::of_delay(&Delay::after(3, 7));
//! assert_eq!(converges_within(&slow, 3).map(|w| w.index), Some(3));
//! assert_eq!(bisim_within(&slow, &Seq::unit(7), 3), Verdict::True);
//! assert_eq!(bisim_within(&Seq::unit(1), &Seq::bottom(), 1000), Verdict::Unknown);
//! ```
//!
//! Everything is single-threaded: values use `Rc` and interior
//! memoization, and are neither `Send` nor `Sync`.

pub mod cpo;
pub mod delay;
pub mod lang;
pub mod laws;
pub mod pairing;
pub mod reals;
pub mod sample;
pub mod seq;

pub use delay::{Delay, Observed, RunResult};
pub use seq::{
    bisim_within, converges_within, leq_within, terminates_with_within, ChainViolation, Progress,
    Seq, Verdict, Witness,
};
