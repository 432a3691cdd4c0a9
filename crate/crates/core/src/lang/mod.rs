//! A call-by-value λ-calculus with naturals: a definitional interpreter
//! into the delay monad, a compiler to a stack machine, and a fuel-bounded
//! compiler-correctness check.
//!
//! Both evaluators take one step per β-reduction, but correctness is only
//! claimed up to weak bisimilarity: the two runs must agree on whether and
//! to what they terminate, not on how many steps it takes.

mod eval;
mod syntax;
mod vm;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub use eval::{eval, eval_in, eval_lfp, interp_functional, Env, Frame, Outcome, Value};
pub use syntax::{parse, ParseError, ParseErrorKind, Term};
pub use vm::{compile, exec, Code, Instr, Step, VmState};

use crate::seq::{bisim_within, Seq, Verdict};

/// Compare `eval(t)` with `exec(compile(t))` at `fuel`, closures counting
/// as equal to each other.
pub fn agree_within(t: &Term, fuel: usize) -> Verdict {
    let interpreted = Seq::of_delay(&eval(t)).map(|v| v.outcome());
    let compiled = Seq::of_delay(&exec(&compile(t))).map(|v| v.outcome());
    bisim_within(&interpreted, &compiled, fuel)
}

/// A closed term with at most `size` nodes, determined by `seed`.
///
/// The generator favours applications of λs so that terms actually
/// reduce, and occasionally plants self-application to get divergence.
pub fn gen_term(seed: u64, size: usize) -> Term {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    build(&mut rng, size.max(1), 0)
}

fn leaf(rng: &mut ChaCha8Rng, depth: usize) -> Term {
    if depth > 0 && rng.random_bool(0.7) {
        Term::var(rng.random_range(0..depth))
    } else {
        Term::lit(rng.random_range(0..10))
    }
}

fn build(rng: &mut ChaCha8Rng, budget: usize, depth: usize) -> Term {
    if budget == 1 {
        return leaf(rng, depth);
    }
    match rng.random_range(0..10) {
        0 | 1 => Term::lam(build(rng, budget - 1, depth + 1)),
        2 => Term::suc(build(rng, budget - 1, depth)),
        3 if budget >= 6 => {
            // (\x. x x) e
            let dup = Term::lam(Term::app(Term::var(0), Term::var(0)));
            Term::app(dup, build(rng, budget - 5, depth))
        }
        4..=6 if budget >= 4 => {
            // (\x. body) arg
            let split = rng.random_range(1..=budget - 3);
            let body = build(rng, split, depth + 1);
            let arg = build(rng, budget - 2 - split, depth);
            Term::app(Term::lam(body), arg)
        }
        _ if budget >= 3 => {
            let split = rng.random_range(1..budget - 1);
            let f = build(rng, split, depth);
            let a = build(rng, budget - 1 - split, depth);
            Term::app(f, a)
        }
        _ => leaf(rng, depth),
    }
}
