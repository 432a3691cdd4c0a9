//! The delay monad: computations that produce an answer now, or take one
//! more step and try again later.
//!
//! A [`Delay`] is a lazily unfolded, memoized cell. Observing it yields an
//! [`Observed`] value: either the answer, or the rest of the computation.
//! Every node computes its observation at most once, so observing the same
//! `Delay` twice always gives equal results and re-running a computation with
//! more fuel only pays for the new steps.
//!
//! Values are single-threaded (`Rc` inside). Cloning a `Delay` is cheap and
//! shares the memoized unfolding.

use std::cell::{Cell, OnceCell};
use std::fmt;
use std::rc::Rc;

type Thunk<A> = Box<dyn FnOnce() -> Observed<A>>;

/// One unfolding of a [`Delay`].
#[derive(Clone)]
pub enum Observed<A> {
    Now(A),
    Later(Delay<A>),
}

impl<A: fmt::Debug> fmt::Debug for Observed<A> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Observed::Now(a) => f.debug_tuple("Now").field(a).finish(),
            Observed::Later(_) => f.write_str("Later(..)"),
        }
    }
}

impl<A> Observed<A> {
    pub fn is_now(&self) -> bool {
        matches!(self, Observed::Now(_))
    }
}

/// Result of running a [`Delay`] for a bounded number of steps.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RunResult<A> {
    /// The computation produced `value` after peeling exactly `steps`
    /// `later` layers.
    Converged {
        value: A,
        steps: usize,
    },
    Timeout,
}

impl<A> RunResult<A> {
    pub fn value(&self) -> Option<&A> {
        match self {
            RunResult::Converged { value, .. } => Some(value),
            RunResult::Timeout => None,
        }
    }

    pub fn steps(&self) -> Option<usize> {
        match self {
            RunResult::Converged { steps, .. } => Some(*steps),
            RunResult::Timeout => None,
        }
    }

    pub fn map<B>(self, f: impl FnOnce(A) -> B) -> RunResult<B> {
        match self {
            RunResult::Converged { value, steps } => RunResult::Converged {
                value: f(value),
                steps,
            },
            RunResult::Timeout => RunResult::Timeout,
        }
    }
}

enum Node<A> {
    /// The guarded fixpoint `never = later(never)`, without allocating a
    /// fresh node per step.
    Never,
    Lazy {
        cell: OnceCell<Observed<A>>,
        thunk: Cell<Option<Thunk<A>>>,
    },
}

impl<A> Drop for Node<A> {
    // Long memoized `later` chains would otherwise be dropped recursively.
    fn drop(&mut self) {
        let mut next = match self {
            Node::Lazy { cell, .. } => match cell.take() {
                Some(Observed::Later(d)) => Some(d),
                _ => None,
            },
            Node::Never => None,
        };
        while let Some(Delay(rc)) = next.take() {
            let Some(mut node) = Rc::into_inner(rc) else {
                break;
            };
            if let Node::Lazy { cell, .. } = &mut node {
                if let Some(Observed::Later(d)) = cell.take() {
                    next = Some(d);
                }
            }
        }
    }
}

/// A possibly non-terminating computation producing an `A`.
pub struct Delay<A>(Rc<Node<A>>);

impl<A> Clone for Delay<A> {
    fn clone(&self) -> Self {
        Delay(Rc::clone(&self.0))
    }
}

impl<A> fmt::Debug for Delay<A> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &*self.0 {
            Node::Never => f.write_str("Delay(never)"),
            Node::Lazy { cell, .. } => match cell.get() {
                Some(Observed::Now(_)) => f.write_str("Delay(now ..)"),
                Some(Observed::Later(_)) => f.write_str("Delay(later ..)"),
                None => f.write_str("Delay(<unobserved>)"),
            },
        }
    }
}

impl<A: Clone + 'static> Delay<A> {
    fn ready(observed: Observed<A>) -> Self {
        Delay(Rc::new(Node::Lazy {
            cell: OnceCell::from(observed),
            thunk: Cell::new(None),
        }))
    }

    /// An answer available immediately.
    pub fn now(a: A) -> Self {
        Self::ready(Observed::Now(a))
    }

    /// The computation that never produces an answer.
    pub fn never() -> Self {
        Delay(Rc::new(Node::Never))
    }

    /// One extra step in front of `d`.
    pub fn later(d: Delay<A>) -> Self {
        Self::ready(Observed::Later(d))
    }

    /// `later(k())`, with `k` only invoked on first observation.
    ///
    /// This is the building block for guarded corecursion: a function may
    /// refer to itself inside `k` and remain productive.
    pub fn defer(k: impl FnOnce() -> Delay<A> + 'static) -> Self {
        Self::lazy(move || Observed::Later(k()))
    }

    /// A node whose observation is computed by `f` on first demand.
    ///
    /// Unlike [`Delay::defer`] no step is inserted; `f` decides whether
    /// the observation is `Now` or `Later`. `f` must not observe the node
    /// it is building.
    pub fn lazy(f: impl FnOnce() -> Observed<A> + 'static) -> Self {
        Delay(Rc::new(Node::Lazy {
            cell: OnceCell::new(),
            thunk: Cell::new(Some(Box::new(f))),
        }))
    }

    /// `later` applied `n` times to `now(a)`.
    pub fn after(n: usize, a: A) -> Self {
        (0..n).fold(Self::now(a), |d, _| Self::later(d))
    }

    /// Unfold one layer. Memoized.
    ///
    /// # Panics
    ///
    /// If the node is observed re-entrantly from inside its own thunk.
    pub fn observe(&self) -> Observed<A> {
        match &*self.0 {
            Node::Never => Observed::Later(self.clone()),
            Node::Lazy { cell, thunk } => cell
                .get_or_init(|| {
                    let f = thunk
                        .take()
                        .expect("Delay observed re-entrantly while computing itself");
                    f()
                })
                .clone(),
        }
    }

    /// True for [`Delay::never`] and its unfoldings.
    pub(crate) fn is_never(&self) -> bool {
        matches!(&*self.0, Node::Never)
    }

    /// Peel at most `fuel` `later` layers looking for an answer.
    pub fn run_fuel(&self, fuel: usize) -> RunResult<A> {
        let mut cur = self.clone();
        let mut steps = 0;
        loop {
            match cur.observe() {
                Observed::Now(value) => return RunResult::Converged { value, steps },
                Observed::Later(rest) => {
                    if steps == fuel {
                        return RunResult::Timeout;
                    }
                    steps += 1;
                    cur = rest;
                }
            }
        }
    }

    /// Monadic bind. If `self` converges in `k` steps to `a` and `f(a)` in
    /// `m` steps, the result converges in exactly `k + m` steps.
    pub fn bind<B: Clone + 'static>(&self, f: impl Fn(A) -> Delay<B> + 'static) -> Delay<B> {
        bind_shared(self.clone(), Rc::new(f))
    }

    pub fn map<B: Clone + 'static>(&self, f: impl Fn(A) -> B + 'static) -> Delay<B> {
        self.bind(move |a| Delay::now(f(a)))
    }
}

fn bind_shared<A, B>(d: Delay<A>, f: Rc<dyn Fn(A) -> Delay<B>>) -> Delay<B>
where
    A: Clone + 'static,
    B: Clone + 'static,
{
    if let Node::Never = &*d.0 {
        return Delay::never();
    }
    Delay::lazy(move || match d.observe() {
        Observed::Now(a) => f(a).observe(),
        Observed::Later(rest) => Observed::Later(bind_shared(rest, f)),
    })
}
