//! Least fixed points of monotone endofunctions on `X → Seq<B>`, computed
//! as the least upper bound of the Kleene chain `⊥, φ(⊥), φ²(⊥), ...`.
//!
//! ω-continuity of `φ` is a proof obligation of the caller and is not
//! checked; it is what makes the result an actual fixed point. Writing the
//! least upper bound down only needs the chain, i.e. monotonicity, and a
//! non-monotone `φ` shows up as a [`ChainViolation`](crate::seq::ChainViolation)
//! when the result is queried.

use std::cell::{Cell, OnceCell, RefCell};
use std::fmt;
use std::rc::Rc;

use crate::seq::{leq_within, try_bisim_within, ChainViolation, Seq, Verdict};

type TailThunk<A> = Box<dyn FnOnce() -> Stream<A>>;

struct StreamNode<A> {
    head: A,
    tail: OnceCell<Stream<A>>,
    thunk: Cell<Option<TailThunk<A>>>,
}

impl<A> Drop for StreamNode<A> {
    fn drop(&mut self) {
        let mut next = self.tail.take();
        while let Some(Stream(rc)) = next.take() {
            if let Some(mut node) = Rc::into_inner(rc) {
                next = node.tail.take();
            }
        }
    }
}

/// An infinite stream with a lazily produced, memoized tail.
pub struct Stream<A>(Rc<StreamNode<A>>);

impl<A> Clone for Stream<A> {
    fn clone(&self) -> Self {
        Stream(Rc::clone(&self.0))
    }
}

impl<A: fmt::Debug> fmt::Debug for Stream<A> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Stream({:?} :: ..)", self.0.head)
    }
}

impl<A: Clone + 'static> Stream<A> {
    pub fn cons(head: A, tail: impl FnOnce() -> Stream<A> + 'static) -> Self {
        Stream(Rc::new(StreamNode {
            head,
            tail: OnceCell::new(),
            thunk: Cell::new(Some(Box::new(tail))),
        }))
    }

    pub fn head(&self) -> &A {
        &self.0.head
    }

    pub fn tail(&self) -> Stream<A> {
        self.0
            .tail
            .get_or_init(|| {
                let k = self
                    .0
                    .thunk
                    .take()
                    .expect("stream tail forced re-entrantly");
                k()
            })
            .clone()
    }

    /// `a, f(a), f(f(a)), ...`
    pub fn iterate(a: A, f: impl Fn(&A) -> A + 'static) -> Self {
        fn go<A: Clone + 'static>(a: A, f: Rc<dyn Fn(&A) -> A>) -> Stream<A> {
            let next = f(&a);
            Stream::cons(a, move || go(next, f))
        }
        go(a, Rc::new(f))
    }

    /// `f(0), f(1), f(2), ...`
    pub fn from_fn(f: impl Fn(usize) -> A + 'static) -> Self {
        fn go<A: Clone + 'static>(n: usize, f: Rc<dyn Fn(usize) -> A>) -> Stream<A> {
            Stream::cons(f(n), move || go(n + 1, f))
        }
        go(0, Rc::new(f))
    }

    /// `items` repeated forever.
    ///
    /// # Panics
    ///
    /// If `items` is empty.
    pub fn cycle(items: Vec<A>) -> Self {
        assert!(!items.is_empty(), "cannot cycle an empty list");
        let items = Rc::new(items);
        Self::from_fn(move |n| items[n % items.len()].clone())
    }

    /// The first `n` heads.
    pub fn prefix(&self, n: usize) -> Vec<A> {
        let mut out = Vec::with_capacity(n);
        let mut cur = self.clone();
        for _ in 0..n {
            out.push(cur.head().clone());
            cur = cur.tail();
        }
        out
    }
}

/// `iterate(a, f)` as a free function.
pub fn stream_iterate<A: Clone + 'static>(a: A, f: impl Fn(&A) -> A + 'static) -> Stream<A> {
    Stream::iterate(a, f)
}

pub fn stream_prefix<A: Clone + 'static>(xs: &Stream<A>, n: usize) -> Vec<A> {
    xs.prefix(n)
}

type Arrow<X, B> = Rc<dyn Fn(&X) -> Seq<B>>;
type Functional<X, B> = Rc<dyn Fn(KleisliFn<X, B>) -> KleisliFn<X, B>>;

/// A partial function `X → B⊥`, ordered pointwise.
pub struct KleisliFn<X, B>(Arrow<X, B>);

impl<X, B> Clone for KleisliFn<X, B> {
    fn clone(&self) -> Self {
        KleisliFn(Rc::clone(&self.0))
    }
}

impl<X: 'static, B: Clone + 'static> KleisliFn<X, B> {
    pub fn new(f: impl Fn(&X) -> Seq<B> + 'static) -> Self {
        KleisliFn(Rc::new(f))
    }

    /// The everywhere-undefined function.
    pub fn bottom() -> Self {
        Self::new(|_| Seq::bottom())
    }

    pub fn apply(&self, x: &X) -> Seq<B> {
        (self.0)(x)
    }
}

/// An endofunction on [`KleisliFn`]s. Must be monotone (and ω-continuous
/// for [`lfp`] to be a fixed point).
pub struct Endo<X, B>(Functional<X, B>);

impl<X, B> Clone for Endo<X, B> {
    fn clone(&self) -> Self {
        Endo(Rc::clone(&self.0))
    }
}

impl<X: 'static, B: Clone + 'static> Endo<X, B> {
    pub fn new(phi: impl Fn(KleisliFn<X, B>) -> KleisliFn<X, B> + 'static) -> Self {
        Endo(Rc::new(phi))
    }

    pub fn apply(&self, f: KleisliFn<X, B>) -> KleisliFn<X, B> {
        (self.0)(f)
    }

    /// `φⁿ(⊥)`.
    pub fn approximant(&self, n: usize) -> KleisliFn<X, B> {
        (0..n).fold(KleisliFn::bottom(), |f, _| self.apply(f))
    }
}

struct Approximants<X, B> {
    phi: Endo<X, B>,
    chain: RefCell<Vec<KleisliFn<X, B>>>,
}

impl<X: 'static, B: Clone + 'static> Approximants<X, B> {
    fn get(&self, n: usize) -> KleisliFn<X, B> {
        loop {
            let last = {
                let chain = self.chain.borrow();
                if let Some(f) = chain.get(n) {
                    return f.clone();
                }
                chain.last().cloned()
            };
            let next = match last {
                Some(f) => self.phi.apply(f),
                None => KleisliFn::bottom(),
            };
            self.chain.borrow_mut().push(next);
        }
    }
}

/// Least fixed point of `phi`: `x ↦ ⊔ₙ φⁿ(⊥)(x)`.
///
/// The approximants `φⁿ(⊥)` are built once and shared by every argument.
/// Querying the result on a non-monotone `phi` may fail with a
/// [`ChainViolation`].
pub fn lfp<X, B>(phi: &Endo<X, B>) -> KleisliFn<X, B>
where
    X: Clone + 'static,
    B: Clone + PartialEq + fmt::Debug + 'static,
{
    let approx = Rc::new(Approximants {
        phi: phi.clone(),
        chain: RefCell::new(Vec::new()),
    });
    KleisliFn::new(move |x: &X| {
        let approx = Rc::clone(&approx);
        let x = x.clone();
        Seq::lub(move |n| approx.get(n).apply(&x))
    })
}

/// Sampled chain check: `φⁿ(⊥)(x) ⊑ φⁿ⁺¹(⊥)(x)` at `fuel`.
pub fn chain_verdict<X, B>(phi: &Endo<X, B>, x: &X, n: usize, fuel: usize) -> Verdict
where
    X: 'static,
    B: Clone + PartialEq + 'static,
{
    let lower = phi.approximant(n);
    let upper = phi.apply(lower.clone());
    leq_within(&lower.apply(x), &upper.apply(x), fuel)
}

/// Sampled monotonicity check on one pair: if `f ⊑ g` is not refuted on
/// `xs`, returns the verdict for `φ(f) ⊑ φ(g)` on `xs`; `None` when the
/// premise is refuted.
pub fn monotone_on<X, B>(
    phi: &Endo<X, B>,
    f: &KleisliFn<X, B>,
    g: &KleisliFn<X, B>,
    xs: &[X],
    fuel: usize,
) -> Option<Verdict>
where
    X: 'static,
    B: Clone + PartialEq + 'static,
{
    if xs
        .iter()
        .any(|x| leq_within(&f.apply(x), &g.apply(x), fuel).is_false())
    {
        return None;
    }
    let (pf, pg) = (phi.apply(f.clone()), phi.apply(g.clone()));
    Some(
        xs.iter()
            .map(|x| leq_within(&pf.apply(x), &pg.apply(x), fuel))
            .fold(Verdict::True, Verdict::and),
    )
}

/// `lfp(φ)(x) ~ φ(lfp(φ))(x)` at `fuel`.
pub fn fixed_point_verdict<X, B>(
    phi: &Endo<X, B>,
    x: &X,
    fuel: usize,
) -> Result<Verdict, ChainViolation>
where
    X: Clone + 'static,
    B: Clone + PartialEq + fmt::Debug + 'static,
{
    let fix = lfp(phi);
    let unfolded = phi.apply(fix.clone());
    // Scan the whole prefix so a broken chain is reported even when an
    // early entry already converged.
    let at_x = fix.apply(x);
    at_x.try_at(fuel)?;
    try_bisim_within(&at_x, &unfolded.apply(x), fuel)
}

/// `Φ(f)(a :: as) = if q(a) then unit(a) else f(as)`.
pub fn search_functional<A>(q: impl Fn(&A) -> bool + 'static) -> Endo<Stream<A>, A>
where
    A: Clone + 'static,
{
    let q = Rc::new(q);
    Endo::new(move |f: KleisliFn<Stream<A>, A>| {
        let q = Rc::clone(&q);
        KleisliFn::new(move |xs: &Stream<A>| {
            if q(xs.head()) {
                Seq::unit(xs.head().clone())
            } else {
                f.apply(&xs.tail())
            }
        })
    })
}

/// First element of `xs` satisfying `q`, as the least fixed point of
/// [`search_functional`]. Pending forever if there is none.
pub fn search<A>(q: impl Fn(&A) -> bool + 'static, xs: &Stream<A>) -> Seq<A>
where
    A: Clone + PartialEq + fmt::Debug + 'static,
{
    lfp(&search_functional(q)).apply(xs)
}
