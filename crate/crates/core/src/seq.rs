//! Monotone sequences `ℕ → A + 1`: the quotient-free carrier for partial
//! values.
//!
//! A [`Seq`] is pending until it possibly settles on one value, after which
//! it stays on that value forever. Queries are lazy and memoized, so asking
//! for index `n` after index `n` is O(1).
//!
//! Equality of partial values is not decidable. The checkers in this module
//! (`leq_within`, `bisim_within`, ...) inspect a finite prefix and answer
//! with a three-valued [`Verdict`]: `True` and `False` are final and never
//! change with more fuel, `Unknown` may.

use std::cell::RefCell;
use std::fmt;
use std::rc::Rc;

use thiserror::Error;

use crate::delay::{Delay, Observed};
use crate::pairing::cantor_unpair;

/// One entry of a monotone sequence.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Progress<A> {
    Done(A),
    Pending,
}

impl<A> Progress<A> {
    pub fn is_done(&self) -> bool {
        matches!(self, Progress::Done(_))
    }

    pub fn done(self) -> Option<A> {
        match self {
            Progress::Done(a) => Some(a),
            Progress::Pending => None,
        }
    }

    pub fn map<B>(self, f: impl FnOnce(A) -> B) -> Progress<B> {
        match self {
            Progress::Done(a) => Progress::Done(f(a)),
            Progress::Pending => Progress::Pending,
        }
    }
}

/// Three-valued answer of a fuel-bounded semidecision.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Verdict {
    True,
    False,
    Unknown,
}

impl Verdict {
    /// Conjunction: `False` dominates, then `Unknown`.
    pub fn and(self, other: Verdict) -> Verdict {
        match (self, other) {
            (Verdict::False, _) | (_, Verdict::False) => Verdict::False,
            (Verdict::Unknown, _) | (_, Verdict::Unknown) => Verdict::Unknown,
            _ => Verdict::True,
        }
    }

    pub fn is_true(self) -> bool {
        self == Verdict::True
    }

    pub fn is_false(self) -> bool {
        self == Verdict::False
    }

    pub fn is_decided(self) -> bool {
        self != Verdict::Unknown
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::True => "true",
            Verdict::False => "false",
            Verdict::Unknown => "unknown",
        })
    }
}

/// Minimal convergence witness: `at(index) = Done(value)` and every earlier
/// index is pending.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness<A> {
    pub value: A,
    pub index: usize,
}

/// A `Done` entry found while scanning the table of a least upper bound.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScanHit {
    pub scan_index: usize,
    pub row: usize,
    pub column: usize,
    pub value: String,
}

impl fmt::Display for ScanHit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} at scan index {} (chain element {}, index {})",
            self.value, self.scan_index, self.row, self.column
        )
    }
}

/// The family passed to [`Seq::lub`] was not a chain: its table contains
/// two distinct values.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("lub precondition violated: not a chain, found {first} and {second}")]
pub struct ChainViolation {
    pub first: ScanHit,
    pub second: ScanHit,
}

trait Source<A> {
    /// Entry `n`. Called exactly once for each `n = 0, 1, 2, ...` in order.
    fn next(&mut self, n: usize) -> Result<Progress<A>, ChainViolation>;

    /// Whether the first `Done` entry is known to repeat forever, so the
    /// memo may stop calling `next`.
    fn settles(&self) -> bool {
        true
    }
}

struct Memo<A> {
    prefix: Vec<Progress<A>>,
    settled: bool,
    failure: Option<(usize, ChainViolation)>,
    source: Box<dyn Source<A>>,
}

impl<A: Clone> Memo<A> {
    fn at(&mut self, n: usize) -> Result<Progress<A>, ChainViolation> {
        if let Some(p) = self.prefix.get(n) {
            return Ok(p.clone());
        }
        if self.settled {
            return Ok(self.prefix.last().cloned().unwrap_or(Progress::Pending));
        }
        if let Some((from, err)) = &self.failure {
            if n >= *from {
                return Err(err.clone());
            }
        }
        while self.prefix.len() <= n {
            let i = self.prefix.len();
            match self.source.next(i) {
                Ok(p) => {
                    let done = p.is_done();
                    self.prefix.push(p);
                    if done && self.source.settles() {
                        self.settled = true;
                        break;
                    }
                }
                Err(err) => {
                    self.failure = Some((i, err.clone()));
                    return Err(err);
                }
            }
        }
        Ok(self.prefix[n.min(self.prefix.len() - 1)].clone())
    }
}

enum Repr<A> {
    Const(Progress<A>),
    /// `shift` applied `by` times: pending below `by`.
    Shifted {
        inner: Seq<A>,
        by: usize,
    },
    /// `unshift` applied `by` times.
    Dropped {
        inner: Seq<A>,
        by: usize,
    },
    Memo(RefCell<Memo<A>>),
}

/// A monotone sequence over `A`.
///
/// Every constructor in this crate produces a monotone sequence. Cloning is
/// cheap and shares the memoized prefix. Single-threaded.
pub struct Seq<A>(Rc<Repr<A>>);

impl<A> Clone for Seq<A> {
    fn clone(&self) -> Self {
        Seq(Rc::clone(&self.0))
    }
}

impl<A> fmt::Debug for Seq<A> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &*self.0 {
            Repr::Const(Progress::Pending) => f.write_str("Seq(bottom)"),
            Repr::Const(Progress::Done(_)) => f.write_str("Seq(unit ..)"),
            Repr::Shifted { by, .. } => write!(f, "Seq(shift^{by} ..)"),
            Repr::Dropped { by, .. } => write!(f, "Seq(unshift^{by} ..)"),
            Repr::Memo(m) => write!(f, "Seq(<{} evaluated>)", m.borrow().prefix.len()),
        }
    }
}

struct FnSource<A> {
    f: Box<dyn Fn(usize) -> Progress<A>>,
}

impl<A> Source<A> for FnSource<A> {
    fn next(&mut self, n: usize) -> Result<Progress<A>, ChainViolation> {
        Ok((self.f)(n))
    }
}

struct DelaySource<A> {
    cursor: Delay<A>,
}

impl<A: Clone + 'static> Source<A> for DelaySource<A> {
    fn next(&mut self, _n: usize) -> Result<Progress<A>, ChainViolation> {
        match self.cursor.observe() {
            Observed::Now(a) => Ok(Progress::Done(a)),
            Observed::Later(rest) => {
                self.cursor = rest;
                Ok(Progress::Pending)
            }
        }
    }
}

struct MapSource<A, B> {
    inner: Seq<A>,
    f: Box<dyn Fn(A) -> B>,
}

impl<A: Clone + 'static, B> Source<B> for MapSource<A, B> {
    fn next(&mut self, n: usize) -> Result<Progress<B>, ChainViolation> {
        Ok(self.inner.try_at(n)?.map(&self.f))
    }
}

struct BindSource<A, B> {
    inner: Seq<A>,
    f: Box<dyn Fn(A) -> Seq<B>>,
    /// Least convergence index of `inner` and the continuation it selected.
    found: Option<(usize, Seq<B>)>,
}

impl<A: Clone + 'static, B: Clone + 'static> Source<B> for BindSource<A, B> {
    fn next(&mut self, n: usize) -> Result<Progress<B>, ChainViolation> {
        if self.found.is_none() {
            match self.inner.try_at(n)? {
                Progress::Done(a) => self.found = Some((n, (self.f)(a))),
                Progress::Pending => return Ok(Progress::Pending),
            }
        }
        let (k, next) = self.found.as_ref().expect("set above");
        next.try_at(n - k)
    }
}

struct LubSource<A> {
    family: Box<dyn Fn(usize) -> Seq<A>>,
    pairing: Box<dyn Fn(usize) -> (usize, usize)>,
    rows: Vec<Option<Seq<A>>>,
    chosen: Option<(ScanHit, A)>,
}

impl<A: Clone + PartialEq + fmt::Debug + 'static> LubSource<A> {
    fn row(&mut self, i: usize) -> Seq<A> {
        if self.rows.len() <= i {
            self.rows.resize(i + 1, None);
        }
        self.rows[i].get_or_insert_with(|| (self.family)(i)).clone()
    }
}

impl<A: Clone + PartialEq + fmt::Debug + 'static> Source<A> for LubSource<A> {
    fn next(&mut self, n: usize) -> Result<Progress<A>, ChainViolation> {
        let (i, j) = (self.pairing)(n);
        if let Progress::Done(b) = self.row(i).try_at(j)? {
            match &self.chosen {
                None => {
                    let hit = ScanHit {
                        scan_index: n,
                        row: i,
                        column: j,
                        value: format!("{b:?}"),
                    };
                    self.chosen = Some((hit, b));
                }
                Some((first, a)) if *a != b => {
                    return Err(ChainViolation {
                        first: first.clone(),
                        second: ScanHit {
                            scan_index: n,
                            row: i,
                            column: j,
                            value: format!("{b:?}"),
                        },
                    });
                }
                Some(_) => {}
            }
        }
        Ok(match &self.chosen {
            Some((_, a)) => Progress::Done(a.clone()),
            None => Progress::Pending,
        })
    }

    // Keep scanning after the first value so non-chains are detected.
    fn settles(&self) -> bool {
        false
    }
}

impl<A: Clone + 'static> Seq<A> {
    fn from_repr(repr: Repr<A>) -> Self {
        Seq(Rc::new(repr))
    }

    fn memo(source: impl Source<A> + 'static) -> Self {
        Self::from_repr(Repr::Memo(RefCell::new(Memo {
            prefix: Vec::new(),
            settled: false,
            failure: None,
            source: Box::new(source),
        })))
    }

    /// The sequence that is `Done(a)` everywhere.
    pub fn unit(a: A) -> Self {
        Self::from_repr(Repr::Const(Progress::Done(a)))
    }

    /// The sequence that is pending everywhere.
    pub fn bottom() -> Self {
        Self::from_repr(Repr::Const(Progress::Pending))
    }

    /// `unit(a)` shifted `n` times: pending below `n`, `Done(a)` from `n`.
    pub fn after(n: usize, a: A) -> Self {
        Self::unit(a).shift_by(n)
    }

    /// Wrap an arbitrary function, forcing monotonicity: entry `n` is the
    /// first `Done` value `f` produces at an index `<= n`, if any.
    pub fn from_fn(f: impl Fn(usize) -> Progress<A> + 'static) -> Self {
        Self::memo(FnSource { f: Box::new(f) })
    }

    /// The sequence of a delayed computation: pending once per `later`.
    pub fn of_delay(d: &Delay<A>) -> Self {
        if d.is_never() {
            return Self::bottom();
        }
        Self::memo(DelaySource { cursor: d.clone() })
    }

    /// The delayed computation that takes one step per pending entry.
    pub fn to_delay(&self) -> Delay<A> {
        if self.is_certainly_bottom() {
            return Delay::never();
        }
        fn from_index<A: Clone + 'static>(s: Seq<A>, n: usize) -> Delay<A> {
            Delay::lazy(move || match s.at(n) {
                Progress::Done(a) => Observed::Now(a),
                Progress::Pending => Observed::Later(from_index(s, n + 1)),
            })
        }
        from_index(self.clone(), 0)
    }

    /// Entry `n`, or the chain violation a least upper bound ran into while
    /// computing it.
    pub fn try_at(&self, n: usize) -> Result<Progress<A>, ChainViolation> {
        match &*self.0 {
            Repr::Const(p) => Ok(p.clone()),
            Repr::Shifted { inner, by } => {
                if n < *by {
                    Ok(Progress::Pending)
                } else {
                    inner.try_at(n - by)
                }
            }
            Repr::Dropped { inner, by } => inner.try_at(n + by),
            Repr::Memo(m) => m.borrow_mut().at(n),
        }
    }

    /// Entry `n`.
    ///
    /// # Panics
    ///
    /// If computing the entry hits a [`ChainViolation`].
    pub fn at(&self, n: usize) -> Progress<A> {
        self.try_at(n).unwrap_or_else(|e| panic!("{e}"))
    }

    /// The first `len` entries.
    pub fn prefix(&self, len: usize) -> Vec<Progress<A>> {
        (0..len).map(|n| self.at(n)).collect()
    }

    /// `shift(s)_0 = pending`, `shift(s)_{n+1} = s_n`.
    pub fn shift(&self) -> Self {
        self.shift_by(1)
    }

    pub fn shift_by(&self, k: usize) -> Self {
        if k == 0 || self.is_certainly_bottom() {
            return self.clone();
        }
        match &*self.0 {
            Repr::Shifted { inner, by } => Self::from_repr(Repr::Shifted {
                inner: inner.clone(),
                by: by + k,
            }),
            _ => Self::from_repr(Repr::Shifted {
                inner: self.clone(),
                by: k,
            }),
        }
    }

    /// `unshift(s)_n = s_{n+1}`.
    pub fn unshift(&self) -> Self {
        match &*self.0 {
            Repr::Const(_) => self.clone(),
            Repr::Shifted { inner, by: 1 } => inner.clone(),
            Repr::Shifted { inner, by } => Self::from_repr(Repr::Shifted {
                inner: inner.clone(),
                by: by - 1,
            }),
            Repr::Dropped { inner, by } => Self::from_repr(Repr::Dropped {
                inner: inner.clone(),
                by: by + 1,
            }),
            Repr::Memo(_) => Self::from_repr(Repr::Dropped {
                inner: self.clone(),
                by: 1,
            }),
        }
    }

    /// True when the sequence is pending everywhere by construction.
    ///
    /// This is a sufficient condition only; most divergent sequences are
    /// not recognized.
    pub fn is_certainly_bottom(&self) -> bool {
        match &*self.0 {
            Repr::Const(p) => !p.is_done(),
            Repr::Shifted { inner, .. } | Repr::Dropped { inner, .. } => {
                inner.is_certainly_bottom()
            }
            Repr::Memo(_) => false,
        }
    }

    pub fn ptr_eq(&self, other: &Seq<A>) -> bool {
        Rc::ptr_eq(&self.0, &other.0)
    }

    /// Monadic bind. Entry `n` is `f(a)_{n-k}` where `k` is the least index
    /// at which `self` is `Done(a)`, and pending before `k`.
    pub fn bind<B: Clone + 'static>(&self, f: impl Fn(A) -> Seq<B> + 'static) -> Seq<B> {
        if self.is_certainly_bottom() {
            return Seq::bottom();
        }
        if let Repr::Const(Progress::Done(a)) = &*self.0 {
            return f(a.clone());
        }
        Seq::memo(BindSource {
            inner: self.clone(),
            f: Box::new(f),
            found: None,
        })
    }

    /// Pointwise map; convergence indices are unchanged.
    pub fn map<B: Clone + 'static>(&self, f: impl Fn(A) -> B + 'static) -> Seq<B> {
        match &*self.0 {
            Repr::Const(Progress::Pending) => Seq::bottom(),
            Repr::Const(Progress::Done(a)) => Seq::unit(f(a.clone())),
            _ => Seq::memo(MapSource {
                inner: self.clone(),
                f: Box::new(f),
            }),
        }
    }
}

impl<A: Clone + 'static> Seq<Seq<A>> {
    pub fn join(&self) -> Seq<A> {
        self.bind(|s| s)
    }
}

impl<A: Clone + PartialEq + fmt::Debug + 'static> Seq<A> {
    /// Least upper bound of the family `g` with the Cantor pairing.
    pub fn lub(g: impl Fn(usize) -> Seq<A> + 'static) -> Self {
        Self::lub_with(g, cantor_unpair)
    }

    /// Least upper bound of a chain `g(0) ⊑ g(1) ⊑ ...`.
    ///
    /// Entry `n` looks at the table entries `g(i)_j` for `(i, j) =
    /// pairing(0..=n)` and is `Done(a)` as soon as any of them is. The
    /// family must take at most one value overall; if the scan meets a
    /// second, distinct value, that entry and all later ones fail with a
    /// [`ChainViolation`] naming both hits. `pairing` must be onto `ℕ × ℕ`.
    pub fn lub_with(
        g: impl Fn(usize) -> Seq<A> + 'static,
        pairing: impl Fn(usize) -> (usize, usize) + 'static,
    ) -> Self {
        Self::memo(LubSource {
            family: Box::new(g),
            pairing: Box::new(pairing),
            rows: Vec::new(),
            chosen: None,
        })
    }
}

/// Least index `n <= fuel` at which `s` is done.
pub fn try_converges_within<A: Clone + 'static>(
    s: &Seq<A>,
    fuel: usize,
) -> Result<Option<Witness<A>>, ChainViolation> {
    for n in 0..=fuel {
        if let Progress::Done(value) = s.try_at(n)? {
            return Ok(Some(Witness { value, index: n }));
        }
    }
    Ok(None)
}

/// Least index `n <= fuel` at which `s` is done.
///
/// # Panics
///
/// On a [`ChainViolation`]; use [`try_converges_within`] to handle it.
pub fn converges_within<A: Clone + 'static>(s: &Seq<A>, fuel: usize) -> Option<Witness<A>> {
    try_converges_within(s, fuel).unwrap_or_else(|e| panic!("{e}"))
}

pub fn try_terminates_with_within<A: Clone + PartialEq + 'static>(
    s: &Seq<A>,
    a: &A,
    fuel: usize,
) -> Result<Verdict, ChainViolation> {
    Ok(match try_converges_within(s, fuel)? {
        Some(w) if w.value == *a => Verdict::True,
        Some(_) => Verdict::False,
        None => Verdict::Unknown,
    })
}

/// Does `s` terminate with `a`? `False` only once `s` has produced a
/// different value.
pub fn terminates_with_within<A: Clone + PartialEq + 'static>(
    s: &Seq<A>,
    a: &A,
    fuel: usize,
) -> Verdict {
    try_terminates_with_within(s, a, fuel).unwrap_or_else(|e| panic!("{e}"))
}

pub fn try_leq_within<A: Clone + PartialEq + 'static>(
    s: &Seq<A>,
    t: &Seq<A>,
    fuel: usize,
) -> Result<Verdict, ChainViolation> {
    if s.is_certainly_bottom() || s.ptr_eq(t) {
        return Ok(Verdict::True);
    }
    let Some(ws) = try_converges_within(s, fuel)? else {
        return Ok(Verdict::Unknown);
    };
    Ok(match try_converges_within(t, fuel)? {
        Some(wt) if wt.value == ws.value => Verdict::True,
        Some(_) => Verdict::False,
        None => Verdict::Unknown,
    })
}

/// Fuel-bounded `s ⊑ t`: every value `s` terminates with, `t` terminates
/// with too.
///
/// `True` requires a certificate that holds for all fuel: both sides
/// converged to the same value, `s` is bottom by construction, or `s` and
/// `t` are the same sequence. `False` requires both sides to have
/// converged to different values. Everything else is `Unknown`; in
/// particular a converged `s` against an unconverged `t` is `Unknown`, never
/// `False`, since `t` may still catch up.
///
/// # Panics
///
/// On a [`ChainViolation`] in either argument.
pub fn leq_within<A: Clone + PartialEq + 'static>(s: &Seq<A>, t: &Seq<A>, fuel: usize) -> Verdict {
    try_leq_within(s, t, fuel).unwrap_or_else(|e| panic!("{e}"))
}

pub fn try_bisim_within<A: Clone + PartialEq + 'static>(
    s: &Seq<A>,
    t: &Seq<A>,
    fuel: usize,
) -> Result<Verdict, ChainViolation> {
    Ok(try_leq_within(s, t, fuel)?.and(try_leq_within(t, s, fuel)?))
}

/// Fuel-bounded weak bisimilarity: `leq_within` in both directions.
///
/// # Panics
///
/// On a [`ChainViolation`] in either argument.
pub fn bisim_within<A: Clone + PartialEq + 'static>(
    s: &Seq<A>,
    t: &Seq<A>,
    fuel: usize,
) -> Verdict {
    try_bisim_within(s, t, fuel).unwrap_or_else(|e| panic!("{e}"))
}

/// Check `ismon` on the first `len` entries. Returns the first offending
/// index `n` (where `s_n` and `s_{n+1}` disagree illegally).
pub fn check_monotone<A: Clone + PartialEq + 'static>(s: &Seq<A>, len: usize) -> Result<(), usize> {
    let entries = s.prefix(len);
    for (n, pair) in entries.windows(2).enumerate() {
        let ok = pair[0] == pair[1] || (!pair[0].is_done() && pair[1].is_done());
        if !ok {
            return Err(n);
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::delay::RunResult;
    use crate::pairing::cantor_pair;
    use Progress::{Done, Pending};

    fn prefix<A: Clone + 'static>(s: &Seq<A>, len: usize) -> Vec<Progress<A>> {
        s.prefix(len)
    }

    #[test]
    fn unit_and_bottom() {
        assert_eq!(Seq::unit(3).at(0), Done(3));
        assert_eq!(Seq::unit(3).at(99), Done(3));
        assert_eq!(
            converges_within(&Seq::unit(3), 0),
            Some(Witness { value: 3, index: 0 })
        );
        assert_eq!(Seq::<u8>::bottom().at(0), Pending);
        assert_eq!(converges_within(&Seq::<u8>::bottom(), 10_000), None);
        assert_eq!(
            bisim_within(&Seq::<u8>::bottom(), &Seq::bottom(), 8),
            Verdict::True
        );
    }

    #[test]
    fn shift_and_unshift() {
        let s = Seq::unit('a').shift();
        assert_eq!(s.at(0), Pending);
        assert_eq!(s.at(1), Done('a'));
        assert_eq!(prefix(&s.unshift(), 8), prefix(&Seq::unit('a'), 8));
        assert_eq!(prefix(&Seq::<u8>::bottom().shift(), 8), vec![Pending; 8]);

        let d = Seq::of_delay(&Delay::after(3, 1));
        assert_eq!(prefix(&d.shift().unshift(), 10), prefix(&d, 10));
        assert_eq!(
            prefix(&d.unshift().unshift(), 4),
            [Pending, Done(1), Done(1), Done(1)]
        );
        assert_eq!(
            prefix(&d.unshift().shift(), 5),
            [Pending, Pending, Pending, Done(1), Done(1)]
        );
    }

    #[test]
    fn of_delay_follows_laters() {
        assert_eq!(prefix(&Seq::of_delay(&Delay::now(5)), 4), vec![Done(5); 4]);
        assert_eq!(
            prefix(&Seq::of_delay(&Delay::later(Delay::now(5))), 4),
            [Pending, Done(5), Done(5), Done(5)]
        );
        let never = Seq::of_delay(&Delay::<u8>::never());
        assert!(prefix(&never, 64).iter().all(|p| *p == Pending));
        fn spin() -> Delay<u8> {
            Delay::defer(spin)
        }
        assert!(prefix(&Seq::of_delay(&spin()), 64)
            .iter()
            .all(|p| *p == Pending));
    }

    #[test]
    fn to_delay_inverts_of_delay() {
        assert_eq!(
            Seq::unit(9).to_delay().run_fuel(0),
            RunResult::Converged { value: 9, steps: 0 }
        );
        let d = Delay::later(Delay::now(7));
        assert_eq!(
            Seq::of_delay(&d).to_delay().run_fuel(1),
            RunResult::Converged { value: 7, steps: 1 }
        );
        assert_eq!(
            Seq::<u8>::bottom().to_delay().run_fuel(50),
            RunResult::Timeout
        );
    }

    #[test]
    fn convergence_witness_is_minimal() {
        let s = Seq::unit(4).shift();
        assert_eq!(
            converges_within(&s, 3),
            Some(Witness { value: 4, index: 1 })
        );
        assert_eq!(converges_within(&s, 0), None);
        assert_eq!(
            converges_within(&Seq::unit(4), 0),
            Some(Witness { value: 4, index: 0 })
        );
    }

    #[test]
    fn terminates_with() {
        assert_eq!(terminates_with_within(&Seq::unit(2), &2, 0), Verdict::True);
        assert_eq!(terminates_with_within(&Seq::unit(2), &3, 0), Verdict::False);
        assert_eq!(
            terminates_with_within(&Seq::bottom(), &2, 100),
            Verdict::Unknown
        );
    }

    #[test]
    fn bind_examples() {
        let f = |a: i32| Seq::unit(a * 10).shift_by(a as usize);
        assert_eq!(prefix(&Seq::unit(2).bind(f), 6), prefix(&f(2), 6));
        let s = Seq::after(3, 1);
        assert_eq!(prefix(&s.bind(Seq::unit), 6), prefix(&s, 6));

        let s = Seq::unit(2).shift();
        let b = s.bind(|x| Seq::unit(x + 1).shift());
        assert_eq!(prefix(&b, 5), [Pending, Pending, Done(3), Done(3), Done(3)]);
    }

    #[test]
    fn bind_agrees_with_delay_bind() {
        // Oracle: go through the delay monad, where step counts add.
        let cases: Vec<(Option<usize>, usize)> = vec![
            (Some(0), 0),
            (Some(2), 3),
            (Some(5), 0),
            (None, 2),
            (Some(1), 7),
        ];
        for (conv, cont_steps) in cases {
            let s = match conv {
                Some(k) => Seq::after(k, 4i64),
                None => Seq::bottom(),
            };
            let f = move |x: i64| Seq::after(cont_steps, x - 1);
            let via_delay = Seq::of_delay(&s.to_delay().bind(move |x| f(x).to_delay()));
            assert_eq!(prefix(&s.bind(f), 16), prefix(&via_delay, 16));
        }
    }

    #[test]
    fn join_flattens() {
        let ss = Seq::after(2, Seq::after(1, 'z'));
        assert_eq!(
            prefix(&ss.join(), 5),
            [Pending, Pending, Pending, Done('z'), Done('z')]
        );
    }

    #[test]
    fn leq_examples() {
        assert_eq!(leq_within(&Seq::unit(1), &Seq::unit(1), 0), Verdict::True);
        assert_eq!(leq_within(&Seq::unit(1), &Seq::unit(2), 0), Verdict::False);
        assert_eq!(
            leq_within(&Seq::unit(1), &Seq::bottom(), 1000),
            Verdict::Unknown
        );
        assert_eq!(leq_within(&Seq::bottom(), &Seq::unit(1), 0), Verdict::True);
        // t has not caught up yet: no refutation.
        assert_eq!(
            leq_within(&Seq::unit(1), &Seq::after(5, 1), 4),
            Verdict::Unknown
        );
        assert_eq!(
            leq_within(&Seq::unit(1), &Seq::after(5, 1), 5),
            Verdict::True
        );
    }

    #[test]
    fn bisim_examples() {
        for n in 0..10 {
            let d = Seq::of_delay(&Delay::after(n, 'q'));
            assert_eq!(bisim_within(&d, &Seq::unit('q'), n), Verdict::True);
        }
        assert_eq!(
            bisim_within(&Seq::unit(1), &Seq::unit(2), 5),
            Verdict::False
        );
        assert_eq!(
            bisim_within(&Seq::unit(1), &Seq::bottom(), 5),
            Verdict::Unknown
        );
    }

    #[test]
    fn from_fn_is_stabilized() {
        let s = Seq::from_fn(|n| match n {
            3 => Done(30),
            5 => Done(50),
            _ => Pending,
        });
        assert_eq!(
            prefix(&s, 7),
            [
                Pending,
                Pending,
                Pending,
                Done(30),
                Done(30),
                Done(30),
                Done(30)
            ]
        );
        assert!(check_monotone(&s, 64).is_ok());
    }

    #[test]
    fn lub_of_bottoms_is_bottom() {
        let l = Seq::<u8>::lub(|_| Seq::bottom());
        assert_eq!(prefix(&l, 100), vec![Pending; 100]);
    }

    #[test]
    fn lub_of_constant_family() {
        let s = Seq::after(4, 8u32);
        let s2 = s.clone();
        let l = Seq::lub(move |_| s2.clone());
        for fuel in [0, 3, 10, 14, 15, 40] {
            assert!(!bisim_within(&l, &s, fuel).is_false());
        }
        // (0, 4) is the first table entry that is done.
        assert_eq!(
            converges_within(&l, 100),
            Some(Witness {
                value: 8,
                index: cantor_pair(0, 4)
            })
        );
    }

    #[test]
    fn lub_of_late_chain() {
        let l = Seq::lub(|i| {
            if i >= 5 {
                Seq::unit('a')
            } else {
                Seq::bottom()
            }
        });
        let first = cantor_pair(5, 0);
        assert_eq!(converges_within(&l, first - 1), None);
        assert_eq!(
            converges_within(&l, first),
            Some(Witness {
                value: 'a',
                index: first
            })
        );
    }

    #[test]
    fn lub_reports_non_chains() {
        let l = Seq::lub(Seq::unit);
        assert_eq!(l.try_at(0), Ok(Done(0)));
        let err = try_converges_within(&l, 0).unwrap();
        assert_eq!(err, Some(Witness { value: 0, index: 0 }));
        let err = l.try_at(1).unwrap_err();
        assert_eq!(err.first.row, 0);
        assert_eq!(err.second.row, 1);
        assert_eq!(err.second.scan_index, 1);
        assert!(err.to_string().contains("not a chain"));
        // Earlier entries stay available, later ones keep failing.
        assert_eq!(l.try_at(0), Ok(Done(0)));
        assert!(l.try_at(7).is_err());
    }

    #[test]
    #[should_panic(expected = "not a chain")]
    fn at_panics_on_violation() {
        let l = Seq::lub(|i| Seq::unit(i % 2));
        l.at(5);
    }

    #[test]
    fn verdict_conjunction() {
        use Verdict::*;
        assert_eq!(True.and(True), True);
        assert_eq!(True.and(Unknown), Unknown);
        assert_eq!(Unknown.and(False), False);
        assert_eq!(False.and(True), False);
    }

    #[test]
    fn library_sequences_are_monotone() {
        assert!(check_monotone(&Seq::from_fn(|_| Pending::<u8>), 10).is_ok());
        assert!(check_monotone(&Seq::after(3, 1), 10).is_ok());
        assert!(check_monotone(&Seq::of_delay(&Delay::after(7, 0)), 20).is_ok());
    }
}
