//! Random partial computations described as plain data.
//!
//! A shape can be turned into a [`Delay`] or a [`Seq`] (through several
//! construction routes), and also answers "where and to what does this
//! converge" by arithmetic alone, which makes it usable as a test oracle.

use rand::Rng;

use crate::delay::Delay;
use crate::pairing::cantor_unpair;
use crate::seq::{Progress, Seq};

/// Converges to `value` after `steps` steps, or never.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Shape {
    pub converge: Option<(usize, i64)>,
}

/// Which constructors to go through when building a [`Seq`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Route {
    Shifted,
    ViaDelay,
    FromFn,
    RoundTrip,
    Bound,
}

impl Route {
    pub const ALL: [Route; 5] = [
        Route::Shifted,
        Route::ViaDelay,
        Route::FromFn,
        Route::RoundTrip,
        Route::Bound,
    ];
}

impl Shape {
    pub fn random(rng: &mut impl Rng, max_steps: usize) -> Shape {
        let converge = if rng.random_bool(0.8) {
            Some((rng.random_range(0..=max_steps), rng.random_range(-5..=5)))
        } else {
            None
        };
        Shape { converge }
    }

    pub fn delay(&self) -> Delay<i64> {
        match self.converge {
            Some((k, v)) => Delay::after(k, v),
            None => Delay::never(),
        }
    }

    /// A `Delay` that unfolds through `defer`, including a self-deferring
    /// loop for the divergent case.
    pub fn deferred_delay(&self) -> Delay<i64> {
        fn count(k: usize, v: i64) -> Delay<i64> {
            if k == 0 {
                Delay::now(v)
            } else {
                Delay::defer(move || count(k - 1, v))
            }
        }
        fn spin() -> Delay<i64> {
            Delay::defer(spin)
        }
        match self.converge {
            Some((k, v)) => count(k, v),
            None => spin(),
        }
    }

    pub fn seq(&self, route: Route) -> Seq<i64> {
        match (route, self.converge) {
            (Route::Shifted, Some((k, v))) => Seq::after(k, v),
            (Route::Shifted, None) => Seq::bottom(),
            (Route::ViaDelay, _) => Seq::of_delay(&self.deferred_delay()),
            (Route::FromFn, conv) => Seq::from_fn(move |n| match conv {
                Some((k, v)) if n >= k => Progress::Done(v),
                _ => Progress::Pending,
            }),
            (Route::RoundTrip, _) => Seq::of_delay(&self.seq(Route::FromFn).to_delay()),
            (Route::Bound, Some((k, v))) => {
                let split = k / 2;
                Seq::after(split, v).bind(move |x| Seq::after(k - split, x))
            }
            (Route::Bound, None) => Seq::unit(0).bind(|_| Seq::from_fn(|_| Progress::Pending)),
        }
    }

    pub fn entry(&self, n: usize) -> Progress<i64> {
        match self.converge {
            Some((k, v)) if n >= k => Progress::Done(v),
            _ => Progress::Pending,
        }
    }
}

/// `x ↦ x·mul + add` after `steps` steps, diverging when `x ≡ 0 mod
/// diverge_mod`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Cont {
    pub steps: usize,
    pub mul: i64,
    pub add: i64,
    pub diverge_mod: Option<i64>,
}

impl Cont {
    pub fn random(rng: &mut impl Rng, max_steps: usize) -> Cont {
        Cont {
            steps: rng.random_range(0..=max_steps),
            mul: rng.random_range(-3..=3),
            add: rng.random_range(-3..=3),
            diverge_mod: rng.random_bool(0.2).then(|| rng.random_range(2..=4)),
        }
    }

    pub fn shape(&self, x: i64) -> Shape {
        match self.diverge_mod {
            Some(m) if x.rem_euclid(m) == 0 => Shape { converge: None },
            _ => Shape {
                converge: Some((self.steps, x * self.mul + self.add)),
            },
        }
    }

    pub fn seq_fn(self) -> impl Fn(i64) -> Seq<i64> + Clone + 'static {
        move |x| self.shape(x).seq(Route::Shifted)
    }

    pub fn delay_fn(self) -> impl Fn(i64) -> Delay<i64> + Clone + 'static {
        move |x| self.shape(x).deferred_delay()
    }
}

/// A chain of sequences with a known table: rows below `start` are bottom,
/// row `i >= start` converges to `value` at column `offsets[i % len]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Chain {
    pub start: Option<usize>,
    pub value: i64,
    pub offsets: Vec<usize>,
}

impl Chain {
    pub fn random(rng: &mut impl Rng) -> Chain {
        let len = rng.random_range(1..=4);
        Chain {
            start: rng.random_bool(0.85).then(|| rng.random_range(0..12)),
            value: rng.random_range(-9..=9),
            offsets: (0..len).map(|_| rng.random_range(0..15)).collect(),
        }
    }

    pub fn row_shape(&self, i: usize) -> Shape {
        match self.start {
            Some(s) if i >= s => Shape {
                converge: Some((self.offsets[i % self.offsets.len()], self.value)),
            },
            _ => Shape { converge: None },
        }
    }

    pub fn family(&self) -> impl Fn(usize) -> Seq<i64> + 'static {
        let chain = self.clone();
        move |i| chain.row_shape(i).seq(Route::ALL[i % Route::ALL.len()])
    }

    /// Least scan index `<= fuel` whose Cantor pair hits a done entry.
    pub fn first_hit(&self, fuel: usize) -> Option<usize> {
        (0..=fuel).find(|&k| {
            let (i, j) = cantor_unpair(k);
            self.row_shape(i).entry(j).is_done()
        })
    }
}
