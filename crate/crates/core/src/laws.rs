//! Randomized law suites over the checkers, run by `partiality laws`.
//!
//! Each suite draws its inputs from a seeded generator, so a given
//! `(seed, fuel)` always produces the same report.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cpo::{
    chain_verdict, fixed_point_verdict, lfp, search_functional, Endo, KleisliFn, Stream,
};
use crate::delay::Delay;
use crate::lang::{agree_within, gen_term};
use crate::pairing::cantor_unpair;
use crate::reals::{equiv_within, is_positive, CauchySeq, Rational};
use crate::sample::{Chain, Cont, Route, Shape};
use crate::seq::{
    bisim_within, check_monotone, converges_within, leq_within, terminates_with_within, Seq,
    Verdict,
};

/// Outcome of one suite.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteReport {
    pub name: &'static str,
    pub passed: usize,
    pub total: usize,
    /// Descriptions of the first few failures.
    pub failures: Vec<String>,
}

impl SuiteReport {
    fn new(name: &'static str) -> Self {
        SuiteReport {
            name,
            passed: 0,
            total: 0,
            failures: Vec::new(),
        }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.total += 1;
        if ok {
            self.passed += 1;
        } else if self.failures.len() < 5 {
            self.failures.push(what());
        }
    }

    pub fn failed(&self) -> usize {
        self.total - self.passed
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "suite {}: {}/{} passed",
            self.name, self.passed, self.total
        )?;
        for failure in &self.failures {
            write!(f, "\n  failure: {failure}")?;
        }
        Ok(())
    }
}

const CASES: usize = 200;

fn rng_for(seed: u64, suite: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ suite.wrapping_mul(0x9e37_79b9_7f4a_7c15))
}

fn random_route(rng: &mut impl Rng) -> Route {
    Route::ALL[rng.random_range(0..Route::ALL.len())]
}

/// Monad laws and step additivity for `Delay` at fuel up to 32.
pub fn delay_monad(seed: u64, fuel: usize) -> SuiteReport {
    let mut report = SuiteReport::new("delay-monad");
    let mut rng = rng_for(seed, 1);
    for _ in 0..CASES {
        let shape = Shape::random(&mut rng, 12);
        let (f, g) = (Cont::random(&mut rng, 6), Cont::random(&mut rng, 6));
        let x = rng.random_range(-5..=5);
        let d = shape.deferred_delay();
        let (fd, gd) = (f.delay_fn(), g.delay_fn());
        for fuel in [0, 1, 5, 17, 32.min(fuel)] {
            report.check(
                Delay::now(x).bind(fd.clone()).run_fuel(fuel) == fd(x).run_fuel(fuel),
                || format!("left identity: x={x}, f={f:?}, fuel={fuel}"),
            );
            report.check(
                d.bind(Delay::now).run_fuel(fuel) == d.run_fuel(fuel),
                || format!("right identity: {shape:?}, fuel={fuel}"),
            );
            let (fd2, gd2) = (fd.clone(), gd.clone());
            let lhs = d.bind(fd.clone()).bind(gd.clone());
            let rhs = d.bind(move |a| fd2(a).bind(gd2.clone()));
            report.check(lhs.run_fuel(fuel) == rhs.run_fuel(fuel), || {
                format!("associativity: {shape:?}, f={f:?}, g={g:?}, fuel={fuel}")
            });
        }
        if let Some((k, a)) = shape.converge {
            if let Some((m, _)) = f.shape(a).converge {
                let steps = d.bind(fd).run_fuel(k + m).steps();
                report.check(steps == Some(k + m), || {
                    format!(
                        "step additivity: {shape:?}, f={f:?}: {steps:?} != {}",
                        k + m
                    )
                });
            }
        }
    }
    report
}

/// `of_delay` and `to_delay` are mutually inverse on prefixes.
pub fn round_trip(seed: u64, fuel: usize) -> SuiteReport {
    let mut report = SuiteReport::new("round-trip");
    let mut rng = rng_for(seed, 2);
    let depth = fuel.min(64);
    for _ in 0..CASES {
        let shape = Shape::random(&mut rng, 70);
        let s = shape.seq(random_route(&mut rng));
        let back = Seq::of_delay(&s.to_delay());
        report.check(back.prefix(depth) == s.prefix(depth), || {
            format!("of_delay(to_delay(s)) != s for {shape:?}")
        });
        let d = shape.deferred_delay();
        let again = Seq::of_delay(&d).to_delay();
        let f = rng.random_range(0..=depth);
        report.check(again.run_fuel(f) == d.run_fuel(f), || {
            format!("to_delay(of_delay(d)) != d for {shape:?} at fuel {f}")
        });
    }
    report
}

/// Monad laws on `Seq` as exact pointwise equalities, plus monotonicity of
/// every result.
pub fn seq_monad(seed: u64, fuel: usize) -> SuiteReport {
    let mut report = SuiteReport::new("seq-monad");
    let mut rng = rng_for(seed, 3);
    let len = fuel.min(64);
    for _ in 0..CASES {
        let shape = Shape::random(&mut rng, 20);
        let s = shape.seq(random_route(&mut rng));
        let (f, g) = (Cont::random(&mut rng, 8), Cont::random(&mut rng, 8));
        let (fs, gs) = (f.seq_fn(), g.seq_fn());
        let x = rng.random_range(-5..=5);

        report.check(
            Seq::unit(x).bind(fs.clone()).prefix(len) == fs(x).prefix(len),
            || format!("left identity: x={x}, f={f:?}"),
        );
        report.check(s.bind(Seq::unit).prefix(len) == s.prefix(len), || {
            format!("right identity: {shape:?}")
        });
        let (fs2, gs2) = (fs.clone(), gs.clone());
        let lhs = s.bind(fs).bind(gs);
        let rhs = s.bind(move |a| fs2(a).bind(gs2.clone()));
        report.check(lhs.prefix(len) == rhs.prefix(len), || {
            format!("associativity: {shape:?}, f={f:?}, g={g:?}")
        });
        report.check(check_monotone(&lhs, 256).is_ok(), || {
            format!("bind result not monotone: {shape:?}, f={f:?}, g={g:?}")
        });
    }
    report
}

/// Order laws at verdict level: reflexivity, transitivity, antisymmetry,
/// flatness, injectivity of `unit`, `unit ⋢ bottom`, `bottom ⊑ _`.
pub fn order(seed: u64, fuel: usize) -> SuiteReport {
    let mut report = SuiteReport::new("order");
    let mut rng = rng_for(seed, 4);
    for _ in 0..CASES {
        let shapes: Vec<Shape> = (0..3).map(|_| Shape::random(&mut rng, 20)).collect();
        let seqs: Vec<Seq<i64>> = shapes
            .iter()
            .map(|s| s.seq(random_route(&mut rng)))
            .collect();
        let (s, t, u) = (&seqs[0], &seqs[1], &seqs[2]);
        let f = rng.random_range(0..=fuel.min(64));

        report.check(!leq_within(s, s, f).is_false(), || {
            format!("reflexivity: {:?}", shapes[0])
        });
        if leq_within(s, t, f).is_true() && leq_within(t, u, f).is_true() {
            report.check(!leq_within(s, u, f * 2).is_false(), || {
                format!("transitivity: {shapes:?}")
            });
        }
        if leq_within(s, t, f).is_true() && leq_within(t, s, f).is_true() {
            report.check(bisim_within(s, t, f).is_true(), || {
                format!("antisymmetry: {shapes:?}")
            });
        }
        if let (Some(a), Some(b)) = (converges_within(s, f), converges_within(t, f)) {
            if a.value != b.value {
                report.check(leq_within(s, t, f).is_false(), || {
                    format!("flat order: {shapes:?} at fuel {f}")
                });
            }
        }

        let (a, b) = (rng.random_range(-5..=5), rng.random_range(-5..=5));
        let expected = if a == b {
            Verdict::True
        } else {
            Verdict::False
        };
        report.check(
            terminates_with_within(&Seq::unit(a), &b, 0) == expected,
            || format!("unit injectivity: {a} vs {b}"),
        );
        let f = rng.random_range(0..=fuel.min(1024));
        report.check(
            !leq_within(&Seq::unit(a), &Seq::bottom(), f).is_true(),
            || format!("unit({a}) below bottom at fuel {f}"),
        );
        report.check(leq_within(&Seq::bottom(), s, f).is_true(), || {
            format!("bottom not below {:?}", shapes[0])
        });
    }
    report
}

/// Least upper bounds of random chains against a brute-force table scan.
pub fn lub(seed: u64, fuel: usize) -> SuiteReport {
    let mut report = SuiteReport::new("lub");
    let mut rng = rng_for(seed, 5);
    let fuel = fuel.min(256);
    for _ in 0..CASES {
        let chain = Chain::random(&mut rng);
        let l = Seq::lub(chain.family());
        let f = rng.random_range(0..=fuel);
        let got = converges_within(&l, f);
        let expected = chain.first_hit(f);
        report.check(got.as_ref().map(|w| w.index) == expected, || {
            format!("{chain:?} at fuel {f}: got {got:?}, scan says {expected:?}")
        });
        if let Some(w) = &got {
            let (i, j) = cantor_unpair(w.index);
            report.check(
                w.value == chain.value && chain.row_shape(i).entry(j).is_done(),
                || format!("witness {w:?} does not come from the table of {chain:?}"),
            );
        }
        let family = chain.family();
        for i in 0..6 {
            report.check(!leq_within(&family(i), &l, fuel).is_false(), || {
                format!("row {i} of {chain:?} not below the lub")
            });
        }
        report.check(check_monotone(&l, 256).is_ok(), || {
            format!("lub of {chain:?} not monotone")
        });
    }
    report
}

/// True and false verdicts survive fuel doubling.
pub fn verdict_stability(seed: u64, fuel: usize) -> SuiteReport {
    let mut report = SuiteReport::new("verdict-stability");
    let mut rng = rng_for(seed, 6);
    for _ in 0..CASES {
        let (a, b) = (Shape::random(&mut rng, 40), Shape::random(&mut rng, 40));
        let (s, t) = (a.seq(random_route(&mut rng)), b.seq(random_route(&mut rng)));
        let mut prev = (Verdict::Unknown, Verdict::Unknown);
        let mut f = 1;
        while f <= fuel.min(1024) {
            let now = (leq_within(&s, &t, f), bisim_within(&s, &t, f));
            let stable = |p: Verdict, n: Verdict| !p.is_decided() || p == n;
            report.check(stable(prev.0, now.0) && stable(prev.1, now.1), || {
                format!("{a:?} vs {b:?}: {prev:?} became {now:?} at fuel {f}")
            });
            prev = now;
            f *= 2;
        }
    }
    report
}

/// Kleene chains and fixed points of the search functional.
pub fn fixpoint(seed: u64, fuel: usize) -> SuiteReport {
    let mut report = SuiteReport::new("fixpoint");
    let mut rng = rng_for(seed, 7);
    let fuel = fuel.min(256);
    for _ in 0..CASES / 4 {
        let modulus = rng.random_range(2..=7);
        let target = rng.random_range(0..modulus);
        let start = rng.random_range(0..50);
        let phi = search_functional(move |x: &u32| x % modulus == target);
        let xs = Stream::iterate(start, |x| x + 1);
        for n in 0..5 {
            report.check(!chain_verdict(&phi, &xs, n, fuel).is_false(), || {
                format!("search chain broken at {n}: mod {modulus} = {target} from {start}")
            });
        }
        report.check(
            fixed_point_verdict(&phi, &xs, fuel).is_ok_and(|v| !v.is_false()),
            || format!("search not a fixed point: mod {modulus} = {target} from {start}"),
        );
    }
    for k in 0..CASES / 4 {
        let t = gen_term(seed.wrapping_add(k as u64), 12);
        report.check(!agree_within(&t, fuel).is_false(), || {
            format!("compiler disagrees on {t}")
        });
    }
    report
}

/// Sign semidecision on constant rationals and respect of equivalence.
pub fn reals(seed: u64, fuel: usize) -> SuiteReport {
    let mut report = SuiteReport::new("reals");
    let mut rng = rng_for(seed, 8);
    for _ in 0..CASES {
        let p: i64 = rng.random_range(1..=50) * if rng.random_bool(0.5) { 1 } else { -1 };
        let q: i64 = rng.random_range(1..=50);
        let f = CauchySeq::constant(Rational::new(p, q));
        let bound = ((2 * q + p.abs() - 1) / p.abs() + 1) as usize;
        let w = converges_within(&is_positive(&f), bound);
        let expected = if p > 0 {
            crate::reals::Bit::One
        } else {
            crate::reals::Bit::Zero
        };
        report.check(w.map(|w| w.value) == Some(expected), || {
            format!("sign of {p}/{q} not found within {bound}")
        });

        // g_n = r + e/(n+1) with |e| <= 2 stays equivalent to f.
        let e = rng.random_range(-2..=2);
        let r = Rational::new(p, q);
        let g = CauchySeq::from_fn(move |n| r.clone() + Rational::new(e, n as i64 + 1));
        if equiv_within(&f, &g, 64) {
            report.check(
                !bisim_within(&is_positive(&f), &is_positive(&g), fuel.min(256)).is_false(),
                || format!("equivalent sequences for {p}/{q} (e = {e}) disagree"),
            );
        }
    }
    report
}

/// Every suite, in a fixed order.
pub fn run_all(seed: u64, fuel: usize) -> Vec<SuiteReport> {
    vec![
        delay_monad(seed, fuel),
        round_trip(seed, fuel),
        seq_monad(seed, fuel),
        order(seed, fuel),
        lub(seed, fuel),
        verdict_stability(seed, fuel),
        fixpoint(seed, fuel),
        reals(seed, fuel),
    ]
}

/// A functional that counts its own iterations, so its Kleene sequence is
/// not a chain. Querying its least fixed point must report the violation.
pub fn non_monotone_fixture(fuel: usize) -> SuiteReport {
    let mut report = SuiteReport::new("non-monotone-fixture");
    let phi = Endo::<(), u64>::new(|f: KleisliFn<(), u64>| {
        KleisliFn::new(move |x: &()| match converges_within(&f.apply(x), 0) {
            Some(w) => Seq::unit(w.value + 1),
            None => Seq::unit(0),
        })
    });
    let out = lfp(&phi).apply(&());
    // Always a failure: either the violation surfaced or it went unnoticed.
    let result = out.try_at(fuel);
    report.check(false, || match result {
        Ok(p) => format!("no violation detected, entry {fuel} is {p:?}"),
        Err(e) => e.to_string(),
    });
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_suites_pass() {
        for report in run_all(42, 1000) {
            assert_eq!(report.failed(), 0, "{report}");
            assert!(report.total > 0);
        }
    }

    #[test]
    fn reports_are_deterministic() {
        assert_eq!(run_all(7, 300), run_all(7, 300));
    }

    #[test]
    fn fixture_reports_the_violation() {
        let report = non_monotone_fixture(100);
        assert_eq!(report.failed(), 1);
        assert!(
            report.failures[0].contains("lub precondition violated"),
            "{report}"
        );
    }
}
