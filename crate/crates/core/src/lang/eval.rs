//! Definitional interpreter into the delay monad, plus the same
//! interpreter written as a functional whose least fixed point is taken in
//! the sequence model.

use std::fmt;
use std::rc::Rc;

use crate::cpo::{lfp, Endo, KleisliFn};
use crate::delay::Delay;
use crate::seq::Seq;

use super::syntax::Term;
use super::vm::Code;

/// Runtime values of both the interpreter and the machine.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Value {
    Nat(u64),
    /// Interpreter closure.
    Closure {
        body: Rc<Term>,
        env: Env,
    },
    /// Machine closure.
    Code {
        code: Code,
        env: Env,
    },
    /// A type error such as applying a number, or `suc` of a function.
    Stuck,
}

impl Value {
    pub fn outcome(&self) -> Outcome {
        match self {
            Value::Nat(n) => Outcome::Nat(*n),
            Value::Closure { .. } | Value::Code { .. } => Outcome::Closure,
            Value::Stuck => Outcome::Stuck,
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.outcome().fmt(f)
    }
}

/// A value with closures made indistinguishable.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Outcome {
    Nat(u64),
    Closure,
    Stuck,
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Outcome::Nat(n) => write!(f, "{n}"),
            Outcome::Closure => f.write_str("<closure>"),
            Outcome::Stuck => f.write_str("stuck"),
        }
    }
}

#[derive(Debug, PartialEq, Eq)]
struct EnvNode {
    head: Value,
    tail: Env,
}

/// Persistent environment; index 0 is the innermost binding.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Env(Option<Rc<EnvNode>>);

impl Env {
    pub fn empty() -> Env {
        Env(None)
    }

    pub fn push(&self, v: Value) -> Env {
        Env(Some(Rc::new(EnvNode {
            head: v,
            tail: self.clone(),
        })))
    }

    pub fn get(&self, i: usize) -> Option<&Value> {
        let mut cur = self.0.as_deref()?;
        for _ in 0..i {
            cur = cur.tail.0.as_deref()?;
        }
        Some(&cur.head)
    }

    pub fn len(&self) -> usize {
        let mut n = 0;
        let mut cur = &self.0;
        while let Some(node) = cur {
            n += 1;
            cur = &node.tail.0;
        }
        n
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_none()
    }
}

fn suc(v: Value) -> Value {
    match v {
        Value::Nat(n) => n.checked_add(1).map_or(Value::Stuck, Value::Nat),
        _ => Value::Stuck,
    }
}

/// Call-by-value evaluation of a closed term. Every β-reduction costs one
/// `later` step.
pub fn eval(t: &Term) -> Delay<Value> {
    eval_in(&Rc::new(t.clone()), &Env::empty())
}

pub fn eval_in(t: &Rc<Term>, env: &Env) -> Delay<Value> {
    match &**t {
        Term::Lit(n) => Delay::now(Value::Nat(*n)),
        Term::Var(i) => Delay::now(env.get(*i).cloned().unwrap_or(Value::Stuck)),
        Term::Lam(body) => Delay::now(Value::Closure {
            body: Rc::clone(body),
            env: env.clone(),
        }),
        Term::Suc(e) => eval_in(e, env).map(suc),
        Term::App(fun, arg) => {
            let (arg, env) = (Rc::clone(arg), env.clone());
            eval_in(fun, &env).bind(move |f| {
                if f == Value::Stuck {
                    return Delay::now(Value::Stuck);
                }
                eval_in(&arg, &env).bind(move |a| apply(f.clone(), a))
            })
        }
    }
}

fn apply(f: Value, a: Value) -> Delay<Value> {
    match (f, a) {
        (_, Value::Stuck) => Delay::now(Value::Stuck),
        (Value::Closure { body, env }, a) => Delay::defer(move || eval_in(&body, &env.push(a))),
        _ => Delay::now(Value::Stuck),
    }
}

/// An interpreter input: a term and the environment it runs in.
pub type Frame = (Rc<Term>, Env);

/// The interpreter as a functional: structural cases are handled directly,
/// every β-reduction is delegated to the argument `f`.
pub fn interp_functional() -> Endo<Frame, Value> {
    Endo::new(|f: KleisliFn<Frame, Value>| {
        KleisliFn::new(move |(t, env): &Frame| interp_step(&f, t, env))
    })
}

fn interp_step(f: &KleisliFn<Frame, Value>, t: &Rc<Term>, env: &Env) -> Seq<Value> {
    match &**t {
        Term::Lit(n) => Seq::unit(Value::Nat(*n)),
        Term::Var(i) => Seq::unit(env.get(*i).cloned().unwrap_or(Value::Stuck)),
        Term::Lam(body) => Seq::unit(Value::Closure {
            body: Rc::clone(body),
            env: env.clone(),
        }),
        Term::Suc(e) => interp_step(f, e, env).map(suc),
        Term::App(fun, arg) => {
            let (f, arg, env) = (f.clone(), Rc::clone(arg), env.clone());
            interp_step(&f, fun, &env).bind(move |fv| {
                if fv == Value::Stuck {
                    return Seq::unit(Value::Stuck);
                }
                let f = f.clone();
                interp_step(&f, &arg, &env).bind(move |av| match (fv.clone(), av) {
                    (_, Value::Stuck) => Seq::unit(Value::Stuck),
                    (Value::Closure { body, env }, av) => f.apply(&(body, env.push(av))),
                    _ => Seq::unit(Value::Stuck),
                })
            })
        }
    }
}

/// Evaluate as the least fixed point of [`interp_functional`].
pub fn eval_lfp(t: &Term) -> Seq<Value> {
    lfp(&interp_functional()).apply(&(Rc::new(t.clone()), Env::empty()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cpo::{chain_verdict, fixed_point_verdict};
    use crate::delay::RunResult;
    use crate::lang::syntax::parse;
    use crate::seq::converges_within;

    fn run(src: &str, fuel: usize) -> RunResult<Outcome> {
        eval(&parse(src).unwrap())
            .run_fuel(fuel)
            .map(|v| v.outcome())
    }

    fn conv(value: Outcome, steps: usize) -> RunResult<Outcome> {
        RunResult::Converged { value, steps }
    }

    #[test]
    fn literals_and_beta() {
        assert_eq!(run("3", 0), conv(Outcome::Nat(3), 0));
        assert_eq!(run("(\\x. x) 5", 1), conv(Outcome::Nat(5), 1));
        assert_eq!(run("(\\x. x) 5", 0), RunResult::Timeout);
        assert_eq!(run("\\x. x", 0), conv(Outcome::Closure, 0));
    }

    #[test]
    fn steps_count_beta_reductions() {
        // Church numeral 2 applied to suc and 0: 2 + 2 β-steps.
        let src = "(\\f x. f (f x)) (\\n. suc n) 0";
        assert_eq!(run(src, 100), conv(Outcome::Nat(2), 4));
        let src = "suc ((\\x. suc x) ((\\y. y) 1))";
        assert_eq!(run(src, 100), conv(Outcome::Nat(3), 2));
    }

    #[test]
    fn omega_diverges() {
        assert_eq!(eval(&Term::omega()).run_fuel(10_000), RunResult::Timeout);
    }

    #[test]
    fn stuck_terms() {
        assert_eq!(run("0 1", 5), conv(Outcome::Stuck, 0));
        assert_eq!(run("suc (\\x. x)", 5), conv(Outcome::Stuck, 0));
        // The argument is evaluated before the application gets stuck.
        assert_eq!(run("0 ((\\x. x) 1)", 5), conv(Outcome::Stuck, 1));
        // A stuck function does not evaluate its argument.
        let src = "(suc (\\x. x)) ((\\x. x x) (\\x. x x))";
        assert_eq!(run(src, 50), conv(Outcome::Stuck, 0));
        // A stuck argument is not passed to the body.
        assert_eq!(run("(\\x. 7) (suc (\\y. y))", 5), conv(Outcome::Stuck, 0));
    }

    #[test]
    fn more_fuel_does_not_change_a_result() {
        let d = eval(&parse("(\\f x. f (f x)) (\\n. suc n) 0").unwrap());
        let first = d.run_fuel(4);
        for fuel in [5, 8, 100] {
            assert_eq!(d.run_fuel(fuel), first);
        }
    }

    #[test]
    fn env_lookup() {
        let env = Env::empty().push(Value::Nat(1)).push(Value::Nat(2));
        assert_eq!(env.get(0), Some(&Value::Nat(2)));
        assert_eq!(env.get(1), Some(&Value::Nat(1)));
        assert_eq!(env.get(2), None);
        assert_eq!(env.len(), 2);
        assert!(Env::empty().is_empty());
    }

    #[test]
    fn fixed_point_interpreter_agrees() {
        for src in [
            "3",
            "(\\x. x) 5",
            "(\\f x. f (f x)) (\\n. suc n) 0",
            "suc ((\\x. suc x) ((\\y. y) 1))",
            "0 1",
            "\\x. x",
        ] {
            let t = parse(src).unwrap();
            let expected = eval(&t).run_fuel(100).value().map(Value::outcome);
            let got = converges_within(&eval_lfp(&t), 2_000).map(|w| w.value.outcome());
            assert_eq!(got, expected, "{src}");
        }
        assert_eq!(converges_within(&eval_lfp(&Term::omega()), 1_000), None);
    }

    #[test]
    fn interpreter_functional_is_a_chain_with_a_fixed_point() {
        let phi = interp_functional();
        let t = parse("(\\f x. f (f x)) (\\n. suc n) 0").unwrap();
        let x = (Rc::new(t), Env::empty());
        for n in 0..6 {
            assert!(!chain_verdict(&phi, &x, n, 128).is_false());
        }
        assert!(!fixed_point_verdict(&phi, &x, 256).unwrap().is_false());
    }
}
