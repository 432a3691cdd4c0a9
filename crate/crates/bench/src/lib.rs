//! Workloads shared by the benchmarks in `benches/`.

use partiality::lang::{parse, Term};
use partiality::Seq;

/// `n f x = f (f (... x))` applied to `suc` and `0`: `n + 2` β-steps, result `n`.
pub fn church_suc(n: usize) -> Term {
    let body = (0..n).fold("x".to_string(), |acc, _| format!("f ({acc})"));
    parse(&format!("(\\f x. {body}) (\\n. suc n) 0")).expect("well-formed")
}

/// Row `i` converges to `7` at column `width - min(i, width)`: a chain whose
/// lub is found at a Cantor index of roughly `width²/2`.
pub fn slow_chain(width: usize) -> impl Fn(usize) -> Seq<u32> + 'static {
    move |i| {
        if i == 0 {
            Seq::bottom()
        } else {
            Seq::after(width - i.min(width), 7)
        }
    }
}
