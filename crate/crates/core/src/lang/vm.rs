//! A small stack machine and the compiler targeting it.

use std::fmt;
use std::rc::Rc;

use crate::delay::{Delay, Observed};

use super::eval::{Env, Value};
use super::syntax::Term;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Instr {
    PushLit(u64),
    PushVar(usize),
    /// Push a closure over the current environment.
    PushClo(Code),
    /// Pop an argument and a closure and enter the closure. One step.
    Apply,
    Add1,
    /// Return from a closure body.
    Ret,
}

/// An immutable, shareable instruction sequence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Code(Rc<[Instr]>);

impl Code {
    pub fn new(instrs: Vec<Instr>) -> Code {
        Code(instrs.into())
    }

    pub fn instrs(&self) -> &[Instr] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    fn write_listing(&self, indent: usize, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, instr) in self.0.iter().enumerate() {
            write!(f, "{:indent$}{i}: ", "")?;
            match instr {
                Instr::PushLit(n) => writeln!(f, "push_lit {n}")?,
                Instr::PushVar(k) => writeln!(f, "push_var {k}")?,
                Instr::PushClo(body) => {
                    writeln!(f, "push_clo")?;
                    body.write_listing(indent + 4, f)?;
                }
                Instr::Apply => writeln!(f, "apply")?,
                Instr::Add1 => writeln!(f, "add1")?,
                Instr::Ret => writeln!(f, "ret")?,
            }
        }
        Ok(())
    }
}

/// One instruction per line, closure bodies indented below `push_clo`.
impl fmt::Display for Code {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_listing(0, f)
    }
}

fn compile_into(t: &Term, out: &mut Vec<Instr>) {
    match t {
        Term::Lit(n) => out.push(Instr::PushLit(*n)),
        Term::Var(i) => out.push(Instr::PushVar(*i)),
        Term::Lam(body) => {
            let mut code = Vec::new();
            compile_into(body, &mut code);
            code.push(Instr::Ret);
            out.push(Instr::PushClo(Code::new(code)));
        }
        Term::App(f, a) => {
            compile_into(f, out);
            compile_into(a, out);
            out.push(Instr::Apply);
        }
        Term::Suc(e) => {
            compile_into(e, out);
            out.push(Instr::Add1);
        }
    }
}

pub fn compile(t: &Term) -> Code {
    let mut out = Vec::new();
    compile_into(t, &mut out);
    Code::new(out)
}

#[derive(Clone, Debug)]
struct Return {
    code: Code,
    pc: usize,
    env: Env,
}

/// Machine state: current code and program counter, environment, value
/// stack and return stack.
#[derive(Clone, Debug)]
pub struct VmState {
    code: Code,
    pc: usize,
    env: Env,
    values: Vec<Value>,
    calls: Vec<Return>,
}

/// What a single [`VmState::step`] did.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Step {
    Continue,
    /// Entered a closure body.
    Beta,
    Halt(Value),
}

impl VmState {
    pub fn new(code: &Code) -> VmState {
        VmState {
            code: code.clone(),
            pc: 0,
            env: Env::empty(),
            values: Vec::new(),
            calls: Vec::new(),
        }
    }

    pub fn stack_depth(&self) -> usize {
        self.values.len()
    }

    pub fn call_depth(&self) -> usize {
        self.calls.len()
    }

    /// Execute one instruction. Malformed states halt with `Stuck`.
    pub fn step(&mut self) -> Step {
        let Some(instr) = self.code.0.get(self.pc).cloned() else {
            return match (self.calls.is_empty(), self.values.len()) {
                (true, 1) => Step::Halt(self.values.pop().expect("one value")),
                _ => Step::Halt(Value::Stuck),
            };
        };
        self.pc += 1;
        match instr {
            Instr::PushLit(n) => self.values.push(Value::Nat(n)),
            Instr::PushVar(i) => match self.env.get(i) {
                Some(v) => self.values.push(v.clone()),
                None => return Step::Halt(Value::Stuck),
            },
            Instr::PushClo(code) => self.values.push(Value::Code {
                code,
                env: self.env.clone(),
            }),
            Instr::Add1 => match self.values.pop() {
                Some(Value::Nat(n)) => match n.checked_add(1) {
                    Some(m) => self.values.push(Value::Nat(m)),
                    None => return Step::Halt(Value::Stuck),
                },
                _ => return Step::Halt(Value::Stuck),
            },
            Instr::Apply => {
                let (Some(arg), Some(fun)) = (self.values.pop(), self.values.pop()) else {
                    return Step::Halt(Value::Stuck);
                };
                let Value::Code { code, env } = fun else {
                    return Step::Halt(Value::Stuck);
                };
                // Tail call: nothing left to do here but return.
                if self.code.0.get(self.pc) != Some(&Instr::Ret) {
                    self.calls.push(Return {
                        code: self.code.clone(),
                        pc: self.pc,
                        env: self.env.clone(),
                    });
                }
                self.code = code;
                self.pc = 0;
                self.env = env.push(arg);
                return Step::Beta;
            }
            Instr::Ret => match self.calls.pop() {
                Some(r) => {
                    self.code = r.code;
                    self.pc = r.pc;
                    self.env = r.env;
                }
                None => return Step::Halt(Value::Stuck),
            },
        }
        Step::Continue
    }
}

fn run(mut state: VmState) -> Observed<Value> {
    loop {
        match state.step() {
            Step::Continue => {}
            Step::Beta => return Observed::Later(Delay::lazy(move || run(state))),
            Step::Halt(v) => return Observed::Now(v),
        }
    }
}

/// Run `code` from the empty state. Every `apply` costs one `later` step.
pub fn exec(code: &Code) -> Delay<Value> {
    let state = VmState::new(code);
    Delay::lazy(move || run(state))
}
