use super::{var, Formula, Var};
use crate::arith::Int;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

pub type OracleFn = Arc<dyn Fn(&[Int]) -> bool + Send + Sync>;

#[derive(Clone)]
pub enum Meaning {
    /// Body whose free variables are the declared parameters.
    Defined(Formula),
    /// Membership decided by a host function.
    Oracle(OracleFn),
    /// Known arity only; cannot be evaluated or unfolded.
    Opaque,
}

impl fmt::Debug for Meaning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Meaning::Defined(body) => write!(f, "Defined({body})"),
            Meaning::Oracle(_) => write!(f, "Oracle"),
            Meaning::Opaque => write!(f, "Opaque"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct PredicateDef {
    pub params: Vec<Var>,
    pub meaning: Meaning,
}

impl PredicateDef {
    pub fn arity(&self) -> usize {
        self.params.len()
    }
}

#[derive(Clone, Debug, Default)]
pub struct PredicateEnv {
    defs: BTreeMap<Var, PredicateDef>,
}

impl PredicateEnv {
    pub fn new() -> Self {
        Self::default()
    }

    /// Environment with a single defined predicate.
    pub fn single(name: &str, params: &[Var], body: Formula) -> Self {
        let mut env = Self::new();
        env.define(name, params, body);
        env
    }

    pub fn define(&mut self, name: &str, params: &[Var], body: Formula) {
        self.defs.insert(
            var(name),
            PredicateDef {
                params: params.to_vec(),
                meaning: Meaning::Defined(body),
            },
        );
    }

    pub fn oracle(&mut self, name: &str, arity: usize, f: OracleFn) {
        self.defs.insert(
            var(name),
            PredicateDef {
                params: (0..arity).map(|i| var(&format!("p{i}"))).collect(),
                meaning: Meaning::Oracle(f),
            },
        );
    }

    pub fn opaque(&mut self, name: &str, arity: usize) {
        self.defs.insert(
            var(name),
            PredicateDef {
                params: (0..arity).map(|i| var(&format!("p{i}"))).collect(),
                meaning: Meaning::Opaque,
            },
        );
    }

    pub fn get(&self, name: &str) -> Option<&PredicateDef> {
        self.defs.get(name)
    }

    pub fn is_empty(&self) -> bool {
        self.defs.is_empty()
    }
}
