use super::{var, Formula, Meaning, PredicateEnv, Term, Var};
use crate::error::{Error, Result};
use std::collections::{BTreeMap, BTreeSet, HashMap};

impl Formula {
    pub fn free_vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        collect_free(self, &mut Vec::new(), &mut out);
        out
    }

    /// Every variable name occurring anywhere, bound or free.
    pub fn all_vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.visit(&mut |f| match f {
            Formula::Exists(v, _) | Formula::Forall(v, _) => {
                out.insert(v.clone());
            }
            _ => {}
        });
        for t in self.terms() {
            out.extend(t.vars().cloned());
        }
        out
    }

    /// Capture-avoiding simultaneous substitution.
    pub fn substitute(&self, bindings: &BTreeMap<Var, Term>) -> Formula {
        if bindings.is_empty() {
            return self.clone();
        }
        subst(self, bindings)
    }

    pub fn substitute_one(&self, v: &str, t: &Term) -> Formula {
        let mut b = BTreeMap::new();
        b.insert(var(v), t.clone());
        self.substitute(&b)
    }

    /// Applies `f` to every term of every atom (including predicate
    /// arguments). Not capture-aware: intended for quantifier-free use.
    pub fn map_terms(&self, f: &impl Fn(&Term) -> Term) -> Formula {
        self.map_atoms(&|a| match a {
            Formula::Le(t) => Formula::Le(f(t)),
            Formula::Lt(t) => Formula::Lt(f(t)),
            Formula::Eq(t) => Formula::Eq(f(t)),
            Formula::Cong(t, m) => Formula::Cong(f(t), m.clone()),
            Formula::Pred(p, args) => Formula::Pred(p.clone(), args.iter().map(f).collect()),
            other => other.clone(),
        })
    }

    /// Rebuilds the formula replacing each atom (including `true`/`false`).
    pub fn map_atoms(&self, f: &impl Fn(&Formula) -> Formula) -> Formula {
        match self {
            Formula::Not(a) => Formula::Not(Box::new(a.map_atoms(f))),
            Formula::And(xs) => Formula::And(xs.iter().map(|x| x.map_atoms(f)).collect()),
            Formula::Or(xs) => Formula::Or(xs.iter().map(|x| x.map_atoms(f)).collect()),
            Formula::Implies(a, b) => {
                Formula::Implies(Box::new(a.map_atoms(f)), Box::new(b.map_atoms(f)))
            }
            Formula::Iff(a, b) => Formula::Iff(Box::new(a.map_atoms(f)), Box::new(b.map_atoms(f))),
            Formula::Exists(v, b) => Formula::Exists(v.clone(), Box::new(b.map_atoms(f))),
            Formula::Forall(v, b) => Formula::Forall(v.clone(), Box::new(b.map_atoms(f))),
            atom => f(atom),
        }
    }

    /// Negation normal form: no implications or biconditionals, negations
    /// only directly above atoms.
    pub fn nnf(&self) -> Formula {
        nnf(self, false)
    }

    /// Renames bound variables so that all are distinct from each other and
    /// from the free variables.
    pub fn rename_bound_apart(&self) -> Formula {
        let mut used = self.free_vars();
        rename_apart(self, &mut used)
    }

    /// Replaces every occurrence of predicate `name` by `body` with
    /// `params` instantiated. One step only: occurrences of `name` inside
    /// `body` are left alone.
    pub fn expand_predicate(&self, name: &str, params: &[Var], body: &Formula) -> Formula {
        match self {
            Formula::Pred(p, args) if &**p == name => {
                assert_eq!(args.len(), params.len(), "arity mismatch expanding {name}");
                instantiate(params, body, args)
            }
            Formula::Not(a) => Formula::Not(Box::new(a.expand_predicate(name, params, body))),
            Formula::And(xs) => Formula::And(
                xs.iter()
                    .map(|x| x.expand_predicate(name, params, body))
                    .collect(),
            ),
            Formula::Or(xs) => Formula::Or(
                xs.iter()
                    .map(|x| x.expand_predicate(name, params, body))
                    .collect(),
            ),
            Formula::Implies(a, b) => Formula::Implies(
                Box::new(a.expand_predicate(name, params, body)),
                Box::new(b.expand_predicate(name, params, body)),
            ),
            Formula::Iff(a, b) => Formula::Iff(
                Box::new(a.expand_predicate(name, params, body)),
                Box::new(b.expand_predicate(name, params, body)),
            ),
            Formula::Exists(v, b) | Formula::Forall(v, b) => {
                // Instantiation renames the body's binders; host binders
                // only scope over the arguments.
                let inner = b.expand_predicate(name, params, body);
                if matches!(self, Formula::Exists(..)) {
                    Formula::Exists(v.clone(), Box::new(inner))
                } else {
                    Formula::Forall(v.clone(), Box::new(inner))
                }
            }
            atom => atom.clone(),
        }
    }

    /// Replaces every defined predicate by its (recursively unfolded) body.
    pub fn unfold_predicates(&self, env: &PredicateEnv) -> Result<Formula> {
        Unfolder {
            env,
            keep_oracles: false,
            cache: HashMap::new(),
            stack: Vec::new(),
        }
        .run(self)
    }

    /// Like [`Formula::unfold_predicates`] but leaves oracle-backed
    /// predicates in place.
    pub fn unfold_defined(&self, env: &PredicateEnv) -> Result<Formula> {
        Unfolder {
            env,
            keep_oracles: true,
            cache: HashMap::new(),
            stack: Vec::new(),
        }
        .run(self)
    }
}

/// Fresh name derived from `base` not in `used`.
pub fn fresh_var(base: &str, used: &BTreeSet<Var>) -> Var {
    let stem = match base.rfind('_') {
        Some(i) if i > 0 && base[i + 1..].chars().all(|c| c.is_ascii_digit()) && i + 1 < base.len() => {
            &base[..i]
        }
        _ => base,
    };
    (1..)
        .map(|k| var(&format!("{stem}_{k}")))
        .find(|v| !used.contains(v))
        .unwrap()
}

fn collect_free(f: &Formula, bound: &mut Vec<Var>, out: &mut BTreeSet<Var>) {
    match f {
        Formula::Exists(v, b) | Formula::Forall(v, b) => {
            bound.push(v.clone());
            collect_free(b, bound, out);
            bound.pop();
        }
        Formula::Le(t) | Formula::Lt(t) | Formula::Eq(t) | Formula::Cong(t, _) => {
            out.extend(t.vars().filter(|v| !bound.contains(v)).cloned());
        }
        Formula::Pred(_, args) => {
            for t in args {
                out.extend(t.vars().filter(|v| !bound.contains(v)).cloned());
            }
        }
        _ => {
            for c in f.children() {
                collect_free(c, bound, out);
            }
        }
    }
}

fn subst(f: &Formula, b: &BTreeMap<Var, Term>) -> Formula {
    match f {
        Formula::Le(t) => Formula::Le(t.substitute(b)),
        Formula::Lt(t) => Formula::Lt(t.substitute(b)),
        Formula::Eq(t) => Formula::Eq(t.substitute(b)),
        Formula::Cong(t, m) => Formula::Cong(t.substitute(b), m.clone()),
        Formula::Pred(p, args) => {
            Formula::Pred(p.clone(), args.iter().map(|t| t.substitute(b)).collect())
        }
        Formula::True | Formula::False => f.clone(),
        Formula::Not(a) => Formula::Not(Box::new(subst(a, b))),
        Formula::And(xs) => Formula::And(xs.iter().map(|x| subst(x, b)).collect()),
        Formula::Or(xs) => Formula::Or(xs.iter().map(|x| subst(x, b)).collect()),
        Formula::Implies(x, y) => Formula::Implies(Box::new(subst(x, b)), Box::new(subst(y, b))),
        Formula::Iff(x, y) => Formula::Iff(Box::new(subst(x, b)), Box::new(subst(y, b))),
        Formula::Exists(v, body) | Formula::Forall(v, body) => {
            let mut inner = b.clone();
            inner.remove(v);
            let free = body.free_vars();
            inner.retain(|k, _| free.contains(k));
            let (v2, body2) = if inner.values().any(|t| t.mentions(v)) {
                let mut used = body.all_vars();
                for (k, t) in &inner {
                    used.insert(k.clone());
                    used.extend(t.vars().cloned());
                }
                let fresh = fresh_var(v, &used);
                let renamed = body.substitute_one(v, &Term::var(&fresh));
                (fresh, renamed)
            } else {
                (v.clone(), (**body).clone())
            };
            let new_body = if inner.is_empty() {
                body2
            } else {
                subst(&body2, &inner)
            };
            if matches!(f, Formula::Exists(..)) {
                Formula::Exists(v2, Box::new(new_body))
            } else {
                Formula::Forall(v2, Box::new(new_body))
            }
        }
    }
}

fn instantiate(params: &[Var], body: &Formula, args: &[Term]) -> Formula {
    let bindings: BTreeMap<Var, Term> = params.iter().cloned().zip(args.iter().cloned()).collect();
    body.substitute(&bindings)
}

fn nnf(f: &Formula, neg: bool) -> Formula {
    match f {
        Formula::True => {
            if neg {
                Formula::False
            } else {
                Formula::True
            }
        }
        Formula::False => {
            if neg {
                Formula::True
            } else {
                Formula::False
            }
        }
        Formula::Not(a) => nnf(a, !neg),
        Formula::And(xs) => {
            let parts = xs.iter().map(|x| nnf(x, neg)).collect();
            if neg {
                Formula::Or(parts)
            } else {
                Formula::And(parts)
            }
        }
        Formula::Or(xs) => {
            let parts = xs.iter().map(|x| nnf(x, neg)).collect();
            if neg {
                Formula::And(parts)
            } else {
                Formula::Or(parts)
            }
        }
        Formula::Implies(a, b) => {
            if neg {
                Formula::And(vec![nnf(a, false), nnf(b, true)])
            } else {
                Formula::Or(vec![nnf(a, true), nnf(b, false)])
            }
        }
        Formula::Iff(a, b) => {
            let (pa, na, pb, nb) = (nnf(a, false), nnf(a, true), nnf(b, false), nnf(b, true));
            if neg {
                Formula::Or(vec![Formula::And(vec![pa, nb]), Formula::And(vec![na, pb])])
            } else {
                Formula::Or(vec![Formula::And(vec![pa, pb]), Formula::And(vec![na, nb])])
            }
        }
        Formula::Exists(v, b) => {
            let inner = Box::new(nnf(b, neg));
            if neg {
                Formula::Forall(v.clone(), inner)
            } else {
                Formula::Exists(v.clone(), inner)
            }
        }
        Formula::Forall(v, b) => {
            let inner = Box::new(nnf(b, neg));
            if neg {
                Formula::Exists(v.clone(), inner)
            } else {
                Formula::Forall(v.clone(), inner)
            }
        }
        atom => {
            if neg {
                Formula::Not(Box::new(atom.clone()))
            } else {
                atom.clone()
            }
        }
    }
}

fn rename_apart(f: &Formula, used: &mut BTreeSet<Var>) -> Formula {
    match f {
        Formula::Exists(v, b) | Formula::Forall(v, b) => {
            let (v2, body) = if used.contains(v) {
                let mut avoid = used.clone();
                avoid.extend(b.all_vars());
                let fresh = fresh_var(v, &avoid);
                (fresh.clone(), b.substitute_one(v, &Term::var(&fresh)))
            } else {
                (v.clone(), (**b).clone())
            };
            used.insert(v2.clone());
            let inner = Box::new(rename_apart(&body, used));
            if matches!(f, Formula::Exists(..)) {
                Formula::Exists(v2, inner)
            } else {
                Formula::Forall(v2, inner)
            }
        }
        Formula::Not(a) => Formula::Not(Box::new(rename_apart(a, used))),
        Formula::And(xs) => Formula::And(xs.iter().map(|x| rename_apart(x, used)).collect()),
        Formula::Or(xs) => Formula::Or(xs.iter().map(|x| rename_apart(x, used)).collect()),
        Formula::Implies(a, b) => {
            let a2 = rename_apart(a, used);
            Formula::Implies(Box::new(a2), Box::new(rename_apart(b, used)))
        }
        Formula::Iff(a, b) => {
            let a2 = rename_apart(a, used);
            Formula::Iff(Box::new(a2), Box::new(rename_apart(b, used)))
        }
        atom => atom.clone(),
    }
}

struct Unfolder<'a> {
    env: &'a PredicateEnv,
    keep_oracles: bool,
    cache: HashMap<Var, Formula>,
    stack: Vec<Var>,
}

impl Unfolder<'_> {
    fn run(&mut self, f: &Formula) -> Result<Formula> {
        Ok(match f {
            Formula::Pred(name, args) => {
                let def = self
                    .env
                    .get(name)
                    .ok_or_else(|| Error::UnknownPredicate(name.to_string()))?;
                if def.arity() != args.len() {
                    return Err(Error::Arity {
                        name: name.to_string(),
                        expected: def.arity(),
                        found: args.len(),
                    });
                }
                match &def.meaning {
                    Meaning::Defined(body) => {
                        let unfolded = match self.cache.get(name) {
                            Some(u) => u.clone(),
                            None => {
                                if self.stack.contains(name) {
                                    return Err(Error::CyclicDefinition(name.to_string()));
                                }
                                self.stack.push(name.clone());
                                let u = self.run(body)?;
                                self.stack.pop();
                                self.cache.insert(name.clone(), u.clone());
                                u
                            }
                        };
                        instantiate(&def.params, &unfolded, args)
                    }
                    Meaning::Oracle(_) if self.keep_oracles => f.clone(),
                    _ => return Err(Error::OpaquePredicate(name.to_string())),
                }
            }
            Formula::Not(a) => Formula::Not(Box::new(self.run(a)?)),
            Formula::And(xs) => Formula::And(xs.iter().map(|x| self.run(x)).collect::<Result<_>>()?),
            Formula::Or(xs) => Formula::Or(xs.iter().map(|x| self.run(x)).collect::<Result<_>>()?),
            Formula::Implies(a, b) => Formula::Implies(Box::new(self.run(a)?), Box::new(self.run(b)?)),
            Formula::Iff(a, b) => Formula::Iff(Box::new(self.run(a)?), Box::new(self.run(b)?)),
            Formula::Exists(v, b) => Formula::Exists(v.clone(), Box::new(self.run(b)?)),
            Formula::Forall(v, b) => Formula::Forall(v.clone(), Box::new(self.run(b)?)),
            atom => atom.clone(),
        })
    }
}
