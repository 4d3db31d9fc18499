//! Gröbner bases and the ideal operations built on them: elimination,
//! saturation, intersection and radical membership.

mod budget;
mod buchberger;
mod order;

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex};

pub use budget::{Budget, DEFAULT_MAX_DEGREE, DEFAULT_MAX_REDUCTIONS};
pub use order::{MonomialOrder, OrderKind};

use crate::error::{Error, Result};
use crate::poly::{Family, Field, Monomial, Poly, Var};
use buchberger::Ring;

/// Finitely generated ideal with a lazily filled basis cache.
pub struct Ideal<F: Field> {
    gens: Vec<Poly<F>>,
    ambient: BTreeSet<Var>,
    cache: Mutex<HashMap<MonomialOrder, Arc<Vec<Poly<F>>>>>,
}

impl<F: Field> Clone for Ideal<F> {
    fn clone(&self) -> Self {
        let cache = self.cache.lock().expect("cache poisoned").clone();
        Ideal { gens: self.gens.clone(), ambient: self.ambient.clone(), cache: Mutex::new(cache) }
    }
}

impl<F: Field> fmt::Debug for Ideal<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<")?;
        for (i, g) in self.gens.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{g}")?;
        }
        write!(f, ">")
    }
}

impl<F: Field> Ideal<F> {
    /// Ideal generated by `gens` in the ring over `ambient` ∪ (variables of `gens`).
    pub fn new(gens: Vec<Poly<F>>, ambient: impl IntoIterator<Item = Var>) -> Self {
        let mut amb: BTreeSet<Var> = ambient.into_iter().collect();
        for g in &gens {
            amb.extend(g.vars());
        }
        let gens = gens.into_iter().filter(|g| !g.is_zero()).collect();
        Ideal { gens, ambient: amb, cache: Mutex::new(HashMap::new()) }
    }

    pub fn from_gens(gens: Vec<Poly<F>>) -> Self {
        Ideal::new(gens, [])
    }

    pub fn zero(ambient: impl IntoIterator<Item = Var>) -> Self {
        Ideal::new(Vec::new(), ambient)
    }

    pub fn unit(ambient: impl IntoIterator<Item = Var>) -> Self {
        Ideal::new(vec![Poly::one()], ambient)
    }

    pub fn gens(&self) -> &[Poly<F>] {
        &self.gens
    }

    pub fn ambient(&self) -> &BTreeSet<Var> {
        &self.ambient
    }

    pub fn with_ambient(&self, extra: impl IntoIterator<Item = Var>) -> Self {
        Ideal::new(self.gens.clone(), self.ambient.iter().copied().chain(extra))
    }

    pub fn default_order(&self) -> MonomialOrder {
        MonomialOrder::grevlex(self.ambient.iter().copied().collect())
    }

    /// Reduced basis for `ord`; cached per order.
    pub fn groebner_basis(&self, ord: &MonomialOrder) -> Result<Arc<Vec<Poly<F>>>> {
        self.groebner_basis_with_budget(ord, Budget::global())
    }

    pub fn groebner_basis_with_budget(&self, ord: &MonomialOrder, budget: Budget) -> Result<Arc<Vec<Poly<F>>>> {
        if let Some(b) = self.cache.lock().expect("cache poisoned").get(ord) {
            return Ok(b.clone());
        }
        for v in &self.ambient {
            if !ord.vars.contains(v) {
                return Err(Error::InvalidInput(format!("order does not rank variable {v}")));
            }
        }
        let ring = Ring::new(ord);
        let dense = self.gens.iter().map(|g| ring.to_dense(g)).collect::<Result<Vec<_>>>()?;
        let gb = buchberger::groebner(&ring, dense, budget)?;
        let out: Arc<Vec<Poly<F>>> = Arc::new(gb.iter().map(|g| ring.to_sparse(g)).collect());
        self.cache.lock().expect("cache poisoned").insert(ord.clone(), out.clone());
        Ok(out)
    }

    pub fn basis(&self) -> Result<Arc<Vec<Poly<F>>>> {
        self.groebner_basis(&self.default_order())
    }

    pub fn is_unit(&self) -> Result<bool> {
        if self.gens.is_empty() {
            return Ok(false);
        }
        if self.gens.iter().any(|g| g.is_constant()) {
            return Ok(true);
        }
        let b = self.basis()?;
        Ok(b.len() == 1 && b[0].is_constant())
    }

    pub fn is_zero(&self) -> bool {
        self.gens.is_empty()
    }

    /// Plain ideal membership.
    pub fn contains(&self, f: &Poly<F>) -> Result<bool> {
        if f.is_zero() {
            return Ok(true);
        }
        if self.gens.is_empty() {
            return Ok(false);
        }
        let extra: Vec<Var> = f.vars().into_iter().filter(|v| !self.ambient.contains(v)).collect();
        if extra.is_empty() {
            let ord = self.default_order();
            Ok(normal_form(f, &self.groebner_basis(&ord)?, &ord)?.is_zero())
        } else {
            self.with_ambient(extra).contains(f)
        }
    }

    /// Every generator of `other` lies in `self`.
    pub fn contains_ideal(&self, other: &Ideal<F>) -> Result<bool> {
        for g in &other.gens {
            if !self.contains(g)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn same_ideal(&self, other: &Ideal<F>) -> Result<bool> {
        Ok(self.contains_ideal(other)? && other.contains_ideal(self)?)
    }

    /// `I ∩ k[ambient ∖ drop]`, via a block order with `drop` first.
    pub fn eliminate(&self, drop: &BTreeSet<Var>) -> Result<Ideal<F>> {
        let keep: Vec<Var> = self.ambient.iter().copied().filter(|v| !drop.contains(v)).collect();
        let first: Vec<Var> = self.ambient.iter().copied().filter(|v| drop.contains(v)).collect();
        if first.is_empty() {
            return Ok(self.clone());
        }
        if self.gens.is_empty() {
            return Ok(Ideal::zero(keep));
        }
        let ord = MonomialOrder::block(first, keep.clone());
        let gb = self.groebner_basis(&ord)?;
        let gens: Vec<Poly<F>> =
            gb.iter().filter(|g| g.vars().iter().all(|v| !drop.contains(v))).cloned().collect();
        Ok(Ideal::new(gens, keep))
    }

    fn fresh_aux(&self) -> Var {
        let k = self.ambient.iter().filter(|v| v.family == Family::Z).map(|v| v.index).max().unwrap_or(0);
        Var::z(k + 1)
    }

    /// `I : f^∞` through one Rabinowitsch variable.
    pub fn saturate(&self, f: &Poly<F>) -> Result<Ideal<F>> {
        if f.is_zero() {
            return Err(Error::InvalidInput("saturation by the zero polynomial".into()));
        }
        if f.is_constant() || self.gens.is_empty() {
            return Ok(self.with_ambient(f.vars()));
        }
        let z = self.fresh_aux();
        let mut gens = self.gens.clone();
        gens.push(&Poly::one() - &(&Poly::var(z) * f));
        let big = Ideal::new(gens, self.ambient.iter().copied().chain(f.vars()));
        big.eliminate(&[z].into())
    }

    /// Whether `f` vanishes on `V(I)`.
    pub fn radical_member(&self, f: &Poly<F>) -> Result<bool> {
        if self.contains(f)? {
            return Ok(true);
        }
        if self.gens.is_empty() {
            // Only the zero polynomial vanishes everywhere (infinite field).
            return Ok(false);
        }
        let z = self.fresh_aux();
        let mut gens = self.gens.clone();
        gens.push(&Poly::one() - &(&Poly::var(z) * f));
        Ideal::new(gens, self.ambient.iter().copied().chain(f.vars())).is_unit()
    }

    /// `I ∩ J` via `z·I + (1−z)·J` with `z` eliminated.
    pub fn intersect(&self, other: &Ideal<F>) -> Result<Ideal<F>> {
        let ambient: BTreeSet<Var> = self.ambient.union(&other.ambient).copied().collect();
        if self.gens.is_empty() || other.gens.is_empty() {
            return Ok(Ideal::zero(ambient));
        }
        if self.is_unit()? {
            return Ok(other.with_ambient(ambient));
        }
        if other.is_unit()? {
            return Ok(self.with_ambient(ambient));
        }
        let k = ambient.iter().filter(|v| v.family == Family::Z).map(|v| v.index).max().unwrap_or(0);
        let z = Var::z(k + 1);
        let zp = Poly::var(z);
        let omz = &Poly::one() - &zp;
        let mut gens: Vec<Poly<F>> = self.gens.iter().map(|g| &zp * g).collect();
        gens.extend(other.gens.iter().map(|g| &omz * g));
        let big = Ideal::new(gens, ambient.iter().copied().chain([z]));
        big.eliminate(&[z].into())
    }

    /// `V(I) ∩ {D ≠ 0} ⊆ V(J)`.
    pub fn variety_contained(&self, other: &Ideal<F>, d: &Poly<F>) -> Result<bool> {
        let sat = self.saturate(d)?;
        for g in &other.gens {
            if !sat.radical_member(g)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Apply a variable substitution to every generator.
    pub fn map_gens(&self, f: impl Fn(&Poly<F>) -> Poly<F>, ambient: impl IntoIterator<Item = Var>) -> Ideal<F> {
        Ideal::new(self.gens.iter().map(f).collect(), ambient)
    }
}

/// Remainder of `f` modulo a Gröbner basis `basis` for `ord`.
pub fn normal_form<F: Field>(f: &Poly<F>, basis: &[Poly<F>], ord: &MonomialOrder) -> Result<Poly<F>> {
    let mut vars = ord.vars.clone();
    let extra: Vec<Var> = f.vars().into_iter().filter(|v| !vars.contains(v)).collect();
    // Variables unknown to the order rank below everything; they never appear in heads of `basis`.
    let ext;
    let ord = if extra.is_empty() {
        ord
    } else {
        vars.extend(extra);
        ext = MonomialOrder { kind: ord.kind, vars };
        &ext
    };
    let ring = Ring::new(ord);
    let dense: Vec<_> = basis.iter().map(|g| ring.to_dense(g)).collect::<Result<_>>()?;
    let refs: Vec<_> = dense.iter().collect();
    let r = ring.reduce(&ring.to_dense(f)?, &refs);
    Ok(ring.to_sparse(&r))
}

fn exponents(m: &Monomial, ord: &MonomialOrder) -> Vec<u16> {
    ord.vars.iter().map(|&v| m.exponent(v) as u16).collect()
}

/// Leading monomial and coefficient of `f` for `ord` (variables of `f` must be in `ord`).
pub fn leading_term<F: Field>(f: &Poly<F>, ord: &MonomialOrder) -> Option<(Monomial, F)> {
    f.terms()
        .max_by(|a, b| ord.cmp(&exponents(a.0, ord), &exponents(b.0, ord)))
        .map(|(m, c)| (m.clone(), c.clone()))
}

/// The S-polynomial of `f` and `g` for `ord`.
pub fn s_polynomial<F: Field>(f: &Poly<F>, g: &Poly<F>, ord: &MonomialOrder) -> Poly<F> {
    let (Some((mf, cf)), Some((mg, cg))) = (leading_term(f, ord), leading_term(g, ord)) else {
        return Poly::zero();
    };
    let lcm = Monomial::from_pairs(
        ord.vars.iter().map(|&v| (v, mf.exponent(v).max(mg.exponent(v)))),
    );
    let quo = |m: &Monomial| Monomial::from_pairs(ord.vars.iter().map(|&v| (v, lcm.exponent(v) - m.exponent(v))));
    &f.mul_monomial(&quo(&mf), &cf.inv()) - &g.mul_monomial(&quo(&mg), &cg.inv())
}

/// ∏_{α<β} (t_α − t_β) over `t1..tr`.
pub fn t_difference_product<F: Field>(r: u32) -> Poly<F> {
    let idx: Vec<u32> = (1..=r).collect();
    crate::poly::discriminant(&idx, Family::T).unwrap_or_else(|_| Poly::one())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::QPoly;

    fn q(s: &str) -> QPoly {
        QPoly::parse(s).unwrap()
    }

    fn ideal(gs: &[&str]) -> Ideal<crate::poly::Rational> {
        Ideal::from_gens(gs.iter().map(|s| q(s)).collect())
    }

    fn strs(v: &[QPoly]) -> Vec<String> {
        v.iter().map(|p| p.to_string()).collect()
    }

    #[test]
    fn basis_examples() {
        let i = ideal(&["t1"]);
        let ord = MonomialOrder::lex(vec![Var::t(1)]);
        assert_eq!(strs(&i.groebner_basis(&ord).unwrap()), ["t1"]);

        let i = ideal(&["t1^2 + t2^2 - 1", "t1 - t2"]);
        let ord = MonomialOrder::lex(vec![Var::t(1), Var::t(2)]);
        assert_eq!(strs(&i.groebner_basis(&ord).unwrap()), ["t2^2 - 1/2", "t1 - t2"]);
    }

    #[test]
    fn contraction_at_n_q_2() {
        let i = ideal(&["x1 - t1 - e1", "x2 - t1 - e2", "e1^2", "e2^2"]);
        let drop: BTreeSet<Var> = [Var::t(1), Var::e(1), Var::e(2)].into();
        let c = i.eliminate(&drop).unwrap();
        assert!(c.same_ideal(&ideal(&["(x1 - x2)^3"])).unwrap());
        // (x1-x2)^2 is not in the kernel.
        assert!(!c.contains(&q("(x1-x2)^2")).unwrap());
        let ord = i.default_order();
        let nf = normal_form(&q("(x1-x2)^2"), &i.groebner_basis(&ord).unwrap(), &ord).unwrap();
        assert!(!nf.is_zero());
    }

    #[test]
    fn normal_forms() {
        let i = ideal(&["t1"]);
        let ord = i.default_order();
        let b = i.groebner_basis(&ord).unwrap();
        assert!(normal_form(&q("t1^2"), &b, &ord).unwrap().is_zero());
        assert_eq!(normal_form(&q("t1 + 1"), &b, &ord).unwrap(), q("1"));
    }

    #[test]
    fn elimination() {
        let drop: BTreeSet<Var> = [Var::t(2)].into();
        let e = ideal(&["t1 - t2", "t2^2 - 2"]).eliminate(&drop).unwrap();
        assert!(e.same_ideal(&ideal(&["t1^2 - 2"])).unwrap());
        let e = ideal(&["t1^2 + t2^2 - 1"]).eliminate(&drop).unwrap();
        assert!(e.is_zero());
        let i = ideal(&["t1*t2"]);
        assert_eq!(i.eliminate(&BTreeSet::new()).unwrap().gens(), i.gens());
    }

    #[test]
    fn saturation() {
        assert!(ideal(&["t1*t2"]).saturate(&q("t2")).unwrap().same_ideal(&ideal(&["t1"])).unwrap());
        assert!(ideal(&["t1"]).saturate(&q("t2")).unwrap().same_ideal(&ideal(&["t1"])).unwrap());
        let c = ideal(&["t1^2 + t2^2 - 1"]);
        assert!(c.saturate(&q("t1 - t2")).unwrap().same_ideal(&c).unwrap());
    }

    #[test]
    fn radical_membership() {
        assert!(ideal(&["t1^2"]).radical_member(&q("t1")).unwrap());
        assert!(!ideal(&["t2"]).radical_member(&q("t1")).unwrap());
        assert!(ideal(&["t1^2 + 2*t1*t2 + t2^2"]).radical_member(&q("t1 + t2")).unwrap());
    }

    #[test]
    fn intersection() {
        let a = ideal(&["t1"]).intersect(&ideal(&["t2"])).unwrap();
        assert!(a.same_ideal(&ideal(&["t1*t2"])).unwrap());
        let i = ideal(&["t1^2 - t2", "t2^3"]);
        assert!(i.intersect(&ideal(&["1"])).unwrap().same_ideal(&i).unwrap());
        assert!(i.intersect(&i).unwrap().same_ideal(&i).unwrap());
    }

    #[test]
    fn variety_containment() {
        let d = q("t1 - t2");
        assert!(ideal(&["t1 + t2"]).variety_contained(&ideal(&["t1 + t2"]), &d).unwrap());
        assert!(ideal(&["t1 - 1", "t2 + 1"]).variety_contained(&ideal(&["t1^2 + t2^2 - 2"]), &d).unwrap());
        let z: Ideal<crate::poly::Rational> = Ideal::zero([Var::t(1)]);
        assert!(!z.variety_contained(&ideal(&["t1"]), &q("1")).unwrap());
    }

    #[test]
    fn budget_is_enforced() {
        let i = ideal(&["x1^2*x2 - x3^3", "x1*x2^2 - x1^3"]);
        let tiny = Budget { max_reductions: 0, max_degree: 120 };
        let err = i.groebner_basis_with_budget(&i.default_order(), tiny).unwrap_err();
        assert!(err.is_budget());
        let low = Budget { max_reductions: 1000, max_degree: 3 };
        assert!(i.groebner_basis_with_budget(&i.default_order(), low).unwrap_err().is_budget());
    }
}
