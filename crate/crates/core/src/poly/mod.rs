//! Sparse multivariate polynomials over the three variable families
//! `x` (the ring variables), `t` (configuration coordinates) and `e`
//! (nilpotent directions), plus an internal auxiliary family `z`.

mod field;
mod parse;

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

pub use field::{Field, Fp, Rational};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    X,
    T,
    E,
    /// Auxiliary variables introduced by saturation / intersection. Never parsed.
    Z,
}

impl Family {
    pub fn letter(self) -> char {
        match self {
            Family::X => 'x',
            Family::T => 't',
            Family::E => 'e',
            Family::Z => 'z',
        }
    }
}

/// A variable; the derived order (`x1 < x2 < … < t1 < … < e1 < … < z1 …`)
/// lists variables from most to least significant.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Var {
    pub family: Family,
    pub index: u32,
}

impl Var {
    pub const fn new(family: Family, index: u32) -> Self {
        Var { family, index }
    }
    pub const fn x(i: u32) -> Self {
        Var::new(Family::X, i)
    }
    pub const fn t(i: u32) -> Self {
        Var::new(Family::T, i)
    }
    pub const fn e(i: u32) -> Self {
        Var::new(Family::E, i)
    }
    pub const fn z(i: u32) -> Self {
        Var::new(Family::Z, i)
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.family.letter(), self.index)
    }
}

/// Power product, stored as `(var, exp)` pairs sorted by variable, exponents > 0.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Monomial(Vec<(Var, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(v: Var, exp: u32) -> Self {
        if exp == 0 {
            Monomial::one()
        } else {
            Monomial(vec![(v, exp)])
        }
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (Var, u32)>) -> Self {
        let mut map: BTreeMap<Var, u32> = BTreeMap::new();
        for (v, e) in pairs {
            *map.entry(v).or_default() += e;
        }
        Monomial(map.into_iter().filter(|&(_, e)| e > 0).collect())
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn pairs(&self) -> &[(Var, u32)] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&(_, e)| e).sum()
    }

    pub fn exponent(&self, v: Var) -> u32 {
        self.0
            .binary_search_by_key(&v, |&(w, _)| w)
            .map(|i| self.0[i].1)
            .unwrap_or(0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let (a, b) = (&self.0, &other.0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((a[i].0, a[i].1 + b[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Monomial(out)
    }

    /// Graded reverse lexicographic comparison, `x1` most significant.
    pub fn cmp_grevlex(&self, other: &Monomial) -> Ordering {
        let d = self.degree().cmp(&other.degree());
        if d != Ordering::Equal {
            return d;
        }
        // Walk from the least significant variable; smaller exponent wins.
        let (a, b) = (&self.0, &other.0);
        let (mut i, mut j) = (a.len(), b.len());
        while i > 0 || j > 0 {
            let va = if i > 0 { Some(a[i - 1]) } else { None };
            let vb = if j > 0 { Some(b[j - 1]) } else { None };
            match (va, vb) {
                (Some((x, ex)), Some((y, ey))) => match x.cmp(&y) {
                    Ordering::Equal => {
                        if ex != ey {
                            return ey.cmp(&ex);
                        }
                        i -= 1;
                        j -= 1;
                    }
                    // `a` carries a less significant variable that `b` lacks.
                    Ordering::Greater => return Ordering::Less,
                    Ordering::Less => return Ordering::Greater,
                },
                (Some(_), None) => return Ordering::Less,
                (None, Some(_)) => return Ordering::Greater,
                (None, None) => break,
            }
        }
        Ordering::Equal
    }

    pub fn vars(&self) -> impl Iterator<Item = Var> + '_ {
        self.0.iter().map(|&(v, _)| v)
    }

    pub fn rename(&self, f: &impl Fn(Var) -> Var) -> Monomial {
        Monomial::from_pairs(self.0.iter().map(|&(v, e)| (f(v), e)))
    }

    /// Split into the part in variables satisfying `pred` and the rest.
    pub fn split(&self, pred: impl Fn(Var) -> bool) -> (Monomial, Monomial) {
        let (a, b): (Vec<_>, Vec<_>) = self.0.iter().partition(|&&(v, _)| pred(v));
        (Monomial(a), Monomial(b))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for (k, &(v, e)) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, "*")?;
            }
            if e == 1 {
                write!(f, "{v}")?;
            } else {
                write!(f, "{v}^{e}")?;
            }
        }
        Ok(())
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly<F: Field> {
    terms: BTreeMap<Monomial, F>,
}

pub type QPoly = Poly<Rational>;

impl<F: Field> Default for Poly<F> {
    fn default() -> Self {
        Poly::zero()
    }
}

impl<F: Field> Poly<F> {
    pub fn zero() -> Self {
        Poly { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Poly::constant(F::one())
    }

    pub fn constant(c: F) -> Self {
        Poly::term(Monomial::one(), c)
    }

    pub fn int(v: i64) -> Self {
        Poly::constant(F::from_i64(v))
    }

    pub fn var(v: Var) -> Self {
        Poly::term(Monomial::var(v, 1), F::one())
    }

    pub fn term(m: Monomial, c: F) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Poly { terms }
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Monomial, F)>) -> Self {
        let mut p = Poly::zero();
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn add_term(&mut self, m: Monomial, c: F) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get().add(&c);
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_one)
    }

    pub fn constant_term(&self) -> F {
        self.terms.get(&Monomial::one()).cloned().unwrap_or_else(F::zero)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &F)> {
        self.terms.iter()
    }

    pub fn into_terms(self) -> impl Iterator<Item = (Monomial, F)> {
        self.terms.into_iter()
    }

    pub fn coeff(&self, m: &Monomial) -> F {
        self.terms.get(m).cloned().unwrap_or_else(F::zero)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        self.terms.keys().flat_map(|m| m.vars()).collect()
    }

    /// Largest index used in `family`, 0 if absent.
    pub fn max_index(&self, family: Family) -> u32 {
        self.vars()
            .into_iter()
            .filter(|v| v.family == family)
            .map(|v| v.index)
            .max()
            .unwrap_or(0)
    }

    /// Terms in descending grevlex order (the canonical printing order).
    pub fn sorted_terms(&self) -> Vec<(&Monomial, &F)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|a, b| b.0.cmp_grevlex(a.0));
        v
    }

    pub fn leading_coeff(&self) -> F {
        self.sorted_terms().first().map(|t| t.1.clone()).unwrap_or_else(F::zero)
    }

    pub fn scale(&self, c: &F) -> Self {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a.mul(c))).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial, c: &F) -> Self {
        Poly::from_terms(self.terms.iter().map(|(n, a)| (n.mul(m), a.mul(c))))
    }

    /// Divide by the leading coefficient (zero stays zero).
    pub fn monic(&self) -> Self {
        let lc = self.leading_coeff();
        if lc.is_zero() {
            self.clone()
        } else {
            self.scale(&lc.inv())
        }
    }

    /// Multiply by ±1 so the leading coefficient is not negative.
    pub fn sign_normalized(&self) -> Self {
        if self.leading_coeff().is_negative() {
            -self
        } else {
            self.clone()
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Poly::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Simultaneous substitution; variables missing from `map` are kept.
    pub fn substitute(&self, map: &BTreeMap<Var, Poly<F>>) -> Self {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let mut acc = Poly::constant(c.clone());
            let mut kept = Vec::new();
            for &(v, e) in m.pairs() {
                match map.get(&v) {
                    Some(p) => acc = &acc * &p.pow(e),
                    None => kept.push((v, e)),
                }
            }
            if !kept.is_empty() {
                acc = acc.mul_monomial(&Monomial(kept), &F::one());
            }
            out = &out + &acc;
        }
        out
    }

    pub fn rename(&self, f: impl Fn(Var) -> Var) -> Self {
        Poly::from_terms(self.terms.iter().map(|(m, c)| (m.rename(&f), c.clone())))
    }

    pub fn derivative(&self, v: Var) -> Self {
        Poly::from_terms(self.terms.iter().filter_map(|(m, c)| {
            let e = m.exponent(v);
            if e == 0 {
                return None;
            }
            let rest = Monomial::from_pairs(
                m.pairs().iter().map(|&(w, k)| (w, if w == v { k - 1 } else { k })),
            );
            Some((rest, c.mul(&F::from_i64(e as i64))))
        }))
    }

    /// Evaluate the variables in `point`; others stay symbolic.
    pub fn eval_partial(&self, point: &BTreeMap<Var, F>) -> Self {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let mut coef = c.clone();
            let mut kept = Vec::new();
            for &(v, e) in m.pairs() {
                match point.get(&v) {
                    Some(a) => {
                        for _ in 0..e {
                            coef = coef.mul(a);
                        }
                    }
                    None => kept.push((v, e)),
                }
            }
            out.add_term(Monomial(kept), coef);
        }
        out
    }

    /// Group terms by their monomial in the variables satisfying `pred`.
    pub fn collect_by(&self, pred: impl Fn(Var) -> bool) -> BTreeMap<Monomial, Poly<F>> {
        let mut out: BTreeMap<Monomial, Poly<F>> = BTreeMap::new();
        for (m, c) in &self.terms {
            let (key, rest) = m.split(&pred);
            out.entry(key).or_default().add_term(rest, c.clone());
        }
        out
    }

    pub fn map_coeffs<G: Field>(&self, f: impl Fn(&F) -> G) -> Poly<G> {
        Poly::from_terms(self.terms.iter().map(|(m, c)| (m.clone(), f(c))))
    }

    pub fn parse(text: &str) -> Result<Self> {
        parse::parse(text)
    }
}

impl QPoly {
    /// Reduce a rational polynomial into `F_p`; `None` if a denominator vanishes.
    pub fn to_fp<const P: u64>(&self) -> Option<Poly<Fp<P>>> {
        let mut out = Poly::zero();
        for (m, c) in self.terms() {
            out.add_term(m.clone(), Fp::<P>::from_ratio(c.numer(), c.denom())?);
        }
        Some(out)
    }
}

/// ∏_{i<j} (v_i − v_j) over `indices` in the given order.
pub fn discriminant<F: Field>(indices: &[u32], family: Family) -> Result<Poly<F>> {
    if indices.is_empty() {
        return Err(Error::EmptyIndexSet);
    }
    let mut acc = Poly::one();
    for (a, &i) in indices.iter().enumerate() {
        for &j in &indices[a + 1..] {
            let d = &Poly::var(Var::new(family, i)) - &Poly::var(Var::new(family, j));
            acc = &acc * &d;
        }
    }
    Ok(acc)
}

/// `(x_i − x_j)` as a polynomial.
pub fn diff<F: Field>(i: u32, j: u32) -> Poly<F> {
    &Poly::var(Var::x(i)) - &Poly::var(Var::x(j))
}

impl<'a, F: Field> Add<&'a Poly<F>> for &'a Poly<F> {
    type Output = Poly<F>;
    fn add(self, rhs: &Poly<F>) -> Poly<F> {
        let (big, small) = if self.len() >= rhs.len() { (self, rhs) } else { (rhs, self) };
        let mut out = big.clone();
        for (m, c) in &small.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl<'a, F: Field> Sub<&'a Poly<F>> for &'a Poly<F> {
    type Output = Poly<F>;
    fn sub(self, rhs: &Poly<F>) -> Poly<F> {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.neg());
        }
        out
    }
}

impl<'a, F: Field> Mul<&'a Poly<F>> for &'a Poly<F> {
    type Output = Poly<F>;
    fn mul(self, rhs: &Poly<F>) -> Poly<F> {
        let mut out = Poly::zero();
        for (m, a) in &self.terms {
            for (n, b) in &rhs.terms {
                out.add_term(m.mul(n), a.mul(b));
            }
        }
        out
    }
}

impl<F: Field> Neg for &Poly<F> {
    type Output = Poly<F>;
    fn neg(self) -> Poly<F> {
        Poly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c.neg())).collect(),
        }
    }
}

impl<F: Field> Add for Poly<F> {
    type Output = Poly<F>;
    fn add(self, rhs: Poly<F>) -> Poly<F> {
        &self + &rhs
    }
}

impl<F: Field> Sub for Poly<F> {
    type Output = Poly<F>;
    fn sub(self, rhs: Poly<F>) -> Poly<F> {
        &self - &rhs
    }
}

impl<F: Field> Mul for Poly<F> {
    type Output = Poly<F>;
    fn mul(self, rhs: Poly<F>) -> Poly<F> {
        &self * &rhs
    }
}

impl<F: Field> Neg for Poly<F> {
    type Output = Poly<F>;
    fn neg(self) -> Poly<F> {
        -&self
    }
}

impl<F: Field> fmt::Display for Poly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.sorted_terms().into_iter().enumerate() {
            let neg = c.is_negative();
            let mag = if neg { c.neg() } else { c.clone() };
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if m.is_one() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{mag}*{m}")?;
            }
        }
        Ok(())
    }
}

impl<F: Field> fmt::Debug for Poly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({self})")
    }
}
