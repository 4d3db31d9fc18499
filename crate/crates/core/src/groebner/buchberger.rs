//! Dense-exponent Buchberger completion with the Gebauer–Möller criteria.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use smallvec::SmallVec;

use super::{Budget, MonomialOrder};
use crate::error::{Error, Result};
use crate::poly::{Field, Monomial, Poly, Var};

pub(crate) type Exp = SmallVec<[u16; 16]>;

/// Polynomial with terms sorted strictly descending in the active order.
#[derive(Clone, Debug)]
pub(crate) struct DPoly<F> {
    pub terms: Vec<(Exp, F)>,
}

impl<F: Field> DPoly<F> {
    fn lm(&self) -> &Exp {
        &self.terms[0].0
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn is_constant(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.iter().all(|&e| e == 0)
    }

    fn make_monic(&mut self) {
        let inv = self.terms[0].1.inv();
        if !self.terms[0].1.is_one() {
            for t in &mut self.terms {
                t.1 = t.1.mul(&inv);
            }
        }
    }

    fn degree(&self) -> u32 {
        self.terms
            .iter()
            .map(|t| t.0.iter().map(|&e| e as u32).sum::<u32>())
            .max()
            .unwrap_or(0)
    }
}

pub(crate) struct Ring<'a> {
    pub ord: &'a MonomialOrder,
    index: BTreeMap<Var, usize>,
}

impl<'a> Ring<'a> {
    pub fn new(ord: &'a MonomialOrder) -> Self {
        let index = ord.vars.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        Ring { ord, index }
    }

    pub fn to_dense<F: Field>(&self, p: &Poly<F>) -> Result<DPoly<F>> {
        let n = self.ord.vars.len();
        let mut terms = Vec::with_capacity(p.len());
        for (m, c) in p.terms() {
            let mut e: Exp = SmallVec::from_elem(0, n);
            for &(v, k) in m.pairs() {
                let i = *self.index.get(&v).ok_or_else(|| {
                    Error::InvalidInput(format!("variable {v} outside the ambient ring"))
                })?;
                e[i] = u16::try_from(k)
                    .map_err(|_| Error::Budget(format!("exponent {k} too large")))?;
            }
            terms.push((e, c.clone()));
        }
        terms.sort_by(|a, b| self.ord.cmp(&b.0, &a.0));
        Ok(DPoly { terms })
    }

    pub fn to_sparse<F: Field>(&self, p: &DPoly<F>) -> Poly<F> {
        Poly::from_terms(p.terms.iter().map(|(e, c)| {
            let m = Monomial::from_pairs(
                e.iter()
                    .enumerate()
                    .filter(|(_, &k)| k > 0)
                    .map(|(i, &k)| (self.ord.vars[i], k as u32)),
            );
            (m, c.clone())
        }))
    }

    /// `a - c·x^shift·b`.
    fn sub_mul<F: Field>(&self, a: &[(Exp, F)], c: &F, shift: &Exp, b: &[(Exp, F)]) -> Vec<(Exp, F)> {
        let mut out = Vec::with_capacity(a.len() + b.len());
        let mut i = 0;
        let mut bs = b.iter().map(|(e, k)| (mul_exp(e, shift), k.mul(c)));
        let mut cur_b = bs.next();
        while i < a.len() || cur_b.is_some() {
            match (a.get(i), &cur_b) {
                (Some(ta), Some(tb)) => match self.ord.cmp(&ta.0, &tb.0) {
                    Ordering::Greater => {
                        out.push(ta.clone());
                        i += 1;
                    }
                    Ordering::Less => {
                        let (e, k) = cur_b.take().unwrap();
                        out.push((e, k.neg()));
                        cur_b = bs.next();
                    }
                    Ordering::Equal => {
                        let s = ta.1.sub(&tb.1);
                        if !s.is_zero() {
                            out.push((ta.0.clone(), s));
                        }
                        i += 1;
                        cur_b = bs.next();
                    }
                },
                (Some(ta), None) => {
                    out.push(ta.clone());
                    i += 1;
                }
                (None, Some(_)) => {
                    let (e, k) = cur_b.take().unwrap();
                    out.push((e, k.neg()));
                    cur_b = bs.next();
                }
                (None, None) => break,
            }
        }
        out
    }

    /// Full reduction of `p` by `basis`.
    pub fn reduce<F: Field>(&self, p: &DPoly<F>, basis: &[&DPoly<F>]) -> DPoly<F> {
        let mut rest: Vec<(Exp, F)> = p.terms.clone();
        let mut start = 0;
        let mut rem = Vec::new();
        // `rest[start..]` stays sorted; its head is the largest unprocessed term.
        while start < rest.len() {
            let head = &rest[start].0;
            match basis.iter().find(|g| divides(g.lm(), head)) {
                Some(g) => {
                    let shift = div_exp(head, g.lm());
                    let c = rest[start].1.div(&g.terms[0].1);
                    rest = self.sub_mul(&rest[start..], &c, &shift, &g.terms);
                    start = 0;
                }
                None => {
                    rem.push(rest[start].clone());
                    start += 1;
                }
            }
        }
        DPoly { terms: rem }
    }

    fn spoly<F: Field>(&self, f: &DPoly<F>, g: &DPoly<F>) -> DPoly<F> {
        let l = lcm_exp(f.lm(), g.lm());
        let sf = div_exp(&l, f.lm());
        let sg = div_exp(&l, g.lm());
        let a: Vec<(Exp, F)> = f.terms[1..]
            .iter()
            .map(|(e, c)| (mul_exp(e, &sf), c.div(&f.terms[0].1)))
            .collect();
        let c = g.terms[0].1.inv();
        DPoly { terms: self.sub_mul(&a, &c, &sg, &g.terms[1..]) }
    }
}

fn divides(a: &Exp, b: &Exp) -> bool {
    a.iter().zip(b.iter()).all(|(x, y)| x <= y)
}

fn mul_exp(a: &Exp, b: &Exp) -> Exp {
    a.iter().zip(b.iter()).map(|(x, y)| x + y).collect()
}

fn div_exp(a: &Exp, b: &Exp) -> Exp {
    a.iter().zip(b.iter()).map(|(x, y)| x - y).collect()
}

fn lcm_exp(a: &Exp, b: &Exp) -> Exp {
    a.iter().zip(b.iter()).map(|(x, y)| *x.max(y)).collect()
}

fn coprime(a: &Exp, b: &Exp) -> bool {
    a.iter().zip(b.iter()).all(|(x, y)| *x == 0 || *y == 0)
}

struct Pair {
    i: usize,
    j: usize,
    lcm: Exp,
}

/// Gebauer–Möller update: add the new element `h` (index `k`) to the pair set.
fn update<F: Field>(
    polys: &[DPoly<F>],
    active: &mut Vec<usize>,
    pairs: &mut Vec<Pair>,
    k: usize,
) {
    let hlm = polys[k].lm().clone();
    let cand: Vec<(usize, Exp, bool)> = active
        .iter()
        .map(|&g| {
            let glm = polys[g].lm();
            (g, lcm_exp(&hlm, glm), coprime(&hlm, glm))
        })
        .collect();
    // Chain criterion among the new pairs.
    let mut keep = vec![true; cand.len()];
    for a in 0..cand.len() {
        if cand[a].2 {
            continue;
        }
        for b in 0..cand.len() {
            if a == b || !keep[b] {
                continue;
            }
            let strictly = cand[b].1 != cand[a].1;
            if divides(&cand[b].1, &cand[a].1) && (strictly || b < a) {
                keep[a] = false;
                break;
            }
        }
    }
    // Product criterion: drop coprime pairs (after using them to prune).
    let new_pairs: Vec<Pair> = cand
        .into_iter()
        .zip(keep)
        .filter(|((_, _, cop), kept)| *kept && !cop)
        .map(|((g, l, _), _)| Pair { i: g, j: k, lcm: l })
        .collect();
    // Old pairs made redundant by h.
    pairs.retain(|p| {
        let li = lcm_exp(polys[p.i].lm(), &hlm);
        let lj = lcm_exp(polys[p.j].lm(), &hlm);
        !(divides(&hlm, &p.lcm) && li != p.lcm && lj != p.lcm)
    });
    pairs.extend(new_pairs);
    active.retain(|&g| !divides(&hlm, polys[g].lm()));
    active.push(k);
}

/// Reduced Gröbner basis (monic, sorted ascending by leading monomial).
pub(crate) fn groebner<F: Field>(ring: &Ring, input: Vec<DPoly<F>>, budget: Budget) -> Result<Vec<DPoly<F>>> {
    let mut polys: Vec<DPoly<F>> = Vec::new();
    let mut active: Vec<usize> = Vec::new();
    let mut pairs: Vec<Pair> = Vec::new();
    let mut seeds: Vec<DPoly<F>> = input.into_iter().filter(|p| !p.is_zero()).collect();
    seeds.sort_by(|a, b| ring.ord.cmp(a.lm(), b.lm()));
    let one = |n: usize| DPoly { terms: vec![(SmallVec::from_elem(0, n), F::one())] };
    let n = ring.ord.vars.len();
    for s in seeds {
        let basis: Vec<&DPoly<F>> = active.iter().map(|&i| &polys[i]).collect();
        let mut h = ring.reduce(&s, &basis);
        if h.is_zero() {
            continue;
        }
        if h.is_constant() {
            return Ok(vec![one(n)]);
        }
        h.make_monic();
        polys.push(h);
        update(&polys, &mut active, &mut pairs, polys.len() - 1);
    }
    let mut reductions: u64 = 0;
    while !pairs.is_empty() {
        // Normal strategy: smallest lcm first.
        let mut best = 0;
        for k in 1..pairs.len() {
            if ring.ord.cmp(&pairs[k].lcm, &pairs[best].lcm) == Ordering::Less {
                best = k;
            }
        }
        let p = pairs.swap_remove(best);
        reductions += 1;
        if reductions > budget.max_reductions {
            return Err(Error::Budget(format!(
                "more than {} pair reductions",
                budget.max_reductions
            )));
        }
        let s = ring.spoly(&polys[p.i], &polys[p.j]);
        let basis: Vec<&DPoly<F>> = active.iter().map(|&i| &polys[i]).collect();
        let mut h = ring.reduce(&s, &basis);
        if h.is_zero() {
            continue;
        }
        if h.is_constant() {
            return Ok(vec![one(n)]);
        }
        let d = h.degree();
        if d > budget.max_degree {
            return Err(Error::Budget(format!(
                "intermediate degree {d} exceeds {}",
                budget.max_degree
            )));
        }
        h.make_monic();
        polys.push(h);
        update(&polys, &mut active, &mut pairs, polys.len() - 1);
    }
    // `active` is already minimal; interreduce tails.
    let mut basis: Vec<DPoly<F>> = active.iter().map(|&i| polys[i].clone()).collect();
    basis.sort_by(|a, b| ring.ord.cmp(a.lm(), b.lm()));
    let mut out: Vec<DPoly<F>> = Vec::with_capacity(basis.len());
    for i in 0..basis.len() {
        let others: Vec<&DPoly<F>> =
            basis.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, g)| g).collect();
        let head = DPoly { terms: vec![basis[i].terms[0].clone()] };
        let tail = DPoly { terms: basis[i].terms[1..].to_vec() };
        let mut r = ring.reduce(&tail, &others);
        let mut terms = head.terms;
        terms.append(&mut r.terms);
        out.push(DPoly { terms });
    }
    Ok(out)
}
