//! Explicit separating polynomials h = h₁h₂h₃ with h ∈ p and h ∉ q.

use std::collections::BTreeMap;

use itertools::Itertools;
use serde::Serialize;

use crate::combinat::{good_pairs, GoodPair, PartSize, WeightedShape};
use crate::error::{Error, Result};
use crate::groebner::{Ideal, MonomialOrder};
use crate::poly::{diff, Field, QPoly, Rational, Var};
use crate::sprime::{member_product, SPrimeData};
use crate::theta::projection;

/// Index layout of the witness window `[m]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WitnessLayout {
    pub n: u32,
    pub tau: Vec<u32>,
    pub m: u32,
    /// Ū_β as 1-based consecutive index ranges.
    pub blocks: Vec<Vec<u32>>,
    /// Ū_{β,k}, k = 1..n, for infinite β; empty for finite β.
    pub sub_blocks: Vec<Vec<Vec<u32>>>,
    pub e_max: u32,
    /// N = 2·e_max − 1.
    pub big_n: u32,
}

impl WitnessLayout {
    pub fn new(source: &WeightedShape, target: &WeightedShape) -> Self {
        let n = 1 + source.finite_sum();
        let tau: Vec<u32> = target
            .parts()
            .iter()
            .zip(target.weights())
            .map(|(p, &d)| p.finite().unwrap_or(n * d))
            .collect();
        let mut next = 1;
        let mut blocks = Vec::new();
        let mut sub_blocks = Vec::new();
        for (b, &t) in tau.iter().enumerate() {
            let block: Vec<u32> = (next..next + t).collect();
            next += t;
            let subs = if target.parts()[b].is_inf() {
                block.chunks(target.weights()[b] as usize).map(<[u32]>::to_vec).collect()
            } else {
                Vec::new()
            };
            blocks.push(block);
            sub_blocks.push(subs);
        }
        let e_max = source.max_weight();
        WitnessLayout { n, m: next - 1, tau, blocks, sub_blocks, e_max, big_n: 2 * e_max - 1 }
    }

    fn block_of(&self, i: u32) -> usize {
        self.blocks.iter().position(|b| b.contains(&i)).expect("index inside the window")
    }

    fn sub_block_of(&self, i: u32) -> Option<(usize, usize)> {
        let b = self.block_of(i);
        self.sub_blocks[b].iter().position(|s| s.contains(&i)).map(|k| (b, k))
    }
}

/// A trace class of compatible partitions: `assign[i-1]` is the source part
/// containing index `i` of the window.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct CompatiblePartition {
    pub assign: Vec<usize>,
}

impl CompatiblePartition {
    /// V̄_α as sorted index lists, one per source part.
    pub fn traces(&self, r: usize) -> Vec<Vec<u32>> {
        let mut out = vec![Vec::new(); r];
        for (i, &a) in self.assign.iter().enumerate() {
            out[a].push(i as u32 + 1);
        }
        out
    }
}

/// One representative per trace class of partitions compatible with `gp`.
pub fn compatible_partitions(
    gp: &GoodPair,
    layout: &WitnessLayout,
    source: &WeightedShape,
) -> Vec<CompatiblePartition> {
    let r = source.r();
    let choices: Vec<Vec<usize>> =
        (1..=layout.m).map(|i| gp.fiber(layout.block_of(i))).collect();
    if choices.is_empty() {
        return Vec::new();
    }
    let subset = gp.subset();
    let mut out = Vec::new();
    for assign in choices.into_iter().multi_cartesian_product() {
        let mut sizes = vec![0u32; r];
        let mut sub_counts: BTreeMap<(usize, usize, usize), u32> = BTreeMap::new();
        for (i, &a) in assign.iter().enumerate() {
            sizes[a] += 1;
            if let Some((b, k)) = layout.sub_block_of(i as u32 + 1) {
                *sub_counts.entry((b, k, a)).or_default() += 1;
            }
        }
        let c1 = subset.iter().all(|&a| sizes[a] > 0);
        let c3 = sub_counts.iter().all(|(&(_, _, a), &c)| c <= source.weights()[a]);
        let fits = (0..r).all(|a| match source.parts()[a] {
            PartSize::Finite(l) => sizes[a] <= l,
            PartSize::Inf => true,
        });
        if c1 && c3 && fits {
            out.push(CompatiblePartition { assign });
        }
    }
    out
}

/// How a u-polynomial in the t_α is lifted to the x-variables of a partition.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LiftRule {
    /// t_α ↦ x_{min V̄_α}.
    SmallestIndex,
    /// Every choice of representatives x_{i_α}, i_α ∈ V̄_α.
    AllRepresentatives,
}

fn lifts(u: &QPoly, part: &CompatiblePartition, r: usize, rule: LiftRule) -> Vec<QPoly> {
    let traces = part.traces(r);
    let used: Vec<usize> = u.vars().iter().map(|v| v.index as usize - 1).collect();
    let options: Vec<Vec<u32>> = used
        .iter()
        .map(|&a| match rule {
            LiftRule::SmallestIndex => vec![traces[a][0]],
            LiftRule::AllRepresentatives => traces[a].clone(),
        })
        .collect();
    if used.is_empty() {
        return vec![u.clone()];
    }
    options
        .into_iter()
        .multi_cartesian_product()
        .map(|reps| {
            let map: BTreeMap<Var, QPoly> = used
                .iter()
                .zip(&reps)
                .map(|(&a, &i)| (Var::t(a as u32 + 1), QPoly::var(Var::x(i))))
                .collect();
            u.substitute(&map).sign_normalized()
        })
        .collect()
}

/// A product of powers of polynomials, kept factored.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Factored {
    pub factors: Vec<(QPoly, u32)>,
}

impl Factored {
    pub fn push(&mut self, f: QPoly, k: u32) {
        if k == 0 || f == QPoly::one() {
            return;
        }
        match self.factors.iter_mut().find(|(g, _)| *g == f) {
            Some(slot) => slot.1 += k,
            None => self.factors.push((f, k)),
        }
    }

    pub fn extend(&mut self, other: &Factored) {
        for (f, k) in &other.factors {
            self.push(f.clone(), *k);
        }
    }

    pub fn expand(&self) -> QPoly {
        self.factors.iter().fold(QPoly::one(), |acc, (f, k)| &acc * &f.pow(*k))
    }

    /// Factors sorted by their printed form, for order-independent comparison.
    pub fn canonical(&self) -> Vec<(String, u32)> {
        let mut v: Vec<(String, u32)> = self.factors.iter().map(|(f, k)| (f.to_string(), *k)).collect();
        v.sort();
        v
    }

    pub fn to_text(&self) -> String {
        if self.factors.is_empty() {
            return "1".into();
        }
        self.factors
            .iter()
            .map(|(f, k)| if *k == 1 { format!("({f})") } else { format!("({f})^{k}") })
            .join("*")
    }
}

/// h₁·h₂ for the layout.
pub fn h12(layout: &WitnessLayout) -> Factored {
    let mut h = Factored::default();
    for subs in &layout.sub_blocks {
        for s in subs {
            for (a, &i) in s.iter().enumerate() {
                for &j in &s[a + 1..] {
                    h.push(diff(i, j), 1);
                }
            }
        }
    }
    for (b, c) in (0..layout.blocks.len()).tuple_combinations() {
        for &i in &layout.blocks[b] {
            for &j in &layout.blocks[c] {
                h.push(diff(i, j), layout.big_n);
            }
        }
    }
    h
}

/// 𝒟_E: the reduced grevlex basis of the projection of Z onto the parts in E.
pub fn projection_basis(p: &SPrimeData, subset: &[usize]) -> Result<Vec<QPoly>> {
    let proj = projection(p, subset)?;
    if proj.is_zero() {
        return Ok(Vec::new());
    }
    let vars: Vec<Var> = subset.iter().map(|&a| Var::t(a as u32 + 1)).collect();
    let ideal = Ideal::new(proj.gens().to_vec(), vars.clone());
    Ok(ideal.groebner_basis(&MonomialOrder::grevlex(vars))?.to_vec())
}

/// g_{E,φ} for a chosen u: the distinct lifts over Π′, each to the power #E·e_max.
pub fn g_factor(
    u: &QPoly,
    gp: &GoodPair,
    layout: &WitnessLayout,
    source: &WeightedShape,
    rule: LiftRule,
) -> Factored {
    let k = gp.subset().len() as u32 * layout.e_max;
    let mut g = Factored::default();
    for part in compatible_partitions(gp, layout, source) {
        for l in lifts(u, &part, source.r(), rule) {
            if !g.factors.iter().any(|(f, _)| *f == l) {
                g.push(l, k);
            }
        }
    }
    g
}

/// h₁h₂ times the product of the distinct g-factors.
pub fn assemble(layout: &WitnessLayout, gs: Vec<Factored>) -> Factored {
    let mut h = h12(layout);
    let mut seen: Vec<Vec<(String, u32)>> = Vec::new();
    for g in gs {
        let key = g.canonical();
        if !seen.contains(&key) {
            seen.push(key);
            h.extend(&g);
        }
    }
    h
}

#[derive(Clone, Debug)]
pub struct Witness {
    pub layout: WitnessLayout,
    pub h: Factored,
}

impl Witness {
    pub fn poly(&self) -> QPoly {
        self.h.expand()
    }
}

fn eval(f: &QPoly, point: &BTreeMap<Var, Rational>) -> Rational {
    f.eval_partial(point).constant_term()
}

/// Build h for `p` against the target shape, using the point `y` of the
/// target U-locus (required whenever good pairs exist).
pub fn build_h(p: &SPrimeData, q_shape: &WeightedShape, y: Option<&[Rational]>) -> Result<Witness> {
    let layout = WitnessLayout::new(p.shape(), q_shape);
    let pairs = good_pairs(q_shape, p.shape());
    if pairs.is_empty() {
        return Ok(Witness { h: h12(&layout), layout });
    }
    let y = y.ok_or_else(|| Error::InvalidInput("good pairs exist, so a point y is required".into()))?;
    if y.len() != q_shape.r() {
        return Err(Error::InvalidInput(format!("point has {} coordinates, expected {}", y.len(), q_shape.r())));
    }
    if y.iter().tuple_combinations().any(|(a, b)| a == b) {
        return Err(Error::InvalidInput("point lies off the U-locus (repeated coordinate)".into()));
    }
    let mut gs = Vec::new();
    let mut bases: BTreeMap<Vec<usize>, Vec<QPoly>> = BTreeMap::new();
    for gp in &pairs {
        let subset = gp.subset();
        if !bases.contains_key(&subset) {
            bases.insert(subset.clone(), projection_basis(p, &subset)?);
        }
        let iy: BTreeMap<Var, Rational> = gp
            .map
            .iter()
            .enumerate()
            .filter_map(|(a, b)| b.map(|b| (Var::t(a as u32 + 1), y[b].clone())))
            .collect();
        let u = bases[&subset].iter().find(|u| !eval(u, &iy).is_zero()).ok_or_else(|| {
            Error::NoWitness(format!(
                "y lies in the Θ component of good pair {gp}; the containment holds there"
            ))
        })?;
        gs.push(g_factor(u, gp, &layout, p.shape(), LiftRule::SmallestIndex));
    }
    Ok(Witness { h: assemble(&layout, gs), layout })
}

/// (h ∈ p, h ∈ q).
pub fn certify(h: &Factored, p: &SPrimeData, q: &SPrimeData) -> Result<(bool, bool)> {
    Ok((member_product(&h.factors, p)?, member_product(&h.factors, q)?))
}

/// Small rationals n/d with |n| ≤ 5, 1 ≤ d ≤ 5, ordered by height.
fn small_rationals() -> Vec<Rational> {
    let mut v: Vec<Rational> = (1..=5i64)
        .flat_map(|d| (-5..=5i64).map(move |n| Rational::new(n, d)))
        .collect();
    v.sort_by_key(|r| {
        let n = r.numer().clone();
        let h = n.magnitude().clone() + r.denom().magnitude().clone();
        (h, r.clone())
    });
    v.dedup();
    v
}

/// A rational point of Y = V(q.Z) ∩ U^K outside V(`avoid`), by grid search.
pub fn find_rational_point(q: &SPrimeData, avoid: &Ideal<Rational>) -> Option<Vec<Rational>> {
    let k = q.r();
    let vals = small_rationals();
    let d = q.difference_product();
    let gens = q.z_ideal().gens();
    let vars: Vec<Var> = (1..=k as u32).map(Var::t).collect();
    // Grow the grid one value at a time so low-height points come first.
    for top in 0..vals.len() {
        for idx in (0..k).map(|_| 0..=top).multi_cartesian_product() {
            if !idx.contains(&top) {
                continue;
            }
            let pt: BTreeMap<Var, Rational> =
                vars.iter().zip(&idx).map(|(&v, &i)| (v, vals[i].clone())).collect();
            if eval(&d, &pt).is_zero() || gens.iter().any(|g| !eval(g, &pt).is_zero()) {
                continue;
            }
            if avoid.gens().iter().any(|g| !eval(g, &pt).is_zero()) {
                return Some(idx.iter().map(|&i| vals[i].clone()).collect());
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ws(p: &[u32], e: &[u32]) -> WeightedShape {
        WeightedShape::from_spec(p, e).unwrap()
    }

    fn sp(p: &[u32], e: &[u32], z: &[&str]) -> SPrimeData {
        SPrimeData::parse(ws(p, e), z).unwrap()
    }

    fn q(s: &str) -> QPoly {
        QPoly::parse(s).unwrap()
    }

    #[test]
    fn layout_shapes() {
        let l = WitnessLayout::new(&ws(&[0, 0], &[2, 2]), &ws(&[0, 1], &[3, 1]));
        assert_eq!((l.n, l.m, l.big_n), (1, 4, 3));
        assert_eq!(l.blocks, vec![vec![1, 2, 3], vec![4]]);
        assert_eq!(l.sub_blocks[0], vec![vec![1, 2, 3]]);
        let l = WitnessLayout::new(&ws(&[0, 2], &[1, 1]), &ws(&[0], &[2]));
        assert_eq!((l.n, l.m), (3, 6));
        assert_eq!(l.sub_blocks[0], vec![vec![1, 2], vec![3, 4], vec![5, 6]]);
    }

    #[test]
    fn partition_counts() {
        let src = ws(&[0, 0], &[2, 2]);
        let gp = GoodPair { map: vec![Some(0), Some(0)] };
        let l = WitnessLayout::new(&src, &ws(&[0], &[3]));
        assert_eq!(compatible_partitions(&gp, &l, &src).len(), 6);
        let l = WitnessLayout::new(&src, &ws(&[0], &[4]));
        let parts = compatible_partitions(&gp, &l, &src);
        assert_eq!(parts.len(), 6);
        assert!(parts.iter().all(|p| p.traces(2).iter().all(|t| t.len() == 2)));
        let one = ws(&[0], &[3]);
        let l = WitnessLayout::new(&one, &ws(&[0], &[2]));
        let gp = GoodPair { map: vec![Some(0)] };
        assert_eq!(compatible_partitions(&gp, &l, &one).len(), 1);
    }

    #[test]
    fn generator_witnesses() {
        let p = sp(&[0, 0], &[2, 2], &[]);
        let d5 = crate::poly::discriminant::<Rational>(&[1, 2, 3, 4, 5], crate::poly::Family::X).unwrap();
        assert_eq!(build_h(&p, &ws(&[0], &[5]), None).unwrap().poly(), d5);
        let h = build_h(&p, &ws(&[0, 1], &[3, 1]), None).unwrap().poly();
        assert_eq!(h, q("(x1-x2)*(x1-x3)*(x2-x3)*((x1-x4)*(x2-x4)*(x3-x4))^3"));
        let h = build_h(&p, &ws(&[0, 1, 1], &[1, 1, 1]), None).unwrap().poly();
        assert_eq!(h, q("((x1-x2)*(x1-x3)*(x2-x3))^3"));
    }

    #[test]
    fn witness_with_u_factor() {
        // Circle against the diagonal point: Θ over ((∞),(3)) is 2t²=1, and y = 0 avoids it.
        let c = sp(&[0, 0], &[2, 2], &["t1^2 + t2^2 - 1"]);
        let target = sp(&[0], &[3], &["t1"]);
        let w = build_h(&c, target.shape(), Some(&[Rational::new(0, 1)])).unwrap();
        assert_eq!(certify(&w.h, &c, &target).unwrap(), (true, false));
        let on = [Rational::new(1, 1)];
        assert!(build_h(&c, &ws(&[0], &[2]), Some(&on)).is_err());
    }

    #[test]
    fn certify_examples() {
        let p = sp(&[0], &[2], &[]);
        let q2 = sp(&[0, 1], &[1, 1], &[]);
        let h = Factored { factors: vec![(q("x1 - x2"), 3)] };
        assert_eq!(certify(&h, &p, &q2).unwrap(), (true, false));
        let unit = Factored::default();
        assert_eq!(certify(&unit, &p, &q2).unwrap(), (false, false));
        let r = sp(&[0, 0], &[1, 1], &[]);
        let d3 = Factored { factors: vec![(q("(x1-x2)*(x1-x3)*(x2-x3)"), 1)] };
        assert!(certify(&d3, &r, &sp(&[0], &[3], &["t1"])).unwrap().0);
    }

    #[test]
    fn point_search() {
        let c = sp(&[0, 0], &[1, 1], &["t1^2 + t2^2 - 1"]);
        let pt = find_rational_point(&c, &Ideal::unit([])).unwrap();
        let val = &(&pt[0].0 * &pt[0].0) + &(&pt[1].0 * &pt[1].0);
        assert_eq!(val, num_rational::BigRational::from_integer(1.into()));
        assert_ne!(pt[0], pt[1]);
    }
}
