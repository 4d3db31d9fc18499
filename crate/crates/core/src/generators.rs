//! Finite generating sets, up to S-radical: 𝒢 for P(λ,e) and ℋ for P(λ,e;Z).

use std::collections::BTreeMap;

use itertools::Itertools;

use crate::combinat::{good_pairs, psi0, shape_box, shape_leq, WeightedShape};
use crate::error::Result;
use crate::poly::{QPoly, Var};
use crate::sprime::{member_product, SPrimeData};
use crate::theta::theta;
use crate::witness::{assemble, build_h, g_factor, projection_basis, Factored, LiftRule, WitnessLayout};

/// A generator with its origin shape (μ,d).
#[derive(Clone, Debug)]
pub struct Generator {
    pub origin: WeightedShape,
    pub h: Factored,
}

impl Generator {
    pub fn poly(&self) -> QPoly {
        self.h.expand().sign_normalized()
    }
}

fn push_distinct(out: &mut Vec<Generator>, g: Generator) {
    if !out.iter().any(|o| o.h.canonical() == g.h.canonical()) {
        out.push(g);
    }
}

pub fn gens_g(shape: &WeightedShape) -> Result<Vec<Generator>> {
    let p = SPrimeData::from_canonical(shape.clone(), vec![], true)?;
    let mut out = Vec::new();
    for target in psi0(shape)? {
        let w = build_h(&p, &target, None)?;
        push_distinct(&mut out, Generator { origin: target, h: w.h });
    }
    Ok(out)
}

/// The shapes Φ: dominated by the shape of `p`, finite parts ≤ n, and Θ(Z) proper.
pub fn phi_shapes(p: &SPrimeData) -> Result<Vec<WeightedShape>> {
    let s = p.shape();
    let n = 1 + s.finite_sum();
    let mut out = Vec::new();
    for target in shape_box(s.r(), n, s.inf_weight_sum()) {
        if !shape_leq(&target, s) {
            continue;
        }
        if !theta(p, &target)?.ideal.is_zero() {
            out.push(target);
        }
    }
    Ok(out)
}

/// ℋ^{μ,d}: one element per assignment of a 𝒟_E-element to each good pair.
pub fn gens_h_for(p: &SPrimeData, target: &WeightedShape) -> Result<Vec<Generator>> {
    let layout = WitnessLayout::new(p.shape(), target);
    let pairs = good_pairs(target, p.shape());
    let mut bases: BTreeMap<Vec<usize>, Vec<QPoly>> = BTreeMap::new();
    for gp in &pairs {
        let e = gp.subset();
        if !bases.contains_key(&e) {
            let b = projection_basis(p, &e)?;
            bases.insert(e, b);
        }
    }
    // g for every (pair, u) is computed once and shared across assignments.
    let choices: Vec<Vec<Factored>> = pairs
        .iter()
        .map(|gp| {
            bases[&gp.subset()]
                .iter()
                .map(|u| g_factor(u, gp, &layout, p.shape(), LiftRule::AllRepresentatives))
                .collect()
        })
        .collect();
    let mut out = Vec::new();
    for pick in choices.into_iter().multi_cartesian_product() {
        let h = assemble(&layout, pick);
        push_distinct(&mut out, Generator { origin: target.clone(), h });
    }
    Ok(out)
}

/// All ℋ^{μ,d} over Φ, before redundancy removal.
pub fn gens_h_raw(p: &SPrimeData) -> Result<Vec<Generator>> {
    if p.z_ideal().gens().iter().all(QPoly::is_zero) {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    for target in phi_shapes(p)? {
        for g in gens_h_for(p, &target)? {
            push_distinct(&mut out, g);
        }
    }
    Ok(out)
}

/// Sign-normalized factors keyed by their printed form.
fn normalized(h: &Factored) -> BTreeMap<String, (QPoly, u32)> {
    let mut m: BTreeMap<String, (QPoly, u32)> = BTreeMap::new();
    for (f, k) in &h.factors {
        let f = f.sign_normalized();
        m.entry(f.to_string()).or_insert((f, 0)).1 += k;
    }
    m
}

fn x_indices(m: &BTreeMap<String, (QPoly, u32)>) -> Vec<u32> {
    m.values().flat_map(|(f, _)| f.vars()).map(|v| v.index).sorted().dedup().collect()
}

/// Whether σ(a) divides b factor-by-factor for some injective relabelling σ of
/// the x-variables. Sufficient for divisibility, so only sound drops happen.
fn relabel_divides(a: &Factored, b: &Factored) -> bool {
    let fa = normalized(a);
    let fb = normalized(b);
    let va = x_indices(&fa);
    let vb = x_indices(&fb);
    if va.len() > vb.len() {
        return false;
    }
    let total = |m: &BTreeMap<String, (QPoly, u32)>| -> u32 {
        m.values().map(|(f, k)| f.total_degree() * k).sum()
    };
    if total(&fa) > total(&fb) {
        return false;
    }
    vb.iter().copied().permutations(va.len()).any(|img| {
        let map: BTreeMap<u32, u32> = va.iter().copied().zip(img).collect();
        fa.values().all(|(f, k)| {
            let g = f.rename(|v| Var::x(map[&v.index])).sign_normalized();
            fb.get(&g.to_string()).is_some_and(|(_, kb)| kb >= k)
        })
    })
}

/// ℋ with elements dropped when a relabelled copy of another kept element
/// (or of an element of `base`) divides them; on mutual divisibility the
/// earlier element wins.
pub fn remove_redundant(base: &[Generator], candidates: Vec<Generator>) -> Vec<Generator> {
    let mut kept: Vec<Generator> = Vec::new();
    for g in candidates {
        if base.iter().chain(&kept).any(|k| relabel_divides(&k.h, &g.h)) {
            continue;
        }
        kept.retain(|k| !relabel_divides(&g.h, &k.h));
        kept.push(g);
    }
    kept
}

pub fn gens_h(p: &SPrimeData) -> Result<Vec<Generator>> {
    Ok(remove_redundant(&[], gens_h_raw(p)?))
}

/// 𝒢(shape) ∪ ℋ(p), with redundant elements of ℋ removed.
pub fn full_gens(p: &SPrimeData) -> Result<Vec<Generator>> {
    let g = gens_g(p.shape())?;
    let h = remove_redundant(&g, gens_h_raw(p)?);
    let mut out = g;
    for x in h {
        push_distinct(&mut out, x);
    }
    Ok(out)
}

#[derive(Clone, Debug)]
pub struct GensReport {
    pub entries: Vec<(Generator, bool)>,
}

impl GensReport {
    pub fn all_members(&self) -> bool {
        self.entries.iter().all(|(_, ok)| *ok)
    }
}

pub fn verify_gens(p: &SPrimeData) -> Result<GensReport> {
    let mut entries = Vec::new();
    for g in full_gens(p)? {
        let ok = member_product(&g.h.factors, p)?;
        if !ok {
            log::error!("constructed generator {} is not a member of {p}", g.h.to_text());
        }
        entries.push((g, ok));
    }
    Ok(GensReport { entries })
}
