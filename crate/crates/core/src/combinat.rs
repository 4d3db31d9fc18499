//! ∞-compositions with reduced weightings, the domination order `≼`
//! between them, good pairs, the minimal-obstruction antichain Ψ₀ and
//! refinement pairs.

use std::cmp::Ordering;
use std::fmt;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PartSize {
    Finite(u32),
    Inf,
}

impl PartSize {
    pub fn is_inf(self) -> bool {
        self == PartSize::Inf
    }

    pub fn finite(self) -> Option<u32> {
        match self {
            PartSize::Finite(n) => Some(n),
            PartSize::Inf => None,
        }
    }

    fn add(self, other: PartSize) -> PartSize {
        match (self, other) {
            (PartSize::Finite(a), PartSize::Finite(b)) => PartSize::Finite(a + b),
            _ => PartSize::Inf,
        }
    }
}

impl Ord for PartSize {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (PartSize::Finite(a), PartSize::Finite(b)) => a.cmp(b),
            (PartSize::Finite(_), PartSize::Inf) => Ordering::Less,
            (PartSize::Inf, PartSize::Finite(_)) => Ordering::Greater,
            (PartSize::Inf, PartSize::Inf) => Ordering::Equal,
        }
    }
}

impl PartialOrd for PartSize {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for PartSize {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PartSize::Finite(n) => write!(f, "{n}"),
            PartSize::Inf => write!(f, "inf"),
        }
    }
}

impl Serialize for PartSize {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            PartSize::Finite(n) => s.serialize_u32(*n),
            PartSize::Inf => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for PartSize {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            N(u32),
            S(String),
        }
        match Raw::deserialize(d)? {
            Raw::N(n) => Ok(PartSize::Finite(n)),
            Raw::S(s) => s.parse().map_err(serde::de::Error::custom),
        }
    }
}

impl std::str::FromStr for PartSize {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("inf") || s == "∞" {
            return Ok(PartSize::Inf);
        }
        s.parse::<u32>()
            .map(PartSize::Finite)
            .map_err(|_| Error::InvalidShape(format!("bad part size `{s}`")))
    }
}

/// An ∞-composition λ with a reduced weighting e. Part labels are kept as
/// given; use [`canonicalize`] for the sorted representative.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawShape", into = "RawShape")]
pub struct WeightedShape {
    parts: Vec<PartSize>,
    weights: Vec<u32>,
}

#[derive(Serialize, Deserialize)]
struct RawShape {
    lambda: Vec<PartSize>,
    e: Vec<u32>,
}

impl TryFrom<RawShape> for WeightedShape {
    type Error = Error;
    fn try_from(r: RawShape) -> Result<Self> {
        WeightedShape::new(r.lambda, r.e)
    }
}

impl From<WeightedShape> for RawShape {
    fn from(s: WeightedShape) -> Self {
        RawShape { lambda: s.parts, e: s.weights }
    }
}

impl WeightedShape {
    /// Validates and reduces the weighting, keeping the given part order.
    pub fn new(parts: Vec<PartSize>, weights: Vec<u32>) -> Result<Self> {
        if parts.len() != weights.len() {
            return Err(Error::InvalidShape(format!(
                "{} parts but {} weights",
                parts.len(),
                weights.len()
            )));
        }
        if !parts.iter().any(|p| p.is_inf()) {
            return Err(Error::InvalidShape("no infinite part".into()));
        }
        if parts.iter().any(|&p| p == PartSize::Finite(0)) {
            return Err(Error::InvalidShape("part sizes must be positive".into()));
        }
        if weights.iter().any(|&w| w == 0) {
            return Err(Error::InvalidShape("weights must be positive".into()));
        }
        let weights = parts
            .iter()
            .zip(&weights)
            .map(|(p, &w)| if p.is_inf() { w } else { 1 })
            .collect();
        Ok(WeightedShape { parts, weights })
    }

    /// Shorthand used throughout the tests: `0` stands for an infinite part.
    pub fn from_spec(parts: &[u32], weights: &[u32]) -> Result<Self> {
        let parts = parts
            .iter()
            .map(|&p| if p == 0 { PartSize::Inf } else { PartSize::Finite(p) })
            .collect();
        WeightedShape::new(parts, weights.to_vec())
    }

    pub fn parts(&self) -> &[PartSize] {
        &self.parts
    }

    pub fn weights(&self) -> &[u32] {
        &self.weights
    }

    pub fn r(&self) -> usize {
        self.parts.len()
    }

    pub fn is_canonical(&self) -> bool {
        self.sort_key().windows(2).all(|w| w[0] >= w[1])
    }

    fn sort_key(&self) -> Vec<(PartSize, u32)> {
        self.parts.iter().copied().zip(self.weights.iter().copied()).collect()
    }

    /// Σ of the finite parts.
    pub fn finite_sum(&self) -> u32 {
        self.parts.iter().filter_map(|p| p.finite()).sum()
    }

    /// Σ of the weights on infinite parts.
    pub fn inf_weight_sum(&self) -> u32 {
        self.parts.iter().zip(&self.weights).filter(|(p, _)| p.is_inf()).map(|(_, &w)| w).sum()
    }

    pub fn max_weight(&self) -> u32 {
        self.weights.iter().copied().max().unwrap_or(1)
    }

    /// Same composition with all weights 1.
    pub fn with_unit_weights(&self) -> Self {
        WeightedShape { parts: self.parts.clone(), weights: vec![1; self.parts.len()] }
    }

    pub fn permuted(&self, perm: &[usize]) -> Self {
        WeightedShape {
            parts: perm.iter().map(|&i| self.parts[i]).collect(),
            weights: perm.iter().map(|&i| self.weights[i]).collect(),
        }
    }
}

impl fmt::Display for WeightedShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(({}),({}))", self.parts.iter().join(","), self.weights.iter().join(","))
    }
}

impl Ord for WeightedShape {
    /// Fewer parts first, then lexicographic on the (part, weight) list.
    fn cmp(&self, other: &Self) -> Ordering {
        self.r().cmp(&other.r()).then_with(|| self.sort_key().cmp(&other.sort_key()))
    }
}

impl PartialOrd for WeightedShape {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Reduce the weighting and sort parts descending by (part, weight).
/// Returns the canonical shape and `perm` with `canonical[k] = input[perm[k]]`.
pub fn canonicalize(parts: &[PartSize], weights: &[u32]) -> Result<(WeightedShape, Vec<usize>)> {
    let s = WeightedShape::new(parts.to_vec(), weights.to_vec())?;
    let key = s.sort_key();
    let mut perm: Vec<usize> = (0..s.r()).collect();
    perm.sort_by(|&a, &b| key[b].cmp(&key[a]).then(a.cmp(&b)));
    Ok((s.permuted(&perm), perm))
}

/// A good pair (E, φ): `map[α] = Some(β)` iff α ∈ E with φ(α) = β (0-based).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GoodPair {
    pub map: Vec<Option<usize>>,
}

impl GoodPair {
    /// The subset E, ascending.
    pub fn subset(&self) -> Vec<usize> {
        (0..self.map.len()).filter(|&a| self.map[a].is_some()).collect()
    }

    /// φ restricted to E, in the order of [`GoodPair::subset`].
    pub fn phi(&self) -> Vec<usize> {
        self.map.iter().filter_map(|&b| b).collect()
    }

    /// E_β.
    pub fn fiber(&self, beta: usize) -> Vec<usize> {
        (0..self.map.len()).filter(|&a| self.map[a] == Some(beta)).collect()
    }

    fn sort_key(&self) -> (Vec<usize>, Vec<usize>) {
        (self.subset(), self.phi())
    }
}

impl fmt::Display for GoodPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pairs = self
            .map
            .iter()
            .enumerate()
            .filter_map(|(a, b)| b.map(|b| format!("{}->{}", a + 1, b + 1)))
            .join(",");
        write!(f, "{{{pairs}}}")
    }
}

fn is_good(target: &WeightedShape, source: &WeightedShape, map: &[Option<usize>]) -> bool {
    (0..target.r()).all(|b| {
        let mut total = PartSize::Finite(0);
        let mut inf_weight = 0;
        for (a, m) in map.iter().enumerate() {
            if *m == Some(b) {
                total = total.add(source.parts[a]);
                if source.parts[a].is_inf() {
                    inf_weight += source.weights[a];
                }
            }
        }
        let g1 = target.parts[b] <= total && total != PartSize::Finite(0);
        let g2 = !target.parts[b].is_inf() || target.weights[b] <= inf_weight;
        g1 && g2
    })
}

fn all_maps(r: usize, k: usize) -> impl Iterator<Item = Vec<Option<usize>>> {
    let choices: Vec<Option<usize>> = std::iter::once(None).chain((0..k).map(Some)).collect();
    // Shapes always have at least one part, so `r ≥ 1` here.
    (0..r).map(move |_| choices.clone()).multi_cartesian_product()
}

/// All good pairs between `target` (μ,d) and `source` (λ,e), ordered by (E, φ).
pub fn good_pairs(target: &WeightedShape, source: &WeightedShape) -> Vec<GoodPair> {
    let mut out: Vec<GoodPair> = all_maps(source.r(), target.r())
        .filter(|m| is_good(target, source, m))
        .map(|map| GoodPair { map })
        .collect();
    out.sort_by_key(|g| g.sort_key());
    out
}

/// `a ≼ b`: some good pair exists between `a` and `b`.
pub fn shape_leq(a: &WeightedShape, b: &WeightedShape) -> bool {
    all_maps(b.r(), a.r()).any(|m| is_good(a, b, &m))
}

/// Every canonical shape with at most `max_parts` parts, finite parts ≤ `cap`
/// and infinite weights ≤ `wcap`.
pub fn shape_box(max_parts: usize, cap: u32, wcap: u32) -> Vec<WeightedShape> {
    let mut kinds: Vec<(PartSize, u32)> = (1..=wcap).map(|w| (PartSize::Inf, w)).collect();
    kinds.extend((1..=cap).map(|c| (PartSize::Finite(c), 1)));
    kinds.sort_by(|a, b| b.cmp(a));
    let mut out = Vec::new();
    for n in 1..=max_parts {
        for combo in kinds.iter().combinations_with_replacement(n) {
            if !combo[0].0.is_inf() {
                continue;
            }
            let parts = combo.iter().map(|k| k.0).collect();
            let weights = combo.iter().map(|k| k.1).collect();
            out.push(WeightedShape { parts, weights });
        }
    }
    out
}

/// Immediate predecessors: delete a part, decrement a finite part or a
/// weight, or turn an infinite weight-1 part into a finite part of size `cap`.
pub fn predecessors(s: &WeightedShape, cap: u32) -> Vec<WeightedShape> {
    let mut out = Vec::new();
    let mut push = |parts: Vec<PartSize>, weights: Vec<u32>| {
        if let Ok((c, _)) = canonicalize(&parts, &weights) {
            if !out.contains(&c) {
                out.push(c);
            }
        }
    };
    for a in 0..s.r() {
        let mut p = s.parts.clone();
        let mut w = s.weights.clone();
        p.remove(a);
        w.remove(a);
        push(p, w);
        match s.parts[a] {
            PartSize::Finite(n) if n > 1 => {
                let mut p = s.parts.clone();
                p[a] = PartSize::Finite(n - 1);
                push(p, s.weights.clone());
            }
            PartSize::Inf if s.weights[a] > 1 => {
                let mut w = s.weights.clone();
                w[a] -= 1;
                push(s.parts.clone(), w);
            }
            PartSize::Inf => {
                let mut p = s.parts.clone();
                p[a] = PartSize::Finite(cap);
                push(p, s.weights.clone());
            }
            _ => {}
        }
    }
    out
}

/// The minimal shapes not dominated by `base`.
///
/// Search box: at most r+1 parts, finite parts ≤ 1 + Σ finite λ, weights
/// ≤ 1 + Σ infinite e. Minimality is decided by pairwise comparison inside
/// the box; the predecessor certificate and a probe one step outside the
/// box are re-checked and reported as [`Error::BoundInsufficient`].
pub fn psi0(base: &WeightedShape) -> Result<Vec<WeightedShape>> {
    let max_parts = base.r() + 1;
    let cap = 1 + base.finite_sum();
    let wcap = 1 + base.inf_weight_sum();
    let psi: Vec<WeightedShape> = shape_box(max_parts, cap, wcap)
        .into_iter()
        .filter(|s| !shape_leq(s, base))
        .collect();
    let mut minimal: Vec<WeightedShape> = psi
        .iter()
        .filter(|x| !psi.iter().any(|y| y != *x && shape_leq(y, x) && !shape_leq(x, y)))
        .cloned()
        .collect();
    minimal.sort();
    minimal.dedup();

    for m in &minimal {
        for p in predecessors(m, cap) {
            if !shape_leq(&p, base) {
                return Err(Error::BoundInsufficient(format!(
                    "predecessor {p} of {m} is not dominated by {base}"
                )));
            }
        }
    }
    for probe in outer_boundary(&psi, max_parts, cap, wcap) {
        if !shape_leq(&probe, base) && !minimal.iter().any(|m| shape_leq(m, &probe)) {
            return Err(Error::BoundInsufficient(format!(
                "{probe} lies outside the search box and above no minimal element"
            )));
        }
    }
    Ok(minimal)
}

/// Shapes one step beyond the box: an extra part, a finite part above `cap`,
/// or a weight above `wcap`, grown from box elements at the boundary.
fn outer_boundary(psi: &[WeightedShape], max_parts: usize, cap: u32, wcap: u32) -> Vec<WeightedShape> {
    let mut out = Vec::new();
    let mut push = |parts: Vec<PartSize>, weights: Vec<u32>| {
        if let Ok((c, _)) = canonicalize(&parts, &weights) {
            out.push(c);
        }
    };
    for s in psi {
        if s.r() == max_parts {
            for extra in [PartSize::Inf, PartSize::Finite(1)] {
                let mut p = s.parts.clone();
                let mut w = s.weights.clone();
                p.push(extra);
                w.push(1);
                push(p, w);
            }
        }
        for a in 0..s.r() {
            if s.parts[a] == PartSize::Finite(cap) {
                let mut p = s.parts.clone();
                p[a] = PartSize::Finite(cap + 1);
                push(p, s.weights.clone());
            }
            if s.parts[a].is_inf() && s.weights[a] == wcap {
                let mut w = s.weights.clone();
                w[a] += 1;
                push(s.parts.clone(), w);
            }
        }
    }
    out.sort();
    out.dedup();
    out
}

/// One element of the refinement set: a total map φ: I → K and the
/// composition κ on I.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct RefinementPair {
    pub phi: Vec<usize>,
    pub kappa: Vec<PartSize>,
}

/// All (φ, κ) with fiber sums of κ equal to μ, 1 ≤ κ_α ≤ λ_α, and κ_α = λ_α
/// whenever φ(α) is an infinite part of μ.
pub fn refinement_pairs(source: &WeightedShape, target: &WeightedShape) -> Vec<RefinementPair> {
    let (r, k) = (source.r(), target.r());
    let mut out = Vec::new();
    for phi in (0..r).map(|_| 0..k).multi_cartesian_product() {
        let mut options: Vec<Vec<PartSize>> = Vec::with_capacity(r);
        for a in 0..r {
            let lam = source.parts[a];
            options.push(match target.parts[phi[a]] {
                PartSize::Inf => vec![lam],
                PartSize::Finite(m) => {
                    let top = lam.finite().map_or(m, |l| l.min(m));
                    (1..=top).map(PartSize::Finite).collect()
                }
            });
        }
        for kappa in options.into_iter().multi_cartesian_product() {
            let ok = (0..k).all(|b| {
                let sum = (0..r)
                    .filter(|&a| phi[a] == b)
                    .fold(PartSize::Finite(0), |s, a| s.add(kappa[a]));
                sum == target.parts[b]
            });
            if ok {
                out.push(RefinementPair { phi: phi.clone(), kappa });
            }
        }
    }
    out.sort();
    out
}
