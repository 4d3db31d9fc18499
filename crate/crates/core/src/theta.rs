//! The Θ construction and the containment test between S-primes.
//!
//! `p ⊆ q` holds iff the configuration set Y of `q` lies inside Θ(Z), the
//! union over good pairs (E, φ) of the pullbacks of the projection of Z to
//! the parts in E along the diagonal map y ↦ (y_{φ(α)})_{α∈E}.

use std::collections::{BTreeMap, BTreeSet};

use crate::combinat::{good_pairs, GoodPair, WeightedShape};
use crate::error::Result;
use crate::groebner::{t_difference_product, Ideal};
use crate::poly::{QPoly, Var};
use crate::sprime::{t_vars, SPrimeData};

#[derive(Clone, Debug)]
pub struct ThetaResult {
    /// Ideal of Θ(Z) in the target variables (intersection of the components).
    pub ideal: Ideal<crate::poly::Rational>,
    pub components: Vec<(GoodPair, Ideal<crate::poly::Rational>)>,
}

impl ThetaResult {
    pub fn is_empty_set(&self) -> Result<bool> {
        self.ideal.is_unit()
    }
}

/// The eliminated ideal of Z for the subset `subset`, in the source variables `t_α`, α ∈ E.
pub fn projection(p: &SPrimeData, subset: &[usize]) -> Result<Ideal<crate::poly::Rational>> {
    let keep: BTreeSet<Var> = subset.iter().map(|&a| Var::t(a as u32 + 1)).collect();
    let drop: BTreeSet<Var> = t_vars(p.r()).into_iter().filter(|v| !keep.contains(v)).collect();
    let sat = p.saturated()?.with_ambient(t_vars(p.r()));
    sat.eliminate(&drop)
}

/// Θ^φ_E(Z) as an ideal in the target variables `t1..tK`.
pub fn theta_pair(p: &SPrimeData, target: &WeightedShape, gp: &GoodPair) -> Result<Ideal<crate::poly::Rational>> {
    let proj = projection(p, &gp.subset())?;
    let map: BTreeMap<Var, QPoly> = gp
        .map
        .iter()
        .enumerate()
        .filter_map(|(a, b)| b.map(|b| (Var::t(a as u32 + 1), QPoly::var(Var::t(b as u32 + 1)))))
        .collect();
    Ok(proj.map_gens(|g| g.substitute(&map), t_vars(target.r())))
}

pub fn theta(p: &SPrimeData, target: &WeightedShape) -> Result<ThetaResult> {
    let ambient = t_vars(target.r());
    let mut components = Vec::new();
    for gp in good_pairs(target, p.shape()) {
        let c = theta_pair(p, target, &gp)?;
        components.push((gp, c));
    }
    let mut ideal = Ideal::unit(ambient.clone());
    for (_, c) in &components {
        if c.is_unit()? {
            continue;
        }
        ideal = ideal.intersect(c)?;
        if ideal.is_zero() {
            break;
        }
    }
    Ok(ThetaResult { ideal: ideal.with_ambient(ambient), components })
}

#[derive(Clone, Debug)]
pub struct Containment {
    pub contains: bool,
    pub theta: ThetaResult,
    /// A generator of the Θ ideal not vanishing on Y (only when `contains` is false).
    pub separator: Option<QPoly>,
    /// Y was empty, so containment holds vacuously.
    pub vacuous: bool,
}

/// Decide `p ⊆ q`.
pub fn contains(p: &SPrimeData, q: &SPrimeData) -> Result<Containment> {
    let th = theta(p, q.shape())?;
    let d = t_difference_product(q.r() as u32);
    let sat_q = q.saturated()?;
    if sat_q.is_unit()? {
        log::warn!("Y is empty for {q}; containment holds vacuously");
        return Ok(Containment { contains: true, theta: th, separator: None, vacuous: true });
    }
    for (_, c) in &th.components {
        if q.z_ideal().variety_contained(c, &d)? {
            return Ok(Containment { contains: true, theta: th, separator: None, vacuous: false });
        }
    }
    let mut separator = None;
    for g in th.ideal.gens() {
        if !sat_q.radical_member(g)? {
            separator = Some(g.clone());
            break;
        }
    }
    Ok(Containment { contains: separator.is_none(), theta: th, separator, vacuous: false })
}

pub fn equal(p: &SPrimeData, q: &SPrimeData) -> Result<bool> {
    Ok(contains(p, q)?.contains && contains(q, p)?.contains)
}
