//! S-radical ideals as antichains of S-primes, and finite windows of the
//! Θ-closure of a point of the equivariant spectrum.

use std::collections::BTreeMap;

use crate::combinat::{PartSize, WeightedShape};
use crate::error::{Error, Result};
use crate::groebner::Ideal;
use crate::poly::Rational;
use crate::sprime::SPrimeData;
use crate::theta::{contains, theta};

/// A finite intersection of S-primes with no containments among them.
/// Over the rationals the only non-finitary prime is the zero ideal, which
/// is carried by a flag. No primes and no flag is the unit ideal.
#[derive(Clone, Debug)]
pub struct RadicalSIdeal {
    primes: Vec<SPrimeData>,
    includes_zero: bool,
}

impl RadicalSIdeal {
    pub fn zero() -> Self {
        RadicalSIdeal { primes: Vec::new(), includes_zero: true }
    }

    pub fn unit() -> Self {
        RadicalSIdeal { primes: Vec::new(), includes_zero: false }
    }

    pub fn primes(&self) -> &[SPrimeData] {
        &self.primes
    }

    pub fn includes_zero(&self) -> bool {
        self.includes_zero
    }

    /// Re-check the antichain invariant.
    pub fn is_antichain(&self) -> Result<bool> {
        if self.includes_zero && !self.primes.is_empty() {
            return Ok(false);
        }
        for (i, p) in self.primes.iter().enumerate() {
            for (j, q) in self.primes.iter().enumerate() {
                if i != j && contains(p, q)?.contains {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

/// Keep the minimal primes under ⊆; among equal primes the first survives.
pub fn make_radical(primes: Vec<SPrimeData>) -> Result<RadicalSIdeal> {
    let k = primes.len();
    let mut below = vec![vec![false; k]; k];
    for i in 0..k {
        for j in 0..k {
            if i != j {
                below[i][j] = contains(&primes[i], &primes[j])?.contains;
            }
        }
    }
    let keep: Vec<SPrimeData> = (0..k)
        .filter(|&i| !(0..k).any(|j| j != i && below[j][i] && (!below[i][j] || j < i)))
        .map(|i| primes[i].clone())
        .collect();
    Ok(RadicalSIdeal { primes: keep, includes_zero: false })
}

pub fn intersect_radical(a: &RadicalSIdeal, b: &RadicalSIdeal) -> Result<RadicalSIdeal> {
    if a.includes_zero || b.includes_zero {
        return Ok(RadicalSIdeal::zero());
    }
    make_radical(a.primes.iter().chain(&b.primes).cloned().collect())
}

/// a ⊆ b: every prime of b contains some prime of a.
pub fn contains_radical(a: &RadicalSIdeal, b: &RadicalSIdeal) -> Result<bool> {
    if a.includes_zero {
        return Ok(true);
    }
    if b.includes_zero {
        return Ok(false);
    }
    for q in &b.primes {
        let mut found = false;
        for p in &a.primes {
            if contains(p, q)?.contains {
                found = true;
                break;
            }
        }
        if !found {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The slices of the Θ-closure of `p` at each target shape.
pub fn theta_slice(p: &SPrimeData, targets: &[WeightedShape]) -> Result<BTreeMap<String, Ideal<Rational>>> {
    let mut out = BTreeMap::new();
    for t in targets {
        out.insert(t.to_string(), theta(p, t)?.ideal);
    }
    Ok(out)
}

/// μ(n): `template` with its infinite weight-1 part at `slot` replaced by a
/// finite part of size n.
#[derive(Clone, Debug)]
pub struct D3Family {
    pub template: WeightedShape,
    pub slot: usize,
}

impl D3Family {
    pub fn new(template: WeightedShape, slot: usize) -> Result<Self> {
        if slot >= template.r() || !template.parts()[slot].is_inf() || template.weights()[slot] != 1 {
            return Err(Error::InvalidInput(format!(
                "slot {slot} of {template} must be an infinite part of weight 1"
            )));
        }
        let fam = D3Family { template, slot };
        fam.at(1)?;
        Ok(fam)
    }

    pub fn at(&self, n: u32) -> Result<WeightedShape> {
        let mut parts = self.template.parts().to_vec();
        parts[self.slot] = PartSize::Finite(n);
        WeightedShape::new(parts, self.template.weights().to_vec())
    }
}

pub const D3_CAP: u32 = 20;

/// Least n with slice(μ(n)) = slice(μ(n+1)), searching n + 1 ≤ `cap`.
pub fn d3_stabilize(p: &SPrimeData, family: &D3Family, cap: u32) -> Result<u32> {
    let mut prev = theta(p, &family.at(1)?)?.ideal;
    for n in 1..cap {
        let next = theta(p, &family.at(n + 1)?)?.ideal;
        if prev.same_ideal(&next)? {
            return Ok(n);
        }
        prev = next;
    }
    Err(Error::CapExceeded(cap))
}
