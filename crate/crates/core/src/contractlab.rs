//! Brute-force contractions of ⟨ε_i^{q_i}⟩ along ξ_i ↦ t + ε_i, checked
//! against the predicted pairwise-difference generators.

use std::collections::BTreeSet;

use itertools::Itertools;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::groebner::{Ideal, MonomialOrder};
use crate::poly::{diff, Field, Fp, Poly, QPoly, Rational, Var};

/// Characteristics accepted by the string-level entry points.
pub const SUPPORTED_CHARS: [u64; 5] = [0, 2, 3, 5, 7];

fn check(n: u32, q: &[u32]) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidInput("n must be at least 1".into()));
    }
    if q.len() != n as usize {
        return Err(Error::InvalidInput(format!("q has {} entries, expected {n}", q.len())));
    }
    if q.iter().any(|&x| x == 0) {
        return Err(Error::InvalidInput("q entries must be positive".into()));
    }
    Ok(())
}

fn x_vars(n: u32) -> Vec<Var> {
    (1..=n).map(Var::x).collect()
}

/// The contraction to `F[ξ₁..ξₙ]` of ⟨ε_i^{q_i}⟩ under ξ_i ↦ t + ε_i.
pub fn contract_ideal<F: Field>(n: u32, q: &[u32]) -> Result<Ideal<F>> {
    check(n, q)?;
    let t = Var::t(1);
    let mut gens = Vec::new();
    for i in 1..=n {
        let e = Poly::<F>::var(Var::e(i));
        gens.push(&(&Poly::var(Var::x(i)) - &Poly::var(t)) - &e);
        gens.push(e.pow(q[i as usize - 1]));
    }
    let mut ambient: Vec<Var> = x_vars(n);
    ambient.push(t);
    ambient.extend((1..=n).map(Var::e));
    let drop: BTreeSet<Var> = std::iter::once(t).chain((1..=n).map(Var::e)).collect();
    let c = Ideal::new(gens, ambient).eliminate(&drop)?;
    Ok(Ideal::new(c.gens().to_vec(), x_vars(n)))
}

/// ⟨(ξᵢ−ξⱼ)^{qᵢ+qⱼ−1}⟩ in characteristic 0; ⟨(ξᵢ−ξⱼ)^q⟩ for uniform q in characteristic p.
pub fn predicted_ideal<F: Field>(n: u32, q: &[u32]) -> Result<Ideal<F>> {
    check(n, q)?;
    let p = F::characteristic();
    if p != 0 && !(q.iter().all_equal() && is_power_of(q[0], p)) {
        return Err(Error::InvalidInput(format!(
            "characteristic {p} needs a uniform q that is a power of {p}"
        )));
    }
    let gens = if n == 1 {
        vec![]
    } else {
        (1..=n)
            .tuple_combinations()
            .map(|(i, j)| {
                let (a, b) = (q[i as usize - 1], q[j as usize - 1]);
                diff::<F>(i, j).pow(if p == 0 { a + b - 1 } else { a })
            })
            .collect()
    };
    Ok(Ideal::new(gens, x_vars(n)))
}

fn is_power_of(q: u32, p: u64) -> bool {
    let mut v = q as u64;
    while v.is_multiple_of(p) {
        v /= p;
    }
    v == 1
}

#[derive(Clone, Debug, Serialize)]
pub struct ContractReport {
    pub n: u32,
    pub q: Vec<u32>,
    pub characteristic: u64,
    pub verified: bool,
    /// predicted ⊆ contraction
    pub predicted_in_contraction: bool,
    /// contraction ⊆ predicted
    pub contraction_in_predicted: bool,
    /// Reduced grevlex basis of the contraction.
    pub basis: Vec<String>,
    pub predicted: Vec<String>,
}

pub fn verify_contract_in<F: Field>(n: u32, q: &[u32]) -> Result<ContractReport> {
    let predicted = predicted_ideal::<F>(n, q)?;
    let c = contract_ideal::<F>(n, q)?;
    let fwd = c.contains_ideal(&predicted)?;
    let back = predicted.contains_ideal(&c)?;
    let basis = c.groebner_basis(&MonomialOrder::grevlex(x_vars(n)))?;
    Ok(ContractReport {
        n,
        q: q.to_vec(),
        characteristic: F::characteristic(),
        verified: fwd && back,
        predicted_in_contraction: fwd,
        contraction_in_predicted: back,
        basis: basis.iter().map(|b| b.to_string()).collect(),
        predicted: predicted.gens().iter().map(|g| g.to_string()).collect(),
    })
}

/// Dispatch on the characteristic (one of [`SUPPORTED_CHARS`]).
pub fn verify_contract(n: u32, q: &[u32], characteristic: u64) -> Result<ContractReport> {
    match characteristic {
        0 => verify_contract_in::<Rational>(n, q),
        2 => verify_contract_in::<Fp<2>>(n, q),
        3 => verify_contract_in::<Fp<3>>(n, q),
        5 => verify_contract_in::<Fp<5>>(n, q),
        7 => verify_contract_in::<Fp<7>>(n, q),
        c => Err(Error::InvalidInput(format!(
            "characteristic {c} unsupported (choose from {SUPPORTED_CHARS:?})"
        ))),
    }
}

/// Characteristic-0 membership test in the contraction: every mixed partial
/// ∂^m f with m_i < q_i vanishes on the diagonal ξ₁ = … = ξₙ.
pub fn derivative_criterion(f: &QPoly, q: &[u32]) -> bool {
    let n = q.len() as u32;
    let diag: std::collections::BTreeMap<Var, QPoly> =
        (2..=n).map(|i| (Var::x(i), QPoly::var(Var::x(1)))).collect();
    q.iter().map(|&qi| 0..qi).multi_cartesian_product().all(|m| {
        let mut g = f.clone();
        for (i, &k) in m.iter().enumerate() {
            for _ in 0..k {
                g = g.derivative(Var::x(i as u32 + 1));
            }
        }
        g.substitute(&diag).is_zero()
    })
}
