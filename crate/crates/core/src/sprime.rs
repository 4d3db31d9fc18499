//! S-prime data (λ, e; Z) and membership of explicit polynomials.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::OnceLock;

use itertools::Itertools;
use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::combinat::{canonicalize, PartSize, WeightedShape};
use crate::error::{Error, Result};
use crate::groebner::{normal_form, t_difference_product, Ideal, MonomialOrder};
use crate::poly::{Family, Field, Monomial, QPoly, Rational, Var};

/// The data of P(λ, e; Z) with Z = V(z_ideal) ∩ U^r, U^r = {t_α ≠ t_β}.
#[derive(Clone)]
pub struct SPrimeData {
    shape: WeightedShape,
    z_ideal: Ideal<Rational>,
    pub assume_irreducible: bool,
    saturated: OnceLock<Ideal<Rational>>,
}

impl fmt::Debug for SPrimeData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "P({}; {:?})", self.shape, self.z_ideal)
    }
}

impl fmt::Display for SPrimeData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

pub fn t_vars(r: usize) -> Vec<Var> {
    (1..=r as u32).map(Var::t).collect()
}

/// Build S-prime data, canonicalizing the shape and relabeling `t` accordingly.
pub fn make_sprime(
    parts: &[PartSize],
    weights: &[u32],
    gens: Vec<QPoly>,
    assume_irreducible: bool,
) -> Result<SPrimeData> {
    let r = parts.len() as u32;
    for g in &gens {
        if let Some(v) = g.vars().into_iter().find(|v| v.family != Family::T || v.index > r) {
            return Err(Error::InvalidInput(format!(
                "Z generator `{g}` uses {v}; only t1..t{r} are allowed"
            )));
        }
    }
    let (shape, perm) = canonicalize(parts, weights)?;
    let mut new_index = vec![0u32; perm.len()];
    for (k, &old) in perm.iter().enumerate() {
        new_index[old] = k as u32 + 1;
    }
    let gens = gens
        .iter()
        .map(|g| g.rename(|v| Var::t(new_index[v.index as usize - 1])))
        .collect();
    let p = SPrimeData::from_canonical(shape, gens, assume_irreducible)?;
    if !assume_irreducible {
        log::warn!("Z of {p} is not asserted irreducible; P(λ,e;Z) may fail to be S-prime");
    }
    if p.locus_is_empty()? {
        log::warn!("Z ∩ U is empty for {p}");
    }
    Ok(p)
}

impl SPrimeData {
    /// Data whose shape is already canonical; no warnings.
    pub fn from_canonical(shape: WeightedShape, gens: Vec<QPoly>, assume_irreducible: bool) -> Result<Self> {
        if !shape.is_canonical() {
            return Err(Error::InvalidShape(format!("{shape} is not in canonical order")));
        }
        let r = shape.r();
        Ok(SPrimeData {
            z_ideal: Ideal::new(gens, t_vars(r)),
            shape,
            assume_irreducible,
            saturated: OnceLock::new(),
        })
    }

    /// Shorthand: canonical `shape` with `Z` given as polynomial strings.
    pub fn parse(shape: WeightedShape, z: &[&str]) -> Result<Self> {
        let gens = z.iter().map(|s| QPoly::parse(s)).collect::<Result<Vec<_>>>()?;
        make_sprime(shape.parts(), shape.weights(), gens, true)
    }

    pub fn shape(&self) -> &WeightedShape {
        &self.shape
    }

    pub fn z_ideal(&self) -> &Ideal<Rational> {
        &self.z_ideal
    }

    pub fn r(&self) -> usize {
        self.shape.r()
    }

    pub fn difference_product(&self) -> QPoly {
        t_difference_product(self.r() as u32)
    }

    /// `z_ideal : D^∞`, the ideal of the closure of Z.
    pub fn saturated(&self) -> Result<&Ideal<Rational>> {
        if let Some(s) = self.saturated.get() {
            return Ok(s);
        }
        let s = self.z_ideal.saturate(&self.difference_product())?;
        Ok(self.saturated.get_or_init(|| s))
    }

    pub fn locus_is_empty(&self) -> Result<bool> {
        self.saturated()?.is_unit()
    }

    pub fn with_shape(&self, shape: WeightedShape) -> Result<Self> {
        SPrimeData::from_canonical(shape, self.z_ideal.gens().to_vec(), self.assume_irreducible)
    }
}

/// P(λ; Z): same composition and Z, all weights 1.
pub fn radical_of(p: &SPrimeData) -> SPrimeData {
    p.with_shape(p.shape.with_unit_weights()).expect("unit weights keep canonical order")
}

/// All ρ: [m] → parts with fibers over finite parts bounded by their size.
pub fn assignments(shape: &WeightedShape, m: usize) -> Vec<Vec<usize>> {
    let r = shape.r();
    let fits = |rho: &Vec<usize>| {
        (0..r).all(|a| match shape.parts()[a] {
            PartSize::Finite(n) => rho.iter().filter(|&&b| b == a).count() <= n as usize,
            PartSize::Inf => true,
        })
    };
    if m == 0 {
        return vec![Vec::new()];
    }
    (0..m).map(|_| 0..r).multi_cartesian_product().filter(fits).collect()
}

/// ⟨z_ideal, e_i^{e(ρ(i))}⟩ in `t1..tr, e1..em`.
pub fn q_ideal_truncated(p: &SPrimeData, rho: &[usize]) -> Ideal<Rational> {
    let mut gens = p.z_ideal.gens().to_vec();
    for (i, &a) in rho.iter().enumerate() {
        let w = p.shape.weights()[a];
        gens.push(QPoly::term(Monomial::var(Var::e(i as u32 + 1), w), Rational::one()));
    }
    let ambient = t_vars(p.r()).into_iter().chain((1..=rho.len() as u32).map(Var::e));
    Ideal::new(gens, ambient)
}

fn binomial(n: u32, k: u32) -> BigInt {
    let mut acc = BigInt::from(1);
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// Substitute x_i ↦ t_{ρ(i)} + e_i, drop e_i^k with k ≥ w(ρ(i)), and group by
/// the surviving e-monomial.
pub fn truncated_coefficients<F: Field>(
    f: &crate::poly::Poly<F>,
    rho: &[usize],
    weights: &[u32],
) -> BTreeMap<Monomial, crate::poly::Poly<F>> {
    let mut out: BTreeMap<Monomial, crate::poly::Poly<F>> = BTreeMap::new();
    for (m, c) in f.terms() {
        // Expand ∏_i (t_{ρ(i)} + e_i)^{a_i}, truncated, as a list of terms.
        let mut acc: Vec<(Monomial, F)> = vec![(Monomial::one(), c.clone())];
        let mut rest = Vec::new();
        for &(v, a) in m.pairs() {
            if v.family != Family::X {
                rest.push((v, a));
                continue;
            }
            let i = v.index as usize - 1;
            let part = rho[i];
            let w = weights[part];
            let t = Var::t(part as u32 + 1);
            let mut next = Vec::with_capacity(acc.len() * w as usize);
            for k in 0..w.min(a + 1) {
                let b = binomial(a, k);
                let bf = F::from_ratio(&b, &BigInt::from(1)).expect("integer");
                if bf.is_zero() {
                    continue;
                }
                let mono = Monomial::from_pairs([(t, a - k), (Var::e(v.index), k)]);
                for (mm, cc) in &acc {
                    next.push((mm.mul(&mono), cc.mul(&bf)));
                }
            }
            acc = next;
        }
        let rest = Monomial::from_pairs(rest);
        for (mm, cc) in acc {
            let (emono, tmono) = mm.split(|v| v.family == Family::E);
            out.entry(emono).or_default().add_term(tmono.mul(&rest), cc);
        }
    }
    out.retain(|_, p| !p.is_zero());
    out
}

fn window(f: &QPoly) -> Result<usize> {
    if let Some(v) = f.vars().into_iter().find(|v| v.family != Family::X) {
        return Err(Error::InvalidInput(format!("membership expects x-variables only, found {v}")));
    }
    Ok(f.max_index(Family::X) as usize)
}

/// Whether `f ∈ P(λ, e; Z)`.
pub fn member(f: &QPoly, p: &SPrimeData) -> Result<bool> {
    member_product(&[(f.clone(), 1)], p)
}

/// Truncated ε-expansion: e-monomial ↦ t-coefficient.
type Series = BTreeMap<Monomial, QPoly>;

struct CoeffRing<'a> {
    basis: Option<(std::sync::Arc<Vec<QPoly>>, MonomialOrder)>,
    weights: &'a [u32],
    rho: &'a [usize],
}

impl CoeffRing<'_> {
    fn reduce(&self, c: QPoly) -> Result<QPoly> {
        match &self.basis {
            Some((b, ord)) => normal_form(&c, b, ord),
            None => Ok(c),
        }
    }

    fn fits(&self, m: &Monomial) -> bool {
        m.pairs().iter().all(|&(v, k)| k < self.weights[self.rho[v.index as usize - 1]])
    }

    fn mul(&self, a: &Series, b: &Series) -> Result<Series> {
        let mut out = Series::new();
        for (ea, ca) in a {
            for (eb, cb) in b {
                let e = ea.mul(eb);
                if !self.fits(&e) {
                    continue;
                }
                let slot = out.entry(e).or_default();
                *slot = &*slot + &(ca * cb);
            }
        }
        let mut reduced = Series::new();
        for (e, c) in out {
            let c = self.reduce(c)?;
            if !c.is_zero() {
                reduced.insert(e, c);
            }
        }
        Ok(reduced)
    }

    fn pow(&self, a: &Series, mut k: u32) -> Result<Series> {
        let mut acc: Series = [(Monomial::one(), QPoly::one())].into();
        let mut base = a.clone();
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(&acc, &base)?;
            }
            k >>= 1;
            if k > 0 {
                base = self.mul(&base, &base)?;
            }
        }
        Ok(acc)
    }
}

/// Whether `∏ f_k^{a_k} ∈ P(λ, e; Z)`, without expanding the product.
///
/// Each factor is expanded under x_i ↦ t_{ρ(i)} + e_i with the e-truncation
/// applied; t-coefficients are reduced modulo the basis of the saturated Z
/// ideal as the product is formed (radical membership is invariant under it).
pub fn member_product(factors: &[(QPoly, u32)], p: &SPrimeData) -> Result<bool> {
    let mut m = 0;
    for (f, _) in factors {
        m = m.max(window(f)?);
    }
    let sat = p.saturated()?;
    if sat.is_unit()? {
        return Ok(true);
    }
    let basis = if sat.is_zero() {
        None
    } else {
        let ord = sat.default_order();
        Some((sat.groebner_basis(&ord)?, ord))
    };
    for rho in assignments(&p.shape, m) {
        let ring = CoeffRing { basis: basis.clone(), weights: p.shape.weights(), rho: &rho };
        let mut acc: Series = [(Monomial::one(), QPoly::one())].into();
        for (f, k) in factors {
            let mut s = Series::new();
            for (e, c) in truncated_coefficients(f, &rho, p.shape.weights()) {
                let c = ring.reduce(c)?;
                if !c.is_zero() {
                    s.insert(e, c);
                }
            }
            acc = ring.mul(&acc, &ring.pow(&s, *k)?)?;
            if acc.is_empty() {
                break;
            }
        }
        for c in acc.values() {
            if sat.is_zero() || !sat.radical_member(c)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Characteristic-zero alternative: every mixed partial ∂^k f with k_i below
/// the weight of ρ(i), evaluated at x_i = t_{ρ(i)}, vanishes on Z.
pub fn member_via_derivatives(f: &QPoly, p: &SPrimeData) -> Result<bool> {
    let m = window(f)?;
    let sat = p.saturated()?;
    for rho in assignments(&p.shape, m) {
        let bounds: Vec<u32> = rho.iter().map(|&a| p.shape.weights()[a]).collect();
        let at: BTreeMap<Var, QPoly> =
            (0..m).map(|i| (Var::x(i as u32 + 1), QPoly::var(Var::t(rho[i] as u32 + 1)))).collect();
        for ks in bounds.iter().map(|&b| 0..b).multi_cartesian_product() {
            let mut g = f.clone();
            for (i, &k) in ks.iter().enumerate() {
                for _ in 0..k {
                    g = g.derivative(Var::x(i as u32 + 1));
                }
            }
            let g = g.substitute(&at);
            if g.is_zero() {
                continue;
            }
            if sat.is_zero() || !sat.radical_member(&g)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[derive(Serialize, Deserialize)]
struct RawSPrime {
    lambda: Vec<PartSize>,
    e: Vec<u32>,
    #[serde(rename = "Z", default)]
    z: Vec<String>,
}

impl SPrimeData {
    pub fn from_json(text: &str) -> Result<Self> {
        let raw: RawSPrime =
            serde_json::from_str(text).map_err(|e| Error::InvalidInput(format!("bad S-prime JSON: {e}")))?;
        let gens = raw.z.iter().map(|s| QPoly::parse(s)).collect::<Result<Vec<_>>>()?;
        make_sprime(&raw.lambda, &raw.e, gens, true)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let raw = RawSPrime {
            lambda: self.shape.parts().to_vec(),
            e: self.shape.weights().to_vec(),
            z: self.z_ideal.gens().iter().map(|g| g.to_string()).collect(),
        };
        serde_json::to_value(raw).expect("serializable")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ws(p: &[u32], e: &[u32]) -> WeightedShape {
        WeightedShape::from_spec(p, e).unwrap()
    }

    fn q(s: &str) -> QPoly {
        QPoly::parse(s).unwrap()
    }

    #[test]
    fn canonicalization_relabels_t() {
        let p = make_sprime(
            &[PartSize::Finite(1), PartSize::Inf],
            &[1, 2],
            vec![q("t1 - 3*t2")],
            true,
        )
        .unwrap();
        assert_eq!(p.shape(), &ws(&[0, 1], &[2, 1]));
        assert_eq!(p.z_ideal().gens()[0], q("-3*t1 + t2"));
        assert!(make_sprime(&[PartSize::Inf], &[1], vec![q("t2")], true).is_err());
        assert!(make_sprime(&[PartSize::Inf], &[1], vec![q("x1")], true).is_err());
    }

    #[test]
    fn radicals() {
        let p = SPrimeData::parse(ws(&[0], &[2]), &["t1"]).unwrap();
        assert_eq!(radical_of(&p).shape(), &ws(&[0], &[1]));
        let c = SPrimeData::parse(ws(&[0, 0], &[2, 2]), &["t1^2 + t2^2 - 1"]).unwrap();
        assert_eq!(radical_of(&c).shape(), &ws(&[0, 0], &[1, 1]));
        assert_eq!(radical_of(&radical_of(&c)).shape(), radical_of(&c).shape());
    }

    #[test]
    fn truncated_q_ideals() {
        let p = SPrimeData::parse(ws(&[0], &[2]), &["t1"]).unwrap();
        let i = q_ideal_truncated(&p, &[0, 0]);
        assert_eq!(i.gens().iter().map(|g| g.to_string()).collect::<Vec<_>>(), ["t1", "e1^2", "e2^2"]);
        let z = SPrimeData::parse(ws(&[0], &[1]), &[]).unwrap();
        assert_eq!(q_ideal_truncated(&z, &[0, 0]).gens().len(), 2);
    }

    #[test]
    fn membership_examples() {
        let p = SPrimeData::parse(ws(&[0], &[2]), &["t1"]).unwrap();
        assert!(member(&q("x1^2"), &p).unwrap());
        assert!(!member(&q("x1"), &p).unwrap());
        let z = SPrimeData::parse(ws(&[0], &[2]), &[]).unwrap();
        assert!(member(&q("(x1-x2)^3"), &z).unwrap());
        assert!(!member(&q("(x1-x2)^2"), &z).unwrap());
        assert!(member(&q("0"), &z).unwrap());
        assert!(!member(&q("1"), &z).unwrap());
    }

    #[test]
    fn factored_membership_matches_expanded() {
        let c = SPrimeData::parse(ws(&[0, 0], &[2, 2]), &["t1^2 + t2^2 - 1"]).unwrap();
        let u = q("x1^2 + x2^2 - 1");
        let d = q("x1 - x2");
        for (a, b) in [(3, 4), (3, 1), (2, 4), (1, 1)] {
            let expanded = &d.pow(a) * &u.pow(b);
            assert_eq!(
                member_product(&[(d.clone(), a), (u.clone(), b)], &c).unwrap(),
                member(&expanded, &c).unwrap()
            );
            assert_eq!(member(&expanded, &c).unwrap(), member_via_derivatives(&expanded, &c).unwrap());
        }
        assert!(member_product(&[(d.clone(), 3), (u.clone(), 4)], &c).unwrap());
        assert!(!member_product(&[(d, 3), (u, 1)], &c).unwrap());
    }

    #[test]
    fn non_surjective_assignments_matter() {
        // Only ρ ≡ 1 (both variables on the first part) detects 2·t1 ∉ ⟨t1+t2⟩.
        let p = SPrimeData::parse(ws(&[0, 0], &[1, 1]), &["t1 + t2"]).unwrap();
        let f = q("x1 + x2");
        assert!(!member(&f, &p).unwrap());
        let surjective_only = assignments(p.shape(), 2)
            .into_iter()
            .filter(|rho| rho.iter().unique().count() == 2)
            .all(|rho| {
                truncated_coefficients(&f, &rho, p.shape().weights())
                    .values()
                    .all(|c| p.saturated().unwrap().radical_member(c).unwrap())
            });
        assert!(surjective_only);
    }

    #[test]
    fn derivative_oracle_agrees() {
        let c = SPrimeData::parse(ws(&[0, 0], &[2, 2]), &["t1^2 + t2^2 - 1"]).unwrap();
        for f in ["(x1-x2)^3*(x1^2+x2^2-1)^4", "(x1-x2)^3*(x1^2+x2^2-1)^3", "(x1-x2)^2", "x1^2+x2^2-1"] {
            let f = q(f);
            assert_eq!(member(&f, &c).unwrap(), member_via_derivatives(&f, &c).unwrap(), "{f}");
        }
    }

    #[test]
    fn json_shape() {
        let p = SPrimeData::from_json(r#"{"lambda":["inf","inf"],"e":[2,2],"Z":["t1^2+t2^2-1"]}"#).unwrap();
        assert_eq!(
            p.to_json().to_string(),
            r#"{"lambda":["inf","inf"],"e":[2,2],"Z":["t1^2 + t2^2 - 1"]}"#
        );
        assert!(SPrimeData::from_json(r#"{"lambda":[1],"e":[1]}"#).is_err());
    }
}
