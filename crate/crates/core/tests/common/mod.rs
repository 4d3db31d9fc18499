#![allow(dead_code)]

use proptest::prelude::*;
use proptest::test_runner::TestCaseError;

use sprime_core::combinat::{shape_box, shape_leq, PartSize, WeightedShape};
use sprime_core::groebner::{normal_form, s_polynomial, Ideal, MonomialOrder};
use sprime_core::poly::{QPoly, Var};
use sprime_core::spectrum::make_radical;
use sprime_core::sprime::{make_sprime, SPrimeData};
use sprime_core::theta::{contains, theta};

pub fn q(s: &str) -> QPoly {
    QPoly::parse(s).unwrap()
}

pub fn ws(p: &[u32], e: &[u32]) -> WeightedShape {
    WeightedShape::from_spec(p, e).unwrap()
}

pub fn sp(p: &[u32], e: &[u32], z: &[&str]) -> SPrimeData {
    SPrimeData::parse(ws(p, e), z).unwrap()
}

fn z_menu(r: usize) -> Vec<Vec<&'static str>> {
    match r {
        1 => vec![vec![], vec!["t1"], vec!["t1 - 1"], vec!["t1 + 2"]],
        2 => vec![
            vec![],
            vec!["t1 + t2"],
            vec!["t1 + t2 - 1"],
            vec!["t1^2 + t2^2 - 1"],
            vec!["t1", "t2 - 1"],
            vec!["t1 - 2*t2"],
        ],
        _ => vec![vec![], vec!["t1 + t2 + t3"], vec!["t1 - 1", "t2"]],
    }
}

/// Small S-primes: up to three parts (at least one infinite), weights ≤ 2,
/// finite parts ≤ 2, Z drawn from a fixed menu per arity.
pub fn prime_strategy() -> BoxedStrategy<SPrimeData> {
    let part = prop_oneof![Just(PartSize::Inf), (1u32..=2).prop_map(PartSize::Finite)];
    (1usize..=3)
        .prop_flat_map(move |r| {
            (
                Just(r),
                proptest::collection::vec(part.clone(), r - 1),
                proptest::collection::vec(1u32..=2, r),
                0usize..z_menu(r).len(),
            )
        })
        .prop_map(|(r, rest, weights, zi)| {
            let mut parts = vec![PartSize::Inf];
            parts.extend(rest);
            let gens = z_menu(r)[zi].iter().map(|s| q(s)).collect();
            make_sprime(&parts, &weights, gens, true).unwrap()
        })
        .boxed()
}

pub fn shape_strategy(max_parts: usize) -> BoxedStrategy<WeightedShape> {
    let part = prop_oneof![Just(PartSize::Inf), (1u32..=3).prop_map(PartSize::Finite)];
    (1usize..=max_parts)
        .prop_flat_map(move |r| {
            (proptest::collection::vec(part.clone(), r - 1), proptest::collection::vec(1u32..=3, r))
        })
        .prop_map(|(rest, weights)| {
            let mut parts = vec![PartSize::Inf];
            parts.extend(rest);
            sprime_core::combinat::canonicalize(&parts, &weights).unwrap().0
        })
        .boxed()
}

/// (p, ν, μ) with μ ≼ ν ≼ shape(p), shapes drawn from a small box.
pub fn composition_strategy() -> BoxedStrategy<(SPrimeData, WeightedShape, WeightedShape)> {
    (prime_strategy(), any::<u64>(), any::<u64>())
        .prop_map(|(p, a, b)| {
            let boxed = shape_box(3, 3, 3);
            let pick = |below: &WeightedShape, seed: u64| {
                let c: Vec<&WeightedShape> = boxed.iter().filter(|s| shape_leq(s, below)).collect();
                c[(seed % c.len() as u64) as usize].clone()
            };
            let nu = pick(p.shape(), a);
            let mu = pick(&nu, b);
            (p, nu, mu)
        })
        .boxed()
}

fn poly_strategy(nvars: u32, max_terms: usize) -> BoxedStrategy<QPoly> {
    proptest::collection::vec((-3i64..=3, proptest::collection::vec(0u32..=2, nvars as usize)), 1..=max_terms)
        .prop_map(move |terms| {
            let mut f = QPoly::zero();
            for (c, exps) in terms {
                let mut t = QPoly::int(c);
                for (i, e) in exps.into_iter().enumerate() {
                    t = &t * &QPoly::var(Var::x(i as u32 + 1)).pow(e);
                }
                f = &f + &t;
            }
            f
        })
        .boxed()
}

pub fn ideal_strategy() -> BoxedStrategy<Vec<QPoly>> {
    proptest::collection::vec(poly_strategy(3, 3), 1..=3).boxed()
}

fn ok(cond: bool, msg: impl FnOnce() -> String) -> Result<(), TestCaseError> {
    if cond {
        Ok(())
    } else {
        Err(TestCaseError::fail(msg()))
    }
}

/// Every generator and every S-polynomial of basis pairs reduces to zero.
pub fn check_groebner(gens: Vec<QPoly>) -> Result<(), TestCaseError> {
    let vars: Vec<Var> = (1..=3).map(Var::x).collect();
    let ord = MonomialOrder::grevlex(vars.clone());
    let ideal = Ideal::new(gens.clone(), vars);
    let basis = match ideal.groebner_basis(&ord) {
        Ok(b) => b,
        Err(e) if e.is_budget() => return Err(TestCaseError::reject("budget")),
        Err(e) => return Err(TestCaseError::fail(e.to_string())),
    };
    for g in &gens {
        ok(normal_form(g, &basis, &ord).unwrap().is_zero(), || format!("{g} does not reduce"))?;
    }
    for (i, a) in basis.iter().enumerate() {
        for b in &basis[i + 1..] {
            let s = s_polynomial(a, b, &ord);
            ok(normal_form(&s, &basis, &ord).unwrap().is_zero(), || format!("S({a}, {b}) does not reduce"))?;
        }
    }
    Ok(())
}

/// p ⊆ P(ν; Θ_ν(Z)) ⊆ P(μ; Θ_μ(Θ_ν(Z))), so p ⊆ the last one.
pub fn check_theta_composition(
    p: SPrimeData,
    nu: WeightedShape,
    mu: WeightedShape,
) -> Result<(), TestCaseError> {
    let y = theta(&p, &nu).unwrap().ideal;
    if y.is_unit().unwrap() {
        return Err(TestCaseError::reject("empty middle slice"));
    }
    let mid = SPrimeData::from_canonical(nu, y.gens().to_vec(), false).unwrap();
    let w = theta(&mid, &mu).unwrap().ideal;
    if w.is_unit().unwrap() {
        return Err(TestCaseError::reject("empty end slice"));
    }
    let end = SPrimeData::from_canonical(mu, w.gens().to_vec(), false).unwrap();
    ok(contains(&p, &mid).unwrap().contains, || format!("{p} ⊄ {mid}"))?;
    ok(contains(&mid, &end).unwrap().contains, || format!("{mid} ⊄ {end}"))?;
    ok(contains(&p, &end).unwrap().contains, || format!("{p} ⊄ {end}"))
}

pub fn check_reflexive(p: SPrimeData) -> Result<(), TestCaseError> {
    ok(contains(&p, &p).unwrap().contains, || format!("{p} ⊄ itself"))
}

pub fn check_transitive(p: SPrimeData, q: SPrimeData, r: SPrimeData) -> Result<(), TestCaseError> {
    let pq = contains(&p, &q).unwrap().contains;
    let qr = contains(&q, &r).unwrap().contains;
    if !(pq && qr) {
        return Err(TestCaseError::reject("chain not present"));
    }
    ok(contains(&p, &r).unwrap().contains, || format!("{p} ⊆ {q} ⊆ {r} but not {p} ⊆ {r}"))
}

/// Same as [`check_transitive`] but never rejects: exercises the implication
/// on every triple, including vacuous ones.
pub fn check_transitive_total(p: SPrimeData, q: SPrimeData, r: SPrimeData) -> Result<(), TestCaseError> {
    let pq = contains(&p, &q).unwrap().contains;
    let qr = contains(&q, &r).unwrap().contains;
    ok(!(pq && qr) || contains(&p, &r).unwrap().contains, || format!("{p} ⊆ {q} ⊆ {r} but not {p} ⊆ {r}"))
}

/// The reduced list is an antichain and every input contains a survivor.
pub fn check_antichain(ps: Vec<SPrimeData>) -> Result<(), TestCaseError> {
    let r = make_radical(ps.clone()).unwrap();
    ok(r.is_antichain().unwrap(), || format!("not an antichain: {:?}", r.primes()))?;
    for p in &ps {
        let covered = r.primes().iter().any(|k| contains(k, p).unwrap().contains);
        ok(covered, || format!("{p} lost"))?;
    }
    Ok(())
}

fn relabel(p: &SPrimeData, perm: &[usize]) -> SPrimeData {
    // New part k is old part perm[k]; t_{perm[k]+1} becomes t_{k+1}.
    let parts: Vec<PartSize> = perm.iter().map(|&i| p.shape().parts()[i]).collect();
    let weights: Vec<u32> = perm.iter().map(|&i| p.shape().weights()[i]).collect();
    let mut inv = vec![0u32; perm.len()];
    for (k, &old) in perm.iter().enumerate() {
        inv[old] = k as u32 + 1;
    }
    let gens = p.z_ideal().gens().iter().map(|g| g.rename(|v| Var::t(inv[v.index as usize - 1]))).collect();
    make_sprime(&parts, &weights, gens, true).unwrap()
}

/// contains is unchanged when both arguments are presented with permuted parts.
pub fn check_relabel(p: SPrimeData, q: SPrimeData, seed: u64) -> Result<(), TestCaseError> {
    let perm = |r: usize, s: u64| -> Vec<usize> {
        let mut v: Vec<usize> = (0..r).collect();
        let mut x = s;
        for i in (1..r).rev() {
            x = x.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            v.swap(i, (x >> 33) as usize % (i + 1));
        }
        v
    };
    let p2 = relabel(&p, &perm(p.r(), seed));
    let q2 = relabel(&q, &perm(q.r(), seed ^ 0x9e37));
    let a = contains(&p, &q).unwrap().contains;
    let b = contains(&p2, &q2).unwrap().contains;
    ok(a == b, || format!("{p} ⊆ {q} is {a}, relabelled {p2} ⊆ {q2} is {b}"))
}
