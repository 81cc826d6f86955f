//! Independent oracles and random generators shared by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::{One, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use sft_core::algebra::{Element, Flavor, GroupElement, Monomial, Var};
use sft_core::index::{AlgebraSignature, OrbitRecord, TFormRecord};
use sft_core::Rational;

/// Normal-ordered word (hbar excluded), hbar power, group class.
pub type Key = (Vec<Var>, u32, Vec<i64>);
pub type Poly = BTreeMap<Key, Rational>;

pub fn r(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

fn odd(sig: &AlgebraSignature, v: Var) -> bool {
    v != Var::Hbar && sig.parity(v).unwrap().is_odd()
}

fn add(poly: &mut Poly, key: Key, c: Rational) {
    let slot = poly.entry(key.clone()).or_insert_with(Rational::zero);
    *slot += c;
    if slot.is_zero() {
        poly.remove(&key);
    }
}

/// Library element as oracle polynomial.
pub fn to_poly(e: &Element) -> Poly {
    e.terms()
        .iter()
        .map(|(m, c)| ((m.word(), m.hbar_power(), m.group().coords().to_vec()), c.clone()))
        .collect()
}

/// Sorts a word by adjacent transpositions, each contributing
/// `(-1)^{|x||y|}`; a word with two equal odd letters is zero.
pub fn bubble_sort(sig: &AlgebraSignature, word: &[Var]) -> Option<(bool, Vec<Var>)> {
    let mut w = word.to_vec();
    let mut negative = false;
    loop {
        let mut swapped = false;
        for i in 1..w.len() {
            if w[i - 1] == w[i] && odd(sig, w[i]) {
                return None;
            }
            if w[i - 1] > w[i] {
                if odd(sig, w[i - 1]) && odd(sig, w[i]) {
                    negative = !negative;
                }
                w.swap(i - 1, i);
                swapped = true;
            }
        }
        if !swapped {
            return Some((negative, w));
        }
    }
}

/// Supercommutative product computed by sorting the concatenated words.
pub fn super_product_oracle(sig: &AlgebraSignature, a: &Element, b: &Element) -> Poly {
    let mut out = Poly::new();
    for (ma, ca) in a.terms() {
        for (mb, cb) in b.terms() {
            let word = [ma.word(), mb.word()].concat();
            if let Some((negative, w)) = bubble_sort(sig, &word) {
                let g: Vec<i64> = ma.group().coords().iter().zip(mb.group().coords()).map(|(x, y)| x + y).collect();
                let c = ca * cb;
                add(&mut out, (w, ma.hbar_power() + mb.hbar_power(), g), if negative { -c } else { c });
            }
        }
    }
    out
}

/// Left multiplication by a q- or t-variable on the polynomial ring.
fn left_mul(sig: &AlgebraSignature, x: Var, f: &Poly) -> Poly {
    let mut out = Poly::new();
    for ((w, h, g), c) in f {
        let mut word = vec![x];
        word.extend(w);
        if let Some((negative, w)) = bubble_sort(sig, &word) {
            add(&mut out, (w, *h, g.clone()), if negative { -c.clone() } else { c.clone() });
        }
    }
    out
}

/// `p_g` as the super-derivation of parity `|p_g|` with
/// `D(q_g) = -(-1)^{|p_g||q_g|} kappa_g hbar`, so that
/// `p q - (-1)^{|p||q|} q p = -(-1)^{|p||q|} kappa hbar`.
fn derivation(sig: &AlgebraSignature, orbit: usize, f: &Poly) -> Poly {
    let p = Var::P(orbit);
    let q = Var::Q(orbit);
    let p_odd = odd(sig, p);
    let s_negative = p_odd && odd(sig, q);
    let kappa = r(i64::from(sig.orbit(orbit).kappa));
    let dq = if s_negative { kappa } else { -kappa };
    let mut out = Poly::new();
    for ((w, h, g), c) in f {
        let mut passed_odd = false;
        for i in 0..w.len() {
            if w[i] == q {
                let mut rest = w.clone();
                rest.remove(i);
                let sign_negative = p_odd && passed_odd;
                let v = &dq * c;
                add(&mut out, (rest, h + 1, g.clone()), if sign_negative { -v } else { v });
            }
            if odd(sig, w[i]) {
                passed_odd = !passed_odd;
            }
        }
    }
    out
}

/// The operator of a normal-ordered monomial applied to `f`.
fn apply_monomial(sig: &AlgebraSignature, m: &Monomial, c: &Rational, f: &Poly) -> Poly {
    let mut cur = f.clone();
    for v in m.word().into_iter().rev() {
        cur = match v {
            Var::P(j) => derivation(sig, j, &cur),
            _ => left_mul(sig, v, &cur),
        };
    }
    cur.into_iter()
        .map(|((w, h, g), x)| {
            let g = g.iter().zip(m.group().coords()).map(|(a, b)| a + b).collect();
            ((w, h + m.hbar_power(), g), x * c)
        })
        .collect()
}

pub fn apply_operator(sig: &AlgebraSignature, e: &Element, f: &Poly) -> Poly {
    let mut out = Poly::new();
    for (m, c) in e.terms() {
        for (k, v) in apply_monomial(sig, m, c, f) {
            add(&mut out, k, v);
        }
    }
    out
}

/// Test functions `q^K` for every K below the per-orbit p-exponents of `e`.
pub fn test_functions(sig: &AlgebraSignature, e: &Element) -> Vec<Poly> {
    let rank = sig.h2rank();
    let mut caps: BTreeMap<usize, u32> = BTreeMap::new();
    for m in e.terms().keys() {
        for (&j, &x) in m.p_exponents() {
            let cap = caps.entry(j).or_default();
            *cap = (*cap).max(x);
        }
    }
    let mut words: Vec<Vec<Var>> = vec![Vec::new()];
    for (&j, &cap) in &caps {
        let top = if odd(sig, Var::Q(j)) { cap.min(1) } else { cap };
        words = words
            .into_iter()
            .flat_map(|w| (0..=top).map(move |k| [w.clone(), vec![Var::Q(j); k as usize]].concat()))
            .collect();
    }
    words
        .into_iter()
        .map(|w| {
            let (_, w) = bubble_sort(sig, &w).expect("distinct odd letters");
            Poly::from([((w, 0, vec![0; rank]), Rational::one())])
        })
        .collect()
}

/// Signature with `orbits` random orbits (CZ in -2..=5, kappa in 1..=3) and
/// `tforms` t-variables, n = 3 and one group direction.
pub fn random_signature(rng: &mut ChaCha8Rng, orbits: usize, tforms: usize) -> Arc<AlgebraSignature> {
    let orbits = (0..orbits)
        .map(|i| OrbitRecord::new(format!("o{i}"), rng.gen_range(-2..=5), rng.gen_range(1..=3), r(rng.gen_range(1..=4))))
        .collect();
    let tforms = (0..tforms).map(|i| TFormRecord::new(format!("t{i}"), rng.gen_range(0..=5))).collect();
    Arc::new(AlgebraSignature::new(3, vec![1], orbits, tforms).unwrap())
}

/// A random monomial admissible in `flavor` with at most `max_vars` factors.
pub fn random_monomial(rng: &mut ChaCha8Rng, sig: &AlgebraSignature, flavor: Flavor, max_vars: u32) -> Monomial {
    let mut vars: Vec<Var> = sig.variables().filter(|&v| Monomial::var(sig.h2rank(), v).flavor_violation(flavor).is_none()).collect();
    if flavor.has_hbar() {
        vars.push(Var::Hbar);
    }
    let group = GroupElement::new((0..sig.h2rank()).map(|_| rng.gen_range(-1..=1)).collect());
    let mut m = Monomial::one(sig.h2rank()).with_group(group);
    let count = rng.gen_range(0..=max_vars);
    for _ in 0..count {
        let v = vars[rng.gen_range(0..vars.len())];
        if v != Var::Hbar && odd(sig, v) && m.exponent(v) > 0 {
            continue;
        }
        m = m.with(v, 1);
    }
    m
}

/// A random nonzero rational coefficient.
pub fn random_coeff(rng: &mut ChaCha8Rng) -> Rational {
    let n = loop {
        let n: i64 = rng.gen_range(-4..=4);
        if n != 0 {
            break n;
        }
    };
    Rational::new(n.into(), rng.gen_range(1i64..=3).into())
}

pub fn monomial_element(flavor: Flavor, sig: &AlgebraSignature, m: Monomial, c: Rational) -> Element {
    Element::from_terms(flavor, sig, [(m, c)]).unwrap()
}

/// Sum of up to `terms` random monomials of the same parity.
pub fn random_homogeneous(rng: &mut ChaCha8Rng, sig: &AlgebraSignature, flavor: Flavor, max_vars: u32, terms: usize) -> Element {
    let first = random_monomial(rng, sig, flavor, max_vars);
    let parity = first.is_odd(sig);
    let mut out = monomial_element(flavor, sig, first, random_coeff(rng));
    for _ in 1..terms {
        let m = random_monomial(rng, sig, flavor, max_vars);
        if m.is_odd(sig) == parity {
            out = &out + &monomial_element(flavor, sig, m, random_coeff(rng));
        }
    }
    out
}

/// Graded degree from the grading rules, written out independently of the
/// library: |q| = CZ + n - 3, |p| = -CZ + n - 3, |hbar| = 2(n - 3),
/// |t| = deg(theta) - 2, |e^A| = -2 <c1, A>.
pub fn oracle_degree(sig: &AlgebraSignature, m: &Monomial) -> i64 {
    let n3 = sig.n() - 3;
    let mut d = 2 * n3 * i64::from(m.hbar_power());
    for (&j, &e) in m.q_exponents() {
        d += i64::from(e) * (sig.orbit(j).cz + n3);
    }
    for (&j, &e) in m.p_exponents() {
        d += i64::from(e) * (-sig.orbit(j).cz + n3);
    }
    for (&j, &e) in m.t_exponents() {
        d += i64::from(e) * (i64::from(sig.tforms()[j].form_degree) - 2);
    }
    let pairing: i64 = sig.c1().iter().zip(m.group().coords()).map(|(c, a)| c * a).sum();
    d - 2 * pairing
}
