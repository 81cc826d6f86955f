use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::algebra::{Element, Flavor, GroupElement, Monomial, Var};
use crate::error::{Error, Result};
use crate::index::AlgebraSignature;
use crate::Rational;

/// Sorts a word of generators into normal order under supercommutativity.
///
/// The sign is the parity of the inversions among odd variables; a repeated
/// odd variable gives zero. `hbar` may appear anywhere in the word. Only
/// valid where q- and p-variables of the same orbit never need to cross, i.e.
/// outside the full SFT flavors or for words without such interleavings.
pub fn normalize(
    sig: &AlgebraSignature,
    flavor: Flavor,
    word: &[Var],
    coeff: Rational,
    group: GroupElement,
) -> Result<Element> {
    sig.check_group(&group)?;
    let mut m = Monomial::one(sig.h2rank()).with_group(group);
    let mut odd: Vec<Var> = Vec::new();
    let mut inversions = 0usize;
    for &v in word {
        if !sig.contains(v) {
            return Err(Error::UnknownVariable(format!("{v:?}")));
        }
        if v != Var::Hbar && sig.is_odd(v) {
            if odd.contains(&v) {
                return Ok(Element::zero(flavor));
            }
            inversions += odd.iter().filter(|&&x| x > v).count();
            odd.push(v);
        }
        m = m.with(v, 1);
    }
    if let Some(reason) = m.flavor_violation(flavor) {
        return Err(Error::Inadmissible { flavor, reason: reason.to_string() });
    }
    let c = if inversions % 2 == 1 { -coeff } else { coeff };
    Ok(Element::from_monomial_unchecked(flavor, m, c))
}

fn odd_vars(sig: &AlgebraSignature, m: &Monomial) -> Vec<Var> {
    m.factors()
        .filter(|&(v, _)| sig.is_odd(v))
        .map(|(v, _)| v)
        .collect()
}

/// Graded-commutative product of two normal-ordered monomials. Returns the
/// sign (true = negative) and the product, or `None` if an odd variable would
/// be squared.
pub(crate) fn super_product(
    sig: &AlgebraSignature,
    a: &Monomial,
    b: &Monomial,
) -> Option<(bool, Monomial)> {
    let odd_a = odd_vars(sig, a);
    let mut negative = false;
    if !odd_a.is_empty() {
        for y in odd_vars(sig, b) {
            // odd_a is sorted, so the variables that y must pass are a suffix
            let pos = odd_a.partition_point(|&x| x < y);
            if odd_a.get(pos) == Some(&y) {
                return None;
            }
            if (odd_a.len() - pos) % 2 == 1 {
                negative = !negative;
            }
        }
    }
    Some((negative, a.merge(b)))
}

fn check_flavors(a: &Element, b: &Element) -> Result<Flavor> {
    if a.flavor() != b.flavor() {
        return Err(Error::FlavorMismatch { left: a.flavor(), right: b.flavor() });
    }
    Ok(a.flavor())
}

/// The supercommutative product. Defined for every flavor (on the full SFT
/// monomials it is the `hbar -> 0` product used to compare against
/// projections); [`mul`] picks the right product for the flavor.
pub fn mul_super(sig: &AlgebraSignature, a: &Element, b: &Element) -> Result<Element> {
    let flavor = check_flavors(a, b)?;
    let mut out = Element::zero(flavor);
    for (ma, ca) in a.terms() {
        for (mb, cb) in b.terms() {
            if let Some((negative, m)) = super_product(sig, ma, mb) {
                let c = ca * cb;
                out.add_term(m, if negative { -c } else { c });
            }
        }
    }
    Ok(out)
}

/// The full SFT product, normal ordering with
/// `p_g q_g = (-1)^{|p||q|} (q_g p_g - kappa_g hbar)`.
pub fn mul_weyl(sig: &AlgebraSignature, a: &Element, b: &Element) -> Result<Element> {
    let flavor = check_flavors(a, b)?;
    if !flavor.is_weyl() {
        return Err(Error::UnsupportedFlavor { op: "mul_weyl", flavor });
    }
    let mut out = Element::zero(flavor);
    for (ma, ca) in a.terms() {
        for (mb, cb) in b.terms() {
            let c = ca * cb;
            for (m, k) in weyl_product(sig, ma, mb) {
                out.add_term(m, &c * k);
            }
        }
    }
    Ok(out)
}

/// Product in the algebra of the elements' flavor.
pub fn mul(sig: &AlgebraSignature, a: &Element, b: &Element) -> Result<Element> {
    if a.flavor().is_weyl() {
        mul_weyl(sig, a, b)
    } else {
        mul_super(sig, a, b)
    }
}

pub fn pow(sig: &AlgebraSignature, a: &Element, k: u32) -> Result<Element> {
    let mut out = Element::one(a.flavor(), sig);
    for _ in 0..k {
        out = mul(sig, &out, a)?;
    }
    Ok(out)
}

/// One q-block and one p-block waiting to be glued, with extra hbar power.
type Pending = (Monomial, Monomial, u32);

fn weyl_product(sig: &AlgebraSignature, a: &Monomial, b: &Monomial) -> Vec<(Monomial, Rational)> {
    let rank = sig.h2rank();
    let (qa, pa, ta) = a.blocks();
    let (qb, pb, tb) = b.blocks();

    // a*b = Qa Pa Ta Qb Pb Tb = eps * Qa (Pa Qb) Pb Ta Tb
    let ta_odd = ta.is_odd(sig);
    let eps_negative = ta_odd && (qb.is_odd(sig) != pb.is_odd(sig));

    // Push the p-factors of `a` through Qb one at a time, rightmost first.
    let mut pending: BTreeMap<Pending, Rational> = BTreeMap::new();
    pending.insert((qb, Monomial::one(rank), 0), Rational::one());
    let pa_word = pa.word();
    for &p in pa_word.iter().rev() {
        let Var::P(g) = p else { unreachable!() };
        let p_odd = sig.is_odd(p);
        let kappa = Rational::from_integer(sig.orbit(g).kappa.into());
        let mut next: BTreeMap<Pending, Rational> = BTreeMap::new();
        for ((q, ps, h), c) in pending {
            // p q^I = s q^I p + contraction, s = (-1)^{|p| |q^I|}
            let s_negative = p_odd && q.is_odd(sig);
            let k = q.exponent(Var::Q(g));
            if k > 0 {
                let contracted = if p_odd {
                    // odd case: p q = -q p + kappa hbar, sign from the prefix
                    let prefix_odd = q
                        .q_exponents()
                        .range(..g)
                        .filter(|&(&i, &e)| e % 2 == 1 && sig.is_odd(Var::Q(i)))
                        .count()
                        % 2
                        == 1;
                    if prefix_odd {
                        -&kappa
                    } else {
                        kappa.clone()
                    }
                } else {
                    -&kappa * Rational::from_integer(k.into())
                };
                let key = (q.clone().without(Var::Q(g), 1), ps.clone(), h + 1);
                add_to(&mut next, key, &c * contracted);
            }
            let key = (q, ps.with(p, 1), h);
            add_to(&mut next, key, if s_negative { -c } else { c });
        }
        pending = next;
    }

    let mut out = Vec::with_capacity(pending.len());
    for ((q, ps, h), c) in pending {
        let mid = q.merge(&ps);
        let Some((n1, m)) = super_product(sig, &qa, &mid) else { continue };
        let Some((n2, m)) = super_product(sig, &m, &pb) else { continue };
        let Some((n3, m)) = super_product(sig, &m, &ta) else { continue };
        let Some((n4, m)) = super_product(sig, &m, &tb) else { continue };
        let m = m
            .with(Var::Hbar, a.hbar_power() + b.hbar_power() + h)
            .with_group(a.group() + b.group());
        let negative = eps_negative ^ n1 ^ n2 ^ n3 ^ n4;
        out.push((m, if negative { -c } else { c }));
    }
    out
}

fn add_to(map: &mut BTreeMap<Pending, Rational>, key: Pending, c: Rational) {
    if c.is_zero() {
        return;
    }
    let entry = map.entry(key).or_insert_with(Rational::zero);
    *entry += c;
}
