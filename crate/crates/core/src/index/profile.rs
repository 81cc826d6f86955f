use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::algebra::{Element, GroupElement, Monomial, TruncationPolicy, Var};
use crate::error::{Error, Result};
use crate::index::AlgebraSignature;
use crate::Rational;

/// Whether the distinguished puncture `x_0` is positive (the curve contributes
/// to the image of `q_gamma`) or negative (image of `p_gamma`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PunctureRole {
    Positive,
    Negative,
}

/// Asymptotic data of a moduli space of punctured curves.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PunctureProfile {
    /// Orbit of the extra puncture.
    pub orbit: usize,
    pub role: PunctureRole,
    /// Negative punctures, `I^-`.
    pub i_minus: BTreeMap<usize, u32>,
    /// Positive punctures, `I^+`.
    pub i_plus: BTreeMap<usize, u32>,
    pub genus: u32,
    pub marked_points: u32,
    pub group: GroupElement,
}

impl PunctureProfile {
    /// The genus-0 curve with no punctures besides `x_0` and no marked points.
    pub fn plane(sig: &AlgebraSignature, orbit: usize, role: PunctureRole) -> Self {
        PunctureProfile {
            orbit,
            role,
            i_minus: BTreeMap::new(),
            i_plus: BTreeMap::new(),
            genus: 0,
            marked_points: 0,
            group: GroupElement::identity(sig.h2rank()),
        }
    }

    pub fn minus_count(&self) -> u32 {
        self.i_minus.values().sum()
    }

    pub fn plus_count(&self) -> u32 {
        self.i_plus.values().sum()
    }
}

pub fn generator_degree(var: Var, sig: &AlgebraSignature) -> Result<i64> {
    sig.degree(var)
}

/// `C(I) = |I|! * prod_j i_j! * prod_j kappa_j^{i_j}` with `|I|` the number of
/// nonzero entries of `I`.
pub fn combinatorial_factor(exponents: &BTreeMap<usize, u32>, sig: &AlgebraSignature) -> BigInt {
    let support = exponents.values().filter(|&&e| e > 0).count() as u32;
    let mut c = factorial(support);
    for (&j, &e) in exponents {
        c *= factorial(e);
        c *= BigInt::from(sig.orbit(j).kappa).pow(e);
    }
    c
}

fn factorial(k: u32) -> BigInt {
    (1..=k).fold(BigInt::one(), |acc, i| acc * i)
}

/// Dimension of the moduli space of curves with the given asymptotics.
///
/// The puncture counts `|I^-|`, `|I^+|` enter as total numbers of punctures
/// (with multiplicity); with that reading index zero is equivalent to the
/// corresponding differential term having degree -1.
pub fn moduli_dimension(profile: &PunctureProfile, sig: &AlgebraSignature) -> i64 {
    let n3 = sig.n() - 3;
    let g = i64::from(profile.genus);
    let punctures = i64::from(profile.minus_count()) + i64::from(profile.plus_count());
    let cz = sig.orbit(profile.orbit).cz;
    let extra = match profile.role {
        PunctureRole::Positive => cz,
        PunctureRole::Negative => -cz,
    };
    let ends: i64 = profile.i_plus.iter().map(|(&j, &e)| i64::from(e) * sig.orbit(j).cz).sum::<i64>()
        - profile.i_minus.iter().map(|(&j, &e)| i64::from(e) * sig.orbit(j).cz).sum::<i64>();
    n3 * (1 - 2 * g - punctures) - 1
        + 2 * i64::from(profile.marked_points)
        + extra
        + 2 * sig.pairing(&profile.group)
        + ends
}

/// The monomial `e^A q^{I^-} p^{I^+} hbar^g` counted by a profile (marked
/// points not included). Odd exponents are not reduced, so the result may be
/// a vanishing monomial; it is meant for degree bookkeeping.
pub fn profile_monomial(profile: &PunctureProfile, sig: &AlgebraSignature) -> Monomial {
    let mut m = Monomial::one(sig.h2rank()).with_group(profile.group.clone());
    for (&j, &e) in &profile.i_minus {
        m = m.with(Var::Q(j), e);
    }
    for (&j, &e) in &profile.i_plus {
        m = m.with(Var::P(j), e);
    }
    m.with(Var::Hbar, profile.genus)
}

/// All profiles within the bounds whose moduli space has dimension zero.
///
/// Negative punctures are bounded by the word length (shared with the
/// positive ones) and, when `max_action` is set, by the action: curves must
/// have positive energy, i.e. the total period at the positive ends exceeds
/// the total period at the negative ends, and the total period of all ends
/// stays below `max_action`. Positive punctures are bounded by the p-weight,
/// the genus by the hbar weight and the marked points by the t-weight. Group
/// classes range over the box `|A_i| <= group_radius`.
pub fn enumerate_admissible_profiles(
    orbit: usize,
    role: PunctureRole,
    sig: &AlgebraSignature,
    bounds: &TruncationPolicy,
    group_radius: u32,
) -> Result<Vec<PunctureProfile>> {
    if bounds.max_word_length.is_none() && bounds.max_action.is_none() {
        return Err(Error::UnboundedEnumeration);
    }
    let k = sig.orbits().len();
    let word = bounds.max_word_length.unwrap_or(u32::MAX);
    let periods: Vec<Rational> = sig.orbits().iter().map(|o| o.period.clone()).collect();
    let cap = bounds.max_action.clone();

    let plus_sets = multi_indices(k, bounds.max_p_weight.min(word), &periods, cap.as_ref());
    let groups = group_box(sig.h2rank(), group_radius);
    let t_gamma = &sig.orbit(orbit).period;

    let mut out = Vec::new();
    for i_plus in &plus_sets {
        let plus_total: u32 = i_plus.values().sum();
        let plus_action = action(i_plus, &periods);
        let minus_cap = cap.as_ref().map(|c| c - &plus_action);
        let minus_sets = multi_indices(k, word - plus_total, &periods, minus_cap.as_ref());
        for i_minus in minus_sets {
            if cap.is_some() {
                let minus_action = action(&i_minus, &periods);
                let positive_energy = match role {
                    PunctureRole::Positive => minus_action < t_gamma + &plus_action,
                    PunctureRole::Negative => t_gamma + &minus_action < plus_action,
                };
                if !positive_energy {
                    continue;
                }
            }
            for genus in 0..=bounds.max_hbar_weight {
                for marked_points in 0..=bounds.max_t_weight {
                    for group in &groups {
                        let profile = PunctureProfile {
                            orbit,
                            role,
                            i_minus: i_minus.clone(),
                            i_plus: i_plus.clone(),
                            genus,
                            marked_points,
                            group: group.clone(),
                        };
                        if moduli_dimension(&profile, sig) == 0 {
                            out.push(profile);
                        }
                    }
                }
            }
        }
    }
    out.sort();
    Ok(out)
}

fn action(exponents: &BTreeMap<usize, u32>, periods: &[Rational]) -> Rational {
    exponents
        .iter()
        .map(|(&j, &e)| &periods[j] * Rational::from_integer(e.into()))
        .fold(Rational::zero(), |a, b| a + b)
}

/// Exponent maps over `k` orbits with total at most `max_total` and, when a
/// cap is given, total action at most `cap`.
fn multi_indices(
    k: usize,
    max_total: u32,
    periods: &[Rational],
    cap: Option<&Rational>,
) -> Vec<BTreeMap<usize, u32>> {
    fn go(
        j: usize,
        k: usize,
        left: u32,
        budget: Option<Rational>,
        periods: &[Rational],
        cur: &mut BTreeMap<usize, u32>,
        out: &mut Vec<BTreeMap<usize, u32>>,
    ) {
        if j == k {
            out.push(cur.clone());
            return;
        }
        let mut e = 0u32;
        loop {
            let spent = &periods[j] * Rational::from_integer(e.into());
            if budget.as_ref().is_some_and(|b| &spent > b) {
                break;
            }
            if e > 0 {
                cur.insert(j, e);
            }
            let rest = budget.as_ref().map(|b| b - &spent);
            go(j + 1, k, left - e, rest, periods, cur, out);
            if e == left {
                break;
            }
            e += 1;
        }
        cur.remove(&j);
    }
    if max_total == u32::MAX && cap.is_none() {
        return Vec::new();
    }
    if cap.is_some_and(|c| c < &Rational::zero()) {
        return Vec::new();
    }
    let mut out = Vec::new();
    go(0, k, max_total, cap.cloned(), periods, &mut BTreeMap::new(), &mut out);
    out
}

fn group_box(rank: usize, radius: u32) -> Vec<GroupElement> {
    let r = i64::from(radius);
    let mut out = vec![Vec::new()];
    for _ in 0..rank {
        out = out
            .into_iter()
            .flat_map(|v: Vec<i64>| {
                (-r..=r).map(move |a| {
                    let mut w = v.clone();
                    w.push(a);
                    w
                })
            })
            .collect();
    }
    out.into_iter().map(GroupElement::new).collect()
}

/// True iff every term of `image` has degree `|generator| - 1`.
pub fn degree_drop_check(image: &Element, generator: Var, sig: &AlgebraSignature) -> bool {
    let Ok(target) = sig.degree(generator) else { return false };
    image.terms().keys().all(|m| m.degree(sig) == target - 1)
}
