use serde::{Deserialize, Serialize};

use crate::algebra::{filtration_weight, Element, Flavor, Monomial};
use crate::index::AlgebraSignature;
use crate::Rational;

/// Bounds that make power-series computations finite.
///
/// In the full SFT flavors the p-weight bound applies to `p + hbar`, the
/// filtration weight of those algebras, so that the truncated monomials form
/// a two-sided ideal for the Weyl product.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "camelCase")]
pub struct TruncationPolicy {
    pub max_p_weight: u32,
    pub max_hbar_weight: u32,
    pub max_t_weight: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_word_length: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none", with = "crate::io::opt_rational")]
    pub max_action: Option<Rational>,
}

impl Default for TruncationPolicy {
    fn default() -> Self {
        TruncationPolicy::uniform(5)
    }
}

impl TruncationPolicy {
    /// Same bound on every filtration weight, no word-length or action bound.
    pub fn uniform(weight: u32) -> Self {
        TruncationPolicy {
            max_p_weight: weight,
            max_hbar_weight: weight,
            max_t_weight: weight,
            max_word_length: None,
            max_action: None,
        }
    }

    pub fn with_word_length(mut self, len: u32) -> Self {
        self.max_word_length = Some(len);
        self
    }

    pub fn with_action(mut self, action: Rational) -> Self {
        self.max_action = Some(action);
        self
    }

    fn p_weight(m: &Monomial, flavor: Flavor) -> u32 {
        if flavor.is_weyl() {
            m.p_weight() + m.hbar_power()
        } else {
            m.p_weight()
        }
    }

    /// Membership in the truncation ideal: the monomials whose filtration
    /// weights exceed the bounds. Products and differentials map the ideal
    /// into itself, so computations modulo it are consistent.
    pub fn in_ideal(&self, m: &Monomial, flavor: Flavor) -> bool {
        (flavor.has_p() && Self::p_weight(m, flavor) > self.max_p_weight)
            || (flavor.has_hbar() && m.hbar_power() > self.max_hbar_weight)
            || (flavor.is_marked() && m.t_weight() > self.max_t_weight)
    }

    /// Drops the monomials in the truncation ideal. Contact homology elements
    /// are never touched.
    pub fn reduce(&self, e: &Element) -> Element {
        let flavor = e.flavor();
        e.filter_into(flavor, |m| !self.in_ideal(m, flavor))
    }

    /// Drops every monomial exceeding any bound, including word length and
    /// action. Unlike [`TruncationPolicy::reduce`] this is not compatible with
    /// products in general; it is a presentation and search filter.
    pub fn within(&self, m: &Monomial, flavor: Flavor, sig: &AlgebraSignature) -> bool {
        if Self::p_weight(m, flavor) > self.max_p_weight
            || m.hbar_power() > self.max_hbar_weight
            || m.t_weight() > self.max_t_weight
        {
            return false;
        }
        if let Some(len) = self.max_word_length {
            if m.word_length() > len {
                return false;
            }
        }
        if let Some(action) = &self.max_action {
            if &m.action(sig) > action {
                return false;
            }
        }
        true
    }

    /// The order `K` of the geometric series `sum_{k<=K} g^k` when lifting
    /// into `flavor`; `None` for contact homology.
    pub fn filtration_bound(&self, flavor: Flavor) -> Option<u32> {
        match flavor {
            Flavor::Ch => None,
            Flavor::Rsft | Flavor::Sft => Some(self.max_p_weight),
            Flavor::ChStar | Flavor::RsftStar | Flavor::SftStar => Some(self.max_t_weight),
        }
    }

    /// The weight `W` such that every monomial whose filtration weights are
    /// all at most `W` lies outside the truncation ideal. 0 for contact
    /// homology, where checks are exact.
    pub fn verified_weight(&self, flavor: Flavor) -> u32 {
        let mut bounds = Vec::new();
        if flavor.has_p() {
            bounds.push(self.max_p_weight);
        }
        if flavor.has_hbar() {
            bounds.push(self.max_hbar_weight);
        }
        if flavor.is_marked() {
            bounds.push(self.max_t_weight);
        }
        bounds.into_iter().min().unwrap_or(0)
    }

    /// Smallest filtration weight of `e` in `flavor`'s lift filtration.
    pub fn min_weight(e: &Element) -> Option<u32> {
        e.terms().keys().map(|m| filtration_weight(m, e.flavor())).min()
    }
}

/// Drops every monomial of `e` exceeding any bound of `policy`. Linear and
/// idempotent.
pub fn truncate(e: &Element, policy: &TruncationPolicy, sig: &AlgebraSignature) -> Element {
    let flavor = e.flavor();
    e.filter_into(flavor, |m| policy.within(m, flavor, sig))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Var;
    use crate::index::OrbitRecord;
    use num_traits::One;

    fn sig() -> AlgebraSignature {
        let orbits = vec![OrbitRecord::new("b", 3, 1, Rational::one())];
        AlgebraSignature::new(2, vec![], orbits, vec![]).unwrap()
    }

    fn series(flavor: Flavor, top: u32) -> Element {
        Element::from_terms(
            flavor,
            &sig(),
            (0..=top).map(|k| (Monomial::one(0).with(Var::P(0), k), Rational::one())),
        )
        .unwrap()
    }

    #[test]
    fn truncate_drops_high_p_weight() {
        let s = sig();
        let mut policy = TruncationPolicy::uniform(1);
        let e = series(Flavor::Rsft, 2);
        assert_eq!(truncate(&e, &policy, &s), series(Flavor::Rsft, 1));
        let once = truncate(&e, &policy, &s);
        assert_eq!(truncate(&once, &policy, &s), once);
        policy.max_p_weight = 5;
        assert_eq!(truncate(&e, &policy, &s), e);
    }

    #[test]
    fn word_length_and_action() {
        let s = sig();
        let e = series(Flavor::Rsft, 3);
        let policy = TruncationPolicy::uniform(9).with_word_length(2);
        assert_eq!(truncate(&e, &policy, &s), series(Flavor::Rsft, 2));
        let policy = TruncationPolicy::uniform(9).with_action(Rational::one());
        assert_eq!(truncate(&e, &policy, &s), series(Flavor::Rsft, 1));
    }

    #[test]
    fn sft_weight_counts_hbar() {
        let m = Monomial::one(0).with(Var::P(0), 1).with(Var::Hbar, 1);
        let policy = TruncationPolicy::uniform(1);
        assert!(policy.in_ideal(&m, Flavor::Sft));
        assert!(!policy.in_ideal(&m, Flavor::Rsft));
        assert_eq!(policy.verified_weight(Flavor::Ch), 0);
        assert_eq!(TruncationPolicy { max_t_weight: 3, ..TruncationPolicy::uniform(5) }.verified_weight(Flavor::SftStar), 3);
    }
}
