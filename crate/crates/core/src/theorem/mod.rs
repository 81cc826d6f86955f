//! Primitives of the unit: searching for one, lifting it to the larger
//! algebras through formal inverses, projecting it to the smaller ones, and
//! the classification that ties the six theories together.

mod classify;
mod search;

use crate::algebra::{filtration_weight, mul, Element, Flavor, TruncationPolicy};
use crate::differential::{apply_d, project, restrict_spec, verify_chain_map, DifferentialSpec};
use crate::error::{Error, Result};
use crate::index::AlgebraSignature;

pub use classify::{classify, Classification, FlavorOutcome, Verdict};
pub use search::{degree_one_basis, find_unit_primitive, SearchBounds, SearchOutcome, SEMIDECISION_CAVEAT};

/// An element `a` with `d a = 1`, together with the differential it was
/// checked against.
///
/// Contact homology certificates are exact (`verified_to_weight == 0`).
/// In the power-series flavors `d a - 1` vanishes modulo the truncation
/// ideal of `policy`, i.e. every monomial of weight at most
/// `verified_to_weight` in each filtration has been checked.
#[derive(Clone, Debug, PartialEq)]
pub struct PrimitiveCertificate {
    pub flavor: Flavor,
    pub element: Element,
    pub verified_to_weight: u32,
    pub policy: Option<TruncationPolicy>,
    pub spec: DifferentialSpec,
}

impl PrimitiveCertificate {
    pub fn is_exact(&self) -> bool {
        self.policy.is_none()
    }

    /// `d a - 1`, reduced modulo the truncation ideal for inexact
    /// certificates.
    pub fn residual(&self) -> Result<Element> {
        let sig = self.spec.sig();
        let r = &apply_d(&self.spec, &self.element)? - &Element::one(self.flavor, sig);
        Ok(match &self.policy {
            Some(p) => p.reduce(&r),
            None => r,
        })
    }

    pub fn verify(&self) -> Result<bool> {
        Ok(self.residual()?.is_zero())
    }

    /// Builds a certificate and checks it; fails with the residual otherwise.
    pub fn checked(
        element: Element,
        spec: &DifferentialSpec,
        policy: Option<&TruncationPolicy>,
    ) -> Result<Self> {
        let flavor = spec.flavor();
        let policy = if flavor == Flavor::Ch { None } else { policy.cloned() };
        if flavor != Flavor::Ch && policy.is_none() {
            return Err(Error::Verification(format!("{flavor} certificates need a truncation policy")));
        }
        let verified_to_weight = policy.as_ref().map_or(0, |p| p.verified_weight(flavor));
        if policy.is_some() && verified_to_weight == 0 {
            return Err(Error::Verification("truncation bounds must be at least 1".into()));
        }
        let cert = PrimitiveCertificate { flavor, element, verified_to_weight, policy, spec: spec.clone() };
        let residual = cert.residual()?;
        if !residual.is_zero() {
            return Err(Error::Verification(format!(
                "d(a) - 1 = {} in {flavor}",
                residual.display(spec.sig())
            )));
        }
        Ok(cert)
    }
}

/// `sum_{k=0}^{K} g^k` modulo the truncation ideal, the inverse of `1 - g`
/// up to `g^{K+1}`, where `K` is the policy's bound on the filtration weight
/// of `g`'s flavor.
pub fn formal_inverse(g: &Element, policy: &TruncationPolicy, sig: &AlgebraSignature) -> Result<Element> {
    let flavor = g.flavor();
    check_positive_weight(g, flavor, sig)?;
    let top = policy.filtration_bound(flavor).unwrap_or(0);
    let one = Element::one(flavor, sig);
    let mut sum = one.clone();
    let mut power = one;
    for _ in 0..top {
        power = policy.reduce(&mul(sig, &power, g)?);
        if power.is_zero() {
            break;
        }
        sum = &sum + &power;
    }
    Ok(sum)
}

fn check_positive_weight(g: &Element, flavor: Flavor, sig: &AlgebraSignature) -> Result<()> {
    match g.terms().keys().find(|m| filtration_weight(m, flavor) == 0) {
        Some(m) => Err(Error::ZeroWeightTerm(format!(
            "{} has filtration weight 0 in {flavor}",
            Element::from_monomial_unchecked(flavor, m.clone(), num_traits::One::one()).display(sig)
        ))),
        None => Ok(()),
    }
}

/// The lifts realized by formal inverses: from contact homology to rational
/// or full SFT (the p- resp. (p, hbar)-filtration) and from any theory to its
/// marked version (the t-filtration).
pub fn can_lift(from: Flavor, to: Flavor) -> bool {
    matches!(
        (from, to),
        (Flavor::Ch, Flavor::Rsft)
            | (Flavor::Ch, Flavor::Sft)
            | (Flavor::Ch, Flavor::ChStar)
            | (Flavor::Rsft, Flavor::RsftStar)
            | (Flavor::Sft, Flavor::SftStar)
    )
}

/// Lifts a primitive `f0` to `target_spec`'s algebra: with
/// `g = 1 - d(f0)`, which only has monomials of positive weight in the lift
/// filtration, `F = f0 (1 - g)^{-1}` satisfies `d F = 1` modulo the
/// truncation ideal.
pub fn lift_primitive(
    f0: &PrimitiveCertificate,
    target_spec: &DifferentialSpec,
    policy: &TruncationPolicy,
) -> Result<PrimitiveCertificate> {
    let target = target_spec.flavor();
    if !can_lift(f0.flavor, target) {
        return Err(Error::IncompatibleLift { from: f0.flavor, to: target });
    }
    if restrict_spec(target_spec, f0.flavor)? != f0.spec {
        return Err(Error::IncompatibleFamily(format!(
            "the {target} differential does not restrict to the {} differential of the certificate",
            f0.flavor
        )));
    }
    if !f0.verify()? {
        return Err(Error::Verification("the certificate being lifted does not verify".into()));
    }
    let sig = target_spec.sig();
    let base = f0.element.embed(target)?;
    let g = policy.reduce(&(&Element::one(target, sig) - &apply_d(target_spec, &base)?));
    check_positive_weight(&g, target, sig)?;
    let inverse = formal_inverse(&g, policy, sig)?;
    let element = policy.reduce(&mul(sig, &base, &inverse)?);
    PrimitiveCertificate::checked(element, target_spec, Some(policy))
}

/// Projects a primitive to a smaller algebra. The projection must commute
/// with the differentials, which is checked on the generators and on the
/// primitive itself.
pub fn project_primitive(
    f: &PrimitiveCertificate,
    target_spec: &DifferentialSpec,
) -> Result<PrimitiveCertificate> {
    let report = verify_chain_map(&f.spec, target_spec, std::slice::from_ref(&f.element))?;
    if !report.passed() {
        let (what, _) = &report.mismatches[0];
        return Err(Error::Verification(format!(
            "projection {} -> {} is not a chain map (first mismatch on {what})",
            f.flavor,
            target_spec.flavor()
        )));
    }
    let element = project(&f.element, target_spec.flavor())?;
    PrimitiveCertificate::checked(element, target_spec, f.policy.as_ref())
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::algebra::Var;
    use crate::index::OrbitRecord;
    use crate::Rational;

    fn sig() -> Arc<AlgebraSignature> {
        let orbits = vec![
            OrbitRecord::new("a", 2, 1, Rational::from_integer(4.into())),
            OrbitRecord::new("b", 3, 1, Rational::from_integer(2.into())),
            OrbitRecord::new("c", 5, 2, Rational::from_integer(3.into())),
        ];
        Arc::new(AlgebraSignature::new(2, vec![], orbits, vec![]).unwrap())
    }

    fn el(flavor: Flavor, s: &AlgebraSignature, text: &str) -> Element {
        Element::parse(flavor, s, text).unwrap()
    }

    #[test]
    fn geometric_series() {
        let s = sig();
        let policy = TruncationPolicy::uniform(3);
        assert_eq!(formal_inverse(&Element::zero(Flavor::Rsft), &policy, &s).unwrap(), Element::one(Flavor::Rsft, &s));
        let g = el(Flavor::Rsft, &s, "p:b");
        let expected = el(Flavor::Rsft, &s, "1 + p:b + p:b^2 + p:b^3");
        assert_eq!(formal_inverse(&g, &policy, &s).unwrap(), expected);
    }

    #[test]
    fn weyl_series_with_hbar() {
        // kappa_b = 1; bound 2 on p + hbar
        let s = sig();
        let policy = TruncationPolicy::uniform(2);
        let g = el(Flavor::Sft, &s, "hbar + p:b");
        let inv = formal_inverse(&g, &policy, &s).unwrap();
        let expected = el(Flavor::Sft, &s, "1 + hbar + p:b + hbar^2 + 2*hbar*p:b + p:b^2");
        assert_eq!(inv, expected);
        let one_minus_g = &Element::one(Flavor::Sft, &s) - &g;
        assert_eq!(policy.reduce(&mul(&s, &one_minus_g, &inv).unwrap()), Element::one(Flavor::Sft, &s));
    }

    #[test]
    fn zero_weight_is_rejected() {
        let s = sig();
        let g = el(Flavor::Rsft, &s, "q:b");
        assert!(matches!(
            formal_inverse(&g, &TruncationPolicy::uniform(2), &s),
            Err(Error::ZeroWeightTerm(_))
        ));
    }

    #[test]
    fn lift_and_project() {
        let s = sig();
        let ch = DifferentialSpec::zero(Flavor::Ch, s.clone()).with_image_str("q:a", "1").unwrap();
        let f0 = PrimitiveCertificate::checked(el(Flavor::Ch, &s, "q:a"), &ch, None).unwrap();
        assert!(f0.is_exact());

        let rsft = DifferentialSpec::zero(Flavor::Rsft, s.clone())
            .with_image_str("q:a", "1 - q:c*p:b")
            .unwrap()
            .with_image_str("q:b", "q:c*p:a")
            .unwrap()
            .with_image_str("p:c", "-2*p:a*p:b")
            .unwrap();
        let policy = TruncationPolicy::uniform(3);
        let f = lift_primitive(&f0, &rsft, &policy).unwrap();
        let expected = el(
            Flavor::Rsft,
            &s,
            "q:a*(1 + q:c*p:b + q:c^2*p:b^2 + q:c^3*p:b^3)",
        );
        assert_eq!(f.element, expected);
        assert_eq!(f.verified_to_weight, 3);

        let back = project_primitive(&f, &ch).unwrap();
        assert_eq!(back.element, f0.element);
        assert!(back.is_exact());

        // lifting against a differential that does not restrict to the CH one
        let other = rsft.clone().with_image(Var::Q(0), Element::zero(Flavor::Rsft)).unwrap();
        assert!(lift_primitive(&f0, &other, &policy).is_err());
        assert!(can_lift(Flavor::Rsft, Flavor::RsftStar));
        assert!(!can_lift(Flavor::Rsft, Flavor::Sft));
    }
}
