//! Differentials given by generator images, extended by the graded Leibniz
//! rule, together with the projections between flavors.

mod checks;

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::One;

use crate::algebra::{mul, Element, Flavor, Monomial, Var};
use crate::error::{Error, Result};
use crate::index::AlgebraSignature;
use crate::Rational;

pub use checks::{
    check_d_squared, validate_structure, verify_chain_map, ChainMapReport, DSquaredReport,
    SpecStatus, StructureReport, Violation, ViolationKind,
};

/// A differential on one of the six algebras, stored as the images of the
/// q- and p-generators. `hbar`, the `t_j` and the group ring are closed.
///
/// Coefficients are the final structure constants: any divisor
/// `C(I^-) C(I^+)` and sign convention has been applied already.
#[derive(Clone, Debug, PartialEq)]
pub struct DifferentialSpec {
    flavor: Flavor,
    sig: Arc<AlgebraSignature>,
    images: BTreeMap<Var, Element>,
}

impl DifferentialSpec {
    /// The zero differential, with an explicit zero image for every generator.
    pub fn zero(flavor: Flavor, sig: Arc<AlgebraSignature>) -> Self {
        let images = generators(flavor, &sig).map(|v| (v, Element::zero(flavor))).collect();
        DifferentialSpec { flavor, sig, images }
    }

    /// A differential with the given images. Generators without an image are
    /// left undefined; [`apply_d`] reports them when they are reached.
    pub fn new(
        flavor: Flavor,
        sig: Arc<AlgebraSignature>,
        images: impl IntoIterator<Item = (Var, Element)>,
    ) -> Result<Self> {
        let mut spec = DifferentialSpec { flavor, sig, images: BTreeMap::new() };
        for (v, e) in images {
            spec = spec.with_image(v, e)?;
        }
        Ok(spec)
    }

    /// Sets the image of a generator. The image must have the spec's flavor
    /// and only contain monomials admissible there.
    pub fn with_image(mut self, var: Var, image: Element) -> Result<Self> {
        if !self.is_generator(var) {
            return Err(Error::UnknownVariable(format!(
                "{} is not a generator of {}",
                self.sig.var_name(var),
                self.flavor
            )));
        }
        if image.flavor() != self.flavor {
            return Err(Error::FlavorMismatch { left: self.flavor, right: image.flavor() });
        }
        for m in image.terms().keys() {
            if let Some(reason) = m.signature_violation(&self.sig) {
                return Err(Error::InvalidSignature(reason));
            }
        }
        self.images.insert(var, image);
        Ok(self)
    }

    /// Parses and sets an image, see [`Element::parse`].
    pub fn with_image_str(self, var: &str, image: &str) -> Result<Self> {
        let v = self.sig.parse_var(var)?;
        let e = Element::parse(self.flavor, &self.sig, image)?;
        self.with_image(v, e)
    }

    pub fn flavor(&self) -> Flavor {
        self.flavor
    }

    pub fn sig(&self) -> &AlgebraSignature {
        &self.sig
    }

    pub fn sig_arc(&self) -> &Arc<AlgebraSignature> {
        &self.sig
    }

    pub fn image(&self, var: Var) -> Option<&Element> {
        self.images.get(&var)
    }

    pub fn images(&self) -> &BTreeMap<Var, Element> {
        &self.images
    }

    /// The generators that carry images in this flavor: every `q`, and
    /// every `p` when the flavor has p-variables.
    pub fn generators(&self) -> impl Iterator<Item = Var> + '_ {
        generators(self.flavor, &self.sig)
    }

    fn is_generator(&self, var: Var) -> bool {
        self.sig.contains(var)
            && match var {
                Var::Q(_) => true,
                Var::P(_) => self.flavor.has_p(),
                _ => false,
            }
    }

    /// Fills every missing generator image with zero.
    pub fn completed(mut self) -> Self {
        let missing: Vec<Var> = self.generators().filter(|v| !self.images.contains_key(v)).collect();
        for v in missing {
            self.images.insert(v, Element::zero(self.flavor));
        }
        self
    }
}

fn generators(flavor: Flavor, sig: &AlgebraSignature) -> impl Iterator<Item = Var> + '_ {
    let k = sig.orbits().len();
    let ps = if flavor.has_p() { k } else { 0 };
    (0..k).map(Var::Q).chain((0..ps).map(Var::P))
}

fn monomial_of(rank: usize, word: &[Var]) -> Monomial {
    word.iter().fold(Monomial::one(rank), |m, &v| m.with(v, 1))
}

/// Applies the differential: on a normal-ordered monomial `x_1 ... x_k`,
/// `sum_i (-1)^{|x_1 ... x_{i-1}|} x_1 ... x_{i-1} d(x_i) x_{i+1} ... x_k`,
/// with products taken in the flavor's algebra.
pub fn apply_d(spec: &DifferentialSpec, e: &Element) -> Result<Element> {
    if e.flavor() != spec.flavor {
        return Err(Error::FlavorMismatch { left: spec.flavor, right: e.flavor() });
    }
    let sig = spec.sig();
    let rank = sig.h2rank();
    let mut out = Element::zero(spec.flavor);
    for (m, c) in e.terms() {
        let word = m.word();
        let mut prefix_odd = false;
        for (i, &x) in word.iter().enumerate() {
            if matches!(x, Var::Q(_) | Var::P(_)) {
                let image = spec
                    .images
                    .get(&x)
                    .ok_or_else(|| Error::MissingImage(sig.var_name(x)))?;
                if !image.is_zero() {
                    let prefix = monomial_of(rank, &word[..i])
                        .with(Var::Hbar, m.hbar_power())
                        .with_group(m.group().clone());
                    let suffix = monomial_of(rank, &word[i + 1..]);
                    let coeff = if prefix_odd { -c.clone() } else { c.clone() };
                    let left = Element::from_monomial_unchecked(spec.flavor, prefix, coeff);
                    let right = Element::from_monomial_unchecked(spec.flavor, suffix, Rational::one());
                    let term = mul(sig, &mul(sig, &left, image)?, &right)?;
                    out = &out + &term;
                }
            }
            if sig.is_odd(x) {
                prefix_odd = !prefix_odd;
            }
        }
    }
    Ok(out)
}

/// Drops every monomial not admissible in `target`: the projections that
/// forget p-variables, hbar or marked points.
pub fn project(e: &Element, target: Flavor) -> Result<Element> {
    if !target.is_sub_flavor_of(e.flavor()) {
        return Err(Error::IncompatibleProjection { from: e.flavor(), to: target });
    }
    Ok(e.filter_into(target, |m| m.flavor_violation(target).is_none()))
}

/// The differential induced on the smaller algebra: images of the remaining
/// generators are projected, p-images are dropped when `target` has no p.
pub fn restrict_spec(spec: &DifferentialSpec, target: Flavor) -> Result<DifferentialSpec> {
    if !target.is_sub_flavor_of(spec.flavor) {
        return Err(Error::IncompatibleProjection { from: spec.flavor, to: target });
    }
    let mut images = BTreeMap::new();
    for (&v, e) in &spec.images {
        if matches!(v, Var::P(_)) && !target.has_p() {
            continue;
        }
        images.insert(v, project(e, target)?);
    }
    Ok(DifferentialSpec { flavor: target, sig: spec.sig.clone(), images })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::index::OrbitRecord;

    fn sig() -> Arc<AlgebraSignature> {
        let orbits = vec![
            OrbitRecord::new("a", 2, 1, Rational::one()),
            OrbitRecord::new("b", 3, 1, Rational::one()),
            OrbitRecord::new("c", 4, 1, Rational::one()),
        ];
        Arc::new(AlgebraSignature::new(2, vec![], orbits, vec![]).unwrap())
    }

    fn el(flavor: Flavor, s: &AlgebraSignature, text: &str) -> Element {
        Element::parse(flavor, s, text).unwrap()
    }

    #[test]
    fn unit_and_lookup() {
        let s = sig();
        let spec = DifferentialSpec::zero(Flavor::Ch, s.clone())
            .with_image_str("q:a", "1")
            .unwrap()
            .with_image_str("q:b", "q:a")
            .unwrap();
        assert!(apply_d(&spec, &Element::one(Flavor::Ch, &s)).unwrap().is_zero());
        assert_eq!(apply_d(&spec, &el(Flavor::Ch, &s, "q:b")).unwrap(), el(Flavor::Ch, &s, "q:a"));
    }

    #[test]
    fn leibniz_sign() {
        // q:a odd, q:c odd; d(q_a q_c) = q_c - q_a d(q_c)
        let s = sig();
        let spec = DifferentialSpec::zero(Flavor::Ch, s.clone())
            .with_image_str("q:a", "1")
            .unwrap()
            .with_image_str("q:c", "q:a*q:b")
            .unwrap();
        let d = apply_d(&spec, &el(Flavor::Ch, &s, "q:a*q:c")).unwrap();
        // the second term is -q_a q_a q_b = 0
        assert_eq!(d, el(Flavor::Ch, &s, "q:c"));
    }

    #[test]
    fn missing_image_is_an_error() {
        let s = sig();
        let spec = DifferentialSpec::new(Flavor::Ch, s.clone(), []).unwrap();
        let err = apply_d(&spec, &el(Flavor::Ch, &s, "q:a")).unwrap_err();
        assert!(matches!(err, Error::MissingImage(_)));
        assert!(apply_d(&spec, &el(Flavor::Ch, &s, "3")).unwrap().is_zero());
    }

    #[test]
    fn images_are_checked() {
        let s = sig();
        let spec = DifferentialSpec::zero(Flavor::Ch, s.clone());
        assert!(spec.clone().with_image_str("p:a", "1").is_err());
        assert!(spec.with_image(Var::Q(0), el(Flavor::Rsft, &s, "p:a")).is_err());
    }

    #[test]
    fn projections() {
        let s = sig();
        let e = el(Flavor::Rsft, &s, "q:a + q:b*p:c");
        assert_eq!(project(&e, Flavor::Ch).unwrap(), el(Flavor::Ch, &s, "q:a"));
        let e = el(Flavor::Sft, &s, "q:a + hbar");
        assert_eq!(project(&e, Flavor::Ch).unwrap(), el(Flavor::Ch, &s, "q:a"));
        assert!(project(&el(Flavor::Ch, &s, "q:a"), Flavor::Rsft).is_err());
    }

    #[test]
    fn restriction() {
        let s = sig();
        let spec = DifferentialSpec::zero(Flavor::Rsft, s.clone())
            .with_image_str("q:a", "1 - p:b*q:c")
            .unwrap()
            .with_image_str("p:c", "p:a*p:b")
            .unwrap();
        let ch = restrict_spec(&spec, Flavor::Ch).unwrap();
        assert_eq!(ch.image(Var::Q(0)), Some(&Element::one(Flavor::Ch, &s)));
        assert_eq!(ch.image(Var::P(2)), None);
        let zero = DifferentialSpec::zero(Flavor::Sft, s.clone());
        assert_eq!(restrict_spec(&zero, Flavor::Ch).unwrap(), DifferentialSpec::zero(Flavor::Ch, s));
    }
}
