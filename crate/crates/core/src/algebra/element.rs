use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_traits::{One, Signed, Zero};

use crate::algebra::{Flavor, Monomial, Var};
use crate::error::{Error, Result};
use crate::index::AlgebraSignature;
use crate::Rational;

/// A finite exact-rational linear combination of normal-ordered monomials in
/// one of the six algebras. Zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Element {
    flavor: Flavor,
    terms: BTreeMap<Monomial, Rational>,
}

impl Element {
    pub fn zero(flavor: Flavor) -> Self {
        Element { flavor, terms: BTreeMap::new() }
    }

    pub fn one(flavor: Flavor, sig: &AlgebraSignature) -> Self {
        Element::from_monomial_unchecked(flavor, Monomial::one(sig.h2rank()), Rational::one())
    }

    pub fn constant(flavor: Flavor, sig: &AlgebraSignature, c: Rational) -> Self {
        Element::from_monomial_unchecked(flavor, Monomial::one(sig.h2rank()), c)
    }

    /// A single generator, checked against the flavor.
    pub fn var(flavor: Flavor, sig: &AlgebraSignature, var: Var) -> Result<Self> {
        if !sig.contains(var) {
            return Err(Error::UnknownVariable(format!("{var:?}")));
        }
        Element::from_terms(flavor, sig, [(Monomial::var(sig.h2rank(), var), Rational::one())])
    }

    /// Builds an element from terms, validating every monomial against the
    /// signature and the flavor. Repeated monomials are summed.
    pub fn from_terms(
        flavor: Flavor,
        sig: &AlgebraSignature,
        terms: impl IntoIterator<Item = (Monomial, Rational)>,
    ) -> Result<Self> {
        let mut out = Element::zero(flavor);
        for (m, c) in terms {
            if let Some(reason) = m.flavor_violation(flavor) {
                return Err(Error::Inadmissible { flavor, reason: reason.to_string() });
            }
            if let Some(reason) = m.signature_violation(sig) {
                return Err(Error::Inadmissible { flavor, reason });
            }
            out.add_term(m, c);
        }
        Ok(out)
    }

    pub(crate) fn from_monomial_unchecked(flavor: Flavor, m: Monomial, c: Rational) -> Self {
        let mut out = Element::zero(flavor);
        out.add_term(m, c);
        out
    }

    pub fn flavor(&self) -> Flavor {
        self.flavor
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, Rational> {
        &self.terms
    }

    pub fn into_terms(self) -> BTreeMap<Monomial, Rational> {
        self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    /// True when the element equals `c * 1`.
    pub fn is_constant(&self, c: &Rational) -> bool {
        if c.is_zero() {
            return self.is_zero();
        }
        self.terms.len() == 1
            && self.terms.iter().all(|(m, v)| m.is_one() && v == c)
    }

    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn scale(&self, c: &Rational) -> Element {
        if c.is_zero() {
            return Element::zero(self.flavor);
        }
        Element {
            flavor: self.flavor,
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    /// Keeps the monomials satisfying `keep`, relabelled as `flavor`.
    pub(crate) fn filter_into(&self, flavor: Flavor, keep: impl Fn(&Monomial) -> bool) -> Element {
        Element {
            flavor,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| keep(m))
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// The same terms seen in a larger flavor (e.g. CH inside rSFT).
    pub fn embed(&self, target: Flavor) -> Result<Element> {
        if !self.flavor.is_sub_flavor_of(target) {
            return Err(Error::IncompatibleLift { from: self.flavor, to: target });
        }
        Ok(Element { flavor: target, terms: self.terms.clone() })
    }

    /// Degree of a homogeneous element, `None` for zero or mixed degrees.
    pub fn degree(&self, sig: &AlgebraSignature) -> Option<i64> {
        let mut degrees = self.terms.keys().map(|m| m.degree(sig));
        let first = degrees.next()?;
        degrees.all(|d| d == first).then_some(first)
    }

    pub fn is_homogeneous(&self, sig: &AlgebraSignature) -> bool {
        self.is_zero() || self.degree(sig).is_some()
    }

    pub fn display<'a>(&'a self, sig: &'a AlgebraSignature) -> ElementDisplay<'a> {
        ElementDisplay { element: self, sig }
    }

    fn check_same_flavor(&self, other: &Element) {
        assert_eq!(
            self.flavor, other.flavor,
            "adding elements of different flavors"
        );
    }
}

impl Add for &Element {
    type Output = Element;

    fn add(self, rhs: &Element) -> Element {
        self.check_same_flavor(rhs);
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &Element {
    type Output = Element;

    fn sub(self, rhs: &Element) -> Element {
        self.check_same_flavor(rhs);
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl Neg for &Element {
    type Output = Element;

    fn neg(self) -> Element {
        Element {
            flavor: self.flavor,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect(),
        }
    }
}

impl Add for Element {
    type Output = Element;

    fn add(self, rhs: Element) -> Element {
        &self + &rhs
    }
}

impl Sub for Element {
    type Output = Element;

    fn sub(self, rhs: Element) -> Element {
        &self - &rhs
    }
}

impl Neg for Element {
    type Output = Element;

    fn neg(self) -> Element {
        -&self
    }
}

/// Human-readable rendering, e.g. `1 - q:c*p:b + 1/2*hbar*q:e^2`.
pub struct ElementDisplay<'a> {
    element: &'a Element,
    sig: &'a AlgebraSignature,
}

impl fmt::Display for ElementDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.element.is_zero() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.element.terms.iter().enumerate() {
            let negative = c.is_negative();
            if i == 0 {
                if negative {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if negative { " - " } else { " + " })?;
            }
            let abs = c.abs();
            let mut factors = Vec::new();
            if !m.group().is_identity() {
                factors.push(m.group().to_string());
            }
            for (v, e) in m.factors() {
                let name = self.sig.var_name(v);
                factors.push(if e == 1 { name } else { format!("{name}^{e}") });
            }
            match m.hbar_power() {
                0 => {}
                1 => factors.push("hbar".into()),
                h => factors.push(format!("hbar^{h}")),
            }
            if factors.is_empty() {
                write!(f, "{abs}")?;
            } else {
                if !abs.is_one() {
                    write!(f, "{abs}*")?;
                }
                f.write_str(&factors.join("*"))?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::index::OrbitRecord;

    fn sig() -> AlgebraSignature {
        let orbits = vec![
            OrbitRecord::new("a", 2, 1, Rational::one()),
            OrbitRecord::new("b", 3, 1, Rational::one()),
        ];
        AlgebraSignature::new(2, vec![], orbits, vec![]).unwrap()
    }

    #[test]
    fn cancellation_removes_terms() {
        let s = sig();
        let q = Element::var(Flavor::Ch, &s, Var::Q(0)).unwrap();
        assert!((&q - &q).is_zero());
        let two = &q + &q;
        assert_eq!(two.coefficient(&Monomial::var(0, Var::Q(0))), Rational::from_integer(2.into()));
    }

    #[test]
    fn flavor_shape_is_enforced() {
        let s = sig();
        assert!(Element::var(Flavor::Ch, &s, Var::P(0)).is_err());
        assert!(Element::var(Flavor::Rsft, &s, Var::Hbar).is_err());
        assert!(Element::var(Flavor::Sft, &s, Var::Hbar).is_ok());
        // q:a is odd, so its square is not a valid monomial
        let sq = Monomial::var(0, Var::Q(0)).with(Var::Q(0), 1);
        assert!(Element::from_terms(Flavor::Ch, &s, [(sq, Rational::one())]).is_err());
    }

    #[test]
    fn display() {
        let s = sig();
        let e = Element::from_terms(
            Flavor::Sft,
            &s,
            [
                (Monomial::one(0), Rational::one()),
                (Monomial::var(0, Var::Q(1)).with(Var::P(0), 1), -Rational::one()),
                (Monomial::var(0, Var::Q(1)).with(Var::Hbar, 2), Rational::new(1.into(), 2.into())),
            ],
        )
        .unwrap();
        assert_eq!(e.display(&s).to_string(), "1 + 1/2*q:b*hbar^2 - q:b*p:a");
    }
}
