use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::algebra::{Element, Flavor, GroupElement, Monomial, TruncationPolicy, Var};
use crate::differential::{apply_d, DifferentialSpec};
use crate::error::Result;
use crate::index::AlgebraSignature;
use crate::linalg::Eliminator;
use crate::theorem::PrimitiveCertificate;
use crate::Rational;

pub const SEMIDECISION_CAVEAT: &str = "the search is a semidecision: not finding a primitive within \
     the bounds does not show that the unit is not exact";

/// Finite search space for primitives.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchBounds {
    /// Variables allowed in basis monomials; `None` allows every variable
    /// of the flavor.
    pub generator_subset: Option<Vec<Var>>,
    /// Bound on the number of q-, p- and t-factors.
    pub max_word_length: u32,
    pub max_action: Option<Rational>,
    /// Group classes range over `|A_i| <= group_radius`.
    pub group_radius: u32,
    /// Power-series flavors: bound on every filtration weight, used both for
    /// basis monomials and as the truncation policy of the solve.
    pub weight: u32,
}

impl Default for SearchBounds {
    fn default() -> Self {
        SearchBounds { generator_subset: None, max_word_length: 4, max_action: None, group_radius: 0, weight: 5 }
    }
}

impl SearchBounds {
    pub fn with_word_length(max_word_length: u32) -> Self {
        SearchBounds { max_word_length, ..Self::default() }
    }

    pub fn policy(&self) -> TruncationPolicy {
        TruncationPolicy::uniform(self.weight)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum SearchOutcome {
    Found(Box<PrimitiveCertificate>),
    NotFound { basis_size: usize, reason: String },
}

impl SearchOutcome {
    pub fn certificate(&self) -> Option<&PrimitiveCertificate> {
        match self {
            SearchOutcome::Found(c) => Some(c),
            SearchOutcome::NotFound { .. } => None,
        }
    }
}

/// Monomials of degree 1 within the bounds, shortest words first and then
/// in monomial order.
pub fn degree_one_basis(spec: &DifferentialSpec, bounds: &SearchBounds) -> Vec<Monomial> {
    let sig = spec.sig();
    let flavor = spec.flavor();
    let vars: Vec<Var> = match &bounds.generator_subset {
        Some(subset) => subset.clone(),
        None => sig.variables().collect(),
    };
    let mut vars: Vec<Var> = vars
        .into_iter()
        .filter(|&v| sig.contains(v) && Monomial::var(sig.h2rank(), v).flavor_violation(flavor).is_none())
        .collect();
    if flavor.has_hbar() {
        vars.push(Var::Hbar);
    }
    vars.sort();
    vars.dedup();

    let groups = group_box(sig.h2rank(), bounds.group_radius);
    let mut out = Vec::new();
    let mut word = Walk { sig, flavor, bounds, vars: &vars, groups: &groups, out: &mut out };
    word.go(0, Monomial::one(sig.h2rank()), Rational::zero());
    out.sort_by(|a, b| (a.word_length(), a).cmp(&(b.word_length(), b)));
    out
}

struct Walk<'a> {
    sig: &'a AlgebraSignature,
    flavor: Flavor,
    bounds: &'a SearchBounds,
    vars: &'a [Var],
    groups: &'a [GroupElement],
    out: &'a mut Vec<Monomial>,
}

impl Walk<'_> {
    fn fits(&self, m: &Monomial, action: &Rational) -> bool {
        let w = self.bounds.weight;
        let p = if self.flavor.is_weyl() { m.p_weight() + m.hbar_power() } else { m.p_weight() };
        m.word_length() <= self.bounds.max_word_length
            && p <= w
            && m.hbar_power() <= w
            && m.t_weight() <= w
            && self.bounds.max_action.as_ref().is_none_or(|cap| action <= cap)
    }

    fn go(&mut self, i: usize, m: Monomial, action: Rational) {
        if i == self.vars.len() {
            let d = m.degree(self.sig);
            for g in self.groups {
                if d + self.sig.group_degree(g) == 1 {
                    self.out.push(m.clone().with_group(g.clone()));
                }
            }
            return;
        }
        let v = self.vars[i];
        let period = match v {
            Var::Q(j) | Var::P(j) => self.sig.orbit(j).period.clone(),
            _ => Rational::zero(),
        };
        let top = if v != Var::Hbar && self.sig.is_odd(v) { 1 } else { u32::MAX };
        let mut m = m;
        let mut action = action;
        let mut e = 0;
        loop {
            self.go(i + 1, m.clone(), action.clone());
            if e == top {
                break;
            }
            e += 1;
            m = m.with(v, 1);
            action += &period;
            if !self.fits(&m, &action) {
                break;
            }
        }
    }
}

fn group_box(rank: usize, radius: u32) -> Vec<GroupElement> {
    let r = i64::from(radius);
    let mut out: Vec<Vec<i64>> = vec![Vec::new()];
    for _ in 0..rank {
        out = out
            .into_iter()
            .flat_map(|v| (-r..=r).map(move |a| [v.clone(), vec![a]].concat()))
            .collect();
    }
    out.into_iter().map(GroupElement::new).collect()
}

/// Looks for `a` with `d a = 1` among the combinations of the degree-1
/// basis, by exact elimination over the rationals. In the power-series
/// flavors the equation is solved modulo the truncation ideal of
/// `bounds.policy()`.
///
/// Pivots are taken in basis order and free coefficients are set to zero,
/// so the result is deterministic and prefers short words. A `NotFound`
/// outcome only speaks about the bounds, see [`SEMIDECISION_CAVEAT`].
pub fn find_unit_primitive(spec: &DifferentialSpec, bounds: &SearchBounds) -> Result<SearchOutcome> {
    let sig = spec.sig();
    let flavor = spec.flavor();
    let policy = bounds.policy();
    let basis = degree_one_basis(spec, bounds);
    if basis.is_empty() {
        return Ok(SearchOutcome::NotFound { basis_size: 0, reason: "the degree-1 basis is empty".into() });
    }
    let mut elim: Eliminator<Monomial> = Eliminator::new();
    for m in &basis {
        let x = Element::from_monomial_unchecked(flavor, m.clone(), Rational::one());
        let mut dx = apply_d(spec, &x)?;
        if flavor.is_power_series() {
            dx = policy.reduce(&dx);
        }
        elim.push(dx.into_terms());
    }
    let rhs = BTreeMap::from([(Monomial::one(sig.h2rank()), Rational::one())]);
    let Some(solution) = elim.solve(&rhs) else {
        return Ok(SearchOutcome::NotFound {
            basis_size: basis.len(),
            reason: format!("1 is not in the image of d on the {} basis monomials", basis.len()),
        });
    };
    let mut element = Element::zero(flavor);
    for (m, c) in basis.into_iter().zip(solution) {
        element.add_term(m, c);
    }
    let cert = PrimitiveCertificate::checked(element, spec, Some(&policy))?;
    Ok(SearchOutcome::Found(Box::new(cert)))
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::index::OrbitRecord;

    fn sig(cz: &[i64]) -> Arc<AlgebraSignature> {
        let orbits = cz
            .iter()
            .enumerate()
            .map(|(i, &c)| OrbitRecord::new(format!("o{i}"), c, 1, Rational::one()))
            .collect();
        Arc::new(AlgebraSignature::new(2, vec![], orbits, vec![]).unwrap())
    }

    #[test]
    fn direct_solve() {
        // |q_o0| = 1, |q_o1| = 2
        let s = sig(&[2, 3]);
        let spec = DifferentialSpec::zero(Flavor::Ch, s.clone())
            .with_image_str("q:o0", "1")
            .unwrap()
            .with_image_str("q:o1", "q:o0")
            .unwrap();
        let found = find_unit_primitive(&spec, &SearchBounds::with_word_length(3)).unwrap();
        let cert = found.certificate().unwrap();
        assert_eq!(cert.element, Element::parse(Flavor::Ch, &s, "q:o0").unwrap());
        assert!(cert.is_exact());
    }

    #[test]
    fn unit_outside_the_image() {
        let s = sig(&[2, 3]);
        let spec = DifferentialSpec::zero(Flavor::Ch, s).with_image_str("q:o1", "q:o0").unwrap();
        let found = find_unit_primitive(&spec, &SearchBounds::with_word_length(4)).unwrap();
        assert!(matches!(found, SearchOutcome::NotFound { basis_size, .. } if basis_size > 0));
    }

    #[test]
    fn even_generators_give_an_empty_basis() {
        let s = sig(&[3, 5, 7]);
        let spec = DifferentialSpec::zero(Flavor::Ch, s);
        for len in 0..=6 {
            assert!(degree_one_basis(&spec, &SearchBounds::with_word_length(len)).is_empty());
        }
    }

    #[test]
    fn basis_order_is_short_words_first() {
        let s = sig(&[2, 1, 1]);
        let spec = DifferentialSpec::zero(Flavor::Ch, s);
        let basis = degree_one_basis(&spec, &SearchBounds::with_word_length(3));
        let lengths: Vec<u32> = basis.iter().map(Monomial::word_length).collect();
        assert!(lengths.windows(2).all(|w| w[0] <= w[1]));
        assert_eq!(basis[0], Monomial::var(0, Var::Q(0)));
        // q_o0 q_o1^a q_o2^b with a + b <= 2, the last two in degree 0
        assert_eq!(basis.len(), 6);
    }
}
