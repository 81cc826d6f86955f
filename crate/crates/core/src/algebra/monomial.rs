use std::collections::BTreeMap;

use crate::algebra::{Flavor, GroupElement, Var};
use crate::index::AlgebraSignature;
use crate::Rational;

/// A normal-ordered monomial `e^A q^I p^J t^K hbar^g`.
///
/// Exponent maps are sparse and never contain zero exponents. The struct does
/// not know the signature, so the odd-exponent invariant (odd variables appear
/// at most once) is enforced by [`crate::Element`] constructors and the
/// products.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial {
    q: BTreeMap<usize, u32>,
    p: BTreeMap<usize, u32>,
    t: BTreeMap<usize, u32>,
    hbar: u32,
    group: GroupElement,
}

impl Monomial {
    pub fn one(h2rank: usize) -> Self {
        Monomial {
            q: BTreeMap::new(),
            p: BTreeMap::new(),
            t: BTreeMap::new(),
            hbar: 0,
            group: GroupElement::identity(h2rank),
        }
    }

    pub fn var(h2rank: usize, var: Var) -> Self {
        Monomial::one(h2rank).with(var, 1)
    }

    pub fn with_group(mut self, group: GroupElement) -> Self {
        self.group = group;
        self
    }

    /// Multiplies in `var^exp` by raising an exponent, ignoring ordering
    /// signs. Only meaningful while building a monomial in normal order.
    pub fn with(mut self, var: Var, exp: u32) -> Self {
        if exp == 0 {
            return self;
        }
        match var {
            Var::Hbar => self.hbar += exp,
            v => *self.block_mut(v).entry(index(v)).or_insert(0) += exp,
        }
        self
    }

    pub fn without(mut self, var: Var, exp: u32) -> Self {
        match var {
            Var::Hbar => self.hbar -= exp,
            v => {
                let block = self.block_mut(v);
                let e = block.get_mut(&index(v)).expect("exponent present");
                *e -= exp;
                if *e == 0 {
                    block.remove(&index(v));
                }
            }
        }
        self
    }

    fn block_mut(&mut self, var: Var) -> &mut BTreeMap<usize, u32> {
        match var {
            Var::Q(_) => &mut self.q,
            Var::P(_) => &mut self.p,
            Var::T(_) => &mut self.t,
            Var::Hbar => unreachable!("hbar is not stored in a block"),
        }
    }

    pub fn exponent(&self, var: Var) -> u32 {
        match var {
            Var::Q(i) => self.q.get(&i).copied().unwrap_or(0),
            Var::P(i) => self.p.get(&i).copied().unwrap_or(0),
            Var::T(j) => self.t.get(&j).copied().unwrap_or(0),
            Var::Hbar => self.hbar,
        }
    }

    pub fn q_exponents(&self) -> &BTreeMap<usize, u32> {
        &self.q
    }

    pub fn p_exponents(&self) -> &BTreeMap<usize, u32> {
        &self.p
    }

    pub fn t_exponents(&self) -> &BTreeMap<usize, u32> {
        &self.t
    }

    pub fn hbar_power(&self) -> u32 {
        self.hbar
    }

    pub fn group(&self) -> &GroupElement {
        &self.group
    }

    pub fn is_one(&self) -> bool {
        self.q.is_empty()
            && self.p.is_empty()
            && self.t.is_empty()
            && self.hbar == 0
            && self.group.is_identity()
    }

    /// Variables with exponents, in normal order (hbar excluded).
    pub fn factors(&self) -> impl Iterator<Item = (Var, u32)> + '_ {
        self.q
            .iter()
            .map(|(&i, &e)| (Var::Q(i), e))
            .chain(self.p.iter().map(|(&i, &e)| (Var::P(i), e)))
            .chain(self.t.iter().map(|(&j, &e)| (Var::T(j), e)))
    }

    /// The normal-ordered word with exponents expanded (hbar excluded).
    pub fn word(&self) -> Vec<Var> {
        self.factors()
            .flat_map(|(v, e)| std::iter::repeat_n(v, e as usize))
            .collect()
    }

    pub fn p_weight(&self) -> u32 {
        self.p.values().sum()
    }

    pub fn t_weight(&self) -> u32 {
        self.t.values().sum()
    }

    pub fn q_weight(&self) -> u32 {
        self.q.values().sum()
    }

    /// Number of q, p and t factors.
    pub fn word_length(&self) -> u32 {
        self.q_weight() + self.p_weight() + self.t_weight()
    }

    /// Total period of the orbits of all q- and p-factors.
    pub fn action(&self, sig: &AlgebraSignature) -> Rational {
        self.q
            .iter()
            .chain(self.p.iter())
            .map(|(&i, &e)| sig.orbit(i).period.clone() * Rational::from_integer(e.into()))
            .sum()
    }

    pub fn degree(&self, sig: &AlgebraSignature) -> i64 {
        let vars: i64 = self
            .factors()
            .map(|(v, e)| sig.degree_unchecked(v) * i64::from(e))
            .sum();
        vars + i64::from(self.hbar) * sig.hbar_degree() + sig.group_degree(&self.group)
    }

    pub fn is_odd(&self, sig: &AlgebraSignature) -> bool {
        self.degree(sig).rem_euclid(2) == 1
    }

    /// Why the monomial is not admissible in `flavor`, if it is not.
    pub fn flavor_violation(&self, flavor: Flavor) -> Option<&'static str> {
        if !flavor.has_p() && !self.p.is_empty() {
            return Some("p-variable outside rational/full SFT");
        }
        if !flavor.has_hbar() && self.hbar > 0 {
            return Some("hbar outside full SFT");
        }
        if !flavor.is_marked() && !self.t.is_empty() {
            return Some("t-variable in a flavor without marked points");
        }
        None
    }

    /// Why the monomial violates a signature invariant (unknown index,
    /// repeated odd variable, wrong group rank), if it does.
    pub fn signature_violation(&self, sig: &AlgebraSignature) -> Option<String> {
        if self.group.rank() != sig.h2rank() {
            return Some(format!(
                "group element has rank {}, expected {}",
                self.group.rank(),
                sig.h2rank()
            ));
        }
        for (v, e) in self.factors() {
            if !sig.contains(v) {
                return Some(format!("unknown variable {v:?}"));
            }
            if e > 1 && sig.is_odd(v) {
                return Some(format!("odd variable {} with exponent {e}", sig.var_name(v)));
            }
        }
        None
    }

    /// Splits into the q-, p- and t-blocks (the group element and hbar are
    /// dropped).
    pub(crate) fn blocks(&self) -> (Monomial, Monomial, Monomial) {
        let rank = self.group.rank();
        let mut q = Monomial::one(rank);
        q.q = self.q.clone();
        let mut p = Monomial::one(rank);
        p.p = self.p.clone();
        let mut t = Monomial::one(rank);
        t.t = self.t.clone();
        (q, p, t)
    }

    /// Merges exponents, adds group elements and hbar powers. No signs.
    pub(crate) fn merge(&self, other: &Monomial) -> Monomial {
        let mut out = self.clone();
        for (v, e) in other.factors() {
            out = out.with(v, e);
        }
        out.hbar += other.hbar;
        out.group = &self.group + &other.group;
        out
    }
}

fn index(var: Var) -> usize {
    match var {
        Var::Q(i) | Var::P(i) | Var::T(i) => i,
        Var::Hbar => 0,
    }
}

/// Weight used to make formal inverses converge: total p-count in rSFT,
/// p-count plus hbar power in full SFT, and total t-count in the marked
/// flavors. Contact homology has no filtration and always gives 0.
pub fn filtration_weight(m: &Monomial, flavor: Flavor) -> u32 {
    match flavor {
        Flavor::Ch => 0,
        Flavor::Rsft => m.p_weight(),
        Flavor::Sft => m.p_weight() + m.hbar_power(),
        Flavor::ChStar | Flavor::RsftStar | Flavor::SftStar => m.t_weight(),
    }
}
