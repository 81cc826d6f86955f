//! Built-in algebraic models: a toy overtwisted family, a toy tight family
//! and seeded random layered differentials.
//!
//! These are algebraic models consistent with every structural rule, not
//! computations of holomorphic curves.

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{mul_weyl, Element, Flavor, GroupElement, Monomial, TruncationPolicy, Var};
use crate::differential::{restrict_spec, DifferentialSpec};
use crate::index::{AlgebraSignature, OrbitRecord, TFormRecord};
use crate::theorem::SearchBounds;
use crate::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Expected {
    Vanishes,
    PersistsWithinBounds,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CorpusEntry {
    pub name: String,
    pub sig: Arc<AlgebraSignature>,
    pub specs: BTreeMap<Flavor, DifferentialSpec>,
    /// `None` for random entries, whose verdict is not known in advance.
    pub expected: Option<Expected>,
    pub notes: String,
    /// Bounds under which `expected` is reproduced.
    pub bounds: SearchBounds,
    pub policy: TruncationPolicy,
}

fn int(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

fn family(top: &DifferentialSpec) -> BTreeMap<Flavor, DifferentialSpec> {
    Flavor::ALL
        .into_iter()
        .filter(|f| f.is_sub_flavor_of(top.flavor()))
        .map(|f| (f, restrict_spec(top, f).expect("sub-flavor")))
        .collect()
}

/// A family in which `q_a` (with `|q_a| = 1`) is a primitive of the unit in
/// contact homology. The larger theories add terms `q_c p_b`, `hbar q_e` and
/// `t_1 q_f` to `d q_a`, together with the p-images that make the full SFT
/// differential respect the Weyl relations.
pub fn toy_overtwisted() -> CorpusEntry {
    let orbits = vec![
        OrbitRecord::new("a", 2, 1, int(4)),
        OrbitRecord::new("b", 3, 1, int(2)),
        OrbitRecord::new("c", 5, 2, int(3)),
        OrbitRecord::new("e", 3, 1, int(1)),
        OrbitRecord::new("f", 3, 1, int(1)),
    ];
    let sig = Arc::new(
        AlgebraSignature::new(2, vec![], orbits, vec![TFormRecord::new("t1", 0)]).expect("valid signature"),
    );
    let top = DifferentialSpec::zero(Flavor::SftStar, sig.clone())
        .with_image_str("q:a", "1 - q:c*p:b + hbar*q:e - t:t1*q:f")
        .and_then(|s| s.with_image_str("q:b", "q:c*p:a"))
        .and_then(|s| s.with_image_str("p:c", "-2*p:a*p:b"))
        .and_then(|s| s.with_image_str("p:e", "hbar*p:a"))
        .and_then(|s| s.with_image_str("p:f", "-t:t1*p:a"))
        .expect("valid images");
    CorpusEntry {
        name: "toy-overtwisted".into(),
        sig,
        specs: family(&top),
        expected: Some(Expected::Vanishes),
        notes: "algebraic model of an overtwisted contact manifold: the unit is exact in every theory".into(),
        bounds: SearchBounds::with_word_length(3),
        policy: TruncationPolicy::uniform(5),
    }
}

/// Generators in even degrees only (Conley-Zehnder indices 3, 5, 7) with the
/// zero differential: there are no degree-1 monomials at all.
pub fn toy_tight() -> CorpusEntry {
    let orbits = vec![
        OrbitRecord::new("a", 3, 1, int(1)),
        OrbitRecord::new("b", 5, 1, int(2)),
        OrbitRecord::new("c", 7, 2, int(3)),
    ];
    let sig = Arc::new(
        AlgebraSignature::new(2, vec![], orbits, vec![TFormRecord::new("t1", 2)]).expect("valid signature"),
    );
    let top = DifferentialSpec::zero(Flavor::SftStar, sig.clone());
    CorpusEntry {
        name: "toy-tight".into(),
        sig,
        specs: family(&top),
        expected: Some(Expected::PersistsWithinBounds),
        notes: "ellipsoid-style model: every generator has even degree, so the unit is never exact".into(),
        bounds: SearchBounds::with_word_length(6),
        policy: TruncationPolicy::uniform(5),
    }
}

/// Size parameters of [`random_layered_spec`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LayeredSizes {
    /// Orbits whose q-variables are closed.
    pub closed: usize,
    /// Orbits whose p-variables are closed.
    pub open: usize,
    pub tforms: usize,
    /// Number of terms of the generating element.
    pub terms: usize,
}

impl Default for LayeredSizes {
    fn default() -> Self {
        LayeredSizes { closed: 2, open: 2, tforms: 1, terms: 3 }
    }
}

/// A random family of differentials, deterministic in `seed`.
///
/// Orbits are split into a closed layer `y` and an open layer `x`. An odd
/// element `H` of degree `2n - 7` is drawn from monomials with at least one
/// `p_x`, any number of `q_y`, and possibly `hbar`, `t` and a group class.
/// The full SFT differential with marked points is `d z = hbar^{-1} [H, z]`
/// (graded commutator); the other flavors are its restrictions. Since `H`
/// lives in a supercommutative subalgebra on which `d` vanishes, `d^2 = 0`,
/// the images respect the Weyl relations, and every term of a p-image
/// contains a p-variable. Periods are 1 on the closed layer and 10 on the
/// open one, so every term also has positive energy.
pub fn random_layered_spec(seed: u64, sizes: LayeredSizes) -> CorpusEntry {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = 2;
    loop {
        let c1 = vec![rng.gen_range(0..=1)];
        let mut orbits = Vec::new();
        for i in 0..sizes.closed {
            orbits.push(OrbitRecord::new(format!("y{i}"), rng.gen_range(1..=3), rng.gen_range(1..=3), int(1)));
        }
        for i in 0..sizes.open {
            orbits.push(OrbitRecord::new(format!("x{i}"), rng.gen_range(1..=3), rng.gen_range(1..=3), int(10)));
        }
        let tforms = (0..sizes.tforms).map(|j| TFormRecord::new(format!("t{j}"), rng.gen_range(0..=3))).collect();
        let sig = Arc::new(AlgebraSignature::new(n, c1, orbits, tforms).expect("valid signature"));

        let candidates = hamiltonian_monomials(&sig, sizes.closed);
        if candidates.is_empty() {
            continue;
        }
        // every other term is drawn without hbar and t, so that the smaller
        // flavors see a nonzero differential more often
        let plain: Vec<&Monomial> = candidates.iter().filter(|m| m.hbar_power() == 0 && m.t_weight() == 0).collect();
        let mut h = Element::zero(Flavor::SftStar);
        for i in 0..sizes.terms {
            let m = match plain.choose(&mut rng) {
                Some(m) if i % 2 == 0 => *m,
                _ => candidates.choose(&mut rng).expect("nonempty"),
            };
            let num: i64 = *[-3, -2, -1, 1, 2, 3].choose(&mut rng).expect("nonempty");
            let den: i64 = rng.gen_range(1..=2);
            h.add_term(m.clone(), Rational::new(num.into(), den.into()));
        }
        let top = inner_differential(&sig, &h);
        return CorpusEntry {
            name: format!("layered-{seed}"),
            sig,
            specs: family(&top),
            expected: None,
            notes: format!("random layered differential generated from seed {seed}"),
            bounds: SearchBounds::with_word_length(3),
            policy: TruncationPolicy::uniform(3),
        };
    }
}

/// Candidate monomials for the generating element: degree `2n - 7`, one or
/// two p-variables of the open layer, at most two q-variables of the closed
/// layer, `hbar^{0,1}`, at most one `t`, group classes in `{-1, 0, 1}`.
fn hamiltonian_monomials(sig: &AlgebraSignature, closed: usize) -> Vec<Monomial> {
    let k = sig.orbits().len();
    let target = 2 * sig.n() - 7;
    let rank = sig.h2rank();
    let ps: Vec<Var> = (closed..k).map(Var::P).collect();
    let qs: Vec<Var> = (0..closed).map(Var::Q).collect();
    let mut p_words: Vec<Vec<Var>> = Vec::new();
    for (i, &a) in ps.iter().enumerate() {
        p_words.push(vec![a]);
        for &b in &ps[i..] {
            p_words.push(vec![a, b]);
        }
    }
    let mut q_words: Vec<Vec<Var>> = vec![vec![]];
    for (i, &a) in qs.iter().enumerate() {
        q_words.push(vec![a]);
        for &b in &qs[i..] {
            q_words.push(vec![a, b]);
        }
    }
    let mut extras: Vec<Vec<Var>> = vec![vec![], vec![Var::Hbar]];
    for j in 0..sig.tforms().len() {
        extras.push(vec![Var::T(j)]);
        extras.push(vec![Var::T(j), Var::Hbar]);
    }
    let mut out = Vec::new();
    for pw in &p_words {
        for qw in &q_words {
            for ex in &extras {
                for a in -1..=1 {
                    let group = GroupElement::new(vec![a; rank]);
                    let m = pw
                        .iter()
                        .chain(qw)
                        .chain(ex)
                        .fold(Monomial::one(rank), |m, &v| m.with(v, 1))
                        .with_group(group);
                    let repeated_odd = m.factors().any(|(v, e)| e > 1 && sig.is_odd(v));
                    if !repeated_odd && m.degree(sig) == target {
                        out.push(m);
                    }
                }
            }
        }
    }
    out.sort();
    out.dedup();
    out
}

/// `d z = hbar^{-1} (H z - (-1)^{|H||z|} z H)` on every generator.
fn inner_differential(sig: &Arc<AlgebraSignature>, h: &Element) -> DifferentialSpec {
    let flavor = Flavor::SftStar;
    let h_odd = h.terms().keys().next().is_some_and(|m| m.is_odd(sig));
    let mut spec = DifferentialSpec::zero(flavor, sig.clone());
    let gens: Vec<Var> = spec.generators().collect();
    for z in gens {
        let ez = Element::var(flavor, sig, z).expect("generator");
        let hz = mul_weyl(sig, h, &ez).expect("weyl flavor");
        let zh = mul_weyl(sig, &ez, h).expect("weyl flavor");
        let bracket = if h_odd && sig.is_odd(z) { &hz + &zh } else { &hz - &zh };
        let mut image = Element::zero(flavor);
        for (m, c) in bracket.into_terms() {
            image.add_term(m.without(Var::Hbar, 1), c);
        }
        spec = spec.with_image(z, image).expect("valid image");
    }
    spec
}

/// The built-in corpus: both toy families and two layered entries.
pub fn builtin() -> Vec<CorpusEntry> {
    vec![
        toy_overtwisted(),
        toy_tight(),
        random_layered_spec(1, LayeredSizes::default()),
        random_layered_spec(2, LayeredSizes::default()),
    ]
}

pub fn by_name(name: &str) -> Option<CorpusEntry> {
    if let Some(seed) = name.strip_prefix("layered-") {
        return seed.parse().ok().map(|s| random_layered_spec(s, LayeredSizes::default()));
    }
    builtin().into_iter().find(|e| e.name == name)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::differential::{check_d_squared, validate_structure, SpecStatus};

    #[test]
    fn toy_entries_are_valid() {
        for entry in [toy_overtwisted(), toy_tight()] {
            assert_eq!(entry.specs.len(), 6);
            for spec in entry.specs.values() {
                let report = validate_structure(spec, true);
                assert_eq!(report.status, SpecStatus::Valid, "{} {}: {:?}", entry.name, spec.flavor(), report.violations);
                assert!(check_d_squared(spec).unwrap().passed());
            }
        }
    }

    #[test]
    fn toy_images() {
        let entry = toy_overtwisted();
        let s = &entry.sig;
        let ch = &entry.specs[&Flavor::Ch];
        assert_eq!(ch.image(Var::Q(0)), Some(&Element::one(Flavor::Ch, s)));
        let chs = &entry.specs[&Flavor::ChStar];
        assert_eq!(chs.image(Var::Q(0)), Some(&Element::parse(Flavor::ChStar, s, "1 - t:t1*q:f").unwrap()));
        let rsft = &entry.specs[&Flavor::Rsft];
        assert_eq!(rsft.image(Var::Q(0)), Some(&Element::parse(Flavor::Rsft, s, "1 - q:c*p:b").unwrap()));
    }

    #[test]
    fn weyl_inconsistent_variant_is_formal() {
        let entry = toy_overtwisted();
        let sft = entry.specs[&Flavor::Sft].clone().with_image_str("p:e", "2*hbar*p:a").unwrap();
        assert_eq!(validate_structure(&sft, false).status, SpecStatus::Formal);
    }

    #[test]
    fn layered_specs_are_valid_and_deterministic() {
        for seed in 0..20 {
            let entry = random_layered_spec(seed, LayeredSizes::default());
            assert_eq!(entry, random_layered_spec(seed, LayeredSizes::default()));
            for spec in entry.specs.values() {
                let report = validate_structure(spec, true);
                assert_eq!(report.status, SpecStatus::Valid, "seed {seed} {}: {:?}", spec.flavor(), report.violations);
                assert!(check_d_squared(spec).unwrap().passed(), "seed {seed}");
            }
        }
        assert_ne!(random_layered_spec(1, LayeredSizes::default()), random_layered_spec(2, LayeredSizes::default()));
    }
}
