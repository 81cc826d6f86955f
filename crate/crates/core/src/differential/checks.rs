use std::fmt;

use crate::algebra::{mul, Element, Var};
use crate::differential::{apply_d, project, DifferentialSpec};
use crate::error::{Error, Result};
use crate::index::degree_drop_check;
use crate::Rational;

/// Generators whose image does not square to zero, with `d(d(x))`.
#[derive(Clone, Debug, PartialEq)]
pub struct DSquaredReport {
    pub residuals: Vec<(Var, Element)>,
}

impl DSquaredReport {
    pub fn passed(&self) -> bool {
        self.residuals.is_empty()
    }
}

/// Computes `d(d(x))` for every generator. Images are polynomials, so the
/// check is exact in every flavor.
pub fn check_d_squared(spec: &DifferentialSpec) -> Result<DSquaredReport> {
    let mut residuals = Vec::new();
    for x in spec.generators() {
        let image = spec.image(x).ok_or_else(|| Error::MissingImage(spec.sig().var_name(x)))?;
        let dd = apply_d(spec, image)?;
        if !dd.is_zero() {
            residuals.push((x, dd));
        }
    }
    Ok(DSquaredReport { residuals })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum ViolationKind {
    MissingImage,
    FlavorShape,
    DegreeDrop,
    PositivePuncture,
    Action,
    Commutator,
}

impl fmt::Display for ViolationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ViolationKind::MissingImage => "missing image",
            ViolationKind::FlavorShape => "flavor shape",
            ViolationKind::DegreeDrop => "degree drop",
            ViolationKind::PositivePuncture => "positive-puncture rule",
            ViolationKind::Action => "action",
            ViolationKind::Commutator => "commutator compatibility",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Violation {
    pub kind: ViolationKind,
    /// Generator (or generator pair) the violation was found on.
    pub generator: String,
    pub detail: String,
}

/// `Formal` means every structural rule holds but the images do not respect
/// the Weyl relations, so `d` is not a well-defined derivation of the full
/// SFT algebra and `d^2` statements about it are meaningless.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SpecStatus {
    Valid,
    Formal,
    Invalid,
}

impl fmt::Display for SpecStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SpecStatus::Valid => "valid",
            SpecStatus::Formal => "formal, d^2 unchecked",
            SpecStatus::Invalid => "invalid",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct StructureReport {
    pub status: SpecStatus,
    pub violations: Vec<Violation>,
}

impl StructureReport {
    pub fn passed(&self) -> bool {
        self.status == SpecStatus::Valid
    }
}

/// Checks the structural rules on the generator images: admissible
/// monomials, degree `-1`, at least one p-variable in every term of a
/// p-image, and, for the Weyl flavors, compatibility with the relations
/// `x y = (-1)^{|x||y|} y x + [x, y]`. With `check_action`, every term must
/// also have positive energy: for `d q_g` the negative ends have less total
/// period than `g` plus the positive ends, for `d p_g` the ends at `g` and
/// the negative ends have less than the positive ends.
pub fn validate_structure(spec: &DifferentialSpec, check_action: bool) -> StructureReport {
    let sig = spec.sig();
    let flavor = spec.flavor();
    let mut violations = Vec::new();
    let mut push = |kind, generator: String, detail: String| {
        violations.push(Violation { kind, generator, detail });
    };

    for x in spec.generators() {
        let name = sig.var_name(x);
        let Some(image) = spec.image(x) else {
            push(ViolationKind::MissingImage, name, "no image given".into());
            continue;
        };
        for m in image.terms().keys() {
            if let Some(reason) = m.flavor_violation(flavor) {
                push(ViolationKind::FlavorShape, name.clone(), reason.to_string());
            }
        }
        if !degree_drop_check(image, x, sig) {
            let want = sig.degree_unchecked(x) - 1;
            let bad: Vec<String> = image
                .terms()
                .keys()
                .filter(|m| m.degree(sig) != want)
                .map(|m| format!("degree {}", m.degree(sig)))
                .collect();
            push(
                ViolationKind::DegreeDrop,
                name.clone(),
                format!("expected degree {want}, found {}", bad.join(", ")),
            );
        }
        let (Var::Q(g) | Var::P(g)) = x else { unreachable!() };
        let period = &sig.orbit(g).period;
        for m in image.terms().keys() {
            if matches!(x, Var::P(_)) && m.p_weight() == 0 {
                push(
                    ViolationKind::PositivePuncture,
                    name.clone(),
                    "a term has no p-variable".to_string(),
                );
            }
            if check_action {
                let neg = ends_action(m.q_exponents(), sig);
                let pos = ends_action(m.p_exponents(), sig);
                let ok = match x {
                    Var::Q(_) => neg < period + &pos,
                    _ => period + &neg < pos,
                };
                if !ok {
                    push(ViolationKind::Action, name.clone(), "a term has non-positive energy".to_string());
                }
            }
        }
    }

    if flavor.is_weyl() {
        let gens: Vec<Var> = spec.generators().collect();
        for (i, &x) in gens.iter().enumerate() {
            for &y in &gens[i..] {
                match commutator_defect(spec, x, y) {
                    Ok(defect) if defect.is_zero() => {}
                    Ok(defect) => push(
                        ViolationKind::Commutator,
                        format!("{}, {}", sig.var_name(x), sig.var_name(y)),
                        defect.display(sig).to_string(),
                    ),
                    Err(_) => {}
                }
            }
        }
    }

    violations.sort_by(|a, b| (a.kind, &a.generator).cmp(&(b.kind, &b.generator)));
    violations.dedup();
    let status = if violations.is_empty() {
        SpecStatus::Valid
    } else if violations.iter().all(|v| v.kind == ViolationKind::Commutator) {
        SpecStatus::Formal
    } else {
        SpecStatus::Invalid
    };
    StructureReport { status, violations }
}

fn ends_action(ends: &std::collections::BTreeMap<usize, u32>, sig: &crate::index::AlgebraSignature) -> Rational {
    ends.iter()
        .map(|(&j, &e)| &sig.orbit(j).period * Rational::from_integer(e.into()))
        .sum()
}

/// The Leibniz expansion of `d(x y - s y x)`, `s = (-1)^{|x||y|}`, computed
/// without normal ordering `x y - s y x` first (which would collapse it to the
/// closed constant `[x, y]`). It must vanish for `d` to be a derivation of the
/// Weyl algebra.
fn commutator_defect(spec: &DifferentialSpec, x: Var, y: Var) -> Result<Element> {
    let sig = spec.sig();
    let flavor = spec.flavor();
    let image = |v: Var| spec.image(v).cloned().ok_or_else(|| Error::MissingImage(sig.var_name(v)));
    let (ex, ey) = (Element::var(flavor, sig, x)?, Element::var(flavor, sig, y)?);
    let (dx, dy) = (image(x)?, image(y)?);
    let leibniz = |a: &Element, da: &Element, b: &Element, db: &Element, a_odd: bool| -> Result<Element> {
        let first = mul(sig, da, b)?;
        let second = mul(sig, a, db)?;
        Ok(if a_odd { &first - &second } else { &first + &second })
    };
    let d_xy = leibniz(&ex, &dx, &ey, &dy, sig.is_odd(x))?;
    let d_yx = leibniz(&ey, &dy, &ex, &dx, sig.is_odd(y))?;
    Ok(if sig.is_odd(x) && sig.is_odd(y) { &d_xy + &d_yx } else { &d_xy - &d_yx })
}

/// Mismatches of `pi(d_source x) = d_target(pi x)`.
#[derive(Clone, Debug, PartialEq)]
pub struct ChainMapReport {
    pub checked: usize,
    pub mismatches: Vec<(String, Element)>,
}

impl ChainMapReport {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Checks that the projection from `source`'s algebra onto `target`'s
/// commutes with the differentials, on every generator of `source` and on
/// every sample.
pub fn verify_chain_map(
    source: &DifferentialSpec,
    target: &DifferentialSpec,
    samples: &[Element],
) -> Result<ChainMapReport> {
    if source.sig() != target.sig() {
        return Err(Error::IncompatibleFamily("signatures differ".into()));
    }
    if !target.flavor().is_sub_flavor_of(source.flavor()) {
        return Err(Error::IncompatibleProjection { from: source.flavor(), to: target.flavor() });
    }
    let sig = source.sig();
    let mut inputs: Vec<(String, Element)> = Vec::new();
    for x in source.generators() {
        inputs.push((sig.var_name(x), Element::var(source.flavor(), sig, x)?));
    }
    for (i, s) in samples.iter().enumerate() {
        inputs.push((format!("sample {i}: {}", s.display(sig)), s.clone()));
    }
    let mut mismatches = Vec::new();
    for (label, x) in &inputs {
        let lhs = project(&apply_d(source, x)?, target.flavor())?;
        let rhs = apply_d(target, &project(x, target.flavor())?)?;
        let diff = &lhs - &rhs;
        if !diff.is_zero() {
            mismatches.push((label.clone(), diff));
        }
    }
    Ok(ChainMapReport { checked: inputs.len(), mismatches })
}
