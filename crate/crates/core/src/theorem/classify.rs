use std::collections::BTreeMap;
use std::fmt;

use crate::algebra::{Flavor, TruncationPolicy};
use crate::differential::{restrict_spec, DifferentialSpec};
use crate::error::{Error, Result};
use crate::theorem::{
    find_unit_primitive, lift_primitive, project_primitive, PrimitiveCertificate, SearchBounds, SearchOutcome,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Overtwisted,
    NoneWithinBounds,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Overtwisted => "algebraically overtwisted: YES (certificates attached)",
            Verdict::NoneWithinBounds => "no primitive found within bounds",
        })
    }
}

/// What happened in one flavor of the family.
#[derive(Clone, Debug, PartialEq)]
pub struct FlavorOutcome {
    /// The differential was given rather than obtained by restriction.
    pub supplied: bool,
    pub search: Option<SearchOutcome>,
    /// Why no certificate could be produced in this flavor, if none was.
    pub failure: Option<String>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Classification {
    pub verdict: Verdict,
    /// Flavor whose search produced the first primitive.
    pub found_in: Option<Flavor>,
    pub certificates: BTreeMap<Flavor, PrimitiveCertificate>,
    pub outcomes: BTreeMap<Flavor, FlavorOutcome>,
}

/// Completes a family of differentials by restriction and checks that the
/// given ones are restrictions of each other.
pub fn complete_family(specs: &BTreeMap<Flavor, DifferentialSpec>) -> Result<BTreeMap<Flavor, DifferentialSpec>> {
    let mut sigs = specs.values().map(|s| s.sig());
    if let Some(first) = sigs.next() {
        if sigs.any(|s| s != first) {
            return Err(Error::IncompatibleFamily("the differentials use different signatures".into()));
        }
    }
    for (&flavor, spec) in specs {
        if spec.flavor() != flavor {
            return Err(Error::IncompatibleFamily(format!("a {} differential was given as {flavor}", spec.flavor())));
        }
    }
    let mut family = specs.clone();
    for target in Flavor::ALL {
        let mut restrictions = specs
            .iter()
            .filter(|(&f, _)| f != target && target.is_sub_flavor_of(f))
            .map(|(&f, s)| restrict_spec(s, target).map(|r| (f, r)));
        let Some(first) = restrictions.next() else { continue };
        let (from, derived) = first?;
        for other in restrictions {
            let (f, r) = other?;
            if r != derived {
                return Err(Error::IncompatibleFamily(format!(
                    "the {from} and {f} differentials restrict to different {target} differentials"
                )));
            }
        }
        match specs.get(&target) {
            Some(given) if *given != derived => {
                return Err(Error::IncompatibleFamily(format!(
                    "the {from} differential does not restrict to the given {target} differential"
                )));
            }
            Some(_) => {}
            None => {
                family.insert(target, derived);
            }
        }
    }
    Ok(family)
}

/// Searches for a primitive of the unit, in contact homology first and then
/// in the other given flavors, and turns a primitive in one flavor into
/// certificates for every flavor of the family: down by projection to
/// contact homology, up by formal inverses.
pub fn classify(
    specs: &BTreeMap<Flavor, DifferentialSpec>,
    bounds: &SearchBounds,
    policy: &TruncationPolicy,
) -> Result<Classification> {
    if specs.is_empty() {
        return Err(Error::IncompatibleFamily("no differential given".into()));
    }
    let family = complete_family(specs)?;
    let mut outcomes: BTreeMap<Flavor, FlavorOutcome> = family
        .keys()
        .map(|&f| (f, FlavorOutcome { supplied: specs.contains_key(&f), search: None, failure: None }))
        .collect();

    let order = std::iter::once(Flavor::Ch).chain(Flavor::ALL.into_iter().filter(|&f| f != Flavor::Ch && specs.contains_key(&f)));
    let mut found: Option<PrimitiveCertificate> = None;
    for flavor in order {
        let outcome = find_unit_primitive(&family[&flavor], bounds)?;
        let hit = outcome.certificate().cloned();
        outcomes.get_mut(&flavor).expect("family flavor").search = Some(outcome);
        if let Some(cert) = hit {
            found = Some(cert);
            break;
        }
    }
    let Some(found) = found else {
        return Ok(Classification { verdict: Verdict::NoneWithinBounds, found_in: None, certificates: BTreeMap::new(), outcomes });
    };

    let found_in = found.flavor;
    let mut certificates = BTreeMap::new();
    let ch = if found_in == Flavor::Ch {
        found.clone()
    } else {
        project_primitive(&found, &family[&Flavor::Ch])?
    };
    certificates.insert(found_in, found);
    certificates.insert(Flavor::Ch, ch);

    let lifts = [
        (Flavor::Ch, Flavor::Rsft),
        (Flavor::Ch, Flavor::Sft),
        (Flavor::Ch, Flavor::ChStar),
        (Flavor::Rsft, Flavor::RsftStar),
        (Flavor::Sft, Flavor::SftStar),
    ];
    for (from, to) in lifts {
        let Some(target) = family.get(&to) else { continue };
        if certificates.contains_key(&to) {
            continue;
        }
        let result = match certificates.get(&from) {
            Some(base) => lift_primitive(base, target, policy),
            None => Err(Error::Verification(format!("no {from} certificate to lift"))),
        };
        match result {
            Ok(cert) => {
                certificates.insert(to, cert);
            }
            Err(e) => outcomes.get_mut(&to).expect("family flavor").failure = Some(e.to_string()),
        }
    }
    Ok(Classification { verdict: Verdict::Overtwisted, found_in: Some(found_in), certificates, outcomes })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Element;
    use crate::corpus::{toy_overtwisted, toy_tight};

    #[test]
    fn overtwisted_family() {
        let entry = toy_overtwisted();
        let result = classify(&entry.specs, &entry.bounds, &entry.policy).unwrap();
        assert_eq!(result.verdict, Verdict::Overtwisted);
        assert_eq!(result.found_in, Some(Flavor::Ch));
        assert_eq!(result.certificates.len(), 6, "{:?}", result.outcomes);
        for cert in result.certificates.values() {
            assert!(cert.verify().unwrap());
        }
        assert_eq!(result.certificates[&Flavor::Ch].element, Element::parse(Flavor::Ch, &entry.sig, "q:a").unwrap());
    }

    #[test]
    fn tight_family() {
        let entry = toy_tight();
        let result = classify(&entry.specs, &entry.bounds, &entry.policy).unwrap();
        assert_eq!(result.verdict, Verdict::NoneWithinBounds);
        assert!(result.certificates.is_empty());
    }

    #[test]
    fn rational_sft_alone() {
        let entry = toy_overtwisted();
        let only = BTreeMap::from([(Flavor::Rsft, entry.specs[&Flavor::Rsft].clone())]);
        let result = classify(&only, &entry.bounds, &entry.policy).unwrap();
        assert_eq!(result.verdict, Verdict::Overtwisted);
        assert!(result.certificates.contains_key(&Flavor::Ch));
        assert!(result.certificates.contains_key(&Flavor::Rsft));
        assert!(!result.outcomes[&Flavor::Ch].supplied);
    }

    #[test]
    fn incompatible_family_is_rejected() {
        let entry = toy_overtwisted();
        let mut specs = entry.specs.clone();
        let ch = specs[&Flavor::Ch].clone().with_image(crate::algebra::Var::Q(0), Element::zero(Flavor::Ch)).unwrap();
        specs.insert(Flavor::Ch, ch);
        assert!(matches!(classify(&specs, &entry.bounds, &entry.policy), Err(Error::IncompatibleFamily(_))));
    }
}
