//! Versioned JSON files for contact data, differentials and certificates,
//! and machine-readable reports.
//!
//! Rationals are written as strings (`"3/4"`, `"-2"`). Emitting a parsed
//! canonical file reproduces it byte for byte.

pub mod report;

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::algebra::{Element, Flavor, GroupElement, Monomial, TruncationPolicy, Var};
use crate::differential::DifferentialSpec;
use crate::error::{Error, Result};
use crate::index::{combinatorial_factor, AlgebraSignature, OrbitRecord, TFormRecord};
use crate::theorem::PrimitiveCertificate;
use crate::Rational;

pub use report::Report;

pub const FORMAT_VERSION: u32 = 1;

pub mod opt_rational {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    use crate::Rational;

    pub fn serialize<S: Serializer>(v: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
        v.as_ref().map(|r| r.to_string()).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Rational>, D::Error> {
        let text: Option<String> = Option::deserialize(d)?;
        text.map(|t| super::parse_rational(&t).map_err(serde::de::Error::custom)).transpose()
    }
}

pub fn parse_rational(text: &str) -> Result<Rational> {
    let t = text.trim();
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let bad = || Error::Parse(format!("invalid rational `{text}`"));
    let num: num_bigint::BigInt = num.parse().map_err(|_| bad())?;
    let den: num_bigint::BigInt = den.parse().map_err(|_| bad())?;
    if den == 0.into() {
        return Err(Error::Parse(format!("zero denominator in `{text}`")));
    }
    Ok(Rational::new(num, den))
}

fn json_error(e: serde_json::Error) -> Error {
    Error::Parse(format!("line {}, column {}: {e}", e.line(), e.column()))
}

fn check_version(version: u32) -> Result<()> {
    if version != FORMAT_VERSION {
        return Err(Error::Parse(format!("unsupported format version {version}, expected {FORMAT_VERSION}")));
    }
    Ok(())
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OrbitEntry {
    pub id: String,
    pub cz: i64,
    pub kappa: u32,
    pub period: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "camelCase")]
pub struct TFormEntry {
    pub id: String,
    pub form_degree: u32,
}

/// Contact data: dimension, `c_1` on a basis of `H_2(M)/R`, orbits and
/// marked-point forms.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ContactDataFile {
    pub version: u32,
    pub n: i64,
    pub h2rank: usize,
    pub c1: Vec<i64>,
    pub orbits: Vec<OrbitEntry>,
    #[serde(default)]
    pub tforms: Vec<TFormEntry>,
}

impl ContactDataFile {
    pub fn from_signature(sig: &AlgebraSignature) -> Self {
        ContactDataFile {
            version: FORMAT_VERSION,
            n: sig.n(),
            h2rank: sig.h2rank(),
            c1: sig.c1().to_vec(),
            orbits: sig
                .orbits()
                .iter()
                .map(|o| OrbitEntry { id: o.id.clone(), cz: o.cz, kappa: o.kappa, period: o.period.to_string() })
                .collect(),
            tforms: sig
                .tforms()
                .iter()
                .map(|t| TFormEntry { id: t.id.clone(), form_degree: t.form_degree })
                .collect(),
        }
    }

    pub fn to_signature(&self) -> Result<AlgebraSignature> {
        check_version(self.version)?;
        if self.h2rank != self.c1.len() {
            return Err(Error::InvalidSignature(format!(
                "h2rank is {} but c1 has {} entries",
                self.h2rank,
                self.c1.len()
            )));
        }
        let orbits = self
            .orbits
            .iter()
            .map(|o| Ok(OrbitRecord::new(o.id.clone(), o.cz, o.kappa, parse_rational(&o.period)?)))
            .collect::<Result<Vec<_>>>()?;
        let tforms = self.tforms.iter().map(|t| TFormRecord::new(t.id.clone(), t.form_degree)).collect();
        AlgebraSignature::new(self.n, self.c1.clone(), orbits, tforms)
    }

    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(json_error)
    }

    pub fn emit(&self) -> String {
        to_json(self)
    }
}

pub fn signature_from_json(text: &str) -> Result<AlgebraSignature> {
    ContactDataFile::parse(text)?.to_signature()
}

pub fn signature_to_json(sig: &AlgebraSignature) -> String {
    ContactDataFile::from_signature(sig).emit()
}

fn is_zero(x: &u32) -> bool {
    *x == 0
}

fn is_false(x: &bool) -> bool {
    !*x
}

/// One term `coeff * e^A q^I p^J t^K hbar^g`; exponent maps are keyed by
/// orbit and form ids.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "camelCase")]
pub struct TermEntry {
    pub coeff: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub group: Vec<i64>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub q: BTreeMap<String, u32>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub p: BTreeMap<String, u32>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub t: BTreeMap<String, u32>,
    #[serde(default, skip_serializing_if = "is_zero")]
    pub hbar: u32,
    /// The coefficient is a raw curve count, still to be divided by
    /// `C(I^-) C(I^+)` and signed.
    #[serde(default, skip_serializing_if = "is_false")]
    pub raw_count: bool,
}

impl TermEntry {
    fn from_monomial(m: &Monomial, c: &Rational, sig: &AlgebraSignature) -> Self {
        let ids = |block: &BTreeMap<usize, u32>| -> BTreeMap<String, u32> {
            block.iter().map(|(&i, &e)| (sig.orbit(i).id.clone(), e)).collect()
        };
        TermEntry {
            coeff: c.to_string(),
            group: if m.group().is_identity() { Vec::new() } else { m.group().coords().to_vec() },
            q: ids(m.q_exponents()),
            p: ids(m.p_exponents()),
            t: m.t_exponents().iter().map(|(&j, &e)| (sig.tforms()[j].id.clone(), e)).collect(),
            hbar: m.hbar_power(),
            raw_count: false,
        }
    }

    fn monomial(&self, sig: &AlgebraSignature) -> Result<Monomial> {
        let group = if self.group.is_empty() {
            GroupElement::identity(sig.h2rank())
        } else {
            GroupElement::new(self.group.clone())
        };
        sig.check_group(&group)?;
        let mut m = Monomial::one(sig.h2rank()).with_group(group).with(Var::Hbar, self.hbar);
        for (id, &e) in &self.q {
            m = m.with(Var::Q(sig.orbit_id(id)?), e);
        }
        for (id, &e) in &self.p {
            m = m.with(Var::P(sig.orbit_id(id)?), e);
        }
        for (id, &e) in &self.t {
            m = m.with(Var::T(sig.tform_id(id)?), e);
        }
        Ok(m)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ImageEntry {
    pub generator: String,
    pub terms: Vec<TermEntry>,
}

/// A differential: flavor, the contact data it refers to (a path relative
/// to the differential file), and generator images.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "camelCase")]
pub struct DifferentialFile {
    pub version: u32,
    pub flavor: Flavor,
    pub contact_data: String,
    pub images: Vec<ImageEntry>,
}

/// Turns a raw count for a term of `d x` into a structure constant:
/// divides by `C(I^-) C(I^+)` and, for p-images, multiplies by
/// `(-1)^{|p|+1}`.
pub fn normalize_raw_count(raw: &Rational, m: &Monomial, generator: Var, sig: &AlgebraSignature) -> Rational {
    let divisor = combinatorial_factor(m.q_exponents(), sig) * combinatorial_factor(m.p_exponents(), sig);
    let mut c = raw / Rational::from_integer(divisor);
    if let Var::P(_) = generator {
        if sig.degree_unchecked(generator).rem_euclid(2) == 0 {
            c = -c;
        }
    }
    c
}

impl DifferentialFile {
    pub fn from_spec(spec: &DifferentialSpec, contact_data: &str) -> Self {
        let sig = spec.sig();
        let images = spec
            .generators()
            .map(|x| ImageEntry {
                generator: sig.var_name(x),
                terms: spec
                    .image(x)
                    .map(|e| e.terms().iter().map(|(m, c)| TermEntry::from_monomial(m, c, sig)).collect())
                    .unwrap_or_default(),
            })
            .collect();
        DifferentialFile { version: FORMAT_VERSION, flavor: spec.flavor(), contact_data: contact_data.into(), images }
    }

    /// Builds the differential over `sig`. Generators without an entry get
    /// the zero image. With `raw_counts`, every coefficient is treated as a
    /// raw count.
    pub fn to_spec(&self, sig: Arc<AlgebraSignature>, raw_counts: bool) -> Result<DifferentialSpec> {
        check_version(self.version)?;
        let mut spec = DifferentialSpec::new(self.flavor, sig.clone(), [])?;
        let mut seen = std::collections::BTreeSet::new();
        for image in &self.images {
            let x = sig.parse_var(&image.generator)?;
            if !seen.insert(x) {
                return Err(Error::Parse(format!("generator {} listed twice", image.generator)));
            }
            let mut terms = Vec::new();
            for term in &image.terms {
                let m = term.monomial(&sig)?;
                let c = parse_rational(&term.coeff)?;
                let c = if raw_counts || term.raw_count { normalize_raw_count(&c, &m, x, &sig) } else { c };
                terms.push((m, c));
            }
            let e = Element::from_terms(self.flavor, &sig, terms)?;
            spec = spec.with_image(x, e)?;
        }
        Ok(spec.completed())
    }

    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(json_error)
    }

    pub fn emit(&self) -> String {
        to_json(self)
    }
}

pub fn spec_to_json(spec: &DifferentialSpec, contact_data: &str) -> String {
    DifferentialFile::from_spec(spec, contact_data).emit()
}

pub fn spec_from_json(text: &str, sig: Arc<AlgebraSignature>, raw_counts: bool) -> Result<DifferentialSpec> {
    DifferentialFile::parse(text)?.to_spec(sig, raw_counts)
}

/// A file that was read, for report digests.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InputFile {
    pub path: PathBuf,
    pub sha256: String,
}

fn read(path: &Path, inputs: &mut Vec<InputFile>) -> Result<String> {
    let bytes = std::fs::read(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    inputs.push(InputFile { path: path.to_path_buf(), sha256: sha256_hex(&bytes) });
    String::from_utf8(bytes).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

pub fn read_signature(path: &Path, inputs: &mut Vec<InputFile>) -> Result<AlgebraSignature> {
    signature_from_json(&read(path, inputs)?).map_err(|e| in_file(path, e))
}

fn in_file(path: &Path, e: Error) -> Error {
    match e {
        Error::Parse(msg) => Error::Parse(format!("{}: {msg}", path.display())),
        other => other,
    }
}

/// Reads a differential file and the contact data it refers to.
pub fn read_differential(path: &Path, raw_counts: bool, inputs: &mut Vec<InputFile>) -> Result<DifferentialSpec> {
    let file = DifferentialFile::parse(&read(path, inputs)?).map_err(|e| in_file(path, e))?;
    let contact = path.parent().unwrap_or(Path::new(".")).join(&file.contact_data);
    let sig = Arc::new(read_signature(&contact, inputs)?);
    file.to_spec(sig, raw_counts).map_err(|e| in_file(path, e))
}

/// A primitive as stored on disk. The differential it refers to is given
/// separately when the file is read.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "camelCase")]
pub struct CertificateFile {
    pub version: u32,
    pub flavor: Flavor,
    pub element: String,
    pub verified_to_weight: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub policy: Option<TruncationPolicy>,
}

impl CertificateFile {
    pub fn from_certificate(cert: &PrimitiveCertificate) -> Self {
        CertificateFile {
            version: FORMAT_VERSION,
            flavor: cert.flavor,
            element: cert.element.display(cert.spec.sig()).to_string(),
            verified_to_weight: cert.verified_to_weight,
            policy: cert.policy.clone(),
        }
    }

    /// Rebuilds and re-verifies the certificate against `spec`.
    pub fn to_certificate(&self, spec: &DifferentialSpec) -> Result<PrimitiveCertificate> {
        check_version(self.version)?;
        if self.flavor != spec.flavor() {
            return Err(Error::FlavorMismatch { left: self.flavor, right: spec.flavor() });
        }
        let element = Element::parse(self.flavor, spec.sig(), &self.element)?;
        PrimitiveCertificate::checked(element, spec, self.policy.as_ref())
    }

    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(json_error)
    }

    pub fn emit(&self) -> String {
        to_json(self)
    }
}

pub fn read_certificate(path: &Path, spec: &DifferentialSpec, inputs: &mut Vec<InputFile>) -> Result<PrimitiveCertificate> {
    CertificateFile::parse(&read(path, inputs)?).map_err(|e| in_file(path, e))?.to_certificate(spec)
}

/// File name used for a flavor when writing a family of differentials.
pub fn flavor_slug(flavor: Flavor) -> &'static str {
    match flavor {
        Flavor::Ch => "ch",
        Flavor::Rsft => "rsft",
        Flavor::Sft => "sft",
        Flavor::ChStar => "ch-star",
        Flavor::RsftStar => "rsft-star",
        Flavor::SftStar => "sft-star",
    }
}

/// The files of a corpus entry: `<name>.contact.json` and one
/// `<name>.<flavor>.json` per differential, as (file name, contents).
pub fn corpus_files(entry: &crate::corpus::CorpusEntry) -> Vec<(String, String)> {
    let contact = format!("{}.contact.json", entry.name);
    let mut out = vec![(contact.clone(), signature_to_json(&entry.sig))];
    for (flavor, spec) in &entry.specs {
        out.push((format!("{}.{}.json", entry.name, flavor_slug(*flavor)), spec_to_json(spec, &contact)));
    }
    out
}
