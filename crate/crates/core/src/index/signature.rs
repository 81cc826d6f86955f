use std::collections::HashMap;

use num_traits::Signed;

use crate::algebra::{GroupElement, Parity, Var};
use crate::error::{Error, Result};
use crate::Rational;

/// Discrete data of one closed Reeb orbit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitRecord {
    pub id: String,
    /// Conley–Zehnder index with respect to a fixed trivialization.
    pub cz: i64,
    /// Multiplicity of the orbit.
    pub kappa: u32,
    pub period: Rational,
}

impl OrbitRecord {
    pub fn new(id: impl Into<String>, cz: i64, kappa: u32, period: Rational) -> Self {
        OrbitRecord { id: id.into(), cz, kappa, period }
    }
}

/// A closed form representing a cohomology class, seen only through its degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TFormRecord {
    pub id: String,
    pub form_degree: u32,
}

impl TFormRecord {
    pub fn new(id: impl Into<String>, form_degree: u32) -> Self {
        TFormRecord { id: id.into(), form_degree }
    }
}

/// Everything needed to grade the algebras of a `(2n-1)`-dimensional contact
/// manifold: orbits, marked-point forms and the first Chern class on the free
/// part of `H_2`.
#[derive(Clone, Debug)]
pub struct AlgebraSignature {
    n: i64,
    c1: Vec<i64>,
    orbits: Vec<OrbitRecord>,
    tforms: Vec<TFormRecord>,
    orbit_index: HashMap<String, usize>,
    tform_index: HashMap<String, usize>,
}

impl PartialEq for AlgebraSignature {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n
            && self.c1 == other.c1
            && self.orbits == other.orbits
            && self.tforms == other.tforms
    }
}

impl Eq for AlgebraSignature {}

impl AlgebraSignature {
    /// Builds a signature, checking every record invariant. The rank of
    /// `H_2(M)/R` is `c1.len()`.
    pub fn new(
        n: i64,
        c1: Vec<i64>,
        orbits: Vec<OrbitRecord>,
        tforms: Vec<TFormRecord>,
    ) -> Result<Self> {
        if n < 1 {
            return Err(Error::InvalidSignature(format!("n must be >= 1, got {n}")));
        }
        let mut orbit_index = HashMap::new();
        for (i, o) in orbits.iter().enumerate() {
            if o.kappa < 1 {
                return Err(Error::InvalidSignature(format!(
                    "orbit `{}`: kappa >= 1 violated",
                    o.id
                )));
            }
            if !o.period.is_positive() {
                return Err(Error::InvalidSignature(format!(
                    "orbit `{}`: period > 0 violated",
                    o.id
                )));
            }
            if !valid_id(&o.id) {
                return Err(Error::InvalidSignature(format!("invalid orbit id `{}`", o.id)));
            }
            if orbit_index.insert(o.id.clone(), i).is_some() {
                return Err(Error::InvalidSignature(format!("duplicate orbit id `{}`", o.id)));
            }
        }
        let mut tform_index = HashMap::new();
        for (i, t) in tforms.iter().enumerate() {
            if i64::from(t.form_degree) > 2 * n - 1 {
                return Err(Error::InvalidSignature(format!(
                    "form `{}`: degree {} exceeds 2n-1 = {}",
                    t.id,
                    t.form_degree,
                    2 * n - 1
                )));
            }
            if !valid_id(&t.id) {
                return Err(Error::InvalidSignature(format!("invalid form id `{}`", t.id)));
            }
            if tform_index.insert(t.id.clone(), i).is_some() {
                return Err(Error::InvalidSignature(format!("duplicate form id `{}`", t.id)));
            }
        }
        Ok(AlgebraSignature { n, c1, orbits, tforms, orbit_index, tform_index })
    }

    pub fn n(&self) -> i64 {
        self.n
    }

    pub fn h2rank(&self) -> usize {
        self.c1.len()
    }

    pub fn c1(&self) -> &[i64] {
        &self.c1
    }

    pub fn orbits(&self) -> &[OrbitRecord] {
        &self.orbits
    }

    pub fn tforms(&self) -> &[TFormRecord] {
        &self.tforms
    }

    pub fn orbit(&self, i: usize) -> &OrbitRecord {
        &self.orbits[i]
    }

    pub fn orbit_id(&self, id: &str) -> Result<usize> {
        self.orbit_index
            .get(id)
            .copied()
            .ok_or_else(|| Error::UnknownVariable(id.to_string()))
    }

    pub fn tform_id(&self, id: &str) -> Result<usize> {
        self.tform_index
            .get(id)
            .copied()
            .ok_or_else(|| Error::UnknownVariable(id.to_string()))
    }

    pub fn contains(&self, var: Var) -> bool {
        match var {
            Var::Q(i) | Var::P(i) => i < self.orbits.len(),
            Var::T(j) => j < self.tforms.len(),
            Var::Hbar => true,
        }
    }

    /// Degree of a generator: `|q| = CZ + n - 3`, `|p| = -CZ + n - 3`,
    /// `|hbar| = 2(n - 3)`, `|t| = deg(form) - 2`.
    pub fn degree(&self, var: Var) -> Result<i64> {
        if !self.contains(var) {
            return Err(Error::UnknownVariable(format!("{var:?}")));
        }
        Ok(self.degree_unchecked(var))
    }

    pub(crate) fn degree_unchecked(&self, var: Var) -> i64 {
        match var {
            Var::Q(i) => self.orbits[i].cz + self.n - 3,
            Var::P(i) => -self.orbits[i].cz + self.n - 3,
            Var::T(j) => i64::from(self.tforms[j].form_degree) - 2,
            Var::Hbar => self.hbar_degree(),
        }
    }

    pub fn hbar_degree(&self) -> i64 {
        2 * (self.n - 3)
    }

    pub fn parity(&self, var: Var) -> Result<Parity> {
        self.degree(var).map(Parity::of)
    }

    pub(crate) fn is_odd(&self, var: Var) -> bool {
        self.degree_unchecked(var).rem_euclid(2) == 1
    }

    /// `<c_1(xi), A>`.
    pub fn pairing(&self, group: &GroupElement) -> i64 {
        self.c1.iter().zip(group.coords()).map(|(c, a)| c * a).sum()
    }

    /// `|e^A| = -2 <c_1, A>`.
    pub fn group_degree(&self, group: &GroupElement) -> i64 {
        -2 * self.pairing(group)
    }

    pub fn check_group(&self, group: &GroupElement) -> Result<()> {
        if group.rank() != self.h2rank() {
            return Err(Error::GroupRank { expected: self.h2rank(), got: group.rank() });
        }
        Ok(())
    }

    /// All generator variables (q, p, t; not hbar) in global order.
    pub fn variables(&self) -> impl Iterator<Item = Var> + '_ {
        let k = self.orbits.len();
        (0..k)
            .map(Var::Q)
            .chain((0..k).map(Var::P))
            .chain((0..self.tforms.len()).map(Var::T))
    }

    pub fn var_name(&self, var: Var) -> String {
        match var {
            Var::Q(i) => format!("q:{}", self.orbits[i].id),
            Var::P(i) => format!("p:{}", self.orbits[i].id),
            Var::T(j) => format!("t:{}", self.tforms[j].id),
            Var::Hbar => "hbar".to_string(),
        }
    }

    /// Parses `q:<orbit>`, `p:<orbit>`, `t:<form>` or `hbar`.
    pub fn parse_var(&self, s: &str) -> Result<Var> {
        let s = s.trim();
        if s == "hbar" {
            return Ok(Var::Hbar);
        }
        match s.split_once(':') {
            Some(("q", id)) => self.orbit_id(id).map(Var::Q),
            Some(("p", id)) => self.orbit_id(id).map(Var::P),
            Some(("t", id)) => self.tform_id(id).map(Var::T),
            _ => Err(Error::UnknownVariable(s.to_string())),
        }
    }
}

fn valid_id(id: &str) -> bool {
    !id.is_empty() && id.chars().all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '.')
}
