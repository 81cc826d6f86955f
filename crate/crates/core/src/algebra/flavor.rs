use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;

/// The six theories: contact homology, rational SFT and full SFT, each with or
/// without marked points.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Flavor {
    #[serde(rename = "CH")]
    Ch,
    #[serde(rename = "rSFT")]
    Rsft,
    #[serde(rename = "SFT")]
    Sft,
    #[serde(rename = "CH*")]
    ChStar,
    #[serde(rename = "rSFT*")]
    RsftStar,
    #[serde(rename = "SFT*")]
    SftStar,
}

impl Flavor {
    pub const ALL: [Flavor; 6] = [
        Flavor::Ch,
        Flavor::Rsft,
        Flavor::Sft,
        Flavor::ChStar,
        Flavor::RsftStar,
        Flavor::SftStar,
    ];

    /// The flavor without marked points.
    pub fn base(self) -> Flavor {
        match self {
            Flavor::Ch | Flavor::ChStar => Flavor::Ch,
            Flavor::Rsft | Flavor::RsftStar => Flavor::Rsft,
            Flavor::Sft | Flavor::SftStar => Flavor::Sft,
        }
    }

    pub fn starred(self) -> Flavor {
        match self.base() {
            Flavor::Ch => Flavor::ChStar,
            Flavor::Rsft => Flavor::RsftStar,
            _ => Flavor::SftStar,
        }
    }

    pub fn is_marked(self) -> bool {
        matches!(self, Flavor::ChStar | Flavor::RsftStar | Flavor::SftStar)
    }

    pub fn has_p(self) -> bool {
        self.base() != Flavor::Ch
    }

    pub fn has_hbar(self) -> bool {
        self.base() == Flavor::Sft
    }

    /// Full SFT flavors multiply with the Weyl relation.
    pub fn is_weyl(self) -> bool {
        self.has_hbar()
    }

    /// Elements are power series (in p, hbar or t) rather than polynomials.
    pub fn is_power_series(self) -> bool {
        self != Flavor::Ch
    }

    /// True when every monomial allowed in `self` is allowed in `other`, so
    /// dropping monomials projects `other` onto `self`.
    pub fn is_sub_flavor_of(self, other: Flavor) -> bool {
        (!self.has_p() || other.has_p())
            && (!self.has_hbar() || other.has_hbar())
            && (!self.is_marked() || other.is_marked())
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Flavor::Ch => "CH",
            Flavor::Rsft => "rSFT",
            Flavor::Sft => "SFT",
            Flavor::ChStar => "CH*",
            Flavor::RsftStar => "rSFT*",
            Flavor::SftStar => "SFT*",
        }
    }
}

impl fmt::Display for Flavor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Flavor {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Flavor::ALL
            .into_iter()
            .find(|f| f.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Parse(format!("unknown flavor `{s}`")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sub_flavors() {
        assert!(Flavor::Ch.is_sub_flavor_of(Flavor::SftStar));
        assert!(Flavor::Rsft.is_sub_flavor_of(Flavor::Sft));
        assert!(!Flavor::ChStar.is_sub_flavor_of(Flavor::Sft));
        assert!(!Flavor::Sft.is_sub_flavor_of(Flavor::Rsft));
        for f in Flavor::ALL {
            assert!(f.is_sub_flavor_of(f));
            assert_eq!(f.as_str().parse::<Flavor>().unwrap(), f);
        }
    }
}
