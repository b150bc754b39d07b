//! Which theorems apply to which models.
//!
//! Two layers answer every question. The hypothesis layer ([`direct`])
//! evaluates the boundedness hypotheses of each theorem through the
//! trilinear-form conditions and produces the admissible sets of the
//! summary tables. The remark layer ([`remarks`]) evaluates the closed-form
//! inequality systems and reports every inequality with its slack. The
//! remark systems are sufficient for the hypotheses, so whenever a remark
//! verdict holds, the hypothesis verdict holds too.
//!
//! All comparisons are exact: parameters are read as fractions when they are
//! within 1e-12 of one with a small denominator. Otherwise the binary value
//! is used and any inequality within 1e-12 of equality is marked `boundary`.

pub mod bounded;
pub mod direct;
pub mod exact;
pub mod presets;
pub mod remarks;
mod report;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use bounded::{bform_bounded, sobolev_mult_admissible, Boundedness, FormFamily, MultCheck};
pub use exact::{IntervalSet, Relaxation, Witness};
pub use presets::{custom, preset, PRESET_NAMES, TABLE_MODELS};
pub use report::{
    check_theorem, full_report, render_tables, table_row, InequalityReport, ParamsSummary, RegimeReport,
    RemarkCheck, SetReport, TableRow, TheoremCheck,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TheoremId {
    ExistenceA,
    ExistenceBLocal,
    UniquenessA,
    UniquenessB,
    Regularity,
    AttractorIii,
    AttractorCorollary,
    DeterminingDissipative,
    DeterminingNondissipative,
}

impl TheoremId {
    pub const ALL: [TheoremId; 9] = [
        TheoremId::ExistenceA,
        TheoremId::ExistenceBLocal,
        TheoremId::UniquenessA,
        TheoremId::UniquenessB,
        TheoremId::Regularity,
        TheoremId::AttractorIii,
        TheoremId::AttractorCorollary,
        TheoremId::DeterminingDissipative,
        TheoremId::DeterminingNondissipative,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            TheoremId::ExistenceA => "existence-a",
            TheoremId::ExistenceBLocal => "existence-b-local",
            TheoremId::UniquenessA => "uniqueness-a",
            TheoremId::UniquenessB => "uniqueness-b",
            TheoremId::Regularity => "regularity",
            TheoremId::AttractorIii => "attractor-iii",
            TheoremId::AttractorCorollary => "attractor-corollary",
            TheoremId::DeterminingDissipative => "determining-dissipative",
            TheoremId::DeterminingNondissipative => "determining-nondissipative",
        }
    }

    /// The free exponent the admissible set is reported in, if any.
    pub fn parameter(self) -> Option<&'static str> {
        match self {
            TheoremId::ExistenceBLocal | TheoremId::UniquenessB | TheoremId::Regularity | TheoremId::AttractorIii => {
                Some("β")
            }
            TheoremId::ExistenceA => Some("γ"),
            TheoremId::DeterminingNondissipative => Some("α"),
            _ => None,
        }
    }

    /// Theorems whose hypotheses assume `θ > 0`.
    pub fn dissipative(self) -> bool {
        self == TheoremId::DeterminingDissipative
    }
}

impl fmt::Display for TheoremId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for TheoremId {
    type Err = Error;
    fn from_str(s: &str) -> Result<TheoremId> {
        TheoremId::ALL
            .into_iter()
            .find(|t| t.as_str() == s.trim())
            .ok_or_else(|| Error::Config(format!("unknown theorem id `{s}`")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Holds,
    Fails,
    NotApplicable,
}

impl Verdict {
    pub fn from_bool(b: bool) -> Verdict {
        if b {
            Verdict::Holds
        } else {
            Verdict::Fails
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Holds => "holds",
            Verdict::Fails => "fails",
            Verdict::NotApplicable => "not-applicable",
        }
    }
}
