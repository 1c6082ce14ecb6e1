use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::ClassError;
use crate::normlattice::{lattice, LatticeScenario, NormLattice};
use crate::squareclass::{ClassGroup, SquareClass};

/// The run scenario: the 2-adic case, or Case B with a fixed class for 3.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Scenario {
    #[serde(rename = "case-a")]
    CaseA,
    /// Case B with `3 ~ 1`.
    #[serde(rename = "case-b-3is1")]
    CaseB3Is1,
    /// Case B with `3 ~ 2`.
    #[serde(rename = "case-b-3is2")]
    CaseB3Is2,
}

impl Scenario {
    pub const ALL: [Scenario; 3] = [Scenario::CaseA, Scenario::CaseB3Is1, Scenario::CaseB3Is2];
    pub const CASE_B: [Scenario; 2] = [Scenario::CaseB3Is1, Scenario::CaseB3Is2];

    pub fn name(self) -> &'static str {
        match self {
            Scenario::CaseA => "case-a",
            Scenario::CaseB3Is1 => "case-b-3is1",
            Scenario::CaseB3Is2 => "case-b-3is2",
        }
    }

    pub fn group(self) -> ClassGroup {
        match self {
            Scenario::CaseA => ClassGroup::CaseA,
            _ => ClassGroup::CaseB,
        }
    }

    pub fn is_case_b(self) -> bool {
        self != Scenario::CaseA
    }

    /// Case B runs work over `K`, whose lattice is of Demushkin type.
    pub fn lattice_scenario(self) -> LatticeScenario {
        match self {
            Scenario::CaseA => LatticeScenario::CaseA,
            _ => LatticeScenario::CaseBLarge,
        }
    }

    pub fn lattice(self) -> NormLattice {
        lattice(self.lattice_scenario())
    }

    /// The class of 3: `-5` in Case A, else the branch value.
    pub fn three(self) -> SquareClass {
        let g = self.group();
        match self {
            Scenario::CaseA => g.class(0b101),
            Scenario::CaseB3Is1 => g.identity(),
            Scenario::CaseB3Is2 => g.two(),
        }
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Scenario {
    type Err = ClassError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Scenario::ALL
            .into_iter()
            .find(|sc| sc.name() == s)
            .ok_or_else(|| ClassError::UnknownLabel(s.to_string()))
    }
}
