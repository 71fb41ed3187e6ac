use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

/// The seven nodes of an (abelian) configuration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    A1,
    A2,
    A3,
    X1,
    X2,
    X3,
    X4,
}

impl Role {
    pub const BASIC: [Role; 6] = [Role::A1, Role::A2, Role::A3, Role::X1, Role::X2, Role::X3];
    pub const ALL: [Role; 7] = [
        Role::A1,
        Role::A2,
        Role::A3,
        Role::X1,
        Role::X2,
        Role::X3,
        Role::X4,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Role::A1 => "a1",
            Role::A2 => "a2",
            Role::A3 => "a3",
            Role::X1 => "x1",
            Role::X2 => "x2",
            Role::X3 => "x3",
            Role::X4 => "x4",
        }
    }
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Role {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Role::ALL
            .into_iter()
            .find(|r| r.as_str() == s)
            .ok_or_else(|| format!("unknown role `{s}`"))
    }
}
