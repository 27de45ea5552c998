//! Forcing semantics over exact rational open sets.

use std::fmt;
use std::str::FromStr;

pub mod error;
pub mod forcing_settle;
pub mod forcing_std;
pub mod opens;
pub mod reals;
pub mod suites;
pub mod syntax;
pub mod terms;
pub mod witnesses;

pub use error::{Error, Result};
pub use opens::{OpenSet, Rat, SettledRegion};
pub use syntax::{Context, Formula, Operand};
pub use terms::{Grid, HFSet, Term};

/// Which forcing relation to evaluate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Semantics {
    /// Plain topological forcing.
    Std,
    /// Forcing with settling-down.
    Settle,
}

impl Semantics {
    pub fn max_eq(self, s: &Term, t: &Term) -> OpenSet {
        match self {
            Semantics::Std => forcing_std::max_eq(s, t),
            Semantics::Settle => forcing_settle::max_eq3(s, t),
        }
    }

    pub fn max_mem(self, s: &Term, t: &Term) -> OpenSet {
        match self {
            Semantics::Std => forcing_std::max_mem(s, t),
            Semantics::Settle => forcing_settle::max_mem3(s, t),
        }
    }

    pub fn value(self, phi: &Formula, ctx: &Context) -> OpenSet {
        match self {
            Semantics::Std => forcing_std::value(phi, ctx),
            Semantics::Settle => forcing_settle::value3(phi, ctx),
        }
    }

    pub fn forces(self, j: &OpenSet, phi: &Formula, ctx: &Context) -> bool {
        j.is_empty() || j.subset(&self.value(phi, ctx))
    }

    pub fn direct_forces(self, j: &OpenSet, phi: &Formula, ctx: &Context) -> bool {
        match self {
            Semantics::Std => forcing_std::direct_forces(j, phi, ctx),
            Semantics::Settle => forcing_settle::direct_forces3(j, phi, ctx),
        }
    }
}

impl fmt::Display for Semantics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Semantics::Std => "std",
            Semantics::Settle => "settle",
        })
    }
}

impl FromStr for Semantics {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "std" => Ok(Semantics::Std),
            "settle" => Ok(Semantics::Settle),
            other => Err(format!("unknown semantics `{other}` (expected std or settle)")),
        }
    }
}
