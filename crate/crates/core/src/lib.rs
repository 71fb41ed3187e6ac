//! Finite-scale group configurations.
//!
//! A configuration is given either as points of a linear matroid over `F_p`
//! ([`configuration`]) or as finite function tables ([`finstance`]). From
//! the tables the group is rebuilt as permutations of a sort
//! ([`reconstruct`]), four-place relations give an equivalent view
//! ([`quadrangle`]), and [`gpgen`] produces ground-truth instances from
//! known group actions. [`localglue`] completes an interval of the rationals
//! to a cyclic group by wrap-around addition.

pub mod bijection;
pub mod cli;
pub mod configuration;
pub mod finstance;
pub mod gpgen;
pub mod group;
pub mod groupiso;
pub mod io;
pub mod localglue;
pub mod matroid;
pub mod quadrangle;
pub mod reconstruct;
pub mod role;
pub mod sweep;

pub use bijection::{Bijection, FunctionFamily, GermClass};
pub use configuration::{ClauseReport, ConfigPoints};
pub use finstance::{AtomId, FunctionalInstance, RelTable, Sort, TableName};
pub use group::{FiniteGroupTable, GroupAction};
pub use matroid::LinearMatroid;
pub use quadrangle::QuadRelation;
pub use role::Role;
pub use sweep::Strategy;
