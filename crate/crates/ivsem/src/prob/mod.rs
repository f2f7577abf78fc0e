//! Exact finite measure theory over the outcome space `Rid -> Bool`,
//! restricted to finite rid domains.
//!
//! Outcome sets are stored as unions of cylinders (partial assignments), so
//! spaces whose domains contain hundreds of rids stay tractable as long as
//! their blocks have short descriptions.

mod dist;
mod event;
mod outcome;
mod randvar;
mod rational;
mod rid;
mod space;

pub use dist::FinDist;
pub use event::Event;
pub use outcome::{Cylinder, Outcome};
pub use randvar::RandVar;
pub use rational::Prob;
pub use rid::{Rid, RidSupply};
pub use space::FinProbSpace;
