//! Malfatti circle systems in the hyperbolic plane.
//!
//! Given a hyperbolic triangle, or more generally three cycles (circles,
//! paracycles or hypercycles) in the Poincaré disk model, this crate
//! constructs three mutually tangent cycles each touching two of the given
//! objects, the configuration classically known as the Malfatti arrangement.
//!
//! Two independent solvers are provided and cross-checked:
//!
//! * [`schellbach`]: Schellbach's trigonometric elimination, which reduces
//!   the triangle case to closed-form hyperbolic identities plus a small
//!   Newton polish.
//! * [`steiner`]: Steiner's synthetic construction carried out with the
//!   inversive kernel in [`inversive`], which also covers cycle triples that
//!   are not triangle incircle-like at all.
//!
//! Every tangency claimed by either solver is certified numerically: a
//! [`cycles::TangencyCertificate`] records the common point, the common
//! tangent direction and the residual of the tangency conditions. Hart-style
//! identities ([`hart`]) give an additional independent check on top of the
//! construction itself.
//!
//! All coordinates live in the Poincaré disk of curvature -1; tolerances are
//! absolute in model coordinates unless documented otherwise.

pub mod geom;
pub mod inversive;
pub mod disk;
pub mod cycles;
pub mod schellbach;
pub mod apollonius;
pub mod steiner;
pub mod hart;
pub mod scene;
pub mod report;
pub mod render;
pub mod driver;

/// Default absolute tolerance for geometric predicates, in model coordinates.
pub const DEFAULT_TOLERANCE: f64 = 1e-10;
