//! Translates of planar centrally symmetric convex bodies.
//!
//! Norms and signatures of symmetric polygons, the contact, unit-distance,
//! intersection and ε-overlap graphs of point sets, lattice rigidity, a
//! numeric search for direction sets on which two bodies' signatures cannot
//! be matched by a linear map, and explicit witness constructions for the
//! contact and intersection graph classes.

pub mod geometry;
pub mod graphs;
pub mod separation;
pub mod contact_witness;
pub mod intersection_witness;
pub mod io;
