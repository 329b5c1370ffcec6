//! Exact rational linear programming and polytope kernel.

pub mod hull;
pub mod linalg;
pub mod lp;
pub mod polytope;

pub use hull::{hull_membership, min_coefficient_sum, HullMembership};
pub use lp::{lp_solve, Constraint, Direction, LinearProgram, LpOutcome, Relation, VarBound};
pub use polytope::{enumerate_vertices, vertices_and_rays, HPolytope, Polyhedron};
