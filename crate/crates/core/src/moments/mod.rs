//! Moment polynomials by several independent routes.

mod mixed;
mod routes;
mod sequences;

pub use mixed::{
    coloring_weight_sum, factorization_checks, mixed_moment_brownian, poisson_moment,
    poisson_partition_term, Direction, FactorizationCheck,
};
pub use routes::{
    delaney, delaney_by_enumeration, euler_table, gen_euler, half_sum, r_by_closed_form,
    r_by_delaney, r_by_jacobi, r_by_route, r_from_euler, EulerRoute, MomentReport, Route,
};
pub use sequences::{
    normalized_weight_sum, r_by_enumeration, s_by_enumeration, s_r_by_enumeration,
    sequences_by_recursion, series_identity_checks, IdentityCheck, SequenceTable,
};
