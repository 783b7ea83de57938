//! Points, balls, and finite point sets whose convex hull contains a ball.

mod cover;
mod shell;
mod vector;

pub use cover::{
    build_cover, build_cross_polytope_cover, build_shell_cover, build_shell_cover_with,
    build_simplex_cover, cover_containment_check, polygon_vertex_count, regular_simplex_frame,
    support_function, ContainmentReport, Cover, CoverKind, UNIT_TOLERANCE,
};
pub use shell::{sphere_covering, ShellConfig};
pub use vector::{Ball, Vector};
