//! Small numerical kernels shared by the physics modules: adaptive
//! Gauss–Kronrod quadrature, bracketing root finders and a straight-line
//! least-squares fit.

pub mod fit;
pub mod quadrature;
pub mod roots;

pub use fit::{fit_line, LineFit};
pub use quadrature::{integrate, integrate_panels, integrate_panels_best_effort, QuadResult, QuadSettings};
pub use roots::{brent, golden_section_max};
