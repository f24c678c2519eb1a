//! Exact arithmetic over Q(i) and Z.

pub mod group;
pub mod intmat;
pub mod linsys;
pub mod matrix;
pub mod scalar;
pub mod subspace;

pub use group::{lattice_cokernel, FinAbGroup, GroupQuotient, GroupSum};
pub use intmat::{
    integer_kernel, integer_kernel_rational, integer_span_basis, smith_normal_form, solve_integer, solve_integer_any,
    solve_integer_gauss, IntMatrix,
    SmithForm,
};
pub use linsys::{BlockId, LatticeSolution, LinearSystem};
pub use matrix::GMatrix;
pub use scalar::GaussScalar;
pub use subspace::{
    canonical_subspace, image_subspace, induced_quotient_map, kernel_subspace, pullback, quotient_map, Pullback,
    Subspace,
};
