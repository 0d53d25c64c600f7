//! Dense complex linear algebra and the shared tolerance policy.

mod decomp;
mod dense;
mod subspace;
mod tolerance;

pub use decomp::{eig_hermitian, kernel, kernel_scaled, singular_values, HermitianEigen};
pub use dense::ComplexMatrix;
pub use subspace::{frobenius, intersect, op_norm, ortho_complement, project, Subspace};
pub use tolerance::{TolerancePolicy, PROFILE_ENV};

pub(crate) use decomp::{right_singular, svd_full};
