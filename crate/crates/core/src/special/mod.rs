//! Eisenstein series, Weierstrass-type functions, the elliptic prime form,
//! Dedekind eta, theta and the C/D moment coefficients.

mod bernoulli;
mod coeffs;
mod eisenstein;
mod lattice;
mod prime_form;
mod tau;
mod weierstrass;

pub use bernoulli::bernoulli;
pub use coeffs::{c_coeff, combinatorial_factor, d_coeff, MAX_COEFF_INDEX};
pub use eisenstein::{eisenstein, eisenstein_constant, EisensteinTable};
pub use lattice::{lattice_min, LatticeTau};
pub use prime_form::{dedekind_eta, prime_form, prime_form_series, prime_form_theta, theta1};
pub use tau::{SeriesTolerance, Tau};
pub use weierstrass::{weierstrass_p, weierstrass_p_lattice_sum, EllipticTable};
