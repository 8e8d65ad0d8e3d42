//! The series tables as printed, in the syntax of `parse_poly`.
#![allow(dead_code)]

use sewing_core::formal::Generator;

pub const EPS_OMEGA11: &str = "tau1 + F2*eps^2 + E2*F2^2*eps^4 + (E2^2*F2^3 + 6*E4*F2*F4)*eps^6
    + (E2^3*F2^4 + 12*E2*E4*F2^2*F4 + 10*E6*F2*F6 + 30*E6*F4^2)*eps^8";

pub const EPS_OMEGA12: &str = "-eps*(1 + E2*F2*eps^2 + (E2^2*F2^2 + 3*E4*F4)*eps^4
    + (E2^3*F2^3 + 9*E2*E4*F2*F4 + 5*E6*F6)*eps^6
    + (E2^4*F2^4 + 15*E2^2*E4*F2^2*F4 + 5*E2*E6*F2*F6 + 30*E2*E6*F4^2
       + 30*E4^2*F2*F6 + 9*E4^2*F4^2 + 7*E8*F8)*eps^8)";

pub const RHO_OMEGA11: &str = "tau - 2*rho + 2*(P2+E2)*rho^2 - 2*(P2+E2)^2*rho^3 + 2*((P2+E2)^3 + 2*P3^2)*rho^4";

pub const RHO_OMEGA12: &str = "w + 2*P1*rho - 2*P1*(P2+E2)*rho^2 + 2*(P1*(P2+E2)^2 + P3*(P2-E2))*rho^3
    - 2*(P3*(P4+E4) + P1*(P2+E2)^3 + 2*P1*P3^2 + P3*(P2^2-E2^2))*rho^4";

pub const RHO_OMEGA22: &str = "log - 2*P1^2*rho + (2*P1^2*(P2+E2) + (P2-E2)^2)*rho^2
    - (2*P1^2*(P2+E2)^2 + 2/3*P3^2 + 4*P1*P3*(P2-E2))*rho^3
    + (1/2*P4^2 + 1/2*E4^2 + 3*(P4-E4)*(P2-E2)^2 + 2*P1^2*(P2+E2)^3 - E4*P4
       + 4*P3*P1*(P1*P3 + E4 + P4 + P2^2 - E2^2))*rho^4";

pub fn swap_tori(g: Generator) -> Generator {
    match g {
        Generator::E(k) => Generator::F(k),
        Generator::F(k) => Generator::E(k),
        Generator::TwoPiITau1 => Generator::TwoPiITau2,
        Generator::TwoPiITau2 => Generator::TwoPiITau1,
        other => other,
    }
}
