"""Smoke test for the genus2 extension module."""

import cmath
import math

import genus2

TWO_PI_I = 2j * math.pi


def close(a, b, tol):
    assert abs(a - b) <= tol, f"{a} vs {b}"


def main():
    # E6(i) vanishes; E4(i) = 3 Gamma(1/4)^8 / (2 pi)^6 / 720 with constant term 1/720
    close(genus2.eisenstein(6, 1j), 0, 1e-14)
    e4 = 3 * math.gamma(0.25) ** 8 / (2 * math.pi) ** 6 / 720
    close(genus2.eisenstein(4, 1j), e4, 1e-15)

    p = genus2.period_matrix_eps(1j, 2j, 0.1)
    assert p.in_siegel_space()
    lead = -0.1 / TWO_PI_I
    close(p.omega12, lead, 1e-3 * abs(lead))
    zero = genus2.period_matrix_eps(1j, 2j, 0)
    assert zero.omega11 == 1j and zero.omega22 == 2j and zero.omega12 == 0

    tau1, tau2, eps = genus2.invert_eps(p)
    close(tau1, 1j, 1e-9)
    close(tau2, 2j, 1e-9)
    close(eps, 0.1, 1e-9)

    c = genus2.period_matrix_chi(1j, 0.2, 0.05)
    tau, w, chi = genus2.invert_chi(c)
    close(w, 0.2, 1e-9)
    close(chi, 0.05, 1e-9)

    f = genus2.catalan_f(0.05)
    close(f / (1 + f) ** 2, 0.05, 1e-14)
    close(genus2.torus_modulus_catalan(0.05), f, 1e-9)
    close(genus2.e2_from_catalan(0.05), genus2.eisenstein(2, cmath.log(f) / TWO_PI_I), 1e-9)

    residuals = genus2.equivariance_eps(0.1 + 1.1j, -0.3 + 1j, 0.1 + 0.05j)
    assert max(residuals.values()) < 1e-8, residuals

    series = genus2.appendix_series("eps", 9)
    assert "- 7*E8*F8*eps^9" in series["omega12"], series["omega12"]

    inside, margin = genus2.in_domain_eps(1j, 2j, 20)
    assert not inside and margin > 1
    try:
        genus2.period_matrix_eps(1j, 2j, 20)
    except genus2.OutOfDomainError:
        pass
    else:
        raise AssertionError("expected OutOfDomainError")
    assert issubclass(genus2.OutOfDomainError, ValueError)
    try:
        genus2.eisenstein(4, -1j)
    except ValueError:
        pass
    else:
        raise AssertionError("expected ValueError")
    try:
        genus2.invert_eps(genus2.PeriodMatrix(1j, 0.3j, 1.2j), max_iter=1)
    except genus2.ConvergenceError:
        pass
    else:
        raise AssertionError("expected ConvergenceError")

    print("smoke test passed")


if __name__ == "__main__":
    main()
