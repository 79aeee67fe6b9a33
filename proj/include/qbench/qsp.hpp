#pragma once

#include <complex>
#include <vector>

#include "qbench/errors.hpp"

namespace qbench {

// Real odd polynomial in monomial coefficients; coeffs[k] multiplies x^k.
struct OddPolynomial {
    std::vector<double> coeffs;

    int degree() const;
    double eval(double x) const;
    double max_abs_on_interval(int samples = 20001) const;
};

// Minimal odd interpolation polynomial P(x) = c*(alpha x + beta x^3) with
// P(sigma_i) = c / sigma_i, scaled so max |P| on [-1,1] stays at 1 - 1e-6.
// Returns the polynomial and the achieved scale c.
std::pair<OddPolynomial, double> inversion_polynomial(double sigma1, double sigma2);

struct PhaseSequence {
    int degree = 0;
    // Phases phi_0..phi_d of the Wx-convention product
    //   U(x) = e^{i phi_0 Z} prod_j [ W(x) e^{i phi_j Z} ],
    // where W(x) = [[x, i sqrt(1-x^2)], [i sqrt(1-x^2), x]];
    // Re <+|U(x)|+> equals the target polynomial on [-1,1].
    std::vector<double> phases;
    OddPolynomial target;
};

// Computes QSP phases for a real odd polynomial with sup norm < 1 via
// Fejer-Riesz completion (companion-matrix root finding) and layer stripping.
// Verified internally at Chebyshev nodes; throws NoConvergence on failure.
PhaseSequence qsp_phases(const OddPolynomial& target);

// Scalar QSP product value Re <+|U(x)|+> for the given phases.
double qsp_product_real(const std::vector<double>& phases, double x);

// Phases for the QSVT circuit gadgets (see matinv): derived from the Wx
// phases by the fixed convention offsets.
std::vector<double> circuit_phases_from_qsp(const PhaseSequence& seq);

}  // namespace qbench
