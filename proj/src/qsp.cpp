#include "qbench/qsp.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

#include <Eigen/Dense>

namespace qbench {

namespace {
using cd = std::complex<double>;
constexpr cd i1{0.0, 1.0};
}  // namespace

int OddPolynomial::degree() const {
    for (int k = int(coeffs.size()) - 1; k >= 0; --k)
        if (coeffs[size_t(k)] != 0.0) return k;
    return 0;
}

double OddPolynomial::eval(double x) const {
    double acc = 0.0;
    for (int k = int(coeffs.size()) - 1; k >= 0; --k) acc = acc * x + coeffs[size_t(k)];
    return acc;
}

double OddPolynomial::max_abs_on_interval(int samples) const {
    double m = 0.0;
    for (int i = 0; i < samples; ++i) {
        const double x = -1.0 + 2.0 * i / (samples - 1);
        m = std::max(m, std::abs(eval(x)));
    }
    return m;
}

std::pair<OddPolynomial, double> inversion_polynomial(double sigma1, double sigma2) {
    if (!(0.0 < sigma2 && sigma2 < sigma1 && sigma1 <= 1.0))
        throw DegenerateSigmas("need 0 < sigma2 < sigma1 <= 1");
    if (sigma1 - sigma2 < 1e-9) throw DegenerateSigmas("singular values too close");
    // Solve alpha * s + beta * s^3 = 1/s at both singular values.
    const double s1 = sigma1, s2 = sigma2;
    // [s1 s1^3; s2 s2^3] [alpha; beta] = [1/s1; 1/s2]
    const double det = s1 * s2 * s2 * s2 - s2 * s1 * s1 * s1;
    const double alpha = (s2 * s2 * s2 / s1 - s1 * s1 * s1 / s2) / det;
    const double beta = (s1 / s2 - s2 / s1) / det;
    OddPolynomial p;
    p.coeffs = {0.0, alpha, 0.0, beta};
    const double m = p.max_abs_on_interval();
    const double c = (1.0 - 1e-6) / m;
    for (auto& v : p.coeffs) v *= c;
    return {p, c};
}

namespace {

// Roots of a real polynomial via the balanced companion matrix.
std::vector<cd> poly_roots(const std::vector<double>& coeffs) {
    int deg = int(coeffs.size()) - 1;
    while (deg > 0 && std::abs(coeffs[size_t(deg)]) < 1e-300) --deg;
    if (deg < 1) return {};
    Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(deg, deg);
    for (int i = 0; i < deg; ++i) comp(0, i) = -coeffs[size_t(deg - 1 - i)] / coeffs[size_t(deg)];
    for (int i = 1; i < deg; ++i) comp(i, i - 1) = 1.0;
    Eigen::EigenSolver<Eigen::MatrixXd> es(comp, false);
    std::vector<cd> roots(static_cast<size_t>(deg));
    for (int i = 0; i < deg; ++i) roots[size_t(i)] = es.eigenvalues()(i);
    return roots;
}

std::vector<double> poly_mul(const std::vector<double>& a, const std::vector<double>& b) {
    std::vector<double> r(a.size() + b.size() - 1, 0.0);
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    return r;
}

// Coefficients of A(cos t) as a Laurent polynomial in z = e^{it}, returned
// as S(z) = z^{2d} A((z + 1/z)/2), an ordinary polynomial of degree 4d.
std::vector<double> laurent_lift(const std::vector<double>& acoeffs, int d) {
    // powers of (z^2 + 1)/2 times z^{2d - k} for the x^k term.
    const int deg = 4 * d;
    std::vector<double> out(size_t(deg) + 1, 0.0);
    std::vector<double> half{0.5};  // ((z^2+1)/2)^k, coefficients in z^2... build in z directly
    // term x^k -> (z^2+1)^k / 2^k * z^{2d - k}
    for (size_t k = 0; k < acoeffs.size(); ++k) {
        if (acoeffs[k] == 0.0) continue;
        // (z^2+1)^k coefficients in z.
        std::vector<double> pow{1.0};
        const std::vector<double> base{1.0, 0.0, 1.0};  // 1 + z^2
        for (size_t t = 0; t < k; ++t) pow = poly_mul(pow, base);
        const double scale = acoeffs[k] / std::pow(2.0, double(k));
        const int shift = 2 * d - int(k);
        for (size_t j = 0; j < pow.size(); ++j) {
            const int idx = int(j) + shift;
            out[size_t(idx)] += scale * pow[j];
        }
    }
    (void)half;
    return out;
}

struct Completion {
    std::vector<double> g;  // odd real polynomial, Chebyshev-combined
    std::vector<double> q;  // real polynomial of parity d-1
};

// Finds g, q with f^2 + g^2 + (1-x^2) q^2 = 1 on [-1,1] by spectral
// factorization of 1 - f^2 over the unit circle.
Completion complete(const OddPolynomial& f, int d) {
    // A(x) = 1 - f(x)^2.
    std::vector<double> fc = f.coeffs;
    fc.resize(size_t(d) + 1, 0.0);
    std::vector<double> a = poly_mul(fc, fc);
    for (auto& v : a) v = -v;
    a[0] += 1.0;

    const std::vector<double> S = laurent_lift(a, d);
    std::vector<cd> roots = poly_roots(S);
    // Half set strictly inside the unit disk; pairs sit at rho and 1/conj(rho).
    std::vector<cd> inside;
    for (const cd& r : roots)
        if (std::abs(r) < 1.0) inside.push_back(r);
    if (int(inside.size()) != 2 * d) {
        // Roots hugging the circle: partition by pairing magnitudes.
        std::sort(roots.begin(), roots.end(),
                  [](const cd& x, const cd& y) { return std::abs(x) < std::abs(y); });
        inside.assign(roots.begin(), roots.begin() + 2 * d);
    }
    // b(z) = prod (z - rho), real coefficients after conjugate pairing.
    std::vector<cd> b{1.0};
    for (const cd& r : inside) {
        std::vector<cd> nb(b.size() + 1, cd(0, 0));
        for (size_t i = 0; i < b.size(); ++i) {
            nb[i + 1] += b[i];
            nb[i] -= b[i] * r;
        }
        b = std::move(nb);
    }
    std::vector<double> br(b.size());
    for (size_t i = 0; i < b.size(); ++i) br[i] = b[i].real();

    // Normalize |h|^2 = A on the circle; evaluate at z = 1 (theta = 0).
    double b_at_1 = 0.0;
    for (double v : br) b_at_1 += v;
    double a_at_1 = 0.0;
    {
        double x = 1.0;
        for (size_t k = 0; k < a.size(); ++k) a_at_1 += a[k] * std::pow(x, double(k));
    }
    if (std::abs(b_at_1) < 1e-14) throw NoConvergence("degenerate spectral factor");
    const double cnorm = std::sqrt(std::max(a_at_1, 0.0)) / std::abs(b_at_1);

    // h_k = cnorm * br[k + d]; g = sum h_k T_k, q = sum h_k U_{k-1}.
    Completion comp;
    comp.g.assign(size_t(d) + 1, 0.0);
    comp.q.assign(size_t(d), 0.0);
    // Chebyshev polynomials up to degree d.
    std::vector<std::vector<double>> T(size_t(d) + 1), U(size_t(d) + 1);
    T[0] = {1.0};
    U[0] = {1.0};
    if (d >= 1) {
        T[1] = {0.0, 1.0};
        U[1] = {0.0, 2.0};
    }
    for (int k = 2; k <= d; ++k) {
        std::vector<double> t = poly_mul({0.0, 2.0}, T[size_t(k - 1)]);
        t.resize(size_t(k) + 1, 0.0);
        for (size_t j = 0; j < T[size_t(k - 2)].size(); ++j) t[j] -= T[size_t(k - 2)][j];
        T[size_t(k)] = t;
        std::vector<double> u = poly_mul({0.0, 2.0}, U[size_t(k - 1)]);
        u.resize(size_t(k) + 1, 0.0);
        for (size_t j = 0; j < U[size_t(k - 2)].size(); ++j) u[j] -= U[size_t(k - 2)][j];
        U[size_t(k)] = u;
    }
    for (int k = -d; k <= d; ++k) {
        const double hk = cnorm * br[size_t(k + d)];
        if (hk == 0.0) continue;
        const int ak = std::abs(k);
        for (size_t j = 0; j < T[size_t(ak)].size(); ++j) comp.g[j] += hk * T[size_t(ak)][j];
        if (k > 0)
            for (size_t j = 0; j < U[size_t(k - 1)].size(); ++j) comp.q[j] += hk * U[size_t(k - 1)][j];
        else if (k < 0)
            for (size_t j = 0; j < U[size_t(-k - 1)].size(); ++j)
                comp.q[j] -= hk * U[size_t(-k - 1)][j];
    }
    return comp;
}

}  // namespace

double qsp_product_real(const std::vector<double>& phases, double x) {
    const double s = std::sqrt(std::max(0.0, 1.0 - x * x));
    Eigen::Matrix2cd u;
    u << std::exp(i1 * phases[0]), 0.0, 0.0, std::exp(-i1 * phases[0]);
    Eigen::Matrix2cd w;
    w << x, i1 * s, i1 * s, x;
    for (size_t j = 1; j < phases.size(); ++j) {
        Eigen::Matrix2cd e;
        e << std::exp(i1 * phases[j]), 0.0, 0.0, std::exp(-i1 * phases[j]);
        u = u * w * e;
    }
    const Eigen::Vector2cd plus(1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0));
    return (plus.adjoint() * u * plus)(0).real();
}

PhaseSequence qsp_phases(const OddPolynomial& target) {
    const int d = target.degree();
    if (d % 2 == 0) throw Error("qsp_phases expects an odd polynomial");
    for (size_t k = 0; k < target.coeffs.size(); k += 2)
        if (target.coeffs[k] != 0.0) throw Error("qsp_phases expects an odd polynomial");
    const double sup = target.max_abs_on_interval();
    if (sup > 1.0) throw Error("target polynomial must satisfy |P| <= 1 on [-1,1]");

    if (d == 1) {
        // Closed form, valid up to |c| = 1: P = (c + i sqrt(1-c^2)) x, Q = 1.
        const double cc = target.coeffs[1];
        const double kappa = std::atan2(std::sqrt(std::max(0.0, 1.0 - cc * cc)), cc);
        PhaseSequence seq;
        seq.degree = 1;
        seq.phases = {kappa / 2.0, kappa / 2.0};
        seq.target = target;
        for (int k = 0; k < 50; ++k) {
            const double x = std::cos(M_PI * (k + 0.5) / 50.0);
            if (std::abs(qsp_product_real(seq.phases, x) - target.eval(x)) > 1e-9)
                throw NoConvergence("qsp phase verification failed");
        }
        return seq;
    }

    // Complete to (P, Q) with P = f + i g.
    const Completion comp = complete(target, d);

    // Complex coefficient arrays for stripping.
    std::vector<cd> P(size_t(d) + 1, cd(0, 0)), Q(size_t(d), cd(0, 0));
    for (int k = 0; k <= d; ++k) {
        double fr = k < int(target.coeffs.size()) ? target.coeffs[size_t(k)] : 0.0;
        P[size_t(k)] = cd(fr, comp.g[size_t(k)]);
    }
    for (int k = 0; k < d; ++k) Q[size_t(k)] = cd(comp.q[size_t(k)], 0.0);

    // Layer stripping.
    std::vector<double> phases(size_t(d) + 1, 0.0);
    int deg = d;
    for (int j = d; j >= 1; --j) {
        const cd pl = P[size_t(deg)];
        const cd ql = deg >= 1 ? Q[size_t(deg - 1)] : cd(0, 0);
        if (std::abs(ql) < 1e-14) throw NoConvergence("qsp stripping: degenerate leading term");
        const double phi = 0.5 * std::arg(pl / ql);
        phases[size_t(j)] = phi;
        const cd em = std::exp(-i1 * phi), ep = std::exp(i1 * phi);
        // P' = x P e^{-i phi} + (1 - x^2) Q e^{i phi}; Q' = x Q e^{i phi} - P e^{-i phi}.
        std::vector<cd> xP(size_t(deg) + 2, cd(0, 0));
        for (int k = 0; k <= deg; ++k) xP[size_t(k + 1)] = P[size_t(k)] * em;
        std::vector<cd> om(size_t(deg) + 2, cd(0, 0));
        for (int k = 0; k <= deg - 1; ++k) {
            om[size_t(k)] += Q[size_t(k)] * ep;
            om[size_t(k + 2)] -= Q[size_t(k)] * ep;
        }
        std::vector<cd> Pfull(size_t(deg) + 2, cd(0, 0));
        for (size_t k = 0; k < Pfull.size(); ++k) Pfull[k] = xP[k] + om[k];
        // Degrees deg+1 and deg cancel by construction; truncate.
        std::vector<cd> xQ(size_t(deg) + 1, cd(0, 0));
        for (int k = 0; k <= deg - 1; ++k) xQ[size_t(k + 1)] = Q[size_t(k)] * ep;
        std::vector<cd> Qfull(size_t(deg) + 1, cd(0, 0));
        for (int k = 0; k <= deg; ++k) Qfull[size_t(k)] = xQ[size_t(k)] - P[size_t(k)] * em;

        deg -= 1;
        P.assign(size_t(deg) + 1, cd(0, 0));
        for (int k = 0; k <= deg; ++k) P[size_t(k)] = Pfull[size_t(k)];
        Q.assign(size_t(std::max(deg, 1)), cd(0, 0));
        for (int k = 0; k <= deg - 1; ++k) Q[size_t(k)] = Qfull[size_t(k)];
    }
    phases[0] = std::arg(P[0]);

    PhaseSequence seq;
    seq.degree = d;
    seq.phases = phases;
    seq.target = target;

    // Verify at Chebyshev nodes.
    for (int k = 0; k < 50; ++k) {
        const double x = std::cos(M_PI * (k + 0.5) / 50.0);
        const double got = qsp_product_real(phases, x);
        if (std::abs(got - target.eval(x)) > 1e-9)
            throw NoConvergence("qsp phase verification failed");
    }
    return seq;
}

std::vector<double> circuit_phases_from_qsp(const PhaseSequence& seq) {
    const int d = seq.degree;
    std::vector<double> phi = seq.phases;
    // Re P -> Im P by rotating P's global phase; sign depends on d mod 4.
    phi[0] += (d % 4 == 3) ? M_PI / 2 : -M_PI / 2;
    // Gauge shift so the trailing QSP phase equals -pi/4.
    const double alpha = phi[size_t(d)] + M_PI / 4;
    phi[0] += alpha;
    phi[size_t(d)] = -M_PI / 4;
    // Circuit phases: position d takes phi~_0 + pi/4; positions d-k take
    // phi~_k + pi/2 for k = 1..d-1.
    std::vector<double> out(size_t(d) + 1, 0.0);  // out[1..d] used
    out[size_t(d)] = phi[0] + M_PI / 4;
    for (int k = 1; k <= d - 1; ++k) out[size_t(d - k)] = phi[size_t(k)] + M_PI / 2;
    return out;
}

}  // namespace qbench
