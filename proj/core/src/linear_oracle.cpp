#include "vsg/errors.hpp"
#include "vsg/evolution.hpp"

#include <cmath>

namespace vsg {

namespace {

using C2x2 = std::array<Complex, 4>;

// exp(tA) for A = [[0, 1], [-p, -q]] through its eigenvalues.
C2x2 generator_exponential(double p, double q, double t) {
    const Complex disc = std::sqrt(Complex(q * q - 4.0 * p, 0.0));
    const Complex l1 = 0.5 * (-q + disc);
    const Complex l2 = 0.5 * (-q - disc);
    const C2x2 A = {0.0, 1.0, -p, -q};
    const double scale = std::max({1.0, std::abs(l1), std::abs(l2)});

    if (std::abs(l1 - l2) * std::max(1.0, t) > 1e-5 * scale) {
        // Sylvester: exp(tA) = [e1 (A - l2 I) - e2 (A - l1 I)] / (l1 - l2)
        const Complex e1 = std::exp(l1 * t);
        const Complex e2 = std::exp(l2 * t);
        const Complex inv = 1.0 / (l1 - l2);
        C2x2 out;
        for (int i = 0; i < 4; ++i) {
            const Complex diag = (i == 0 || i == 3) ? Complex(1.0) : Complex(0.0);
            out[i] = (e1 * (A[i] - l2 * diag) - e2 * (A[i] - l1 * diag)) * inv;
        }
        return out;
    }
    // Nearly repeated: exp(tA) = e^{mt} exp(tN) with N = A - mI, N^2 = mu^2 I.
    const Complex m = 0.5 * (l1 + l2);
    const Complex mu2 = 0.25 * (l1 - l2) * (l1 - l2);
    const C2x2 N = {A[0] - m, A[1], A[2], A[3] - m};
    Complex even = 1.0, odd = t;
    Complex even_sum = even, odd_sum = odd;
    for (int j = 1; j < 12; ++j) {
        even *= mu2 * t * t / double((2 * j - 1) * (2 * j));
        odd *= mu2 * t * t / double((2 * j) * (2 * j + 1));
        even_sum += even;
        odd_sum += odd;
    }
    const Complex em = std::exp(m * t);
    return {em * (even_sum + odd_sum * N[0]), em * odd_sum * N[1], em * odd_sum * N[2],
            em * (even_sum + odd_sum * N[3])};
}

}  // namespace

State linear_oracle(const SolverConfig& config, const State& initial, double t) {
    if (config.model.kind != EnergyKind::quadratic)
        throw DomainError("linear_oracle requires the quadratic energy model");
    if (config.forcing) throw DomainError("linear_oracle does not support forcing");
    const auto& g = initial.grid();
    const int d = g.dim();
    State out(initial.t + t, SpectralField(g, Rank::vector), SpectralField(g, Rank::vector));
    for (std::size_t idx = 0; idx < g.points(); ++idx) {
        const double k2 = g.kappa2(idx);
        const C2x2 E = generator_exponential(k2 + config.delta * k2 * k2, config.nu * k2, t);
        for (int i = 0; i < d; ++i) {
            const Complex y = initial.y_hat.at(idx, i);
            const Complex u = initial.u_hat.at(idx, i);
            out.y_hat.at(idx, i) = E[0] * y + E[1] * u;
            out.u_hat.at(idx, i) = E[2] * y + E[3] * u;
        }
    }
    return out;
}

}  // namespace vsg
