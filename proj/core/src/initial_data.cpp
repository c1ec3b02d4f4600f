#include "vsg/initial_data.hpp"

#include "vsg/errors.hpp"
#include "vsg/snapshot.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

namespace vsg {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

State from_physical(const SpectralGrid& grid, RealField y, RealField u) {
    return init_state(grid, u, y, GivenAs::y, 0.0);
}

State two_mode(const SpectralGrid& grid, const InitialSpec& spec) {
    const int d = grid.dim();
    std::vector<double> phi(d, 0.0), psi(d, 0.0);
    if (spec.seed != 0) {
        std::mt19937_64 rng(spec.seed);
        std::uniform_real_distribution<double> U(0.0, two_pi);
        for (int i = 0; i < d; ++i) {
            phi[i] = U(rng);
            psi[i] = U(rng);
        }
    }
    RealField y(grid, Rank::vector), u(grid, Rank::vector);
    for (std::size_t p = 0; p < grid.points(); ++p) {
        for (int i = 0; i < d; ++i) {
            const int j = (i + 1) % d;
            const double xi = grid.coordinate(p, i);
            const double xj = grid.coordinate(p, j);
            y.at(p, i) = spec.amplitude * (std::sin(two_pi * xi + phi[i]) + 0.5 * std::cos(two_pi * (xi + xj) + psi[i]));
            u.at(p, i) = spec.velocity * std::sin(two_pi * xj);
        }
    }
    return from_physical(grid, std::move(y), std::move(u));
}

State gaussian_bump(const SpectralGrid& grid, const InitialSpec& spec) {
    if (!(spec.width > 0.0)) throw RangeError("gaussian_bump width must be > 0");
    const int d = grid.dim();
    const double kappa = 1.0 / std::pow(two_pi * spec.width, 2);
    const double scale[3] = {1.0, -0.5, 1.0 / 3.0};
    std::vector<double> bump(grid.points());
    double mean = 0.0;
    for (std::size_t p = 0; p < grid.points(); ++p) {
        double v = 1.0;
        for (int a = 0; a < d; ++a) v *= std::exp(kappa * (std::cos(two_pi * (grid.coordinate(p, a) - 0.5)) - 1.0));
        bump[p] = v;
        mean += v;
    }
    mean /= static_cast<double>(grid.points());
    RealField y(grid, Rank::vector), u(grid, Rank::vector);
    for (std::size_t p = 0; p < grid.points(); ++p)
        for (int i = 0; i < d; ++i) {
            y.at(p, i) = spec.amplitude * scale[i] * (bump[p] - mean);
            u.at(p, i) = spec.velocity * scale[i] * (bump[p] - mean);
        }
    return from_physical(grid, std::move(y), std::move(u));
}

State random_modes(const SpectralGrid& grid, const InitialSpec& spec) {
    if (spec.modes < 1) throw RangeError("random initial data needs modes >= 1");
    const int d = grid.dim();
    std::mt19937_64 rng(spec.seed);
    std::normal_distribution<double> N(0.0, 1.0);
    SpectralField y(grid, Rank::vector), u(grid, Rank::vector);
    // Fill one member of each +-k pair and mirror it, in flat-index order.
    for (std::size_t idx = 0; idx < grid.points(); ++idx) {
        const double k2 = grid.kappa2(idx) / (two_pi * two_pi);
        if (k2 == 0.0 || k2 > spec.modes * spec.modes || grid.max_abs_wavenumber(idx) > grid.cutoff() ||
            grid.is_nyquist(idx))
            continue;
        std::vector<int> neg(d);
        for (int a = 0; a < d; ++a) neg[a] = -grid.wavenumber(idx, a);
        const std::size_t mirror = grid.index_of(neg);
        if (mirror < idx) continue;
        for (int i = 0; i < d; ++i) {
            const Complex cy(N(rng), N(rng));
            const Complex cu(N(rng), N(rng));
            y.at(idx, i) = spec.amplitude / k2 * cy;
            u.at(idx, i) = spec.velocity / k2 * cu;
            y.at(mirror, i) = std::conj(y.at(idx, i));
            u.at(mirror, i) = std::conj(u.at(idx, i));
        }
    }
    return State(0.0, std::move(y), std::move(u));
}

}  // namespace

State make_initial_state(const SpectralGrid& grid, const InitialSpec& spec) {
    if (!std::isfinite(spec.amplitude) || !std::isfinite(spec.velocity))
        throw RangeError("initial amplitudes must be finite");
    if (spec.kind == "zero") return State(grid);
    if (spec.kind == "two_mode") return two_mode(grid, spec);
    if (spec.kind == "gaussian_bump") return gaussian_bump(grid, spec);
    if (spec.kind == "random") return random_modes(grid, spec);
    if (spec.kind == "file") {
        if (spec.path.empty()) throw RangeError("file initial data needs a path");
        State s = read_state(spec.path, grid);
        return from_physical(grid, inverse_transform(s.y_hat), inverse_transform(s.u_hat));
    }
    throw RangeError("unknown initial data kind '" + spec.kind + "'");
}

int roughen(State& state, double delta, double rho, double eps) {
    if (!(delta > 0.0) || !(rho >= 0.0) || !(eps >= 0.0 && eps < 0.5))
        throw RangeError("roughen: need delta > 0, rho >= 0, 0 <= eps < 1/2");
    const auto& g = state.grid();
    const int d = g.dim();
    const int kh = std::clamp(static_cast<int>(std::lround(0.5 / std::sqrt(delta))), 1, g.cutoff());
    if (rho == 0.0) return kh;
    const double kappa = two_pi * kh;
    // Tail F_{1d} = A kappa cos(kappa x_d): mean |grad F|^2 = A^2 kappa^4 / 2.
    const double target = rho * std::pow(delta, -(0.5 - eps));
    const double A = target * std::sqrt(2.0) / (kappa * kappa);
    std::vector<int> k(d, 0);
    k[d - 1] = kh;
    const std::size_t ip = g.index_of(k);
    k[d - 1] = -kh;
    const std::size_t im = g.index_of(k);
    // sin(theta) = (e^{i theta} - e^{-i theta}) / 2i
    state.y_hat.at(ip, 0) += Complex(0.0, -0.5 * A);
    state.y_hat.at(im, 0) += Complex(0.0, 0.5 * A);
    return kh;
}

}  // namespace vsg
