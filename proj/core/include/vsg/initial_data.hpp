#pragma once

#include "vsg/evolution.hpp"

#include <cstdint>
#include <string>

namespace vsg {

/// Named initial-data presets. All give y directly, so F = grad y is curl-free.
///   zero           y = u = 0
///   two_mode       y_i = A [sin(2 pi x_i + phi_i) + 1/2 cos(2 pi (x_i + x_{i+1}) + psi_i)]
///                  u_i = B sin(2 pi x_{i+1}); random phases when seed != 0
///   gaussian_bump  y_i = A s_i (prod_a exp(kappa (cos(2 pi (x_a - 1/2)) - 1)) - mean),
///                  kappa = 1 / (2 pi w)^2, s = (1, -1/2, 1/3)
///   random         seeded Gaussian coefficients on 1 <= |k| <= modes (Euclidean),
///                  scaled by A / |k|^2 for y and B / |k|^2 for u
///   file           state written by write_state, stem in `path`
struct InitialSpec {
    std::string kind = "two_mode";
    double amplitude = 0.1;
    double velocity = 0.0;
    double width = 0.15;
    int modes = 2;
    std::uint64_t seed = 0;
    std::string path;

    bool operator==(const InitialSpec&) const = default;
};

/// Builds the preset on `grid`, projected to the grid cutoff.
State make_initial_state(const SpectralGrid& grid, const InitialSpec& spec);

/// Adds a high-mode tail y_1 += A sin(2 pi k_h x_d) with k_h = round(delta^-1/2 / 2)
/// clamped to [1, cutoff], and A chosen so that the tail alone has
/// ||grad F||_2 = rho * delta^-(1/2 - eps). Returns k_h.
int roughen(State& state, double delta, double rho, double eps);

}  // namespace vsg
