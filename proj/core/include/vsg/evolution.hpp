#pragma once

#include "vsg/energy_models.hpp"
#include "vsg/spectral.hpp"

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace vsg {

enum class Scheme { imex_cnab2, exponential_midpoint };

std::string to_string(Scheme scheme);
Scheme scheme_from_string(const std::string& name);
std::string to_string(DealiasRule rule);
DealiasRule dealias_rule_from_string(const std::string& name);

/// Solver unknowns: the motion y and velocity u = dy/dt in spectral form.
/// The deformation gradient is always derived as F = grad y.
struct State {
    double t = 0.0;
    SpectralField y_hat;
    SpectralField u_hat;

    explicit State(const SpectralGrid& grid)
        : y_hat(grid, Rank::vector), u_hat(grid, Rank::vector) {}
    State(double time, SpectralField y, SpectralField u)
        : t(time), y_hat(std::move(y)), u_hat(std::move(u)) {}

    const SpectralGrid& grid() const noexcept { return y_hat.grid; }
    SpectralField F_hat() const { return F_from_y(y_hat); }
};

/// Spectral vector forcing f(t) added to the momentum equation.
using Forcing = std::function<SpectralField(double t)>;

struct SolverConfig {
    SpectralGrid grid{2, 64};
    EnergyModel model = EnergyModel::double_well(2);
    double nu = 1.0;
    double delta = 0.01;
    double dt = 1e-3;
    double t_end = 1.0;
    Scheme scheme = Scheme::imex_cnab2;
    DealiasRule dealias = DealiasRule::two_thirds;
    Forcing forcing;

    /// Throws RangeError on inconsistent values.
    void validate() const;
    /// nu = delta = 0: pure nonlinear elasticity, no dissipation.
    bool degenerate() const noexcept { return nu == 0.0 && delta == 0.0; }
    /// Number of steps of size dt reaching t_end.
    long steps() const;
};

enum class GivenAs { y, F };

struct InitInfo {
    bool mean_dropped = false;
    std::vector<double> dropped_mean;
};

/// Builds the initial state from physical-space data, projected to the grid
/// cutoff. F data must be curl-free within `tol`.
State init_state(const SpectralGrid& grid, const RealField& u0, const RealField& y0_or_F0,
                 GivenAs given_as, double tol, InitInfo* info = nullptr);

/// Div P^N S(F) evaluated pseudo-spectrally and dealiased.
SpectralField rhs_nonlinear(const State& state, const EnergyModel& model, DealiasRule rule);

/// Per-mode 2x2 real matrix [[m00, m01], [m10, m11]] acting on (y_k, u_k).
using Mode2x2 = std::array<double, 4>;

/// exp(t L) for L = [[0, 1], [-a, -b]] in closed form, a, b >= 0. Uses the
/// hyperbolic/trigonometric split with a series branch at b^2 = 4a.
Mode2x2 linear_block_exponential(double a, double b, double t);

/// Advances the Galerkin system by one step.
///
/// The per-mode linear block (nu Laplacian on u, delta bilaplacian on y) is
/// treated exactly or implicitly; the elastic stress and forcing explicitly.
///   imex_cnab2:           Crank-Nicolson + Adams-Bashforth 2, Heun startup.
///   exponential_midpoint: exact block exponential + explicit midpoint.
class Stepper {
public:
    explicit Stepper(SolverConfig config);

    /// Returns the state at state.t + dt. Throws BlowUp on a non-finite result.
    State step(const State& state);
    /// Forget the multistep history (next step restarts with Heun).
    void reset() { history_.reset(); }

    const SolverConfig& config() const noexcept { return config_; }

private:
    SpectralField explicit_term(const State& state, double t) const;
    State combine(const State& state, const std::vector<Mode2x2>& propagator,
                  const std::vector<std::array<double, 2>>& gain, const SpectralField& g,
                  double t_new) const;

    struct History {
        double t;
        SpectralField g;
    };

    SolverConfig config_;
    // imex_cnab2: z+ = M z + h g col, M = (I - h/2 L)^-1 (I + h/2 L), col = (I - h/2 L)^-1 e2
    std::vector<Mode2x2> cn_step_;
    std::vector<std::array<double, 2>> cn_gain_;
    // exponential_midpoint
    std::vector<Mode2x2> exp_full_;
    std::vector<Mode2x2> exp_half_;
    std::optional<History> history_;
};

/// Exact solution of the quadratic-model system (linear, diagonal per mode)
/// by eigendecomposition of the per-mode 2x2 generator.
State linear_oracle(const SolverConfig& config, const State& initial, double t);

/// Elastic-wave step bound: safety * 2 / omega_max with
/// omega_max = 2 pi (n/2) sqrt(max_x |D^2 W(F(x))|), using the per-axis
/// wavenumber bound. The implicit nu and delta terms do not enter.
double estimate_dt(const SolverConfig& config, const State& state, double safety = 0.5);

}  // namespace vsg
