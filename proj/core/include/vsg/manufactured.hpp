#pragma once

#include "vsg/evolution.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace vsg {

/// a(t) = c0 + c1 t + s sin(omega t)
struct TimeProfile {
    double c0 = 1.0;
    double c1 = 0.0;
    double s = 0.0;
    double omega = 0.0;

    double value(double t) const;
    double rate(double t) const;
    double accel(double t) const;
};

/// One term a(t) cos(2 pi k.x + phase) of component `component` of y*.
struct ManufacturedTerm {
    int component = 0;
    std::vector<int> k;
    double phase = 0.0;
    TimeProfile profile;
};

/// Prescribed motion y*(t, x) as a finite trigonometric polynomial.
struct ManufacturedCase {
    int d = 2;
    std::vector<ManufacturedTerm> terms;

    /// max over terms of max_a |k_a|
    int bandwidth() const;
    /// Spectral y*, dy*/dt or d2y*/dt2 (derivative order 0, 1, 2) on `grid`.
    /// Throws RangeError if a term does not fit below the Nyquist row.
    SpectralField y_hat(const SpectralGrid& grid, double t, int derivative = 0) const;
};

/// Terms with amplitude A rho^{|k|_1} over all wavevectors with
/// 1 <= max|k_a| <= band, seeded phases and slowly varying profiles.
ManufacturedCase decaying_case(int d, int band, double amplitude, double rho, std::uint64_t seed);

/// Single-mode y*_1 = (a0 + a1 t) cos(2 pi x_1); exact for imex_cnab2 with
/// the quadratic model.
ManufacturedCase linear_single_mode_case(int d, double a0, double a1);

/// f = y*_tt - Div S(grad y*) - nu Lap y*_t + delta Bilap y*, spectrally exact:
/// the stress is evaluated on a grid padded so that no product aliases.
SpectralField manufactured_forcing_hat(const ManufacturedCase& c, const EnergyModel& model, double nu,
                                       double delta, const SpectralGrid& grid, double t);
RealField manufactured_forcing(const ManufacturedCase& c, const EnergyModel& model, double nu, double delta,
                               const SpectralGrid& grid, double t);
/// Solver forcing callback for config (uses its grid, model, nu, delta).
Forcing make_forcing(const ManufacturedCase& c, const SolverConfig& config);

struct MmsSample {
    int n = 0;
    double dt = 0.0;
    double error_y = 0.0;  // ||y - y*||_2 at t_end over all modes of y*
    double error_u = 0.0;
    bool under_resolved = false;  // cutoff < bandwidth of y*
    double projection_floor = 0.0;  // ||y* - P^N y*||_2 at t_end
};

struct ConvergenceReport {
    std::vector<MmsSample> temporal;  // fixed n, decreasing dt
    std::vector<MmsSample> spatial;   // fixed dt, increasing n
    double temporal_order = 0.0;      // least-squares slope of log error_y vs log dt
    std::vector<std::string> notes;
};

/// Runs the forced system from exact data. `base` supplies model, nu, delta,
/// scheme, dealias and t_end; its grid and dt are replaced per sample.
ConvergenceReport mms_study(const ManufacturedCase& c, const SolverConfig& base, int n_temporal,
                            const std::vector<double>& dt_list, double dt_spatial, const std::vector<int>& n_list);

/// Single forced run; returns the error sample at base.t_end.
MmsSample mms_run(const ManufacturedCase& c, const SolverConfig& config);

}  // namespace vsg
