#pragma once

#include "vsg/evolution.hpp"
#include "vsg/initial_data.hpp"

#include <optional>
#include <string>
#include <vector>

namespace vsg {

enum class SweepParameter { delta, nu };
std::string to_string(SweepParameter p);

/// A sweep of delta (reference delta = 0) or nu (reference nu = 0) over
/// shared initial data. Every member uses base's grid, model, dt and scheme.
struct LimitStudy {
    SolverConfig base;
    SweepParameter parameter = SweepParameter::delta;
    std::vector<double> values;        // strictly decreasing, > 0
    std::vector<double> r_list{2.0};   // error exponents
    std::vector<double> sample_times;  // multiples of base.dt, <= base.t_end
    InitialSpec initial;
    /// Optional high-mode data tail for delta sweeps (see roughen); 0 = off.
    double roughening = 0.0;
    double roughening_eps = 0.1;
};

/// ||F^param - F^ref||_r and ||u^param - u^ref||_2 at one time.
struct ErrorSample {
    double param = 0.0;
    double t = 0.0;
    double r = 2.0;
    double error_F = 0.0;
    double error_u = 0.0;
};

/// Least-squares fit of log(error) against log(param).
struct RateFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
    double t = 0.0;
    double r = 0.0;
    std::vector<std::pair<double, double>> points;  // (param, error) used
    std::string note;
};

/// Throws InsufficientData with fewer than 3 points of positive error.
/// Non-positive errors are skipped and mentioned in the note.
RateFit fit_rate(const std::vector<std::pair<double, double>>& points, double at_time = 0.0);

struct StudyResult {
    SweepParameter parameter = SweepParameter::delta;
    std::vector<ErrorSample> errors;
    std::vector<RateFit> fits;  // one per (r, t)
    /// (param, (K/2) int_0^T int |grad F|^2) per swept value, trapezoidal in
    /// time; defines C1 of the rate bound.
    std::vector<std::pair<double, double>> source_integral;
    std::vector<std::string> notes;

    /// Errors for exponent r at time t, ordered as the sweep.
    std::vector<ErrorSample> select(double r, double t) const;
    const RateFit& fit(double r, double t) const;
};

/// Runs the sweep and its reference. A member blow-up throws Error naming
/// the parameter value.
StudyResult run_limit_study(const LimitStudy& study);

struct TheoremBound {
    double bound = 0.0;      // bound on ||F^delta - F_bar||_r^r
    double threshold = 0.0;  // largest admissible delta at this t
    bool delta_admissible = false;
};

/// (C1 delta^{r/2})^{exp(-C2 t)} exp(2 - 2 exp(-C2 t)) and the smallness
/// condition delta <= exp((4/r)(1 - exp(C2 t))) / C1^{2/r}.
/// Requires C1, C2 > 0, 1 < r < 2, t >= 0, delta > 0.
TheoremBound theorem_bound(double C1, double C2, double delta, double r, double t);

/// Calibration of the rate bound against a delta study.
///
/// C1 is the data quantity that bounds the capillary dissipation,
/// (1/2)^{1 - 2/r} max_delta (K/2) int_0^T int |grad F^delta|^2, and C2 is the
/// smallest value (bisection) for which the bound holds at t0 for every
/// swept delta. Dominance is then checked at every later sample time for the
/// admissible deltas.
struct BoundCheck {
    double C1 = 0.0;
    double C2 = 0.0;
    double t0 = 0.0;
    bool dominates = true;
    std::size_t checked = 0;     // (delta, t) pairs with t > t0 that were admissible
    std::size_t inadmissible = 0;
    double worst_ratio = 0.0;    // max measured / bound over checked pairs
    std::string to_text() const;
};
BoundCheck calibrate_theorem_bound(const StudyResult& result, double r);

struct RefinementSample {
    int cutoff = 0;
    double t = 0.0;
    double error_F = 0.0;  // vs the largest cutoff, L2
    double error_u = 0.0;
};

struct RefinementResult {
    std::vector<RefinementSample> samples;
    std::vector<std::string> notes;
};

/// Runs base at every cutoff (data projected per cutoff) and compares with
/// the largest. Requires >= 2 increasing cutoffs, the largest <= n/2 - 1.
RefinementResult galerkin_refinement_study(const SolverConfig& base, const std::vector<int>& cutoffs,
                                           const InitialSpec& initial, const std::vector<double>& sample_times);

}  // namespace vsg
