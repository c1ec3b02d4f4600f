#pragma once

#include "vsg/evolution.hpp"

#include <limits>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace vsg {

/// One time sample of the energy and dissipative-structure balances.
struct DiagnosticsRecord {
    double t = 0.0;
    /// int 1/2|u|^2 + W(F) + delta/2 |grad F|^2
    double E = 0.0;
    /// int_0^t nu |grad u|^2
    double diss_visc_cum = 0.0;
    /// int 1/2|u - nu/2 Div F|^2 + nu^2/8 |Div F|^2 + W(F) + delta/2 |grad F|^2
    double G = 0.0;
    /// int_0^t (delta nu/2)|Lap F|^2 + (nu/2)(D^2 W~ : (grad F, grad F) + |grad u|^2)
    double diss_struct_cum = 0.0;
    /// int_0^t (nu K/2) |grad F|^2
    double src_struct_cum = 0.0;
    double curl_res = 0.0;
    double l2_u = 0.0;
    double l2_gradF = 0.0;
    double l2_lapF = 0.0;
    /// (r, ||F||_r)
    std::vector<std::pair<double, double>> lr_F;
};

/// Instantaneous dissipation integrands of the structure balance.
struct StructureRates {
    double capillary = 0.0;  // (delta nu / 2) int |Lap F|^2
    double hessian = 0.0;    // (nu / 2) int D^2 W~(F) : (grad F, grad F)
    double velocity = 0.0;   // (nu / 2) int |grad u|^2
    double total() const noexcept { return capillary + hessian + velocity; }
};

double energy_functional(const State& state, const EnergyModel& model, double delta);
double structure_functional(const State& state, const EnergyModel& model, double nu, double delta);
StructureRates structure_dissipation_rate(const State& state, const EnergyModel& model, double nu,
                                          double delta);

/// int nu/2 |Div F|^2 - u . Div F, the quantity whose time derivative carries
/// the transfer of dissipation to strain gradients.
double transfer_bracket(const State& state, double nu);

/// Quadratic parts of the energy evaluated by Parseval sums instead of grid
/// means; the W(F) term is still a grid mean.
double energy_functional_parseval(const State& state, const EnergyModel& model, double delta);

constexpr double lr_infinity = std::numeric_limits<double>::infinity();

/// (grid mean of |f|^r)^(1/r) with the pointwise Frobenius norm; r = lr_infinity
/// gives the max norm. Throws RangeError for r < 1.
double lr_norm(const RealField& field, double r);

/// Evaluates the full record and accumulates the cumulative time integrals
/// with the trapezoidal rule over every call to advance().
class DiagnosticsTracker {
public:
    DiagnosticsTracker(EnergyModel model, double nu, double delta, std::vector<double> lr_exponents = {});

    void start(const State& state);
    void advance(const State& state);
    /// Record for the most recent state passed to start/advance.
    const DiagnosticsRecord& current() const noexcept { return current_; }
    /// Rates at the most recent state.
    const StructureRates& current_rates() const noexcept { return rates_; }

private:
    struct Sample {
        DiagnosticsRecord record;
        StructureRates rates;
        double visc_rate = 0.0;
        double src_rate = 0.0;
    };
    Sample evaluate(const State& state) const;

    EnergyModel model_;
    double nu_;
    double delta_;
    std::vector<double> lr_exponents_;
    DiagnosticsRecord current_;
    StructureRates rates_;
    double last_t_ = 0.0;
    double last_visc_ = 0.0;
    double last_struct_ = 0.0;
    double last_src_ = 0.0;
    bool started_ = false;
};

struct InequalityReport {
    bool passed = true;
    /// min over records of (allowed side - measured side); negative = violated.
    double worst_margin = std::numeric_limits<double>::infinity();
    double worst_time = 0.0;
    std::optional<double> first_violation;
    std::size_t checked = 0;

    std::string to_text(const std::string& name) const;
};

/// E(t) + diss_visc_cum(t) <= E(0)(1 + rel_tol) + c_slack dt^2 t at every record.
InequalityReport check_energy_inequality(std::span<const DiagnosticsRecord> records, double rel_tol,
                                         double dt, double c_slack = 10.0);

/// G(t) + diss_struct_cum(t) <= G(0)(1 + rel_tol) + src_struct_cum(t) + c_slack dt^2 t.
InequalityReport check_structure_inequality(std::span<const DiagnosticsRecord> records,
                                            double rel_tol, double dt, double c_slack = 10.0);

}  // namespace vsg
