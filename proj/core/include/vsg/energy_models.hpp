#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace vsg {

/// d x d matrix with (i, alpha) stored row-major; d <= 3, no heap allocation.
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor, 3, 3>;

/// Second derivative of W acting on matrix directions, indexed by the
/// row-major flattening (i*d + alpha). At most 9 x 9.
using Hessian = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::ColMajor, 9, 9>;

enum class EnergyKind { double_well, quadratic };

std::string to_string(EnergyKind kind);
EnergyKind energy_kind_from_string(const std::string& name);

/// Stored energy W(F) and the constants it is declared to satisfy.
///
///   double_well: W = 1/4 (|F|^2 - 1)^2, p = 4, K = 1, coercivity c = 1
///   quadratic:   W = 1/2 |F|^2,         p = 2, K = 0, coercivity c = 1
///
/// K is the semiconvexity shift: W + K/2 |F|^2 is convex. `coercivity` is the
/// constant c in D^2(W + K/2|F|^2) >= c |F|^(p-2) I.
struct EnergyModel {
    EnergyKind kind = EnergyKind::double_well;
    int d = 2;
    double p = 4.0;
    double K = 1.0;
    double growth_c = 0.125;
    double growth_C = 1.0;
    double coercivity = 1.0;

    static EnergyModel double_well(int d);
    static EnergyModel quadratic(int d);

    int entries() const noexcept { return d * d; }

    // Flat-array kernels used in the grid loops. `F` and `S` hold d*d entries
    // in (i*d + alpha) order. No finiteness checks.
    double energy_density(std::span<const double> F) const noexcept;
    void stress(std::span<const double> F, std::span<double> S) const noexcept;
    /// G : D^2 W(F) : H
    double hessian_form(std::span<const double> F, std::span<const double> G,
                        std::span<const double> H) const noexcept;
    /// Operator norm of D^2 W(F) (largest absolute eigenvalue).
    double hessian_norm(std::span<const double> F) const noexcept;
};

double eval_W(const EnergyModel& model, const Matrix& F);
Matrix eval_S(const EnergyModel& model, const Matrix& F);
Hessian eval_D2W(const EnergyModel& model, const Matrix& F);

/// One line of a hypothesis check.
struct HypothesisResult {
    std::string name;
    bool passed = false;
    /// Worst value of (satisfied side - required side) over the samples;
    /// negative means violated.
    double worst_margin = 0.0;
    /// Constant fitted from the samples, when the hypothesis is existential.
    double fitted_constant = 0.0;
    bool has_fitted_constant = false;
    std::string note;
};

struct HypothesisReport {
    std::vector<HypothesisResult> results;
    std::size_t sample_count = 0;
    double radius = 0.0;
    std::uint64_t seed = 0;

    bool all_passed() const;
    const HypothesisResult& at(const std::string& name) const;
    std::string to_text() const;
};

/// Samples matrices uniformly in the Frobenius ball of `radius` and checks
/// the growth, semiconvexity, monotonicity and Hessian bounds on W.
///
/// Semiconvexity (H3, H5) and coercivity (H6, H7) are checked against the
/// model's declared K and c. The growth constants of H2, H4 and H8 are
/// existential: the report carries the tightest constants consistent with
/// the samples and passes when they are positive and finite.
HypothesisReport verify_hypotheses(const EnergyModel& model, std::size_t sample_count,
                                   double radius, std::uint64_t seed, double tol = 1e-10);

}  // namespace vsg
