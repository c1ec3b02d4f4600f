#include "vsg/evolution.hpp"

#include "vsg/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace vsg {

std::string to_string(Scheme scheme) {
    switch (scheme) {
        case Scheme::imex_cnab2: return "imex_cnab2";
        case Scheme::exponential_midpoint: return "exponential_midpoint";
    }
    return "unknown";
}

Scheme scheme_from_string(const std::string& name) {
    if (name == "imex_cnab2") return Scheme::imex_cnab2;
    if (name == "exponential_midpoint") return Scheme::exponential_midpoint;
    throw RangeError("unknown time scheme '" + name + "'");
}

std::string to_string(DealiasRule rule) {
    return rule == DealiasRule::half ? "half" : "two_thirds";
}

DealiasRule dealias_rule_from_string(const std::string& name) {
    if (name == "two_thirds") return DealiasRule::two_thirds;
    if (name == "half") return DealiasRule::half;
    throw RangeError("unknown dealiasing rule '" + name + "'");
}

void SolverConfig::validate() const {
    if (!std::isfinite(nu) || nu < 0.0) throw RangeError("nu must be finite and >= 0");
    if (!std::isfinite(delta) || delta < 0.0) throw RangeError("delta must be finite and >= 0");
    if (!std::isfinite(dt) || dt <= 0.0) throw RangeError("dt must be finite and > 0");
    if (!std::isfinite(t_end) || t_end < 0.0) throw RangeError("t_end must be finite and >= 0");
    if (t_end > 0.0 && dt > t_end) throw RangeError("dt must not exceed t_end");
    if (model.d != grid.dim()) throw RangeError("energy model dimension differs from grid dimension");
    (void)steps();
}

long SolverConfig::steps() const {
    if (t_end == 0.0) return 0;
    const double ratio = t_end / dt;
    const long n = std::lround(ratio);
    if (n < 1 || std::abs(n * dt - t_end) > 1e-9 * std::max(1.0, t_end))
        throw RangeError("t_end must be an integer multiple of dt");
    return n;
}

State init_state(const SpectralGrid& grid, const RealField& u0, const RealField& y0_or_F0,
                 GivenAs given_as, double tol, InitInfo* info) {
    if (!u0.grid.same_layout(grid) || !y0_or_F0.grid.same_layout(grid))
        throw RankMismatch("init_state: initial data grid differs from solver grid");
    if (u0.rank != Rank::vector) throw RankMismatch("init_state: u0 must be a vector field");
    const Rank expected = given_as == GivenAs::y ? Rank::vector : Rank::matrix;
    if (y0_or_F0.rank != expected)
        throw RankMismatch(given_as == GivenAs::y ? "init_state: y0 must be a vector field"
                                                  : "init_state: F0 must be a matrix field");
    auto finite = [](const RealField& f) {
        return std::all_of(f.samples.begin(), f.samples.end(), [](double v) { return std::isfinite(v); });
    };
    if (!finite(u0) || !finite(y0_or_F0)) throw InadmissibleData("init_state: non-finite initial data");

    SpectralField u_hat = forward_transform(u0);
    SpectralField y_hat(grid, Rank::vector);
    if (given_as == GivenAs::y) {
        y_hat = forward_transform(y0_or_F0);
    } else {
        auto rec = reconstruct_y_from_F(forward_transform(y0_or_F0), tol);
        if (info) {
            info->mean_dropped = rec.mean_dropped;
            info->dropped_mean = rec.dropped_mean;
        }
        y_hat = std::move(rec.y);
    }
    // y is fixed up to a constant; pin its mean to zero.
    for (int i = 0; i < grid.dim(); ++i) y_hat.at(0, i) = Complex{};

    State s(0.0, project_modes(y_hat, grid.cutoff()), project_modes(u_hat, grid.cutoff()));
    s.y_hat.grid = grid;
    s.u_hat.grid = grid;
    return s;
}

SpectralField rhs_nonlinear(const State& state, const EnergyModel& model, DealiasRule rule) {
    const auto& g = state.grid();
    RealField F = inverse_transform(state.F_hat());
    RealField S(g, Rank::matrix);
    const std::size_t m = static_cast<std::size_t>(g.dim() * g.dim());
    for (std::size_t p = 0; p < g.points(); ++p)
        model.stress({F.samples.data() + p * m, m}, {S.samples.data() + p * m, m});
    SpectralField S_hat = project_modes(dealias(forward_transform(S), rule), g.cutoff());
    return apply_diff_operator(S_hat, DiffOp::div);
}

Mode2x2 linear_block_exponential(double a, double b, double t) {
    // exp(tL) = exp(-bt/2) [C(t) I + Sn(t) M],  M = L + b/2 I,  M^2 = s I,  s = b^2/4 - a.
    const double s = 0.25 * b * b - a;
    double C = 0.0;   // exp(-bt/2) cosh(sqrt(s) t)
    double Sn = 0.0;  // exp(-bt/2) sinh(sqrt(s) t) / sqrt(s)
    const double st2 = s * t * t;
    if (std::abs(st2) < 1e-2) {
        double c_term = 1.0;
        double s_term = t;
        double c_sum = c_term;
        double s_sum = s_term;
        for (int j = 1; j <= 7; ++j) {
            c_term *= st2 / ((2.0 * j - 1.0) * (2.0 * j));
            s_term *= st2 / ((2.0 * j) * (2.0 * j + 1.0));
            c_sum += c_term;
            s_sum += s_term;
        }
        const double decay = std::exp(-0.5 * b * t);
        C = decay * c_sum;
        Sn = decay * s_sum;
    } else if (s > 0.0) {
        const double r = std::sqrt(s);
        // Both roots written without cancellation: lam_plus = -a / (b/2 + r).
        const double lam_plus = -a / (0.5 * b + r);
        const double lam_minus = -0.5 * b - r;
        const double ep = std::exp(lam_plus * t);
        const double em = std::exp(lam_minus * t);
        C = 0.5 * (ep + em);
        Sn = (ep - em) / (2.0 * r);
    } else {
        const double w = std::sqrt(-s);
        const double decay = std::exp(-0.5 * b * t);
        C = decay * std::cos(w * t);
        Sn = decay * std::sin(w * t) / w;
    }
    return {C + 0.5 * b * Sn, Sn, -a * Sn, C - 0.5 * b * Sn};
}

Stepper::Stepper(SolverConfig config) : config_(std::move(config)) {
    config_.validate();
    const auto& g = config_.grid;
    const double h = config_.dt;
    const std::size_t np = g.points();
    if (config_.scheme == Scheme::imex_cnab2) {
        cn_step_.resize(np);
        cn_gain_.resize(np);
    } else {
        exp_full_.resize(np);
        exp_half_.resize(np);
    }
    for (std::size_t idx = 0; idx < np; ++idx) {
        const double k2 = g.kappa2(idx);
        const double a = config_.delta * k2 * k2;
        const double b = config_.nu * k2;
        if (config_.scheme == Scheme::imex_cnab2) {
            const double det = (1.0 + 0.5 * h * b) + 0.25 * h * h * a;
            // P^-1 = [[1 + hb/2, h/2], [-ha/2, 1]] / det,  Q = [[1, h/2], [-ha/2, 1 - hb/2]]
            const double p00 = (1.0 + 0.5 * h * b) / det, p01 = 0.5 * h / det;
            const double p10 = -0.5 * h * a / det, p11 = 1.0 / det;
            const double q00 = 1.0, q01 = 0.5 * h, q10 = -0.5 * h * a, q11 = 1.0 - 0.5 * h * b;
            cn_step_[idx] = {p00 * q00 + p01 * q10, p00 * q01 + p01 * q11,
                             p10 * q00 + p11 * q10, p10 * q01 + p11 * q11};
            cn_gain_[idx] = {p01, p11};
        } else {
            exp_full_[idx] = linear_block_exponential(a, b, h);
            exp_half_[idx] = linear_block_exponential(a, b, 0.5 * h);
        }
    }
}

SpectralField Stepper::explicit_term(const State& state, double t) const {
    SpectralField g = rhs_nonlinear(state, config_.model, config_.dealias);
    if (config_.forcing) {
        SpectralField f = config_.forcing(t);
        if (!f.grid.same_layout(g.grid) || f.rank != Rank::vector)
            throw RankMismatch("forcing must be a vector field on the solver grid");
        g += project_modes(f, config_.grid.cutoff());
    }
    return g;
}

State Stepper::combine(const State& state, const std::vector<Mode2x2>& propagator,
                       const std::vector<std::array<double, 2>>& gain, const SpectralField& g,
                       double t_new) const {
    const auto& grid = state.grid();
    const int d = grid.dim();
    State out(t_new, SpectralField(grid, Rank::vector), SpectralField(grid, Rank::vector));
    for (std::size_t idx = 0; idx < grid.points(); ++idx) {
        const auto& M = propagator[idx];
        const auto& w = gain[idx];
        for (int i = 0; i < d; ++i) {
            const Complex y = state.y_hat.at(idx, i);
            const Complex u = state.u_hat.at(idx, i);
            const Complex f = g.at(idx, i);
            out.y_hat.at(idx, i) = M[0] * y + M[1] * u + w[0] * f;
            out.u_hat.at(idx, i) = M[2] * y + M[3] * u + w[1] * f;
        }
    }
    return out;
}

namespace {

void check_finite(const State& s) {
    double norm = 0.0;
    for (const auto& c : s.y_hat.coeffs) norm += std::norm(c);
    for (const auto& c : s.u_hat.coeffs) norm += std::norm(c);
    if (!std::isfinite(norm))
        throw BlowUp(s.t, norm, "non-finite state at t = " + std::to_string(s.t));
}

}  // namespace

State Stepper::step(const State& state) {
    const double h = config_.dt;
    const double t = state.t;
    const double t_new = t + h;
    const std::size_t np = config_.grid.points();

    SpectralField g_now = explicit_term(state, t);
    State next(config_.grid);

    if (config_.scheme == Scheme::imex_cnab2) {
        std::vector<std::array<double, 2>> gain(np);
        for (std::size_t idx = 0; idx < np; ++idx) gain[idx] = {h * cn_gain_[idx][0], h * cn_gain_[idx][1]};

        const bool have_history =
            history_ && std::abs(history_->t + h - t) <= 1e-9 * std::max(1.0, std::abs(t));
        if (have_history) {
            SpectralField g_ab = 1.5 * g_now;
            g_ab -= 0.5 * history_->g;
            next = combine(state, cn_step_, gain, g_ab, t_new);
        } else {
            // Heun on the explicit part, Crank-Nicolson on the linear block.
            State predictor = combine(state, cn_step_, gain, g_now, t_new);
            check_finite(predictor);
            SpectralField g_avg = 0.5 * g_now;
            g_avg += 0.5 * explicit_term(predictor, t_new);
            next = combine(state, cn_step_, gain, g_avg, t_new);
        }
        history_ = History{t, std::move(g_now)};
    } else {
        std::vector<std::array<double, 2>> half_gain(np);
        std::vector<std::array<double, 2>> full_gain(np);
        for (std::size_t idx = 0; idx < np; ++idx) {
            half_gain[idx] = {0.5 * h * exp_half_[idx][1], 0.5 * h * exp_half_[idx][3]};
            full_gain[idx] = {h * exp_half_[idx][1], h * exp_half_[idx][3]};
        }
        State mid = combine(state, exp_half_, half_gain, g_now, t + 0.5 * h);
        check_finite(mid);
        SpectralField g_mid = explicit_term(mid, t + 0.5 * h);
        next = combine(state, exp_full_, full_gain, g_mid, t_new);
    }
    check_finite(next);
    return next;
}

double estimate_dt(const SolverConfig& config, const State& state, double safety) {
    const auto& g = state.grid();
    RealField F = inverse_transform(state.F_hat());
    const std::size_t m = static_cast<std::size_t>(g.dim() * g.dim());
    double stiffness = 0.0;
    for (std::size_t p = 0; p < g.points(); ++p)
        stiffness = std::max(stiffness, config.model.hessian_norm({F.samples.data() + p * m, m}));
    const double kappa_max = 2.0 * std::numbers::pi * (g.n() / 2);
    const double omega = kappa_max * std::sqrt(stiffness);
    if (omega == 0.0) return std::numeric_limits<double>::infinity();
    return safety * 2.0 / omega;
}

}  // namespace vsg
