#include "vsg/diagnostics.hpp"

#include "vsg/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>

namespace vsg {

namespace {

// Spectral partial derivative along `axis`, any rank.
SpectralField partial(const SpectralField& f, int axis) {
    SpectralField out(f.grid, f.rank);
    const int nc = f.components();
    for (std::size_t idx = 0; idx < f.grid.points(); ++idx) {
        const Complex factor(0.0, 2.0 * std::numbers::pi * f.grid.wavenumber(idx, axis));
        for (int c = 0; c < nc; ++c) out.at(idx, c) = factor * f.at(idx, c);
    }
    return out;
}

double mean_sq(const RealField& f) {
    double sum = 0.0;
    for (double v : f.samples) sum += v * v;
    return sum / static_cast<double>(f.grid.points());
}

// Physical-space fields shared by every functional.
struct Fields {
    RealField F;
    RealField u;
    std::vector<RealField> dF;  // dF[beta] = d_beta F

    explicit Fields(const State& s)
        : F(inverse_transform(s.F_hat())), u(inverse_transform(s.u_hat)) {
        const SpectralField Fh = s.F_hat();
        for (int b = 0; b < s.grid().dim(); ++b) dF.push_back(inverse_transform(partial(Fh, b)));
    }

    double grad_F_sq() const {
        double sum = 0.0;
        for (const auto& f : dF) sum += mean_sq(f);
        return sum;
    }
};

double mean_W(const RealField& F, const EnergyModel& model) {
    const std::size_t m = static_cast<std::size_t>(model.entries());
    if (F.components() != model.entries())
        throw RankMismatch("energy model dimension differs from field dimension");
    double sum = 0.0;
    for (std::size_t p = 0; p < F.grid.points(); ++p)
        sum += model.energy_density({F.samples.data() + p * m, m});
    return sum / static_cast<double>(F.grid.points());
}

double energy_from(const Fields& f, const EnergyModel& model, double delta) {
    return 0.5 * mean_sq(f.u) + mean_W(f.F, model) + 0.5 * delta * f.grad_F_sq();
}

double structure_from(const State& s, const Fields& f, const EnergyModel& model, double nu, double delta) {
    const RealField divF = inverse_transform(apply_diff_operator(s.F_hat(), DiffOp::div));
    double bracket = 0.0;
    double div_sq = 0.0;
    for (std::size_t i = 0; i < divF.samples.size(); ++i) {
        const double v = f.u.samples[i] - 0.5 * nu * divF.samples[i];
        bracket += v * v;
        div_sq += divF.samples[i] * divF.samples[i];
    }
    const double np = static_cast<double>(s.grid().points());
    return 0.5 * bracket / np + nu * nu / 8.0 * div_sq / np + mean_W(f.F, model) + 0.5 * delta * f.grad_F_sq();
}

double hessian_term(const Fields& f, const EnergyModel& model) {
    const std::size_t m = static_cast<std::size_t>(model.entries());
    double sum = 0.0;
    for (std::size_t p = 0; p < f.F.grid.points(); ++p) {
        std::span<const double> F{f.F.samples.data() + p * m, m};
        for (const auto& d : f.dF) {
            std::span<const double> G{d.samples.data() + p * m, m};
            double g2 = 0.0;
            for (double v : G) g2 += v * v;
            sum += model.hessian_form(F, G, G) + model.K * g2;
        }
    }
    return sum / static_cast<double>(f.F.grid.points());
}

StructureRates rates_from(const State& s, const Fields& f, const EnergyModel& model, double nu, double delta) {
    StructureRates r;
    r.capillary = 0.5 * delta * nu * mean_sq(inverse_transform(apply_diff_operator(s.F_hat(), DiffOp::laplacian)));
    r.hessian = 0.5 * nu * hessian_term(f, model);
    r.velocity = 0.5 * nu * mean_sq(inverse_transform(apply_diff_operator(s.u_hat, DiffOp::grad)));
    return r;
}

}  // namespace

double energy_functional(const State& state, const EnergyModel& model, double delta) {
    return energy_from(Fields(state), model, delta);
}

double structure_functional(const State& state, const EnergyModel& model, double nu, double delta) {
    return structure_from(state, Fields(state), model, nu, delta);
}

StructureRates structure_dissipation_rate(const State& state, const EnergyModel& model, double nu,
                                          double delta) {
    return rates_from(state, Fields(state), model, nu, delta);
}

double transfer_bracket(const State& state, double nu) {
    const SpectralField divF = apply_diff_operator(state.F_hat(), DiffOp::div);
    return 0.5 * nu * parseval_norm2(divF) - parseval_inner(state.u_hat, divF);
}

double energy_functional_parseval(const State& state, const EnergyModel& model, double delta) {
    const SpectralField Fh = state.F_hat();
    double grad_sq = 0.0;
    for (std::size_t idx = 0; idx < Fh.grid.points(); ++idx)
        for (int c = 0; c < Fh.components(); ++c) grad_sq += Fh.grid.kappa2(idx) * std::norm(Fh.at(idx, c));
    return 0.5 * parseval_norm2(state.u_hat) + mean_W(inverse_transform(Fh), model) + 0.5 * delta * grad_sq;
}

double lr_norm(const RealField& field, double r) {
    if (std::isnan(r) || r < 1.0) throw RangeError("lr_norm: exponent must be >= 1");
    const int nc = field.components();
    const std::size_t np = field.grid.points();
    double acc = 0.0;
    for (std::size_t p = 0; p < np; ++p) {
        double sq = 0.0;
        for (int c = 0; c < nc; ++c) sq += field.at(p, c) * field.at(p, c);
        const double a = std::sqrt(sq);
        if (std::isinf(r))
            acc = std::max(acc, a);
        else if (r == 2.0)
            acc += sq;
        else
            acc += std::pow(a, r);
    }
    if (std::isinf(r)) return acc;
    return std::pow(acc / static_cast<double>(np), 1.0 / r);
}

DiagnosticsTracker::DiagnosticsTracker(EnergyModel model, double nu, double delta, std::vector<double> lr_exponents)
    : model_(std::move(model)), nu_(nu), delta_(delta), lr_exponents_(std::move(lr_exponents)) {
    for (double r : lr_exponents_)
        if (std::isnan(r) || r < 1.0) throw RangeError("lr exponent must be >= 1");
}

DiagnosticsTracker::Sample DiagnosticsTracker::evaluate(const State& state) const {
    const Fields f(state);
    Sample s;
    auto& rec = s.record;
    rec.t = state.t;
    rec.E = energy_from(f, model_, delta_);
    rec.G = structure_from(state, f, model_, nu_, delta_);
    s.rates = rates_from(state, f, model_, nu_, delta_);
    const double grad_F_sq = f.grad_F_sq();
    s.visc_rate = 2.0 * s.rates.velocity;
    s.src_rate = 0.5 * nu_ * model_.K * grad_F_sq;
    rec.curl_res = curl_residual(state.F_hat());
    rec.l2_u = std::sqrt(mean_sq(f.u));
    rec.l2_gradF = std::sqrt(grad_F_sq);
    rec.l2_lapF = std::sqrt(mean_sq(inverse_transform(apply_diff_operator(state.F_hat(), DiffOp::laplacian))));
    for (double r : lr_exponents_) rec.lr_F.emplace_back(r, lr_norm(f.F, r));
    return s;
}

void DiagnosticsTracker::start(const State& state) {
    Sample s = evaluate(state);
    current_ = std::move(s.record);
    rates_ = s.rates;
    last_t_ = state.t;
    last_visc_ = s.visc_rate;
    last_struct_ = s.rates.total();
    last_src_ = s.src_rate;
    started_ = true;
}

void DiagnosticsTracker::advance(const State& state) {
    if (!started_) {
        start(state);
        return;
    }
    Sample s = evaluate(state);
    const double h = state.t - last_t_;
    s.record.diss_visc_cum = current_.diss_visc_cum + 0.5 * h * (last_visc_ + s.visc_rate);
    s.record.diss_struct_cum = current_.diss_struct_cum + 0.5 * h * (last_struct_ + s.rates.total());
    s.record.src_struct_cum = current_.src_struct_cum + 0.5 * h * (last_src_ + s.src_rate);
    current_ = std::move(s.record);
    rates_ = s.rates;
    last_t_ = state.t;
    last_visc_ = s.visc_rate;
    last_struct_ = s.rates.total();
    last_src_ = s.src_rate;
}

std::string InequalityReport::to_text(const std::string& name) const {
    char buf[256];
    std::snprintf(buf, sizeof buf, "%s: %s, %zu records, worst margin %.6e at t = %.6g", name.c_str(),
                  passed ? "holds" : "violated", checked, worst_margin, worst_time);
    std::string out = buf;
    if (first_violation) {
        std::snprintf(buf, sizeof buf, ", first violation at t = %.6g", *first_violation);
        out += buf;
    }
    return out;
}

namespace {

template <class Lhs, class Rhs>
InequalityReport check_inequality(std::span<const DiagnosticsRecord> records, double dt, double c_slack,
                                  Lhs lhs, Rhs rhs) {
    InequalityReport rep;
    for (const auto& r : records) {
        const double left = lhs(r);
        const double right = rhs(r) + c_slack * dt * dt * r.t;
        const double margin = right - left;
        // Rounding floor for the summed terms.
        const double floor = 64.0 * std::numeric_limits<double>::epsilon() *
                             std::max({1.0, std::abs(left), std::abs(right)});
        ++rep.checked;
        if (margin < rep.worst_margin) {
            rep.worst_margin = margin;
            rep.worst_time = r.t;
        }
        if (!std::isfinite(margin) || margin < -floor) {
            rep.passed = false;
            if (!rep.first_violation) rep.first_violation = r.t;
        }
    }
    return rep;
}

}  // namespace

InequalityReport check_energy_inequality(std::span<const DiagnosticsRecord> records, double rel_tol, double dt,
                                         double c_slack) {
    if (records.empty()) return {};
    const double E0 = records.front().E;
    return check_inequality(
        records, dt, c_slack, [](const DiagnosticsRecord& r) { return r.E + r.diss_visc_cum; },
        [&](const DiagnosticsRecord&) { return E0 + rel_tol * std::abs(E0); });
}

InequalityReport check_structure_inequality(std::span<const DiagnosticsRecord> records, double rel_tol,
                                            double dt, double c_slack) {
    if (records.empty()) return {};
    const double G0 = records.front().G;
    return check_inequality(
        records, dt, c_slack, [](const DiagnosticsRecord& r) { return r.G + r.diss_struct_cum; },
        [&](const DiagnosticsRecord& r) { return G0 + rel_tol * std::abs(G0) + r.src_struct_cum; });
}

}  // namespace vsg
