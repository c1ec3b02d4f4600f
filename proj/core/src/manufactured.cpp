#include "vsg/manufactured.hpp"

#include "vsg/errors.hpp"
#include "vsg/experiments.hpp"
#include "vsg/run.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

namespace vsg {

double TimeProfile::value(double t) const { return c0 + c1 * t + s * std::sin(omega * t); }
double TimeProfile::rate(double t) const { return c1 + s * omega * std::cos(omega * t); }
double TimeProfile::accel(double t) const { return -s * omega * omega * std::sin(omega * t); }

int ManufacturedCase::bandwidth() const {
    int bw = 0;
    for (const auto& term : terms)
        for (int k : term.k) bw = std::max(bw, std::abs(k));
    return bw;
}

SpectralField ManufacturedCase::y_hat(const SpectralGrid& grid, double t, int derivative) const {
    if (grid.dim() != d) throw RankMismatch("manufactured case dimension differs from grid");
    if (derivative < 0 || derivative > 2) throw RangeError("derivative order must be 0, 1 or 2");
    if (bandwidth() >= grid.n() / 2) throw RangeError("manufactured motion does not fit below the Nyquist row");
    SpectralField out(grid, Rank::vector);
    std::vector<int> neg(static_cast<std::size_t>(d));
    for (const auto& term : terms) {
        if (static_cast<int>(term.k.size()) != d || term.component < 0 || term.component >= d)
            throw RangeError("manufactured term has the wrong shape");
        const double a = derivative == 0 ? term.profile.value(t)
                         : derivative == 1 ? term.profile.rate(t)
                                           : term.profile.accel(t);
        const std::size_t ip = grid.index_of(term.k);
        bool zero = true;
        for (int j = 0; j < d; ++j) {
            neg[static_cast<std::size_t>(j)] = -term.k[static_cast<std::size_t>(j)];
            zero = zero && term.k[static_cast<std::size_t>(j)] == 0;
        }
        if (zero) {
            out.at(ip, term.component) += a * std::cos(term.phase);
            continue;
        }
        const std::size_t im = grid.index_of(neg);
        out.at(ip, term.component) += 0.5 * a * std::polar(1.0, term.phase);
        out.at(im, term.component) += 0.5 * a * std::polar(1.0, -term.phase);
    }
    return out;
}

ManufacturedCase decaying_case(int d, int band, double amplitude, double rho, std::uint64_t seed) {
    if (d < 1 || d > 3 || band < 1) throw RangeError("decaying_case: need 1 <= d <= 3 and band >= 1");
    ManufacturedCase c;
    c.d = d;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    const int side = 2 * band + 1;
    int total = 1;
    for (int a = 0; a < d; ++a) total *= side;
    std::vector<int> k(static_cast<std::size_t>(d));
    for (int flat = 0; flat < total; ++flat) {
        int rem = flat, l1 = 0;
        for (int a = 0; a < d; ++a) {
            k[static_cast<std::size_t>(a)] = rem % side - band;
            rem /= side;
            l1 += std::abs(k[static_cast<std::size_t>(a)]);
        }
        // One representative of each +-k pair: first nonzero entry positive.
        const auto first = std::find_if(k.begin(), k.end(), [](int v) { return v != 0; });
        if (first == k.end() || *first < 0) continue;
        for (int i = 0; i < d; ++i) {
            ManufacturedTerm term;
            term.component = i;
            term.k = k;
            term.phase = 2.0 * std::numbers::pi * U(rng);
            const double amp = amplitude * std::pow(rho, l1);
            term.profile = {amp, 0.3 * amp * (U(rng) - 0.5), 0.5 * amp, 2.0 + 2.0 * U(rng)};
            c.terms.push_back(std::move(term));
        }
    }
    return c;
}

ManufacturedCase linear_single_mode_case(int d, double a0, double a1) {
    ManufacturedCase c;
    c.d = d;
    ManufacturedTerm term;
    term.component = 0;
    term.k.assign(static_cast<std::size_t>(d), 0);
    term.k[0] = 1;
    term.profile = {a0, a1, 0.0, 0.0};
    c.terms.push_back(std::move(term));
    return c;
}

SpectralField manufactured_forcing_hat(const ManufacturedCase& c, const EnergyModel& model, double nu,
                                       double delta, const SpectralGrid& grid, double t) {
    if (model.d != c.d) throw RankMismatch("energy model dimension differs from manufactured case");
    const int bw = c.bandwidth();
    // The stress is at most cubic in F: band 3 bw, exact on n > 6 bw points.
    const int degree = model.kind == EnergyKind::quadratic ? 1 : 3;
    int n_pad = std::max(grid.n(), 2 * degree * bw + 2);
    n_pad += n_pad % 2;
    const SpectralGrid pad(c.d, n_pad, n_pad / 2 - 1);

    const SpectralField y = c.y_hat(pad, t, 0);
    const SpectralField y_t = c.y_hat(pad, t, 1);
    SpectralField f = c.y_hat(pad, t, 2);

    const RealField F = inverse_transform(F_from_y(y));
    RealField S(pad, Rank::matrix);
    const std::size_t m = static_cast<std::size_t>(c.d * c.d);
    for (std::size_t p = 0; p < pad.points(); ++p)
        model.stress({F.samples.data() + p * m, m}, {S.samples.data() + p * m, m});
    f -= apply_diff_operator(forward_transform(S), DiffOp::div);

    for (std::size_t idx = 0; idx < pad.points(); ++idx) {
        const double k2 = pad.kappa2(idx);
        for (int i = 0; i < c.d; ++i) f.at(idx, i) += nu * k2 * y_t.at(idx, i) + delta * k2 * k2 * y.at(idx, i);
    }
    SpectralField out = resample(f, grid.n());
    out.grid = grid;
    return out;
}

RealField manufactured_forcing(const ManufacturedCase& c, const EnergyModel& model, double nu, double delta,
                               const SpectralGrid& grid, double t) {
    return inverse_transform(manufactured_forcing_hat(c, model, nu, delta, grid, t));
}

Forcing make_forcing(const ManufacturedCase& c, const SolverConfig& config) {
    return [c, model = config.model, nu = config.nu, delta = config.delta, grid = config.grid](double t) {
        return manufactured_forcing_hat(c, model, nu, delta, grid, t);
    };
}

MmsSample mms_run(const ManufacturedCase& c, const SolverConfig& config) {
    SolverConfig cfg = config;
    cfg.forcing = make_forcing(c, config);
    const auto& grid = cfg.grid;
    const int N = grid.cutoff();

    const int bw = c.bandwidth();
    int n_big = std::max(grid.n(), 2 * bw + 2);
    n_big += n_big % 2;
    const SpectralGrid big(c.d, n_big, n_big / 2 - 1);

    auto on_grid = [&](const SpectralField& f) {
        SpectralField out = resample(f, grid.n());
        out.grid = grid;
        return project_modes(out, N);
    };
    State initial(0.0, on_grid(c.y_hat(big, 0.0, 0)), on_grid(c.y_hat(big, 0.0, 1)));
    RunOptions opt;
    opt.record_every = 0;
    RunResult res = run(cfg, initial, opt);
    if (!res.ok()) throw BlowUp(res.failure->t, res.failure->norm, res.failure->message);

    const double T = cfg.t_end;
    const SpectralField y_exact = c.y_hat(big, T, 0);
    const SpectralField u_exact = c.y_hat(big, T, 1);
    SpectralField y_num = resample(res.final_state->y_hat, n_big);
    SpectralField u_num = resample(res.final_state->u_hat, n_big);
    y_num.grid = big;
    u_num.grid = big;

    MmsSample s;
    s.n = grid.n();
    s.dt = cfg.dt;
    s.error_y = std::sqrt(parseval_norm2(y_num - y_exact));
    s.error_u = std::sqrt(parseval_norm2(u_num - u_exact));
    s.under_resolved = N < bw;
    SpectralField tail = y_exact - project_modes(y_exact, N);
    s.projection_floor = std::sqrt(parseval_norm2(tail));
    return s;
}

ConvergenceReport mms_study(const ManufacturedCase& c, const SolverConfig& base, int n_temporal,
                            const std::vector<double>& dt_list, double dt_spatial, const std::vector<int>& n_list) {
    for (std::size_t i = 1; i < dt_list.size(); ++i)
        if (!(dt_list[i] < dt_list[i - 1])) throw RangeError("mms_study: dt list must be decreasing");
    for (std::size_t i = 1; i < n_list.size(); ++i)
        if (!(n_list[i] > n_list[i - 1])) throw RangeError("mms_study: resolution list must be increasing");

    ConvergenceReport rep;
    for (double dt : dt_list) {
        SolverConfig cfg = base;
        cfg.grid = SpectralGrid(c.d, n_temporal);
        cfg.dt = dt;
        rep.temporal.push_back(mms_run(c, cfg));
    }
    for (int n : n_list) {
        SolverConfig cfg = base;
        cfg.grid = SpectralGrid(c.d, n);
        cfg.dt = dt_spatial;
        MmsSample s = mms_run(c, cfg);
        if (s.under_resolved)
            rep.notes.push_back("n = " + std::to_string(n) + ": cutoff " + std::to_string(cfg.grid.cutoff()) +
                                " below the motion bandwidth " + std::to_string(c.bandwidth()) +
                                ", error bounded below by the projection of y*");
        rep.spatial.push_back(s);
    }
    if (rep.temporal.size() >= 2) {
        std::vector<std::pair<double, double>> pts;
        for (const auto& s : rep.temporal) pts.emplace_back(s.dt, s.error_y);
        if (pts.size() >= 3) {
            rep.temporal_order = fit_rate(pts).slope;
        } else {
            rep.temporal_order = std::log(pts[0].second / pts[1].second) / std::log(pts[0].first / pts[1].first);
        }
    }
    return rep;
}

}  // namespace vsg
