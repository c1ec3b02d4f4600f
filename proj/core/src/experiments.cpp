#include "vsg/experiments.hpp"

#include "vsg/diagnostics.hpp"
#include "vsg/errors.hpp"
#include "vsg/run.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>

namespace vsg {

std::string to_string(SweepParameter p) { return p == SweepParameter::delta ? "delta" : "nu"; }

RateFit fit_rate(const std::vector<std::pair<double, double>>& points, double at_time) {
    RateFit fit;
    fit.t = at_time;
    std::size_t skipped = 0;
    for (const auto& [p, e] : points) {
        if (p > 0.0 && e > 0.0 && std::isfinite(p) && std::isfinite(e))
            fit.points.emplace_back(p, e);
        else
            ++skipped;
    }
    if (fit.points.size() < 3)
        throw InsufficientData("rate fit needs >= 3 points with positive error, got " +
                               std::to_string(fit.points.size()));
    if (skipped) fit.note = std::to_string(skipped) + " point(s) with non-positive error excluded";

    const double m = static_cast<double>(fit.points.size());
    double sx = 0.0, sy = 0.0;
    for (const auto& [p, e] : fit.points) {
        sx += std::log(p);
        sy += std::log(e);
    }
    const double mx = sx / m, my = sy / m;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (const auto& [p, e] : fit.points) {
        const double dx = std::log(p) - mx, dy = std::log(e) - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if (sxx == 0.0) throw InsufficientData("rate fit needs distinct parameter values");
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    const double ss_res = std::max(0.0, syy - fit.slope * sxy);
    fit.r_squared = syy == 0.0 ? 1.0 : std::clamp(1.0 - ss_res / syy, 0.0, 1.0);
    return fit;
}

std::vector<ErrorSample> StudyResult::select(double r, double t) const {
    std::vector<ErrorSample> out;
    for (const auto& e : errors)
        if (e.r == r && std::abs(e.t - t) < 1e-12) out.push_back(e);
    return out;
}

const RateFit& StudyResult::fit(double r, double t) const {
    for (const auto& f : fits)
        if (f.r == r && std::abs(f.t - t) < 1e-12) return f;
    throw RangeError("no rate fit for the requested (r, t)");
}

namespace {

std::vector<long> sample_steps(const SolverConfig& cfg, const std::vector<double>& times) {
    std::vector<long> steps;
    const long total = cfg.steps();
    for (double t : times) {
        const long s = std::lround(t / cfg.dt);
        if (std::abs(s * cfg.dt - t) > 1e-9 * std::max(1.0, t) || s < 0 || s > total)
            throw RangeError("sample time " + std::to_string(t) + " is not a step multiple within [0, t_end]");
        steps.push_back(s);
    }
    return steps;
}

struct MemberRun {
    std::vector<State> samples;  // one per sample time
    double source = 0.0;         // (K/2) int int |grad F|^2
};

double grad_F_sq(const State& s) {
    const SpectralField F = s.F_hat();
    double acc = 0.0;
    for (std::size_t idx = 0; idx < F.grid.points(); ++idx)
        for (int c = 0; c < F.components(); ++c) acc += F.grid.kappa2(idx) * std::norm(F.at(idx, c));
    return acc;
}

MemberRun run_member(const SolverConfig& cfg, const State& initial, const std::vector<long>& steps,
                     const std::string& label) {
    MemberRun m;
    m.samples.assign(steps.size(), State(cfg.grid));
    double last_rate = 0.0;
    RunOptions opt;
    opt.record_every = 0;
    opt.on_step = [&](const State& s, long n) {
        const double rate = 0.5 * cfg.model.K * grad_F_sq(s);
        if (n > 0) m.source += 0.5 * cfg.dt * (last_rate + rate);
        last_rate = rate;
        for (std::size_t j = 0; j < steps.size(); ++j)
            if (steps[j] == n) m.samples[j] = s;
    };
    RunResult res = run(cfg, initial, opt);
    if (!res.ok())
        throw Error("study member " + label + " blew up at t = " + std::to_string(res.failure->t) + ": " +
                    res.failure->message);
    return m;
}

std::string label_of(SweepParameter p, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%s=%.6g", to_string(p).c_str(), v);
    return buf;
}

}  // namespace

StudyResult run_limit_study(const LimitStudy& study) {
    if (study.values.empty()) throw InsufficientData("limit study needs at least one swept value");
    for (std::size_t i = 0; i < study.values.size(); ++i) {
        if (!(study.values[i] > 0.0) || !std::isfinite(study.values[i]))
            throw RangeError("swept values must be finite and > 0");
        if (i > 0 && !(study.values[i] < study.values[i - 1]))
            throw RangeError("swept values must be strictly decreasing");
    }
    if (study.r_list.empty()) throw RangeError("limit study needs at least one error exponent");
    for (double r : study.r_list)
        if (std::isnan(r) || r < 1.0) throw RangeError("error exponents must be >= 1");
    if (study.roughening > 0.0 && study.parameter != SweepParameter::delta)
        throw RangeError("data roughening applies to delta sweeps only");
    study.base.validate();
    const auto steps = sample_steps(study.base, study.sample_times);

    const State initial = make_initial_state(study.base.grid, study.initial);
    auto with_param = [&](double v) {
        SolverConfig c = study.base;
        (study.parameter == SweepParameter::delta ? c.delta : c.nu) = v;
        return c;
    };

    StudyResult result;
    result.parameter = study.parameter;
    const SolverConfig ref_cfg = with_param(0.0);
    if (ref_cfg.degenerate()) result.notes.push_back("reference run has nu = delta = 0");
    const MemberRun ref = run_member(ref_cfg, initial, steps, label_of(study.parameter, 0.0) + " (reference)");

    for (double v : study.values) {
        State init = initial;
        if (study.roughening > 0.0) {
            const int kh = roughen(init, v, study.roughening, study.roughening_eps);
            result.notes.push_back(label_of(study.parameter, v) + ": roughening tail at k = " + std::to_string(kh));
        }
        const MemberRun m = run_member(with_param(v), init, steps, label_of(study.parameter, v));
        result.source_integral.emplace_back(v, m.source);
        for (std::size_t j = 0; j < steps.size(); ++j) {
            const State& a = m.samples[j];
            const State& b = ref.samples[j];
            const RealField dF = inverse_transform(a.F_hat() - b.F_hat());
            const double eu = std::sqrt(parseval_norm2(a.u_hat - b.u_hat));
            for (double r : study.r_list)
                result.errors.push_back({v, study.sample_times[j], r, lr_norm(dF, r), eu});
        }
    }

    for (double r : study.r_list)
        for (double t : study.sample_times) {
            std::vector<std::pair<double, double>> pts;
            for (const auto& e : result.select(r, t)) pts.emplace_back(e.param, e.error_F);
            try {
                RateFit f = fit_rate(pts, t);
                f.r = r;
                result.fits.push_back(std::move(f));
            } catch (const InsufficientData& e) {
                char buf[128];
                std::snprintf(buf, sizeof buf, "no fit at r=%g t=%g: ", r, t);
                result.notes.push_back(buf + std::string(e.what()));
            }
        }
    return result;
}

TheoremBound theorem_bound(double C1, double C2, double delta, double r, double t) {
    if (!(C1 > 0.0) || !std::isfinite(C1)) throw RangeError("theorem_bound: C1 must be finite and > 0");
    if (!(C2 > 0.0) || !std::isfinite(C2)) throw RangeError("theorem_bound: C2 must be finite and > 0");
    if (!(r > 1.0 && r < 2.0)) throw RangeError("theorem_bound: r must lie in (1, 2)");
    if (!(t >= 0.0) || !std::isfinite(t)) throw RangeError("theorem_bound: t must be finite and >= 0");
    if (!(delta > 0.0) || !std::isfinite(delta)) throw RangeError("theorem_bound: delta must be finite and > 0");
    const double a = std::exp(-C2 * t);
    TheoremBound tb;
    // Evaluate in logs: C1 delta^{r/2} can be far below the double range once raised.
    tb.bound = std::exp(a * (std::log(C1) + 0.5 * r * std::log(delta)) + 2.0 - 2.0 * a);
    tb.threshold = std::exp(4.0 / r * (1.0 - std::exp(C2 * t)) - 2.0 / r * std::log(C1));
    tb.delta_admissible = delta <= tb.threshold;
    return tb;
}

std::string BoundCheck::to_text() const {
    char buf[256];
    std::snprintf(buf, sizeof buf,
                  "C1 = %.6g, C2 = %.6g (calibrated at t = %g): %s over %zu admissible (delta, t) pairs, "
                  "%zu inadmissible, worst measured/bound = %.4g",
                  C1, C2, t0, dominates ? "bound dominates" : "bound violated", checked, inadmissible, worst_ratio);
    return buf;
}

BoundCheck calibrate_theorem_bound(const StudyResult& result, double r) {
    if (result.parameter != SweepParameter::delta) throw RangeError("rate bound applies to delta studies");
    std::vector<double> times;
    for (const auto& e : result.errors)
        if (e.r == r && e.t > 0.0 && std::find(times.begin(), times.end(), e.t) == times.end()) times.push_back(e.t);
    std::sort(times.begin(), times.end());
    if (times.empty()) throw InsufficientData("no positive sample times for exponent r");

    BoundCheck bc;
    bc.t0 = times.front();
    double src = 0.0;
    for (const auto& [v, s] : result.source_integral) src = std::max(src, s);
    bc.C1 = std::pow(0.5, 1.0 - 2.0 / r) * src;
    if (!(bc.C1 > 0.0)) throw InsufficientData("source integral vanishes; C1 undefined (K = 0 or zero data)");

    const auto at_t0 = result.select(r, bc.t0);
    auto holds_at_t0 = [&](double C2) {
        for (const auto& e : at_t0)
            if (std::pow(e.error_F, r) > theorem_bound(bc.C1, C2, e.param, r, bc.t0).bound) return false;
        return true;
    };
    double lo = 1e-8;
    if (holds_at_t0(lo)) {
        bc.C2 = lo;
    } else {
        double hi = 1.0;
        while (!holds_at_t0(hi)) {
            hi *= 2.0;
            if (hi > 1e6) throw InsufficientData("no C2 makes the bound hold at the calibration time");
        }
        for (int it = 0; it < 200 && hi - lo > 1e-12 * hi; ++it) {
            const double mid = 0.5 * (lo + hi);
            (holds_at_t0(mid) ? hi : lo) = mid;
        }
        bc.C2 = hi;
    }

    for (std::size_t j = 1; j < times.size(); ++j)
        for (const auto& e : result.select(r, times[j])) {
            const TheoremBound tb = theorem_bound(bc.C1, bc.C2, e.param, r, e.t);
            if (!tb.delta_admissible) {
                ++bc.inadmissible;
                continue;
            }
            ++bc.checked;
            const double measured = std::pow(e.error_F, r);
            bc.worst_ratio = std::max(bc.worst_ratio, measured / tb.bound);
            if (measured > tb.bound) bc.dominates = false;
        }
    return bc;
}

RefinementResult galerkin_refinement_study(const SolverConfig& base, const std::vector<int>& cutoffs,
                                           const InitialSpec& initial, const std::vector<double>& sample_times) {
    if (cutoffs.size() < 2) throw InsufficientData("refinement study needs at least two cutoffs");
    for (std::size_t i = 1; i < cutoffs.size(); ++i)
        if (cutoffs[i] <= cutoffs[i - 1]) throw RangeError("cutoffs must be strictly increasing");
    if (cutoffs.front() < 1 || cutoffs.back() > base.grid.n() / 2 - 1)
        throw RangeError("cutoffs must lie in [1, n/2 - 1]");
    base.validate();
    const auto steps = sample_steps(base, sample_times);

    RefinementResult out;
    if (cutoffs.back() > dealias_band(base.grid.n(), base.dealias))
        out.notes.push_back("largest cutoff exceeds the dealiasing band");

    std::vector<MemberRun> runs;
    for (int N : cutoffs) {
        SolverConfig c = base;
        c.grid = base.grid.with_cutoff(N);
        runs.push_back(run_member(c, make_initial_state(c.grid, initial), steps, "cutoff=" + std::to_string(N)));
    }
    const MemberRun& finest = runs.back();
    for (std::size_t i = 0; i < cutoffs.size(); ++i)
        for (std::size_t j = 0; j < steps.size(); ++j) {
            const State& a = runs[i].samples[j];
            const State& b = finest.samples[j];
            out.samples.push_back({cutoffs[i], sample_times[j], std::sqrt(parseval_norm2(a.F_hat() - b.F_hat())),
                                   std::sqrt(parseval_norm2(a.u_hat - b.u_hat))});
        }
    return out;
}

}  // namespace vsg
