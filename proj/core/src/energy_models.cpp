#include "vsg/energy_models.hpp"

#include "vsg/errors.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <random>
#include <sstream>

namespace vsg {

std::string to_string(EnergyKind kind) {
    switch (kind) {
        case EnergyKind::double_well: return "double_well";
        case EnergyKind::quadratic: return "quadratic";
    }
    return "unknown";
}

EnergyKind energy_kind_from_string(const std::string& name) {
    if (name == "double_well") return EnergyKind::double_well;
    if (name == "quadratic") return EnergyKind::quadratic;
    throw RangeError("unknown energy model '" + name + "'");
}

EnergyModel EnergyModel::double_well(int d) {
    EnergyModel m;
    m.kind = EnergyKind::double_well;
    m.d = d;
    m.p = 4.0;
    m.K = 1.0;
    m.growth_c = 0.125;
    m.growth_C = 1.0;
    m.coercivity = 1.0;
    return m;
}

EnergyModel EnergyModel::quadratic(int d) {
    EnergyModel m;
    m.kind = EnergyKind::quadratic;
    m.d = d;
    m.p = 2.0;
    m.K = 0.0;
    m.growth_c = 0.5;
    m.growth_C = 0.5;
    m.coercivity = 1.0;
    return m;
}

namespace {

double frob2(std::span<const double> F) noexcept {
    double s = 0.0;
    for (double v : F) s += v * v;
    return s;
}

void require_finite(const Matrix& F) {
    if (!F.allFinite()) throw DomainError("stored energy evaluated at a non-finite F");
}

void require_shape(const EnergyModel& model, const Matrix& F) {
    if (F.rows() != model.d || F.cols() != model.d)
        throw RankMismatch("F must be " + std::to_string(model.d) + "x" + std::to_string(model.d));
}

std::span<const double> flat(const Matrix& F) {
    return {F.data(), static_cast<std::size_t>(F.size())};
}

}  // namespace

double EnergyModel::energy_density(std::span<const double> F) const noexcept {
    const double s = frob2(F);
    if (kind == EnergyKind::quadratic) return 0.5 * s;
    return 0.25 * (s - 1.0) * (s - 1.0);
}

void EnergyModel::stress(std::span<const double> F, std::span<double> S) const noexcept {
    const double factor = kind == EnergyKind::quadratic ? 1.0 : frob2(F) - 1.0;
    for (std::size_t a = 0; a < F.size(); ++a) S[a] = factor * F[a];
}

double EnergyModel::hessian_form(std::span<const double> F, std::span<const double> G,
                                 std::span<const double> H) const noexcept {
    double gh = 0.0;
    for (std::size_t a = 0; a < G.size(); ++a) gh += G[a] * H[a];
    if (kind == EnergyKind::quadratic) return gh;
    // (|F|^2 - 1) G:H + 2 (F:G)(F:H)
    double fg = 0.0;
    double fh = 0.0;
    for (std::size_t a = 0; a < F.size(); ++a) {
        fg += F[a] * G[a];
        fh += F[a] * H[a];
    }
    return (frob2(F) - 1.0) * gh + 2.0 * fg * fh;
}

double EnergyModel::hessian_norm(std::span<const double> F) const noexcept {
    if (kind == EnergyKind::quadratic) return 1.0;
    // Eigenvalues: s - 1 on the complement of F, 3s - 1 along F.
    const double s = frob2(F);
    return std::max(std::abs(s - 1.0), std::abs(3.0 * s - 1.0));
}

double eval_W(const EnergyModel& model, const Matrix& F) {
    require_shape(model, F);
    require_finite(F);
    return model.energy_density(flat(F));
}

Matrix eval_S(const EnergyModel& model, const Matrix& F) {
    require_shape(model, F);
    require_finite(F);
    Matrix S(model.d, model.d);
    model.stress(flat(F), {S.data(), static_cast<std::size_t>(S.size())});
    return S;
}

Hessian eval_D2W(const EnergyModel& model, const Matrix& F) {
    require_shape(model, F);
    require_finite(F);
    const int m = model.entries();
    Hessian H = Hessian::Identity(m, m);
    if (model.kind == EnergyKind::quadratic) return H;
    const double* f = F.data();
    const double shift = F.squaredNorm() - 1.0;
    for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b) H(a, b) = (a == b ? shift : 0.0) + 2.0 * f[a] * f[b];
    return H;
}

bool HypothesisReport::all_passed() const {
    return std::all_of(results.begin(), results.end(),
                       [](const HypothesisResult& r) { return r.passed; });
}

const HypothesisResult& HypothesisReport::at(const std::string& name) const {
    for (const auto& r : results)
        if (r.name == name) return r;
    throw RangeError("no hypothesis named " + name);
}

std::string HypothesisReport::to_text() const {
    std::ostringstream os;
    os << "hypothesis check: " << sample_count << " samples, radius " << radius << ", seed "
       << seed << "\n";
    os << std::setprecision(6);
    for (const auto& r : results) {
        os << "  " << std::left << std::setw(4) << r.name << (r.passed ? " PASS" : " FAIL")
           << "  worst_margin=" << r.worst_margin;
        if (r.has_fitted_constant) os << "  fitted=" << r.fitted_constant;
        if (!r.note.empty()) os << "  (" << r.note << ")";
        os << "\n";
    }
    os << (all_passed() ? "all hypotheses satisfied" : "some hypotheses FAILED") << "\n";
    return os.str();
}

namespace {

std::vector<Matrix> sample_ball(int d, std::size_t count, double radius, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const int m = d * d;
    std::vector<Matrix> out;
    out.reserve(count);
    for (std::size_t s = 0; s < count; ++s) {
        Matrix F(d, d);
        double norm = 0.0;
        do {
            for (int a = 0; a < m; ++a) F.data()[a] = normal(rng);
            norm = F.norm();
        } while (norm == 0.0);
        const double r = radius * std::pow(unif(rng), 1.0 / m);
        F *= r / norm;
        out.push_back(F);
    }
    return out;
}

double min_eigenvalue(const Hessian& H) {
    Eigen::SelfAdjointEigenSolver<Hessian> es(H, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

double max_abs_eigenvalue(const Hessian& H) {
    Eigen::SelfAdjointEigenSolver<Hessian> es(H, Eigen::EigenvaluesOnly);
    return es.eigenvalues().cwiseAbs().maxCoeff();
}

double inner(const Matrix& A, const Matrix& B) { return (A.array() * B.array()).sum(); }

}  // namespace

HypothesisReport verify_hypotheses(const EnergyModel& model, std::size_t sample_count,
                                   double radius, std::uint64_t seed, double tol) {
    if (sample_count < 1) throw RangeError("verify_hypotheses: sample_count must be >= 1");
    if (!(radius > 0.0)) throw RangeError("verify_hypotheses: radius must be > 0");

    const auto samples = sample_ball(model.d, sample_count, radius, seed);
    const double p = model.p;
    const double inf = std::numeric_limits<double>::infinity();

    HypothesisReport report;
    report.sample_count = sample_count;
    report.radius = radius;
    report.seed = seed;

    HypothesisResult h1{"H1", true, 0.0, 0.0, false, "polynomial energy, C^3 by construction"};

    // H2: c(|F|^p - 1) <= W <= C(|F|^p + 1). Fit the largest c and smallest C.
    double c_upper = inf;  // constraints c <= W / (|F|^p - 1) where |F|^p > 1
    double c_lower = 0.0;  // constraints c >= W / (|F|^p - 1) where |F|^p < 1
    double C_fit = 0.0;
    double declared_margin = inf;
    for (const auto& F : samples) {
        const double W = eval_W(model, F);
        const double x = std::pow(F.norm(), p) - 1.0;
        if (x > 0.0) c_upper = std::min(c_upper, W / x);
        if (x < 0.0) c_lower = std::max(c_lower, W / x);
        C_fit = std::max(C_fit, W / (x + 2.0));
        declared_margin = std::min(declared_margin, W - model.growth_c * x);
        declared_margin = std::min(declared_margin, model.growth_C * (x + 2.0) - W);
    }
    const double c_fit = std::isfinite(c_upper) ? c_upper : 1.0;
    HypothesisResult h2{"H2", false, inf, c_fit, true, ""};
    for (const auto& F : samples) {
        const double W = eval_W(model, F);
        const double x = std::pow(F.norm(), p) - 1.0;
        h2.worst_margin = std::min({h2.worst_margin, W - c_fit * x, C_fit * (x + 2.0) - W});
    }
    h2.passed = c_fit > 0.0 && c_fit >= c_lower && std::isfinite(C_fit) && h2.worst_margin >= -tol;
    {
        std::ostringstream note;
        note << std::setprecision(4) << "c=" << c_fit << " C=" << C_fit << "; declared c="
             << model.growth_c << " C=" << model.growth_C << " margin " << declared_margin;
        h2.note = note.str();
    }

    // H3: D^2 W + K I >= 0.
    HypothesisResult h3{"H3", false, inf, 0.0, false, ""};
    // H7: D^2 W~ - c|F|^(p-2) I >= 0.
    HypothesisResult h7{"H7", false, inf, 0.0, false, ""};
    // H8: |D^2 W| <= C(1 + |F|^(p-2)).
    double C8 = 0.0;
    // H4: |S| <= C(1 + |F|^(p-1)).
    double C4 = 0.0;
    for (const auto& F : samples) {
        const Hessian H = eval_D2W(model, F);
        const double lam = min_eigenvalue(H);
        const double nF = F.norm();
        h3.worst_margin = std::min(h3.worst_margin, lam + model.K);
        h7.worst_margin =
            std::min(h7.worst_margin, lam + model.K - model.coercivity * std::pow(nF, p - 2.0));
        C8 = std::max(C8, max_abs_eigenvalue(H) / (1.0 + std::pow(nF, p - 2.0)));
        C4 = std::max(C4, eval_S(model, F).norm() / (1.0 + std::pow(nF, p - 1.0)));
    }
    h3.passed = h3.worst_margin >= -tol;
    {
        std::ostringstream note;
        note << "K=" << model.K;
        h3.note = note.str();
    }
    h7.passed = h7.worst_margin >= -tol;
    {
        std::ostringstream note;
        note << "c=" << model.coercivity;
        h7.note = note.str();
    }

    HypothesisResult h4{"H4", std::isfinite(C4), 0.0, C4, true, "fitted C"};
    HypothesisResult h8{"H8", std::isfinite(C8), 0.0, C8, true, "fitted C"};
    for (const auto& F : samples) {
        const double nF = F.norm();
        h4.worst_margin = std::min(h4.worst_margin,
                                   C4 * (1.0 + std::pow(nF, p - 1.0)) - eval_S(model, F).norm());
        h8.worst_margin =
            std::min(h8.worst_margin,
                     C8 * (1.0 + std::pow(nF, p - 2.0)) - max_abs_eigenvalue(eval_D2W(model, F)));
    }
    h4.passed = h4.passed && h4.worst_margin >= -tol;
    h8.passed = h8.passed && h8.worst_margin >= -tol;

    // H5 and H6 on consecutive sample pairs, normalised by |F1 - F2|^2.
    HypothesisResult h5{"H5", false, inf, 0.0, false, ""};
    HypothesisResult h6{"H6", false, inf, 0.0, false, ""};
    const double c6 = 0.5 * model.coercivity;
    std::mt19937_64 pair_rng(seed ^ 0x9e3779b97f4a7c15ULL);
    std::uniform_int_distribution<std::size_t> pick(0, samples.size() - 1);
    for (std::size_t s = 0; s < samples.size(); ++s) {
        const Matrix& F1 = samples[s];
        const Matrix& F2 = samples[pick(pair_rng)];
        const Matrix dF = F1 - F2;
        const double n2 = dF.squaredNorm();
        if (n2 == 0.0) continue;
        const double mono = inner(eval_S(model, F1) - eval_S(model, F2), dF) / n2;
        h5.worst_margin = std::min(h5.worst_margin, mono + model.K);
        const double grow =
            c6 * (std::pow(F1.norm(), p - 2.0) + std::pow(F2.norm(), p - 2.0)) - model.K;
        h6.worst_margin = std::min(h6.worst_margin, mono - grow);
    }
    if (!std::isfinite(h5.worst_margin)) h5.worst_margin = 0.0;
    if (!std::isfinite(h6.worst_margin)) h6.worst_margin = 0.0;
    h5.passed = h5.worst_margin >= -tol;
    h6.passed = h6.worst_margin >= -tol;
    {
        std::ostringstream note;
        note << "C=" << c6 << " K=" << model.K;
        h6.note = note.str();
    }

    report.results = {h1, h2, h3, h4, h5, h6, h7, h8};
    return report;
}

}  // namespace vsg
