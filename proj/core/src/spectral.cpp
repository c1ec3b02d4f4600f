#include "vsg/spectral.hpp"

#include "fft_backend.hpp"
#include "vsg/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace vsg {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;
constexpr Complex I{0.0, 1.0};

void require_layout(const SpectralGrid& a, const SpectralGrid& b, const char* what) {
    if (!a.same_layout(b)) throw RankMismatch(std::string(what) + ": grid mismatch");
}

void require_rank(Rank actual, Rank expected, const char* what) {
    if (actual != expected) throw RankMismatch(std::string(what) + ": unexpected field rank");
}

}  // namespace

SpectralGrid::SpectralGrid(int d, int n, int cutoff) : d_(d), n_(n), cutoff_(cutoff) {
    if (d < 1 || d > 3) throw RangeError("grid dimension must be 1, 2 or 3");
    if (n < 4 || n % 2 != 0) throw RangeError("grid size n must be an even integer >= 4");
    if (cutoff < 0 || cutoff > n / 2 - 1)
        throw RangeError("cutoff must lie in [0, n/2 - 1], got " + std::to_string(cutoff));

    points_ = 1;
    for (int a = 0; a < d; ++a) points_ *= static_cast<std::size_t>(n);

    std::vector<int> k(points_ * static_cast<std::size_t>(d));
    std::vector<int> kmax(points_);
    std::vector<double> kappa2(points_);
    for (std::size_t idx = 0; idx < points_; ++idx) {
        std::size_t rest = idx;
        int m = 0;
        double q = 0.0;
        for (int a = d - 1; a >= 0; --a) {
            const int j = static_cast<int>(rest % static_cast<std::size_t>(n));
            rest /= static_cast<std::size_t>(n);
            const int ka = j < n / 2 ? j : j - n;
            k[idx * static_cast<std::size_t>(d) + static_cast<std::size_t>(a)] = ka;
            m = std::max(m, std::abs(ka));
            q += (two_pi * ka) * (two_pi * ka);
        }
        kmax[idx] = m;
        kappa2[idx] = q;
    }
    k_ = std::make_shared<const std::vector<int>>(std::move(k));
    kmax_ = std::make_shared<const std::vector<int>>(std::move(kmax));
    kappa2_ = std::make_shared<const std::vector<double>>(std::move(kappa2));
}

SpectralGrid::SpectralGrid(int d, int n) : SpectralGrid(d, n, n / 3 > n / 2 - 1 ? n / 2 - 1 : n / 3) {}

int SpectralGrid::components(Rank rank) const noexcept {
    switch (rank) {
        case Rank::scalar: return 1;
        case Rank::vector: return d_;
        case Rank::matrix: return d_ * d_;
    }
    return 1;
}

bool SpectralGrid::is_nyquist(std::size_t idx) const noexcept {
    for (int a = 0; a < d_; ++a)
        if (wavenumber(idx, a) == -n_ / 2) return true;
    return false;
}

std::size_t SpectralGrid::index_of(std::span<const int> k) const {
    if (static_cast<int>(k.size()) != d_) throw RankMismatch("index_of: wavevector length != d");
    std::size_t idx = 0;
    for (int a = 0; a < d_; ++a) {
        const int j = ((k[static_cast<std::size_t>(a)] % n_) + n_) % n_;
        idx = idx * static_cast<std::size_t>(n_) + static_cast<std::size_t>(j);
    }
    return idx;
}

double SpectralGrid::coordinate(std::size_t idx, int axis) const noexcept {
    std::size_t rest = idx;
    for (int a = d_ - 1; a > axis; --a) rest /= static_cast<std::size_t>(n_);
    return static_cast<double>(rest % static_cast<std::size_t>(n_)) / n_;
}

RealField::RealField(const SpectralGrid& g, Rank r)
    : grid(g), rank(r), samples(g.points() * static_cast<std::size_t>(g.components(r)), 0.0) {}

RealField::RealField(const SpectralGrid& g, Rank r, std::vector<double> values)
    : grid(g), rank(r), samples(std::move(values)) {
    if (samples.size() != g.points() * static_cast<std::size_t>(g.components(r)))
        throw RankMismatch("RealField: sample count does not match grid and rank");
}

SpectralField::SpectralField(const SpectralGrid& g, Rank r)
    : grid(g), rank(r), coeffs(g.points() * static_cast<std::size_t>(g.components(r))) {}

SpectralField::SpectralField(const SpectralGrid& g, Rank r, std::vector<Complex> values)
    : grid(g), rank(r), coeffs(std::move(values)) {
    if (coeffs.size() != g.points() * static_cast<std::size_t>(g.components(r)))
        throw RankMismatch("SpectralField: coefficient count does not match grid and rank");
}

SpectralField& SpectralField::operator+=(const SpectralField& other) {
    require_layout(grid, other.grid, "operator+=");
    require_rank(other.rank, rank, "operator+=");
    for (std::size_t j = 0; j < coeffs.size(); ++j) coeffs[j] += other.coeffs[j];
    return *this;
}

SpectralField& SpectralField::operator-=(const SpectralField& other) {
    require_layout(grid, other.grid, "operator-=");
    require_rank(other.rank, rank, "operator-=");
    for (std::size_t j = 0; j < coeffs.size(); ++j) coeffs[j] -= other.coeffs[j];
    return *this;
}

SpectralField& SpectralField::operator*=(double s) {
    for (auto& c : coeffs) c *= s;
    return *this;
}

SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
SpectralField operator*(double s, SpectralField a) { return a *= s; }

SpectralField forward_transform(const RealField& field) {
    const auto& g = field.grid;
    const int nc = field.components();
    std::vector<Complex> in(field.samples.begin(), field.samples.end());
    SpectralField out(g, field.rank);
    detail::fft_execute(g.dim(), g.n(), nc, in.data(), out.coeffs.data(), -1);
    const double scale = 1.0 / static_cast<double>(g.points());
    for (std::size_t idx = 0; idx < g.points(); ++idx) {
        const bool nyq = g.is_nyquist(idx);
        for (int c = 0; c < nc; ++c) {
            auto& v = out.at(idx, c);
            v = nyq ? Complex{} : v * scale;
        }
    }
    return out;
}

RealField inverse_transform(const SpectralField& field) {
    const auto& g = field.grid;
    const int nc = field.components();
    std::vector<Complex> out(field.coeffs.size());
    detail::fft_execute(g.dim(), g.n(), nc, field.coeffs.data(), out.data(), +1);
    RealField result(g, field.rank);
    for (std::size_t j = 0; j < out.size(); ++j) result.samples[j] = out[j].real();
    return result;
}

SpectralField project_modes(const SpectralField& field, int cutoff) {
    const auto& g = field.grid;
    if (cutoff < 0 || cutoff > g.n() / 2 - 1)
        throw RangeError("project_modes: cutoff out of range");
    SpectralField out = field;
    const int nc = out.components();
    for (std::size_t idx = 0; idx < g.points(); ++idx) {
        if (g.max_abs_wavenumber(idx) <= cutoff) continue;
        for (int c = 0; c < nc; ++c) out.at(idx, c) = Complex{};
    }
    return out;
}

SpectralField apply_diff_operator(const SpectralField& field, DiffOp op) {
    const auto& g = field.grid;
    const int d = g.dim();
    const std::size_t np = g.points();

    auto ik = [&](std::size_t idx, int a) { return I * (two_pi * g.wavenumber(idx, a)); };

    switch (op) {
        case DiffOp::grad: {
            if (field.rank == Rank::scalar) {
                SpectralField out(g, Rank::vector);
                for (std::size_t idx = 0; idx < np; ++idx)
                    for (int a = 0; a < d; ++a) out.at(idx, a) = ik(idx, a) * field.at(idx, 0);
                return out;
            }
            require_rank(field.rank, Rank::vector, "grad");
            SpectralField out(g, Rank::matrix);
            for (std::size_t idx = 0; idx < np; ++idx)
                for (int i = 0; i < d; ++i)
                    for (int a = 0; a < d; ++a) out.at(idx, i * d + a) = ik(idx, a) * field.at(idx, i);
            return out;
        }
        case DiffOp::div:
        case DiffOp::grad_laplacian: {
            // grad_laplacian is div of the Laplacian: extra symbol -|2 pi k|^2.
            auto factor = [&](std::size_t idx) {
                return op == DiffOp::grad_laplacian ? -g.kappa2(idx) : 1.0;
            };
            if (field.rank == Rank::vector && op == DiffOp::div) {
                SpectralField out(g, Rank::scalar);
                for (std::size_t idx = 0; idx < np; ++idx) {
                    Complex s{};
                    for (int a = 0; a < d; ++a) s += ik(idx, a) * field.at(idx, a);
                    out.at(idx, 0) = s;
                }
                return out;
            }
            require_rank(field.rank, Rank::matrix, op == DiffOp::div ? "div" : "grad_laplacian");
            SpectralField out(g, Rank::vector);
            for (std::size_t idx = 0; idx < np; ++idx) {
                const double f = factor(idx);
                for (int i = 0; i < d; ++i) {
                    Complex s{};
                    for (int a = 0; a < d; ++a) s += ik(idx, a) * field.at(idx, i * d + a);
                    out.at(idx, i) = f * s;
                }
            }
            return out;
        }
        case DiffOp::laplacian:
        case DiffOp::bilaplacian: {
            SpectralField out = field;
            const int nc = out.components();
            for (std::size_t idx = 0; idx < np; ++idx) {
                const double k2 = g.kappa2(idx);
                const double f = op == DiffOp::laplacian ? -k2 : k2 * k2;
                for (int c = 0; c < nc; ++c) out.at(idx, c) *= f;
            }
            return out;
        }
    }
    throw RangeError("apply_diff_operator: unknown operator");
}

SpectralField F_from_y(const SpectralField& y) {
    require_rank(y.rank, Rank::vector, "F_from_y");
    return apply_diff_operator(y, DiffOp::grad);
}

double curl_residual(const SpectralField& F) {
    require_rank(F.rank, Rank::matrix, "curl_residual");
    const auto& g = F.grid;
    const int d = g.dim();
    double worst = 0.0;
    for (std::size_t idx = 0; idx < g.points(); ++idx) {
        for (int i = 0; i < d; ++i)
            for (int a = 0; a < d; ++a)
                for (int b = a + 1; b < d; ++b) {
                    const Complex r = I * two_pi *
                                      (static_cast<double>(g.wavenumber(idx, a)) * F.at(idx, i * d + b) -
                                       static_cast<double>(g.wavenumber(idx, b)) * F.at(idx, i * d + a));
                    worst = std::max(worst, std::abs(r));
                }
    }
    return worst;
}

Reconstruction reconstruct_y_from_F(const SpectralField& F, double tol) {
    require_rank(F.rank, Rank::matrix, "reconstruct_y_from_F");
    const double curl = curl_residual(F);
    if (curl > tol)
        throw InadmissibleData("initial F is not a gradient: curl residual " + std::to_string(curl) +
                               " exceeds tolerance " + std::to_string(tol));
    const auto& g = F.grid;
    const int d = g.dim();
    Reconstruction rec{SpectralField(g, Rank::vector), std::vector<double>(static_cast<std::size_t>(d * d)), false};
    for (int c = 0; c < d * d; ++c) {
        const double mean = F.at(0, c).real();
        rec.dropped_mean[static_cast<std::size_t>(c)] = mean;
        if (std::abs(mean) > tol) rec.mean_dropped = true;
    }
    for (std::size_t idx = 1; idx < g.points(); ++idx) {
        if (g.is_nyquist(idx)) continue;
        const double k2 = g.kappa2(idx);
        for (int i = 0; i < d; ++i) {
            Complex s{};
            for (int a = 0; a < d; ++a) s += (two_pi * g.wavenumber(idx, a)) * F.at(idx, i * d + a);
            rec.y.at(idx, i) = -I * s / k2;
        }
    }
    return rec;
}

int dealias_band(int n, DealiasRule rule) { return rule == DealiasRule::half ? n / 4 : n / 3; }

SpectralField dealias(const SpectralField& field, DealiasRule rule) {
    const auto& g = field.grid;
    const int band = dealias_band(g.n(), rule);
    SpectralField out = field;
    const int nc = out.components();
    for (std::size_t idx = 0; idx < g.points(); ++idx) {
        if (g.max_abs_wavenumber(idx) <= band) continue;
        for (int c = 0; c < nc; ++c) out.at(idx, c) = Complex{};
    }
    return out;
}

SpectralField resample(const SpectralField& field, int n_new) {
    const auto& g = field.grid;
    const SpectralGrid target(g.dim(), n_new, std::min(g.cutoff(), n_new / 2 - 1));
    SpectralField out(target, field.rank);
    const int nc = field.components();
    std::vector<int> k(static_cast<std::size_t>(g.dim()));
    for (std::size_t idx = 0; idx < g.points(); ++idx) {
        bool fits = !g.is_nyquist(idx);
        for (int a = 0; a < g.dim() && fits; ++a) {
            k[static_cast<std::size_t>(a)] = g.wavenumber(idx, a);
            if (std::abs(k[static_cast<std::size_t>(a)]) >= n_new / 2) fits = false;
        }
        if (!fits) continue;
        const std::size_t j = target.index_of(k);
        for (int c = 0; c < nc; ++c) out.at(j, c) = field.at(idx, c);
    }
    return out;
}

double parseval_inner(const SpectralField& a, const SpectralField& b) {
    require_layout(a.grid, b.grid, "parseval_inner");
    require_rank(b.rank, a.rank, "parseval_inner");
    double s = 0.0;
    for (std::size_t j = 0; j < a.coeffs.size(); ++j)
        s += a.coeffs[j].real() * b.coeffs[j].real() + a.coeffs[j].imag() * b.coeffs[j].imag();
    return s;
}

double parseval_norm2(const SpectralField& a) {
    double s = 0.0;
    for (const auto& c : a.coeffs) s += std::norm(c);
    return s;
}

double hermitian_defect(const SpectralField& field) {
    const auto& g = field.grid;
    const int nc = field.components();
    double scale = 0.0;
    for (const auto& c : field.coeffs) scale = std::max(scale, std::abs(c));
    if (scale == 0.0) return 0.0;
    double worst = 0.0;
    std::vector<int> k(static_cast<std::size_t>(g.dim()));
    for (std::size_t idx = 0; idx < g.points(); ++idx) {
        if (g.is_nyquist(idx)) continue;
        for (int a = 0; a < g.dim(); ++a) k[static_cast<std::size_t>(a)] = -g.wavenumber(idx, a);
        const std::size_t m = g.index_of(k);
        for (int c = 0; c < nc; ++c)
            worst = std::max(worst, std::abs(field.at(m, c) - std::conj(field.at(idx, c))));
    }
    return worst / scale;
}

}  // namespace vsg
