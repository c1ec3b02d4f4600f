#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace vsg {

using Complex = std::complex<double>;

enum class Rank { scalar, vector, matrix };

enum class DiffOp { grad, div, laplacian, grad_laplacian, bilaplacian };

enum class DealiasRule { two_thirds, half };

/// Periodic grid on the unit torus [0,1)^d with n points per axis.
///
/// Mode k in Z^d carries the wavevector 2*pi*k. Stored wavenumbers span
/// [-n/2, n/2); the Nyquist row k_a = -n/2 is kept at zero. `cutoff` is the
/// Galerkin truncation |k_a| <= cutoff applied to the evolved unknowns.
class SpectralGrid {
public:
    SpectralGrid(int d, int n, int cutoff);
    /// Cutoff defaults to floor(n/3), the two-thirds dealiasing band.
    SpectralGrid(int d, int n);

    int dim() const noexcept { return d_; }
    int n() const noexcept { return n_; }
    int cutoff() const noexcept { return cutoff_; }
    std::size_t points() const noexcept { return points_; }
    int components(Rank rank) const noexcept;

    /// Integer wavenumber of flat index `idx` along `axis`.
    int wavenumber(std::size_t idx, int axis) const noexcept {
        return (*k_)[idx * static_cast<std::size_t>(d_) + static_cast<std::size_t>(axis)];
    }
    /// max_a |k_a| of flat index `idx`.
    int max_abs_wavenumber(std::size_t idx) const noexcept { return (*kmax_)[idx]; }
    /// |2 pi k|^2 of flat index `idx`.
    double kappa2(std::size_t idx) const noexcept { return (*kappa2_)[idx]; }
    bool is_nyquist(std::size_t idx) const noexcept;

    /// Flat index of wavenumber `k` (components taken modulo n).
    std::size_t index_of(std::span<const int> k) const;
    /// Grid coordinate x_a of flat index `idx` along `axis`.
    double coordinate(std::size_t idx, int axis) const noexcept;

    /// Same dimension and resolution (cutoff may differ).
    bool same_layout(const SpectralGrid& other) const noexcept {
        return d_ == other.d_ && n_ == other.n_;
    }
    bool operator==(const SpectralGrid& other) const noexcept {
        return same_layout(other) && cutoff_ == other.cutoff_;
    }

    SpectralGrid with_cutoff(int cutoff) const { return SpectralGrid(d_, n_, cutoff); }

private:
    int d_;
    int n_;
    int cutoff_;
    std::size_t points_;
    std::shared_ptr<const std::vector<int>> k_;
    std::shared_ptr<const std::vector<int>> kmax_;
    std::shared_ptr<const std::vector<double>> kappa2_;
};

/// Physical-space samples, point-major: samples[point * components + c].
/// Matrix components are ordered (i*d + alpha).
struct RealField {
    SpectralGrid grid;
    Rank rank = Rank::scalar;
    std::vector<double> samples;

    RealField(const SpectralGrid& g, Rank r);
    RealField(const SpectralGrid& g, Rank r, std::vector<double> values);

    int components() const noexcept { return grid.components(rank); }
    double& at(std::size_t point, int c) { return samples[point * components() + c]; }
    double at(std::size_t point, int c) const { return samples[point * components() + c]; }
};

/// Fourier coefficients c_k = mean over the torus of f(x) exp(-2 pi i k.x),
/// point-major like RealField. Real fields have Hermitian-symmetric spectra.
struct SpectralField {
    SpectralGrid grid;
    Rank rank = Rank::scalar;
    std::vector<Complex> coeffs;

    SpectralField(const SpectralGrid& g, Rank r);
    SpectralField(const SpectralGrid& g, Rank r, std::vector<Complex> values);

    int components() const noexcept { return grid.components(rank); }
    Complex& at(std::size_t idx, int c) { return coeffs[idx * components() + c]; }
    const Complex& at(std::size_t idx, int c) const { return coeffs[idx * components() + c]; }

    SpectralField& operator+=(const SpectralField& other);
    SpectralField& operator-=(const SpectralField& other);
    SpectralField& operator*=(double s);
};

SpectralField operator+(SpectralField a, const SpectralField& b);
SpectralField operator-(SpectralField a, const SpectralField& b);
SpectralField operator*(double s, SpectralField a);

SpectralField forward_transform(const RealField& field);
RealField inverse_transform(const SpectralField& field);

/// Zeroes every coefficient with max_a |k_a| > cutoff.
SpectralField project_modes(const SpectralField& field, int cutoff);

SpectralField apply_diff_operator(const SpectralField& field, DiffOp op);

/// F_{i alpha}(k) = i 2 pi k_alpha y_i(k).
SpectralField F_from_y(const SpectralField& y);

struct Reconstruction {
    SpectralField y;
    /// Mean of F that could not be represented by a periodic y and was dropped.
    std::vector<double> dropped_mean;
    bool mean_dropped = false;
};

/// Inverts F = grad y for curl-free F with y(0) = 0. Throws InadmissibleData
/// when the curl residual exceeds `tol`. A mean of F above `tol` is dropped
/// and reported in the result.
Reconstruction reconstruct_y_from_F(const SpectralField& F, double tol);

/// max over i, alpha < beta, k of |i 2 pi (k_alpha F_{i beta} - k_beta F_{i alpha})|.
double curl_residual(const SpectralField& F);

SpectralField dealias(const SpectralField& field, DealiasRule rule);
/// Largest |k_a| retained by the rule on an n-point axis.
int dealias_band(int n, DealiasRule rule);

/// Zero-pads (n_new > n) or truncates (n_new < n) a spectrum onto a grid with
/// `n_new` points per axis. Coefficients keep their wavenumber.
SpectralField resample(const SpectralField& field, int n_new);

/// Parseval inner product sum_k conj(a_k) . b_k, real part.
double parseval_inner(const SpectralField& a, const SpectralField& b);
/// sum_k |a_k|^2 = mean over the torus of |a|^2.
double parseval_norm2(const SpectralField& a);

/// Largest relative violation of c(-k) = conj(c(k)).
double hermitian_defect(const SpectralField& field);

}  // namespace vsg
