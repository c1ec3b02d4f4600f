#include "vsg/errors.hpp"
#include "vsg/spectral.hpp"

#include "generators.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <numbers>

using namespace vsg;

namespace {

constexpr double pi = std::numbers::pi;

// Direct O(N^2) DFT of one component, mean-normalised.
Complex brute_dft(const RealField& f, int c, std::size_t kidx) {
    const auto& g = f.grid;
    Complex s{};
    for (std::size_t p = 0; p < g.points(); ++p) {
        double phase = 0.0;
        for (int a = 0; a < g.dim(); ++a) phase += g.wavenumber(kidx, a) * g.coordinate(p, a);
        s += f.at(p, c) * std::polar(1.0, -2 * pi * phase);
    }
    return s / static_cast<double>(g.points());
}

double max_diff(const RealField& a, const RealField& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.samples.size(); ++i) m = std::max(m, std::abs(a.samples[i] - b.samples[i]));
    return m;
}

}  // namespace

TEST(SpectralGrid, LayoutAndWavenumbers) {
    const SpectralGrid g(2, 8);
    EXPECT_EQ(g.points(), 64u);
    EXPECT_EQ(g.cutoff(), 2);
    EXPECT_EQ(g.components(Rank::matrix), 4);
    const int k[2] = {-3, 2};
    const std::size_t idx = g.index_of(k);
    EXPECT_EQ(g.wavenumber(idx, 0), -3);
    EXPECT_EQ(g.wavenumber(idx, 1), 2);
    EXPECT_EQ(g.max_abs_wavenumber(idx), 3);
    EXPECT_NEAR(g.kappa2(idx), 4 * pi * pi * 13, 1e-12);
    const int ny[2] = {-4, 0};
    EXPECT_TRUE(g.is_nyquist(g.index_of(ny)));
    EXPECT_FALSE(g.is_nyquist(idx));
    EXPECT_EQ(SpectralGrid(2, 64).cutoff(), 21);
    EXPECT_EQ(SpectralGrid(1, 4).cutoff(), 1);
}

TEST(SpectralGrid, RejectsBadArguments) {
    EXPECT_THROW(SpectralGrid(0, 8), RangeError);
    EXPECT_THROW(SpectralGrid(4, 8), RangeError);
    EXPECT_THROW(SpectralGrid(2, 7), RangeError);
    EXPECT_THROW(SpectralGrid(2, 2), RangeError);
    EXPECT_THROW(SpectralGrid(2, 8, 4), RangeError);
    EXPECT_THROW(SpectralGrid(2, 8, -1), RangeError);
    EXPECT_NO_THROW(SpectralGrid(2, 8, 3));
}

TEST(Transform, MatchesBruteForceDft) {
    testgen::Gen gen(1);
    for (int d : {1, 2, 3}) {
        const SpectralGrid g(d, d == 3 ? 6 : 10);
        const RealField f = gen.white(g, Rank::vector);
        const SpectralField s = forward_transform(f);
        for (std::size_t idx = 0; idx < g.points(); ++idx) {
            for (int c = 0; c < f.components(); ++c) {
                const Complex want = g.is_nyquist(idx) ? Complex{} : brute_dft(f, c, idx);
                EXPECT_NEAR(std::abs(s.at(idx, c) - want), 0.0, 1e-13);
            }
        }
    }
}

TEST(Transform, PureModes) {
    const SpectralGrid g(2, 16);
    RealField f(g, Rank::scalar);
    for (std::size_t p = 0; p < g.points(); ++p)
        f.at(p, 0) = 3.0 + std::cos(2 * pi * (2 * g.coordinate(p, 0) - g.coordinate(p, 1)));
    const SpectralField s = forward_transform(f);
    const int k[2] = {2, -1}, km[2] = {-2, 1};
    EXPECT_NEAR(std::abs(s.at(0, 0) - 3.0), 0, 1e-14);
    EXPECT_NEAR(std::abs(s.at(g.index_of(k), 0) - 0.5), 0, 1e-14);
    EXPECT_NEAR(std::abs(s.at(g.index_of(km), 0) - 0.5), 0, 1e-14);
    EXPECT_NEAR(parseval_norm2(s), 9.5, 1e-13);
}

TEST(Transform, RoundTripOfBandLimitedField) {
    testgen::Gen gen(2);
    for (int d : {1, 2, 3}) {
        const SpectralGrid g(d, 12);
        const RealField f = gen.band_limited(g, Rank::matrix, 5);
        const SpectralField s = forward_transform(f);
        EXPECT_LT(hermitian_defect(s), 1e-14);
        EXPECT_LT(max_diff(inverse_transform(s), f), 1e-13);
    }
}

TEST(Transform, NyquistIsDropped) {
    const SpectralGrid g(1, 8);
    RealField f(g, Rank::scalar);
    for (std::size_t p = 0; p < g.points(); ++p) f.at(p, 0) = (p % 2 == 0) ? 1.0 : -1.0;
    const SpectralField s = forward_transform(f);
    EXPECT_EQ(parseval_norm2(s), 0.0);
}

TEST(DiffOps, DerivativesOfTrigonometricFields) {
    // y = (sin 2pi x1 cos 4pi x2, cos 2pi x2) on the 2-torus.
    const SpectralGrid g(2, 16);
    RealField y(g, Rank::vector);
    for (std::size_t p = 0; p < g.points(); ++p) {
        const double x1 = g.coordinate(p, 0), x2 = g.coordinate(p, 1);
        y.at(p, 0) = std::sin(2 * pi * x1) * std::cos(4 * pi * x2);
        y.at(p, 1) = std::cos(2 * pi * x2);
    }
    const SpectralField yh = forward_transform(y);
    const RealField F = inverse_transform(F_from_y(yh));
    const RealField lap = inverse_transform(apply_diff_operator(yh, DiffOp::laplacian));
    const RealField bil = inverse_transform(apply_diff_operator(yh, DiffOp::bilaplacian));
    const RealField divF = inverse_transform(apply_diff_operator(F_from_y(yh), DiffOp::div));
    const RealField gl = inverse_transform(apply_diff_operator(F_from_y(yh), DiffOp::grad_laplacian));
    for (std::size_t p = 0; p < g.points(); ++p) {
        const double x1 = g.coordinate(p, 0), x2 = g.coordinate(p, 1);
        const double s1 = std::sin(2 * pi * x1), c1 = std::cos(2 * pi * x1);
        const double s2 = std::sin(4 * pi * x2), c2 = std::cos(4 * pi * x2);
        EXPECT_NEAR(F.at(p, 0), 2 * pi * c1 * c2, 1e-11);
        EXPECT_NEAR(F.at(p, 1), -4 * pi * s1 * s2, 1e-11);
        EXPECT_NEAR(F.at(p, 2), 0.0, 1e-11);
        EXPECT_NEAR(F.at(p, 3), -2 * pi * std::sin(2 * pi * x2), 1e-11);
        const double l0 = -20 * pi * pi * s1 * c2;
        EXPECT_NEAR(lap.at(p, 0), l0, 1e-9);
        EXPECT_NEAR(divF.at(p, 0), l0, 1e-9);
        EXPECT_NEAR(bil.at(p, 0), 400 * pi * pi * pi * pi * s1 * c2, 1e-6);
        EXPECT_NEAR(gl.at(p, 0), -20 * pi * pi * l0, 1e-6);
        EXPECT_NEAR(lap.at(p, 1), -4 * pi * pi * std::cos(2 * pi * x2), 1e-9);
    }
}

TEST(DiffOps, RankChecks) {
    const SpectralGrid g(2, 8);
    EXPECT_THROW(apply_diff_operator(SpectralField(g, Rank::scalar), DiffOp::div), RankMismatch);
    EXPECT_THROW(apply_diff_operator(SpectralField(g, Rank::matrix), DiffOp::grad), RankMismatch);
    EXPECT_THROW(F_from_y(SpectralField(g, Rank::matrix)), RankMismatch);
    EXPECT_THROW(curl_residual(SpectralField(g, Rank::vector)), RankMismatch);
    EXPECT_THROW(parseval_inner(SpectralField(g, Rank::vector), SpectralField(SpectralGrid(2, 10), Rank::vector)),
                 RankMismatch);
    EXPECT_EQ(apply_diff_operator(SpectralField(g, Rank::scalar), DiffOp::grad).rank, Rank::vector);
}

TEST(Curl, GradientsAreCurlFreeAndExampleValue) {
    testgen::Gen gen(3);
    const SpectralGrid g(3, 8);
    const SpectralField y = forward_transform(gen.band_limited(g, Rank::vector, 3));
    EXPECT_LT(curl_residual(F_from_y(y)), 1e-12);

    // F = [[0, sin 2 pi x1], [0, 0]]: d1 F_12 - d2 F_11 = 2 pi cos 2 pi x1,
    // whose coefficients at k = +-1 have modulus pi.
    const SpectralGrid g2(2, 16);
    RealField F(g2, Rank::matrix);
    for (std::size_t p = 0; p < g2.points(); ++p) F.at(p, 1) = std::sin(2 * pi * g2.coordinate(p, 0));
    EXPECT_NEAR(curl_residual(forward_transform(F)), pi, 1e-12);
}

TEST(Reconstruct, RecoversYAndRejectsCurl) {
    testgen::Gen gen(4);
    const SpectralGrid g(2, 16);
    SpectralField y = forward_transform(gen.band_limited(g, Rank::vector, 5));
    y.at(0, 0) = y.at(0, 1) = Complex{};
    const Reconstruction rec = reconstruct_y_from_F(F_from_y(y), 1e-10);
    EXPECT_FALSE(rec.mean_dropped);
    for (std::size_t j = 0; j < y.coeffs.size(); ++j) EXPECT_NEAR(std::abs(rec.y.coeffs[j] - y.coeffs[j]), 0, 1e-14);

    SpectralField F = F_from_y(y);
    F.at(0, 0) = 0.3;  // a constant stretch has no periodic potential
    const Reconstruction r2 = reconstruct_y_from_F(F, 1e-10);
    EXPECT_TRUE(r2.mean_dropped);
    EXPECT_NEAR(r2.dropped_mean[0], 0.3, 1e-15);

    RealField bad(g, Rank::matrix);
    for (std::size_t p = 0; p < g.points(); ++p) bad.at(p, 1) = std::sin(2 * pi * g.coordinate(p, 0));
    EXPECT_THROW(reconstruct_y_from_F(forward_transform(bad), 1e-8), InadmissibleData);
}

TEST(Dealias, BandsAndProjection) {
    EXPECT_EQ(dealias_band(64, DealiasRule::two_thirds), 21);
    EXPECT_EQ(dealias_band(64, DealiasRule::half), 16);
    testgen::Gen gen(5);
    const SpectralGrid g(2, 24);
    const SpectralField s = forward_transform(gen.white(g, Rank::scalar));
    const SpectralField d = dealias(s, DealiasRule::two_thirds);
    for (std::size_t idx = 0; idx < g.points(); ++idx) {
        if (g.max_abs_wavenumber(idx) > 8)
            EXPECT_EQ(d.at(idx, 0), Complex{});
        else
            EXPECT_EQ(d.at(idx, 0), s.at(idx, 0));
    }
    const SpectralField p = project_modes(s, 3);
    EXPECT_EQ(project_modes(p, 3).coeffs, p.coeffs);
    EXPECT_THROW(project_modes(s, 12), RangeError);
}

TEST(Dealias, QuadraticProductIsExactInsideTheBand) {
    // Product of two fields of band B: after the two-thirds truncation the
    // retained modes equal the exact convolution as long as 2B + band < n.
    testgen::Gen gen(6);
    const int n = 24;
    const int B = 7;
    const SpectralGrid g(2, n);
    const RealField a = gen.band_limited(g, Rank::scalar, B);
    const RealField b = gen.band_limited(g, Rank::scalar, B);
    RealField ab(g, Rank::scalar);
    for (std::size_t p = 0; p < g.points(); ++p) ab.at(p, 0) = a.at(p, 0) * b.at(p, 0);
    const SpectralField got = dealias(forward_transform(ab), DealiasRule::two_thirds);

    const SpectralField ah = forward_transform(a), bh = forward_transform(b);
    std::map<std::pair<int, int>, Complex> exact;
    for (std::size_t i = 0; i < g.points(); ++i) {
        if (ah.at(i, 0) == Complex{}) continue;
        for (std::size_t j = 0; j < g.points(); ++j) {
            if (bh.at(j, 0) == Complex{}) continue;
            exact[{g.wavenumber(i, 0) + g.wavenumber(j, 0), g.wavenumber(i, 1) + g.wavenumber(j, 1)}] +=
                ah.at(i, 0) * bh.at(j, 0);
        }
    }
    const int band = dealias_band(n, DealiasRule::two_thirds);
    for (std::size_t idx = 0; idx < g.points(); ++idx) {
        if (g.max_abs_wavenumber(idx) > band) continue;
        const auto it = exact.find({g.wavenumber(idx, 0), g.wavenumber(idx, 1)});
        const Complex want = it == exact.end() ? Complex{} : it->second;
        EXPECT_NEAR(std::abs(got.at(idx, 0) - want), 0.0, 1e-13);
    }
}

TEST(Resample, PadAndTruncateKeepWavenumbers) {
    testgen::Gen gen(7);
    const SpectralGrid g(2, 12);
    const SpectralField s = forward_transform(gen.band_limited(g, Rank::vector, 4));
    const SpectralField up = resample(s, 24);
    EXPECT_EQ(up.grid.n(), 24);
    EXPECT_NEAR(parseval_norm2(up), parseval_norm2(s), 1e-14);
    // Zero padding interpolates: the coarse samples reappear on every other fine point.
    const RealField coarse = inverse_transform(s);
    const RealField fine = inverse_transform(up);
    for (int i = 0; i < 12; ++i)
        for (int j = 0; j < 12; ++j)
            for (int c = 0; c < 2; ++c)
                EXPECT_NEAR(fine.at(static_cast<std::size_t>(2 * i * 24 + 2 * j), c),
                            coarse.at(static_cast<std::size_t>(i * 12 + j), c), 1e-13);
    const SpectralField down = resample(up, 12);
    for (std::size_t j = 0; j < s.coeffs.size(); ++j) EXPECT_EQ(down.coeffs[j], s.coeffs[j]);
    EXPECT_LT(parseval_norm2(resample(s, 6)), parseval_norm2(s));
}

TEST(Parseval, InnerProductMatchesGridMean) {
    testgen::Gen gen(8);
    const SpectralGrid g(2, 16);
    const RealField a = gen.band_limited(g, Rank::matrix, 6);
    const RealField b = gen.band_limited(g, Rank::matrix, 6);
    double mean = 0.0;
    for (std::size_t i = 0; i < a.samples.size(); ++i) mean += a.samples[i] * b.samples[i];
    mean /= static_cast<double>(g.points());
    EXPECT_NEAR(parseval_inner(forward_transform(a), forward_transform(b)), mean, 1e-12);
}

TEST(FieldArithmetic, ElementwiseAndLayoutChecked) {
    const SpectralGrid g(1, 8);
    SpectralField a(g, Rank::scalar), b(g, Rank::scalar);
    a.at(1, 0) = 2.0;
    b.at(1, 0) = Complex(0, 1);
    const SpectralField c = 2.0 * (a + b) - a;
    EXPECT_EQ(c.at(1, 0), Complex(2.0, 2.0));
    EXPECT_THROW(a += SpectralField(g, Rank::vector), RankMismatch);
    EXPECT_THROW(a -= SpectralField(SpectralGrid(1, 10), Rank::scalar), RankMismatch);
    EXPECT_THROW(RealField(g, Rank::scalar, std::vector<double>(3)), RankMismatch);
}
