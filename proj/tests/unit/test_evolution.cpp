#include "vsg/diagnostics.hpp"
#include "vsg/errors.hpp"
#include "vsg/evolution.hpp"
#include "vsg/initial_data.hpp"
#include "vsg/run.hpp"

#include "generators.hpp"

#include <unsupported/Eigen/MatrixFunctions>
#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <numbers>

using namespace vsg;

namespace {

constexpr double pi = std::numbers::pi;

Eigen::Matrix2d expm_block(double a, double b, double t) {
    Eigen::Matrix2d L;
    L << 0, 1, -a, -b;
    return (t * L).exp();
}

SolverConfig quadratic_config(int n, double nu, double delta, double dt, double t_end, Scheme scheme) {
    SolverConfig c;
    c.grid = SpectralGrid(2, n);
    c.model = EnergyModel::quadratic(2);
    c.nu = nu;
    c.delta = delta;
    c.dt = dt;
    c.t_end = t_end;
    c.scheme = scheme;
    return c;
}

State single_mode(const SpectralGrid& g, double y_amp, double u_amp) {
    State s(g);
    const int k[2] = {1, 0}, km[2] = {-1, 0};
    s.y_hat.at(g.index_of(k), 1) = s.y_hat.at(g.index_of(km), 1) = 0.5 * y_amp;
    s.u_hat.at(g.index_of(k), 1) = s.u_hat.at(g.index_of(km), 1) = 0.5 * u_amp;
    return s;
}

double distance(const State& a, const State& b) {
    return std::sqrt(parseval_norm2(a.y_hat - b.y_hat) + parseval_norm2(a.u_hat - b.u_hat));
}

State final_state(const SolverConfig& c, const State& s0) {
    RunOptions o;
    o.record_every = 0;
    RunResult r = run(c, s0, o);
    EXPECT_TRUE(r.ok());
    return *r.final_state;
}

}  // namespace

TEST(SolverConfig, NamesAndValidation) {
    EXPECT_EQ(scheme_from_string(to_string(Scheme::exponential_midpoint)), Scheme::exponential_midpoint);
    EXPECT_EQ(scheme_from_string("imex_cnab2"), Scheme::imex_cnab2);
    EXPECT_EQ(dealias_rule_from_string(to_string(DealiasRule::half)), DealiasRule::half);
    EXPECT_THROW(scheme_from_string("rk4"), RangeError);
    EXPECT_THROW(dealias_rule_from_string("none"), RangeError);

    SolverConfig c;
    EXPECT_NO_THROW(c.validate());
    EXPECT_EQ(c.steps(), 1000);
    c.nu = -1;
    EXPECT_THROW(c.validate(), RangeError);
    c.nu = 0;
    c.delta = 0;
    EXPECT_TRUE(c.degenerate());
    c.dt = 0;
    EXPECT_THROW(c.validate(), RangeError);
    c.dt = 2.0;
    EXPECT_THROW(c.validate(), RangeError);
    c.dt = 0.3;
    EXPECT_THROW(c.steps(), RangeError);
    c.dt = 1e-3;
    c.t_end = 0;
    EXPECT_EQ(c.steps(), 0);
    c.t_end = 1;
    c.model = EnergyModel::double_well(3);
    EXPECT_THROW(c.validate(), RangeError);
}

TEST(InitState, FromYAndFromFAgree) {
    testgen::Gen gen(21);
    const SpectralGrid g(2, 16);
    const RealField y = gen.band_limited(g, Rank::vector, 4);
    const RealField u = gen.band_limited(g, Rank::vector, 4);
    const State a = init_state(g, u, y, GivenAs::y, 1e-10);
    const RealField F = inverse_transform(F_from_y(forward_transform(y)));
    InitInfo info;
    const State b = init_state(g, u, F, GivenAs::F, 1e-10, &info);
    EXPECT_FALSE(info.mean_dropped);
    EXPECT_LT(distance(a, b), 1e-13);
    EXPECT_EQ(a.y_hat.at(0, 0), Complex{});
    EXPECT_EQ(a.t, 0.0);
    // Everything above the cutoff is removed.
    for (std::size_t idx = 0; idx < g.points(); ++idx)
        if (g.max_abs_wavenumber(idx) > g.cutoff()) EXPECT_EQ(a.y_hat.at(idx, 0), Complex{});
}

TEST(InitState, RejectsInadmissibleData) {
    const SpectralGrid g(2, 16);
    RealField u(g, Rank::vector);
    RealField F(g, Rank::matrix);
    for (std::size_t p = 0; p < g.points(); ++p) F.at(p, 1) = std::sin(2 * pi * g.coordinate(p, 0));
    EXPECT_THROW(init_state(g, u, F, GivenAs::F, 1e-10), InadmissibleData);
    RealField y(g, Rank::vector);
    y.samples[5] = std::numeric_limits<double>::quiet_NaN();
    EXPECT_THROW(init_state(g, u, y, GivenAs::y, 1e-10), InadmissibleData);
    EXPECT_THROW(init_state(g, u, RealField(g, Rank::vector), GivenAs::F, 1e-10), RankMismatch);
    EXPECT_THROW(init_state(g, RealField(SpectralGrid(2, 8), Rank::vector), y, GivenAs::y, 1e-10), RankMismatch);

    RealField stretch(g, Rank::matrix);
    for (std::size_t p = 0; p < g.points(); ++p) stretch.at(p, 0) = 0.2;
    InitInfo info;
    const State s = init_state(g, u, stretch, GivenAs::F, 1e-10, &info);
    EXPECT_TRUE(info.mean_dropped);
    EXPECT_NEAR(info.dropped_mean[0], 0.2, 1e-15);
    EXPECT_EQ(parseval_norm2(s.y_hat), 0.0);
}

TEST(RhsNonlinear, QuadraticModelIsDivergenceOfF) {
    testgen::Gen gen(22);
    const SpectralGrid g(2, 24);
    const State s = gen.state(g, 5, 0.1, 0.0);
    const SpectralField r = rhs_nonlinear(s, EnergyModel::quadratic(2), DealiasRule::two_thirds);
    const SpectralField want = apply_diff_operator(s.F_hat(), DiffOp::div);
    for (std::size_t j = 0; j < want.coeffs.size(); ++j) EXPECT_NEAR(std::abs(r.coeffs[j] - want.coeffs[j]), 0, 1e-11);
}

TEST(RhsNonlinear, DoubleWellMatchesPaddedOracle) {
    // With F of band 2 the cubic stress has band 6, so on n = 24 nothing
    // aliases and the result must equal an independent padded evaluation.
    testgen::Gen gen(23);
    const SpectralGrid g(2, 24);
    const State s = gen.state(g, 2, 0.8, 0.0);
    const SpectralField got = rhs_nonlinear(s, EnergyModel::double_well(2), DealiasRule::two_thirds);

    const SpectralField Fpad = resample(s.F_hat(), 48);
    const RealField F = inverse_transform(Fpad);
    RealField S(Fpad.grid, Rank::matrix);
    for (std::size_t p = 0; p < F.grid.points(); ++p) {
        double n2 = 0.0;
        for (int c = 0; c < 4; ++c) n2 += F.at(p, c) * F.at(p, c);
        for (int c = 0; c < 4; ++c) S.at(p, c) = (n2 - 1.0) * F.at(p, c);
    }
    const SpectralField Sh = forward_transform(S);
    double scale = 0.0;
    for (const auto& v : got.coeffs) scale = std::max(scale, std::abs(v));
    for (std::size_t idx = 0; idx < g.points(); ++idx) {
        const int k[2] = {g.wavenumber(idx, 0), g.wavenumber(idx, 1)};
        const std::size_t j = Fpad.grid.index_of(k);
        for (int i = 0; i < 2; ++i) {
            Complex want{};
            if (g.max_abs_wavenumber(idx) <= g.cutoff())
                for (int a = 0; a < 2; ++a) want += Complex(0, 2 * pi * k[a]) * Sh.at(j, i * 2 + a);
            EXPECT_NEAR(std::abs(got.at(idx, i) - want), 0.0, 1e-14 * scale);
        }
    }
}

TEST(LinearBlock, MatchesMatrixExponential) {
    struct Case {
        double a, b, t;
    };
    const double k2 = 4 * pi * pi;
    const Case cases[] = {
        {0, 0, 0.7},         // nilpotent
        {k2, 0, 0.3},        // undamped
        {k2, 0.1 * k2, 1e-3},
        {0.01 * k2 * k2, k2, 5e-3},  // overdamped
        {1.0, 2.0, 0.5},     // critical, b^2 = 4a
        {1.0, 2.0 + 1e-7, 0.5},
        {1e4, 1e3, 2e-3},
        {0.0, 50.0, 0.1},
    };
    for (const auto& c : cases) {
        const Mode2x2 m = linear_block_exponential(c.a, c.b, c.t);
        const Eigen::Matrix2d e = expm_block(c.a, c.b, c.t);
        const double scale = std::max(1.0, e.cwiseAbs().maxCoeff());
        EXPECT_NEAR(m[0], e(0, 0), 1e-12 * scale) << c.a << " " << c.b;
        EXPECT_NEAR(m[1], e(0, 1), 1e-12 * scale) << c.a << " " << c.b;
        EXPECT_NEAR(m[2], e(1, 0), 1e-12 * scale) << c.a << " " << c.b;
        EXPECT_NEAR(m[3], e(1, 1), 1e-12 * scale) << c.a << " " << c.b;
    }
    const Mode2x2 id = linear_block_exponential(3.0, 4.0, 0.0);
    EXPECT_EQ(id[0], 1.0);
    EXPECT_EQ(id[1], 0.0);
    EXPECT_EQ(id[3], 1.0);
}

TEST(LinearOracle, MatchesPerModeMatrixExponential) {
    testgen::Gen gen(24);
    const SpectralGrid g(2, 12);
    const State s0 = gen.state(g, 3, 0.1, 0.1);
    const SolverConfig c = quadratic_config(12, 0.3, 0.02, 1e-3, 1.0, Scheme::imex_cnab2);
    const State s1 = linear_oracle(c, s0, 0.8);
    EXPECT_DOUBLE_EQ(s1.t, 0.8);
    for (std::size_t idx = 0; idx < g.points(); ++idx) {
        const double k2 = g.kappa2(idx);
        const Eigen::Matrix2d e = expm_block(k2 + c.delta * k2 * k2, c.nu * k2, 0.8);
        for (int i = 0; i < 2; ++i) {
            const Complex y = e(0, 0) * s0.y_hat.at(idx, i) + e(0, 1) * s0.u_hat.at(idx, i);
            const Complex u = e(1, 0) * s0.y_hat.at(idx, i) + e(1, 1) * s0.u_hat.at(idx, i);
            EXPECT_NEAR(std::abs(s1.y_hat.at(idx, i) - y), 0, 1e-13);
            EXPECT_NEAR(std::abs(s1.u_hat.at(idx, i) - u), 0, 1e-12);
        }
    }
}

TEST(LinearOracle, RejectsNonlinearModelAndForcing) {
    const SpectralGrid g(2, 8);
    SolverConfig c = quadratic_config(8, 0, 0, 1e-3, 1, Scheme::imex_cnab2);
    c.model = EnergyModel::double_well(2);
    EXPECT_THROW(linear_oracle(c, State(g), 1.0), DomainError);
    c.model = EnergyModel::quadratic(2);
    c.forcing = [&](double) { return SpectralField(g, Rank::vector); };
    EXPECT_THROW(linear_oracle(c, State(g), 1.0), DomainError);
}

TEST(LinearOracle, ConservesEnergyWithoutDissipation) {
    testgen::Gen gen(25);
    const SpectralGrid g(2, 16);
    const State s0 = gen.state(g, 4, 0.05, 0.05);
    const SolverConfig c = quadratic_config(16, 0, 0, 1e-3, 1, Scheme::imex_cnab2);
    const auto model = EnergyModel::quadratic(2);
    const double E0 = energy_functional(s0, model, 0.0);
    for (double t : {0.1, 0.37, 1.0, 5.0})
        EXPECT_NEAR(energy_functional(linear_oracle(c, s0, t), model, 0.0), E0, 1e-13 * (1 + E0));
    SolverConfig damped = c;
    damped.nu = 0.5;
    double prev = E0;
    for (double t : {0.1, 0.2, 0.4}) {
        const double E = energy_functional(linear_oracle(damped, s0, t), model, 0.0);
        EXPECT_LT(E, prev);
        prev = E;
    }
}

TEST(Stepper, ZeroStateIsAFixedPoint) {
    for (Scheme scheme : {Scheme::imex_cnab2, Scheme::exponential_midpoint}) {
        SolverConfig c;
        c.grid = SpectralGrid(2, 16);
        c.scheme = scheme;
        c.t_end = 0.05;
        const State s = final_state(c, State(c.grid));
        EXPECT_EQ(parseval_norm2(s.y_hat), 0.0);
        EXPECT_EQ(parseval_norm2(s.u_hat), 0.0);
        EXPECT_NEAR(s.t, 0.05, 1e-15);
    }
}

TEST(Stepper, OneStepLocalErrorIsThirdOrder) {
    // Single undamped mode: the one-step error against the oracle must drop
    // by about 8 when dt halves.
    const SpectralGrid g(2, 8);
    const State s0 = single_mode(g, 0.1, 0.2);
    for (Scheme scheme : {Scheme::imex_cnab2, Scheme::exponential_midpoint}) {
        std::vector<double> errs;
        for (double dt : {2e-2, 1e-2, 5e-3}) {
            SolverConfig c = quadratic_config(8, 0.05, 0.001, dt, dt, scheme);
            Stepper st(c);
            errs.push_back(distance(st.step(s0), linear_oracle(c, s0, dt)));
        }
        for (int i = 0; i < 2; ++i) EXPECT_NEAR(std::log2(errs[i] / errs[i + 1]), 3.0, 0.3) << to_string(scheme);
    }
}

TEST(Stepper, GlobalOrderTwoAgainstOracle) {
    const SpectralGrid g(2, 8);
    const State s0 = single_mode(g, 0.1, 0.2);
    for (Scheme scheme : {Scheme::imex_cnab2, Scheme::exponential_midpoint}) {
        std::vector<double> errs;
        for (double dt : {1e-2, 5e-3, 2.5e-3}) {
            const SolverConfig c = quadratic_config(8, 0.1, 0.01, dt, 1.0, scheme);
            errs.push_back(distance(final_state(c, s0), linear_oracle(c, s0, 1.0)));
        }
        for (int i = 0; i < 2; ++i) EXPECT_NEAR(std::log2(errs[i] / errs[i + 1]), 2.0, 0.15) << to_string(scheme);
    }
}

TEST(Stepper, UniformTranslationIsExact) {
    // The k = 0 mode feels no stress: u stays constant and y grows linearly.
    const SpectralGrid g(2, 8);
    State s0(g);
    s0.u_hat.at(0, 0) = 0.3;
    SolverConfig c = quadratic_config(8, 1.0, 1.0, 0.1, 0.5, Scheme::exponential_midpoint);
    const State s = final_state(c, s0);
    EXPECT_NEAR(std::abs(s.u_hat.at(0, 0) - 0.3), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(s.y_hat.at(0, 0) - 0.15), 0.0, 1e-15);
}

TEST(Stepper, PreservesSymmetryTruncationAndInvolution) {
    testgen::Gen gen(26);
    SolverConfig c;
    c.grid = SpectralGrid(2, 24);
    c.nu = 0.1;
    c.delta = 0.01;
    c.t_end = 0.05;
    for (Scheme scheme : {Scheme::imex_cnab2, Scheme::exponential_midpoint}) {
        c.scheme = scheme;
        const State s = final_state(c, gen.state(c.grid, 6, 0.1, 0.1));
        EXPECT_LT(hermitian_defect(s.y_hat), 1e-13);
        EXPECT_LT(hermitian_defect(s.u_hat), 1e-13);
        EXPECT_LT(curl_residual(s.F_hat()), 1e-12);
        for (std::size_t idx = 0; idx < c.grid.points(); ++idx)
            if (c.grid.max_abs_wavenumber(idx) > c.grid.cutoff()) {
                EXPECT_EQ(s.y_hat.at(idx, 0), Complex{});
                EXPECT_EQ(s.u_hat.at(idx, 1), Complex{});
            }
    }
}

TEST(Stepper, DeterministicAndHistoryReset) {
    testgen::Gen gen(27);
    SolverConfig c;
    c.grid = SpectralGrid(2, 16);
    c.dt = 1e-3;
    const State s0 = gen.state(c.grid, 4, 0.1, 0.0);
    Stepper a(c), b(c);
    State x = s0, y = s0;
    for (int i = 0; i < 5; ++i) {
        x = a.step(x);
        y = b.step(y);
    }
    EXPECT_EQ(x.y_hat.coeffs, y.y_hat.coeffs);
    EXPECT_EQ(x.u_hat.coeffs, y.u_hat.coeffs);
    // A stale history (wrong time) is not used: stepping s0 again after a
    // run reproduces the first step of a fresh stepper.
    Stepper fresh(c);
    const State first = fresh.step(s0);
    const State again = a.step(s0);
    EXPECT_EQ(first.y_hat.coeffs, again.y_hat.coeffs);
}

TEST(Stepper, BlowUpIsReported) {
    SolverConfig c;
    c.grid = SpectralGrid(2, 16);
    c.nu = 0;
    c.delta = 0;
    c.dt = 0.05;
    c.t_end = 50;
    InitialSpec spec;
    spec.amplitude = 2.0;
    RunOptions o;
    o.record_every = 10;
    const RunResult r = run(c, make_initial_state(c.grid, spec), o);
    ASSERT_FALSE(r.ok());
    EXPECT_GT(r.failure->t, 0.0);
    EXPECT_LT(r.meta.steps_taken, c.steps());
    EXPECT_FALSE(r.records.empty());
    EXPECT_EQ(r.meta.flags.front(), "degenerate: nu = delta = 0");
}

TEST(EstimateDt, FormulaAndResolutionScaling) {
    SolverConfig c;
    c.grid = SpectralGrid(2, 64);
    // D^2 W(0) = -I for the double well, so |D^2 W| = 1 everywhere.
    const double dt64 = estimate_dt(c, State(c.grid), 0.5);
    EXPECT_NEAR(dt64, 0.5 * 2.0 / (2 * pi * 32), 1e-15);
    c.grid = SpectralGrid(2, 128);
    EXPECT_NEAR(estimate_dt(c, State(c.grid), 0.5), 0.5 * dt64, 1e-15);
    // Stiffer states get smaller steps.
    InitialSpec spec;
    spec.amplitude = 0.3;
    EXPECT_LT(estimate_dt(c, make_initial_state(c.grid, spec), 0.5), 0.5 * dt64);
}

TEST(Forcing, ConstantForcingOnTranslationMode) {
    // u_t = f on the k = 0 mode: u(t) = f t, y(t) = f t^2 / 2; both schemes
    // are exact for this quadratic-in-time motion.
    for (Scheme scheme : {Scheme::imex_cnab2, Scheme::exponential_midpoint}) {
        SolverConfig c = quadratic_config(8, 0.5, 0.1, 0.01, 0.2, scheme);
        const SpectralGrid g = c.grid;
        c.forcing = [g](double) {
            SpectralField f(g, Rank::vector);
            f.at(0, 1) = 2.0;
            return f;
        };
        const State s = final_state(c, State(g));
        EXPECT_NEAR(s.u_hat.at(0, 1).real(), 0.4, 1e-13) << to_string(scheme);
        EXPECT_NEAR(s.y_hat.at(0, 1).real(), 0.04, 1e-13) << to_string(scheme);
    }
}
