#include "vsg/diagnostics.hpp"
#include "vsg/errors.hpp"
#include "vsg/initial_data.hpp"
#include "vsg/run.hpp"

#include "generators.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace vsg;

namespace {

constexpr double pi = std::numbers::pi;

// Grid-mean of |f|^2 computed directly on samples.
double mean_sq(const RealField& f) {
    double s = 0.0;
    for (double v : f.samples) s += v * v;
    return s / static_cast<double>(f.grid.points());
}

RealField partial(const SpectralField& f, int axis) {
    SpectralField out = f;
    for (std::size_t idx = 0; idx < f.grid.points(); ++idx)
        for (int c = 0; c < f.components(); ++c)
            out.at(idx, c) *= Complex(0, 2 * pi * f.grid.wavenumber(idx, axis));
    return inverse_transform(out);
}

}  // namespace

TEST(Energy, ZeroStateValues) {
    const SpectralGrid g(2, 16);
    const State z(g);
    EXPECT_DOUBLE_EQ(energy_functional(z, EnergyModel::double_well(2), 0.01), 0.25);
    EXPECT_DOUBLE_EQ(energy_functional(z, EnergyModel::quadratic(2), 0.01), 0.0);
    EXPECT_DOUBLE_EQ(structure_functional(z, EnergyModel::double_well(2), 0.3, 0.01), 0.25);
    const StructureRates r = structure_dissipation_rate(z, EnergyModel::double_well(2), 0.3, 0.01);
    EXPECT_EQ(r.total(), 0.0);
}

TEST(Energy, SingleModeClosedForm) {
    // y_1 = A sin(2 pi x_1), u_1 = B cos(2 pi x_2), quadratic model:
    // E = B^2/4 + (2 pi A)^2/4 + delta/2 (2 pi)^4 A^2 / 2.
    const SpectralGrid g(2, 16);
    RealField y(g, Rank::vector), u(g, Rank::vector);
    const double A = 0.3, B = 0.7, delta = 0.02;
    for (std::size_t p = 0; p < g.points(); ++p) {
        y.at(p, 0) = A * std::sin(2 * pi * g.coordinate(p, 0));
        u.at(p, 0) = B * std::cos(2 * pi * g.coordinate(p, 1));
    }
    const State s = init_state(g, u, y, GivenAs::y, 1e-10);
    const double k = 2 * pi;
    const double want = B * B / 4 + k * k * A * A / 4 + 0.5 * delta * std::pow(k, 4) * A * A / 2;
    EXPECT_NEAR(energy_functional(s, EnergyModel::quadratic(2), delta), want, 1e-12);
    EXPECT_NEAR(energy_functional_parseval(s, EnergyModel::quadratic(2), delta), want, 1e-12);
}

TEST(Energy, GridAndParsevalFormsAgree) {
    testgen::Gen gen(31);
    const SpectralGrid g(2, 24);
    for (int trial = 0; trial < 5; ++trial) {
        const State s = gen.state(g, 6, 0.05, 0.2);
        for (const auto& m : {EnergyModel::double_well(2), EnergyModel::quadratic(2)}) {
            const double a = energy_functional(s, m, 0.01);
            EXPECT_NEAR(a, energy_functional_parseval(s, m, 0.01), 1e-12 * (1 + std::abs(a)));
        }
    }
}

TEST(Structure, ReducesToEnergyAtZeroViscosity) {
    testgen::Gen gen(32);
    const SpectralGrid g(2, 16);
    const State s = gen.state(g, 4, 0.05, 0.2);
    const auto m = EnergyModel::double_well(2);
    EXPECT_NEAR(structure_functional(s, m, 0.0, 0.02), energy_functional(s, m, 0.02), 1e-14);
}

TEST(Structure, DifferenceFromEnergyIsTransferBracket) {
    // G - E = 1/2 |u - nu/2 DivF|^2 + nu^2/8 |DivF|^2 - 1/2 |u|^2
    //       = nu^2/4 |DivF|^2 - nu/2 u.DivF, the bracket times nu/2.
    testgen::Gen gen(33);
    const SpectralGrid g(2, 16);
    const auto m = EnergyModel::double_well(2);
    for (double nu : {0.1, 1.0, 3.0}) {
        const State s = gen.state(g, 4, 0.05, 0.2);
        const double diff = structure_functional(s, m, nu, 0.01) - energy_functional(s, m, 0.01);
        EXPECT_NEAR(diff, 0.5 * nu * transfer_bracket(s, nu), 1e-12 * (1 + std::abs(diff)));
        const RealField divF = inverse_transform(apply_diff_operator(s.F_hat(), DiffOp::div));
        const RealField u = inverse_transform(s.u_hat);
        double ud = 0.0;
        for (std::size_t i = 0; i < u.samples.size(); ++i) ud += u.samples[i] * divF.samples[i];
        ud /= static_cast<double>(g.points());
        EXPECT_NEAR(diff, nu * nu / 4 * mean_sq(divF) - nu / 2 * ud, 1e-12 * (1 + std::abs(diff)));
    }
}

TEST(Structure, RatesMatchNaiveLoops) {
    testgen::Gen gen(34);
    const SpectralGrid g(2, 16);
    const State s = gen.state(g, 4, 0.1, 0.2);
    const auto m = EnergyModel::double_well(2);
    const double nu = 0.4, delta = 0.03;
    const StructureRates r = structure_dissipation_rate(s, m, nu, delta);

    const SpectralField Fh = s.F_hat();
    const RealField F = inverse_transform(Fh);
    const RealField d0 = partial(Fh, 0), d1 = partial(Fh, 1);
    double hess = 0.0;
    for (std::size_t p = 0; p < g.points(); ++p) {
        Matrix Fp(2, 2);
        for (int c = 0; c < 4; ++c) Fp.data()[c] = F.at(p, c);
        const Hessian H = eval_D2W(m, Fp);
        for (const RealField* d : {&d0, &d1}) {
            Eigen::Vector4d v;
            for (int c = 0; c < 4; ++c) v[c] = d->at(p, c);
            hess += v.dot(H.topLeftCorner(4, 4) * v) + m.K * v.squaredNorm();
        }
    }
    hess /= static_cast<double>(g.points());
    EXPECT_NEAR(r.hessian, 0.5 * nu * hess, 1e-10);
    // The convexified Hessian term is nonnegative.
    EXPECT_GE(r.hessian, 0.0);

    const RealField lapF = inverse_transform(apply_diff_operator(Fh, DiffOp::laplacian));
    EXPECT_NEAR(r.capillary, 0.5 * delta * nu * mean_sq(lapF), 1e-10);
    const SpectralField uh = s.u_hat;
    EXPECT_NEAR(r.velocity, 0.5 * nu * (mean_sq(partial(uh, 0)) + mean_sq(partial(uh, 1))), 1e-10);
}

TEST(LrNorm, ValuesAndProperties) {
    const SpectralGrid g(1, 8);
    RealField f(g, Rank::scalar);
    for (std::size_t p = 0; p < 8; ++p) f.at(p, 0) = p < 2 ? 2.0 : 0.0;
    EXPECT_NEAR(lr_norm(f, 1.0), 0.5, 1e-15);
    EXPECT_NEAR(lr_norm(f, 2.0), 1.0, 1e-15);
    EXPECT_NEAR(lr_norm(f, 4.0), 2.0 * std::pow(0.25, 0.25), 1e-15);
    EXPECT_EQ(lr_norm(f, lr_infinity), 2.0);
    EXPECT_THROW(lr_norm(f, 0.5), RangeError);
    EXPECT_THROW(lr_norm(f, std::nan("")), RangeError);

    testgen::Gen gen(35);
    const SpectralGrid g2(2, 12);
    const RealField h = gen.white(g2, Rank::matrix);
    double prev = 0.0;
    for (double r : {1.0, 1.5, 2.0, 3.0, 8.0}) {
        const double v = lr_norm(h, r);
        EXPECT_GE(v, prev);  // monotone in r on a probability space
        prev = v;
        RealField h3 = h;
        for (auto& x : h3.samples) x *= -3.0;
        EXPECT_NEAR(lr_norm(h3, r), 3.0 * v, 1e-12 * v);
    }
    EXPECT_LE(prev, lr_norm(h, lr_infinity));
}

TEST(Tracker, QuadraticOracleTrajectorySatisfiesBothInequalities) {
    testgen::Gen gen(36);
    SolverConfig c;
    c.grid = SpectralGrid(2, 16);
    c.model = EnergyModel::quadratic(2);
    c.nu = 0.2;
    c.delta = 0.01;
    const State s0 = gen.state(c.grid, 1, 0.05, 0.05);
    DiagnosticsTracker tr(c.model, c.nu, c.delta);
    std::vector<DiagnosticsRecord> recs;
    const double h = 1e-4;
    for (int n = 0; n <= 500; ++n) {
        const State s = linear_oracle(c, s0, n * h);
        if (n == 0)
            tr.start(s);
        else
            tr.advance(s);
        recs.push_back(tr.current());
    }
    // Exact flow: the balance holds up to the trapezoid error.
    const auto& last = recs.back();
    EXPECT_NEAR(last.E + last.diss_visc_cum, recs.front().E, 1e-5 * recs.front().E);
    EXPECT_TRUE(check_energy_inequality(recs, 1e-4, h).passed);
    EXPECT_TRUE(check_structure_inequality(recs, 1e-4, h).passed);
    EXPECT_EQ(last.src_struct_cum, 0.0);  // K = 0
}

TEST(Tracker, TrapezoidDefectIsSecondOrder) {
    testgen::Gen gen(37);
    SolverConfig c;
    c.grid = SpectralGrid(2, 16);
    c.model = EnergyModel::quadratic(2);
    c.nu = 0.5;
    c.delta = 0.0;
    const State s0 = gen.state(c.grid, 1, 0.05, 0.05);
    std::vector<double> defect;
    for (int steps : {100, 200, 400}) {
        DiagnosticsTracker tr(c.model, c.nu, c.delta);
        tr.start(s0);
        for (int n = 1; n <= steps; ++n) tr.advance(linear_oracle(c, s0, 0.5 * n / steps));
        const auto& r = tr.current();
        defect.push_back(std::abs(r.E + r.diss_visc_cum - energy_functional(s0, c.model, 0.0)));
    }
    EXPECT_NEAR(std::log2(defect[0] / defect[1]), 2.0, 0.1);
    EXPECT_NEAR(std::log2(defect[1] / defect[2]), 2.0, 0.1);
}

TEST(Tracker, RecordFields) {
    const SpectralGrid g(2, 16);
    InitialSpec spec;
    spec.velocity = 0.2;
    const State s = make_initial_state(g, spec);
    DiagnosticsTracker tr(EnergyModel::double_well(2), 0.1, 0.01, {1.5, lr_infinity});
    tr.start(s);
    const auto& r = tr.current();
    ASSERT_EQ(r.lr_F.size(), 2u);
    EXPECT_EQ(r.lr_F[0].first, 1.5);
    EXPECT_NEAR(r.lr_F[0].second, lr_norm(inverse_transform(s.F_hat()), 1.5), 1e-15);
    EXPECT_NEAR(r.l2_u, std::sqrt(parseval_norm2(s.u_hat)), 1e-13);
    EXPECT_LT(r.curl_res, 1e-13);
    EXPECT_EQ(r.diss_visc_cum, 0.0);
    EXPECT_THROW(DiagnosticsTracker(EnergyModel::double_well(2), 0.1, 0.01, {0.5}), RangeError);
}

TEST(Inequalities, NegativeControlIsDetected) {
    std::vector<DiagnosticsRecord> recs(3);
    for (int i = 0; i < 3; ++i) {
        recs[i].t = 0.1 * i;
        recs[i].E = 1.0;
        recs[i].G = 1.0;
    }
    EXPECT_TRUE(check_energy_inequality(recs, 0.0, 1e-3).passed);
    recs[2].E = 1.0 + 1e-3;  // energy created from nothing
    const InequalityReport rep = check_energy_inequality(recs, 1e-4, 1e-3);
    EXPECT_FALSE(rep.passed);
    ASSERT_TRUE(rep.first_violation.has_value());
    EXPECT_DOUBLE_EQ(*rep.first_violation, 0.2);
    EXPECT_NEAR(rep.worst_margin, 1e-4 + 10 * 1e-6 * 0.2 - 1e-3, 1e-15);
    EXPECT_NE(rep.to_text("energy").find("violated"), std::string::npos);

    recs[2].G = 1.5;
    EXPECT_FALSE(check_structure_inequality(recs, 1e-4, 1e-3).passed);
    recs[2].src_struct_cum = 0.6;  // a large enough source absorbs it
    EXPECT_TRUE(check_structure_inequality(recs, 1e-4, 1e-3).passed);
    EXPECT_TRUE(check_energy_inequality({}, 1e-4, 1e-3).passed);
}

TEST(Inequalities, HoldOnShortNonlinearRun) {
    SolverConfig c;
    c.grid = SpectralGrid(2, 32);
    c.nu = 0.1;
    c.delta = 0.01;
    c.dt = 5e-4;
    c.t_end = 0.1;
    InitialSpec spec;
    RunOptions o;
    const RunResult r = run(c, make_initial_state(c.grid, spec), o);
    ASSERT_TRUE(r.ok());
    EXPECT_EQ(r.records.size(), 201u);
    EXPECT_TRUE(check_energy_inequality(r.records, 1e-4, c.dt).passed);
    EXPECT_TRUE(check_structure_inequality(r.records, 1e-4, c.dt).passed);
    // Inflating the initial energy by far more than the tolerance breaks it.
    auto bad = r.records;
    for (std::size_t i = 1; i < bad.size(); ++i) bad[i].E += 1e-2 * bad[0].E;
    EXPECT_FALSE(check_energy_inequality(bad, 1e-4, c.dt).passed);
}
