// Command line front end: single runs, parameter studies, manufactured
// solutions and the energy-hypothesis checker.
#include "vsg/config.hpp"
#include "vsg/diagnostics.hpp"
#include "vsg/errors.hpp"
#include "vsg/experiments.hpp"
#include "vsg/manufactured.hpp"
#include "vsg/output.hpp"
#include "vsg/run.hpp"
#include "vsg/snapshot.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

namespace fs = std::filesystem;
using namespace vsg;

namespace {

enum Exit { ok = 0, validation = 1, blow_up = 2, failed_check = 3 };

fs::path prepare_out(const RunConfig& cfg, const std::string& override_dir) {
    fs::path dir = override_dir.empty() ? fs::path(cfg.out_dir) : fs::path(override_dir);
    fs::create_directories(dir);
    return dir;
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw Error("cannot open '" + path.string() + "' for writing");
    out << text;
}

int cmd_run(const std::string& config_path, const std::string& out_override, bool assert_inequalities,
            double rel_tol) {
    const RunConfig cfg = parse_config(config_path);
    const SolverConfig solver = cfg.solver();
    const fs::path dir = prepare_out(cfg, out_override);
    const State initial = make_initial_state(solver.grid, cfg.initial);

    DiagnosticsCsvWriter csv(dir / "diagnostics.csv", cfg.lr_norms);
    RunOptions opt;
    opt.record_every = cfg.record_every;
    opt.snapshot_every = cfg.snapshot_every;
    opt.lr_exponents = cfg.lr_norms;
    RunResult res = run(solver, initial, opt);
    for (const auto& r : res.records) csv.write(r);
    for (const auto& s : res.trajectory)
        if (s.state) {
            char stem[64];
            std::snprintf(stem, sizeof stem, "snap_%08ld", s.step);
            write_state(*s.state, dir / stem);
        }
    if (res.final_state) write_state(*res.final_state, dir / "final");
    write_text(dir / "config.cfg", serialize(cfg));

    for (const auto& f : res.meta.flags) std::cerr << "warning: " << f << "\n";
    std::cout << "config " << res.meta.config_hash << ", " << res.meta.steps_taken << " steps, "
              << res.records.size() << " records -> " << dir.string() << "\n";
    if (!res.ok()) {
        std::cerr << "blow-up at t = " << res.failure->t << " (norm " << res.failure->norm
                  << "): " << res.failure->message << "\n";
        return blow_up;
    }
    if (assert_inequalities) {
        const auto e = check_energy_inequality(res.records, rel_tol, solver.dt);
        const auto g = check_structure_inequality(res.records, rel_tol, solver.dt);
        std::cout << e.to_text("energy inequality") << "\n" << g.to_text("structure inequality") << "\n";
        if (!e.passed || !g.passed) return failed_check;
    }
    return ok;
}

LimitStudy limit_study_from(const RunConfig& cfg, SweepParameter p) {
    LimitStudy st;
    st.base = cfg.solver();
    st.parameter = p;
    st.initial = cfg.initial;
    const auto& s = cfg.study;
    if (p == SweepParameter::delta) {
        st.values = s.values.empty() ? std::vector<double>{1e-2, 5e-3, 2.5e-3, 1.25e-3} : s.values;
        st.r_list = s.r.empty() ? std::vector<double>{1.5} : s.r;
        st.sample_times = s.sample_times.empty() ? std::vector<double>{0.25, 0.5, 1.0} : s.sample_times;
        st.roughening = s.roughening;
        st.roughening_eps = s.roughening_eps;
    } else {
        st.values = s.values.empty() ? std::vector<double>{1e-1, 5e-2, 2.5e-2, 1.25e-2} : s.values;
        st.r_list = s.r.empty() ? std::vector<double>{3.0} : s.r;
        st.sample_times = s.sample_times.empty() ? std::vector<double>{cfg.t_end} : s.sample_times;
        if (s.roughening > 0.0) throw RangeError("[study] roughening applies to delta studies only");
    }
    return st;
}

int cmd_study(const std::string& config_path, const std::string& out_override, SweepParameter p) {
    const RunConfig cfg = parse_config(config_path);
    const fs::path dir = prepare_out(cfg, out_override);
    const LimitStudy st = limit_study_from(cfg, p);
    const StudyResult res = run_limit_study(st);

    std::optional<BoundCheck> bound;
    if (p == SweepParameter::delta)
        for (double r : st.r_list)
            if (r > 1.0 && r < 2.0) {
                try {
                    bound = calibrate_theorem_bound(res, r);
                } catch (const InsufficientData& e) {
                    std::cerr << "note: bound calibration skipped: " << e.what() << "\n";
                }
                break;
            }
    write_study_errors_csv(dir / "errors.csv", res);
    write_text(dir / "fits.json", study_summary_json(res, bound ? &*bound : nullptr));
    write_text(dir / "config.cfg", serialize(cfg));
    for (const auto& f : res.fits)
        std::printf("r = %g, t = %g: slope %.4f, r^2 %.5f\n", f.r, f.t, f.slope, f.r_squared);
    if (bound) std::cout << bound->to_text() << "\n";
    for (const auto& n : res.notes) std::cout << "note: " << n << "\n";
    std::cout << "wrote " << (dir / "errors.csv").string() << " and " << (dir / "fits.json").string() << "\n";
    return ok;
}

int cmd_galerkin(const std::string& config_path, const std::string& out_override) {
    const RunConfig cfg = parse_config(config_path);
    const fs::path dir = prepare_out(cfg, out_override);
    const std::vector<int> cutoffs = cfg.study.cutoffs.empty() ? std::vector<int>{8, 16, 32} : cfg.study.cutoffs;
    const std::vector<double> times = cfg.study.sample_times.empty() ? std::vector<double>{cfg.t_end} : cfg.study.sample_times;
    const RefinementResult res = galerkin_refinement_study(cfg.solver(), cutoffs, cfg.initial, times);
    write_refinement_csv(dir / "refinement.csv", res);
    for (const auto& s : res.samples)
        std::printf("cutoff %d, t = %g: ||F - F_ref|| = %.4e, ||u - u_ref|| = %.4e\n", s.cutoff, s.t, s.error_F, s.error_u);
    for (const auto& n : res.notes) std::cout << "note: " << n << "\n";
    return ok;
}

int cmd_mms(const std::string& config_path, const std::string& out_override, int band, double rho, double amplitude,
            std::uint64_t seed) {
    const RunConfig cfg = parse_config(config_path);
    const fs::path dir = prepare_out(cfg, out_override);
    const ManufacturedCase mc = decaying_case(cfg.d, band, amplitude, rho, seed);
    const std::vector<double> dts = cfg.study.dt_list.empty() ? std::vector<double>{4e-3, 2e-3, 1e-3} : cfg.study.dt_list;
    const std::vector<int> ns = cfg.study.n_list.empty() ? std::vector<int>{16, 32, 64} : cfg.study.n_list;
    const ConvergenceReport rep = mms_study(mc, cfg.solver(), cfg.n, dts, dts.back(), ns);
    write_mms_csv(dir / "mms.csv", rep);
    for (const auto& s : rep.temporal) std::printf("n = %d, dt = %g: error_y %.4e, error_u %.4e\n", s.n, s.dt, s.error_y, s.error_u);
    std::printf("temporal order %.3f\n", rep.temporal_order);
    for (const auto& s : rep.spatial)
        std::printf("n = %d, dt = %g: error_y %.4e%s\n", s.n, s.dt, s.error_y, s.under_resolved ? " (under-resolved)" : "");
    for (const auto& n : rep.notes) std::cout << "note: " << n << "\n";
    return ok;
}

int cmd_check_model(const std::string& kind, int d, std::size_t samples, double radius, std::uint64_t seed) {
    const EnergyKind k = energy_kind_from_string(kind);
    const EnergyModel model = k == EnergyKind::quadratic ? EnergyModel::quadratic(d) : EnergyModel::double_well(d);
    const HypothesisReport rep = verify_hypotheses(model, samples, radius, seed);
    std::cout << rep.to_text();
    return rep.all_passed() ? ok : failed_check;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Pseudo-spectral solver for strain-gradient viscoelasticity on the periodic torus"};
    app.require_subcommand(1);

    std::string config, out_dir;
    bool assert_ineq = false;
    double rel_tol = 1e-4;
    auto* run_cmd = app.add_subcommand("run", "integrate one configuration and stream diagnostics");
    run_cmd->add_option("--config", config, "configuration file")->required();
    run_cmd->add_option("--out", out_dir, "output directory (overrides [output] out_dir)");
    run_cmd->add_flag("--assert-inequalities", assert_ineq, "exit 3 if the energy or structure inequality fails");
    run_cmd->add_option("--rel-tol", rel_tol, "relative tolerance for --assert-inequalities");

    auto* sd = app.add_subcommand("study-delta", "vanishing-capillarity sweep against delta = 0");
    auto* sn = app.add_subcommand("study-nu", "vanishing-viscosity sweep against nu = 0");
    auto* sg = app.add_subcommand("study-galerkin", "Galerkin cutoff refinement");
    for (auto* c : {sd, sn, sg}) {
        c->add_option("--config", config, "configuration file")->required();
        c->add_option("--out", out_dir, "output directory");
    }

    int band = 10;
    double rho = 0.5, amplitude = 0.05;
    std::uint64_t seed = 11;
    auto* mms = app.add_subcommand("mms", "manufactured-solution convergence study");
    mms->add_option("--config", config, "configuration file")->required();
    mms->add_option("--out", out_dir, "output directory");
    mms->add_option("--band", band, "largest wavenumber of the manufactured motion");
    mms->add_option("--rho", rho, "geometric decay of the mode amplitudes");
    mms->add_option("--amplitude", amplitude, "amplitude of the lowest modes");
    mms->add_option("--seed", seed, "seed for phases and time profiles");

    std::string model = "double_well";
    int dim = 2;
    std::size_t samples = 1000;
    double radius = 3.0;
    std::uint64_t model_seed = 1;
    auto* cm = app.add_subcommand("check-model", "sample the stored-energy hypotheses");
    cm->add_option("--model", model, "double_well or quadratic");
    cm->add_option("--dim", dim, "spatial dimension")->check(CLI::Range(1, 3));
    cm->add_option("--samples", samples, "number of random matrices");
    cm->add_option("--radius", radius, "Frobenius radius of the sampling ball");
    cm->add_option("--seed", model_seed, "random seed");

    auto* pc = app.add_subcommand("print-config", "print a configuration with defaults applied");
    pc->add_option("--config", config, "configuration file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? ok : validation;
    }

    try {
        if (*run_cmd) return cmd_run(config, out_dir, assert_ineq, rel_tol);
        if (*sd) return cmd_study(config, out_dir, SweepParameter::delta);
        if (*sn) return cmd_study(config, out_dir, SweepParameter::nu);
        if (*sg) return cmd_galerkin(config, out_dir);
        if (*mms) return cmd_mms(config, out_dir, band, rho, amplitude, seed);
        if (*cm) return cmd_check_model(model, dim, samples, radius, model_seed);
        if (*pc) {
            std::cout << serialize(parse_config(config));
            return ok;
        }
    } catch (const BlowUp& e) {
        std::cerr << "blow-up: " << e.what() << "\n";
        return blow_up;
    } catch (const Error& e) {
        // Study members report blow-ups as plain errors naming the parameter.
        const std::string what = e.what();
        std::cerr << "error: " << what << "\n";
        return what.find("blew up") != std::string::npos ? blow_up : validation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return validation;
    }
    return ok;
}
