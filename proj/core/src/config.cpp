#include "vsg/config.hpp"

#include "vsg/errors.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <type_traits>

namespace vsg {

SpectralGrid RunConfig::grid() const {
    return cutoff < 0 ? SpectralGrid(d, n) : SpectralGrid(d, n, cutoff);
}

EnergyModel RunConfig::energy_model() const {
    return model == EnergyKind::quadratic ? EnergyModel::quadratic(d) : EnergyModel::double_well(d);
}

SolverConfig RunConfig::solver() const {
    SolverConfig s;
    s.grid = grid();
    s.model = energy_model();
    s.nu = nu;
    s.delta = delta;
    s.dt = dt;
    s.t_end = t_end;
    s.scheme = scheme;
    s.dealias = dealias;
    return s;
}

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

struct Entry {
    std::string key;  // section.name
    std::string value;
    int line;
};

double to_double(const Entry& e) {
    double v = 0.0;
    const char* first = e.value.data();
    const char* last = first + e.value.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last) throw ConfigError(e.key, e.line, "expected a number, got '" + e.value + "'");
    if (!std::isfinite(v)) throw ConfigError(e.key, e.line, "value must be finite");
    return v;
}

long long to_integer(const Entry& e) {
    long long v = 0;
    const char* first = e.value.data();
    const char* last = first + e.value.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last) throw ConfigError(e.key, e.line, "expected an integer, got '" + e.value + "'");
    return v;
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

std::vector<double> to_doubles(const Entry& e) {
    std::vector<double> out;
    for (const auto& item : split_list(e.value)) out.push_back(to_double({e.key, item, e.line}));
    return out;
}

std::vector<int> to_ints(const Entry& e) {
    std::vector<int> out;
    for (const auto& item : split_list(e.value)) out.push_back(static_cast<int>(to_integer({e.key, item, e.line})));
    return out;
}

void require(bool ok, const Entry& e, const std::string& what) {
    if (!ok) throw ConfigError(e.key, e.line, what);
}

template <class F>
auto wrap(const Entry& e, F&& f) {
    try {
        return f();
    } catch (const ConfigError&) {
        throw;
    } catch (const Error& err) {
        throw ConfigError(e.key, e.line, err.what());
    }
}

using Setter = std::function<void(RunConfig&, const Entry&)>;

const std::map<std::string, Setter>& setters() {
    static const std::map<std::string, Setter> table = {
        {"grid.d", [](RunConfig& c, const Entry& e) {
             c.d = static_cast<int>(to_integer(e));
             require(c.d >= 1 && c.d <= 3, e, "must be 1, 2 or 3");
         }},
        {"grid.n", [](RunConfig& c, const Entry& e) {
             c.n = static_cast<int>(to_integer(e));
             require(c.n >= 4 && c.n % 2 == 0, e, "must be even and >= 4");
         }},
        {"grid.cutoff", [](RunConfig& c, const Entry& e) {
             c.cutoff = static_cast<int>(to_integer(e));
             require(c.cutoff >= 0, e, "must be >= 0");
         }},
        {"model.kind", [](RunConfig& c, const Entry& e) { c.model = wrap(e, [&] { return energy_kind_from_string(e.value); }); }},
        {"physics.nu", [](RunConfig& c, const Entry& e) {
             c.nu = to_double(e);
             require(c.nu >= 0.0, e, "must be >= 0");
         }},
        {"physics.delta", [](RunConfig& c, const Entry& e) {
             c.delta = to_double(e);
             require(c.delta >= 0.0, e, "must be >= 0");
         }},
        {"time.dt", [](RunConfig& c, const Entry& e) {
             c.dt = to_double(e);
             require(c.dt > 0.0, e, "must be > 0");
         }},
        {"time.t_end", [](RunConfig& c, const Entry& e) {
             c.t_end = to_double(e);
             require(c.t_end >= 0.0, e, "must be >= 0");
         }},
        {"time.scheme", [](RunConfig& c, const Entry& e) { c.scheme = wrap(e, [&] { return scheme_from_string(e.value); }); }},
        {"time.dealias", [](RunConfig& c, const Entry& e) { c.dealias = wrap(e, [&] { return dealias_rule_from_string(e.value); }); }},
        {"initial.kind", [](RunConfig& c, const Entry& e) {
             if (e.value.rfind("file=", 0) == 0) {
                 c.initial.kind = "file";
                 c.initial.path = trim(e.value.substr(5));
             } else {
                 require(e.value == "zero" || e.value == "two_mode" || e.value == "gaussian_bump" ||
                             e.value == "random" || e.value == "file",
                         e, "unknown preset '" + e.value + "'");
                 c.initial.kind = e.value;
             }
         }},
        {"initial.amplitude", [](RunConfig& c, const Entry& e) { c.initial.amplitude = to_double(e); }},
        {"initial.velocity", [](RunConfig& c, const Entry& e) { c.initial.velocity = to_double(e); }},
        {"initial.width", [](RunConfig& c, const Entry& e) {
             c.initial.width = to_double(e);
             require(c.initial.width > 0.0, e, "must be > 0");
         }},
        {"initial.modes", [](RunConfig& c, const Entry& e) {
             c.initial.modes = static_cast<int>(to_integer(e));
             require(c.initial.modes >= 1, e, "must be >= 1");
         }},
        {"initial.seed", [](RunConfig& c, const Entry& e) {
             const long long v = to_integer(e);
             require(v >= 0, e, "must be >= 0");
             c.initial.seed = static_cast<std::uint64_t>(v);
         }},
        {"initial.path", [](RunConfig& c, const Entry& e) { c.initial.path = e.value; }},
        {"output.record_every", [](RunConfig& c, const Entry& e) {
             c.record_every = static_cast<int>(to_integer(e));
             require(c.record_every >= 0, e, "must be >= 0");
         }},
        {"output.snapshot_every", [](RunConfig& c, const Entry& e) {
             c.snapshot_every = static_cast<int>(to_integer(e));
             require(c.snapshot_every >= 0, e, "must be >= 0");
         }},
        {"output.out_dir", [](RunConfig& c, const Entry& e) {
             require(!e.value.empty(), e, "must not be empty");
             c.out_dir = e.value;
         }},
        {"output.lr_norms", [](RunConfig& c, const Entry& e) {
             c.lr_norms = to_doubles(e);
             for (double r : c.lr_norms) require(r >= 1.0, e, "exponents must be >= 1");
         }},
        {"study.values", [](RunConfig& c, const Entry& e) {
             c.study.values = to_doubles(e);
             for (double v : c.study.values) require(v > 0.0, e, "swept values must be > 0");
             for (std::size_t i = 1; i < c.study.values.size(); ++i)
                 require(c.study.values[i] < c.study.values[i - 1], e, "swept values must be strictly decreasing");
         }},
        {"study.r", [](RunConfig& c, const Entry& e) {
             c.study.r = to_doubles(e);
             for (double r : c.study.r) require(r >= 1.0, e, "exponents must be >= 1");
         }},
        {"study.sample_times", [](RunConfig& c, const Entry& e) {
             c.study.sample_times = to_doubles(e);
             for (std::size_t i = 0; i < c.study.sample_times.size(); ++i) {
                 require(c.study.sample_times[i] >= 0.0, e, "sample times must be >= 0");
                 if (i > 0) require(c.study.sample_times[i] > c.study.sample_times[i - 1], e, "sample times must increase");
             }
         }},
        {"study.roughening", [](RunConfig& c, const Entry& e) {
             c.study.roughening = to_double(e);
             require(c.study.roughening >= 0.0, e, "must be >= 0");
         }},
        {"study.roughening_eps", [](RunConfig& c, const Entry& e) {
             c.study.roughening_eps = to_double(e);
             require(c.study.roughening_eps >= 0.0 && c.study.roughening_eps < 0.5, e, "must lie in [0, 0.5)");
         }},
        {"study.cutoffs", [](RunConfig& c, const Entry& e) {
             c.study.cutoffs = to_ints(e);
             for (std::size_t i = 0; i < c.study.cutoffs.size(); ++i) {
                 require(c.study.cutoffs[i] >= 1, e, "cutoffs must be >= 1");
                 if (i > 0) require(c.study.cutoffs[i] > c.study.cutoffs[i - 1], e, "cutoffs must increase");
             }
         }},
        {"study.dt_list", [](RunConfig& c, const Entry& e) {
             c.study.dt_list = to_doubles(e);
             for (std::size_t i = 0; i < c.study.dt_list.size(); ++i) {
                 require(c.study.dt_list[i] > 0.0, e, "must be > 0");
                 if (i > 0) require(c.study.dt_list[i] < c.study.dt_list[i - 1], e, "must be decreasing");
             }
         }},
        {"study.n_list", [](RunConfig& c, const Entry& e) {
             c.study.n_list = to_ints(e);
             for (std::size_t i = 0; i < c.study.n_list.size(); ++i) {
                 require(c.study.n_list[i] >= 4 && c.study.n_list[i] % 2 == 0, e, "must be even and >= 4");
                 if (i > 0) require(c.study.n_list[i] > c.study.n_list[i - 1], e, "must be increasing");
             }
         }},
    };
    return table;
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

template <class T>
std::string join(const std::vector<T>& xs) {
    std::string out;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i) out += ", ";
        if constexpr (std::is_floating_point_v<T>)
            out += fmt(xs[i]);
        else
            out += std::to_string(xs[i]);
    }
    return out;
}

}  // namespace

RunConfig parse_config_text(const std::string& text, const std::filesystem::path& base_dir) {
    RunConfig cfg;
    std::map<std::string, int> seen;
    std::string section;
    std::istringstream in(text);
    std::string raw;
    int line_no = 0;
    const auto& table = setters();
    while (std::getline(in, raw)) {
        ++line_no;
        const auto hash = raw.find_first_of("#;");
        std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') throw ConfigError("", line_no, "malformed section header");
            section = trim(line.substr(1, line.size() - 2));
            static const char* known[] = {"grid", "model", "physics", "time", "initial", "output", "study"};
            if (std::find(std::begin(known), std::end(known), section) == std::end(known))
                throw ConfigError(section, line_no, "unknown section");
            if (section == "study") cfg.has_study = true;
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError("", line_no, "expected key = value");
        if (section.empty()) throw ConfigError(trim(line.substr(0, eq)), line_no, "key outside of a section");
        Entry e{section + "." + trim(line.substr(0, eq)), trim(line.substr(eq + 1)), line_no};
        const auto it = table.find(e.key);
        if (it == table.end()) throw ConfigError(e.key, line_no, "unknown key");
        if (auto prev = seen.find(e.key); prev != seen.end())
            throw ConfigError(e.key, line_no, "duplicate key (first set on line " + std::to_string(prev->second) + ")");
        seen[e.key] = line_no;
        it->second(cfg, e);
    }

    auto line_of = [&](const std::string& key) {
        const auto it = seen.find(key);
        return it == seen.end() ? 0 : it->second;
    };
    if (cfg.cutoff >= 0 && cfg.cutoff > cfg.n / 2 - 1)
        throw ConfigError("grid.cutoff", line_of("grid.cutoff"), "exceeds n/2 - 1");
    if (cfg.t_end > 0.0 && cfg.dt > cfg.t_end) throw ConfigError("time.dt", line_of("time.dt"), "exceeds t_end");
    try {
        (void)cfg.solver().steps();
    } catch (const Error& err) {
        throw ConfigError("time.t_end", line_of("time.t_end"), err.what());
    }
    if (cfg.initial.kind == "file") {
        if (cfg.initial.path.empty()) throw ConfigError("initial.kind", line_of("initial.kind"), "file preset needs a path");
        std::filesystem::path p(cfg.initial.path);
        if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
        const auto y_file = p.parent_path() / (p.filename().string() + "_y.vsg");
        if (!std::filesystem::exists(y_file))
            throw ConfigError("initial.kind", line_of("initial.kind"), "cannot find '" + y_file.string() + "'");
        cfg.initial.path = p.string();
    }
    return cfg;
}

RunConfig parse_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("", 0, "cannot open '" + path.string() + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str(), path.parent_path());
}

std::string serialize(const RunConfig& c) {
    std::ostringstream out;
    out << "[grid]\n"
        << "d = " << c.d << "\n"
        << "n = " << c.n << "\n";
    if (c.cutoff >= 0) out << "cutoff = " << c.cutoff << "\n";
    out << "\n[model]\nkind = " << to_string(c.model) << "\n"
        << "\n[physics]\nnu = " << fmt(c.nu) << "\ndelta = " << fmt(c.delta) << "\n"
        << "\n[time]\ndt = " << fmt(c.dt) << "\nt_end = " << fmt(c.t_end) << "\nscheme = " << to_string(c.scheme)
        << "\ndealias = " << to_string(c.dealias) << "\n"
        << "\n[initial]\nkind = " << c.initial.kind << "\n"
        << "amplitude = " << fmt(c.initial.amplitude) << "\n"
        << "velocity = " << fmt(c.initial.velocity) << "\n"
        << "width = " << fmt(c.initial.width) << "\n"
        << "modes = " << c.initial.modes << "\n"
        << "seed = " << c.initial.seed << "\n";
    if (!c.initial.path.empty()) out << "path = " << c.initial.path << "\n";
    out << "\n[output]\nrecord_every = " << c.record_every << "\nsnapshot_every = " << c.snapshot_every
        << "\nout_dir = " << c.out_dir << "\n";
    if (!c.lr_norms.empty()) out << "lr_norms = " << join(c.lr_norms) << "\n";
    if (c.has_study) {
        const auto& s = c.study;
        out << "\n[study]\n";
        if (!s.values.empty()) out << "values = " << join(s.values) << "\n";
        if (!s.r.empty()) out << "r = " << join(s.r) << "\n";
        if (!s.sample_times.empty()) out << "sample_times = " << join(s.sample_times) << "\n";
        out << "roughening = " << fmt(s.roughening) << "\nroughening_eps = " << fmt(s.roughening_eps) << "\n";
        if (!s.cutoffs.empty()) out << "cutoffs = " << join(s.cutoffs) << "\n";
        if (!s.dt_list.empty()) out << "dt_list = " << join(s.dt_list) << "\n";
        if (!s.n_list.empty()) out << "n_list = " << join(s.n_list) << "\n";
    }
    return out.str();
}

}  // namespace vsg
