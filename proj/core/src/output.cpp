#include "vsg/output.hpp"

#include "vsg/errors.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>

namespace vsg {

namespace {

constexpr const char* base_columns = "t,E,diss_visc_cum,G,diss_struct_cum,src_struct_cum,curl_res,l2_u,l2_gradF,l2_lapF";
constexpr int base_count = 10;

std::string exponent_label(double r) {
    if (std::isinf(r)) return "inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%g", r);
    return buf;
}

}  // namespace

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string diagnostics_csv_header(std::span<const double> lr_exponents) {
    std::string h = base_columns;
    for (double r : lr_exponents) h += ",lr_F_" + exponent_label(r);
    return h;
}

std::string diagnostics_csv_row(const DiagnosticsRecord& r) {
    std::string row;
    for (double v : {r.t, r.E, r.diss_visc_cum, r.G, r.diss_struct_cum, r.src_struct_cum, r.curl_res, r.l2_u,
                     r.l2_gradF, r.l2_lapF}) {
        if (!row.empty()) row += ',';
        row += format_double(v);
    }
    for (const auto& [exp, val] : r.lr_F) row += ',' + format_double(val);
    return row;
}

DiagnosticsCsvWriter::DiagnosticsCsvWriter(const std::filesystem::path& path, std::vector<double> lr_exponents)
    : out_(path, std::ios::trunc), lr_(std::move(lr_exponents)), last_t_(0.0) {
    if (!out_) throw Error("cannot open '" + path.string() + "' for writing");
    out_ << diagnostics_csv_header(lr_) << '\n';
}

void DiagnosticsCsvWriter::write(const DiagnosticsRecord& record) {
    if (record.lr_F.size() != lr_.size()) throw FormatError("diagnostics row has the wrong number of lr columns");
    if (any_ && !(record.t > last_t_)) throw FormatError("diagnostics rows must have strictly increasing t");
    out_ << diagnostics_csv_row(record) << '\n';
    out_.flush();
    last_t_ = record.t;
    any_ = true;
}

std::vector<DiagnosticsRecord> read_diagnostics_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open '" + path.string() + "'");
    std::string header;
    if (!std::getline(in, header) || header.rfind(base_columns, 0) != 0)
        throw FormatError(path.string() + ": unexpected header");
    std::vector<double> lr;
    {
        std::stringstream ss(header);
        std::string col;
        int i = 0;
        while (std::getline(ss, col, ',')) {
            if (i++ < base_count) continue;
            if (col.rfind("lr_F_", 0) != 0) throw FormatError(path.string() + ": unexpected column '" + col + "'");
            const std::string label = col.substr(5);
            lr.push_back(label == "inf" ? lr_infinity : std::strtod(label.c_str(), nullptr));
        }
    }
    std::vector<DiagnosticsRecord> out;
    std::string line;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::vector<double> vals;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            char* end = nullptr;
            vals.push_back(std::strtod(cell.c_str(), &end));
            if (end == cell.c_str() || *end != '\0')
                throw FormatError(path.string() + ":" + std::to_string(line_no) + ": bad number '" + cell + "'");
        }
        if (vals.size() != base_count + lr.size())
            throw FormatError(path.string() + ":" + std::to_string(line_no) + ": wrong column count");
        DiagnosticsRecord r;
        r.t = vals[0];
        r.E = vals[1];
        r.diss_visc_cum = vals[2];
        r.G = vals[3];
        r.diss_struct_cum = vals[4];
        r.src_struct_cum = vals[5];
        r.curl_res = vals[6];
        r.l2_u = vals[7];
        r.l2_gradF = vals[8];
        r.l2_lapF = vals[9];
        for (std::size_t j = 0; j < lr.size(); ++j) r.lr_F.emplace_back(lr[j], vals[base_count + j]);
        out.push_back(std::move(r));
    }
    return out;
}

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw Error("cannot open '" + path.string() + "' for writing");
    return out;
}

}  // namespace

void write_study_errors_csv(const std::filesystem::path& path, const StudyResult& result) {
    auto out = open_out(path);
    out << "param,t,r,error_F,error_u\n";
    for (const auto& e : result.errors)
        out << format_double(e.param) << ',' << format_double(e.t) << ',' << format_double(e.r) << ','
            << format_double(e.error_F) << ',' << format_double(e.error_u) << '\n';
}

std::string study_summary_json(const StudyResult& result, const BoundCheck* bound) {
    nlohmann::ordered_json j;
    j["parameter"] = to_string(result.parameter);
    j["fits"] = nlohmann::json::array();
    for (const auto& f : result.fits) {
        nlohmann::ordered_json jf;
        jf["r"] = f.r;
        jf["t"] = f.t;
        jf["slope"] = f.slope;
        jf["intercept"] = f.intercept;
        jf["r_squared"] = f.r_squared;
        jf["points"] = f.points.size();
        if (!f.note.empty()) jf["note"] = f.note;
        j["fits"].push_back(std::move(jf));
    }
    j["source_integral"] = nlohmann::json::array();
    for (const auto& [v, s] : result.source_integral) j["source_integral"].push_back({v, s});
    if (bound) {
        nlohmann::ordered_json jb;
        jb["C1"] = bound->C1;
        jb["C2"] = bound->C2;
        jb["t0"] = bound->t0;
        jb["dominates"] = bound->dominates;
        jb["checked"] = bound->checked;
        jb["inadmissible"] = bound->inadmissible;
        jb["worst_ratio"] = bound->worst_ratio;
        j["bound"] = std::move(jb);
    }
    j["notes"] = result.notes;
    return j.dump(2) + "\n";
}

void write_refinement_csv(const std::filesystem::path& path, const RefinementResult& result) {
    auto out = open_out(path);
    out << "cutoff,t,error_F,error_u\n";
    for (const auto& s : result.samples)
        out << s.cutoff << ',' << format_double(s.t) << ',' << format_double(s.error_F) << ','
            << format_double(s.error_u) << '\n';
}

void write_mms_csv(const std::filesystem::path& path, const ConvergenceReport& report) {
    auto out = open_out(path);
    out << "kind,n,dt,error_y,error_u,under_resolved,projection_floor\n";
    auto row = [&](const char* kind, const MmsSample& s) {
        out << kind << ',' << s.n << ',' << format_double(s.dt) << ',' << format_double(s.error_y) << ','
            << format_double(s.error_u) << ',' << (s.under_resolved ? 1 : 0) << ','
            << format_double(s.projection_floor) << '\n';
    };
    for (const auto& s : report.temporal) row("temporal", s);
    for (const auto& s : report.spatial) row("spatial", s);
}

}  // namespace vsg
