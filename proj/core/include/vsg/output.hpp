#pragma once

#include "vsg/diagnostics.hpp"
#include "vsg/experiments.hpp"
#include "vsg/manufactured.hpp"

#include <filesystem>
#include <fstream>
#include <span>
#include <string>
#include <vector>

namespace vsg {

/// %.17g: enough digits to round-trip any double through text.
std::string format_double(double v);

/// "t,E,...,l2_lapF" followed by one lr_F_<r> column per exponent.
std::string diagnostics_csv_header(std::span<const double> lr_exponents);
std::string diagnostics_csv_row(const DiagnosticsRecord& record);

/// Streams diagnostics records to a CSV file, flushing each row. Rejects rows
/// whose column count or time ordering would break the file contract.
class DiagnosticsCsvWriter {
public:
    DiagnosticsCsvWriter(const std::filesystem::path& path, std::vector<double> lr_exponents);
    void write(const DiagnosticsRecord& record);

private:
    std::ofstream out_;
    std::vector<double> lr_;
    double last_t_;
    bool any_ = false;
};

/// Parses a file written by DiagnosticsCsvWriter. Throws FormatError.
std::vector<DiagnosticsRecord> read_diagnostics_csv(const std::filesystem::path& path);

/// Limit-study table: "param,t,r,error_F,error_u", one row per (param, t, r).
void write_study_errors_csv(const std::filesystem::path& path, const StudyResult& result);
/// JSON summary of the fits, notes and (optionally) the bound calibration.
std::string study_summary_json(const StudyResult& result, const BoundCheck* bound = nullptr);

/// "cutoff,t,error_F,error_u"
void write_refinement_csv(const std::filesystem::path& path, const RefinementResult& result);
/// "kind,n,dt,error_y,error_u,under_resolved,projection_floor"
void write_mms_csv(const std::filesystem::path& path, const ConvergenceReport& report);

}  // namespace vsg
