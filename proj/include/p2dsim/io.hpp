#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "p2dsim/config.hpp"
#include "p2dsim/coupler.hpp"
#include "p2dsim/diagnostics.hpp"
#include "p2dsim/state.hpp"

namespace p2d {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// JSON config loader. Unknown keys are rejected (typo safety); missing optional
/// sections fall back to documented defaults. The returned config is already
/// unit-normalized. Throws ConfigError with a path-qualified message.
CellConfig load_config(const std::string& path);
CellConfig parse_config_json(const std::string& text, const std::string& origin = "<string>");

/// Two-column CSV (t, I) profile: rows are piecewise-linear nodes, split into
/// discontinuous pieces at the listed breakpoints (which must match row times).
CurrentProfile load_profile_csv(const std::string& path, const std::vector<double>& breakpoints);

/// Fixed time-series header, one row per record, %.17g formatting (so equal
/// doubles serialize identically).
extern const char* const kSeriesHeader;
void write_series_header(std::ostream& os);
void write_series_record(std::ostream& os, const TimeSeriesRecord& rec);

/// Full-state snapshot: one row per macro cell with the potential fields needed
/// to recompute V, plus per-row surface concentrations for electrode cells.
void write_snapshot_csv(std::ostream& os, const Mesh& mesh, const CellConfig& cfg,
                        const CellState& state, const PotentialSolution& sol, double I);

/// Run summary (outcome, halt diagnosis, ledger, counters, final record).
std::string report_json(const CellConfig& cfg, const RunResult& result);

std::string to_json_string(const ValidationReport& report);
std::string to_json_string(const ConditionReport& report);

}  // namespace p2d
