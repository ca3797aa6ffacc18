#pragma once

#include <string>
#include <vector>

#include "resolute/fisher.hpp"
#include "resolute/fit.hpp"
#include "resolute/simulate.hpp"

namespace resolute {

enum class OutputFormat : std::uint8_t { Csv, Json };

/// Format inferred from the path extension (.json -> Json, otherwise Csv).
OutputFormat format_from_path(const std::string& path);

/// Atomic text write: temp file in the same directory, then rename.
void write_text_atomic(const std::string& path, const std::string& content);

/// Traces serialize as CSV with '#'-prefixed metadata (schema version,
/// config echo, seed) followed by a header row and rows at full round-trip
/// precision; JSON mirrors the same content.
std::string trace_to_csv(const Trace& trace);
std::string trace_to_json(const Trace& trace);
void write_trace(const Trace& trace, const std::string& path, OutputFormat format);
void write_trace(const Trace& trace, const std::string& path);

/// Parse a trace back from its CSV serialization (bit-exact round trip).
Trace read_trace_csv(const std::string& text);
Trace load_trace(const std::string& path);

std::string report_to_csv(const FisherReport& report);
std::string report_to_json(const FisherReport& report);
void write_report(const FisherReport& report, const std::string& path, OutputFormat format);

std::string fit_to_json(const FitResult& fit);
std::string crb_to_json(const CrbReport& report);
std::string optimize_to_json(const OptimizeResult& result);

}  // namespace resolute
