#pragma once

#include <array>
#include <iosfwd>
#include <string_view>
#include <vector>

namespace ptgne {

/// One diagnostics row. Centralized runs fill the Lyapunov columns with their
/// consensual values (W_o = V = W, all disagreement terms zero).
struct TraceRecord {
  double t = 0.0;
  double V = 0.0;
  double S_norm = 0.0;
  double s1_norm = 0.0;
  double s2_norm = 0.0;
  double s3_norm = 0.0;
  double W_c = 0.0;
  double W_o = 0.0;
  double W_delta = 0.0;
  double V_net = 0.0;
  double W = 0.0;
  double sigma_min = 0.0;
  double dual_disagreement = 0.0;
  double consensus_error = 0.0;
};

/// Fixed CSV column order shared by every trace file.
inline constexpr std::array<std::string_view, 14> kTraceColumns = {
    "t",   "V",       "S_norm",  "s1_norm", "s2_norm",   "s3_norm",           "W_c",
    "W_o", "W_delta", "V_net",   "W",       "sigma_min", "dual_disagreement", "consensus_error"};

void write_trace_csv(std::ostream& out, const std::vector<TraceRecord>& rows);
/// Throws std::runtime_error when the header differs from kTraceColumns.
std::vector<TraceRecord> read_trace_csv(std::istream& in);

}  // namespace ptgne
