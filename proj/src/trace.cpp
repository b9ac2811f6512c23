#include "ptgne/trace.hpp"

#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace ptgne {

namespace {

std::array<double*, 14> columns(TraceRecord& r) {
  return {&r.t,   &r.V,       &r.S_norm, &r.s1_norm, &r.s2_norm,   &r.s3_norm,           &r.W_c,
          &r.W_o, &r.W_delta, &r.V_net,  &r.W,       &r.sigma_min, &r.dual_disagreement, &r.consensus_error};
}

}  // namespace

void write_trace_csv(std::ostream& out, const std::vector<TraceRecord>& rows) {
  for (size_t c = 0; c < kTraceColumns.size(); ++c) out << (c ? "," : "") << kTraceColumns[c];
  out << '\n' << std::setprecision(17);
  for (TraceRecord r : rows) {
    const auto cols = columns(r);
    for (size_t c = 0; c < cols.size(); ++c) out << (c ? "," : "") << *cols[c];
    out << '\n';
  }
}

std::vector<TraceRecord> read_trace_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("trace csv: empty input");
  std::string expected;
  for (size_t c = 0; c < kTraceColumns.size(); ++c)
    expected += std::string(c ? "," : "") + std::string(kTraceColumns[c]);
  if (line != expected) throw std::runtime_error("trace csv: unexpected header");
  std::vector<TraceRecord> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    TraceRecord r;
    std::istringstream ls(line);
    std::string cell;
    for (double* dst : columns(r)) {
      if (!std::getline(ls, cell, ',')) throw std::runtime_error("trace csv: short row");
      *dst = std::stod(cell);
    }
    rows.push_back(r);
  }
  return rows;
}

}  // namespace ptgne
