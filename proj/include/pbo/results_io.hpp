#ifndef PBO_RESULTS_IO_HPP
#define PBO_RESULTS_IO_HPP

#include "pbo/acquisition.hpp"
#include "pbo/benchmarks.hpp"
#include "pbo/experiment.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace pbo {

enum class ResultFormat { csv, json };
ResultFormat parse_format(std::string_view name);

/// One output row: `replicate,iter,policy,fn,x_c_0..x_c_{q-1},g_xc,wall_ms`.
struct ResultRow {
  int replicate = 0;
  int iter = 0;
  std::string policy;
  std::string fn;
  Vector winner;
  double g_winner = 0.0;
  long wall_ms = 0;

  friend bool operator==(const ResultRow& a, const ResultRow& b);
};

std::vector<ResultRow> to_rows(const std::vector<ExperimentRecord>& records, Policy policy,
                               BenchmarkId fn);

/// Shortest decimal form that parses back to the same double.
std::string format_double(double value);

void write_csv(std::ostream& out, const std::vector<ResultRow>& rows, Index dim);
void write_json(std::ostream& out, const std::vector<ResultRow>& rows, Index dim);
std::vector<ResultRow> read_csv(std::istream& in);
std::vector<ResultRow> read_json(std::istream& in);

/// Writes UTF-8 text with LF line endings; throws Error(io) if the path is unwritable.
void write_results(const std::vector<ExperimentRecord>& records, Policy policy, BenchmarkId fn,
                   const std::filesystem::path& path, ResultFormat format);
std::vector<ResultRow> read_results(const std::filesystem::path& path, ResultFormat format);

/// Per-iteration aggregate: `iter,count,median,mean`.
void write_summary_csv(std::ostream& out, const std::vector<IterationSummary>& summary);

}  // namespace pbo

#endif  // PBO_RESULTS_IO_HPP
