#include "pbo/results_io.hpp"

#include <json.hpp>

#include <charconv>
#include <fstream>
#include <sstream>

namespace pbo {

ResultFormat parse_format(std::string_view name) {
  if (name == "csv") return ResultFormat::csv;
  if (name == "json") return ResultFormat::json;
  throw Error(Errc::invalid_argument, "unknown format '" + std::string(name) + "' (expected csv or json)");
}

bool operator==(const ResultRow& a, const ResultRow& b) {
  return a.replicate == b.replicate && a.iter == b.iter && a.policy == b.policy && a.fn == b.fn &&
         a.winner.size() == b.winner.size() && a.winner == b.winner && a.g_winner == b.g_winner &&
         a.wall_ms == b.wall_ms;
}

std::vector<ResultRow> to_rows(const std::vector<ExperimentRecord>& records, Policy policy, BenchmarkId fn) {
  std::vector<ResultRow> rows;
  rows.reserve(records.size());
  for (const ExperimentRecord& r : records) {
    rows.push_back({r.replicate, r.iter, std::string(to_string(policy)), std::string(to_string(fn)), r.winner,
                    r.g_winner, r.wall_ms});
  }
  return rows;
}

std::string format_double(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

namespace {

double parse_double(std::string_view s) {
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw Error(Errc::io, "results: malformed number '" + std::string(s) + "'");
  }
  return v;
}

long parse_long(std::string_view s) {
  long v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw Error(Errc::io, "results: malformed integer '" + std::string(s) + "'");
  }
  return v;
}

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (true) {
    const std::size_t next = line.find(sep, pos);
    out.push_back(line.substr(pos, next - pos));
    if (next == std::string_view::npos) break;
    pos = next + 1;
  }
  return out;
}

std::string coord_name(Index d) { return "x_c_" + std::to_string(d); }

}  // namespace

void write_csv(std::ostream& out, const std::vector<ResultRow>& rows, Index dim) {
  out << "replicate,iter,policy,fn";
  for (Index d = 0; d < dim; ++d) out << ',' << coord_name(d);
  out << ",g_xc,wall_ms\n";
  for (const ResultRow& r : rows) {
    if (r.winner.size() != dim) throw Error(Errc::invalid_argument, "write_csv: winner dimension mismatch");
    out << r.replicate << ',' << r.iter << ',' << r.policy << ',' << r.fn;
    for (Index d = 0; d < dim; ++d) out << ',' << format_double(r.winner(d));
    out << ',' << format_double(r.g_winner) << ',' << r.wall_ms << '\n';
  }
}

std::vector<ResultRow> read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw Error(Errc::io, "read_csv: missing header");
  const auto header = split(line, ',');
  if (header.size() < 6 || header[0] != "replicate" || header[1] != "iter" || header[2] != "policy" ||
      header[3] != "fn" || header[header.size() - 2] != "g_xc" || header.back() != "wall_ms") {
    throw Error(Errc::io, "read_csv: unexpected header");
  }
  const Index dim = static_cast<Index>(header.size()) - 6;
  std::vector<ResultRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split(line, ',');
    if (f.size() != header.size()) throw Error(Errc::io, "read_csv: wrong field count");
    ResultRow r;
    r.replicate = static_cast<int>(parse_long(f[0]));
    r.iter = static_cast<int>(parse_long(f[1]));
    r.policy = std::string(f[2]);
    r.fn = std::string(f[3]);
    r.winner.resize(dim);
    for (Index d = 0; d < dim; ++d) r.winner(d) = parse_double(f[static_cast<std::size_t>(4 + d)]);
    r.g_winner = parse_double(f[f.size() - 2]);
    r.wall_ms = parse_long(f.back());
    rows.push_back(std::move(r));
  }
  return rows;
}

void write_json(std::ostream& out, const std::vector<ResultRow>& rows, Index dim) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const ResultRow& r : rows) {
    if (r.winner.size() != dim) throw Error(Errc::invalid_argument, "write_json: winner dimension mismatch");
    nlohmann::ordered_json o;
    o["replicate"] = r.replicate;
    o["iter"] = r.iter;
    o["policy"] = r.policy;
    o["fn"] = r.fn;
    for (Index d = 0; d < dim; ++d) o[coord_name(d)] = r.winner(d);
    o["g_xc"] = r.g_winner;
    o["wall_ms"] = r.wall_ms;
    arr.push_back(std::move(o));
  }
  out << arr.dump(1) << '\n';
}

std::vector<ResultRow> read_json(std::istream& in) {
  nlohmann::json arr;
  try {
    in >> arr;
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::io, std::string("read_json: ") + e.what());
  }
  if (!arr.is_array()) throw Error(Errc::io, "read_json: expected an array");
  std::vector<ResultRow> rows;
  try {
    for (const auto& o : arr) {
      ResultRow r;
      r.replicate = o.at("replicate").get<int>();
      r.iter = o.at("iter").get<int>();
      r.policy = o.at("policy").get<std::string>();
      r.fn = o.at("fn").get<std::string>();
      Index dim = 0;
      while (o.contains(coord_name(dim))) ++dim;
      r.winner.resize(dim);
      for (Index d = 0; d < dim; ++d) r.winner(d) = o.at(coord_name(d)).get<double>();
      r.g_winner = o.at("g_xc").get<double>();
      r.wall_ms = o.at("wall_ms").get<long>();
      rows.push_back(std::move(r));
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::io, std::string("read_json: ") + e.what());
  }
  return rows;
}

void write_results(const std::vector<ExperimentRecord>& records, Policy policy, BenchmarkId fn,
                   const std::filesystem::path& path, ResultFormat format) {
  const Index dim = canonical_domain(fn).dim();
  std::ostringstream buf;
  const auto rows = to_rows(records, policy, fn);
  if (format == ResultFormat::csv) {
    write_csv(buf, rows, dim);
  } else {
    write_json(buf, rows, dim);
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::io, "cannot open '" + path.string() + "' for writing");
  out << buf.str();
  out.close();
  if (!out) throw Error(Errc::io, "failed writing '" + path.string() + "'");
}

std::vector<ResultRow> read_results(const std::filesystem::path& path, ResultFormat format) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::io, "cannot open '" + path.string() + "' for reading");
  return format == ResultFormat::csv ? read_csv(in) : read_json(in);
}

void write_summary_csv(std::ostream& out, const std::vector<IterationSummary>& summary) {
  out << "iter,count,median,mean\n";
  for (const IterationSummary& s : summary) {
    out << s.iter << ',' << s.count << ',' << format_double(s.median) << ',' << format_double(s.mean) << '\n';
  }
}

}  // namespace pbo
