#include "rtsearch/csv.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace rtsearch {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoFailure("cannot open '" + path + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoFailure("read error on '" + path + "'");
  return ss.str();
}

void write_file(const std::string& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoFailure("cannot open '" + path + "' for writing");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw IoFailure("write error on '" + path + "'");
}

namespace {

std::vector<std::string> split_csv_line(std::string_view line) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  for (;;) {
    const std::size_t comma = line.find(',', pos);
    if (comma == std::string_view::npos) {
      out.emplace_back(line.substr(pos));
      return out;
    }
    out.emplace_back(line.substr(pos, comma - pos));
    pos = comma + 1;
  }
}

double parse_number(const std::string& s, const char* what) {
  double v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size())
    throw SchemaMismatch(std::string("bad ") + what + " value '" + s + "'");
  return v;
}

long long parse_count(const std::string& s, const char* what) {
  long long v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size())
    throw SchemaMismatch(std::string("bad ") + what + " value '" + s + "'");
  return v;
}

// Walks metadata comments, returns the index of the header line.
std::vector<std::string> to_lines(std::string_view text) {
  std::vector<std::string> lines;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view line = text.substr(pos, nl - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.emplace_back(line);
    pos = nl + 1;
  }
  return lines;
}

std::size_t read_metadata(const std::vector<std::string>& lines,
                          Metadata* metadata) {
  std::size_t i = 0;
  for (; i < lines.size() && lines[i].rfind("# ", 0) == 0; ++i) {
    if (!metadata) continue;
    const std::string body = lines[i].substr(2);
    const auto eq = body.find('=');
    if (eq == std::string::npos)
      metadata->emplace_back(body, "");
    else
      metadata->emplace_back(body.substr(0, eq), body.substr(eq + 1));
  }
  return i;
}

std::string metadata_block(const Metadata& metadata) {
  std::string out;
  for (const auto& [k, v] : metadata) out += "# " + k + "=" + v + "\n";
  return out;
}

constexpr const char* kSuiteHeader =
    "problem_id,status,alpha,tau,travel_cost,hstar,steps,episodes";

}  // namespace

std::string serialize_suite_results(const std::vector<ProblemMetrics>& rows,
                                    const Metadata& metadata) {
  std::string out = metadata_block(metadata);
  out += kSuiteHeader;
  out += '\n';
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& m = rows[i];
    out += std::to_string(i);
    out += ',';
    out += status_name(m.status);
    out += ',';
    out += format_double(m.alpha) + ',' + format_double(m.tau) + ',' +
           format_double(m.travel_cost) + ',' + format_double(m.hstar) + ',' +
           std::to_string(m.steps) + ',' + std::to_string(m.episodes) + '\n';
  }
  return out;
}

std::vector<ProblemMetrics> parse_suite_results(std::string_view text,
                                                Metadata* metadata) {
  const auto lines = to_lines(text);
  std::size_t i = read_metadata(lines, metadata);
  if (i >= lines.size() || lines[i] != kSuiteHeader)
    throw SchemaMismatch("suite results header mismatch");
  std::vector<ProblemMetrics> rows;
  for (++i; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    const auto f = split_csv_line(lines[i]);
    if (f.size() != 8)
      throw SchemaMismatch("suite row has " + std::to_string(f.size()) +
                           " columns, expected 8");
    ProblemMetrics m;
    try {
      m.status = status_from_name(f[1]);
    } catch (const std::invalid_argument& e) {
      throw SchemaMismatch(e.what());
    }
    m.alpha = parse_number(f[2], "alpha");
    m.tau = parse_number(f[3], "tau");
    m.travel_cost = parse_number(f[4], "travel_cost");
    m.hstar = parse_number(f[5], "hstar");
    m.steps = parse_count(f[6], "steps");
    m.episodes = parse_count(f[7], "episodes");
    m.solved = m.status == RunStatus::Solved;
    rows.push_back(m);
  }
  return rows;
}

void persist_suite_results(const std::string& path,
                           const std::vector<ProblemMetrics>& rows,
                           const Metadata& metadata) {
  write_file(path, serialize_suite_results(rows, metadata));
}

std::vector<ProblemMetrics> load_suite_results(const std::string& path,
                                               Metadata* metadata) {
  return parse_suite_results(read_file(path), metadata);
}

std::string serialize_sweep(std::string_view block,
                            const std::vector<SweepRow>& rows,
                            const Metadata& metadata) {
  std::string out = metadata_block(metadata);
  out += std::string(block) + ",mean_alpha,mean_tau,solve_rate,n\n";
  for (const auto& row : rows) {
    out += format_double(row.value) + ',' +
           format_double(row.summary.mean_alpha) + ',' +
           format_double(row.summary.mean_tau) + ',' +
           format_double(row.summary.solve_rate) + ',' +
           std::to_string(row.summary.n) + '\n';
  }
  return out;
}

std::vector<SweepRow> parse_sweep(std::string_view text, std::string* block,
                                  Metadata* metadata) {
  const auto lines = to_lines(text);
  std::size_t i = read_metadata(lines, metadata);
  if (i >= lines.size()) throw SchemaMismatch("sweep table missing header");
  const auto header = split_csv_line(lines[i]);
  if (header.size() != 5 || header[1] != "mean_alpha" ||
      header[2] != "mean_tau" || header[3] != "solve_rate" ||
      header[4] != "n")
    throw SchemaMismatch("sweep table header mismatch");
  if (block) *block = header[0];
  std::vector<SweepRow> rows;
  for (++i; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    const auto f = split_csv_line(lines[i]);
    if (f.size() != 5)
      throw SchemaMismatch("sweep row has " + std::to_string(f.size()) +
                           " columns, expected 5");
    SweepRow row;
    row.value = parse_number(f[0], header[0].c_str());
    row.summary.mean_alpha = parse_number(f[1], "mean_alpha");
    row.summary.mean_tau = parse_number(f[2], "mean_tau");
    row.summary.solve_rate = parse_number(f[3], "solve_rate");
    row.summary.n = static_cast<std::size_t>(parse_count(f[4], "n"));
    rows.push_back(row);
  }
  return rows;
}

void persist_sweep(const std::string& path, std::string_view block,
                   const std::vector<SweepRow>& rows,
                   const Metadata& metadata) {
  write_file(path, serialize_sweep(block, rows, metadata));
}

std::vector<SweepRow> load_sweep(const std::string& path, std::string* block,
                                 Metadata* metadata) {
  return parse_sweep(read_file(path), block, metadata);
}

}  // namespace rtsearch
