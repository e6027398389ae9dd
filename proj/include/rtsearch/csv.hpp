#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "rtsearch/harness.hpp"
#include "rtsearch/metrics.hpp"

namespace rtsearch {

struct IoFailure : std::runtime_error {
  explicit IoFailure(const std::string& m) : std::runtime_error(m) {}
};
struct SchemaMismatch : std::runtime_error {
  explicit SchemaMismatch(const std::string& m) : std::runtime_error(m) {}
};

// All CSV floats are written with 9 significant digits.
std::string format_double(double v);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view content);

// Suite results: problem_id,status,alpha,tau,travel_cost,hstar,steps,episodes
// with optional leading `# key=value` metadata lines.
std::string serialize_suite_results(const std::vector<ProblemMetrics>& rows,
                                    const Metadata& metadata = {});
std::vector<ProblemMetrics> parse_suite_results(std::string_view text,
                                                Metadata* metadata = nullptr);
void persist_suite_results(const std::string& path,
                           const std::vector<ProblemMetrics>& rows,
                           const Metadata& metadata = {});
std::vector<ProblemMetrics> load_suite_results(const std::string& path,
                                               Metadata* metadata = nullptr);

// Sweep table: <block>,mean_alpha,mean_tau,solve_rate,n
std::string serialize_sweep(std::string_view block,
                            const std::vector<SweepRow>& rows,
                            const Metadata& metadata = {});
std::vector<SweepRow> parse_sweep(std::string_view text,
                                  std::string* block = nullptr,
                                  Metadata* metadata = nullptr);
void persist_sweep(const std::string& path, std::string_view block,
                   const std::vector<SweepRow>& rows,
                   const Metadata& metadata = {});
std::vector<SweepRow> load_sweep(const std::string& path,
                                 std::string* block = nullptr,
                                 Metadata* metadata = nullptr);

}  // namespace rtsearch
