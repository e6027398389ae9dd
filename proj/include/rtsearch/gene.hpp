#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace rtsearch {

enum class Lop { Min = 1, Max = 2 };
enum class LookaheadMethod { AStar = 1, Greedy = 2 };

// One algorithm in the configuration space. The trailing fields are
// accepted as input but never consulted by the search.
struct Gene {
  double w = 1.0;                                    // learning weight, >= 1
  Lop lop = Lop::Min;                                // backup extraction rule
  bool da = false;                                   // depression avoidance
  int lookahead = 2;                                 // expansions per episode
  LookaheadMethod method = LookaheadMethod::AStar;   // LSS expansion order
  double da_threshold = 1e-6;                        // th in h - h0 < th

  // inert
  double beam_width = 1.0;
  bool expendable = false;
  bool backtrack = false;

  friend bool operator==(const Gene&, const Gene&) = default;
};

// Allowed block ranges for gene generation and validation.
struct GeneRanges {
  struct Range {
    double lo, hi;
  };
  Range w{1, 3};
  Range da{1, 2};
  Range lop{1, 2};
  Range lookahead{2, 80};
  Range method{1, 2};
};

struct ParseError : std::runtime_error {
  ParseError(const std::string& m, std::size_t position)
      : std::runtime_error(m + " (at position " + std::to_string(position) +
                           ")"),
        pos(position) {}
  std::size_t pos;
};

struct RangeError : std::runtime_error {
  RangeError(const std::string& m, std::string block_name)
      : std::runtime_error(m), block(std::move(block_name)) {}
  std::string block;
};

// Accepts the compact notation `1.1943·min(c+h)+da+59+A*` (`*` may stand in
// for `·`) and the flag form `w=1.1943,lop=min,da=on,lookahead=59,
// method=astar`. When checked, block values are validated against ranges.
Gene parse_gene(std::string_view text, bool checked = true,
                const GeneRanges& ranges = {});

// Compact notation; parse_gene(format_gene(g)) == g.
std::string format_gene(const Gene& gene);

void check_ranges(const Gene& gene, const GeneRanges& ranges = {});

// Replace one named block (`w`, `lop`, `da`, `lookahead`, `method`) with a
// numeric value; integer blocks are rounded, all are clamped to ranges.
Gene substitute(Gene gene, std::string_view block, double value,
                const GeneRanges& ranges = {});

const char* lop_name(Lop lop);
const char* method_name(LookaheadMethod m);

}  // namespace rtsearch
