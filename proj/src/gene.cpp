#include "rtsearch/gene.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstring>

namespace rtsearch {

const char* lop_name(Lop lop) { return lop == Lop::Min ? "min" : "max"; }

const char* method_name(LookaheadMethod m) {
  return m == LookaheadMethod::AStar ? "A*" : "Greedy";
}

namespace {

std::string shortest_double(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return out;
}

// Cursor over the compact notation.
struct Scanner {
  std::string_view text;
  std::size_t pos = 0;

  bool eat(std::string_view token) {
    if (text.substr(pos, token.size()) == token) {
      pos += token.size();
      return true;
    }
    return false;
  }

  double number() {
    double v = 0;
    const char* first = text.data() + pos;
    const char* last = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{}) throw ParseError("expected a number", pos);
    pos = static_cast<std::size_t>(ptr - text.data());
    return v;
  }

  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(msg, pos);
  }
};

Gene parse_compact(std::string_view text) {
  Gene g;
  Scanner sc{text};
  g.w = sc.number();
  if (!sc.eat("\xc2\xb7") && !sc.eat("*"))
    sc.fail("expected '\xc2\xb7' or '*' after the weight");
  if (sc.eat("min"))
    g.lop = Lop::Min;
  else if (sc.eat("max"))
    g.lop = Lop::Max;
  else
    sc.fail("expected learning operator 'min' or 'max'");
  if (!sc.eat("(c+h)")) sc.fail("expected '(c+h)'");
  if (!sc.eat("+")) sc.fail("expected '+'");
  if (sc.eat("da")) {
    g.da = true;
    if (!sc.eat("+")) sc.fail("expected '+' after 'da'");
  }
  const double la = sc.number();
  if (la != std::floor(la)) sc.fail("lookahead must be an integer");
  g.lookahead = static_cast<int>(la);
  if (!sc.eat("+")) sc.fail("expected '+' before the lookahead method");
  if (sc.eat("A*") || sc.eat("a*") || sc.eat("AStar") || sc.eat("astar"))
    g.method = LookaheadMethod::AStar;
  else if (sc.eat("Greedy") || sc.eat("greedy"))
    g.method = LookaheadMethod::Greedy;
  else
    sc.fail("expected lookahead method 'A*' or 'Greedy'");
  if (sc.pos != text.size()) sc.fail("trailing characters");
  return g;
}

Gene parse_flags(std::string_view text) {
  Gene g;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find(',', pos);
    if (end == std::string_view::npos) end = text.size();
    const std::string_view item = text.substr(pos, end - pos);
    const std::size_t eq = item.find('=');
    if (eq == std::string_view::npos)
      throw ParseError("expected key=value", pos);
    const std::string key = lower(item.substr(0, eq));
    const std::string value = lower(item.substr(eq + 1));
    const std::size_t value_pos = pos + eq + 1;

    auto as_number = [&]() {
      double v = 0;
      auto [ptr, ec] =
          std::from_chars(value.data(), value.data() + value.size(), v);
      if (ec != std::errc{} || ptr != value.data() + value.size())
        throw ParseError("bad numeric value for '" + key + "'", value_pos);
      return v;
    };
    auto as_bool = [&]() {
      if (value == "on" || value == "true" || value == "1") return true;
      if (value == "off" || value == "false" || value == "0") return false;
      throw ParseError("bad on/off value for '" + key + "'", value_pos);
    };

    if (key == "w") {
      g.w = as_number();
    } else if (key == "lop") {
      if (value == "min")
        g.lop = Lop::Min;
      else if (value == "max")
        g.lop = Lop::Max;
      else
        throw ParseError("lop must be 'min' or 'max'", value_pos);
    } else if (key == "da") {
      g.da = as_bool();
    } else if (key == "lookahead") {
      const double v = as_number();
      if (v != std::floor(v))
        throw ParseError("lookahead must be an integer", value_pos);
      g.lookahead = static_cast<int>(v);
    } else if (key == "method") {
      if (value == "astar" || value == "a*")
        g.method = LookaheadMethod::AStar;
      else if (value == "greedy")
        g.method = LookaheadMethod::Greedy;
      else
        throw ParseError("method must be 'astar' or 'greedy'", value_pos);
    } else if (key == "th") {
      g.da_threshold = as_number();
    } else if (key == "b") {
      g.beam_width = as_number();
    } else if (key == "expendable") {
      g.expendable = as_bool();
    } else if (key == "backtrack") {
      g.backtrack = as_bool();
    } else {
      throw ParseError("unknown gene block '" + key + "'", pos);
    }
    pos = end + 1;
  }
  return g;
}

}  // namespace

Gene parse_gene(std::string_view text, bool checked, const GeneRanges& ranges) {
  if (text.empty()) throw ParseError("empty gene specification", 0);
  const Gene g = text.find('=') != std::string_view::npos ? parse_flags(text)
                                                          : parse_compact(text);
  if (checked) check_ranges(g, ranges);
  return g;
}

std::string format_gene(const Gene& gene) {
  std::string out = shortest_double(gene.w);
  out += "\xc2\xb7";
  out += lop_name(gene.lop);
  out += "(c+h)";
  if (gene.da) out += "+da";
  out += "+" + std::to_string(gene.lookahead) + "+";
  out += method_name(gene.method);
  return out;
}

void check_ranges(const Gene& gene, const GeneRanges& ranges) {
  if (gene.w < ranges.w.lo || gene.w > ranges.w.hi)
    throw RangeError("w out of range [" + shortest_double(ranges.w.lo) + ", " +
                         shortest_double(ranges.w.hi) + "]",
                     "w");
  if (gene.lookahead < ranges.lookahead.lo ||
      gene.lookahead > ranges.lookahead.hi)
    throw RangeError("lookahead out of range [" +
                         shortest_double(ranges.lookahead.lo) + ", " +
                         shortest_double(ranges.lookahead.hi) + "]",
                     "lookahead");
  if (gene.da_threshold < 0)
    throw RangeError("da threshold must be nonnegative", "th");
}

Gene substitute(Gene gene, std::string_view block, double value,
                const GeneRanges& ranges) {
  auto clamp = [](double v, GeneRanges::Range r) {
    return std::min(std::max(v, r.lo), r.hi);
  };
  if (block == "w") {
    gene.w = clamp(value, ranges.w);
  } else if (block == "lookahead") {
    gene.lookahead =
        static_cast<int>(std::lround(clamp(value, ranges.lookahead)));
  } else if (block == "lop") {
    gene.lop = std::lround(clamp(value, ranges.lop)) <= 1 ? Lop::Min : Lop::Max;
  } else if (block == "da") {
    gene.da = std::lround(clamp(value, ranges.da)) >= 2;
  } else if (block == "method") {
    gene.method = std::lround(clamp(value, ranges.method)) <= 1
                      ? LookaheadMethod::AStar
                      : LookaheadMethod::Greedy;
  } else {
    throw RangeError("unknown gene block '" + std::string(block) + "'",
                     std::string(block));
  }
  return gene;
}

}  // namespace rtsearch
