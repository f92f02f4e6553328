#include "dpl/io.hpp"

#include <fstream>
#include <sstream>
#include <vector>

#include "dpl/error.hpp"

namespace dpl {

namespace {

using Reason = ParseError::Reason;

struct Line {
  std::size_t number;
  std::string text;
};

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::vector<Line> content_lines(std::string_view text) {
  std::vector<Line> out;
  std::size_t number = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    ++number;
    auto line = trim(text.substr(pos, end - pos));
    if (!line.empty() && line.front() != '#') out.push_back({number, std::string(line)});
    pos = end + 1;
  }
  return out;
}

std::vector<std::string> tokens(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  for (std::string t; in >> t;) out.push_back(t);
  return out;
}

Rational rational_at(const std::string& token, std::size_t line) {
  Rational q;
  if (!parse_rational(token, q)) {
    throw ParseError(line, Reason::kSyntax, "malformed rational '" + token + "'");
  }
  return q;
}

Point integer_at(const std::string& token, std::size_t line) {
  Rational q = rational_at(token, line);
  if (q.get_den() != 1 || !q.get_num().fits_slong_p()) {
    throw ParseError(line, Reason::kSyntax, "expected an integer, got '" + token + "'");
  }
  return q.get_num().get_si();
}

}  // namespace

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kConfigError, "cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

Pmf parse_pmf(std::string_view text) {
  auto lines = content_lines(text);
  if (lines.size() != 1) {
    std::size_t where = lines.empty() ? 1 : lines[1].number;
    throw ParseError(where, Reason::kShape, "expected exactly one 'offset; masses' line");
  }
  const auto& [number, line] = lines.front();
  auto semi = line.find(';');
  if (semi == std::string::npos) {
    throw ParseError(number, Reason::kSyntax, "missing ';' after the offset");
  }
  auto head = tokens(line.substr(0, semi));
  if (head.size() != 1) throw ParseError(number, Reason::kSyntax, "expected a single offset");
  Point offset = integer_at(head.front(), number);
  std::vector<Rational> masses;
  for (const auto& t : tokens(line.substr(semi + 1))) masses.push_back(rational_at(t, number));
  if (masses.empty()) throw ParseError(number, Reason::kShape, "no masses given");
  try {
    return Pmf::make(offset, std::move(masses));
  } catch (const NotNormalizedError& e) {
    throw ParseError(number, Reason::kNormalization,
                     "masses miss one by " + format_rational(e.deficit()));
  } catch (const Error& e) {
    throw ParseError(number, Reason::kNegative, e.what());
  }
}

Pmf parse_pmf_file(const std::filesystem::path& path) { return parse_pmf(read_text_file(path)); }

std::string emit_pmf(const Pmf& nu) {
  std::string out = std::to_string(nu.offset()) + ";";
  for (const auto& m : nu.masses()) out += " " + format_rational(m);
  return out + "\n";
}

CubeFn<Rational> parse_cubefn(std::string_view text, bool allow_negative) {
  auto lines = content_lines(text);
  std::vector<Rational> values;
  for (const auto& [number, line] : lines) {
    auto t = tokens(line);
    if (t.size() != 1) throw ParseError(number, Reason::kSyntax, "expected one value per line");
    Rational q = rational_at(t.front(), number);
    if (sgn(q) < 0 && !allow_negative) throw ParseError(number, Reason::kNegative, "cube values must be >= 0");
    values.push_back(q);
  }
  int n = 0;
  while ((std::size_t{1} << n) < values.size()) ++n;
  if (values.size() < 2 || (std::size_t{1} << n) != values.size() || n > 24) {
    std::size_t where = lines.empty() ? 1 : lines.back().number;
    throw ParseError(where, Reason::kShape,
                     "expected 2^n values, got " + std::to_string(values.size()));
  }
  return CubeFn<Rational>::make(n, std::move(values));
}

CubeFn<Rational> parse_cubefn_file(const std::filesystem::path& path, bool allow_negative) {
  return parse_cubefn(read_text_file(path), allow_negative);
}

std::string emit_cubefn(const CubeFn<Rational>& fn) {
  std::string out;
  for (const auto& v : fn.values()) out += format_rational(v) + "\n";
  return out;
}

CostTable parse_cost_table(std::string_view text) {
  CostTable table;
  for (const auto& [number, line] : content_lines(text)) {
    auto t = tokens(line);
    if (t.size() != 3) throw ParseError(number, Reason::kSyntax, "expected 'x y value'");
    Point x = integer_at(t[0], number), y = integer_at(t[1], number);
    if (!table.emplace(std::pair{x, y}, rational_at(t[2], number)).second) {
      throw ParseError(number, Reason::kShape, "duplicate pair");
    }
  }
  return table;
}

CostTable parse_cost_table_file(const std::filesystem::path& path) {
  return parse_cost_table(read_text_file(path));
}

std::string emit_cost_table(const CostTable& table) {
  std::string out;
  for (const auto& [xy, c] : table) {
    out += std::to_string(xy.first) + " " + std::to_string(xy.second) + " " + format_rational(c) +
           "\n";
  }
  return out;
}

}  // namespace dpl
