#include "circ4/specfile.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

#include "circ4/circulant.hpp"

namespace circ4 {

SpecError::SpecError(int line_no, const std::string& message)
    : std::runtime_error(line_no > 0 ? "line " + std::to_string(line_no) + ": " + message
                                     : message),
      line(line_no) {}

namespace {

struct Entry {
  std::string value;
  int line = 0;
  bool used = false;
};

using Section = std::map<std::string, Entry>;

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::map<std::string, Section> parse_sections(const std::string& text) {
  std::map<std::string, Section> sections;
  std::istringstream in(text);
  std::string raw;
  std::string current;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    const std::string line = trim(raw);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw SpecError(line_no, "malformed section header");
      current = trim(line.substr(1, line.size() - 2));
      if (current.empty()) throw SpecError(line_no, "empty section name");
      sections[current];  // section may legitimately stay empty
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw SpecError(line_no, "expected 'key = value'");
    if (current.empty()) throw SpecError(line_no, "key outside of any [section]");
    const std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw SpecError(line_no, "empty key");
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"')
      value = value.substr(1, value.size() - 2);
    else if (!value.empty() && (value.front() == '"' || value.back() == '"'))
      throw SpecError(line_no, "unterminated quoted value for '" + key + "'");
    if (value.empty()) throw SpecError(line_no, "empty value for '" + key + "'");
    auto [it, inserted] = sections[current].try_emplace(key, Entry{value, line_no, false});
    if (!inserted) throw SpecError(line_no, "duplicate key '" + key + "'");
  }
  return sections;
}

class SpecReader {
 public:
  explicit SpecReader(const std::string& text) : sections_(parse_sections(text)) {}

  bool has(const std::string& section) const { return sections_.count(section) > 0; }

  Entry* find(const std::string& section, const std::string& key) {
    auto sit = sections_.find(section);
    if (sit == sections_.end()) return nullptr;
    auto kit = sit->second.find(key);
    if (kit == sit->second.end()) return nullptr;
    kit->second.used = true;
    return &kit->second;
  }

  const Entry& require(const std::string& section, const std::string& key) {
    const Entry* e = find(section, key);
    if (!e)
      throw SpecError(0, "missing key '" + key + "' in [" + section + "]");
    return *e;
  }

  Expr expression(const std::string& section, const std::string& key) {
    const Entry& e = require(section, key);
    return parse_entry(e, key);
  }

  static Expr parse_entry(const Entry& e, const std::string& key) {
    try {
      return parse(e.value);
    } catch (const ParseError& pe) {
      throw SpecError(e.line, "invalid expression for '" + key + "': " + pe.what());
    }
  }

  double number(const std::string& section, const std::string& key) {
    const Entry& e = require(section, key);
    return to_number(e, key);
  }

  static double to_number(const Entry& e, const std::string& key) {
    double v = 0.0;
    const char* first = e.value.data();
    const char* last = first + e.value.size();
    const auto res = std::from_chars(first, last, v);
    if (res.ec != std::errc() || res.ptr != last)
      throw SpecError(e.line, "invalid number for '" + key + "'");
    return v;
  }

  void reject_unknown(const std::string& section,
                      std::initializer_list<std::string_view> allowed) const {
    auto sit = sections_.find(section);
    if (sit == sections_.end()) return;
    for (const auto& [key, entry] : sit->second) {
      bool ok = false;
      for (const auto& a : allowed)
        if (key == a) ok = true;
      if (!ok) throw SpecError(entry.line, "unknown key '" + key + "' in [" + section + "]");
    }
  }

  void reject_unknown_sections(std::initializer_list<std::string_view> allowed) const {
    for (const auto& [name, sec] : sections_) {
      bool ok = false;
      for (const auto& a : allowed)
        if (name == a) ok = true;
      if (!ok) {
        const int line = sec.empty() ? 0 : sec.begin()->second.line;
        throw SpecError(line, "unknown section [" + name + "]");
      }
    }
  }

 private:
  std::map<std::string, Section> sections_;
};

std::array<Interval, 4> read_domain(SpecReader& r) {
  std::array<Interval, 4> domain{};
  for (int i = 0; i < 4; ++i) {
    const std::string base = "x" + std::to_string(i + 1);
    const double lo = r.number("domain", base + "_min");
    const double hi = r.number("domain", base + "_max");
    if (!(lo <= hi))
      throw SpecError(0, "empty interval for '" + base + "' in [domain]");
    domain[static_cast<std::size_t>(i)] = Interval{lo, hi};
  }
  return domain;
}

ExprGrid read_general_metric(SpecReader& r) {
  ExprGrid g;
  for (int i = 0; i < 4; ++i)
    for (int j = i; j < 4; ++j) {
      const std::string key = "g" + std::to_string(i + 1) + std::to_string(j + 1);
      const std::string mirror = "g" + std::to_string(j + 1) + std::to_string(i + 1);
      Entry* e = r.find("metric", key);
      Entry* me = i == j ? nullptr : r.find("metric", mirror);
      Expr value;
      if (e && me) {
        value = SpecReader::parse_entry(*e, key);
        const Expr other = SpecReader::parse_entry(*me, mirror);
        if (!structurally_equal(value, other))
          throw SpecError(me->line, "'" + mirror + "' conflicts with '" + key + "'");
      } else if (e) {
        value = SpecReader::parse_entry(*e, key);
      } else if (me) {
        value = SpecReader::parse_entry(*me, mirror);
      } else if (i == j) {
        throw SpecError(0, "missing key '" + key + "' in [metric]");
      } else {
        value = Expr::constant(0.0);  // off-diagonals default to 0
      }
      g[i][j] = value;
      g[j][i] = value;
    }
  return g;
}

ExprGrid read_structure(SpecReader& r) {
  const Mat4 canonical = canonical_q();
  ExprGrid q;
  if (!r.has("structure")) {
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) q[i][j] = Expr::constant(canonical(i, j));
    return q;
  }
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      const std::string key = "q" + std::to_string(i + 1) + std::to_string(j + 1);
      Entry* e = r.find("structure", key);
      q[i][j] = e ? SpecReader::parse_entry(*e, key) : Expr::constant(0.0);
    }
  return q;
}

}  // namespace

LoadedSpec load_spec_text(const std::string& text) {
  SpecReader r(text);
  r.reject_unknown_sections({"manifold", "metric", "structure", "domain", "run"});
  r.reject_unknown("manifold", {"label", "mode"});
  r.reject_unknown("domain", {"x1_min", "x1_max", "x2_min", "x2_max", "x3_min", "x3_max",
                              "x4_min", "x4_max"});
  r.reject_unknown("run", {"points", "seed", "tol"});

  const std::string label = r.require("manifold", "label").value;
  const Entry& mode_entry = r.require("manifold", "mode");
  const std::string& mode = mode_entry.value;
  if (mode != "circulant" && mode != "general")
    throw SpecError(mode_entry.line, "mode must be \"circulant\" or \"general\"");
  const std::array<Interval, 4> domain = read_domain(r);

  std::optional<ManifoldSpec> spec;
  if (mode == "circulant") {
    r.reject_unknown("metric", {"A", "B", "C"});
    CirculantMetricSpec cs;
    cs.A = r.expression("metric", "A");
    cs.B = r.expression("metric", "B");
    cs.C = r.expression("metric", "C");
    cs.domain = domain;
    cs.label = label;
    if (r.has("structure"))
      throw SpecError(0, "[structure] is not allowed in circulant mode (the canonical Q is implied)");
    spec = to_manifold_spec(cs);
  } else if (mode == "general") {
    r.reject_unknown("metric", {"g11", "g12", "g13", "g14", "g21", "g22", "g23", "g24",
                                "g31", "g32", "g33", "g34", "g41", "g42", "g43", "g44"});
    r.reject_unknown("structure", {"q11", "q12", "q13", "q14", "q21", "q22", "q23", "q24",
                                   "q31", "q32", "q33", "q34", "q41", "q42", "q43", "q44"});
    spec = ManifoldSpec(label, read_general_metric(r), read_structure(r), domain);
  }

  LoadedSpec out{std::move(*spec), std::nullopt, std::nullopt, std::nullopt};
  if (Entry* e = r.find("run", "points")) {
    const double v = SpecReader::to_number(*e, "points");
    if (v < 1.0 || v != static_cast<double>(static_cast<int>(v)))
      throw SpecError(e->line, "'points' must be a positive integer");
    out.points = static_cast<int>(v);
  }
  if (Entry* e = r.find("run", "seed")) {
    std::uint64_t v = 0;
    const char* first = e->value.data();
    const auto res = std::from_chars(first, first + e->value.size(), v);
    if (res.ec != std::errc() || res.ptr != first + e->value.size())
      throw SpecError(e->line, "'seed' must be a non-negative integer");
    out.seed = v;
  }
  if (Entry* e = r.find("run", "tol")) {
    const double v = SpecReader::to_number(*e, "tol");
    if (!(v > 0.0)) throw SpecError(e->line, "'tol' must be positive");
    out.tol = v;
  }
  return out;
}

LoadedSpec load_spec(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SpecError(0, "cannot open spec file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return load_spec_text(buf.str());
}

}  // namespace circ4
