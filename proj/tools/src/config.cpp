#include "nsbf/cli/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <memory>
#include <sstream>
#include <vector>

#include <boost/math/interpolators/barycentric_rational.hpp>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "nsbf/cli/expression.hpp"

namespace nsbf::cli {

namespace {

namespace pt = boost::property_tree;

template <class T>
T get_or(const pt::ptree& tree, const std::string& key, T fallback) {
  const auto node = tree.get_optional<std::string>(key);
  if (!node) return fallback;
  std::istringstream is(*node);
  T value{};
  is >> value;
  if (is.fail() || !(is >> std::ws).eof())
    throw ConfigError("key '" + key + "': cannot read '" + *node + "'");
  return value;
}

bool get_bool(const pt::ptree& tree, const std::string& key, bool fallback) {
  const auto node = tree.get_optional<std::string>(key);
  if (!node) return fallback;
  std::string v = *node;
  std::transform(v.begin(), v.end(), v.begin(), [](unsigned char c) { return std::tolower(c); });
  if (v == "true" || v == "yes" || v == "on" || v == "1") return true;
  if (v == "false" || v == "no" || v == "off" || v == "0") return false;
  throw ConfigError("key '" + key + "': expected a boolean, got '" + *node + "'");
}

CoefficientSource read_source(const pt::ptree& tree, const std::string& name,
                              const std::filesystem::path& base, const CoefficientSource& fallback) {
  const auto expr = tree.get_optional<std::string>("problem." + name);
  const auto file = tree.get_optional<std::string>("problem." + name + "_file");
  if (expr && file) throw ConfigError("both " + name + " and " + name + "_file given");
  CoefficientSource src = fallback;
  if (expr) src = {*expr, {}};
  if (file) {
    std::filesystem::path path(*file);
    if (path.is_relative()) path = base / path;
    src = {{}, path};
  }
  return src;
}

struct Table {
  std::vector<double> x, y;
};

Table read_table(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open table file " + path.string());
  Table t;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream is(line);
    double a, b;
    if (!(is >> a)) continue;
    if (!(is >> b)) throw ConfigError(path.string() + ":" + std::to_string(lineno) + ": expected two columns");
    if (!t.x.empty() && a <= t.x.back())
      throw ConfigError(path.string() + ":" + std::to_string(lineno) + ": abscissae must increase");
    t.x.push_back(a);
    t.y.push_back(b);
  }
  if (t.x.size() < 8) throw ConfigError(path.string() + ": need at least 8 samples");
  return t;
}

CoefficientFn make_coefficient(const CoefficientSource& src, const std::string& name, double A, double B) {
  if (!src.table.empty()) {
    Table t = read_table(src.table);
    if (t.x.front() > A || t.x.back() < B)
      throw ConfigError(src.table.string() + " does not cover [A, B] for " + name);
    using Interp = boost::math::barycentric_rational<double>;
    auto f = std::make_shared<Interp>(std::move(t.x), std::move(t.y), 3);
    CoefficientFn c;
    c.value = [f](double y) { return (*f)(y); };
    c.d1 = [f](double y) { return f->prime(y); };
    return c;
  }
  if (src.expression.empty()) throw ConfigError("coefficient " + name + " is not defined");
  const Expression e = Expression::parse(src.expression);
  const Expression d1 = e.derivative();
  const Expression d2 = d1.derivative();
  return CoefficientFn{e, d1, d2};
}

}  // namespace

ProblemConfig builtin_config(const std::string& name) {
  ProblemConfig c;
  c.builtin = name;
  if (name == "kamke") {
    c.p.expression = "exp(-2*y)";
    c.q.expression = "-exp(-2*y)";
    c.r.expression = "(1 + y^2)*exp(-2*y)";
    c.A = 0.0;
    c.B = 2.0;
    c.bc = {1.0, -1.0, 1.0, 1.0};
  } else if (name == "degenerate") {
    c.p.expression = "1";
    c.q.expression = "0";
    c.r.expression = "1";
    c.A = 0.0;
    c.B = 3.141592653589793238;
    c.bc = {1.0, 0.0, 1.0, 0.0};
  } else {
    throw ConfigError("unknown built-in problem '" + name + "' (kamke, degenerate)");
  }
  return c;
}

ProblemConfig load_config(const std::filesystem::path& path) {
  pt::ptree tree;
  try {
    pt::read_ini(path.string(), tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(e.what());
  }
  const std::filesystem::path base = path.has_parent_path() ? path.parent_path() : ".";

  ProblemConfig c;
  if (auto b = tree.get_optional<std::string>("problem.builtin")) c = builtin_config(*b);
  c.p = read_source(tree, "p", base, c.p);
  c.q = read_source(tree, "q", base, c.q);
  c.r = read_source(tree, "r", base, c.r);
  c.A = get_or(tree, "problem.A", c.A);
  c.B = get_or(tree, "problem.B", c.B);
  c.bc.a1 = get_or(tree, "boundary.a1", c.bc.a1);
  c.bc.a2 = get_or(tree, "boundary.a2", c.bc.a2);
  c.bc.b1 = get_or(tree, "boundary.b1", c.bc.b1);
  c.bc.b2 = get_or(tree, "boundary.b2", c.bc.b2);
  c.grid = get_or<std::size_t>(tree, "numerics.grid", c.grid);
  const std::string N = tree.get<std::string>("numerics.N", "auto");
  c.N = N == "auto" ? -1 : get_or<int>(tree, "numerics.N", -1);
  c.N_max = get_or(tree, "numerics.N_max", c.N_max);
  c.cleanup = get_bool(tree, "numerics.cleanup", c.cleanup);
  if (auto cache = tree.get_optional<std::string>("output.cache")) {
    c.cache = *cache;
    if (c.cache.is_relative()) c.cache = base / c.cache;
  }
  validate(c);
  return c;
}

void validate(const ProblemConfig& c) {
  if (!(c.A < c.B) || !std::isfinite(c.A) || !std::isfinite(c.B))
    throw ConfigError("interval needs finite A < B");
  if (c.grid < 201 || c.grid % 2 == 0)
    throw ConfigError("grid size must be odd and >= 201, got " + std::to_string(c.grid));
  if (c.N_max < 0 || c.N_max > 200) throw ConfigError("N_max must lie in [0, 200]");
  if (c.N < -1 || c.N > c.N_max) throw ConfigError("N must be auto or lie in [0, N_max]");
  try {
    c.bc.validate();
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }
  for (const auto* src : {&c.p, &c.q, &c.r})
    if (!src->table.empty() && !std::filesystem::exists(src->table))
      throw ConfigError("table file " + src->table.string() + " does not exist");
}

SLProblem make_problem(const ProblemConfig& c) {
  SLProblem problem;
  problem.p = make_coefficient(c.p, "p", c.A, c.B);
  problem.q = make_coefficient(c.q, "q", c.A, c.B);
  problem.r = make_coefficient(c.r, "r", c.A, c.B);
  problem.A = c.A;
  problem.B = c.B;
  problem.name = c.builtin.empty() ? "config" : c.builtin;
  return problem;
}

std::string canonical_form(const ProblemConfig& c) {
  std::ostringstream os;
  os.precision(17);
  auto source = [&](const char* name, const CoefficientSource& s) {
    os << name << '=';
    if (!s.table.empty()) {
      std::ifstream in(s.table, std::ios::binary);
      os << "table:" << in.rdbuf();
    } else {
      os << "expr:" << s.expression;
    }
    os << '\n';
  };
  os << "builtin=" << c.builtin << '\n';
  source("p", c.p);
  source("q", c.q);
  source("r", c.r);
  os << "A=" << c.A << "\nB=" << c.B << "\ngrid=" << c.grid << "\nN_max=" << c.N_max
     << "\ncleanup=" << c.cleanup << '\n';
  return os.str();
}

}  // namespace nsbf::cli
