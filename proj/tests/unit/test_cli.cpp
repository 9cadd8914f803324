#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "doctest.h"
#include "nsbf/cli/acceptance.hpp"
#include "nsbf/cli/cache.hpp"
#include "nsbf/cli/commands.hpp"
#include "nsbf/cli/config.hpp"
#include "nsbf/cli/expression.hpp"

using namespace nsbf;
using namespace nsbf::cli;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("nsbf-test-" + std::to_string(std::random_device{}()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  fs::path write(const std::string& name, const std::string& text) const {
    std::ofstream(path / name, std::ios::binary) << text;
    return path / name;
  }
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::vector<std::vector<double>> read_csv(const std::string& text) {
  std::vector<std::vector<double>> rows;
  std::istringstream is(text);
  std::string line;
  std::getline(is, line);
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::vector<double> row;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) row.push_back(std::stod(cell));
    rows.push_back(row);
  }
  return rows;
}

ProblemConfig small_degenerate() {
  auto c = builtin_config("degenerate");
  c.N_max = 6;
  return c;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("expression evaluation") {
  CHECK(Expression::parse("1 + 2*3")(0.0) == 7.0);
  CHECK(Expression::parse("2^3^2")(0.0) == 512.0);
  CHECK(Expression::parse("-y^2")(3.0) == -9.0);
  CHECK(Expression::parse("(1 + y^2)*exp(-2*y)")(0.5) == doctest::Approx(1.25 * std::exp(-1.0)).epsilon(1e-15));
  CHECK(Expression::parse("sqrt(y) + log(y) - sin(y)/cos(y)")(2.0) ==
        doctest::Approx(std::sqrt(2.0) + std::log(2.0) - std::tan(2.0)).epsilon(1e-15));
  CHECK(Expression::parse("1.5e-1*y")(2.0) == doctest::Approx(0.3));
  CHECK(Expression::parse(".5")(0.0) == 0.5);
}

TEST_CASE("symbolic derivatives") {
  const auto e = Expression::parse("(1 + y^2)*exp(-2*y) + sin(3*y) + sqrt(1 + y) + log(2 + y) + y^0.5 + 1/y");
  const auto d = e.derivative();
  const auto dd = d.derivative();
  for (double y : {0.3, 1.0, 1.9}) {
    const double h = 1e-5, h2 = 1e-4;
    const double fd = (e(y + h) - e(y - h)) / (2 * h);
    const double fdd = (e(y + h2) - 2 * e(y) + e(y - h2)) / (h2 * h2);
    CHECK(d(y) == doctest::Approx(fd).epsilon(1e-7));
    CHECK(dd(y) == doctest::Approx(fdd).epsilon(1e-5));
  }
  CHECK(Expression::parse("5").derivative()(1.0) == 0.0);
  CHECK(Expression::parse("y").derivative().to_string() == "1");
}

TEST_CASE("to_string round trip") {
  for (const char* s : {"exp(-2*y)", "(1 + y^2)*exp(-2*y)", "-(y - 1)/(y + 2)^2", "2^3^y"}) {
    const auto e = Expression::parse(s);
    const auto f = Expression::parse(e.to_string());
    for (double y : {0.1, 0.7, 1.4}) CHECK(f(y) == doctest::Approx(e(y)).epsilon(1e-15));
  }
}

TEST_CASE("parse errors report the column") {
  auto column = [](const std::string& s) -> std::size_t {
    try {
      Expression::parse(s);
    } catch (const ParseError& e) {
      return e.column();
    }
    return 0;
  };
  CHECK(column("1 + * y") == 5);
  CHECK(column("exp(y") == 6);
  CHECK(column("y + z") == 5);
  CHECK(column("tan(y)") == 1);
  CHECK(column("") == 1);
  CHECK(column("2 3") == 3);
  CHECK(column("y)") == 2);
}

TEST_CASE("complex numbers") {
  CHECK(parse_complex("3") == cplx(3.0, 0.0));
  CHECK(parse_complex("-2.5e1") == cplx(-25.0, 0.0));
  CHECK(parse_complex("5+0.5i") == cplx(5.0, 0.5));
  CHECK(parse_complex("5 - 0.5j") == cplx(5.0, -0.5));
  CHECK(parse_complex("2i") == cplx(0.0, 2.0));
  CHECK(parse_complex("-i") == cplx(0.0, -1.0));
  CHECK(parse_complex("1-i") == cplx(1.0, -1.0));
  CHECK_THROWS_AS(parse_complex("abc"), ConfigError);
  CHECK_THROWS_AS(parse_complex(""), ConfigError);
  CHECK_THROWS_AS(parse_complex("1+2"), ConfigError);
}

TEST_CASE("configuration files") {
  TempDir dir;
  const auto path = dir.write("p.ini",
                              "[problem]\np = exp(-2*y)\nq = -exp(-2*y)\nr = (1 + y^2)*exp(-2*y)\nA = 0\nB = 2\n"
                              "[boundary]\na1 = 1\na2 = -1\nb1 = 1\nb2 = 1\n"
                              "[numerics]\ngrid = 1001\nN = 30\nN_max = 40\ncleanup = yes\n"
                              "[output]\ncache = coeffs.bin\n");
  const auto c = load_config(path);
  CHECK(c.grid == 1001);
  CHECK(c.N == 30);
  CHECK(c.N_max == 40);
  CHECK(c.cleanup);
  CHECK(c.B == 2.0);
  CHECK(c.bc.a2 == -1.0);
  CHECK(c.cache == dir.path / "coeffs.bin");
  const auto pb = make_problem(c);
  CHECK(pb.r(1.0) == doctest::Approx(2.0 * std::exp(-2.0)));
  REQUIRE(pb.r.has_d1());
  CHECK(pb.r.d1(0.0) == doctest::Approx(-2.0));

  const auto d = load_config(dir.write("d.ini", "[problem]\nbuiltin = degenerate\n[numerics]\nN = auto\n"));
  CHECK(d.builtin == "degenerate");
  CHECK(d.N == -1);
  CHECK(d.B == doctest::Approx(M_PI));
}

TEST_CASE("configuration errors") {
  TempDir dir;
  CHECK_THROWS_AS(load_config(dir.write("a.ini", "[numerics]\ngrid = 1000\n[problem]\nbuiltin = kamke\n")), ConfigError);
  CHECK_THROWS_AS(load_config(dir.write("b.ini", "[problem]\nbuiltin = kamke\nA = 3\n")), ConfigError);
  CHECK_THROWS_AS(load_config(dir.write("c.ini", "[problem]\nbuiltin = kamke\n[boundary]\na1 = 0\na2 = 0\n")), ConfigError);
  CHECK_THROWS_AS(load_config(dir.write("d.ini", "[problem]\nbuiltin = nope\n")), ConfigError);
  CHECK_THROWS_AS(load_config(dir.write("e.ini", "[problem]\nbuiltin = kamke\n[numerics]\nN = ten\n")), ConfigError);
  CHECK_THROWS_AS(load_config(dir.write("f.ini", "[problem\n")), ConfigError);
  CHECK_THROWS_AS(load_config(dir.write("g.ini", "[problem]\nbuiltin = kamke\np_file = missing.txt\n")), ConfigError);
  CHECK_THROWS_AS(load_config(dir.write("h.ini", "[problem]\nbuiltin = kamke\np = 1\np_file = x.txt\n")), ConfigError);
  CHECK_THROWS_AS(load_config(dir.path / "absent.ini"), ConfigError);
  const auto bad = load_config(dir.write("i.ini", "[problem]\nbuiltin = kamke\np = exp(-2*y\n"));
  CHECK_THROWS_AS(make_problem(bad), ParseError);
}

TEST_CASE("tabulated coefficients") {
  TempDir dir;
  std::ostringstream p, r;
  p.precision(17);
  r.precision(17);
  for (int i = 0; i <= 400; ++i) {
    const double y = 2.0 * i / 400;
    p << y << ' ' << std::exp(-2 * y) << '\n';
    r << y << ' ' << (1 + y * y) * std::exp(-2 * y) << "  # comment\n";
  }
  dir.write("p.txt", p.str());
  dir.write("r.txt", r.str());
  const auto c = load_config(dir.write("t.ini",
                                       "[problem]\np_file = p.txt\nq = -exp(-2*y)\nr_file = r.txt\nA = 0\nB = 2\n"
                                       "[boundary]\na1 = 1\na2 = -1\nb1 = 1\nb2 = 1\n[numerics]\nN_max = 20\n"));
  const auto pb = make_problem(c);
  CHECK(pb.p(0.7) == doctest::Approx(std::exp(-1.4)).epsilon(1e-9));
  CHECK(pb.p.d1(0.7) == doctest::Approx(-2 * std::exp(-1.4)).epsilon(1e-6));
  std::ostringstream log;
  const auto pl = build_pipeline(c, log);
  CHECK(std::abs(pl.data.b - 0.5 * (2 * std::sqrt(5.0) + std::asinh(2.0))) <= 1e-8);

  dir.write("short.txt", "0 1\n1 1\n");
  CHECK_THROWS_AS(make_problem(load_config(dir.write("s.ini", "[problem]\nbuiltin = kamke\np_file = short.txt\n"))),
                  ConfigError);
  dir.write("narrow.txt", p.str().substr(0, p.str().size() / 2));
  CHECK_THROWS_AS(make_problem(load_config(dir.write("n.ini", "[problem]\nbuiltin = kamke\np_file = narrow.txt\n"))),
                  ConfigError);
}

TEST_CASE("cache round trip and corruption") {
  TempDir dir;
  std::ostringstream log;
  const auto pl = build_pipeline(builtin_config("kamke"), log);
  const auto file = dir.path / "c.bin";
  const std::uint64_t key = cache_key(builtin_config("kamke"));
  write_cache(file, key, pl.coeffs);
  std::string why;
  const auto back = read_cache(file, key, pl.data.grid, &why);
  REQUIRE(back);
  CHECK(back->N == pl.coeffs.N);
  for (int n = 0; n <= back->N; ++n) {
    REQUIRE(std::equal(back->alpha[n].values().begin(), back->alpha[n].values().end(),
                       pl.coeffs.alpha[n].values().begin()));
    REQUIRE(std::equal(back->mu[n].values().begin(), back->mu[n].values().end(), pl.coeffs.mu[n].values().begin()));
  }
  CHECK(back->cut_mu == pl.coeffs.cut_mu);
  CHECK(back->h == pl.coeffs.h);

  CHECK_FALSE(read_cache(file, key + 1, pl.data.grid, &why));
  CHECK(why.find("key") != std::string::npos);
  CHECK_FALSE(read_cache(file, key, make_grid(0.0, 2.0, 1001), &why));
  CHECK_FALSE(read_cache(dir.path / "none.bin", key, pl.data.grid, &why));

  std::string bytes = slurp(file);
  bytes[bytes.size() / 2] ^= 0x5a;
  dir.write("flip.bin", bytes);
  CHECK_FALSE(read_cache(dir.path / "flip.bin", key, pl.data.grid, &why));
  CHECK(why.find("checksum") != std::string::npos);

  bytes = slurp(file);
  bytes[8] = 99;
  dir.write("ver.bin", bytes);
  CHECK_FALSE(read_cache(dir.path / "ver.bin", key, pl.data.grid, &why));
  CHECK(why.find("version") != std::string::npos);

  dir.write("junk.bin", "not a cache");
  CHECK_FALSE(read_cache(dir.path / "junk.bin", key, pl.data.grid, &why));
  dir.write("trunc.bin", slurp(file).substr(0, 100));
  CHECK_FALSE(read_cache(dir.path / "trunc.bin", key, pl.data.grid, &why));
}

TEST_CASE("cache key follows the coefficient inputs") {
  auto a = builtin_config("kamke");
  auto b = a;
  b.N = 20;
  CHECK(cache_key(a) == cache_key(b));
  b.grid = 1001;
  CHECK(cache_key(a) != cache_key(b));
  b = a;
  b.p.expression = "exp(-2.0*y)";
  CHECK(cache_key(a) != cache_key(b));
  b = a;
  b.cleanup = false;
  CHECK(cache_key(a) != cache_key(b));
  CHECK(fnv1a("") == 0xcbf29ce484222325ULL);
  CHECK(fnv1a("a") == 0xaf63dc4c8601ec8cULL);
}

TEST_CASE("cache hit reproduces a cold run") {
  TempDir dir;
  auto cfg = builtin_config("kamke");
  cfg.cache = dir.path / "k.bin";
  EigsOptions eo;
  eo.count = 20;
  std::ostringstream cold, warm, log;
  CHECK(cmd_eigs(cfg, eo, cold, log) == kOk);
  CHECK(fs::exists(cfg.cache));
  std::ostringstream log2;
  const auto pl = build_pipeline(cfg, log2);
  CHECK(pl.cache_hit);
  CHECK(cmd_eigs(cfg, eo, warm, log2) == kOk);
  CHECK(cold.str() == warm.str());

  std::string bytes = slurp(cfg.cache);
  bytes[bytes.size() - 3] ^= 1;
  dir.write("k.bin", bytes);
  std::ostringstream again, log3;
  CHECK(cmd_eigs(cfg, eo, again, log3) == kOk);
  CHECK(log3.str().find("ignoring cache") != std::string::npos);
  CHECK(again.str() == cold.str());
}

TEST_CASE("coeffs command") {
  std::ostringstream out, log;
  CHECK(cmd_coeffs(small_degenerate(), {}, out, log) == kOk);
  CHECK(out.str().find("# N_opt 0\n") != std::string::npos);
  const auto rows = read_csv(out.str().substr(out.str().find("M,")));
  REQUIRE(rows.size() == 7);
  for (const auto& r : rows) CHECK(r[5] == 0.0);

  std::ostringstream kout;
  CHECK(cmd_coeffs(builtin_config("kamke"), {}, kout, log) == kOk);
  const auto pos = kout.str().find("# N_opt ");
  REQUIRE(pos != std::string::npos);
  const int n_opt = std::stoi(kout.str().substr(pos + 8));
  CHECK(n_opt >= 34);
  CHECK(n_opt <= 42);
}

TEST_CASE("eigs command") {
  auto cfg = small_degenerate();
  std::ostringstream out, log;
  EigsOptions o;
  o.count = 5;
  CHECK(cmd_eigs(cfg, o, out, log) == kOk);
  const auto rows = read_csv(out.str());
  REQUIRE(rows.size() == 5);
  for (int k = 1; k <= 5; ++k) CHECK(std::abs(rows[k - 1][2] - k * k) <= 1e-10);

  std::ostringstream empty;
  EigsOptions z;
  z.omega_max = 0.0;
  CHECK(cmd_eigs(cfg, z, empty, log) == kOk);
  CHECK(empty.str() == "k,omega,lambda,residual\n");

  EigsOptions none;
  CHECK_THROWS_AS(cmd_eigs(cfg, none, empty, log), ConfigError);
  EigsOptions neg;
  neg.omega_max = -1.0;
  CHECK_THROWS_AS(cmd_eigs(cfg, neg, empty, log), ConfigError);
}

TEST_CASE("CSV output is byte-identical across runs") {
  auto cfg = builtin_config("kamke");
  EigsOptions o;
  o.omega_max = 30.0;
  o.threads = 3;
  std::ostringstream a, b, log;
  CHECK(cmd_eigs(cfg, o, a, log) == kOk);
  o.threads = 1;
  CHECK(cmd_eigs(cfg, o, b, log) == kOk);
  CHECK(a.str() == b.str());
  CHECK(a.str().find('\r') == std::string::npos);
  CHECK(format_real(0.1) == "0.10000000000000001");
  CHECK(format_real(-2.0) == "-2");
}

TEST_CASE("solve command") {
  std::ostringstream out, log;
  SolveOptions o;
  o.omega = 3.0;
  CHECK(cmd_solve(small_degenerate(), o, out, log) == kOk);
  const auto rows = read_csv(out.str());
  REQUIRE(rows.size() == 2001);
  double err = 0.0;
  for (const auto& r : rows) err = std::max(err, std::abs(r[1] - std::cos(3.0 * r[0])) + std::abs(r[2]));
  CHECK(err <= 1e-12);

  std::ostringstream cout_, clog;
  SolveOptions c;
  c.omega = cplx(5.0, 0.5);
  c.u_a = 1.0;
  c.du_a = 1.0;
  c.check = true;
  CHECK(cmd_solve(builtin_config("kamke"), c, cout_, clog) == kOk);
  for (const auto& r : read_csv(cout_.str())) {
    for (double v : r) REQUIRE(std::isfinite(v));
    REQUIRE(r[5] <= 1e-7);
  }
  CHECK(clog.str().find("max |u - oracle|") != std::string::npos);
}

TEST_CASE("solve at omega = 105 against the oracle") {
  std::ostringstream out, log;
  SolveOptions o;
  o.omega = 105.0;
  o.u_a = 1.0;
  o.du_a = 1.0;
  o.check = true;
  CHECK(cmd_solve(builtin_config("kamke"), o, out, log) == kOk);
  double worst = 0.0;
  for (const auto& r : read_csv(out.str())) worst = std::max(worst, r[5]);
  CHECK(worst <= 1e-5);
}

TEST_CASE("output files") {
  TempDir dir;
  EigsOptions o;
  o.count = 3;
  o.out = dir.path / "e.csv";
  std::ostringstream out, log;
  CHECK(cmd_eigs(small_degenerate(), o, out, log) == kOk);
  CHECK(out.str().empty());
  CHECK(slurp(dir.path / "e.csv").rfind("k,omega,lambda,residual\n1,", 0) == 0);
  o.out = dir.path / "missing" / "e.csv";
  CHECK_THROWS_AS(cmd_eigs(small_degenerate(), o, out, log), ConfigError);
}

TEST_CASE("quick self-test") {
  AcceptanceOptions o;
  o.quick = true;
  std::ostringstream log, out;
  const auto results = run_acceptance(o, log);
  CHECK(results.size() == 10);
  CHECK(print_acceptance(results, out));
  for (const auto& r : results) CHECK_MESSAGE(r.passed, r.id << ' ' << r.name << ": " << r.detail);
}

}
