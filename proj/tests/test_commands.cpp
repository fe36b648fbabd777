#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "novikov/commands.hpp"
#include "novikov/config.hpp"
#include "novikov/error.hpp"

using namespace novikov;
namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("novikov_test_" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

json load(const fs::path& p) { return json::parse(slurp(p)); }

ErrorCode parse_error(const std::string& text) {
  try {
    parse_config(text);
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected a parse error for: " << text);
  return ErrorCode::io;
}

int run(const std::string& cmd, const std::string& text, const fs::path& dir) {
  std::ostringstream diag;
  const int status = run_command(cmd, parse_config(text), dir.string(), diag);
  if (!diag.str().empty()) MESSAGE(diag.str());
  return status;
}

const char* zero_config =
    "datum.kind = zero\n"
    "run.half_width = 10\n"
    "run.N = 256\n"
    "run.dt = 0.01\n"
    "run.T_end = 0.5\n"
    "run.snapshot_stride = 10\n";

}  // namespace

TEST_SUITE("config") {
  TEST_CASE("flat key = value with comments and lists") {
    const RunConfig c = parse_config(
        "# gaussian ladder\n"
        "datum.kind = gaussian\n"
        "datum.width = 1.5   # trailing comment\n"
        "\n"
        "run.half_width = 14\n"
        "run.N = 4096\n"
        "run.dt = 5e-4\n"
        "compare.N = 1024, 2048,4096\n"
        "perturb.delta = 1e-2, -1e-3\n"
        "trace.y_bar = -1, 0.5\n"
        "output.dir = out/run 1\n");
    CHECK(c.datum_kind == "gaussian");
    CHECK(c.width == 1.5);
    CHECK(c.x_lo == -14.0);
    CHECK(c.x_hi == 14.0);
    CHECK(c.N == 4096);
    CHECK(c.dt == 5e-4);
    CHECK(c.compare_N == std::vector<std::size_t>{1024, 2048, 4096});
    CHECK(c.perturb_delta == std::vector<double>{1e-2, -1e-3});
    CHECK(c.trace_y_bar == std::vector<double>{-1.0, 0.5});
    CHECK(c.out_dir == "out/run 1");
    CHECK(c.warnings.empty());
  }

  TEST_CASE("bad input is a config error") {
    CHECK(parse_error("run.M = 3\n") == ErrorCode::config);
    CHECK(parse_error("run.N = 256\nrun.N = 512\n") == ErrorCode::config);
    CHECK(parse_error("run.dt = fast\n") == ErrorCode::config);
    CHECK(parse_error("run.dt = inf\n") == ErrorCode::config);
    CHECK(parse_error("run.dt\n") == ErrorCode::config);
    CHECK(parse_error("run.dt = -1\n") == ErrorCode::config);
    CHECK(parse_error("datum.kind = soliton\n") == ErrorCode::config);
    CHECK(parse_error("compare.N = 1024,,2048\n") == ErrorCode::config);
    CHECK(parse_error("run.x_lo = 5\nrun.x_hi = 1\n") == ErrorCode::config);
  }

  TEST_CASE("non power of two N warns") {
    const RunConfig c = parse_config("run.N = 1000\n");
    REQUIRE(c.warnings.size() == 1);
    CHECK(c.warnings[0].find("1000") != std::string::npos);
  }

  TEST_CASE("datum construction") {
    CHECK(make_datum(parse_config("datum.kind = peakon\ndatum.speed = 4\n")).value(0.0) == doctest::Approx(2.0));
    CHECK(make_datum(parse_config("datum.kind = zero\n")).value(0.3) == 0.0);
    const InitialDatum pair =
        make_datum(parse_config("datum.kind = antipeakon-pair\ndatum.separation = 6\n"));
    CHECK(pair.kind() == DatumKind::antipeakon_pair);
    CHECK(pair.value(-3.0) == doctest::Approx(-pair.value(3.0)));

    const fs::path dir = scratch("tab");
    fs::create_directories(dir);
    {
      std::ofstream out(dir / "u0.csv");
      out << "x,u\n";
      for (int k = -100; k <= 100; ++k) out << 0.1 * k << "," << std::exp(-0.01 * k * k) << "\n";
    }
    const InitialDatum t =
        make_datum(parse_config("datum.kind = tabulated\ndatum.file = " + (dir / "u0.csv").string() + "\n"));
    CHECK(t.kind() == DatumKind::tabulated);
    CHECK(t.value(0.0) == doctest::Approx(1.0));
  }
}

TEST_SUITE("commands") {
  TEST_CASE("run on the zero datum") {
    const fs::path dir = scratch("zero_run");
    CHECK(run("run", zero_config, dir) == exit_pass);
    const std::string energies = slurp(dir / "energies.csv");
    CHECK(energies.rfind("T,E,F,min_xi,max_xi,breaking_count\n", 0) == 0);
    std::istringstream lines(energies);
    std::string line;
    std::getline(lines, line);
    int rows = 0;
    while (std::getline(lines, line)) {
      ++rows;
      std::istringstream f(line);
      std::string T, E, F;
      std::getline(f, T, ',');
      std::getline(f, E, ',');
      std::getline(f, F, ',');
      CHECK(E == "0");
      CHECK(F == "0");
    }
    CHECK(rows == 6);
    CHECK(fs::exists(dir / "snapshot_5.csv"));
    CHECK(slurp(dir / "snapshot_0.csv").rfind("x,u,ux,mask\n", 0) == 0);
    const json s = load(dir / "summary.json");
    CHECK(s["passed"] == true);
    CHECK(s["E0"] == 0.0);
  }

  TEST_CASE("peakon summary reports E0 = 2") {
    const fs::path dir = scratch("peakon_run");
    const int status = run("run",
                           "datum.kind = peakon\nrun.x_lo = -20\nrun.x_hi = 25\nrun.N = 1024\n"
                           "run.edge_tol = 1e-8\nrun.dt = 1e-3\nrun.T_end = 0.01\n"
                           "tol.E = 1e-3\ntol.F = 1e-3\n",
                           dir);
    CHECK(status != exit_config);
    const json s = load(dir / "summary.json");
    CHECK(s["E0"].get<double>() == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(s["F0"].get<double>() == doctest::Approx(4.0 / 3.0).epsilon(1e-9));
    CHECK(s["K"].get<double>() > 0.0);
  }

  TEST_CASE("a timestep above the guard stops before integrating") {
    const fs::path dir = scratch("bad_dt");
    CHECK(run("run", "datum.kind = gaussian\nrun.dt = 10\n", dir) == exit_config);
    CHECK_FALSE(fs::exists(dir / "energies.csv"));
    CHECK_FALSE(fs::exists(dir / "snapshot_0.csv"));
  }

  TEST_CASE("identical configs give byte-identical outputs") {
    const std::string cfg =
        "datum.kind = gaussian\nrun.half_width = 12\nrun.N = 1024\nrun.dt = 2e-3\n"
        "run.T_end = 0.2\nrun.snapshot_stride = 25\n";
    const fs::path a = scratch("det_a"), b = scratch("det_b");
    CHECK(run("run", cfg, a) == exit_pass);
    CHECK(run("run", cfg, b) == exit_pass);
    std::size_t files = 0;
    for (const auto& entry : fs::directory_iterator(a)) {
      ++files;
      CHECK(slurp(entry.path()) == slurp(b / entry.path().filename()));
    }
    CHECK(files >= 4);
  }

  TEST_CASE("trace on the zero datum gives constant columns") {
    const fs::path dir = scratch("zero_trace");
    CHECK(run("trace", std::string(zero_config) + "trace.y_bar = -2, 1\n", dir) == exit_pass);
    std::istringstream lines(slurp(dir / "trace_1.csv"));
    std::string line;
    std::getline(lines, line);
    CHECK(line == "t,beta,x,u,ucar_residual");
    while (std::getline(lines, line)) {
      std::istringstream f(line);
      std::string t, beta, x, u, r;
      std::getline(f, t, ',');
      std::getline(f, beta, ',');
      std::getline(f, x, ',');
      std::getline(f, u, ',');
      std::getline(f, r, ',');
      CHECK(std::stod(beta) == doctest::Approx(1.0).epsilon(1e-13));
      CHECK(std::stod(x) == doctest::Approx(1.0).epsilon(1e-13));
      CHECK(u == "0");
      CHECK(r == "0");
    }
    CHECK(load(dir / "trace_summary.json")["non_crossing"] == true);
  }

  TEST_CASE("compare on the zero datum reports zero discrepancies") {
    const fs::path dir = scratch("zero_compare");
    CHECK(run("compare", std::string(zero_config) + "compare.N = 128, 256\n", dir) == exit_pass);
    const json c = load(dir / "compare.json");
    for (const auto& level : c["levels"])
      for (const auto& [name, d] : level["discrepancy"].items()) CHECK(d["linf"] == 0.0);
  }

  TEST_CASE("perturb: zero delta is exact and the sign does not change the size") {
    const fs::path dir = scratch("perturb");
    CHECK(run("perturb",
              "datum.kind = gaussian\nrun.half_width = 12\nrun.N = 512\nrun.dt = 2e-3\n"
              "run.T_end = 0\nperturb.delta = 1e-2, -1e-2, 0\n",
              dir) == exit_pass);
    const json p = load(dir / "perturb.json");
    const auto& levels = p["levels"];
    CHECK(levels[2]["sup_difference"] == 0.0);
    CHECK(levels[0]["sup_difference"].get<double>() ==
          doctest::Approx(levels[1]["sup_difference"].get<double>()).epsilon(1e-12));
  }

  TEST_CASE("unknown command") {
    std::ostringstream diag;
    CHECK(run_command("plot", parse_config(""), scratch("none").string(), diag) == exit_config);
  }
}
