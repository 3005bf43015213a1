#include <doctest.h>

#include <cmath>
#include <complex>
#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include "trefftz/analysis.hpp"
#include "trefftz/config.hpp"
#include "trefftz/runner.hpp"

using namespace trefftz;

namespace {

const std::string kMinimalSolve = R"(
[problem]
domain = rect 0 0 1 1
k = 4
theta = 1
boundary = robin
exact = plane_wave 1 0

[method]
name = uwvf

[basis]
family = pw
p = 7

[schedule]
levels = 1
)";

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  return lines;
}

std::vector<std::string> split_cells(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.push_back("");
  return cells;
}

// Study rows without the wall-clock columns (those legitimately vary).
std::string strip_timings(const std::string& csv) {
  std::string out;
  for (const std::string& line : split_lines(csv)) {
    const std::vector<std::string> cells = split_cells(line);
    for (std::size_t i = 0; i + 2 < cells.size(); ++i) {
      if (i > 0) out += ',';
      out += cells[i];
    }
    out += '\n';
  }
  return out;
}

std::string run_solve_text(const std::string& config_text) {
  const RunConfig cfg = parse_config(config_text);
  std::ostringstream study;
  run_solve(cfg, study, nullptr);
  return study.str();
}

double cell_value(const std::string& csv, int row, int col) {
  const std::vector<std::string> lines = split_lines(csv);
  REQUIRE(static_cast<int>(lines.size()) > row);
  const std::vector<std::string> cells = split_cells(lines[row]);
  REQUIRE(static_cast<int>(cells.size()) > col);
  return std::stod(cells[col]);
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("config parsing: defaults, comments, and whitespace") {
  const RunConfig cfg = parse_config(
      "# comment only\n"
      "[problem]\n"
      "  k =   2.5   # trailing comment\n"
      "[basis]\n"
      "p = 5\n");
  CHECK(cfg.problem.k == 2.5);
  CHECK(cfg.problem.domain == DomainKind::rect);
  CHECK(cfg.problem.x1 == 1.0);
  CHECK(cfg.problem.theta == 1.0);
  CHECK(cfg.problem.exact == ExactKind::none);
  CHECK(cfg.method.name == MethodName::tdg);
  CHECK(cfg.method.flux.preset == FluxPreset::uwvf);
  CHECK(cfg.basis.p == 5);
  CHECK(cfg.schedule.levels == std::vector<int>{1});
  CHECK(cfg.output.seed == 42u);
  CHECK(cfg.output.study_csv == "study.csv");
}

TEST_CASE("config parsing: every section round-trips through serialization") {
  const std::string text = R"(
[problem]
domain = disc 0.25 -0.5 2 48
k = 3.75
theta = 0.5
boundary = dirichlet
exact = fourier_bessel 0.25 -0.5 -2

[method]
name = vtcr
flux = h_version
a = 0.4
b = 0.3
d = 0.2
lambda = 2.5
sigma = 0.75
jump = normal
c1 = 0.5 0.5
c2 = 1 0
z_int = 2 -1
mfs_mode = collocation
mfs_samples_per_facet = 3
mfs_pole_factor = 1.5
mfs_pole_count = 12

[basis]
family = ghp
p = 4
scaled = false

[schedule]
levels = 2
p_values = 2 3 4

[output]
study_csv = out/study.csv
field_csv = out/field.csv
field_grid = 10 20
seed = 7
workers = 2

[sweep]
family = ghp
k = 2.25
h_values = 1 0.5 0.25
orders = 1 2 3
scaled = true
csv = out/cond.csv
)";
  const RunConfig cfg = parse_config(text);
  CHECK(cfg.problem.domain == DomainKind::disc);
  CHECK(cfg.problem.disc_segments == 48);
  CHECK(cfg.problem.uniform_tag == BoundaryTag::dirichlet);
  CHECK(cfg.problem.exact_order == -2);
  CHECK(cfg.method.name == MethodName::vtcr);
  CHECK(cfg.method.flux.preset == FluxPreset::h_version);
  CHECK(cfg.method.weights.jump_mode == GradientJumpMode::normal_only);
  CHECK(cfg.method.c1 == cplx{0.5, 0.5});
  CHECK(cfg.method.z_int == cplx{2.0, -1.0});
  CHECK(cfg.basis.family == BasisFamily::ghp);
  CHECK_FALSE(cfg.basis.scaled);
  CHECK(cfg.schedule.p_values == std::vector<int>{2, 3, 4});
  CHECK(cfg.output.grid_nx == 10);
  CHECK(cfg.output.grid_ny == 20);
  CHECK(cfg.sweep.h_values == std::vector<double>{1.0, 0.5, 0.25});

  // serialize -> parse -> serialize is a fixed point.
  const std::string canon = serialize_config(cfg);
  const RunConfig cfg2 = parse_config(canon);
  CHECK(serialize_config(cfg2) == canon);
}

TEST_CASE("config parsing: errors carry line numbers") {
  auto message_of = [](const std::string& text) -> std::string {
    try {
      parse_config(text);
    } catch (const ConfigError& e) {
      return e.what();
    }
    return "";
  };
  CHECK(message_of("[problem]\nbogus = 1\n").find("config line 2") == 0);
  CHECK(message_of("[nosuch]\n").find("config line 1") == 0);
  CHECK(message_of("k = 1\n").find("key before any [section]") !=
        std::string::npos);
  CHECK(message_of("[problem]\nk 1\n").find("expected 'key = value'") !=
        std::string::npos);
  CHECK(message_of("[problem]\nk = abc\n").find("expected a number") !=
        std::string::npos);
  CHECK(message_of("[problem]\nk =\n").find("empty value") !=
        std::string::npos);
  CHECK(message_of("[problem]\nexact = warp 1 0\n").find("config line 2") == 0);
  CHECK(message_of("[basis]\nscaled = maybe\n").find("true/false") !=
        std::string::npos);
}

TEST_CASE("config validation rejects inconsistent setups") {
  CHECK_THROWS_AS(parse_config("[problem]\nk = -1\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[problem]\ndomain = rect 0 0 0 1\n"),
                  ConfigError);
  CHECK_THROWS_AS(parse_config("[problem]\ndomain = disc 0 0 -2\n"),
                  ConfigError);
  CHECK_THROWS_AS(parse_config("[basis]\nfamily = pw\np = 0\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[schedule]\nlevels = 0\n"), ConfigError);
  CHECK_THROWS_AS(
      parse_config("[schedule]\nlevels = 1 2\np_values = 3 5\n"),
      ConfigError);
  CHECK_THROWS_AS(parse_config("[sweep]\norders = 2 2\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[sweep]\nh_values = -1\n"), ConfigError);
  // Fundamental-solution pole must stay outside the domain.
  CHECK_THROWS_AS(
      parse_config("[problem]\nexact = fundamental 0.5 0.5\n"), ConfigError);
  CHECK_NOTHROW(parse_config("[problem]\nexact = fundamental 1.5 0.5\n"));
  CHECK_THROWS_AS(
      parse_config(
          "[problem]\ndomain = disc 0 0 1\nexact = fundamental 0.9 0\n"),
      ConfigError);
  // direct/indirect run on a single element.
  CHECK_THROWS_AS(
      parse_config("[method]\nname = direct\n[schedule]\nlevels = 2\n"),
      ConfigError);
  CHECK_THROWS_AS(parse_config("[method]\nname = wbm\nz_int = 0 0\n"),
                  ConfigError);
}

TEST_CASE("solve: minimal config recovers the exact plane wave") {
  const std::string csv = run_solve_text(kMinimalSolve);
  const std::vector<std::string> lines = split_lines(csv);
  REQUIRE(lines.size() == 2);
  CHECK(lines[0] ==
        "level,h,p,dofs,err_L2,err_TDG,err_LS,cond2,assemble_ms,solve_ms");
  CHECK(cell_value(csv, 1, 4) <= 1e-8);  // err_L2
}

TEST_CASE("solve: a refinement schedule emits one row per level, h halving") {
  std::string text = kMinimalSolve;
  text.replace(text.find("levels = 1"), 10, "levels = 1 2 4 8");
  const std::string csv = run_solve_text(text);
  const std::vector<std::string> lines = split_lines(csv);
  REQUIRE(lines.size() == 5);
  for (int row = 1; row <= 4; ++row) {
    CHECK(cell_value(csv, row, 0) == row);  // level column
  }
  for (int row = 1; row <= 3; ++row) {
    // Cells carry 12 significant digits, so compare at that resolution.
    const double ratio = cell_value(csv, row, 1) / cell_value(csv, row + 1, 1);
    CHECK(ratio == doctest::Approx(2.0).epsilon(1e-10));
  }
}

TEST_CASE("solve: uwvf and tdg at a=b=d=1/2 write identical error columns") {
  std::string tdg_text = kMinimalSolve;
  tdg_text.replace(tdg_text.find("name = uwvf"), 11,
                   "name = tdg\nflux = p_version\na = 0.5\nb = 0.5\nd = 0.5");
  const std::string a = run_solve_text(kMinimalSolve);
  const std::string b = run_solve_text(tdg_text);
  CHECK(strip_timings(a) == strip_timings(b));
}

TEST_CASE("solve: round-trip through the serialized effective config") {
  const RunConfig cfg = parse_config(kMinimalSolve);
  const RunConfig back = parse_config(serialize_config(cfg));
  std::ostringstream s1, s2;
  run_solve(cfg, s1, nullptr);
  run_solve(back, s2, nullptr);
  CHECK(strip_timings(s1.str()) == strip_timings(s2.str()));
}

TEST_CASE("solve: p-refinement schedule and ghp basis") {
  const std::string text = R"(
[problem]
domain = rect 0 0 1 1
k = 3
theta = 1
boundary = robin
exact = fourier_bessel 0.5 0.5 2

[method]
name = uwvf

[basis]
family = ghp
p = 2

[schedule]
levels = 1
p_values = 2 3
)";
  const std::string csv = run_solve_text(text);
  const std::vector<std::string> lines = split_lines(csv);
  REQUIRE(lines.size() == 3);
  CHECK(cell_value(csv, 1, 2) == 2);   // p column follows the schedule
  CHECK(cell_value(csv, 2, 2) == 3);
  CHECK(cell_value(csv, 1, 3) == 5);   // dofs = 2q+1 on one element
  CHECK(cell_value(csv, 2, 3) == 7);
  // The exact circular wave (order 2, centered at the element centroid) lies
  // in the q >= 2 space, scaled or not.
  CHECK(cell_value(csv, 1, 4) <= 1e-8);
  CHECK(cell_value(csv, 2, 4) <= 1e-8);
}

TEST_CASE("solve: direct and indirect single-element methods") {
  for (const char* name : {"direct", "indirect"}) {
    std::string text = kMinimalSolve;
    text.replace(text.find("name = uwvf"), 11, std::string("name = ") + name);
    text.replace(text.find("boundary = robin"), 16,
                 "boundary = dirichlet dirichlet robin robin");
    text.replace(text.find("k = 4"), 5, "k = 1.5");
    const std::string csv = run_solve_text(text);
    CHECK(cell_value(csv, 1, 4) <= 1e-8);
  }
}

TEST_CASE("solve: an exact solution is required") {
  std::string text = kMinimalSolve;
  text.replace(text.find("exact = plane_wave 1 0"), 22, "exact = none");
  CHECK_THROWS_AS(run_solve_text(text), ConfigError);
}

TEST_CASE("sweep: single-order range gives the identity condition number") {
  const RunConfig cfg = parse_config(
      "[sweep]\nfamily = pw\nk = 2\nh_values = 1\norders = 1\n");
  std::ostringstream out;
  run_sweep(cfg, out);
  const std::vector<std::string> lines = split_lines(out.str());
  REQUIRE(lines.size() == 2);
  CHECK(lines[0] == "family,p_or_q,k,h,kh,cond2,saturated");
  CHECK(lines[1] == "pw,1,2,1,2,1,0");
}

TEST_CASE("sweep: repeated runs are bit-identical and saturation stops growth") {
  const RunConfig cfg = parse_config(
      "[sweep]\nfamily = pw\nk = 1\nh_values = 2\norders = 1 19 25\n");
  std::ostringstream a, b;
  run_sweep(cfg, a);
  run_sweep(cfg, b);
  CHECK(a.str() == b.str());
  const std::vector<std::string> lines = split_lines(a.str());
  // Order 19 saturates (cond2 > 1e15), so order 25 is never evaluated.
  REQUIRE(lines.size() == 3);
  CHECK(split_cells(lines[2])[6] == "1");
  CHECK(std::stod(split_cells(lines[2])[5]) > 1e15);

  const RunConfig no_orders = parse_config("[sweep]\nk = 2\nh_values = 1\n");
  std::ostringstream sink;
  CHECK_THROWS_AS(run_sweep(no_orders, sink), ConfigError);
}

TEST_CASE("sample: unimodular plane wave on a 2x2 corner grid") {
  std::string text = kMinimalSolve;
  text.replace(text.find("p = 7"), 5, "p = 1");
  text += "\n[output]\nfield_grid = 2 2\n";
  const RunConfig cfg = parse_config(text);
  std::ostringstream out;
  run_sample(cfg, out);
  const std::vector<std::string> lines = split_lines(out.str());
  REQUIRE(lines.size() == 5);
  CHECK(lines[0] == "x,y,re,im,abs");
  for (int row = 1; row <= 4; ++row) {
    const std::vector<std::string> cells = split_cells(lines[row]);
    REQUIRE(cells.size() == 5);
    CHECK(std::stod(cells[4]) == doctest::Approx(1.0).epsilon(1e-8));
  }
}

TEST_CASE("sample: grid points outside a disc get empty value cells") {
  const std::string text = R"(
[problem]
domain = disc 0 0 1 64
k = 2
theta = 1
boundary = robin
exact = fundamental 1.8 0.4

[method]
name = mfs
mfs_samples_per_facet = 2
mfs_pole_factor = 1.5

[schedule]
levels = 1

[output]
field_grid = 9 9
)";
  const RunConfig cfg = parse_config(text);
  std::ostringstream out;
  run_sample(cfg, out);
  const std::vector<std::string> lines = split_lines(out.str());
  REQUIRE(lines.size() == 82);

  const ExactSolution exact = ExactSolution::fundamental(2.0, {1.8, 0.4});
  int empty = 0, filled = 0;
  double max_err = 0.0;
  for (std::size_t row = 1; row < lines.size(); ++row) {
    const std::vector<std::string> cells = split_cells(lines[row]);
    REQUIRE(cells.size() == 5);
    const double x = std::stod(cells[0]);
    const double y = std::stod(cells[1]);
    if (cells[2].empty()) {
      ++empty;
      CHECK(cells[3].empty());
      CHECK(cells[4].empty());
      CHECK(std::hypot(x, y) > 0.99);  // only points off the disc are skipped
    } else {
      ++filled;
      const cplx v{std::stod(cells[2]), std::stod(cells[3])};
      max_err = std::max(max_err, std::abs(v - exact.value(0, {x, y})));
    }
  }
  CHECK(empty >= 4);  // at least the bounding-box corners
  CHECK(filled >= 40);
  CHECK(max_err <= 1e-6);  // the sampled field reproduces the manufactured u*
}

}  // TEST_SUITE
