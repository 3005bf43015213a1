#include "trefftz/runner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <memory>
#include <numeric>
#include <stdexcept>
#include <string>

#include "trefftz/analysis.hpp"
#include "trefftz/basis.hpp"
#include "trefftz/field.hpp"
#include "trefftz/forms.hpp"
#include "trefftz/linalg.hpp"
#include "trefftz/specialfn.hpp"

namespace trefftz {

namespace {

constexpr cplx kImag{0.0, 1.0};
constexpr double kPi = 3.14159265358979323846;

double elapsed_ms(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(
             std::chrono::steady_clock::now() - start)
      .count();
}

// CSV cell: %.12g, infinities as explicit sentinels, NaN is a hard failure.
std::string fmt_cell(double v) {
  if (std::isnan(v)) {
    throw std::runtime_error("runner: non-finite value would leak into CSV");
  }
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

Mesh build_domain_mesh(const ProblemConfig& pb, int n) {
  switch (pb.domain) {
    case DomainKind::rect:
      return generate_rect_grid(pb.x0, pb.y0, pb.x1, pb.y1, n, n, pb.tags);
    case DomainKind::disc: {
      Mesh mesh;
      const int s = pb.disc_segments;
      std::vector<int> ring(s);
      for (int i = 0; i < s; ++i) {
        const double a = 2.0 * kPi * i / s;
        mesh.vertices.push_back({pb.disc_center.x + pb.disc_radius * std::cos(a),
                                 pb.disc_center.y + pb.disc_radius * std::sin(a)});
        ring[i] = i;
      }
      mesh.elements.push_back(ring);
      for (int i = 0; i < s; ++i) {
        mesh.boundary.push_back({i, (i + 1) % s, pb.uniform_tag});
      }
      finalize_mesh(mesh);
      return mesh;
    }
    case DomainKind::mesh_file:
      return load_mesh(pb.mesh_file);
  }
  throw ConfigError("config: unknown domain kind");
}

ExactSolution make_exact(const ProblemConfig& pb) {
  switch (pb.exact) {
    case ExactKind::plane_wave:
      return ExactSolution::plane_wave(pb.k, pb.exact_direction);
    case ExactKind::fourier_bessel:
      return ExactSolution::fourier_bessel(pb.k, pb.exact_center, pb.exact_order);
    case ExactKind::fundamental:
      return ExactSolution::fundamental(pb.k, pb.exact_pole);
    case ExactKind::none:
      break;
  }
  throw ConfigError(
      "config: an exact solution is required to manufacture boundary data "
      "(set 'exact' in [problem])");
}

// Outward normal at a boundary quadrature/sample point: the point lies on a
// boundary facet by construction, so match it to its segment.
Vec2 boundary_normal(const Mesh& mesh, Vec2 x) {
  for (const Facet& f : mesh.facets) {
    if (f.kind == FacetKind::interior) continue;
    const double abx = f.b.x - f.a.x, aby = f.b.y - f.a.y;
    const double len2 = abx * abx + aby * aby;
    double t = ((x.x - f.a.x) * abx + (x.y - f.a.y) * aby) / len2;
    t = std::clamp(t, 0.0, 1.0);
    const double dx = f.a.x + t * abx - x.x;
    const double dy = f.a.y + t * aby - x.y;
    if (std::hypot(dx, dy) <= 1e-9 * std::max(1.0, f.length)) return f.normal;
  }
  throw std::runtime_error("runner: boundary datum requested off the boundary");
}

// Solution of the method of fundamental solutions: a global expansion in
// Hankel sources, independent of any element.
class MfsField final : public ElementField {
 public:
  MfsField(const std::vector<Vec2>* poles, const std::vector<cplx>* coeffs,
           double k)
      : poles_(poles), coeffs_(coeffs), k_(k) {}

  cplx value(int, Vec2 x) const override {
    cplx acc{0.0, 0.0};
    for (std::size_t j = 0; j < poles_->size(); ++j) {
      const double r = std::hypot(x.x - (*poles_)[j].x, x.y - (*poles_)[j].y);
      acc += (*coeffs_)[j] * hankel1(0, k_ * r).value;
    }
    return acc;
  }

  CVec2 gradient(int, Vec2 x) const override {
    CVec2 acc{{0.0, 0.0}, {0.0, 0.0}};
    for (std::size_t j = 0; j < poles_->size(); ++j) {
      const double rx = x.x - (*poles_)[j].x;
      const double ry = x.y - (*poles_)[j].y;
      const double r = std::hypot(rx, ry);
      const cplx dr = (*coeffs_)[j] * k_ * hankel1(0, k_ * r).derivative / r;
      acc.x += dr * rx;
      acc.y += dr * ry;
    }
    return acc;
  }

 private:
  const std::vector<Vec2>* poles_;
  const std::vector<cplx>* coeffs_;
  double k_;
};

Polygon domain_outline(const ProblemConfig& pb, const Mesh& mesh) {
  if (pb.domain == DomainKind::rect) {
    return {{pb.x0, pb.y0}, {pb.x1, pb.y0}, {pb.x1, pb.y1}, {pb.x0, pb.y1}};
  }
  if (mesh.num_elements() == 1) return mesh.element_polygon(0);
  throw ConfigError(
      "config: the mfs method needs a rect, disc, or single-element domain");
}

std::vector<LocalSpace> build_spaces(const Mesh& mesh, const BasisConfig& b,
                                     double k, int p) {
  std::vector<LocalSpace> spaces;
  spaces.reserve(mesh.num_elements());
  for (int e = 0; e < mesh.num_elements(); ++e) {
    const Vec2 c = mesh.metrics[e].centroid;
    if (b.family == BasisFamily::pw) {
      spaces.emplace_back(k, c, PlaneWaveSpec{equispaced_directions(p)});
    } else {
      spaces.emplace_back(
          k, c, CircularWaveSpec{p, b.scaled, mesh.metrics[e].diameter});
    }
  }
  return spaces;
}

struct Solution {
  Mesh mesh;
  std::vector<LocalSpace> spaces;  // empty for mfs
  std::vector<cplx> coeffs;
  std::vector<Vec2> poles;         // mfs only
  bool is_mfs = false;
  int p_param = 0;                 // basis size parameter (mfs: pole count)
  int dofs = 0;
  double cond2 = 1.0;
  double assemble_ms = 0.0;
  double solve_ms = 0.0;
};

// Builds the mesh and spaces for one schedule entry, assembles the configured
// method with boundary data manufactured from the exact solution, and solves.
Solution solve_level(const RunConfig& cfg, int level_n, int p) {
  const ProblemConfig& pb = cfg.problem;
  const MethodName method = cfg.method.name;
  const double k = pb.k;

  Solution sol;
  sol.mesh = build_domain_mesh(pb, level_n);
  const Mesh& mesh = sol.mesh;
  const ExactSolution exact = make_exact(pb);

  // Neumann-style single-element methods consume the plain normal derivative
  // on robin-tagged facets; every other method takes the impedance trace.
  const bool neumann_datum =
      method == MethodName::direct || method == MethodName::indirect;
  BoundaryData data;
  data.theta = pb.theta;
  data.g_D = [&exact](Vec2 x) { return exact.value(0, x); };
  data.g_R = [&exact, &mesh, k, neumann_datum, theta = pb.theta](Vec2 x) {
    const Vec2 n = boundary_normal(mesh, x);
    const CVec2 g = exact.gradient(0, x);
    const cplx dn = g.x * n.x + g.y * n.y;
    return neumann_datum ? dn : dn + kImag * k * theta * exact.value(0, x);
  };

  AssemblyOptions options;
  options.workers = cfg.output.workers;

  const auto t0 = std::chrono::steady_clock::now();
  GlobalSystem sys;
  if (method == MethodName::mfs) {
    const std::vector<MfsSample> samples =
        mfs_samples_from_mesh(mesh, cfg.method.mfs_samples_per_facet);
    const int m = static_cast<int>(samples.size());
    int count = cfg.method.mfs_pole_count;
    if (count == 0) {
      count = cfg.method.mfs_mode == MfsMode::collocation
                  ? m
                  : std::max(8, (m + 2) / 3);
    }
    sol.poles = poles_on_dilated_boundary(domain_outline(pb, mesh),
                                          cfg.method.mfs_pole_factor, count);
    sol.is_mfs = true;
    sol.p_param = count;
    sys = assemble_mfs(samples, sol.poles, data, k, cfg.method.mfs_mode);
  } else {
    sol.spaces = build_spaces(mesh, cfg.basis, k, p);
    sol.p_param = p;
    switch (method) {
      case MethodName::tdg:
        sys = assemble_tdg(mesh, sol.spaces, cfg.method.flux, data, k, options);
        break;
      case MethodName::uwvf: {
        FluxParameters uwvf;
        uwvf.preset = FluxPreset::uwvf;
        sys = assemble_tdg(mesh, sol.spaces, uwvf, data, k, options);
        break;
      }
      case MethodName::ls:
        sys = assemble_ls(mesh, sol.spaces, cfg.method.weights, data, k, options);
        break;
      case MethodName::vtcr:
        sys = assemble_vtcr(mesh, sol.spaces, cfg.method.c1, cfg.method.c2,
                            data, k, options);
        break;
      case MethodName::wbm:
        sys = assemble_wbm(mesh, sol.spaces, cfg.method.z_int, data, k, options);
        break;
      case MethodName::direct:
      case MethodName::indirect: {
        if (mesh.num_elements() != 1) {
          throw ConfigError(
              "config: direct/indirect methods run on a single element");
        }
        const SingleElementMode mode = method == MethodName::direct
                                           ? SingleElementMode::direct
                                           : SingleElementMode::indirect;
        sys = assemble_single_element(mesh, sol.spaces[0], sol.spaces[0], mode,
                                      data, k, options);
        break;
      }
      case MethodName::mfs:
        break;  // handled above
    }
  }
  sol.assemble_ms = elapsed_ms(t0);
  sol.dofs = sys.matrix.cols();

  const auto t1 = std::chrono::steady_clock::now();
  const bool rank_revealing =
      method == MethodName::direct || method == MethodName::indirect ||
      (method == MethodName::mfs && cfg.method.mfs_mode == MfsMode::least_squares);
  const SolveReport rep = rank_revealing
                              ? truncated_svd_solve(sys.matrix, sys.rhs, 1e-13)
                              : lu_solve(sys.matrix, sys.rhs);
  sol.solve_ms = elapsed_ms(t1);
  sol.coeffs = rep.solution;
  sol.cond2 = rep.cond2;
  return sol;
}

std::unique_ptr<ElementField> solution_field(const Solution& sol, double k) {
  if (sol.is_mfs) {
    return std::make_unique<MfsField>(&sol.poles, &sol.coeffs, k);
  }
  return std::make_unique<DiscreteField>(&sol.spaces, sol.coeffs);
}

// Schedule entries: (grid level, basis size parameter) pairs.
std::vector<std::pair<int, int>> schedule_entries(const RunConfig& cfg) {
  std::vector<std::pair<int, int>> entries;
  if (!cfg.schedule.p_values.empty()) {
    for (int p : cfg.schedule.p_values) {
      entries.push_back({cfg.schedule.levels[0], p});
    }
  } else {
    for (int n : cfg.schedule.levels) entries.push_back({n, cfg.basis.p});
  }
  return entries;
}

// Point membership with an inclusive boundary (tolerance relative to the
// polygon scale): distance-to-edge check first, then a crossing test.
bool point_in_polygon(const Polygon& poly, Vec2 p, double tol) {
  const int n = static_cast<int>(poly.size());
  bool inside = false;
  for (int i = 0, j = n - 1; i < n; j = i++) {
    const Vec2 a = poly[j], b = poly[i];
    const double abx = b.x - a.x, aby = b.y - a.y;
    const double len2 = abx * abx + aby * aby;
    if (len2 > 0.0) {
      double t = ((p.x - a.x) * abx + (p.y - a.y) * aby) / len2;
      t = std::clamp(t, 0.0, 1.0);
      if (std::hypot(a.x + t * abx - p.x, a.y + t * aby - p.y) <= tol) {
        return true;
      }
    }
    if ((a.y > p.y) != (b.y > p.y)) {
      const double xcross = a.x + (p.y - a.y) / (b.y - a.y) * (b.x - a.x);
      if (p.x < xcross) inside = !inside;
    }
  }
  return inside;
}

int locate_element(const Mesh& mesh, Vec2 p) {
  for (int e = 0; e < mesh.num_elements(); ++e) {
    const double tol = 1e-9 * std::max(1.0, mesh.metrics[e].diameter);
    if (point_in_polygon(mesh.element_polygon(e), p, tol)) return e;
  }
  return -1;
}

void write_field_csv(std::ostream& out, const Mesh& mesh,
                     const ElementField& u, int nx, int ny) {
  double bx0 = mesh.vertices[0].x, bx1 = bx0;
  double by0 = mesh.vertices[0].y, by1 = by0;
  for (const Vec2& v : mesh.vertices) {
    bx0 = std::min(bx0, v.x);
    bx1 = std::max(bx1, v.x);
    by0 = std::min(by0, v.y);
    by1 = std::max(by1, v.y);
  }
  out << "x,y,re,im,abs\n";
  for (int j = 0; j < ny; ++j) {
    const double y = ny == 1 ? 0.5 * (by0 + by1)
                             : by0 + (by1 - by0) * j / (ny - 1.0);
    for (int i = 0; i < nx; ++i) {
      const double x = nx == 1 ? 0.5 * (bx0 + bx1)
                               : bx0 + (bx1 - bx0) * i / (nx - 1.0);
      out << fmt_cell(x) << "," << fmt_cell(y) << ",";
      const int e = locate_element(mesh, {x, y});
      if (e < 0) {
        out << ",,\n";
      } else {
        const cplx v = u.value(e, {x, y});
        out << fmt_cell(v.real()) << "," << fmt_cell(v.imag()) << ","
            << fmt_cell(std::abs(v)) << "\n";
      }
    }
  }
}

void sample_grid_dims(const RunConfig& cfg, int& nx, int& ny) {
  nx = cfg.output.grid_nx > 0 ? cfg.output.grid_nx : 32;
  ny = cfg.output.grid_ny > 0 ? cfg.output.grid_ny : nx;
}

}  // namespace

void run_solve(const RunConfig& cfg, std::ostream& study, std::ostream* field) {
  validate_config(cfg);
  const double k = cfg.problem.k;
  const ExactSolution exact = make_exact(cfg.problem);

  // Error norms: the method's own flux for TDG, the neutral preset otherwise;
  // a zero-impedance problem is measured with theta = 1.
  FluxParameters norm_flux;
  if (cfg.method.name == MethodName::tdg) norm_flux = cfg.method.flux;
  const double norm_theta = cfg.problem.theta > 0.0 ? cfg.problem.theta : 1.0;
  const NormSpec tdg_spec = NormSpec::TDG(norm_flux, norm_theta);
  const NormSpec ls_spec = NormSpec::LS(cfg.method.weights, norm_theta);

  const std::vector<std::pair<int, int>> entries = schedule_entries(cfg);
  study << "level,h,p,dofs,err_L2,err_TDG,err_LS,cond2,assemble_ms,solve_ms\n";
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const Solution sol = solve_level(cfg, entries[i].first, entries[i].second);
    const std::unique_ptr<ElementField> uh = solution_field(sol, k);
    const DifferenceField diff(&exact, uh.get());

    const double err_l2 = l2_domain_error(sol.mesh, *uh, exact, k);
    const double err_tdg = skeleton_norm(sol.mesh, diff, tdg_spec, k);
    const double err_ls = skeleton_norm(sol.mesh, diff, ls_spec, k);

    study << (i + 1) << "," << fmt_cell(sol.mesh.max_diameter()) << ","
          << sol.p_param << "," << sol.dofs << "," << fmt_cell(err_l2) << ","
          << fmt_cell(err_tdg) << "," << fmt_cell(err_ls) << ","
          << fmt_cell(sol.cond2) << "," << fmt_cell(sol.assemble_ms) << ","
          << fmt_cell(sol.solve_ms) << "\n";

    if (field != nullptr && i + 1 == entries.size()) {
      int nx = 0, ny = 0;
      sample_grid_dims(cfg, nx, ny);
      write_field_csv(*field, sol.mesh, *uh, nx, ny);
    }
  }
}

void run_sweep(const RunConfig& cfg, std::ostream& out) {
  validate_config(cfg);
  if (cfg.sweep.orders.empty()) {
    throw ConfigError("config: [sweep] needs an 'orders' list");
  }
  ConditioningSweepSpec spec;
  spec.family = cfg.sweep.family == BasisFamily::pw ? "pw" : "ghp";
  spec.k = cfg.sweep.k;
  spec.h_values = cfg.sweep.h_values;
  spec.scaled_ghp = cfg.sweep.scaled;
  spec.workers = cfg.output.workers;

  std::vector<ConditioningRecord> all;
  for (int order : cfg.sweep.orders) {
    spec.orders = {order};
    const std::vector<ConditioningRecord> recs = conditioning_sweep(spec);
    all.insert(all.end(), recs.begin(), recs.end());
    const bool all_saturated =
        std::all_of(recs.begin(), recs.end(),
                    [](const ConditioningRecord& r) { return r.saturated; });
    if (all_saturated) break;  // stop growing the order past saturation
  }
  write_conditioning_csv(out, all);
}

void run_sample(const RunConfig& cfg, std::ostream& out) {
  validate_config(cfg);
  const std::vector<std::pair<int, int>> entries = schedule_entries(cfg);
  const auto [level_n, p] = entries.back();
  const Solution sol = solve_level(cfg, level_n, p);
  const std::unique_ptr<ElementField> uh = solution_field(sol, cfg.problem.k);
  int nx = 0, ny = 0;
  sample_grid_dims(cfg, nx, ny);
  write_field_csv(out, sol.mesh, *uh, nx, ny);
}

namespace {

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("config: cannot open output file '" + path + "'");
  return out;
}

}  // namespace

void run_solve_files(const RunConfig& cfg) {
  std::ofstream study = open_output(cfg.output.study_csv);
  if (!cfg.output.field_csv.empty()) {
    std::ofstream field = open_output(cfg.output.field_csv);
    run_solve(cfg, study, &field);
  } else {
    run_solve(cfg, study, nullptr);
  }
}

void run_sweep_files(const RunConfig& cfg) {
  std::ofstream out = open_output(cfg.sweep.csv);
  run_sweep(cfg, out);
}

void run_sample_files(const RunConfig& cfg) {
  const std::string path =
      cfg.output.field_csv.empty() ? "field.csv" : cfg.output.field_csv;
  std::ofstream out = open_output(path);
  run_sample(cfg, out);
}

}  // namespace trefftz
