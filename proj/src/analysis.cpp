#include "trefftz/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <future>
#include <limits>
#include <ostream>
#include <random>
#include <stdexcept>

#include "trefftz/quadrature.hpp"

namespace trefftz {

namespace {

constexpr cplx kImag{0.0, 1.0};
constexpr double kPi = 3.14159265358979323846;
constexpr double kSaturation = 1e15;

int ghp_member_index(int order) {
  if (order == 0) return 0;
  return order > 0 ? 2 * order - 1 : -2 * order;
}

}  // namespace

// ---------------------------------------------------------------------------
// ExactSolution
// ---------------------------------------------------------------------------

ExactSolution ExactSolution::plane_wave(double k, Vec2 direction) {
  LocalSpace space(k, {0.0, 0.0},
                   PlaneWaveSpec{{make_direction(direction.x, direction.y)}});
  return ExactSolution(Kind::plane_wave, std::move(space), 0);
}

ExactSolution ExactSolution::fourier_bessel(double k, Vec2 center, int order) {
  LocalSpace space(k, center,
                   CircularWaveSpec{std::abs(order), false, 1.0});
  return ExactSolution(Kind::fourier_bessel, std::move(space),
                       ghp_member_index(order));
}

ExactSolution ExactSolution::fundamental(double k, Vec2 pole) {
  LocalSpace space(k, pole, FundamentalSpec{{pole}});
  return ExactSolution(Kind::fundamental, std::move(space), 0);
}

cplx ExactSolution::value(int, Vec2 x) const {
  return space_.eval(x).values[member_];
}

CVec2 ExactSolution::gradient(int, Vec2 x) const {
  return space_.eval(x).gradients[member_];
}

// ---------------------------------------------------------------------------
// NormSpec
// ---------------------------------------------------------------------------

NormSpec NormSpec::LambdaSigma(double lambda, double sigma, double theta) {
  NormSpec s;
  s.kind = Kind::lambda_sigma;
  s.weights.lambda = lambda;
  s.weights.sigma = sigma;
  s.theta = theta;
  return s;
}

NormSpec NormSpec::TDG(const FluxParameters& flux, double theta) {
  NormSpec s;
  s.kind = Kind::tdg;
  s.flux = flux;
  s.theta = theta;
  return s;
}

NormSpec NormSpec::TDGplus(const FluxParameters& flux, double theta) {
  NormSpec s;
  s.kind = Kind::tdg_plus;
  s.flux = flux;
  s.theta = theta;
  return s;
}

NormSpec NormSpec::LS(const LSWeights& weights, double theta) {
  NormSpec s;
  s.kind = Kind::ls;
  s.weights = weights;
  s.theta = theta;
  return s;
}

NormSpec NormSpec::L2domain() {
  NormSpec s;
  s.kind = Kind::l2_domain;
  return s;
}

// ---------------------------------------------------------------------------
// Skeleton norms
// ---------------------------------------------------------------------------

namespace {

enum class TraceOp {
  jump_val,   // v|K1 - v|K2
  jump_dn,    // normal jump of the gradient (facet normal)
  jump_gx,    // full gradient jump, x component
  jump_gy,
  avg_val,
  avg_gx,
  avg_gy,
  bnd_val,
  bnd_dn,
  robin_op,   // dn v + ik theta v
};

struct NormTerm {
  double weight = 0.0;  // multiplies |op(v)|^2
  TraceOp op = TraceOp::bnd_val;
  cplx robin_coeff;     // ik theta for robin_op
};

void validate_norm_spec(const NormSpec& spec, double k) {
  switch (spec.kind) {
    case NormSpec::Kind::lambda_sigma:
    case NormSpec::Kind::ls:
      if (!(spec.weights.lambda_value(k) > 0.0) || !(spec.weights.sigma > 0.0)) {
        throw std::invalid_argument("analysis: norm weights must be positive");
      }
      if (spec.theta < 0.0) {
        throw std::invalid_argument("analysis: impedance parameter must be nonnegative");
      }
      break;
    case NormSpec::Kind::tdg:
    case NormSpec::Kind::tdg_plus:
      if (!(spec.theta > 0.0)) {
        throw std::invalid_argument("analysis: flux-weighted norms require theta > 0");
      }
      break;
    case NormSpec::Kind::l2_domain:
      break;
  }
}

std::vector<NormTerm> facet_norm_terms(const NormSpec& spec, const Mesh& mesh,
                                       int fi, double k) {
  const Facet& f = mesh.facets[fi];
  const cplx ik_theta = kImag * k * spec.theta;
  std::vector<NormTerm> terms;
  switch (spec.kind) {
    case NormSpec::Kind::lambda_sigma:
    case NormSpec::Kind::ls: {
      const double lam2 = spec.weights.lambda_value(k) * spec.weights.lambda_value(k);
      const double sig2 = spec.weights.sigma * spec.weights.sigma;
      const bool full = spec.kind == NormSpec::Kind::ls &&
                        spec.weights.jump_mode == GradientJumpMode::full;
      if (f.kind == FacetKind::interior) {
        terms.push_back({lam2, TraceOp::jump_val, {}});
        if (full) {
          terms.push_back({sig2, TraceOp::jump_gx, {}});
          terms.push_back({sig2, TraceOp::jump_gy, {}});
        } else {
          terms.push_back({sig2, TraceOp::jump_dn, {}});
        }
      } else if (f.kind == FacetKind::robin) {
        terms.push_back({sig2, TraceOp::robin_op, ik_theta});
      } else {
        terms.push_back({lam2, TraceOp::bnd_val, {}});
      }
      break;
    }
    case NormSpec::Kind::tdg:
    case NormSpec::Kind::tdg_plus: {
      const FluxValues fx = flux_on_facet(spec.flux, mesh, fi, k);
      const bool plus = spec.kind == NormSpec::Kind::tdg_plus;
      if (f.kind == FacetKind::interior) {
        terms.push_back({fx.beta / k, TraceOp::jump_dn, {}});
        terms.push_back({fx.alpha * k, TraceOp::jump_val, {}});
        if (plus) {
          terms.push_back({k / fx.beta, TraceOp::avg_val, {}});
          terms.push_back({1.0 / (fx.alpha * k), TraceOp::avg_gx, {}});
          terms.push_back({1.0 / (fx.alpha * k), TraceOp::avg_gy, {}});
        }
      } else if (f.kind == FacetKind::robin) {
        terms.push_back({fx.delta / (k * spec.theta), TraceOp::bnd_dn, {}});
        terms.push_back({(1.0 - fx.delta) * k * spec.theta, TraceOp::bnd_val, {}});
        if (plus) {
          terms.push_back({k * spec.theta / fx.delta, TraceOp::bnd_val, {}});
        }
      } else {
        terms.push_back({fx.alpha * k, TraceOp::bnd_val, {}});
        if (plus) {
          terms.push_back({1.0 / (fx.alpha * k), TraceOp::bnd_dn, {}});
        }
      }
      break;
    }
    case NormSpec::Kind::l2_domain:
      break;
  }
  return terms;
}

struct FacetPointTraces {
  cplx v1, v2;
  CVec2 g1, g2;
  bool interior = false;
  Vec2 n;
};

cplx apply_trace_op(const NormTerm& t, const FacetPointTraces& p) {
  switch (t.op) {
    case TraceOp::jump_val: return p.v1 - p.v2;
    case TraceOp::jump_dn:
      return (p.g1.x - p.g2.x) * p.n.x + (p.g1.y - p.g2.y) * p.n.y;
    case TraceOp::jump_gx: return p.g1.x - p.g2.x;
    case TraceOp::jump_gy: return p.g1.y - p.g2.y;
    case TraceOp::avg_val: return 0.5 * (p.v1 + p.v2);
    case TraceOp::avg_gx: return 0.5 * (p.g1.x + p.g2.x);
    case TraceOp::avg_gy: return 0.5 * (p.g1.y + p.g2.y);
    case TraceOp::bnd_val: return p.v1;
    case TraceOp::bnd_dn: return p.g1.x * p.n.x + p.g1.y * p.n.y;
    case TraceOp::robin_op:
      return p.g1.x * p.n.x + p.g1.y * p.n.y + t.robin_coeff * p.v1;
  }
  return {};
}

int facet_node_count(double k, double len, int min_nodes) {
  const int n = std::min(128, oscillation_nodes(2.0 * k * len) + 8);
  return std::clamp(std::max(n, min_nodes), 1, 128);
}

}  // namespace

double skeleton_norm(const Mesh& mesh, const ElementField& v,
                     const NormSpec& spec, double k, int min_nodes) {
  if (!(k > 0.0)) throw std::invalid_argument("analysis: wavenumber k must be positive");
  validate_norm_spec(spec, k);
  if (spec.kind == NormSpec::Kind::l2_domain) {
    return l2_volume_norm(mesh, v, k, min_nodes);
  }
  double acc = 0.0;
  for (int fi = 0; fi < static_cast<int>(mesh.facets.size()); ++fi) {
    const Facet& f = mesh.facets[fi];
    const std::vector<NormTerm> terms = facet_norm_terms(spec, mesh, fi, k);
    if (terms.empty()) continue;
    const int n = facet_node_count(k, f.length, min_nodes);
    const QuadratureRule& rule = gauss_legendre(n);
    for (int i = 0; i < n; ++i) {
      const double t = 0.5 * (rule.nodes[i] + 1.0);
      const Vec2 x{f.a.x + t * (f.b.x - f.a.x), f.a.y + t * (f.b.y - f.a.y)};
      const double w = 0.5 * f.length * rule.weights[i];
      FacetPointTraces p;
      p.n = f.normal;
      p.interior = f.kind == FacetKind::interior;
      p.v1 = v.value(f.elem1, x);
      p.g1 = v.gradient(f.elem1, x);
      if (p.interior) {
        p.v2 = v.value(f.elem2, x);
        p.g2 = v.gradient(f.elem2, x);
      }
      for (const NormTerm& term : terms) {
        acc += w * term.weight * std::norm(apply_trace_op(term, p));
      }
    }
  }
  return std::sqrt(acc);
}

double l2_volume_norm(const Mesh& mesh, const ElementField& v, double k,
                      int nodes) {
  if (!(k > 0.0)) throw std::invalid_argument("analysis: wavenumber k must be positive");
  double acc = 0.0;
  for (int e = 0; e < mesh.num_elements(); ++e) {
    const int n = nodes > 0
                      ? std::min(nodes, 128)
                      : std::min(96, oscillation_nodes(
                                         2.0 * k * mesh.metrics[e].diameter));
    const cplx integral = polygon_integral(
        [&](Vec2 x) { return cplx{std::norm(v.value(e, x)), 0.0}; },
        mesh.element_polygon(e), n);
    acc += integral.real();
  }
  return std::sqrt(std::max(0.0, acc));
}

double l2_domain_error(const Mesh& mesh, const ElementField& u_h,
                       const ElementField& u, double k, int nodes) {
  const DifferenceField diff(&u_h, &u);
  const double num = l2_volume_norm(mesh, diff, k, nodes);
  const double den = l2_volume_norm(mesh, u, k, nodes);
  if (!(den > 0.0)) {
    throw std::runtime_error("analysis: exact solution has zero norm");
  }
  return num / den;
}

// ---------------------------------------------------------------------------
// Convergence and stability diagnostics
// ---------------------------------------------------------------------------

std::vector<double> eoc(const std::vector<std::pair<double, double>>& records) {
  if (records.size() < 2) {
    throw std::invalid_argument("analysis: at least two (h, error) records required");
  }
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (!(records[i].first > 0.0)) {
      throw std::invalid_argument("analysis: mesh sizes must be positive");
    }
    if (!(records[i].second > 0.0)) {
      throw std::invalid_argument("analysis: errors must be positive");
    }
    if (i > 0 && !(records[i].first < records[i - 1].first)) {
      throw std::invalid_argument("analysis: mesh sizes must decrease strictly");
    }
  }
  std::vector<double> orders;
  for (std::size_t i = 0; i + 1 < records.size(); ++i) {
    orders.push_back(std::log(records[i].second / records[i + 1].second) /
                     std::log(records[i].first / records[i + 1].first));
  }
  return orders;
}

double mow_ratio(const Mesh& mesh, const std::vector<LocalSpace>& spaces,
                 double lambda, double sigma, double theta, int trials,
                 unsigned seed) {
  if (spaces.empty() || static_cast<int>(spaces.size()) != mesh.num_elements()) {
    throw std::invalid_argument("analysis: one local space per element required");
  }
  if (!(lambda > 0.0) || !(sigma > 0.0)) {
    throw std::invalid_argument("analysis: lambda and sigma must be positive");
  }
  if (trials < 1) throw std::invalid_argument("analysis: at least one trial required");
  const double k = spaces[0].k();
  const NormSpec spec = NormSpec::LambdaSigma(lambda, sigma, theta);
  const std::vector<int> off = space_offsets(spaces);
  std::mt19937 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  double sup = 0.0;
  for (int t = 0; t < trials; ++t) {
    std::vector<cplx> c(off.back());
    for (cplx& z : c) z = cplx{gauss(rng), gauss(rng)} / std::sqrt(2.0);
    const DiscreteField v(&spaces, std::move(c));
    const double l2 = l2_volume_norm(mesh, v, k);
    const double sk = skeleton_norm(mesh, v, spec, k);
    if (!(sk > 0.0) || !std::isfinite(l2 / sk)) {
      throw std::runtime_error(
          "analysis: zero or invalid skeleton norm for a random discrete field");
    }
    sup = std::max(sup, l2 / sk);
  }
  return sup;
}

double best_approximation_error(const Mesh& mesh,
                                const std::vector<LocalSpace>& spaces,
                                const ElementField& u, const NormSpec& spec,
                                double k) {
  if (spec.kind == NormSpec::Kind::l2_domain) {
    throw std::invalid_argument("analysis: best approximation needs a skeleton norm");
  }
  if (static_cast<int>(spaces.size()) != mesh.num_elements()) {
    throw std::invalid_argument("analysis: one local space per element required");
  }
  validate_norm_spec(spec, k);
  const std::vector<int> off = space_offsets(spaces);
  const int n = off.back();
  CMatrix gram(n, n);
  std::vector<cplx> rhs(n, cplx{0.0, 0.0});

  for (int fi = 0; fi < static_cast<int>(mesh.facets.size()); ++fi) {
    const Facet& f = mesh.facets[fi];
    const std::vector<NormTerm> terms = facet_norm_terms(spec, mesh, fi, k);
    if (terms.empty()) continue;
    const bool interior = f.kind == FacetKind::interior;
    std::vector<int> dofs;
    for (int m = 0; m < spaces[f.elem1].dim(); ++m) dofs.push_back(off[f.elem1] + m);
    if (interior) {
      for (int m = 0; m < spaces[f.elem2].dim(); ++m) dofs.push_back(off[f.elem2] + m);
    }
    const int nd = static_cast<int>(dofs.size());
    const int d1 = spaces[f.elem1].dim();

    const int nq = facet_node_count(k, f.length, 0);
    const QuadratureRule& rule = gauss_legendre(nq);
    std::vector<cplx> row(nd);
    for (int i = 0; i < nq; ++i) {
      const double t = 0.5 * (rule.nodes[i] + 1.0);
      const Vec2 x{f.a.x + t * (f.b.x - f.a.x), f.a.y + t * (f.b.y - f.a.y)};
      const double w = 0.5 * f.length * rule.weights[i];
      const BasisEval e1 = spaces[f.elem1].eval(x);
      const BasisEval e2 = interior ? spaces[f.elem2].eval(x) : BasisEval{};
      FacetPointTraces up;
      up.n = f.normal;
      up.interior = interior;
      up.v1 = u.value(f.elem1, x);
      up.g1 = u.gradient(f.elem1, x);
      if (interior) {
        up.v2 = u.value(f.elem2, x);
        up.g2 = u.gradient(f.elem2, x);
      }
      for (const NormTerm& term : terms) {
        for (int a = 0; a < nd; ++a) {
          FacetPointTraces bp;
          bp.n = f.normal;
          bp.interior = interior;
          if (a < d1) {
            bp.v1 = e1.values[a];
            bp.g1 = e1.gradients[a];
          } else {
            bp.v2 = e2.values[a - d1];
            bp.g2 = e2.gradients[a - d1];
          }
          row[a] = apply_trace_op(term, bp);
        }
        const cplx uval = apply_trace_op(term, up);
        for (int a = 0; a < nd; ++a) {
          const cplx ca = std::conj(row[a]) * (w * term.weight);
          rhs[dofs[a]] += ca * uval;
          for (int b = 0; b < nd; ++b) {
            gram(dofs[a], dofs[b]) += ca * row[b];
          }
        }
      }
    }
  }

  const SolveReport rep = truncated_svd_solve(gram, rhs, 1e-13);
  const DiscreteField vh(&spaces, rep.solution);
  const DifferenceField diff(&u, &vh);
  return skeleton_norm(mesh, diff, spec, k);
}

// ---------------------------------------------------------------------------
// Conditioning study
// ---------------------------------------------------------------------------

CMatrix pw_mass_matrix(double side, Vec2 center, double k,
                       const std::vector<Direction>& directions) {
  if (!(side > 0.0)) throw std::invalid_argument("analysis: square side must be positive");
  if (!(k > 0.0)) throw std::invalid_argument("analysis: wavenumber k must be positive");
  const int p = static_cast<int>(directions.size());
  if (p == 0) throw std::invalid_argument("analysis: at least one direction required");
  for (int l = 0; l < p; ++l) {
    for (int m = l + 1; m < p; ++m) {
      const cplx dx = directions[l].d.x - directions[m].d.x;
      const cplx dy = directions[l].d.y - directions[m].d.y;
      if (std::abs(dx) + std::abs(dy) < 1e-12) {
        throw std::invalid_argument("analysis: directions must be distinct");
      }
    }
  }
  const double s2 = 0.5 * side;
  const Polygon square{{center.x - s2, center.y - s2},
                       {center.x + s2, center.y - s2},
                       {center.x + s2, center.y + s2},
                       {center.x - s2, center.y + s2}};
  CMatrix m(p, p);
  for (int l = 0; l < p; ++l) {
    m(l, l) = side * side;  // exactly the area
    for (int c = 0; c < p; ++c) {
      if (c == l) continue;
      const CVec2 w{kImag * k * (directions[l].d.x - directions[c].d.x),
                    kImag * k * (directions[l].d.y - directions[c].d.y)};
      const cplx shift = std::exp(-(w.x * center.x + w.y * center.y));
      m(l, c) = shift * polygon_integral_exp(w, square);
    }
  }
  return m;
}

namespace {

CMatrix square_volume_gram(const LocalSpace& space, double side, Vec2 center,
                           int n) {
  const QuadratureRule& rule = gauss_legendre(n);
  const int dim = space.dim();
  CMatrix g(dim, dim);
  const double s2 = 0.5 * side;
  for (int ix = 0; ix < n; ++ix) {
    for (int iy = 0; iy < n; ++iy) {
      const Vec2 x{center.x + s2 * rule.nodes[ix], center.y + s2 * rule.nodes[iy]};
      const double w = s2 * s2 * rule.weights[ix] * rule.weights[iy];
      const BasisEval ev = space.eval(x);
      for (int l = 0; l < dim; ++l) {
        const cplx cl = std::conj(ev.values[l]) * w;
        for (int m = 0; m < dim; ++m) g(l, m) += cl * ev.values[m];
      }
    }
  }
  return g;
}

ConditioningRecord sweep_point(const ConditioningSweepSpec& spec, int order,
                               double h) {
  ConditioningRecord rec;
  rec.family = spec.family;
  rec.p_or_q = order;
  rec.k = spec.k;
  rec.h = h;
  rec.kh = spec.k * h;
  if (spec.family == "pw") {
    const CMatrix m =
        pw_mass_matrix(h, {0.0, 0.0}, spec.k, equispaced_directions(order));
    rec.cond2 = svd_cond(m);
  } else {
    // The sweep's cell size h is the square side; it is also the length used
    // in the scaling argument k*h, matching the kh the record reports.
    const LocalSpace space(spec.k, {0.0, 0.0},
                           CircularWaveSpec{order, spec.scaled_ghp, h});
    const int n = std::min(
        128, oscillation_nodes(2.0 * spec.k * h + 2.0 * kPi * order));
    rec.cond2 = svd_cond(square_volume_gram(space, h, {0.0, 0.0}, n));
  }
  rec.saturated = !std::isfinite(rec.cond2) || rec.cond2 > kSaturation;
  return rec;
}

}  // namespace

std::vector<ConditioningRecord> conditioning_sweep(const ConditioningSweepSpec& spec) {
  if (spec.family != "pw" && spec.family != "ghp") {
    throw std::invalid_argument("analysis: family must be 'pw' or 'ghp'");
  }
  if (spec.orders.empty() || spec.h_values.empty()) {
    throw std::invalid_argument("analysis: sweep needs orders and h values");
  }
  if (!(spec.k > 0.0)) {
    throw std::invalid_argument("analysis: wavenumber k must be positive");
  }
  for (int order : spec.orders) {
    if (spec.family == "pw" ? order < 1 : order < 0) {
      throw std::invalid_argument("analysis: invalid order in sweep");
    }
  }
  for (double h : spec.h_values) {
    if (!(h > 0.0)) throw std::invalid_argument("analysis: invalid h in sweep");
  }

  struct Point {
    int order;
    double h;
  };
  std::vector<Point> grid;
  for (int order : spec.orders) {
    for (double h : spec.h_values) grid.push_back({order, h});
  }
  std::vector<ConditioningRecord> records(grid.size());
  const int w = std::max(
      1, std::min<int>(resolve_workers(spec.workers), static_cast<int>(grid.size())));
  if (w <= 1) {
    for (std::size_t i = 0; i < grid.size(); ++i) {
      records[i] = sweep_point(spec, grid[i].order, grid[i].h);
    }
  } else {
    std::vector<std::future<void>> futures;
    const int total = static_cast<int>(grid.size());
    for (int c = 0; c < w; ++c) {
      const int i0 = static_cast<int>(static_cast<long long>(total) * c / w);
      const int i1 = static_cast<int>(static_cast<long long>(total) * (c + 1) / w);
      futures.push_back(std::async(std::launch::async, [&, i0, i1]() {
        for (int i = i0; i < i1; ++i) {
          records[i] = sweep_point(spec, grid[i].order, grid[i].h);
        }
      }));
    }
    for (std::future<void>& f : futures) f.get();
  }
  return records;
}

void write_conditioning_csv(std::ostream& out,
                            const std::vector<ConditioningRecord>& records) {
  out << "family,p_or_q,k,h,kh,cond2,saturated\n";
  char buf[160];
  for (const ConditioningRecord& r : records) {
    std::snprintf(buf, sizeof(buf), "%s,%d,%.12g,%.12g,%.12g,%.12g,%d\n",
                  r.family.c_str(), r.p_or_q, r.k, r.h, r.kh, r.cond2,
                  r.saturated ? 1 : 0);
    out << buf;
  }
}

}  // namespace trefftz
