#include "trefftz/forms.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <future>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <variant>

#include "trefftz/quadrature.hpp"
#include "trefftz/specialfn.hpp"

namespace trefftz {

namespace {

constexpr cplx kImag{0.0, 1.0};
constexpr double kPi = 3.14159265358979323846;

cplx eval_data(const BoundaryFn& g, Vec2 x) { return g ? g(x) : cplx{0.0, 0.0}; }

void validate_spaces(const Mesh& mesh, const std::vector<LocalSpace>& spaces,
                     double k) {
  if (static_cast<int>(spaces.size()) != mesh.num_elements()) {
    throw std::invalid_argument("forms: one local space per element required");
  }
  for (const LocalSpace& s : spaces) {
    if (std::abs(s.k() - k) > 1e-12 * std::max(1.0, std::abs(k))) {
      throw std::invalid_argument("forms: local space wavenumber differs from k");
    }
  }
  if (!(k > 0.0)) throw std::invalid_argument("forms: wavenumber k must be positive");
}

// Largest phase/decay rate of the traces of a family along a facet of the
// given length, used to pick quadrature node counts.
double space_trace_scale(const LocalSpace& space, double len) {
  struct Visitor {
    double k;
    double len;
    double operator()(const PlaneWaveSpec& pw) const {
      double m = 1.0;
      for (const Direction& dir : pw.directions) {
        m = std::max(m, std::abs(dir.d.x) + std::abs(dir.d.y));
      }
      return k * len * m;
    }
    double operator()(const CircularWaveSpec& c) const { return k * len + kPi * c.q; }
    double operator()(const FundamentalSpec&) const { return k * len; }
    double operator()(const MultipoleSpec& m) const { return k * len + kPi * m.q; }
    double operator()(const WaveBandSpec& w) const {
      return k * len * (std::max(1.0, w.truncation) + 1.0);
    }
    double operator()(const CornerWaveSpec& c) const {
      return k * len + kPi * c.count / c.alpha;
    }
  };
  return std::visit(Visitor{space.k(), len}, space.spec());
}

struct SegmentQuad {
  std::vector<Vec2> pts;
  std::vector<double> w;  // includes the length Jacobian
};

SegmentQuad segment_quad(Vec2 a, Vec2 b, int n) {
  const QuadratureRule& rule = gauss_legendre(n);
  SegmentQuad q;
  q.pts.resize(n);
  q.w.resize(n);
  const double len = norm(Vec2{b.x - a.x, b.y - a.y});
  for (int i = 0; i < n; ++i) {
    const double t = 0.5 * (rule.nodes[i] + 1.0);
    q.pts[i] = {a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)};
    q.w[i] = 0.5 * len * rule.weights[i];
  }
  return q;
}

// Traces of every member of a space at the quadrature points: values, normal
// derivatives and Cartesian gradient components.
struct TraceData {
  CMatrix val, dn, gx, gy;  // node x member
};

TraceData trace_data(const LocalSpace& space, const SegmentQuad& q, Vec2 normal) {
  const int n = static_cast<int>(q.pts.size());
  const int dim = space.dim();
  TraceData t{CMatrix(n, dim), CMatrix(n, dim), CMatrix(n, dim), CMatrix(n, dim)};
  for (int i = 0; i < n; ++i) {
    const BasisEval ev = space.eval(q.pts[i]);
    for (int m = 0; m < dim; ++m) {
      t.val(i, m) = ev.values[m];
      t.gx(i, m) = ev.gradients[m].x;
      t.gy(i, m) = ev.gradients[m].y;
      t.dn(i, m) = ev.gradients[m].x * normal.x + ev.gradients[m].y * normal.y;
    }
  }
  return t;
}

ExpRep member_rep(const LocalSpace& space, int member, bool conj) {
  ExpRep rep = *space.exp_rep(member);
  if (conj) {
    for (ExpTerm& t : rep) {
      t.coeff = std::conj(t.coeff);
      t.w = {std::conj(t.w.x), std::conj(t.w.y)};
    }
  }
  return rep;
}

}  // namespace

FluxPreset flux_preset_from_name(const std::string& name) {
  if (name == "h-version" || name == "h_version") return FluxPreset::h_version;
  if (name == "p-version" || name == "p_version") return FluxPreset::p_version;
  if (name == "uwvf") return FluxPreset::uwvf;
  if (name == "locally-refined" || name == "locally_refined") {
    return FluxPreset::locally_refined;
  }
  if (name == "geometric-hp" || name == "geometric_hp") {
    return FluxPreset::geometric_hp;
  }
  throw std::invalid_argument("forms: unknown flux preset '" + name + "'");
}

std::string flux_preset_name(FluxPreset preset) {
  switch (preset) {
    case FluxPreset::h_version: return "h-version";
    case FluxPreset::p_version: return "p-version";
    case FluxPreset::uwvf: return "uwvf";
    case FluxPreset::locally_refined: return "locally-refined";
    case FluxPreset::geometric_hp: return "geometric-hp";
  }
  throw std::invalid_argument("forms: invalid flux preset");
}

namespace {

FluxValues flux_eval(const FluxParameters& flux, const Mesh& mesh,
                     int facet_index, double k, double h) {
  const Facet& f = mesh.facets[facet_index];
  double h_k = mesh.metrics[f.elem1].diameter;
  if (f.kind == FacetKind::interior) {
    h_k = std::min(h_k, mesh.metrics[f.elem2].diameter);
  }
  double alpha = 0.0, beta = 0.0, delta = 0.0;
  switch (flux.preset) {
    case FluxPreset::h_version:
      alpha = flux.a / (k * h_k);
      beta = flux.b * k * h_k;
      delta = flux.d * k * h_k;
      break;
    case FluxPreset::p_version:
      alpha = flux.a;
      beta = flux.b;
      delta = flux.d;
      break;
    case FluxPreset::uwvf:
      alpha = 0.5;
      beta = 0.5;
      delta = 0.5;
      break;
    case FluxPreset::locally_refined:
      alpha = flux.a * h / h_k;
      beta = flux.b * h / h_k;
      delta = flux.d * h / h_k;
      break;
    case FluxPreset::geometric_hp:
      alpha = flux.a * h / h_k;
      beta = flux.b;
      delta = flux.d;
      break;
  }
  FluxValues out;
  const std::string where = " on facet " + std::to_string(facet_index);
  if (f.kind == FacetKind::interior || f.kind == FacetKind::dirichlet) {
    if (!(alpha > 0.0)) {
      throw std::runtime_error("forms: flux alpha must be positive" + where);
    }
    out.alpha = alpha;
  }
  if (f.kind == FacetKind::interior) {
    if (!(beta > 0.0)) {
      throw std::runtime_error("forms: flux beta must be positive" + where);
    }
    out.beta = beta;
  }
  if (f.kind == FacetKind::robin) {
    if (!(delta > 0.0 && delta <= 0.5)) {
      throw std::runtime_error("forms: flux delta must lie in (0, 1/2]" + where);
    }
    out.delta = delta;
  }
  return out;
}

}  // namespace

FluxValues flux_on_facet(const FluxParameters& flux, const Mesh& mesh,
                         int facet_index, double k) {
  return flux_eval(flux, mesh, facet_index, k, mesh.max_diameter());
}

int resolve_workers(int requested) {
  const int cap = 256;
  if (requested > 0) return std::min(requested, cap);
  if (const char* env = std::getenv("TREFFTZ_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) {
      return static_cast<int>(std::min<long>(v, cap));
    }
  }
  const unsigned hc = std::thread::hardware_concurrency();
  return hc > 0 ? static_cast<int>(std::min<unsigned>(hc, cap)) : 1;
}

FacetBlocks facet_blocks(const LocalSpace& test_space,
                         const LocalSpace& trial_space, const Mesh& mesh,
                         int facet_index, bool conj_test, bool want_gradient_dot,
                         bool force_quadrature) {
  const Facet& f = mesh.facets[facet_index];
  const Vec2 n = f.normal;
  const int nt = test_space.dim();
  const int mt = trial_space.dim();
  FacetBlocks b;
  b.vv = CMatrix(nt, mt);
  b.dv = CMatrix(nt, mt);
  b.vd = CMatrix(nt, mt);
  b.dd = CMatrix(nt, mt);
  if (want_gradient_dot) b.gg = CMatrix(nt, mt);

  const bool closed_form = !force_quadrature && test_space.is_exponential() &&
                           trial_space.is_exponential();
  if (closed_form) {
    std::vector<ExpRep> test_reps(nt), trial_reps(mt);
    for (int l = 0; l < nt; ++l) test_reps[l] = member_rep(test_space, l, conj_test);
    for (int m = 0; m < mt; ++m) trial_reps[m] = member_rep(trial_space, m, false);
    for (int l = 0; l < nt; ++l) {
      for (int m = 0; m < mt; ++m) {
        cplx vv = 0.0, dv = 0.0, vd = 0.0, dd = 0.0, gg = 0.0;
        for (const ExpTerm& ts : test_reps[l]) {
          const cplx ts_dn = ts.w.x * n.x + ts.w.y * n.y;
          for (const ExpTerm& tr : trial_reps[m]) {
            const cplx tr_dn = tr.w.x * n.x + tr.w.y * n.y;
            const cplx base = ts.coeff * tr.coeff *
                              segment_integral_exp(
                                  {ts.w.x + tr.w.x, ts.w.y + tr.w.y}, f.a, f.b);
            vv += base;
            dv += base * tr_dn;
            vd += base * ts_dn;
            dd += base * ts_dn * tr_dn;
            if (want_gradient_dot) {
              gg += base * (ts.w.x * tr.w.x + ts.w.y * tr.w.y);
            }
          }
        }
        b.vv(l, m) = vv;
        b.dv(l, m) = dv;
        b.vd(l, m) = vd;
        b.dd(l, m) = dd;
        if (want_gradient_dot) b.gg(l, m) = gg;
      }
    }
    return b;
  }

  const double scale =
      space_trace_scale(test_space, f.length) + space_trace_scale(trial_space, f.length);
  const SegmentQuad q = segment_quad(f.a, f.b, oscillation_nodes(scale));
  const TraceData trial = trace_data(trial_space, q, n);
  const bool same = &test_space == &trial_space;
  const TraceData test_own = same ? TraceData{} : trace_data(test_space, q, n);
  const TraceData& test = same ? trial : test_own;

  const int nn = static_cast<int>(q.pts.size());
  for (int i = 0; i < nn; ++i) {
    const double w = q.w[i];
    for (int l = 0; l < nt; ++l) {
      const cplx tv = conj_test ? std::conj(test.val(i, l)) : test.val(i, l);
      const cplx td = conj_test ? std::conj(test.dn(i, l)) : test.dn(i, l);
      const cplx tgx = conj_test ? std::conj(test.gx(i, l)) : test.gx(i, l);
      const cplx tgy = conj_test ? std::conj(test.gy(i, l)) : test.gy(i, l);
      for (int m = 0; m < mt; ++m) {
        b.vv(l, m) += w * tv * trial.val(i, m);
        b.dv(l, m) += w * tv * trial.dn(i, m);
        b.vd(l, m) += w * td * trial.val(i, m);
        b.dd(l, m) += w * td * trial.dn(i, m);
        if (want_gradient_dot) {
          b.gg(l, m) += w * (tgx * trial.gx(i, m) + tgy * trial.gy(i, m));
        }
      }
    }
  }
  return b;
}

std::vector<cplx> facet_data_moments(const LocalSpace& space, const Mesh& mesh,
                                     int facet_index, const BoundaryFn& g,
                                     bool deriv, bool conj_test) {
  const Facet& f = mesh.facets[facet_index];
  const int dim = space.dim();
  std::vector<cplx> out(dim, cplx{0.0, 0.0});
  if (!g) return out;
  const double scale = space_trace_scale(space, f.length) + space.k() * f.length;
  const SegmentQuad q = segment_quad(f.a, f.b, oscillation_nodes(scale));
  const TraceData t = trace_data(space, q, f.normal);
  const CMatrix& op = deriv ? t.dn : t.val;
  for (int i = 0; i < static_cast<int>(q.pts.size()); ++i) {
    const cplx gw = q.w[i] * g(q.pts[i]);
    for (int l = 0; l < dim; ++l) {
      out[l] += gw * (conj_test ? std::conj(op(i, l)) : op(i, l));
    }
  }
  return out;
}

namespace {

CMatrix combine_blocks(const FacetBlocks& b, cplx cvv, cplx cdv, cplx cvd,
                       cplx cdd, cplx cgg = cplx{0.0, 0.0}) {
  CMatrix m(b.vv.rows(), b.vv.cols());
  for (int l = 0; l < m.rows(); ++l) {
    for (int c = 0; c < m.cols(); ++c) {
      cplx v = cvv * b.vv(l, c) + cdv * b.dv(l, c) + cvd * b.vd(l, c) +
               cdd * b.dd(l, c);
      if (cgg != cplx{0.0, 0.0}) v += cgg * b.gg(l, c);
      m(l, c) = v;
    }
  }
  return m;
}

struct ScatterBlock {
  int test_elem = -1;
  int trial_elem = -1;
  CMatrix m;
};

struct FacetResult {
  std::vector<ScatterBlock> blocks;
  int rhs_elem = -1;
  std::vector<cplx> rhs;
};

// Runs per_facet over all facets (in parallel chunks when workers > 1) and
// scatters the resulting blocks serially in facet order, so assembled
// matrices are bit-identical for every worker count.
template <class PerFacet>
GlobalSystem assemble_driver(const Mesh& mesh,
                             const std::vector<LocalSpace>& spaces, int workers,
                             bool hermitian, PerFacet&& per_facet) {
  GlobalSystem sys;
  sys.dof_map.offsets = space_offsets(spaces);
  const int n = sys.dof_map.total();
  sys.matrix = CMatrix(n, n);
  sys.rhs.assign(n, cplx{0.0, 0.0});
  sys.hermitian = hermitian;

  const int nf = static_cast<int>(mesh.facets.size());
  std::vector<FacetResult> results(nf);
  const int w = std::max(1, std::min(resolve_workers(workers), nf));
  if (w <= 1 || nf <= 1) {
    for (int f = 0; f < nf; ++f) results[f] = per_facet(f);
  } else {
    std::vector<std::future<void>> futures;
    futures.reserve(w);
    for (int c = 0; c < w; ++c) {
      const int f0 = static_cast<int>(static_cast<long long>(nf) * c / w);
      const int f1 = static_cast<int>(static_cast<long long>(nf) * (c + 1) / w);
      futures.push_back(std::async(std::launch::async, [&, f0, f1]() {
        for (int f = f0; f < f1; ++f) results[f] = per_facet(f);
      }));
    }
    for (std::future<void>& fut : futures) fut.get();
  }

  for (int f = 0; f < nf; ++f) {
    for (const ScatterBlock& blk : results[f].blocks) {
      const int r0 = sys.dof_map.offsets[blk.test_elem];
      const int c0 = sys.dof_map.offsets[blk.trial_elem];
      for (int l = 0; l < blk.m.rows(); ++l) {
        for (int c = 0; c < blk.m.cols(); ++c) {
          sys.matrix(r0 + l, c0 + c) += blk.m(l, c);
        }
      }
    }
    if (results[f].rhs_elem >= 0) {
      const int r0 = sys.dof_map.offsets[results[f].rhs_elem];
      for (std::size_t l = 0; l < results[f].rhs.size(); ++l) {
        sys.rhs[r0 + static_cast<int>(l)] += results[f].rhs[l];
      }
    }
  }
  return sys;
}

}  // namespace

GlobalSystem assemble_tdg(const Mesh& mesh, const std::vector<LocalSpace>& spaces,
                          const FluxParameters& flux, const BoundaryData& data,
                          double k, const AssemblyOptions& options) {
  validate_spaces(mesh, spaces, k);
  if (!(data.theta > 0.0)) {
    throw std::invalid_argument("forms: the impedance trace formulation requires theta > 0");
  }
  const double h = mesh.max_diameter();
  const cplx ik = kImag * k;
  const double theta = data.theta;

  auto per_facet = [&](int fi) -> FacetResult {
    const Facet& f = mesh.facets[fi];
    const FluxValues fx = flux_eval(flux, mesh, fi, k, h);
    FacetResult r;
    if (f.kind == FacetKind::interior) {
      const int el[2] = {f.elem1, f.elem2};
      const double sg[2] = {1.0, -1.0};
      for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
          const FacetBlocks b =
              facet_blocks(spaces[el[i]], spaces[el[j]], mesh, fi, true, false,
                           options.force_quadrature);
          // {{u}} [[conj grad v]]_N - {{grad u}}.[[conj v]]_N
          //   + alpha ik [[u]]_N.[[conj v]]_N - beta/(ik) [[grad u]]_N [[conj grad v]]_N
          const cplx cvd = 0.5 * sg[i];
          const cplx cdv = -0.5 * sg[i];
          const cplx cvv = fx.alpha * ik * sg[i] * sg[j];
          const cplx cdd = -(fx.beta / ik) * sg[i] * sg[j];
          r.blocks.push_back({el[i], el[j], combine_blocks(b, cvv, cdv, cvd, cdd)});
        }
      }
    } else if (f.kind == FacetKind::robin) {
      const int e = f.elem1;
      const FacetBlocks b = facet_blocks(spaces[e], spaces[e], mesh, fi, true,
                                         false, options.force_quadrature);
      const double dl = fx.delta;
      const cplx cvv = (1.0 - dl) * ik * theta;
      const cplx cvd = 1.0 - dl;
      const cplx cdv = -dl;
      const cplx cdd = -dl / (ik * theta);
      r.blocks.push_back({e, e, combine_blocks(b, cvv, cdv, cvd, cdd)});
      if (data.g_R) {
        const std::vector<cplx> mv =
            facet_data_moments(spaces[e], mesh, fi, data.g_R, false, true);
        const std::vector<cplx> md =
            facet_data_moments(spaces[e], mesh, fi, data.g_R, true, true);
        r.rhs_elem = e;
        r.rhs.resize(mv.size());
        for (std::size_t l = 0; l < mv.size(); ++l) {
          r.rhs[l] = (1.0 - dl) * mv[l] - dl / (ik * theta) * md[l];
        }
      }
    } else {
      const int e = f.elem1;
      const FacetBlocks b = facet_blocks(spaces[e], spaces[e], mesh, fi, true,
                                         false, options.force_quadrature);
      // -dn(u) conj(v) + alpha ik u conj(v)
      const cplx cvv = fx.alpha * ik;
      r.blocks.push_back({e, e, combine_blocks(b, cvv, -1.0, 0.0, 0.0)});
      if (data.g_D) {
        const std::vector<cplx> mv =
            facet_data_moments(spaces[e], mesh, fi, data.g_D, false, true);
        const std::vector<cplx> md =
            facet_data_moments(spaces[e], mesh, fi, data.g_D, true, true);
        r.rhs_elem = e;
        r.rhs.resize(mv.size());
        for (std::size_t l = 0; l < mv.size(); ++l) {
          r.rhs[l] = fx.alpha * ik * mv[l] - md[l];
        }
      }
    }
    return r;
  };
  return assemble_driver(mesh, spaces, options.workers, false, per_facet);
}

GlobalSystem assemble_ls(const Mesh& mesh, const std::vector<LocalSpace>& spaces,
                         const LSWeights& weights, const BoundaryData& data,
                         double k, const AssemblyOptions& options) {
  validate_spaces(mesh, spaces, k);
  if (!(weights.sigma > 0.0) || !(weights.lambda_value(k) > 0.0)) {
    throw std::invalid_argument("forms: least-squares weights must be positive");
  }
  if (data.theta < 0.0) {
    throw std::invalid_argument("forms: impedance parameter must be nonnegative");
  }
  const double lam2 = weights.lambda_value(k) * weights.lambda_value(k);
  const double sig2 = weights.sigma * weights.sigma;
  const bool full = weights.jump_mode == GradientJumpMode::full;
  const cplx ik = kImag * k;
  const double theta = data.theta;

  auto per_facet = [&](int fi) -> FacetResult {
    const Facet& f = mesh.facets[fi];
    FacetResult r;
    if (f.kind == FacetKind::interior) {
      const int el[2] = {f.elem1, f.elem2};
      const double sg[2] = {1.0, -1.0};
      for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
          const FacetBlocks b =
              facet_blocks(spaces[el[i]], spaces[el[j]], mesh, fi, true, full,
                           options.force_quadrature);
          const double s = sg[i] * sg[j];
          const cplx cvv = lam2 * s;
          const cplx cdd = full ? cplx{0.0, 0.0} : cplx{sig2 * s, 0.0};
          const cplx cgg = full ? cplx{sig2 * s, 0.0} : cplx{0.0, 0.0};
          r.blocks.push_back(
              {el[i], el[j], combine_blocks(b, cvv, 0.0, 0.0, cdd, cgg)});
        }
      }
    } else if (f.kind == FacetKind::robin) {
      const int e = f.elem1;
      const FacetBlocks b = facet_blocks(spaces[e], spaces[e], mesh, fi, true,
                                         false, options.force_quadrature);
      // |d/dn v + ik theta v - g_R|^2 expanded into trace pairings.
      const cplx cvv = sig2 * k * k * theta * theta;
      const cplx cdv = sig2 * (-ik * theta);
      const cplx cvd = sig2 * (ik * theta);
      const cplx cdd = sig2;
      r.blocks.push_back({e, e, combine_blocks(b, cvv, cdv, cvd, cdd)});
      if (data.g_R) {
        const std::vector<cplx> mv =
            facet_data_moments(spaces[e], mesh, fi, data.g_R, false, true);
        const std::vector<cplx> md =
            facet_data_moments(spaces[e], mesh, fi, data.g_R, true, true);
        r.rhs_elem = e;
        r.rhs.resize(mv.size());
        for (std::size_t l = 0; l < mv.size(); ++l) {
          r.rhs[l] = sig2 * (md[l] - ik * theta * mv[l]);
        }
      }
    } else {
      const int e = f.elem1;
      const FacetBlocks b = facet_blocks(spaces[e], spaces[e], mesh, fi, true,
                                         false, options.force_quadrature);
      r.blocks.push_back({e, e, combine_blocks(b, lam2, 0.0, 0.0, 0.0)});
      if (data.g_D) {
        std::vector<cplx> mv =
            facet_data_moments(spaces[e], mesh, fi, data.g_D, false, true);
        for (cplx& v : mv) v *= lam2;
        r.rhs_elem = e;
        r.rhs = std::move(mv);
      }
    }
    return r;
  };
  return assemble_driver(mesh, spaces, options.workers, true, per_facet);
}

double ls_functional(const Mesh& mesh, const ElementField& field,
                     const LSWeights& weights, const BoundaryData& data,
                     double k) {
  const double lam = weights.lambda_value(k);
  const double sig = weights.sigma;
  const bool full = weights.jump_mode == GradientJumpMode::full;
  const cplx ik = kImag * k;
  double j = 0.0;
  for (const Facet& f : mesh.facets) {
    const int n =
        std::min(128, oscillation_nodes(2.0 * k * f.length) + 8);
    const SegmentQuad q = segment_quad(f.a, f.b, n);
    for (int i = 0; i < n; ++i) {
      const Vec2 x = q.pts[i];
      const double w = q.w[i];
      if (f.kind == FacetKind::interior) {
        const cplx jump = field.value(f.elem1, x) - field.value(f.elem2, x);
        j += w * lam * lam * std::norm(jump);
        const CVec2 g1 = field.gradient(f.elem1, x);
        const CVec2 g2 = field.gradient(f.elem2, x);
        if (full) {
          j += w * sig * sig * (std::norm(g1.x - g2.x) + std::norm(g1.y - g2.y));
        } else {
          const cplx dn1 = g1.x * f.normal.x + g1.y * f.normal.y;
          const cplx dn2 = g2.x * f.normal.x + g2.y * f.normal.y;
          j += w * sig * sig * std::norm(dn1 - dn2);
        }
      } else if (f.kind == FacetKind::robin) {
        const CVec2 g = field.gradient(f.elem1, x);
        const cplx dn = g.x * f.normal.x + g.y * f.normal.y;
        const cplx res = dn + ik * data.theta * field.value(f.elem1, x) -
                         eval_data(data.g_R, x);
        j += w * sig * sig * std::norm(res);
      } else {
        const cplx res = field.value(f.elem1, x) - eval_data(data.g_D, x);
        j += w * lam * lam * std::norm(res);
      }
    }
  }
  return j;
}

GlobalSystem assemble_vtcr(const Mesh& mesh, const std::vector<LocalSpace>& spaces,
                           cplx c1, cplx c2, const BoundaryData& data, double k,
                           const AssemblyOptions& options) {
  validate_spaces(mesh, spaces, k);
  if (!(data.theta > 0.0)) {
    throw std::invalid_argument("forms: ray formulation requires theta > 0");
  }
  if (!std::isfinite(c1.real()) || !std::isfinite(c1.imag()) ||
      !std::isfinite(c2.real()) || !std::isfinite(c2.imag())) {
    throw std::invalid_argument("forms: coupling constants must be finite");
  }
  const cplx ik = kImag * k;
  const double theta = data.theta;

  auto per_facet = [&](int fi) -> FacetResult {
    const Facet& f = mesh.facets[fi];
    FacetResult r;
    if (f.kind == FacetKind::interior) {
      const int el[2] = {f.elem1, f.elem2};
      const double sg[2] = {1.0, -1.0};
      for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
          const FacetBlocks b =
              facet_blocks(spaces[el[i]], spaces[el[j]], mesh, fi, true, false,
                           options.force_quadrature);
          // [[u]]_N.{{conj grad v}} - [[grad u]]_N {{conj v}}
          const cplx cvd = 0.5 * sg[j];
          const cplx cdv = -0.5 * sg[j];
          r.blocks.push_back({el[i], el[j], combine_blocks(b, 0.0, cdv, cvd, 0.0)});
        }
      }
    } else if (f.kind == FacetKind::robin) {
      const int e = f.elem1;
      const FacetBlocks b = facet_blocks(spaces[e], spaces[e], mesh, fi, true,
                                         false, options.force_quadrature);
      // c1/(ik theta) (d/dn u + ik theta u) conj(d/dn v)
      //   + c2 (d/dn u + ik theta u) conj(v)
      const cplx q1 = c1 / (ik * theta);
      const cplx cdd = q1;
      const cplx cvd = q1 * ik * theta;
      const cplx cdv = c2;
      const cplx cvv = c2 * ik * theta;
      r.blocks.push_back({e, e, combine_blocks(b, cvv, cdv, cvd, cdd)});
      if (data.g_R) {
        const std::vector<cplx> mv =
            facet_data_moments(spaces[e], mesh, fi, data.g_R, false, true);
        const std::vector<cplx> md =
            facet_data_moments(spaces[e], mesh, fi, data.g_R, true, true);
        r.rhs_elem = e;
        r.rhs.resize(mv.size());
        for (std::size_t l = 0; l < mv.size(); ++l) {
          r.rhs[l] = q1 * md[l] + c2 * mv[l];
        }
      }
    } else {
      const int e = f.elem1;
      const FacetBlocks b = facet_blocks(spaces[e], spaces[e], mesh, fi, true,
                                         false, options.force_quadrature);
      // u conj(d/dn v)
      r.blocks.push_back({e, e, combine_blocks(b, 0.0, 0.0, 1.0, 0.0)});
      if (data.g_D) {
        std::vector<cplx> md =
            facet_data_moments(spaces[e], mesh, fi, data.g_D, true, true);
        r.rhs_elem = e;
        r.rhs = std::move(md);
      }
    }
    return r;
  };
  return assemble_driver(mesh, spaces, options.workers, false, per_facet);
}

GlobalSystem assemble_wbm(const Mesh& mesh, const std::vector<LocalSpace>& spaces,
                          cplx z_int, const BoundaryData& data, double k,
                          const AssemblyOptions& options) {
  validate_spaces(mesh, spaces, k);
  if (z_int == cplx{0.0, 0.0}) {
    throw std::invalid_argument("forms: interior coupling factor must be nonzero");
  }
  if (data.theta < 0.0) {
    throw std::invalid_argument("forms: impedance parameter must be nonnegative");
  }
  const cplx ik = kImag * k;
  const double theta = data.theta;

  auto per_facet = [&](int fi) -> FacetResult {
    const Facet& f = mesh.facets[fi];
    FacetResult r;
    if (f.kind == FacetKind::interior) {
      const int el[2] = {f.elem1, f.elem2};
      const double sg[2] = {1.0, -1.0};
      for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
          const FacetBlocks b =
              facet_blocks(spaces[el[i]], spaces[el[j]], mesh, fi, false, false,
                           options.force_quadrature);
          // 2 [[grad u]]_N {{v}} + (ik/Z) [[u]]_N.[[v]]_N   (bilinear)
          const cplx cdv = sg[j];
          const cplx cvv = (ik / z_int) * sg[i] * sg[j];
          r.blocks.push_back({el[i], el[j], combine_blocks(b, cvv, cdv, 0.0, 0.0)});
        }
      }
    } else if (f.kind == FacetKind::robin) {
      const int e = f.elem1;
      const FacetBlocks b = facet_blocks(spaces[e], spaces[e], mesh, fi, false,
                                         false, options.force_quadrature);
      // (d/dn u + ik theta u) v
      r.blocks.push_back({e, e, combine_blocks(b, ik * theta, 1.0, 0.0, 0.0)});
      if (data.g_R) {
        std::vector<cplx> mv =
            facet_data_moments(spaces[e], mesh, fi, data.g_R, false, false);
        r.rhs_elem = e;
        r.rhs = std::move(mv);
      }
    } else {
      const int e = f.elem1;
      const FacetBlocks b = facet_blocks(spaces[e], spaces[e], mesh, fi, false,
                                         false, options.force_quadrature);
      // -u d/dn v
      r.blocks.push_back({e, e, combine_blocks(b, 0.0, 0.0, -1.0, 0.0)});
      if (data.g_D) {
        std::vector<cplx> md =
            facet_data_moments(spaces[e], mesh, fi, data.g_D, true, false);
        r.rhs_elem = e;
        r.rhs.resize(md.size());
        for (std::size_t l = 0; l < md.size(); ++l) r.rhs[l] = -md[l];
      }
    }
    return r;
  };
  return assemble_driver(mesh, spaces, options.workers, false, per_facet);
}

GlobalSystem assemble_single_element(const Mesh& mesh, const LocalSpace& trial,
                                     const LocalSpace& test,
                                     SingleElementMode mode,
                                     const BoundaryData& data, double k,
                                     const AssemblyOptions& options) {
  if (mesh.num_elements() != 1) {
    throw std::invalid_argument("forms: single-element scheme on a multi-element mesh");
  }
  if (std::abs(trial.k() - k) > 1e-12 * std::max(1.0, k) ||
      std::abs(test.k() - k) > 1e-12 * std::max(1.0, k)) {
    throw std::invalid_argument("forms: local space wavenumber differs from k");
  }

  GlobalSystem sys;
  sys.dof_map.offsets = {0, trial.dim()};
  sys.matrix = CMatrix(test.dim(), trial.dim());
  sys.rhs.assign(test.dim(), cplx{0.0, 0.0});
  sys.hermitian = false;

  const bool direct = mode == SingleElementMode::direct;
  for (int fi = 0; fi < static_cast<int>(mesh.facets.size()); ++fi) {
    const Facet& f = mesh.facets[fi];
    const FacetBlocks b = facet_blocks(test, trial, mesh, fi, false, false,
                                       options.force_quadrature);
    // Indirect: int_{G_D} u dn(v) - int_{G_N} dn(u) v.
    // Direct:   int_{G_D} dn(u) v - int_{G_N} u dn(v).
    CMatrix m;
    if (f.kind == FacetKind::dirichlet) {
      m = direct ? combine_blocks(b, 0.0, 1.0, 0.0, 0.0)
                 : combine_blocks(b, 0.0, 0.0, 1.0, 0.0);
      if (data.g_D) {
        const std::vector<cplx> md =
            facet_data_moments(test, mesh, fi, data.g_D, true, false);
        for (int l = 0; l < test.dim(); ++l) sys.rhs[l] += md[l];
      }
    } else {
      // Robin-tagged facets carry the Neumann datum here.
      m = direct ? combine_blocks(b, 0.0, 0.0, -1.0, 0.0)
                 : combine_blocks(b, 0.0, -1.0, 0.0, 0.0);
      if (data.g_R) {
        const std::vector<cplx> mv =
            facet_data_moments(test, mesh, fi, data.g_R, false, false);
        for (int l = 0; l < test.dim(); ++l) sys.rhs[l] -= mv[l];
      }
    }
    for (int l = 0; l < test.dim(); ++l) {
      for (int c = 0; c < trial.dim(); ++c) sys.matrix(l, c) += m(l, c);
    }
  }
  return sys;
}

GlobalSystem assemble_mfs(const std::vector<MfsSample>& samples,
                          const std::vector<Vec2>& poles,
                          const BoundaryData& data, double k, MfsMode mode) {
  const int m = static_cast<int>(samples.size());
  const int n = static_cast<int>(poles.size());
  if (n == 0) throw std::invalid_argument("forms: at least one pole required");
  if (m < n) {
    throw std::invalid_argument("forms: fewer boundary samples than poles");
  }
  if (mode == MfsMode::collocation && m != n) {
    throw std::invalid_argument("forms: collocation requires samples == poles");
  }
  if (!(k > 0.0)) throw std::invalid_argument("forms: wavenumber k must be positive");

  GlobalSystem sys;
  sys.dof_map.offsets = {0, n};
  sys.matrix = CMatrix(m, n);
  sys.rhs.assign(m, cplx{0.0, 0.0});
  sys.hermitian = false;
  const cplx ik = kImag * k;

  for (int j = 0; j < m; ++j) {
    const MfsSample& s = samples[j];
    for (int l = 0; l < n; ++l) {
      const double dx = s.point.x - poles[l].x;
      const double dy = s.point.y - poles[l].y;
      const double r = std::hypot(dx, dy);
      if (!(r > 0.0)) {
        throw std::domain_error("forms: pole coincides with a boundary sample");
      }
      const HankelEval h0 = hankel1(0, k * r);
      if (s.kind == FacetKind::robin) {
        const double rn = (dx * s.normal.x + dy * s.normal.y) / r;
        sys.matrix(j, l) = h0.derivative * k * rn + ik * data.theta * h0.value;
      } else {
        sys.matrix(j, l) = h0.value;
      }
    }
    sys.rhs[j] = s.kind == FacetKind::robin ? eval_data(data.g_R, s.point)
                                            : eval_data(data.g_D, s.point);
  }
  return sys;
}

std::vector<MfsSample> mfs_samples_from_mesh(const Mesh& mesh, int per_facet) {
  if (per_facet < 1) {
    throw std::invalid_argument("forms: at least one sample per facet required");
  }
  std::vector<MfsSample> out;
  for (const Facet& f : mesh.facets) {
    if (f.kind == FacetKind::interior) continue;
    for (int i = 0; i < per_facet; ++i) {
      const double t = (i + 0.5) / per_facet;
      MfsSample s;
      s.point = {f.a.x + t * (f.b.x - f.a.x), f.a.y + t * (f.b.y - f.a.y)};
      s.normal = f.normal;
      s.kind = f.kind;
      out.push_back(s);
    }
  }
  return out;
}

CMatrix element_boundary_gram(const LocalSpace& space, const Mesh& mesh,
                              int elem, bool force_quadrature) {
  const int dim = space.dim();
  CMatrix g(dim, dim);
  for (int fi = 0; fi < static_cast<int>(mesh.facets.size()); ++fi) {
    const Facet& f = mesh.facets[fi];
    if (f.elem1 != elem && f.elem2 != elem) continue;
    const FacetBlocks b =
        facet_blocks(space, space, mesh, fi, true, false, force_quadrature);
    for (int l = 0; l < dim; ++l) {
      for (int m = 0; m < dim; ++m) g(l, m) += b.vv(l, m);
    }
  }
  return g;
}

}  // namespace trefftz
