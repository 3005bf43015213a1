#include "trefftz/basis.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "trefftz/specialfn.hpp"

namespace trefftz {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr cplx kI{0.0, 1.0};

[[noreturn]] void fail(const std::string& msg) {
  throw std::invalid_argument("basis: " + msg);
}

// Signed circular order for member index i: 0, 1, -1, 2, -2, ...
int signed_order(int i) { return (i % 2 == 1) ? (i + 1) / 2 : -(i / 2); }

// J_l / H_l for signed integer order from the nonnegative-order sequence.
double signed_sym(int l) { return (l >= 0 || l % 2 == 0) ? 1.0 : -1.0; }

struct Polar {
  double r;
  double theta;
  Vec2 rhat;
  Vec2 that;
};

Polar polar_about(Vec2 x, Vec2 c) {
  const Vec2 d = x - c;
  Polar p;
  p.r = norm(d);
  p.theta = std::atan2(d.y, d.x);
  if (p.r > 0.0) {
    p.rhat = {d.x / p.r, d.y / p.r};
    p.that = {-d.y / p.r, d.x / p.r};
  }
  return p;
}

int wave_band_j_count(double n, double k, double len) {
  return static_cast<int>(std::floor(n * k * len / kPi)) + 1;
}

// Wave numbers (a along the cosine axis, b along the exponential axis) of
// wave-band member (j, sign).
std::pair<double, cplx> wave_band_numbers(double k, double len, int j,
                                          int sign) {
  const double a = j * kPi / len;
  const cplx b = std::sqrt(cplx(k * k - a * a, 0.0));  // Im >= 0 branch
  return {a, static_cast<double>(sign) * b};
}

}  // namespace

Direction make_direction(cplx dx, cplx dy) {
  const cplx dd = dx * dx + dy * dy;
  if (std::abs(dd - 1.0) > 1e-12) {
    fail("direction must satisfy d.d = 1 (bilinear)");
  }
  return {{dx, dy}};
}

std::vector<Direction> equispaced_directions(int p) {
  if (p < 1) fail("equispaced_directions: p must be >= 1");
  std::vector<Direction> dirs;
  dirs.reserve(p);
  for (int l = 0; l < p; ++l) {
    const double a = 2.0 * kPi * l / p;
    dirs.push_back({{std::cos(a), std::sin(a)}});
  }
  return dirs;
}

LocalSpace::LocalSpace(double k, Vec2 center, Spec spec)
    : k_(k), center_(center), spec_(std::move(spec)) {
  if (!(k > 0.0)) fail("wavenumber must be positive");
  if (const auto* pw = std::get_if<PlaneWaveSpec>(&spec_)) {
    if (pw->directions.empty()) fail("plane-wave space needs >= 1 direction");
    for (std::size_t i = 0; i < pw->directions.size(); ++i) {
      for (std::size_t j = i + 1; j < pw->directions.size(); ++j) {
        if (norm(pw->directions[i].d - pw->directions[j].d) <= 1e-10) {
          fail("plane-wave directions must be pairwise distinct");
        }
      }
    }
  } else if (const auto* cw = std::get_if<CircularWaveSpec>(&spec_)) {
    if (cw->q < 0) fail("circular-wave degree must be >= 0");
    if (cw->scaled && !(cw->h_for_scaling > 0.0)) {
      fail("circular-wave scaling radius must be positive");
    }
  } else if (const auto* fs = std::get_if<FundamentalSpec>(&spec_)) {
    if (fs->poles.empty()) fail("fundamental-solution space needs >= 1 pole");
  } else if (const auto* mp = std::get_if<MultipoleSpec>(&spec_)) {
    if (mp->q < 0) fail("multipole degree must be >= 0");
  } else if (const auto* wb = std::get_if<WaveBandSpec>(&spec_)) {
    if (!(wb->truncation > 0.0)) fail("wave-band truncation must be positive");
    if (!(wb->lx > 0.0) || !(wb->ly > 0.0)) fail("wave-band box must be positive");
  } else if (const auto* cn = std::get_if<CornerWaveSpec>(&spec_)) {
    if (!(cn->alpha > 0.0) || !(cn->alpha < 2.0)) {
      fail("corner opening alpha must lie in (0, 2)");
    }
    if (cn->count < 1) fail("corner-wave count must be >= 1");
  }
}

int LocalSpace::dim() const {
  if (const auto* pw = std::get_if<PlaneWaveSpec>(&spec_)) {
    return static_cast<int>(pw->directions.size());
  }
  if (const auto* cw = std::get_if<CircularWaveSpec>(&spec_)) {
    return 2 * cw->q + 1;
  }
  if (const auto* fs = std::get_if<FundamentalSpec>(&spec_)) {
    return static_cast<int>(fs->poles.size());
  }
  if (const auto* mp = std::get_if<MultipoleSpec>(&spec_)) {
    return 2 * mp->q + 1;
  }
  if (const auto* wb = std::get_if<WaveBandSpec>(&spec_)) {
    return 2 * wave_band_j_count(wb->truncation, k_, wb->lx) +
           2 * wave_band_j_count(wb->truncation, k_, wb->ly);
  }
  return std::get<CornerWaveSpec>(spec_).count;
}

bool LocalSpace::is_exponential() const {
  return std::holds_alternative<PlaneWaveSpec>(spec_) ||
         std::holds_alternative<WaveBandSpec>(spec_);
}

std::optional<ExpRep> LocalSpace::exp_rep(int member) const {
  if (const auto* pw = std::get_if<PlaneWaveSpec>(&spec_)) {
    const CVec2 w = (kI * k_) * pw->directions[member].d;
    return ExpRep{{std::exp(-dot(w, center_)), w}};
  }
  if (const auto* wb = std::get_if<WaveBandSpec>(&spec_)) {
    const int nx = wave_band_j_count(wb->truncation, k_, wb->lx);
    int j = member / 2;
    const int sign = (member % 2 == 0) ? 1 : -1;
    const bool xset = j < nx;
    if (!xset) j -= nx;
    const auto [a, b] =
        wave_band_numbers(k_, xset ? wb->lx : wb->ly, j, sign);
    // cos(a t) e^{i b s} = 1/2 e^{i(a t + b s)} + 1/2 e^{i(-a t + b s)}
    CVec2 w1 = xset ? CVec2{kI * a, kI * b} : CVec2{kI * b, kI * a};
    CVec2 w2 = xset ? CVec2{-kI * a, kI * b} : CVec2{kI * b, -kI * a};
    return ExpRep{{0.5 * std::exp(-dot(w1, center_)), w1},
                  {0.5 * std::exp(-dot(w2, center_)), w2}};
  }
  return std::nullopt;
}

BasisEval LocalSpace::eval(Vec2 x) const {
  const int p = dim();
  BasisEval out;
  out.values.resize(p);
  out.gradients.resize(p);

  if (const auto* pw = std::get_if<PlaneWaveSpec>(&spec_)) {
    for (int m = 0; m < p; ++m) {
      const CVec2 w = (kI * k_) * pw->directions[m].d;
      const cplx v = std::exp(dot(w, x - center_));
      out.values[m] = v;
      out.gradients[m] = v * w;
    }
    return out;
  }

  if (const auto* cw = std::get_if<CircularWaveSpec>(&spec_)) {
    const Polar pol = polar_about(x, center_);
    std::vector<double> scale(static_cast<std::size_t>(cw->q) + 1, 1.0);
    if (cw->scaled) {
      for (int l = 0; l <= cw->q; ++l) {
        const BesselEval b = bessel_j(l, k_ * cw->h_for_scaling);
        scale[l] = 1.0 / (k_ * std::hypot(b.derivative, b.value));
      }
    }
    if (pol.r == 0.0) {
      for (int m = 0; m < p; ++m) {
        const int l = signed_order(m);
        out.values[m] = (l == 0) ? 1.0 : 0.0;
        out.gradients[m] = {0.0, 0.0};
        if (l == 1) out.gradients[m] = {0.5 * k_, 0.5 * kI * k_};
        if (l == -1) out.gradients[m] = {-0.5 * k_, 0.5 * kI * k_};
        const double s = scale[std::abs(l)];
        out.values[m] *= s;
        out.gradients[m] = cplx(s) * out.gradients[m];
      }
      return out;
    }
    const std::vector<double> j = bessel_j_sequence(cw->q + 1, k_ * pol.r);
    for (int m = 0; m < p; ++m) {
      const int l = signed_order(m);
      const int al = std::abs(l);
      const double sym = signed_sym(l);
      const double jl = sym * j[al];
      const double jlp =
          sym * 0.5 * ((al >= 1 ? j[al - 1] : -j[1]) - j[al + 1]);
      const cplx ang = std::exp(kI * static_cast<double>(l) * pol.theta);
      const double s = scale[al];
      out.values[m] = s * jl * ang;
      const cplx dr = s * k_ * jlp * ang;
      const cplx dt = s * (kI * static_cast<double>(l) / pol.r) * jl * ang;
      out.gradients[m] = dr * to_cvec(pol.rhat) + dt * to_cvec(pol.that);
    }
    return out;
  }

  if (const auto* fs = std::get_if<FundamentalSpec>(&spec_)) {
    for (int m = 0; m < p; ++m) {
      const Polar pol = polar_about(x, fs->poles[m]);
      if (pol.r <= 1e-150) {
        throw std::domain_error("basis: evaluation at a fundamental-solution pole");
      }
      const HankelEval h = hankel1(0, k_ * pol.r);
      out.values[m] = h.value;
      out.gradients[m] = (k_ * h.derivative) * to_cvec(pol.rhat);
    }
    return out;
  }

  if (const auto* mp = std::get_if<MultipoleSpec>(&spec_)) {
    const Polar pol = polar_about(x, mp->pole);
    if (pol.r <= 1e-150) {
      throw std::domain_error("basis: evaluation at the multipole singular point");
    }
    const std::vector<double> j = bessel_j_sequence(mp->q + 1, k_ * pol.r);
    const std::vector<double> y = bessel_y_sequence(mp->q + 1, k_ * pol.r);
    const auto h = [&](int n) { return cplx(j[n], y[n]); };
    for (int m = 0; m < p; ++m) {
      const int l = signed_order(m);
      const int al = std::abs(l);
      const double sym = signed_sym(l);
      const cplx hl = sym * h(al);
      const cplx hlp = sym * 0.5 * ((al >= 1 ? h(al - 1) : -h(1)) - h(al + 1));
      const cplx ang = std::exp(kI * static_cast<double>(l) * pol.theta);
      out.values[m] = hl * ang;
      const cplx dr = k_ * hlp * ang;
      const cplx dt = (kI * static_cast<double>(l) / pol.r) * hl * ang;
      out.gradients[m] = dr * to_cvec(pol.rhat) + dt * to_cvec(pol.that);
    }
    return out;
  }

  if (const auto* wb = std::get_if<WaveBandSpec>(&spec_)) {
    const Vec2 t = x - center_;
    const int nx = wave_band_j_count(wb->truncation, k_, wb->lx);
    for (int m = 0; m < p; ++m) {
      int j = m / 2;
      const int sign = (m % 2 == 0) ? 1 : -1;
      const bool xset = j < nx;
      if (!xset) j -= nx;
      const auto [a, b] =
          wave_band_numbers(k_, xset ? wb->lx : wb->ly, j, sign);
      const double u = xset ? t.x : t.y;  // cosine axis
      const double v = xset ? t.y : t.x;  // exponential axis
      const cplx osc = std::exp(kI * b * v);
      const cplx val = std::cos(a * u) * osc;
      const cplx du = -a * std::sin(a * u) * osc;
      const cplx dv = kI * b * val;
      out.values[m] = val;
      out.gradients[m] = xset ? CVec2{du, dv} : CVec2{dv, du};
    }
    return out;
  }

  const auto& cn = std::get<CornerWaveSpec>(spec_);
  const Polar pol = polar_about(x, cn.corner);
  if (pol.r <= 1e-300) {
    for (int m = 0; m < p; ++m) {
      out.values[m] = 0.0;
      out.gradients[m] = {0.0, 0.0};
    }
    return out;
  }
  double theta = pol.theta - cn.frame_angle;
  theta -= 2.0 * kPi * std::floor(theta / (2.0 * kPi));  // into [0, 2 pi)
  for (int m = 0; m < p; ++m) {
    const double nu = (m + 1) / cn.alpha;
    const BesselEval b = bessel_j(nu, k_ * pol.r);
    const double sn = std::sin(nu * theta), cs = std::cos(nu * theta);
    out.values[m] = b.value * sn;
    const double dr = k_ * b.derivative * sn;
    const double dt = (nu / pol.r) * b.value * cs;
    out.gradients[m] = cplx(dr) * to_cvec(pol.rhat) + cplx(dt) * to_cvec(pol.that);
  }
  return out;
}

std::pair<double, double> wbm_box(const Polygon& poly) {
  if (poly.empty()) fail("wbm_box: empty polygon");
  double xmin = poly[0].x, xmax = poly[0].x, ymin = poly[0].y, ymax = poly[0].y;
  for (const Vec2& v : poly) {
    xmin = std::min(xmin, v.x);
    xmax = std::max(xmax, v.x);
    ymin = std::min(ymin, v.y);
    ymax = std::max(ymax, v.y);
  }
  return {xmax - xmin, ymax - ymin};
}

void check_poles_outside(const std::vector<Vec2>& poles, const Polygon& poly) {
  for (const Vec2& p : poles) {
    if (point_in_polygon(p, poly)) {
      fail("pole (" + std::to_string(p.x) + ", " + std::to_string(p.y) +
           ") must lie strictly outside the element");
    }
  }
}

std::vector<Vec2> poles_on_dilated_boundary(const Polygon& poly, double factor,
                                            int n) {
  if (n < 1) fail("poles_on_dilated_boundary: n must be >= 1");
  if (!(factor > 1.0)) fail("poles_on_dilated_boundary: factor must exceed 1");
  const Vec2 c = polygon_centroid(poly);
  Polygon dil;
  dil.reserve(poly.size());
  for (const Vec2& v : poly) dil.push_back(c + factor * (v - c));
  std::vector<double> cum{0.0};
  for (std::size_t i = 0; i < dil.size(); ++i) {
    cum.push_back(cum.back() + norm(dil[(i + 1) % dil.size()] - dil[i]));
  }
  const double per = cum.back();
  std::vector<Vec2> poles;
  poles.reserve(n);
  std::size_t e = 0;
  for (int i = 0; i < n; ++i) {
    const double t = per * i / n;
    while (e + 1 < dil.size() && cum[e + 1] <= t) ++e;
    const Vec2 a = dil[e], b = dil[(e + 1) % dil.size()];
    const double len = cum[e + 1] - cum[e];
    const double s = len > 0.0 ? (t - cum[e]) / len : 0.0;
    poles.push_back(a + s * (b - a));
  }
  return poles;
}

}  // namespace trefftz
