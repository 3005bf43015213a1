#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "trefftz/basis.hpp"
#include "trefftz/field.hpp"
#include "trefftz/forms.hpp"
#include "trefftz/geometry.hpp"
#include "trefftz/linalg.hpp"
#include "trefftz/mesh.hpp"

namespace trefftz {

// ---------------------------------------------------------------------------
// Closed-form reference solutions of the homogeneous Helmholtz equation.
// ---------------------------------------------------------------------------

class ExactSolution : public ElementField {
 public:
  enum class Kind { plane_wave, fourier_bessel, fundamental };

  // e^{ik d.x} with a real unit direction d.
  static ExactSolution plane_wave(double k, Vec2 direction);
  // J_l(k r) e^{i l theta} about `center` (signed integer order l).
  static ExactSolution fourier_bessel(double k, Vec2 center, int order);
  // H^(1)_0(k |x - pole|); the pole must lie outside the domain of interest
  // (the caller validates, since the domain is not known here).
  static ExactSolution fundamental(double k, Vec2 pole);

  cplx value(int elem, Vec2 x) const override;
  CVec2 gradient(int elem, Vec2 x) const override;

  Kind kind() const { return kind_; }
  double k() const { return space_.k(); }

 private:
  ExactSolution(Kind kind, LocalSpace space, int member)
      : kind_(kind), space_(std::move(space)), member_(member) {}
  Kind kind_;
  LocalSpace space_;
  int member_;
};

// ---------------------------------------------------------------------------
// Norms.
// ---------------------------------------------------------------------------

// Which norm to evaluate.  lambda_sigma is the weighted skeleton seminorm
// (normal gradient jump); ls is the square root of the homogeneous
// least-squares functional (respects weights.jump_mode); tdg / tdg_plus are
// the flux-weighted skeleton norms tied to the DG formulation; l2_domain is
// the volume L2 norm.
struct NormSpec {
  enum class Kind { lambda_sigma, tdg, tdg_plus, ls, l2_domain };
  Kind kind = Kind::lambda_sigma;
  LSWeights weights;      // lambda_sigma (jump mode ignored) and ls
  FluxParameters flux;    // tdg and tdg_plus
  double theta = 1.0;     // impedance parameter on the Robin part

  static NormSpec LambdaSigma(double lambda, double sigma, double theta = 1.0);
  static NormSpec TDG(const FluxParameters& flux, double theta = 1.0);
  static NormSpec TDGplus(const FluxParameters& flux, double theta = 1.0);
  static NormSpec LS(const LSWeights& weights, double theta = 1.0);
  static NormSpec L2domain();
};

// Facet-wise quadrature of the squared trace terms of the chosen norm
// (volume quadrature for l2_domain), square root at the end.  Entirely
// independent of the matrix assembly in forms.  min_nodes raises the
// per-facet node count when the field oscillates faster than e^{2ikx}.
double skeleton_norm(const Mesh& mesh, const ElementField& v,
                     const NormSpec& spec, double k, int min_nodes = 0);

// Volume L2 norm over all elements (oscillation-aware tensor rule on a
// centroid fan; nodes = 0 picks the automatic count).
double l2_volume_norm(const Mesh& mesh, const ElementField& v, double k,
                      int nodes = 0);

// Relative L2(Omega) error ||u_h - u|| / ||u||.  Throws std::runtime_error
// when the exact solution has zero norm.
double l2_domain_error(const Mesh& mesh, const ElementField& u_h,
                       const ElementField& u, double k, int nodes = 0);

// ---------------------------------------------------------------------------
// Convergence and stability diagnostics.
// ---------------------------------------------------------------------------

// Empirical orders log(e_i/e_{i+1}) / log(h_i/h_{i+1}) from (h, error)
// records; h must be strictly decreasing and errors positive.
std::vector<double> eoc(const std::vector<std::pair<double, double>>& records);

// Monte-Carlo supremum of ||v||_{L2} / |v|_{lambda,sigma} over `trials`
// random discrete fields with complex standard-normal coefficients (fixed
// seed for reproducibility).  Throws std::runtime_error when a zero skeleton
// norm is encountered (it is a norm on Trefftz spaces, so that would signal
// an assembly bug).
double mow_ratio(const Mesh& mesh, const std::vector<LocalSpace>& spaces,
                 double lambda, double sigma, double theta, int trials,
                 unsigned seed = 12345u);

// Best approximation of u from the discrete space in the given skeleton
// norm: minimizes norm(u - v_h) over the space by the Hermitian normal
// equations of the norm's quadratic form, then re-evaluates the norm of the
// difference field.  Rejects l2_domain.
double best_approximation_error(const Mesh& mesh,
                                const std::vector<LocalSpace>& spaces,
                                const ElementField& u, const NormSpec& spec,
                                double k);

// ---------------------------------------------------------------------------
// Conditioning study.
// ---------------------------------------------------------------------------

// Mass matrix of plane waves e^{ik d_l.(x - center)} on the axis-aligned
// square of the given side: M[l][m] = int_K e^{ik(d_l - d_m).(x - center)},
// closed form through the boundary reduction; the diagonal is exactly the
// area.  Directions must be pairwise distinct.
CMatrix pw_mass_matrix(double side, Vec2 center, double k,
                       const std::vector<Direction>& directions);

struct ConditioningRecord {
  std::string family;  // "pw" or "ghp"
  int p_or_q = 0;
  double k = 0.0;
  double h = 0.0;   // square side
  double kh = 0.0;
  double cond2 = 1.0;
  bool saturated = false;  // cond2 not finite or above 1e15
};

struct ConditioningSweepSpec {
  std::string family = "pw";    // "pw" | "ghp"
  double k = 1.0;
  std::vector<double> h_values; // square sides
  std::vector<int> orders;      // p (pw: number of directions) or q (ghp)
  bool scaled_ghp = true;
  int workers = 0;
};

// Spectral condition numbers of the local Gram matrices over the (order, h)
// grid: plane-wave mass matrices in closed form, circular-wave Grams by
// volume quadrature (scaled members when scaled_ghp).  Records are ordered
// by order, then by h.
std::vector<ConditioningRecord> conditioning_sweep(const ConditioningSweepSpec& spec);

// CSV with header "family,p_or_q,k,h,kh,cond2,saturated".
void write_conditioning_csv(std::ostream& out,
                            const std::vector<ConditioningRecord>& records);

}  // namespace trefftz
