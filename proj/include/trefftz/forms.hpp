#pragma once

#include <complex>
#include <functional>
#include <string>
#include <vector>

#include "trefftz/basis.hpp"
#include "trefftz/field.hpp"
#include "trefftz/geometry.hpp"
#include "trefftz/linalg.hpp"
#include "trefftz/mesh.hpp"

namespace trefftz {

// ---------------------------------------------------------------------------
// Flux parameters for the discontinuous-Galerkin formulation.
// ---------------------------------------------------------------------------

enum class FluxPreset {
  h_version,        // alpha = a/(k h_K), beta = b k h_K, delta = d k h_K
  p_version,        // alpha = a, beta = b, delta = d
  uwvf,             // alpha = beta = delta = 1/2
  locally_refined,  // alpha = a h/h_K, beta = b h/h_K, delta = d h/h_K
  geometric_hp,     // alpha = a h/h_K, beta = b, delta = d
};

FluxPreset flux_preset_from_name(const std::string& name);
std::string flux_preset_name(FluxPreset preset);

struct FluxParameters {
  FluxPreset preset = FluxPreset::uwvf;
  double a = 0.5;
  double b = 0.5;
  double d = 0.5;
};

// Evaluated flux values on one facet.  alpha is defined on interior and
// Dirichlet facets, beta on interior facets, delta on Robin facets; fields
// that do not apply to the facet kind are set to 0.
struct FluxValues {
  double alpha = 0.0;
  double beta = 0.0;
  double delta = 0.0;
};

// Evaluates the preset on a facet.  h is the global mesh size (max element
// diameter); h_K is the local size: the diameter of the owning element on
// boundary facets, the minimum of the two adjacent diameters on interior
// facets.  Throws std::runtime_error when the evaluated values violate
// alpha > 0, beta > 0 or 0 < delta <= 1/2.
FluxValues flux_on_facet(const FluxParameters& flux, const Mesh& mesh,
                         int facet_index, double k);

// ---------------------------------------------------------------------------
// Least-squares weights.
// ---------------------------------------------------------------------------

enum class GradientJumpMode { full, normal_only };

struct LSWeights {
  // lambda <= 0 means "use k", resolved when the weights are evaluated.
  double lambda = -1.0;
  double sigma = 1.0;
  GradientJumpMode jump_mode = GradientJumpMode::full;

  double lambda_value(double k) const { return lambda > 0.0 ? lambda : k; }
};

// ---------------------------------------------------------------------------
// Boundary data.
// ---------------------------------------------------------------------------

using BoundaryFn = std::function<cplx(Vec2)>;

struct BoundaryData {
  BoundaryFn g_D;      // Dirichlet datum; null means identically zero
  BoundaryFn g_R;      // impedance datum (Neumann datum for single-element
                       // modes, where Robin-tagged facets act as Gamma_N)
  double theta = 1.0;  // impedance parameter; must be > 0 where a form
                       // divides by it
};

// ---------------------------------------------------------------------------
// Assembled system.
// ---------------------------------------------------------------------------

struct DofMap {
  std::vector<int> offsets;  // size = elements + 1

  int global_index(int elem, int local) const { return offsets[elem] + local; }
  int element_dim(int elem) const { return offsets[elem + 1] - offsets[elem]; }
  int total() const { return offsets.empty() ? 0 : offsets.back(); }
};

struct GlobalSystem {
  CMatrix matrix;
  std::vector<cplx> rhs;
  DofMap dof_map;
  bool hermitian = false;
};

// ---------------------------------------------------------------------------
// Assembly options.
// ---------------------------------------------------------------------------

struct AssemblyOptions {
  // Forces the quadrature path even for purely exponential local spaces;
  // used to cross-check the closed-form path.
  bool force_quadrature = false;
  // Worker threads for per-facet block computation; 0 resolves to
  // TREFFTZ_THREADS or the hardware concurrency.  Blocks are reduced
  // serially in facet order, so results do not depend on the worker count.
  int workers = 0;
};

int resolve_workers(int requested);

// ---------------------------------------------------------------------------
// Formulations.
// ---------------------------------------------------------------------------

// Trefftz discontinuous Galerkin (sesquilinear; matrix[l][m] = A(phi_m,
// phi_l) with the second slot conjugated).  The UWVF is the uwvf preset.
GlobalSystem assemble_tdg(const Mesh& mesh, const std::vector<LocalSpace>& spaces,
                          const FluxParameters& flux, const BoundaryData& data,
                          double k, const AssemblyOptions& options = {});

// Hermitian normal equations of the least-squares functional J.
GlobalSystem assemble_ls(const Mesh& mesh, const std::vector<LocalSpace>& spaces,
                         const LSWeights& weights, const BoundaryData& data,
                         double k, const AssemblyOptions& options = {});

// Brute-force evaluation of the least-squares functional J(v; g_R, g_D) by
// facet quadrature; independent of assemble_ls.
double ls_functional(const Mesh& mesh, const ElementField& field,
                     const LSWeights& weights, const BoundaryData& data,
                     double k);

// Variational theory of complex rays (sesquilinear, assembled without the
// outer imaginary part).
GlobalSystem assemble_vtcr(const Mesh& mesh, const std::vector<LocalSpace>& spaces,
                           cplx c1, cplx c2, const BoundaryData& data, double k,
                           const AssemblyOptions& options = {});

// Wave based method (bilinear: test functions are NOT conjugated).
GlobalSystem assemble_wbm(const Mesh& mesh, const std::vector<LocalSpace>& spaces,
                          cplx z_int, const BoundaryData& data, double k,
                          const AssemblyOptions& options = {});

// Single-element boundary-residual schemes (bilinear).  Robin-tagged facets
// carry the Neumann datum data.g_R; data.theta is ignored.
enum class SingleElementMode { indirect, direct };

GlobalSystem assemble_single_element(const Mesh& mesh, const LocalSpace& trial,
                                     const LocalSpace& test,
                                     SingleElementMode mode,
                                     const BoundaryData& data, double k,
                                     const AssemblyOptions& options = {});

// ---------------------------------------------------------------------------
// Method of fundamental solutions.
// ---------------------------------------------------------------------------

struct MfsSample {
  Vec2 point;
  Vec2 normal;         // outward unit normal (used by Robin rows)
  FacetKind kind = FacetKind::dirichlet;  // dirichlet or robin
};

enum class MfsMode { collocation, least_squares };

// Rows: Dirichlet samples take the trace of H^(1)_0(k|x - y_l|); Robin
// samples take d/dn + ik*theta of it.  rhs holds the sampled data.
GlobalSystem assemble_mfs(const std::vector<MfsSample>& samples,
                          const std::vector<Vec2>& poles,
                          const BoundaryData& data, double k, MfsMode mode);

// Boundary samples for the method of fundamental solutions: walks the
// boundary facets of the mesh and places per_facet equispaced interior-offset
// points on each, tagged with the facet kind and outward normal.
std::vector<MfsSample> mfs_samples_from_mesh(const Mesh& mesh, int per_facet);

// ---------------------------------------------------------------------------
// Facet-block primitives (exposed for testing and for skeleton norms).
// ---------------------------------------------------------------------------

// Pairwise facet integrals between a test and a trial local space over the
// segment of facet f.  With conj_test, entry [l][m] integrates
// (op trial_m)(conj op test_l); without, no conjugation (bilinear forms).
// Normal derivatives are taken along the facet normal f.normal.
struct FacetBlocks {
  CMatrix vv;  // trial value        x test value
  CMatrix dv;  // trial d/dn         x test value
  CMatrix vd;  // trial value        x test d/dn
  CMatrix dd;  // trial d/dn         x test d/dn
  CMatrix gg;  // trial grad . test grad (full gradient dot; only if requested)
};

FacetBlocks facet_blocks(const LocalSpace& test_space,
                         const LocalSpace& trial_space, const Mesh& mesh,
                         int facet_index, bool conj_test, bool want_gradient_dot,
                         bool force_quadrature);

// Boundary-trace moments of a data function against one local space:
// entry [l] = integral over the facet of g(x) * C(op phi_l), C = conj when
// conj_test, op = value (deriv = false) or d/dn (deriv = true).
std::vector<cplx> facet_data_moments(const LocalSpace& space, const Mesh& mesh,
                                     int facet_index, const BoundaryFn& g,
                                     bool deriv, bool conj_test);

// L2 Gram matrix of the traces of one local space on the whole boundary of
// its element, sum over that element's facets of int |phi_m conj phi_l| ds
// pairings; used by the local orthonormalisation preconditioner.
CMatrix element_boundary_gram(const LocalSpace& space, const Mesh& mesh,
                              int elem, bool force_quadrature = false);

}  // namespace trefftz
