#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "trefftz/forms.hpp"
#include "trefftz/geometry.hpp"
#include "trefftz/mesh.hpp"

namespace trefftz {

// Thrown for malformed config text (with a line number) and for semantically
// invalid configurations.  The C API maps it to the config-error status.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class DomainKind { rect, disc, mesh_file };
enum class ExactKind { none, plane_wave, fourier_bessel, fundamental };
enum class MethodName { tdg, uwvf, ls, vtcr, wbm, mfs, direct, indirect };
enum class BasisFamily { pw, ghp };

struct ProblemConfig {
  DomainKind domain = DomainKind::rect;
  double x0 = 0.0, y0 = 0.0, x1 = 1.0, y1 = 1.0;  // rect
  Vec2 disc_center{0.0, 0.0};                     // disc
  double disc_radius = 1.0;
  int disc_segments = 64;
  std::string mesh_file;                          // mesh_file

  double k = 1.0;
  double theta = 1.0;
  SideTags tags;                                 // rect boundary tagging
  BoundaryTag uniform_tag = BoundaryTag::robin;  // disc boundary tagging

  ExactKind exact = ExactKind::none;
  Vec2 exact_direction{1.0, 0.0};  // plane_wave (normalized by the parser)
  Vec2 exact_center{0.0, 0.0};     // fourier_bessel
  int exact_order = 0;
  Vec2 exact_pole{0.0, 0.0};       // fundamental
};

struct MethodConfig {
  MethodName name = MethodName::tdg;
  FluxParameters flux;             // tdg / uwvf
  LSWeights weights;               // ls
  cplx c1{0.5, 0.0};               // vtcr
  cplx c2{-0.5, 0.0};
  cplx z_int{1.0, 0.0};            // wbm
  MfsMode mfs_mode = MfsMode::least_squares;
  int mfs_samples_per_facet = 2;
  double mfs_pole_factor = 2.0;
  int mfs_pole_count = 0;          // 0: automatic (see runner)
};

struct BasisConfig {
  BasisFamily family = BasisFamily::pw;
  int p = 7;           // PW: direction count; GHP: degree q (dim 2q+1)
  bool scaled = true;  // GHP only
};

struct ScheduleConfig {
  std::vector<int> levels = {1};  // rect: n for an n-by-n grid
  std::vector<int> p_values;      // nonempty: p-refinement on levels[0]
};

struct OutputConfig {
  std::string study_csv = "study.csv";
  std::string field_csv;           // empty: no field output from `solve`
  int grid_nx = 0, grid_ny = 0;    // 0: default 32 when sampling is requested
  unsigned seed = 42;
  int workers = 0;                 // 0: TREFFTZ_THREADS or hardware default
};

struct SweepConfig {
  BasisFamily family = BasisFamily::pw;
  double k = 2.0;
  std::vector<double> h_values = {1.0};
  std::vector<int> orders;         // strictly increasing
  bool scaled = true;
  std::string csv = "conditioning.csv";
};

struct RunConfig {
  ProblemConfig problem;
  MethodConfig method;
  BasisConfig basis;
  ScheduleConfig schedule;
  OutputConfig output;
  SweepConfig sweep;
};

// Parses the flat-sectioned "key = value" format ('#' starts a comment).
// Throws ConfigError with a line number on syntax errors and without one on
// semantic errors.  The result has all defaults filled in.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

// Canonical text form of the effective configuration; parsing it back yields
// a configuration that behaves identically (doubles serialized exactly).
std::string serialize_config(const RunConfig& cfg);

// Semantic validation (also run by the parsers).
void validate_config(const RunConfig& cfg);

std::string method_name(MethodName name);
MethodName method_from_name(const std::string& name);

}  // namespace trefftz
