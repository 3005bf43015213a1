#include "trefftz/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace trefftz {

namespace {

[[noreturn]] void fail_line(int line, const std::string& msg) {
  throw ConfigError("config line " + std::to_string(line) + ": " + msg);
}

[[noreturn]] void fail(const std::string& msg) {
  throw ConfigError("config: " + msg);
}

std::string trim(const std::string& s) {
  const std::size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  const std::size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> split_ws(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

double to_double(const std::string& tok, int line) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(tok, &used);
  } catch (const std::exception&) {
    fail_line(line, "expected a number, got '" + tok + "'");
  }
  if (used != tok.size()) fail_line(line, "expected a number, got '" + tok + "'");
  return v;
}

int to_int(const std::string& tok, int line) {
  std::size_t used = 0;
  long v = 0;
  try {
    v = std::stol(tok, &used);
  } catch (const std::exception&) {
    fail_line(line, "expected an integer, got '" + tok + "'");
  }
  if (used != tok.size()) {
    fail_line(line, "expected an integer, got '" + tok + "'");
  }
  return static_cast<int>(v);
}

bool to_bool(const std::string& tok, int line) {
  if (tok == "true" || tok == "1") return true;
  if (tok == "false" || tok == "0") return false;
  fail_line(line, "expected true/false, got '" + tok + "'");
}

BoundaryTag to_tag(const std::string& tok, int line) {
  if (tok == "dirichlet") return BoundaryTag::dirichlet;
  if (tok == "robin") return BoundaryTag::robin;
  fail_line(line, "expected dirichlet/robin, got '" + tok + "'");
}

cplx to_cplx(const std::vector<std::string>& toks, int line) {
  if (toks.empty() || toks.size() > 2) {
    fail_line(line, "expected 're [im]' for a complex value");
  }
  const double re = to_double(toks[0], line);
  const double im = toks.size() == 2 ? to_double(toks[1], line) : 0.0;
  return {re, im};
}

BasisFamily to_family(const std::string& tok, int line) {
  if (tok == "pw") return BasisFamily::pw;
  if (tok == "ghp") return BasisFamily::ghp;
  fail_line(line, "unknown basis family '" + tok + "' (pw, ghp)");
}

void need(const std::vector<std::string>& toks, std::size_t n, int line,
          const std::string& what) {
  if (toks.size() != n) fail_line(line, what);
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

const char* tag_name(BoundaryTag t) {
  return t == BoundaryTag::dirichlet ? "dirichlet" : "robin";
}

void parse_problem_key(ProblemConfig& pb, const std::string& key,
                       const std::string& value, int line) {
  const std::vector<std::string> toks = split_ws(value);
  if (key == "domain") {
    if (toks.empty()) fail_line(line, "domain needs a shape");
    if (toks[0] == "rect") {
      need(toks, 5, line, "usage: domain = rect x0 y0 x1 y1");
      pb.domain = DomainKind::rect;
      pb.x0 = to_double(toks[1], line);
      pb.y0 = to_double(toks[2], line);
      pb.x1 = to_double(toks[3], line);
      pb.y1 = to_double(toks[4], line);
    } else if (toks[0] == "disc") {
      if (toks.size() != 4 && toks.size() != 5) {
        fail_line(line, "usage: domain = disc cx cy r [segments]");
      }
      pb.domain = DomainKind::disc;
      pb.disc_center = {to_double(toks[1], line), to_double(toks[2], line)};
      pb.disc_radius = to_double(toks[3], line);
      if (toks.size() == 5) pb.disc_segments = to_int(toks[4], line);
    } else if (toks[0] == "mesh") {
      pb.domain = DomainKind::mesh_file;
      const std::size_t at = value.find("mesh");
      pb.mesh_file = trim(value.substr(at + 4));
      if (pb.mesh_file.empty()) fail_line(line, "usage: domain = mesh <path>");
    } else {
      fail_line(line, "unknown domain shape '" + toks[0] + "' (rect, disc, mesh)");
    }
  } else if (key == "k") {
    need(toks, 1, line, "usage: k = <number>");
    pb.k = to_double(toks[0], line);
  } else if (key == "theta") {
    need(toks, 1, line, "usage: theta = <number>");
    pb.theta = to_double(toks[0], line);
  } else if (key == "boundary") {
    if (toks.size() == 1) {
      const BoundaryTag t = to_tag(toks[0], line);
      pb.tags = {t, t, t, t};
      pb.uniform_tag = t;
    } else if (toks.size() == 4) {
      pb.tags.left = to_tag(toks[0], line);
      pb.tags.right = to_tag(toks[1], line);
      pb.tags.bottom = to_tag(toks[2], line);
      pb.tags.top = to_tag(toks[3], line);
      pb.uniform_tag = pb.tags.left;
    } else {
      fail_line(line, "usage: boundary = <tag> or <left right bottom top>");
    }
  } else if (key == "exact") {
    if (toks.empty()) fail_line(line, "exact needs a kind");
    if (toks[0] == "none") {
      need(toks, 1, line, "usage: exact = none");
      pb.exact = ExactKind::none;
    } else if (toks[0] == "plane_wave") {
      need(toks, 3, line, "usage: exact = plane_wave dx dy");
      pb.exact = ExactKind::plane_wave;
      const double dx = to_double(toks[1], line);
      const double dy = to_double(toks[2], line);
      const double len = std::hypot(dx, dy);
      if (!(len > 0.0)) fail_line(line, "plane_wave direction must be nonzero");
      pb.exact_direction = {dx / len, dy / len};
    } else if (toks[0] == "fourier_bessel") {
      need(toks, 4, line, "usage: exact = fourier_bessel cx cy order");
      pb.exact = ExactKind::fourier_bessel;
      pb.exact_center = {to_double(toks[1], line), to_double(toks[2], line)};
      pb.exact_order = to_int(toks[3], line);
    } else if (toks[0] == "fundamental") {
      need(toks, 3, line, "usage: exact = fundamental px py");
      pb.exact = ExactKind::fundamental;
      pb.exact_pole = {to_double(toks[1], line), to_double(toks[2], line)};
    } else {
      fail_line(line, "unknown exact kind '" + toks[0] + "'");
    }
  } else {
    fail_line(line, "unknown key '" + key + "' in [problem]");
  }
}

void parse_method_key(MethodConfig& m, const std::string& key,
                      const std::string& value, int line) {
  const std::vector<std::string> toks = split_ws(value);
  if (key == "name") {
    need(toks, 1, line, "usage: name = <method>");
    try {
      m.name = method_from_name(toks[0]);
    } catch (const ConfigError& e) {
      fail_line(line, e.what());
    }
  } else if (key == "flux") {
    need(toks, 1, line, "usage: flux = <preset>");
    try {
      m.flux.preset = flux_preset_from_name(toks[0]);
    } catch (const std::exception& e) {
      fail_line(line, e.what());
    }
  } else if (key == "a" || key == "b" || key == "d") {
    need(toks, 1, line, "usage: " + key + " = <number>");
    const double v = to_double(toks[0], line);
    (key == "a" ? m.flux.a : key == "b" ? m.flux.b : m.flux.d) = v;
  } else if (key == "lambda") {
    need(toks, 1, line, "usage: lambda = <number>");
    m.weights.lambda = to_double(toks[0], line);
  } else if (key == "sigma") {
    need(toks, 1, line, "usage: sigma = <number>");
    m.weights.sigma = to_double(toks[0], line);
  } else if (key == "jump") {
    need(toks, 1, line, "usage: jump = full|normal");
    if (toks[0] == "full") {
      m.weights.jump_mode = GradientJumpMode::full;
    } else if (toks[0] == "normal") {
      m.weights.jump_mode = GradientJumpMode::normal_only;
    } else {
      fail_line(line, "unknown jump mode '" + toks[0] + "'");
    }
  } else if (key == "c1") {
    m.c1 = to_cplx(toks, line);
  } else if (key == "c2") {
    m.c2 = to_cplx(toks, line);
  } else if (key == "z_int") {
    m.z_int = to_cplx(toks, line);
  } else if (key == "mfs_mode") {
    need(toks, 1, line, "usage: mfs_mode = collocation|least_squares");
    if (toks[0] == "collocation") {
      m.mfs_mode = MfsMode::collocation;
    } else if (toks[0] == "least_squares") {
      m.mfs_mode = MfsMode::least_squares;
    } else {
      fail_line(line, "unknown mfs_mode '" + toks[0] + "'");
    }
  } else if (key == "mfs_samples_per_facet") {
    need(toks, 1, line, "usage: mfs_samples_per_facet = <int>");
    m.mfs_samples_per_facet = to_int(toks[0], line);
  } else if (key == "mfs_pole_factor") {
    need(toks, 1, line, "usage: mfs_pole_factor = <number>");
    m.mfs_pole_factor = to_double(toks[0], line);
  } else if (key == "mfs_pole_count") {
    need(toks, 1, line, "usage: mfs_pole_count = <int>");
    m.mfs_pole_count = to_int(toks[0], line);
  } else {
    fail_line(line, "unknown key '" + key + "' in [method]");
  }
}

void parse_basis_key(BasisConfig& b, const std::string& key,
                     const std::string& value, int line) {
  const std::vector<std::string> toks = split_ws(value);
  if (key == "family") {
    need(toks, 1, line, "usage: family = pw|ghp");
    b.family = to_family(toks[0], line);
  } else if (key == "p") {
    need(toks, 1, line, "usage: p = <int>");
    b.p = to_int(toks[0], line);
  } else if (key == "scaled") {
    need(toks, 1, line, "usage: scaled = true|false");
    b.scaled = to_bool(toks[0], line);
  } else {
    fail_line(line, "unknown key '" + key + "' in [basis]");
  }
}

void parse_schedule_key(ScheduleConfig& s, const std::string& key,
                        const std::string& value, int line) {
  const std::vector<std::string> toks = split_ws(value);
  if (toks.empty()) fail_line(line, key + " needs at least one value");
  if (key == "levels") {
    s.levels.clear();
    for (const std::string& t : toks) s.levels.push_back(to_int(t, line));
  } else if (key == "p_values") {
    s.p_values.clear();
    for (const std::string& t : toks) s.p_values.push_back(to_int(t, line));
  } else {
    fail_line(line, "unknown key '" + key + "' in [schedule]");
  }
}

void parse_output_key(OutputConfig& o, const std::string& key,
                      const std::string& value, int line) {
  const std::vector<std::string> toks = split_ws(value);
  if (key == "study_csv") {
    o.study_csv = value;
  } else if (key == "field_csv") {
    o.field_csv = value;
  } else if (key == "field_grid") {
    if (toks.size() != 1 && toks.size() != 2) {
      fail_line(line, "usage: field_grid = nx [ny]");
    }
    o.grid_nx = to_int(toks[0], line);
    o.grid_ny = toks.size() == 2 ? to_int(toks[1], line) : o.grid_nx;
  } else if (key == "seed") {
    need(toks, 1, line, "usage: seed = <unsigned>");
    const int v = to_int(toks[0], line);
    if (v < 0) fail_line(line, "seed must be nonnegative");
    o.seed = static_cast<unsigned>(v);
  } else if (key == "workers") {
    need(toks, 1, line, "usage: workers = <int>");
    o.workers = to_int(toks[0], line);
  } else {
    fail_line(line, "unknown key '" + key + "' in [output]");
  }
}

void parse_sweep_key(SweepConfig& s, const std::string& key,
                     const std::string& value, int line) {
  const std::vector<std::string> toks = split_ws(value);
  if (key == "family") {
    need(toks, 1, line, "usage: family = pw|ghp");
    s.family = to_family(toks[0], line);
  } else if (key == "k") {
    need(toks, 1, line, "usage: k = <number>");
    s.k = to_double(toks[0], line);
  } else if (key == "h_values") {
    if (toks.empty()) fail_line(line, "h_values needs at least one value");
    s.h_values.clear();
    for (const std::string& t : toks) s.h_values.push_back(to_double(t, line));
  } else if (key == "orders") {
    if (toks.empty()) fail_line(line, "orders needs at least one value");
    s.orders.clear();
    for (const std::string& t : toks) s.orders.push_back(to_int(t, line));
  } else if (key == "scaled") {
    need(toks, 1, line, "usage: scaled = true|false");
    s.scaled = to_bool(toks[0], line);
  } else if (key == "csv") {
    s.csv = value;
  } else {
    fail_line(line, "unknown key '" + key + "' in [sweep]");
  }
}

}  // namespace

std::string method_name(MethodName name) {
  switch (name) {
    case MethodName::tdg: return "tdg";
    case MethodName::uwvf: return "uwvf";
    case MethodName::ls: return "ls";
    case MethodName::vtcr: return "vtcr";
    case MethodName::wbm: return "wbm";
    case MethodName::mfs: return "mfs";
    case MethodName::direct: return "direct";
    case MethodName::indirect: return "indirect";
  }
  return "tdg";
}

MethodName method_from_name(const std::string& name) {
  if (name == "tdg") return MethodName::tdg;
  if (name == "uwvf") return MethodName::uwvf;
  if (name == "ls") return MethodName::ls;
  if (name == "vtcr") return MethodName::vtcr;
  if (name == "wbm") return MethodName::wbm;
  if (name == "mfs") return MethodName::mfs;
  if (name == "direct") return MethodName::direct;
  if (name == "indirect") return MethodName::indirect;
  throw ConfigError("unknown method '" + name + "'");
}

RunConfig parse_config(const std::string& text) {
  RunConfig cfg;
  std::istringstream in(text);
  std::string raw;
  std::string section;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const std::size_t hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    const std::string s = trim(raw);
    if (s.empty()) continue;
    if (s.front() == '[') {
      if (s.back() != ']') fail_line(line, "unterminated section header");
      section = s.substr(1, s.size() - 2);
      if (section != "problem" && section != "method" && section != "basis" &&
          section != "schedule" && section != "output" && section != "sweep") {
        fail_line(line, "unknown section [" + section + "]");
      }
      continue;
    }
    const std::size_t eq = s.find('=');
    if (eq == std::string::npos) fail_line(line, "expected 'key = value'");
    const std::string key = trim(s.substr(0, eq));
    const std::string value = trim(s.substr(eq + 1));
    if (key.empty()) fail_line(line, "empty key");
    if (value.empty()) fail_line(line, "empty value for key '" + key + "'");
    if (section.empty()) fail_line(line, "key before any [section]");
    if (section == "problem") {
      parse_problem_key(cfg.problem, key, value, line);
    } else if (section == "method") {
      parse_method_key(cfg.method, key, value, line);
    } else if (section == "basis") {
      parse_basis_key(cfg.basis, key, value, line);
    } else if (section == "schedule") {
      parse_schedule_key(cfg.schedule, key, value, line);
    } else if (section == "output") {
      parse_output_key(cfg.output, key, value, line);
    } else {
      parse_sweep_key(cfg.sweep, key, value, line);
    }
  }
  // Effective defaults: a requested field file implies a sampling grid.
  if (!cfg.output.field_csv.empty() && cfg.output.grid_nx == 0) {
    cfg.output.grid_nx = cfg.output.grid_ny = 32;
  }
  validate_config(cfg);
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

void validate_config(const RunConfig& cfg) {
  const ProblemConfig& pb = cfg.problem;
  if (!(pb.k > 0.0) || !std::isfinite(pb.k)) fail("k must be positive");
  if (!(pb.theta >= 0.0) || !std::isfinite(pb.theta)) {
    fail("theta must be nonnegative");
  }
  switch (pb.domain) {
    case DomainKind::rect:
      if (!(pb.x1 > pb.x0) || !(pb.y1 > pb.y0)) {
        fail("rect domain must have positive extent");
      }
      break;
    case DomainKind::disc:
      if (!(pb.disc_radius > 0.0)) fail("disc radius must be positive");
      if (pb.disc_segments < 3) fail("disc needs at least 3 segments");
      break;
    case DomainKind::mesh_file:
      if (pb.mesh_file.empty()) fail("mesh domain needs a path");
      break;
  }
  if (pb.exact == ExactKind::fundamental) {
    if (pb.domain == DomainKind::rect && pb.exact_pole.x >= pb.x0 &&
        pb.exact_pole.x <= pb.x1 && pb.exact_pole.y >= pb.y0 &&
        pb.exact_pole.y <= pb.y1) {
      fail("fundamental-solution pole must lie outside the domain");
    }
    if (pb.domain == DomainKind::disc &&
        std::hypot(pb.exact_pole.x - pb.disc_center.x,
                   pb.exact_pole.y - pb.disc_center.y) <= pb.disc_radius) {
      fail("fundamental-solution pole must lie outside the domain");
    }
  }

  const BasisConfig& b = cfg.basis;
  if (b.family == BasisFamily::pw && b.p < 1) fail("pw basis needs p >= 1");
  if (b.family == BasisFamily::ghp && b.p < 0) fail("ghp basis needs q >= 0");

  const ScheduleConfig& s = cfg.schedule;
  if (s.levels.empty()) fail("schedule needs at least one level");
  for (int l : s.levels) {
    if (l < 1) fail("schedule levels must be >= 1");
  }
  if (!s.p_values.empty()) {
    if (s.levels.size() != 1) {
      fail("p_values requires a single mesh level");
    }
    for (int p : s.p_values) {
      if (p < (b.family == BasisFamily::pw ? 1 : 0)) {
        fail("invalid entry in p_values");
      }
    }
  }

  const MethodConfig& m = cfg.method;
  if (m.name == MethodName::mfs) {
    if (m.mfs_samples_per_facet < 1) fail("mfs_samples_per_facet must be >= 1");
    if (!(m.mfs_pole_factor > 1.0)) fail("mfs_pole_factor must exceed 1");
    if (m.mfs_pole_count < 0) fail("mfs_pole_count must be nonnegative");
  }
  if (m.name == MethodName::wbm && std::abs(m.z_int) == 0.0) {
    fail("wbm impedance z_int must be nonzero");
  }
  if ((m.name == MethodName::direct || m.name == MethodName::indirect) &&
      pb.domain == DomainKind::rect) {
    for (int l : s.levels) {
      if (l != 1) fail("direct/indirect methods run on a single element");
    }
  }

  const OutputConfig& o = cfg.output;
  if (o.grid_nx < 0 || o.grid_ny < 0) fail("field_grid must be nonnegative");
  if (o.workers < 0) fail("workers must be nonnegative");
  if (o.study_csv.empty()) fail("study_csv must not be empty");

  const SweepConfig& sw = cfg.sweep;
  if (!(sw.k > 0.0)) fail("sweep k must be positive");
  if (sw.h_values.empty()) fail("sweep needs h_values");
  for (double h : sw.h_values) {
    if (!(h > 0.0)) fail("sweep h_values must be positive");
  }
  const int min_order = sw.family == BasisFamily::pw ? 1 : 0;
  for (std::size_t i = 0; i < sw.orders.size(); ++i) {
    if (sw.orders[i] < min_order) fail("invalid entry in sweep orders");
    if (i > 0 && sw.orders[i] <= sw.orders[i - 1]) {
      fail("sweep orders must be strictly increasing");
    }
  }
}

std::string serialize_config(const RunConfig& cfg) {
  std::ostringstream out;
  const ProblemConfig& pb = cfg.problem;
  out << "[problem]\n";
  switch (pb.domain) {
    case DomainKind::rect:
      out << "domain = rect " << fmt(pb.x0) << " " << fmt(pb.y0) << " "
          << fmt(pb.x1) << " " << fmt(pb.y1) << "\n";
      break;
    case DomainKind::disc:
      out << "domain = disc " << fmt(pb.disc_center.x) << " "
          << fmt(pb.disc_center.y) << " " << fmt(pb.disc_radius) << " "
          << pb.disc_segments << "\n";
      break;
    case DomainKind::mesh_file:
      out << "domain = mesh " << pb.mesh_file << "\n";
      break;
  }
  out << "k = " << fmt(pb.k) << "\n";
  out << "theta = " << fmt(pb.theta) << "\n";
  if (pb.domain == DomainKind::rect) {
    out << "boundary = " << tag_name(pb.tags.left) << " "
        << tag_name(pb.tags.right) << " " << tag_name(pb.tags.bottom) << " "
        << tag_name(pb.tags.top) << "\n";
  } else {
    out << "boundary = " << tag_name(pb.uniform_tag) << "\n";
  }
  switch (pb.exact) {
    case ExactKind::none:
      out << "exact = none\n";
      break;
    case ExactKind::plane_wave:
      out << "exact = plane_wave " << fmt(pb.exact_direction.x) << " "
          << fmt(pb.exact_direction.y) << "\n";
      break;
    case ExactKind::fourier_bessel:
      out << "exact = fourier_bessel " << fmt(pb.exact_center.x) << " "
          << fmt(pb.exact_center.y) << " " << pb.exact_order << "\n";
      break;
    case ExactKind::fundamental:
      out << "exact = fundamental " << fmt(pb.exact_pole.x) << " "
          << fmt(pb.exact_pole.y) << "\n";
      break;
  }

  const MethodConfig& m = cfg.method;
  out << "\n[method]\n";
  out << "name = " << method_name(m.name) << "\n";
  out << "flux = " << flux_preset_name(m.flux.preset) << "\n";
  out << "a = " << fmt(m.flux.a) << "\n";
  out << "b = " << fmt(m.flux.b) << "\n";
  out << "d = " << fmt(m.flux.d) << "\n";
  out << "lambda = " << fmt(m.weights.lambda) << "\n";
  out << "sigma = " << fmt(m.weights.sigma) << "\n";
  out << "jump = "
      << (m.weights.jump_mode == GradientJumpMode::full ? "full" : "normal")
      << "\n";
  out << "c1 = " << fmt(m.c1.real()) << " " << fmt(m.c1.imag()) << "\n";
  out << "c2 = " << fmt(m.c2.real()) << " " << fmt(m.c2.imag()) << "\n";
  out << "z_int = " << fmt(m.z_int.real()) << " " << fmt(m.z_int.imag()) << "\n";
  out << "mfs_mode = "
      << (m.mfs_mode == MfsMode::collocation ? "collocation" : "least_squares")
      << "\n";
  out << "mfs_samples_per_facet = " << m.mfs_samples_per_facet << "\n";
  out << "mfs_pole_factor = " << fmt(m.mfs_pole_factor) << "\n";
  out << "mfs_pole_count = " << m.mfs_pole_count << "\n";

  const BasisConfig& b = cfg.basis;
  out << "\n[basis]\n";
  out << "family = " << (b.family == BasisFamily::pw ? "pw" : "ghp") << "\n";
  out << "p = " << b.p << "\n";
  out << "scaled = " << (b.scaled ? "true" : "false") << "\n";

  const ScheduleConfig& s = cfg.schedule;
  out << "\n[schedule]\n";
  out << "levels =";
  for (int l : s.levels) out << " " << l;
  out << "\n";
  if (!s.p_values.empty()) {
    out << "p_values =";
    for (int p : s.p_values) out << " " << p;
    out << "\n";
  }

  const OutputConfig& o = cfg.output;
  out << "\n[output]\n";
  out << "study_csv = " << o.study_csv << "\n";
  if (!o.field_csv.empty()) out << "field_csv = " << o.field_csv << "\n";
  if (o.grid_nx > 0) {
    out << "field_grid = " << o.grid_nx << " " << o.grid_ny << "\n";
  }
  out << "seed = " << o.seed << "\n";
  out << "workers = " << o.workers << "\n";

  const SweepConfig& sw = cfg.sweep;
  out << "\n[sweep]\n";
  out << "family = " << (sw.family == BasisFamily::pw ? "pw" : "ghp") << "\n";
  out << "k = " << fmt(sw.k) << "\n";
  out << "h_values =";
  for (double h : sw.h_values) out << " " << fmt(h);
  out << "\n";
  if (!sw.orders.empty()) {
    out << "orders =";
    for (int p : sw.orders) out << " " << p;
    out << "\n";
  }
  out << "scaled = " << (sw.scaled ? "true" : "false") << "\n";
  out << "csv = " << sw.csv << "\n";
  return out.str();
}

}  // namespace trefftz
