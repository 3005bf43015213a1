#include "trefftz/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace trefftz {

namespace {

[[noreturn]] void fail(const std::string& msg) {
  throw std::runtime_error("mesh: " + msg);
}

struct EdgeFragment {
  int elem = -1;
  Vec2 a, b;
  Vec2 mid;
  int partner = -1;  // index of the matching fragment on the other side
};

// Parameter of p along segment [a, b] if collinear and interior; -1 otherwise.
double interior_param(Vec2 a, Vec2 b, Vec2 p, double tol) {
  const Vec2 t = b - a;
  const double len2 = dot(t, t);
  if (std::abs(cross(t, p - a)) > tol * std::sqrt(len2)) return -1.0;
  const double s = dot(p - a, t) / len2;
  const double ptol = tol / std::sqrt(len2);
  if (s <= ptol || s >= 1.0 - ptol) return -1.0;
  return s;
}

}  // namespace

Polygon Mesh::element_polygon(int e) const {
  Polygon poly;
  for (int v : elements[e]) poly.push_back(vertices[v]);
  return poly;
}

double Mesh::max_diameter() const {
  double h = 0.0;
  for (const auto& m : metrics) h = std::max(h, m.diameter);
  return h;
}

bool Mesh::has_robin_facet() const {
  return std::any_of(facets.begin(), facets.end(), [](const Facet& f) {
    return f.kind == FacetKind::robin;
  });
}

int Mesh::num_side_incidences() const {
  int n = 0;
  for (const auto& f : facets) n += (f.kind == FacetKind::interior) ? 2 : 1;
  return n;
}

void finalize_mesh(Mesh& mesh) {
  const int ne = mesh.num_elements();
  if (ne == 0) fail("mesh has no elements");
  double scale = 0.0;

  mesh.metrics.assign(ne, {});
  for (int e = 0; e < ne; ++e) {
    const auto& el = mesh.elements[e];
    if (el.size() < 3) fail("element " + std::to_string(e) + " has fewer than 3 vertices");
    for (int v : el) {
      if (v < 0 || v >= static_cast<int>(mesh.vertices.size())) {
        fail("element " + std::to_string(e) + " references invalid vertex " +
             std::to_string(v));
      }
    }
    const Polygon poly = mesh.element_polygon(e);
    if (!polygon_is_simple(poly)) {
      fail("element " + std::to_string(e) + " is not a simple polygon");
    }
    const double area = polygon_area_signed(poly);
    if (area <= 0.0) {
      fail("element " + std::to_string(e) +
           " has clockwise or degenerate vertex order");
    }
    ElementMetrics& m = mesh.metrics[e];
    m.area = area;
    m.diameter = polygon_diameter(poly);
    m.centroid = polygon_centroid(poly);
    m.inradius_proxy = distance_to_boundary(m.centroid, poly);
    scale = std::max(scale, m.diameter);
  }
  const double tol = 1e-9 * scale;

  // Collect directed element edges and split them at hanging nodes: any
  // vertex of a collinear overlapping edge of another element breaks this
  // edge into fragments, so every stored facet has at most two sides.
  struct Edge {
    int elem;
    Vec2 a, b;
  };
  std::vector<Edge> edges;
  for (int e = 0; e < ne; ++e) {
    const auto& el = mesh.elements[e];
    for (std::size_t i = 0; i < el.size(); ++i) {
      edges.push_back({e, mesh.vertices[el[i]],
                       mesh.vertices[el[(i + 1) % el.size()]]});
    }
  }

  std::vector<EdgeFragment> fragments;
  for (const Edge& ed : edges) {
    std::vector<double> params{0.0, 1.0};
    for (const Edge& other : edges) {
      if (other.elem == ed.elem) continue;
      for (const Vec2 p : {other.a, other.b}) {
        const double s = interior_param(ed.a, ed.b, p, tol);
        if (s >= 0.0) params.push_back(s);
      }
    }
    std::sort(params.begin(), params.end());
    const double ptol = tol / std::max(norm(ed.b - ed.a), 1e-300);
    for (std::size_t i = 0; i + 1 < params.size(); ++i) {
      if (params[i + 1] - params[i] <= ptol) continue;
      EdgeFragment f;
      f.elem = ed.elem;
      f.a = ed.a + params[i] * (ed.b - ed.a);
      f.b = ed.a + params[i + 1] * (ed.b - ed.a);
      f.mid = 0.5 * (f.a + f.b);
      fragments.push_back(f);
    }
  }

  // Pair up coincident fragments from different elements.
  for (std::size_t i = 0; i < fragments.size(); ++i) {
    for (std::size_t j = i + 1; j < fragments.size(); ++j) {
      if (norm(fragments[i].mid - fragments[j].mid) > tol) continue;
      if (fragments[i].elem == fragments[j].elem) {
        fail("element " + std::to_string(fragments[i].elem) +
             " has coincident edges");
      }
      if (fragments[i].partner >= 0 || fragments[j].partner >= 0) {
        fail("more than two elements share a facet near (" +
             std::to_string(fragments[i].mid.x) + ", " +
             std::to_string(fragments[i].mid.y) + ")");
      }
      fragments[i].partner = static_cast<int>(j);
      fragments[j].partner = static_cast<int>(i);
    }
  }

  mesh.facets.clear();
  for (std::size_t i = 0; i < fragments.size(); ++i) {
    const EdgeFragment& f = fragments[i];
    Facet facet;
    facet.a = f.a;
    facet.b = f.b;
    facet.length = norm(f.b - f.a);
    const Vec2 t = f.b - f.a;
    facet.normal = {t.y / facet.length, -t.x / facet.length};
    if (f.partner >= 0) {
      if (static_cast<std::size_t>(f.partner) < i) continue;  // already emitted
      const EdgeFragment& g = fragments[f.partner];
      facet.kind = FacetKind::interior;
      facet.elem1 = std::min(f.elem, g.elem);
      facet.elem2 = std::max(f.elem, g.elem);
      if (facet.elem1 != f.elem) {
        // Re-orient along elem1's edge so the stored normal leaves elem1.
        facet.a = g.a;
        facet.b = g.b;
        const Vec2 gt = facet.b - facet.a;
        facet.normal = {gt.y / facet.length, -gt.x / facet.length};
      }
    } else {
      // Boundary fragment: must be covered by exactly one tagged segment.
      int found = -1;
      for (std::size_t bi = 0; bi < mesh.boundary.size(); ++bi) {
        const BoundaryEdge& be = mesh.boundary[bi];
        if (be.va < 0 || be.va >= static_cast<int>(mesh.vertices.size()) ||
            be.vb < 0 || be.vb >= static_cast<int>(mesh.vertices.size())) {
          fail("boundary tag references invalid vertex");
        }
        const Vec2 a = mesh.vertices[be.va], b = mesh.vertices[be.vb];
        const Vec2 s = b - a;
        const double len = norm(s);
        if (len <= tol) fail("boundary tag segment is degenerate");
        if (std::abs(cross(s, f.mid - a)) > tol * len) continue;
        const double u = dot(f.mid - a, s) / (len * len);
        if (u < -tol / len || u > 1.0 + tol / len) continue;
        if (found >= 0 && mesh.boundary[found].tag != be.tag) {
          fail("conflicting boundary tags cover facet at (" +
               std::to_string(f.mid.x) + ", " + std::to_string(f.mid.y) + ")");
        }
        found = static_cast<int>(bi);
      }
      if (found < 0) {
        fail("untagged boundary facet at (" + std::to_string(f.mid.x) + ", " +
             std::to_string(f.mid.y) + ")");
      }
      facet.kind = mesh.boundary[found].tag == BoundaryTag::robin
                       ? FacetKind::robin
                       : FacetKind::dirichlet;
      facet.elem1 = f.elem;
    }
    mesh.facets.push_back(facet);
  }

  if (!mesh.has_robin_facet()) {
    fail("empty Robin boundary: the model problem requires a nonempty "
         "impedance part");
  }
}

Mesh generate_rect_grid(double x0, double y0, double x1, double y1, int nx,
                        int ny, SideTags tags) {
  if (!(x1 > x0) || !(y1 > y0)) fail("generate_rect_grid: empty rectangle");
  if (nx < 1 || ny < 1) fail("generate_rect_grid: grid must be at least 1x1");
  Mesh mesh;
  const auto vid = [nx](int i, int j) { return j * (nx + 1) + i; };
  for (int j = 0; j <= ny; ++j) {
    for (int i = 0; i <= nx; ++i) {
      mesh.vertices.push_back({x0 + (x1 - x0) * i / nx, y0 + (y1 - y0) * j / ny});
    }
  }
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      mesh.elements.push_back(
          {vid(i, j), vid(i + 1, j), vid(i + 1, j + 1), vid(i, j + 1)});
    }
  }
  for (int i = 0; i < nx; ++i) {
    mesh.boundary.push_back({vid(i, 0), vid(i + 1, 0), tags.bottom});
    mesh.boundary.push_back({vid(i, ny), vid(i + 1, ny), tags.top});
  }
  for (int j = 0; j < ny; ++j) {
    mesh.boundary.push_back({vid(0, j), vid(0, j + 1), tags.left});
    mesh.boundary.push_back({vid(nx, j), vid(nx, j + 1), tags.right});
  }
  finalize_mesh(mesh);
  return mesh;
}

namespace {

std::string next_token_line(std::istream& in, int& lineno) {
  std::string line;
  while (std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    if (line[first] == '#') continue;
    return line;
  }
  return {};
}

}  // namespace

Mesh load_mesh(std::istream& in) {
  Mesh mesh;
  int lineno = 0;
  const auto expect_header = [&](const std::string& key) -> int {
    const std::string line = next_token_line(in, lineno);
    std::istringstream ss(line);
    std::string word;
    int count = -1;
    if (!(ss >> word >> count) || word != key || count < 0) {
      fail("expected '" + key + " <count>' at line " + std::to_string(lineno));
    }
    return count;
  };

  const int nv = expect_header("vertices");
  for (int i = 0; i < nv; ++i) {
    std::istringstream ss(next_token_line(in, lineno));
    Vec2 v;
    if (!(ss >> v.x >> v.y)) {
      fail("malformed vertex at line " + std::to_string(lineno));
    }
    mesh.vertices.push_back(v);
  }
  const int ne = expect_header("elements");
  for (int i = 0; i < ne; ++i) {
    std::istringstream ss(next_token_line(in, lineno));
    int k = 0;
    if (!(ss >> k) || k < 3) {
      fail("malformed element at line " + std::to_string(lineno));
    }
    std::vector<int> el(k);
    for (int& v : el) {
      if (!(ss >> v)) fail("malformed element at line " + std::to_string(lineno));
    }
    mesh.elements.push_back(std::move(el));
  }
  const int nb = expect_header("boundary");
  for (int i = 0; i < nb; ++i) {
    std::istringstream ss(next_token_line(in, lineno));
    BoundaryEdge be;
    std::string tag;
    if (!(ss >> be.va >> be.vb >> tag) || (tag != "D" && tag != "R")) {
      fail("malformed boundary line " + std::to_string(lineno) +
           " (expected 'va vb D|R')");
    }
    be.tag = tag == "R" ? BoundaryTag::robin : BoundaryTag::dirichlet;
    mesh.boundary.push_back(be);
  }
  finalize_mesh(mesh);
  return mesh;
}

Mesh load_mesh(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail("cannot open mesh file '" + path + "'");
  return load_mesh(in);
}

void save_mesh(const Mesh& mesh, std::ostream& out) {
  out << "vertices " << mesh.vertices.size() << "\n";
  out.precision(17);
  for (const Vec2& v : mesh.vertices) out << v.x << " " << v.y << "\n";
  out << "elements " << mesh.elements.size() << "\n";
  for (const auto& el : mesh.elements) {
    out << el.size();
    for (int v : el) out << " " << v;
    out << "\n";
  }
  out << "boundary " << mesh.boundary.size() << "\n";
  for (const BoundaryEdge& be : mesh.boundary) {
    out << be.va << " " << be.vb << " "
        << (be.tag == BoundaryTag::robin ? "R" : "D") << "\n";
  }
}

}  // namespace trefftz
