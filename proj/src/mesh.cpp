#include "steklov/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <istream>
#include <map>
#include <numbers>
#include <ostream>
#include <set>
#include <sstream>
#include <unordered_map>

#include "steklov/errors.hpp"
#include "steklov/io.hpp"

namespace steklov {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kEdgeSlack = 1.5;

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

std::uint64_t edge_key(int a, int b) {
  const auto lo = static_cast<std::uint64_t>(std::min(a, b));
  const auto hi = static_cast<std::uint64_t>(std::max(a, b));
  return (lo << 32) | hi;
}

double cross(const Point2& a, const Point2& b) { return a.x() * b.y() - a.y() * b.x(); }

double tri_area(const Point2& a, const Point2& b, const Point2& c) { return 0.5 * cross(b - a, c - a); }

Point2 polygon_centroid(const std::vector<Point2>& poly) {
  double a2 = 0.0;
  Point2 c = Point2::Zero();
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const Point2& p = poly[i];
    const Point2& q = poly[(i + 1) % poly.size()];
    const double w = cross(p, q);
    a2 += w;
    c += w * (p + q);
  }
  return c / (3.0 * a2);
}

// Smooth closed boundary curve with an angular parameter.
struct SmoothCurve {
  std::function<Point2(double)> point;
  std::function<double(double)> speed;  // |c'(θ)|
};

SmoothCurve smooth_curve(const DomainShape& shape) {
  return std::visit(
      overloaded{
          [](const Disk& s) {
            return SmoothCurve{[r = s.radius](double t) { return Point2(r * std::cos(t), r * std::sin(t)); },
                               [r = s.radius](double) { return r; }};
          },
          [](const Ellipse& s) {
            return SmoothCurve{[s](double t) { return Point2(s.a * std::cos(t), s.b * std::sin(t)); },
                               [s](double t) { return std::hypot(s.a * std::sin(t), s.b * std::cos(t)); }};
          },
          [](const PerturbedDisk& s) {
            return SmoothCurve{[s](double t) {
                                 const double r = perturbed_radius(s, t);
                                 return Point2(r * std::cos(t), r * std::sin(t));
                               },
                               [s](double t) {
                                 const double r = perturbed_radius(s, t);
                                 const double dr = -s.eps * s.k * std::sin(s.k * t);
                                 return std::hypot(r, dr);
                               }};
          },
          [](const auto&) -> SmoothCurve { fail(ErrorCode::InvalidShape, "shape has no smooth parameterization"); },
      },
      shape);
}

// Number of uniform refinements needed so spokes of length `spoke` drop below the slack bound.
int levels_for(double spoke, double h) {
  int levels = 0;
  while (spoke / std::ldexp(1.0, levels) > kEdgeSlack * h) ++levels;
  return levels;
}

TriangleMesh fan(const std::vector<Point2>& ring, const Point2& center) {
  TriangleMesh mesh;
  mesh.vertices.reserve(ring.size() + 1);
  mesh.vertices.push_back(center);
  mesh.vertices.insert(mesh.vertices.end(), ring.begin(), ring.end());
  const int n = static_cast<int>(ring.size());
  for (int i = 0; i < n; ++i) mesh.triangles.push_back({0, 1 + i, 1 + (i + 1) % n});
  return mesh;
}

// Arc-length sampled boundary of a smooth star-shaped shape, fanned from its centroid.
TriangleMesh smooth_coarse_mesh(const DomainShape& shape, double h, int& levels) {
  const SmoothCurve curve = smooth_curve(shape);
  constexpr int kTable = 4096;
  std::vector<double> cumulative(kTable + 1, 0.0);
  const double dt = 2.0 * kPi / kTable;
  double max_spoke = 0.0;
  // Periodic trapezoid rule: spectrally accurate for smooth closed curves.
  for (int j = 0; j < kTable; ++j) {
    const double t0 = j * dt;
    cumulative[j + 1] = cumulative[j] + 0.5 * dt * (curve.speed(t0) + curve.speed(t0 + dt));
    max_spoke = std::max(max_spoke, curve.point(t0).norm());
  }
  const double perimeter = cumulative.back();
  levels = levels_for(max_spoke, h);
  const double spacing = h * std::ldexp(1.0, levels);
  const int n = std::max(8, static_cast<int>(std::ceil(perimeter / spacing - 1e-9)));

  std::vector<Point2> ring;
  ring.reserve(n);
  for (int i = 0; i < n; ++i) {
    const double target = perimeter * i / n;
    const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), target);
    const int j = std::clamp(static_cast<int>(it - cumulative.begin()) - 1, 0, kTable - 1);
    const double frac = (target - cumulative[j]) / (cumulative[j + 1] - cumulative[j]);
    ring.push_back(curve.point((j + frac) * dt));
  }
  return fan(ring, polygon_centroid(ring));
}

bool star_shaped_about(const std::vector<Point2>& poly, const Point2& c) {
  for (std::size_t i = 0; i < poly.size(); ++i) {
    if (!(tri_area(c, poly[i], poly[(i + 1) % poly.size()]) > 0.0)) return false;
  }
  return true;
}

TriangleMesh ear_clip(const std::vector<Point2>& poly) {
  TriangleMesh mesh;
  mesh.vertices = poly;
  std::vector<int> ring(poly.size());
  for (std::size_t i = 0; i < ring.size(); ++i) ring[i] = static_cast<int>(i);

  auto inside = [&](const Point2& p, const Point2& a, const Point2& b, const Point2& c) {
    return tri_area(a, b, p) >= 0.0 && tri_area(b, c, p) >= 0.0 && tri_area(c, a, p) >= 0.0;
  };

  while (ring.size() > 3) {
    const std::size_t n = ring.size();
    bool clipped = false;
    for (std::size_t i = 0; i < n && !clipped; ++i) {
      const int ia = ring[(i + n - 1) % n], ib = ring[i], ic = ring[(i + 1) % n];
      const Point2 &a = poly[ia], &b = poly[ib], &c = poly[ic];
      if (!(tri_area(a, b, c) > 0.0)) continue;
      bool blocked = false;
      for (int other : ring) {
        if (other == ia || other == ib || other == ic) continue;
        if (inside(poly[other], a, b, c)) {
          blocked = true;
          break;
        }
      }
      if (blocked) continue;
      mesh.triangles.push_back({ia, ib, ic});
      ring.erase(ring.begin() + static_cast<std::ptrdiff_t>(i));
      clipped = true;
    }
    if (!clipped) fail(ErrorCode::NonSimplePolygon, "ear clipping found no ear");
  }
  mesh.triangles.push_back({ring[0], ring[1], ring[2]});
  return mesh;
}

TriangleMesh polygon_coarse_mesh(const std::vector<Point2>& poly, double h, int& levels) {
  const Point2 c = polygon_centroid(poly);
  if (!star_shaped_about(poly, c)) {
    levels = 0;
    return ear_clip(poly);
  }
  double max_spoke = 0.0;
  for (const auto& p : poly) max_spoke = std::max(max_spoke, (p - c).norm());
  levels = levels_for(max_spoke, h);
  const double spacing = h * std::ldexp(1.0, levels);
  std::vector<Point2> ring;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const Point2& a = poly[i];
    const Point2& b = poly[(i + 1) % poly.size()];
    const int pieces = std::max(1, static_cast<int>(std::ceil((b - a).norm() / spacing - 1e-9)));
    for (int k = 0; k < pieces; ++k) ring.push_back(a + (b - a) * (double(k) / pieces));
  }
  return fan(ring, c);
}

TriangleMesh annulus_mesh(const Annulus& s, double h) {
  const int nr = std::max(1, static_cast<int>(std::ceil((s.r_out - s.r_in) / h - 1e-9)));
  const int nt = std::max(8, static_cast<int>(std::ceil(2.0 * kPi * s.r_out / h - 1e-9)));
  TriangleMesh mesh;
  mesh.vertices.reserve(static_cast<std::size_t>((nr + 1) * nt));
  for (int i = 0; i <= nr; ++i) {
    const double r = i == nr ? s.r_out : s.r_in + (s.r_out - s.r_in) * i / nr;
    for (int j = 0; j < nt; ++j) {
      const double t = 2.0 * kPi * j / nt;
      mesh.vertices.emplace_back(r * std::cos(t), r * std::sin(t));
    }
  }
  auto id = [nt](int i, int j) { return i * nt + (j % nt); };
  for (int i = 0; i < nr; ++i) {
    for (int j = 0; j < nt; ++j) {
      const int a = id(i, j), b = id(i + 1, j), c = id(i + 1, j + 1), d = id(i, j + 1);
      mesh.triangles.push_back({a, b, c});
      mesh.triangles.push_back({a, c, d});
    }
  }
  return mesh;
}

}  // namespace

double signed_area(const TriangleMesh& mesh, int t) {
  const auto& tri = mesh.triangles[static_cast<std::size_t>(t)];
  return tri_area(mesh.vertices[tri[0]], mesh.vertices[tri[1]], mesh.vertices[tri[2]]);
}

void rebuild_boundary(TriangleMesh& mesh) {
  struct EdgeUse {
    int count = 0;
    int from = 0, to = 0;
    std::size_t order = 0;
  };
  std::unordered_map<std::uint64_t, EdgeUse> uses;
  uses.reserve(mesh.triangles.size() * 2);
  std::size_t order = 0;
  for (const auto& tri : mesh.triangles) {
    for (int e = 0; e < 3; ++e) {
      const int a = tri[e], b = tri[(e + 1) % 3];
      auto& use = uses[edge_key(a, b)];
      if (use.count++ == 0) {
        use.from = a;
        use.to = b;
        use.order = order++;
      }
    }
  }
  std::vector<const EdgeUse*> open;
  for (const auto& [key, use] : uses) {
    if (use.count == 1) open.push_back(&use);
  }
  std::sort(open.begin(), open.end(), [](const EdgeUse* x, const EdgeUse* y) { return x->order < y->order; });

  std::multimap<int, std::size_t> starting_at;
  for (std::size_t i = 0; i < open.size(); ++i) starting_at.emplace(open[i]->from, i);

  mesh.boundary_edges.clear();
  mesh.boundary_edges.reserve(open.size());
  std::vector<bool> used(open.size(), false);
  int marker = 0;
  for (std::size_t seed = 0; seed < open.size(); ++seed) {
    if (used[seed]) continue;
    std::size_t cur = seed;
    while (!used[cur]) {
      used[cur] = true;
      mesh.boundary_edges.push_back({{open[cur]->from, open[cur]->to}, marker});
      const auto range = starting_at.equal_range(open[cur]->to);
      std::size_t next = cur;
      for (auto it = range.first; it != range.second; ++it) {
        if (!used[it->second]) {
          next = it->second;
          break;
        }
      }
      cur = next;
    }
    ++marker;
  }
}

TriangleMesh refine(const TriangleMesh& mesh, const DomainShape& shape) {
  std::unordered_map<std::uint64_t, int> boundary;
  for (const auto& e : mesh.boundary_edges) boundary.emplace(edge_key(e.v[0], e.v[1]), e.marker);

  TriangleMesh out;
  out.h = mesh.h;
  out.vertices = mesh.vertices;
  out.vertices.reserve(mesh.vertices.size() + mesh.triangles.size() * 3 / 2 + mesh.boundary_edges.size());
  out.triangles.reserve(mesh.triangles.size() * 4);

  std::unordered_map<std::uint64_t, int> midpoint;
  midpoint.reserve(mesh.triangles.size() * 2);
  auto mid = [&](int a, int b) {
    const std::uint64_t key = edge_key(a, b);
    if (auto it = midpoint.find(key); it != midpoint.end()) return it->second;
    const Point2& pa = mesh.vertices[a];
    const Point2& pb = mesh.vertices[b];
    const Point2 p = boundary.count(key) ? boundary_midpoint(shape, pa, pb) : Point2(0.5 * (pa + pb));
    const int id = static_cast<int>(out.vertices.size());
    out.vertices.push_back(p);
    midpoint.emplace(key, id);
    return id;
  };

  for (const auto& tri : mesh.triangles) {
    const int a = tri[0], b = tri[1], c = tri[2];
    const int ab = mid(a, b), bc = mid(b, c), ca = mid(c, a);
    out.triangles.push_back({a, ab, ca});
    out.triangles.push_back({ab, b, bc});
    out.triangles.push_back({ca, bc, c});
    out.triangles.push_back({ab, bc, ca});
  }
  rebuild_boundary(out);
  return out;
}

TriangleMesh build_mesh(const DomainShape& shape, double h) {
  validate(shape);
  if (!(h > 0.0) || !std::isfinite(h)) fail(ErrorCode::InvalidArgument, "mesh size h must be positive");
  const double r = inradius(shape);
  if (h > r) {
    fail(ErrorCode::StepTooCoarse, "h=" + format_label(h) + " exceeds the inradius " + format_label(r));
  }

  int levels = 0;
  TriangleMesh mesh = std::visit(
      overloaded{
          [&](const Annulus& s) { return annulus_mesh(s, h); },
          [&](const Rectangle& s) {
            return polygon_coarse_mesh(
                {Point2(0.0, 0.0), Point2(s.width, 0.0), Point2(s.width, s.height), Point2(0.0, s.height)}, h,
                levels);
          },
          [&](const Polygon& s) { return polygon_coarse_mesh(s.vertices, h, levels); },
          [&](const auto&) { return smooth_coarse_mesh(shape, h, levels); },
      },
      shape);
  rebuild_boundary(mesh);
  for (int i = 0; i < levels; ++i) mesh = refine(mesh, shape);
  for (int guard = 0; max_edge_length(mesh) > kEdgeSlack * h; ++guard) {
    if (guard >= 12) fail(ErrorCode::StepTooCoarse, "refinement did not reach the requested edge length");
    mesh = refine(mesh, shape);
  }
  mesh.h = h;
  for (int t = 0; t < static_cast<int>(mesh.triangles.size()); ++t) {
    if (!(signed_area(mesh, t) > 0.0)) fail(ErrorCode::DegenerateTriangle, "mesh generation inverted a triangle");
  }
  return mesh;
}

Volumes volumes(const TriangleMesh& mesh) {
  Volumes v;
  for (int t = 0; t < static_cast<int>(mesh.triangles.size()); ++t) v.vol += signed_area(mesh, t);
  for (const auto& e : mesh.boundary_edges) v.boundary_vol += (mesh.vertices[e.v[1]] - mesh.vertices[e.v[0]]).norm();
  return v;
}

double max_edge_length(const TriangleMesh& mesh) {
  double best = 0.0;
  for (const auto& tri : mesh.triangles) {
    for (int e = 0; e < 3; ++e) {
      best = std::max(best, (mesh.vertices[tri[e]] - mesh.vertices[tri[(e + 1) % 3]]).norm());
    }
  }
  return best;
}

int boundary_component_count(const TriangleMesh& mesh) {
  int markers = 0;
  for (const auto& e : mesh.boundary_edges) markers = std::max(markers, e.marker + 1);
  return markers;
}

std::vector<int> boundary_vertices(const TriangleMesh& mesh) {
  std::vector<int> ids;
  ids.reserve(mesh.boundary_edges.size() * 2);
  for (const auto& e : mesh.boundary_edges) {
    ids.push_back(e.v[0]);
    ids.push_back(e.v[1]);
  }
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  return ids;
}

void validate_mesh(const TriangleMesh& mesh) {
  const int nv = static_cast<int>(mesh.vertices.size());
  if (mesh.triangles.empty()) fail(ErrorCode::MalformedInput, "mesh has no triangles");
  for (const auto& p : mesh.vertices) {
    if (!p.allFinite()) fail(ErrorCode::MalformedInput, "non-finite vertex coordinate");
  }
  std::vector<bool> referenced(static_cast<std::size_t>(nv), false);
  std::map<std::pair<int, int>, int> directed;
  for (int t = 0; t < static_cast<int>(mesh.triangles.size()); ++t) {
    const auto& tri = mesh.triangles[static_cast<std::size_t>(t)];
    for (int k = 0; k < 3; ++k) {
      if (tri[k] < 0 || tri[k] >= nv) fail(ErrorCode::MalformedInput, "triangle index out of range");
      referenced[static_cast<std::size_t>(tri[k])] = true;
    }
    if (tri[0] == tri[1] || tri[1] == tri[2] || tri[0] == tri[2]) {
      fail(ErrorCode::MalformedInput, "triangle repeats a vertex");
    }
    if (!(signed_area(mesh, t) > 0.0)) {
      fail(ErrorCode::MalformedInput, "triangle " + std::to_string(t) + " is not positively oriented");
    }
    for (int e = 0; e < 3; ++e) {
      if (++directed[{tri[e], tri[(e + 1) % 3]}] > 1) {
        fail(ErrorCode::MalformedInput, "edge used twice with the same orientation");
      }
    }
  }
  if (std::find(referenced.begin(), referenced.end(), false) != referenced.end()) {
    fail(ErrorCode::MalformedInput, "unreferenced vertex");
  }

  std::set<std::pair<int, int>> expected;
  for (const auto& [edge, count] : directed) {
    if (!directed.count({edge.second, edge.first})) expected.insert(edge);
  }
  std::set<std::pair<int, int>> listed;
  for (const auto& e : mesh.boundary_edges) {
    if (!listed.insert({e.v[0], e.v[1]}).second) fail(ErrorCode::MalformedInput, "duplicate boundary edge");
    if (e.marker < 0) fail(ErrorCode::MalformedInput, "negative boundary marker");
  }
  if (listed != expected) {
    fail(ErrorCode::MalformedInput, "boundary edges differ from the edges owned by a single triangle");
  }

  // Connectivity through shared vertices.
  std::vector<int> parent(static_cast<std::size_t>(nv));
  for (int i = 0; i < nv; ++i) parent[static_cast<std::size_t>(i)] = i;
  auto find = [&](int x) {
    while (parent[static_cast<std::size_t>(x)] != x) {
      parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
      x = parent[static_cast<std::size_t>(x)];
    }
    return x;
  };
  for (const auto& tri : mesh.triangles) {
    parent[static_cast<std::size_t>(find(tri[1]))] = find(tri[0]);
    parent[static_cast<std::size_t>(find(tri[2]))] = find(tri[0]);
  }
  const int root = find(0);
  for (int i = 1; i < nv; ++i) {
    if (find(i) != root) fail(ErrorCode::MalformedInput, "mesh is not connected");
  }
}

void write_tmesh(std::ostream& os, const TriangleMesh& mesh) {
  os << mesh.vertices.size() << ' ' << mesh.triangles.size() << ' ' << mesh.boundary_edges.size() << '\n';
  for (const auto& p : mesh.vertices) os << format_number(p.x()) << ' ' << format_number(p.y()) << '\n';
  for (const auto& t : mesh.triangles) os << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
  for (const auto& e : mesh.boundary_edges) os << e.v[0] << ' ' << e.v[1] << ' ' << e.marker << '\n';
}

TriangleMesh read_tmesh(std::istream& is) {
  long long nv = -1, nt = -1, nb = -1;
  if (!(is >> nv >> nt >> nb) || nv < 3 || nt < 1 || nb < 3) {
    fail(ErrorCode::MalformedInput, "bad .tmesh header");
  }
  TriangleMesh mesh;
  mesh.vertices.resize(static_cast<std::size_t>(nv));
  for (auto& p : mesh.vertices) {
    if (!(is >> p.x() >> p.y())) fail(ErrorCode::MalformedInput, "truncated vertex block");
  }
  mesh.triangles.resize(static_cast<std::size_t>(nt));
  for (auto& t : mesh.triangles) {
    if (!(is >> t[0] >> t[1] >> t[2])) fail(ErrorCode::MalformedInput, "truncated triangle block");
  }
  mesh.boundary_edges.resize(static_cast<std::size_t>(nb));
  for (auto& e : mesh.boundary_edges) {
    if (!(is >> e.v[0] >> e.v[1] >> e.marker)) fail(ErrorCode::MalformedInput, "truncated boundary block");
  }
  std::string trailing;
  if (is >> trailing) fail(ErrorCode::MalformedInput, "unexpected trailing content");
  validate_mesh(mesh);
  mesh.h = max_edge_length(mesh);
  return mesh;
}

}  // namespace steklov
