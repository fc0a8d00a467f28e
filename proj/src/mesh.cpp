#include "polyvem/mesh.hpp"

#include "polyvem/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <numeric>
#include <random>
#include <sstream>

namespace polyvem {

namespace {

Real shoelaceArea(const std::vector<Vector2>& loop)
{
  Real a = 0;
  int m = static_cast<int>(loop.size());
  for (int i = 0; i < m; ++i) {
    const Vector2& p = loop[i];
    const Vector2& q = loop[(i + 1) % m];
    a += p.x() * q.y() - q.x() * p.y();
  }
  return 0.5 * a;
}

Vector2 polygonCentroid(const std::vector<Vector2>& loop, Real area)
{
  Vector2 c = Vector2::Zero();
  int m = static_cast<int>(loop.size());
  for (int i = 0; i < m; ++i) {
    const Vector2& p = loop[i];
    const Vector2& q = loop[(i + 1) % m];
    Real cross = p.x() * q.y() - q.x() * p.y();
    c += cross * (p + q);
  }
  return c / (6.0 * area);
}

Real cross2(const Vector2& a, const Vector2& b) { return a.x() * b.y() - a.y() * b.x(); }

bool segmentsIntersect(const Vector2& a, const Vector2& b, const Vector2& c, const Vector2& d)
{
  auto orient = [](const Vector2& p, const Vector2& q, const Vector2& r) {
    return cross2(q - p, r - p);
  };
  Real o1 = orient(a, b, c), o2 = orient(a, b, d);
  Real o3 = orient(c, d, a), o4 = orient(c, d, b);
  return ((o1 > 0) != (o2 > 0)) && ((o3 > 0) != (o4 > 0));
}

bool isSimplePolygon(const std::vector<Vector2>& loop)
{
  int m = static_cast<int>(loop.size());
  for (int i = 0; i < m; ++i) {
    for (int j = i + 1; j < m; ++j) {
      // skip adjacent edges (they share a vertex)
      if (j == i || (j + 1) % m == i || (i + 1) % m == j) continue;
      if (segmentsIntersect(loop[i], loop[(i + 1) % m], loop[j], loop[(j + 1) % m]))
        return false;
    }
  }
  return true;
}

void cacheCellGeometry(Cell& cell, const std::vector<Vertex>& vertices)
{
  std::vector<Vector2> loop;
  loop.reserve(cell.vertexIds.size());
  for (int v : cell.vertexIds) loop.push_back(vertices[v].pos());
  cell.area = shoelaceArea(loop);
  cell.diameter = 0;
  int m = static_cast<int>(loop.size());
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j)
      cell.diameter = std::max(cell.diameter, (loop[i] - loop[j]).norm());
  if (cell.area > 0) cell.centroid = polygonCentroid(loop, cell.area);
}

} // namespace

int PolyMesh::edgeIndex(int a, int b) const
{
  auto it = edgeOfPair.find(std::minmax(a, b));
  return it == edgeOfPair.end() ? -1 : it->second;
}

std::vector<Vector2> PolyMesh::cellLoop(int c) const
{
  std::vector<Vector2> loop;
  loop.reserve(cells[c].vertexIds.size());
  for (int v : cells[c].vertexIds) loop.push_back(vertex(v));
  return loop;
}

Vector2 PolyMesh::outwardNormal(int c, int i) const
{
  const Cell& cell = cells[c];
  int m = cell.nVertices();
  Vector2 a = vertex(cell.vertexIds[i]);
  Vector2 b = vertex(cell.vertexIds[(i + 1) % m]);
  Vector2 t = (b - a).normalized();
  return Vector2(t.y(), -t.x()); // right of the CCW direction
}

Real PolyMesh::totalArea() const
{
  Real s = 0;
  for (const Cell& c : cells) s += c.area;
  return s;
}

PolyMesh buildMesh(std::vector<Vertex> vertices, std::vector<std::vector<int>> cellLoops)
{
  PolyMesh mesh;
  mesh.vertices = std::move(vertices);
  const int nV = mesh.nVertices();
  for (const Vertex& v : mesh.vertices)
    if (!std::isfinite(v.x) || !std::isfinite(v.y))
      throw std::runtime_error("buildMesh: non-finite vertex coordinate");

  mesh.cells.reserve(cellLoops.size());
  for (auto& ids : cellLoops) {
    if (ids.size() < 3) throw std::runtime_error("buildMesh: cell with fewer than 3 vertices");
    for (int v : ids)
      if (v < 0 || v >= nV) throw std::runtime_error("buildMesh: vertex index out of range");
    Cell cell;
    cell.vertexIds = std::move(ids);
    cacheCellGeometry(cell, mesh.vertices);
    if (!(cell.area > 0))
      throw std::runtime_error("buildMesh: cell is not CCW (non-positive signed area)");
    std::vector<Vector2> loop;
    for (int v : cell.vertexIds) loop.push_back(mesh.vertices[v].pos());
    if (!isSimplePolygon(loop)) throw std::runtime_error("buildMesh: self-intersecting cell");
    mesh.cells.push_back(std::move(cell));
  }

  // derive the unique edge set with left/right adjacency
  for (int c = 0; c < mesh.nCells(); ++c) {
    const Cell& cell = mesh.cells[c];
    int m = cell.nVertices();
    for (int i = 0; i < m; ++i) {
      int a = cell.vertexIds[i], b = cell.vertexIds[(i + 1) % m];
      auto key = std::minmax(a, b);
      auto it = mesh.edgeOfPair.find(key);
      if (it == mesh.edgeOfPair.end()) {
        Edge e;
        e.v0 = key.first;
        e.v1 = key.second;
        e.cellLeft = c;
        mesh.edgeOfPair.emplace(key, mesh.nEdges());
        mesh.edges.push_back(e);
      } else {
        Edge& e = mesh.edges[it->second];
        if (e.cellRight >= 0)
          throw std::runtime_error("buildMesh: edge shared by more than two cells");
        e.cellRight = c;
      }
    }
  }

  mesh.boundaryVertex.assign(nV, false);
  std::vector<int> boundaryDegree(nV, 0);
  for (const Edge& e : mesh.edges) {
    if (e.boundary()) {
      mesh.boundaryVertex[e.v0] = true;
      mesh.boundaryVertex[e.v1] = true;
      ++boundaryDegree[e.v0];
      ++boundaryDegree[e.v1];
    }
  }
  for (int v = 0; v < nV; ++v)
    if (boundaryDegree[v] != 0 && boundaryDegree[v] != 2)
      throw std::runtime_error("buildMesh: boundary edges do not form closed loops");

  mesh.h = 0;
  for (const Cell& c : mesh.cells) mesh.h = std::max(mesh.h, c.diameter);
  return mesh;
}

// ------------------------------------------------------------------ genQuad

PolyMesh genQuad(int n)
{
  if (n < 1) throw std::invalid_argument("genQuad: n must be >= 1");
  std::vector<Vertex> verts;
  verts.reserve((n + 1) * (n + 1));
  for (int j = 0; j <= n; ++j)
    for (int i = 0; i <= n; ++i)
      verts.push_back({static_cast<Real>(i) / n, static_cast<Real>(j) / n});
  auto vid = [n](int i, int j) { return j * (n + 1) + i; };
  std::vector<std::vector<int>> cells;
  cells.reserve(n * n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i)
      cells.push_back({vid(i, j), vid(i + 1, j), vid(i + 1, j + 1), vid(i, j + 1)});
  return buildMesh(std::move(verts), std::move(cells));
}

// ------------------------------------------------------------------ genTria

PolyMesh genTria(int n, Real perturb, std::uint64_t rngSeed)
{
  if (n < 1) throw std::invalid_argument("genTria: n must be >= 1");
  if (perturb < 0 || perturb >= 0.3)
    throw std::invalid_argument("genTria: perturb must lie in [0, 0.3)");

  std::vector<Vertex> verts;
  for (int j = 0; j <= n; ++j)
    for (int i = 0; i <= n; ++i)
      verts.push_back({static_cast<Real>(i) / n, static_cast<Real>(j) / n});

  if (perturb > 0) {
    std::mt19937_64 rng(rngSeed);
    auto uniform = [&rng]() { return static_cast<Real>(rng() >> 11) * 0x1.0p-53; };
    for (int j = 1; j < n; ++j)
      for (int i = 1; i < n; ++i) {
        Vertex& v = verts[j * (n + 1) + i];
        v.x += (2 * uniform() - 1) * perturb / n;
        v.y += (2 * uniform() - 1) * perturb / n;
      }
  }

  auto vid = [n](int i, int j) { return j * (n + 1) + i; };
  std::vector<std::vector<int>> cells;
  cells.reserve(2 * n * n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      cells.push_back({vid(i, j), vid(i + 1, j), vid(i + 1, j + 1)});
      cells.push_back({vid(i, j), vid(i + 1, j + 1), vid(i, j + 1)});
    }

  for (const auto& tri : cells) {
    Vector2 a = verts[tri[0]].pos(), b = verts[tri[1]].pos(), c = verts[tri[2]].pos();
    if (cross2(b - a, c - a) <= 0)
      throw std::runtime_error("genTria: perturbation flipped a triangle");
  }
  return buildMesh(std::move(verts), std::move(cells));
}

// --------------------------------------------------------------- genVoronoi

namespace {

// Clip a convex polygon against the half-plane (x - mid).dot(dir) <= 0.
std::vector<Vector2> clipHalfPlane(const std::vector<Vector2>& poly, const Vector2& mid,
                                   const Vector2& dir)
{
  std::vector<Vector2> out;
  int m = static_cast<int>(poly.size());
  out.reserve(m + 1);
  for (int i = 0; i < m; ++i) {
    const Vector2& p = poly[i];
    const Vector2& q = poly[(i + 1) % m];
    Real dp = (p - mid).dot(dir);
    Real dq = (q - mid).dot(dir);
    if (dp <= 0) out.push_back(p);
    if ((dp < 0 && dq > 0) || (dp > 0 && dq < 0)) {
      Real t = dp / (dp - dq);
      out.push_back(p + t * (q - p));
    }
  }
  return out;
}

// Voronoi cell of seeds[s], clipped to the unit square. Seeds are visited in
// increasing distance so clipping can stop once no bisector can still cut.
std::vector<Vector2> voronoiCell(const std::vector<Vector2>& seeds, int s)
{
  std::vector<Vector2> poly = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  const Vector2 si = seeds[s];
  const int n = static_cast<int>(seeds.size());

  std::vector<std::pair<Real, int>> near;
  near.reserve(n - 1);
  for (int t = 0; t < n; ++t)
    if (t != s) near.emplace_back((seeds[t] - si).squaredNorm(), t);
  // only a handful of nearest seeds ever matter; sort a generous prefix first
  const int prefix = std::min<int>(static_cast<int>(near.size()), 64);
  std::partial_sort(near.begin(), near.begin() + prefix, near.end());
  bool sortedAll = prefix == static_cast<int>(near.size());

  size_t idx = 0;
  while (idx < near.size() && !poly.empty()) {
    if (!sortedAll && idx == static_cast<size_t>(prefix)) {
      std::sort(near.begin() + prefix, near.end());
      sortedAll = true;
    }
    Real maxR2 = 0;
    for (const Vector2& p : poly) maxR2 = std::max(maxR2, (p - si).squaredNorm());
    if (near[idx].first > 4.0 * maxR2) break; // bisector further than any vertex
    const Vector2 st = seeds[near[idx].second];
    poly = clipHalfPlane(poly, 0.5 * (si + st), st - si);
    ++idx;
  }
  return poly;
}

} // namespace

Real cvtEnergy(const std::vector<Vector2>& seeds)
{
  Real energy = 0;
  for (int s = 0; s < static_cast<int>(seeds.size()); ++s) {
    auto poly = voronoiCell(seeds, s);
    if (poly.size() < 3) continue;
    QuadRule rule = polygonRule(poly, 2);
    for (int q = 0; q < rule.size(); ++q)
      energy += rule.weights[q] * (rule.point(q) - seeds[s]).squaredNorm();
  }
  return energy;
}

std::vector<Vector2> lloydStep(const std::vector<Vector2>& seeds)
{
  std::vector<Vector2> next = seeds;
  for (int s = 0; s < static_cast<int>(seeds.size()); ++s) {
    auto poly = voronoiCell(seeds, s);
    if (poly.size() < 3) continue;
    Real area = shoelaceArea(poly);
    if (area > 0) next[s] = polygonCentroid(poly, area);
  }
  return next;
}

PolyMesh genVoronoi(int nSeeds, int lloydIters, std::uint64_t rngSeed)
{
  if (nSeeds < 1) throw std::invalid_argument("genVoronoi: nSeeds must be >= 1");
  std::vector<Vector2> seeds;
  if (nSeeds == 1) {
    seeds.push_back({0.5, 0.5});
  } else {
    std::mt19937_64 rng(rngSeed);
    auto uniform = [&rng]() { return static_cast<Real>(rng() >> 11) * 0x1.0p-53; };
    seeds.reserve(nSeeds);
    for (int s = 0; s < nSeeds; ++s) seeds.push_back({uniform(), uniform()});
  }
  return genVoronoi(std::move(seeds), lloydIters);
}

PolyMesh genVoronoi(std::vector<Vector2> seeds, int lloydIters)
{
  const int nSeeds = static_cast<int>(seeds.size());
  if (nSeeds < 1) throw std::invalid_argument("genVoronoi: need at least one seed");
  if (lloydIters < 0) throw std::invalid_argument("genVoronoi: lloydIters must be >= 0");
  for (int a = 0; a < nSeeds; ++a)
    for (int b = a + 1; b < nSeeds; ++b)
      if ((seeds[a] - seeds[b]).squaredNorm() < 1e-24)
        throw std::runtime_error("genVoronoi: duplicate seeds");

  for (int it = 0; it < lloydIters; ++it) {
    std::vector<Vector2> next = lloydStep(seeds);
    Real move2 = 0;
    for (int s = 0; s < nSeeds; ++s) move2 = std::max(move2, (next[s] - seeds[s]).squaredNorm());
    seeds = std::move(next);
    if (move2 < 1e-24) break;
  }

  // gather cell loops, then weld coincident corner coordinates
  std::vector<std::vector<Vector2>> loops(nSeeds);
  for (int s = 0; s < nSeeds; ++s) {
    loops[s] = voronoiCell(seeds, s);
    if (loops[s].size() < 3) throw std::runtime_error("genVoronoi: empty clipped cell");
  }

  struct Corner {
    Vector2 p;
    int cell;
    int slot;
  };
  std::vector<Corner> corners;
  for (int s = 0; s < nSeeds; ++s)
    for (int i = 0; i < static_cast<int>(loops[s].size()); ++i)
      corners.push_back({loops[s][i], s, i});

  const Real weldTol = 1e-9;
  std::vector<int> order(corners.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&corners](int a, int b) {
    if (corners[a].p.x() != corners[b].p.x()) return corners[a].p.x() < corners[b].p.x();
    return corners[a].p.y() < corners[b].p.y();
  });

  std::vector<int> vertexOf(corners.size(), -1);
  std::vector<Vertex> verts;
  for (size_t oi = 0; oi < order.size(); ++oi) {
    int ci = order[oi];
    if (vertexOf[ci] >= 0) continue;
    int id = static_cast<int>(verts.size());
    verts.push_back({corners[ci].p.x(), corners[ci].p.y()});
    vertexOf[ci] = id;
    // sweep forward while x stays within tolerance
    for (size_t oj = oi + 1; oj < order.size(); ++oj) {
      int cj = order[oj];
      if (corners[cj].p.x() - corners[ci].p.x() > weldTol) break;
      if (vertexOf[cj] < 0 && std::abs(corners[cj].p.y() - corners[ci].p.y()) <= weldTol)
        vertexOf[cj] = id;
    }
  }

  std::vector<std::vector<int>> cellIds(nSeeds);
  {
    size_t c = 0;
    for (int s = 0; s < nSeeds; ++s)
      for (size_t i = 0; i < loops[s].size(); ++i, ++c) cellIds[s].push_back(vertexOf[c]);
  }
  for (auto& ids : cellIds) {
    std::vector<int> clean;
    for (size_t i = 0; i < ids.size(); ++i)
      if (ids[i] != ids[(i + 1) % ids.size()]) clean.push_back(ids[i]);
    ids = std::move(clean);
    if (ids.size() < 3) throw std::runtime_error("genVoronoi: degenerate cell after welding");
  }

  // merge near-zero-area cells into the neighbor across their longest edge
  for (size_t c = 0; c < cellIds.size();) {
    std::vector<Vector2> loop;
    for (int v : cellIds[c]) loop.push_back(verts[v].pos());
    if (shoelaceArea(loop) >= 1e-12) {
      ++c;
      continue;
    }
    int m = static_cast<int>(cellIds[c].size());
    int bestEdge = 0;
    Real bestLen = -1;
    for (int i = 0; i < m; ++i) {
      Real len = (loop[(i + 1) % m] - loop[i]).norm();
      if (len > bestLen) {
        bestLen = len;
        bestEdge = i;
      }
    }
    int a = cellIds[c][bestEdge], b = cellIds[c][(bestEdge + 1) % m];
    int host = -1, hostPos = -1;
    for (size_t d = 0; d < cellIds.size() && host < 0; ++d) {
      if (d == c) continue;
      int md = static_cast<int>(cellIds[d].size());
      for (int i = 0; i < md; ++i)
        if (cellIds[d][i] == b && cellIds[d][(i + 1) % md] == a) {
          host = static_cast<int>(d);
          hostPos = i;
          break;
        }
    }
    if (host < 0) throw std::runtime_error("genVoronoi: cannot merge degenerate cell");
    // splice the sliver's remaining loop into the host in place of edge (b,a)
    std::vector<int> merged;
    int md = static_cast<int>(cellIds[host].size());
    for (int i = 0; i <= hostPos; ++i) merged.push_back(cellIds[host][i]);
    for (int i = 1; i < m - 1; ++i) merged.push_back(cellIds[c][(bestEdge + 1 + i) % m]);
    for (int i = hostPos + 1; i < md; ++i) merged.push_back(cellIds[host][i]);
    cellIds[host] = std::move(merged);
    cellIds.erase(cellIds.begin() + c);
  }

  return buildMesh(std::move(verts), std::move(cellIds));
}

// -------------------------------------------------------------------- audit

MeshQualityReport auditMesh(const PolyMesh& mesh)
{
  MeshQualityReport report;
  report.edgeRatio.reserve(mesh.nCells());
  report.starRatio.reserve(mesh.nCells());
  for (int c = 0; c < mesh.nCells(); ++c) {
    const Cell& cell = mesh.cells[c];
    auto loop = mesh.cellLoop(c);
    int m = cell.nVertices();
    Real minEdge = std::numeric_limits<Real>::max();
    Real kernelRadius = std::numeric_limits<Real>::max();
    for (int i = 0; i < m; ++i) {
      Vector2 a = loop[i], b = loop[(i + 1) % m];
      minEdge = std::min(minEdge, (b - a).norm());
      // signed distance of the centroid to the edge line, positive inside
      Vector2 t = (b - a).normalized();
      Vector2 inward(-t.y(), t.x());
      kernelRadius = std::min(kernelRadius, (cell.centroid - a).dot(inward));
    }
    Real er = minEdge / cell.diameter;
    Real sr = std::max<Real>(kernelRadius, 0) / cell.diameter;
    report.edgeRatio.push_back(er);
    report.starRatio.push_back(sr);
    report.minEdgeRatio = std::min(report.minEdgeRatio, er);
    report.minStarRatio = std::min(report.minStarRatio, sr);
  }
  return report;
}

// ----------------------------------------------------------------- exchange

std::string writeMesh(const PolyMesh& mesh)
{
  std::string out = "polyvem-mesh 1\n";
  out += std::to_string(mesh.nVertices()) + " " + std::to_string(mesh.nCells()) + "\n";
  char buf[80];
  for (const Vertex& v : mesh.vertices) {
    std::snprintf(buf, sizeof buf, "%.17g %.17g\n", v.x, v.y);
    out += buf;
  }
  for (const Cell& c : mesh.cells) {
    out += std::to_string(c.nVertices());
    for (int v : c.vertexIds) out += " " + std::to_string(v);
    out += "\n";
  }
  return out;
}

PolyMesh readMesh(const std::string& bytes)
{
  std::istringstream in(bytes);
  std::string magic;
  int version = 0;
  in >> magic >> version;
  if (!in || magic != "polyvem-mesh" || version != 1)
    throw MeshIoError("readMesh: malformed header");
  int nV = 0, nC = 0;
  in >> nV >> nC;
  if (!in || nV < 3 || nC < 1) throw MeshIoError("readMesh: malformed counts");
  std::vector<Vertex> verts(nV);
  for (int v = 0; v < nV; ++v) {
    in >> verts[v].x >> verts[v].y;
    if (!in) throw MeshIoError("readMesh: truncated vertex list");
  }
  std::vector<std::vector<int>> cells(nC);
  for (int c = 0; c < nC; ++c) {
    int m = 0;
    in >> m;
    if (!in || m < 3) throw MeshIoError("readMesh: malformed cell record");
    cells[c].resize(m);
    for (int i = 0; i < m; ++i) {
      in >> cells[c][i];
      if (!in) throw MeshIoError("readMesh: truncated cell record");
      if (cells[c][i] < 0 || cells[c][i] >= nV)
        throw MeshIoError("readMesh: vertex index out of range");
    }
  }
  try {
    return buildMesh(std::move(verts), std::move(cells));
  } catch (const std::exception& e) {
    throw MeshIoError(std::string("readMesh: ") + e.what());
  }
}

} // namespace polyvem
