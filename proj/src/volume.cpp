#include "airway/volume.hpp"

#include <algorithm>
#include <array>
#include <stdexcept>
#include <string>

namespace airway {

void Geometry::validate() const {
  if (dims.x < 1 || dims.y < 1 || dims.z < 1)
    throw std::invalid_argument("volume dims must all be >= 1");
  if (spacing.x <= 0 || spacing.y <= 0 || spacing.z <= 0)
    throw std::invalid_argument("volume spacing must all be > 0");
}

void require_same_geometry(const Geometry& a, const Geometry& b, const char* what) {
  if (!(a == b))
    throw std::invalid_argument(std::string("geometry mismatch in ") + what);
}

namespace {
[[noreturn]] void out_of_range(int x, int y, int z) {
  throw std::out_of_range("voxel index (" + std::to_string(x) + "," + std::to_string(y) +
                          "," + std::to_string(z) + ") out of range");
}
}  // namespace

ScalarVolume::ScalarVolume(Index3 dims, Vec3 spacing, Vec3 origin, float fill)
    : geom{dims, spacing, origin} {
  geom.validate();
  values.assign(geom.voxel_count(), fill);
}

ScalarVolume::ScalarVolume(const Geometry& g, float fill) : geom(g) {
  geom.validate();
  values.assign(geom.voxel_count(), fill);
}

float ScalarVolume::at(int x, int y, int z) const {
  if (!geom.contains(x, y, z)) out_of_range(x, y, z);
  return values[geom.index(x, y, z)];
}

float& ScalarVolume::at(int x, int y, int z) {
  if (!geom.contains(x, y, z)) out_of_range(x, y, z);
  return values[geom.index(x, y, z)];
}

float ScalarVolume::sample_trilinear(const Vec3& c, float outside) const {
  const double nx = geom.dims.x, ny = geom.dims.y, nz = geom.dims.z;
  if (c.x < -0.5 || c.y < -0.5 || c.z < -0.5 || c.x > nx - 0.5 || c.y > ny - 0.5 ||
      c.z > nz - 0.5)
    return outside;
  const double cx = std::clamp(c.x, 0.0, nx - 1.0);
  const double cy = std::clamp(c.y, 0.0, ny - 1.0);
  const double cz = std::clamp(c.z, 0.0, nz - 1.0);
  const int x0 = static_cast<int>(cx), y0 = static_cast<int>(cy), z0 = static_cast<int>(cz);
  const int x1 = std::min(x0 + 1, geom.dims.x - 1);
  const int y1 = std::min(y0 + 1, geom.dims.y - 1);
  const int z1 = std::min(z0 + 1, geom.dims.z - 1);
  const double fx = cx - x0, fy = cy - y0, fz = cz - z0;
  auto v = [&](int x, int y, int z) -> double { return values[geom.index(x, y, z)]; };
  const double c00 = v(x0, y0, z0) * (1 - fx) + v(x1, y0, z0) * fx;
  const double c10 = v(x0, y1, z0) * (1 - fx) + v(x1, y1, z0) * fx;
  const double c01 = v(x0, y0, z1) * (1 - fx) + v(x1, y0, z1) * fx;
  const double c11 = v(x0, y1, z1) * (1 - fx) + v(x1, y1, z1) * fx;
  const double c0 = c00 * (1 - fy) + c10 * fy;
  const double c1 = c01 * (1 - fy) + c11 * fy;
  return static_cast<float>(c0 * (1 - fz) + c1 * fz);
}

BinaryMask::BinaryMask(Index3 dims, Vec3 spacing, Vec3 origin, bool fill)
    : geom{dims, spacing, origin} {
  geom.validate();
  values.assign(geom.voxel_count(), fill ? 1 : 0);
}

BinaryMask::BinaryMask(const Geometry& g, bool fill) : geom(g) {
  geom.validate();
  values.assign(geom.voxel_count(), fill ? 1 : 0);
}

bool BinaryMask::at(int x, int y, int z) const {
  if (!geom.contains(x, y, z)) out_of_range(x, y, z);
  return values[geom.index(x, y, z)] != 0;
}

void BinaryMask::set(int x, int y, int z, bool v) {
  if (!geom.contains(x, y, z)) out_of_range(x, y, z);
  values[geom.index(x, y, z)] = v ? 1 : 0;
}

std::size_t BinaryMask::count() const {
  std::size_t n = 0;
  for (auto b : values) n += b != 0;
  return n;
}

std::int32_t LabelMap::at(int x, int y, int z) const {
  if (!geom.contains(x, y, z)) out_of_range(x, y, z);
  return values[geom.index(x, y, z)];
}

// ---------------------------------------------------------------------------
// Connected components: BFS flood fill in scanline order. Deterministic by
// construction; the partition does not depend on the visiting order.
// ---------------------------------------------------------------------------

namespace {

std::vector<Index3> adjacency_offsets(int connectivity) {
  if (connectivity != 6 && connectivity != 26)
    throw std::invalid_argument("connectivity must be 6 or 26");
  std::vector<Index3> offs;
  for (int dz = -1; dz <= 1; ++dz)
    for (int dy = -1; dy <= 1; ++dy)
      for (int dx = -1; dx <= 1; ++dx) {
        if (dx == 0 && dy == 0 && dz == 0) continue;
        if (connectivity == 6 && std::abs(dx) + std::abs(dy) + std::abs(dz) != 1) continue;
        offs.push_back({dx, dy, dz});
      }
  return offs;
}

}  // namespace

LabelMap connected_components(const BinaryMask& m, int connectivity) {
  const auto offs = adjacency_offsets(connectivity);
  LabelMap out;
  out.geom = m.geom;
  out.values.assign(m.values.size(), 0);

  std::vector<std::size_t> stack;
  int next_label = 0;
  const Index3 d = m.geom.dims;
  for (int z = 0; z < d.z; ++z)
    for (int y = 0; y < d.y; ++y)
      for (int x = 0; x < d.x; ++x) {
        const std::size_t i = m.geom.index(x, y, z);
        if (!m.values[i] || out.values[i] != 0) continue;
        ++next_label;
        out.values[i] = next_label;
        stack.assign(1, i);
        while (!stack.empty()) {
          const std::size_t cur = stack.back();
          stack.pop_back();
          const int cz = static_cast<int>(cur / (static_cast<std::size_t>(d.x) * d.y));
          const std::size_t rem = cur % (static_cast<std::size_t>(d.x) * d.y);
          const int cy = static_cast<int>(rem / d.x);
          const int cx = static_cast<int>(rem % d.x);
          for (const auto& o : offs) {
            const int nx = cx + o.x, ny = cy + o.y, nz = cz + o.z;
            if (!m.geom.contains(nx, ny, nz)) continue;
            const std::size_t ni = m.geom.index(nx, ny, nz);
            if (m.values[ni] && out.values[ni] == 0) {
              out.values[ni] = next_label;
              stack.push_back(ni);
            }
          }
        }
      }
  out.component_count = next_label;
  return out;
}

// ---------------------------------------------------------------------------
// Thinning. A voxel is deleted only if it is a simple point: removing it
// changes neither the 26-connectivity of the foreground nor the
// 6-connectivity of the background. Deletions run sequentially inside each
// of six directional subiterations (U,D,N,S,E,W border voxels in turn), so
// topology is preserved exactly and the result is deterministic. Curve
// endpoints (exactly one foreground neighbor) are kept.
// ---------------------------------------------------------------------------

namespace {

// Cell i in the 3x3x3 neighborhood, center excluded where noted.
inline int cell_of(int dx, int dy, int dz) { return (dx + 1) + 3 * ((dy + 1) + 3 * (dz + 1)); }

struct NeighborhoodTables {
  // Adjacency between the 27 cells (center is a cell too but traversals skip it).
  std::array<int, 27> adj26_count{};
  std::array<std::array<int, 26>, 27> adj26{};
  std::array<int, 27> adj6_count{};
  std::array<std::array<int, 6>, 27> adj6{};
  std::array<bool, 27> in_n18{};
  std::array<bool, 27> is_face{};  // 6-neighbors of the center

  NeighborhoodTables() {
    auto coord = [](int c) { return Index3{c % 3 - 1, (c / 3) % 3 - 1, c / 9 - 1}; };
    for (int a = 0; a < 27; ++a) {
      const Index3 pa = coord(a);
      const int manhattan = std::abs(pa.x) + std::abs(pa.y) + std::abs(pa.z);
      in_n18[a] = manhattan >= 1 && manhattan <= 2;
      is_face[a] = manhattan == 1;
      int n26 = 0, n6 = 0;
      for (int b = 0; b < 27; ++b) {
        if (a == b) continue;
        const Index3 pb = coord(b);
        const int dx = std::abs(pa.x - pb.x), dy = std::abs(pa.y - pb.y),
                  dz = std::abs(pa.z - pb.z);
        if (std::max(dx, std::max(dy, dz)) == 1) adj26[a][n26++] = b;
        if (dx + dy + dz == 1) adj6[a][n6++] = b;
      }
      adj26_count[a] = n26;
      adj6_count[a] = n6;
    }
  }
};

const NeighborhoodTables& tables() {
  static const NeighborhoodTables t;
  return t;
}

// Gathers the 27 neighborhood occupancy bits around (x,y,z).
inline void gather(const BinaryMask& m, int x, int y, int z, std::array<bool, 27>& fg) {
  const Index3 d = m.geom.dims;
  int c = 0;
  for (int dz = -1; dz <= 1; ++dz)
    for (int dy = -1; dy <= 1; ++dy)
      for (int dx = -1; dx <= 1; ++dx, ++c) {
        const int nx = x + dx, ny = y + dy, nz = z + dz;
        fg[c] = nx >= 0 && ny >= 0 && nz >= 0 && nx < d.x && ny < d.y && nz < d.z &&
                m.values[m.geom.index(nx, ny, nz)] != 0;
      }
}

int count_fg_neighbors(const std::array<bool, 27>& fg) {
  int n = 0;
  for (int c = 0; c < 27; ++c)
    if (c != 13 && fg[c]) ++n;
  return n;
}

bool simple_from_bits(const std::array<bool, 27>& fg) {
  const auto& t = tables();
  // Foreground: exactly one 26-component among the 26 neighbors.
  std::array<bool, 27> seen{};
  int fg_components = 0;
  std::array<int, 27> stack;
  for (int c = 0; c < 27; ++c) {
    if (c == 13 || !fg[c] || seen[c]) continue;
    if (++fg_components > 1) return false;
    int top = 0;
    stack[top++] = c;
    seen[c] = true;
    while (top > 0) {
      const int cur = stack[--top];
      const int n = t.adj26_count[cur];
      for (int k = 0; k < n; ++k) {
        const int nb = t.adj26[cur][k];
        if (nb == 13 || !fg[nb] || seen[nb]) continue;
        seen[nb] = true;
        stack[top++] = nb;
      }
    }
  }
  if (fg_components != 1) return false;

  // Background: exactly one 6-component of N18 background cells touching a
  // face neighbor of the center.
  seen.fill(false);
  int bg_components = 0;
  for (int c = 0; c < 27; ++c) {
    if (!t.in_n18[c] || fg[c] || seen[c] || !t.is_face[c]) continue;
    // BFS from an unvisited background face cell through N18 background.
    ++bg_components;
    if (bg_components > 1) return false;
    int top = 0;
    stack[top++] = c;
    seen[c] = true;
    while (top > 0) {
      const int cur = stack[--top];
      const int n = t.adj6_count[cur];
      for (int k = 0; k < n; ++k) {
        const int nb = t.adj6[cur][k];
        if (!t.in_n18[nb] || fg[nb] || seen[nb]) continue;
        seen[nb] = true;
        stack[top++] = nb;
      }
    }
  }
  return bg_components == 1;
}

}  // namespace

bool is_simple_point(const BinaryMask& m, int x, int y, int z) {
  std::array<bool, 27> fg;
  gather(m, x, y, z, fg);
  return simple_from_bits(fg);
}

BinaryMask thin_3d(const BinaryMask& m) {
  BinaryMask out = m;
  const Index3 d = out.geom.dims;
  static const Index3 directions[6] = {{0, 0, 1},  {0, 0, -1}, {0, 1, 0},
                                       {0, -1, 0}, {1, 0, 0},  {-1, 0, 0}};

  std::vector<std::size_t> candidates;
  bool changed = true;
  std::array<bool, 27> fg;
  while (changed) {
    changed = false;
    for (const auto& dir : directions) {
      candidates.clear();
      for (int z = 0; z < d.z; ++z)
        for (int y = 0; y < d.y; ++y)
          for (int x = 0; x < d.x; ++x) {
            const std::size_t i = out.geom.index(x, y, z);
            if (!out.values[i]) continue;
            const int bx = x + dir.x, by = y + dir.y, bz = z + dir.z;
            const bool border =
                !out.geom.contains(bx, by, bz) || !out.values[out.geom.index(bx, by, bz)];
            if (!border) continue;
            gather(out, x, y, z, fg);
            if (count_fg_neighbors(fg) <= 1) continue;  // endpoint or isolated
            if (simple_from_bits(fg)) candidates.push_back(i);
          }
      // Sequential re-check: earlier deletions can invalidate later ones.
      for (const std::size_t i : candidates) {
        const int z = static_cast<int>(i / (static_cast<std::size_t>(d.x) * d.y));
        const std::size_t rem = i % (static_cast<std::size_t>(d.x) * d.y);
        const int y = static_cast<int>(rem / d.x);
        const int x = static_cast<int>(rem % d.x);
        gather(out, x, y, z, fg);
        if (count_fg_neighbors(fg) <= 1) continue;
        if (!simple_from_bits(fg)) continue;
        out.values[i] = 0;
        changed = true;
      }
    }
  }
  return out;
}

}  // namespace airway
