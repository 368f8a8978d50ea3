#include "airway/phantom.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "airway/metaimage.hpp"
#include "kv_file.hpp"

namespace airway {

void PhantomSpec::validate() const {
  if (generations < 1) throw std::invalid_argument("generations must be >= 1");
  if (radius_decay <= 0 || radius_decay >= 1)
    throw std::invalid_argument("radius_decay must be in (0,1)");
  if (root_radius <= 0) throw std::invalid_argument("root_radius must be > 0");
  if (branch_length_factor <= 0) throw std::invalid_argument("branch_length_factor must be > 0");
  if (lumen_hu >= wall_hu) throw std::invalid_argument("lumen_hu must be < wall_hu");
  if (spacing <= 0) throw std::invalid_argument("spacing must be > 0");
  if (noise_sigma < 0) throw std::invalid_argument("noise_sigma must be >= 0");
  const double deepest = root_radius * std::pow(radius_decay, generations - 1);
  if (deepest < spacing)
    throw std::invalid_argument("unresolvable generation: deepest radius " +
                                std::to_string(deepest) + " mm is under one voxel");
}

namespace {

struct Segment {
  Vec3 p0, p1;
  double radius;
  int id;
  std::optional<int> parent;
  int generation;
};

// Rotation of v around unit axis w (Rodrigues, w orthogonal to v in our use).
Vec3 rotate_about(const Vec3& v, const Vec3& w, double angle) {
  const double c = std::cos(angle), s = std::sin(angle);
  return v * c + w.cross(v) * s + w * (w.dot(v) * (1.0 - c));
}

void build_tree(const PhantomSpec& spec, std::vector<Segment>& segments) {
  struct Item {
    Vec3 start, dir;
    int generation;
    std::optional<int> parent;
  };
  std::vector<Item> queue{{Vec3{0, 0, 0}, Vec3{0, 0, -1}, 0, std::nullopt}};
  int next_id = 0;
  const double half_angle = deg_to_rad(spec.branch_angle) / 2.0;
  for (std::size_t qi = 0; qi < queue.size(); ++qi) {
    const Item it = queue[qi];
    const double radius = spec.root_radius * std::pow(spec.radius_decay, it.generation);
    const double length = spec.branch_length_factor * radius;
    const int id = next_id++;
    const Vec3 end = it.start + it.dir * length;
    segments.push_back({it.start, end, radius, id, it.parent, it.generation});
    if (it.generation + 1 >= spec.generations) continue;
    // Deflection plane alternates per generation to keep the tree 3-D.
    const Vec3 u1 = perpendicular_of(it.dir);
    const Vec3 u2 = it.dir.cross(u1);
    const Vec3 bend_axis = (it.generation % 2 == 0) ? u1 : u2;
    queue.push_back({end, rotate_about(it.dir, bend_axis, half_angle), it.generation + 1, id});
    queue.push_back({end, rotate_about(it.dir, bend_axis, -half_angle), it.generation + 1, id});
  }
}

double point_segment_distance(const Vec3& p, const Vec3& a, const Vec3& b) {
  const Vec3 ab = b - a;
  const double len2 = ab.norm2();
  double t = len2 > 0 ? (p - a).dot(ab) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return (p - (a + ab * t)).norm();
}

void paint_capsule(ScalarVolume& vol, BinaryMask* mask, const Vec3& a, const Vec3& b,
                   double r_inner, double r_outer, float hu, bool is_lumen) {
  const Geometry& g = vol.geom;
  Index3 lo, hi;
  for (int ax = 0; ax < 3; ++ax) {
    const double mn = std::min(a[ax], b[ax]) - r_outer - g.spacing[ax];
    const double mx = std::max(a[ax], b[ax]) + r_outer + g.spacing[ax];
    lo[ax] = std::max(0, static_cast<int>(std::floor((mn - g.origin[ax]) / g.spacing[ax])));
    hi[ax] = std::min(g.dims[ax] - 1,
                      static_cast<int>(std::ceil((mx - g.origin[ax]) / g.spacing[ax])));
  }
  for (int z = lo.z; z <= hi.z; ++z)
    for (int y = lo.y; y <= hi.y; ++y)
      for (int x = lo.x; x <= hi.x; ++x) {
        const double d = point_segment_distance(g.voxel_center(x, y, z), a, b);
        if (d <= r_inner || d > r_outer) continue;
        vol(x, y, z) = hu;
        if (is_lumen && mask) mask->values[g.index(x, y, z)] = 1;
      }
}

// Gaussian noise via Box-Muller on raw engine output, so results do not
// depend on the standard library's normal_distribution implementation.
void add_noise(ScalarVolume& v, double sigma, std::uint64_t seed) {
  if (sigma <= 0) return;
  std::mt19937_64 rng(seed);
  const double two_pi = 2.0 * kPi;
  auto uniform = [&rng]() {
    return (static_cast<double>(rng() >> 11) + 0.5) * (1.0 / 9007199254740992.0);
  };
  std::size_t i = 0;
  const std::size_t n = v.values.size();
  while (i < n) {
    const double u1 = uniform(), u2 = uniform();
    const double m = sigma * std::sqrt(-2.0 * std::log(u1));
    v.values[i] += static_cast<float>(m * std::cos(two_pi * u2));
    if (++i >= n) break;
    v.values[i] += static_cast<float>(m * std::sin(two_pi * u2));
    ++i;
  }
}

std::vector<Vec3> sample_centerline(const Vec3& a, const Vec3& b, double step) {
  std::vector<Vec3> pts;
  const double len = (b - a).norm();
  const int n = std::max(1, static_cast<int>(std::ceil(len / step)));
  for (int i = 0; i <= n; ++i) pts.push_back(a + (b - a) * (static_cast<double>(i) / n));
  return pts;
}

}  // namespace

std::pair<ScalarVolume, GroundTruth> generate_phantom(const PhantomSpec& spec) {
  spec.validate();
  std::vector<Segment> segments;
  build_tree(spec, segments);

  const double wall = 2.0 * spec.spacing;
  Vec3 lo{1e300, 1e300, 1e300}, hi{-1e300, -1e300, -1e300};
  for (const auto& s : segments) {
    const double pad = s.radius + wall + spec.margin;
    for (int a = 0; a < 3; ++a) {
      lo[a] = std::min(lo[a], std::min(s.p0[a], s.p1[a]) - pad);
      hi[a] = std::max(hi[a], std::max(s.p0[a], s.p1[a]) + pad);
    }
  }
  Index3 dims;
  for (int a = 0; a < 3; ++a)
    dims[a] = std::max(8, static_cast<int>(std::ceil((hi[a] - lo[a]) / spec.spacing)) + 1);

  ScalarVolume vol(dims, {spec.spacing, spec.spacing, spec.spacing}, lo,
                   static_cast<float>(spec.background_hu));
  GroundTruth truth;
  truth.mask = BinaryMask(vol.geom);

  for (const auto& s : segments)
    paint_capsule(vol, nullptr, s.p0, s.p1, s.radius, s.radius + wall,
                  static_cast<float>(spec.wall_hu), false);
  for (const auto& s : segments)
    paint_capsule(vol, &truth.mask, s.p0, s.p1, -1.0, s.radius,
                  static_cast<float>(spec.lumen_hu), true);

  for (const auto& s : segments) {
    BranchRecord b;
    b.id = s.id;
    b.parent = s.parent;
    b.generation = s.generation;
    b.centerline = sample_centerline(s.p0, s.p1, spec.spacing / 2.0);
    b.mean_radius = s.radius;
    b.status = BranchStatus::Terminated;
    truth.tree.branches.push_back(std::move(b));
  }
  truth.tree.root_id = 0;
  truth.tree.mask = truth.mask;
  truth.tree.validate();

  // Seed two voxels down the root lumen.
  const Vec3 seed_mm = segments[0].p0 + (segments[0].p1 - segments[0].p0).normalized() *
                                            (2.0 * spec.spacing);
  const Vec3 c = vol.geom.world_to_voxel(seed_mm);
  truth.seed = {static_cast<int>(std::lround(c.x)), static_cast<int>(std::lround(c.y)),
                static_cast<int>(std::lround(c.z))};

  add_noise(vol, spec.noise_sigma, spec.rng_seed);
  return {std::move(vol), std::move(truth)};
}

std::pair<ScalarVolume, GroundTruth> generate_cylinder(double radius_mm, double length_mm,
                                                       const Vec3& axis,
                                                       const PhantomSpec& hu) {
  if (radius_mm <= 0 || length_mm <= 0)
    throw std::invalid_argument("cylinder radius and length must be > 0");
  const Vec3 dir = axis.normalized();
  const double wall = 2.0 * hu.spacing;
  const double lateral = 2.0 * (radius_mm + wall + hu.margin);

  // Axis-aligned tubes span the lattice exactly along the axis (open ends);
  // oblique tubes get a symmetric cube so lattice symmetries carry over.
  Index3 dims;
  const bool is_x = std::abs(std::abs(dir.x) - 1.0) < 1e-12;
  const bool is_y = std::abs(std::abs(dir.y) - 1.0) < 1e-12;
  const bool is_z = std::abs(std::abs(dir.z) - 1.0) < 1e-12;
  const int lat_n = static_cast<int>(std::ceil(lateral / hu.spacing));
  const int len_n = static_cast<int>(std::ceil(length_mm / hu.spacing));
  if (is_x)
    dims = {len_n, lat_n, lat_n};
  else if (is_y)
    dims = {lat_n, len_n, lat_n};
  else if (is_z)
    dims = {lat_n, lat_n, len_n};
  else {
    const int n = std::max(lat_n, len_n);
    dims = {n, n, n};
  }

  ScalarVolume vol(dims, {hu.spacing, hu.spacing, hu.spacing}, {0, 0, 0},
                   static_cast<float>(hu.background_hu));
  GroundTruth truth;
  truth.mask = BinaryMask(vol.geom);
  const Geometry& g = vol.geom;
  const Vec3 center{(g.dims.x - 1) * g.spacing.x / 2.0, (g.dims.y - 1) * g.spacing.y / 2.0,
                    (g.dims.z - 1) * g.spacing.z / 2.0};

  auto line_distance = [&](const Vec3& p) {
    const Vec3 d = p - center;
    return (d - dir * d.dot(dir)).norm();
  };
  for (int z = 0; z < g.dims.z; ++z)
    for (int y = 0; y < g.dims.y; ++y)
      for (int x = 0; x < g.dims.x; ++x) {
        const double d = line_distance(g.voxel_center(x, y, z));
        if (d <= radius_mm) {
          vol(x, y, z) = static_cast<float>(hu.lumen_hu);
          truth.mask.values[g.index(x, y, z)] = 1;
        } else if (d <= radius_mm + wall) {
          vol(x, y, z) = static_cast<float>(hu.wall_hu);
        }
      }

  BranchRecord b;
  b.id = 0;
  b.generation = 0;
  b.mean_radius = radius_mm;
  b.status = BranchStatus::Terminated;
  // Clip the axis line to the lattice for the truth centerline.
  const double tmax = (Vec3{(g.dims.x - 1) * g.spacing.x, (g.dims.y - 1) * g.spacing.y,
                            (g.dims.z - 1) * g.spacing.z})
                          .norm();
  for (double t = -tmax; t <= tmax; t += hu.spacing / 2.0) {
    const Vec3 p = center + dir * t;
    const Vec3 c = g.world_to_voxel(p);
    if (c.x >= 0 && c.y >= 0 && c.z >= 0 && c.x <= g.dims.x - 1 && c.y <= g.dims.y - 1 &&
        c.z <= g.dims.z - 1)
      b.centerline.push_back(p);
  }
  truth.tree.branches.push_back(std::move(b));
  truth.tree.root_id = 0;
  truth.tree.mask = truth.mask;

  const Vec3 sc = g.world_to_voxel(center + dir * (length_mm / 2.0 - 2.0 * hu.spacing));
  truth.seed = {static_cast<int>(std::lround(sc.x)), static_cast<int>(std::lround(sc.y)),
                static_cast<int>(std::lround(sc.z))};

  add_noise(vol, hu.noise_sigma, hu.rng_seed);
  return {std::move(vol), std::move(truth)};
}

PhantomSpec phantom_spec_from_file(const std::string& path) {
  PhantomSpec spec;
  const std::string text = detail::read_text_file(path);
  detail::parse_kv_text(text, [&spec](const std::string& key, const std::string& value) {
    auto num = [&value, &key]() {
      try {
        return std::stod(value);
      } catch (const std::exception&) {
        throw std::invalid_argument("bad value for " + key + ": '" + value + "'");
      }
    };
    if (key == "generations")
      spec.generations = static_cast<int>(num());
    else if (key == "root_radius")
      spec.root_radius = num();
    else if (key == "radius_decay")
      spec.radius_decay = num();
    else if (key == "branch_angle")
      spec.branch_angle = num();
    else if (key == "branch_length_factor")
      spec.branch_length_factor = num();
    else if (key == "lumen_hu")
      spec.lumen_hu = num();
    else if (key == "wall_hu")
      spec.wall_hu = num();
    else if (key == "background_hu")
      spec.background_hu = num();
    else if (key == "noise_sigma")
      spec.noise_sigma = num();
    else if (key == "rng_seed")
      spec.rng_seed = static_cast<std::uint64_t>(std::stoull(value));
    else if (key == "spacing")
      spec.spacing = num();
    else if (key == "margin")
      spec.margin = num();
    else
      throw std::invalid_argument("unknown phantom key: " + key);
  });
  spec.validate();
  return spec;
}

std::string phantom_spec_help() {
  const PhantomSpec d;
  std::ostringstream os;
  os << "generations=" << d.generations << "\n"
     << "root_radius=" << d.root_radius << "\n"
     << "radius_decay=" << d.radius_decay << "\n"
     << "branch_angle=" << d.branch_angle << "\n"
     << "branch_length_factor=" << d.branch_length_factor << "\n"
     << "lumen_hu=" << d.lumen_hu << "\n"
     << "wall_hu=" << d.wall_hu << "\n"
     << "background_hu=" << d.background_hu << "\n"
     << "noise_sigma=" << d.noise_sigma << "\n"
     << "rng_seed=" << d.rng_seed << "\n"
     << "spacing=" << d.spacing << "\n"
     << "margin=" << d.margin << "\n";
  return os.str();
}

}  // namespace airway
