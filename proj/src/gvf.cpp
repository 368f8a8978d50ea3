#include "airway/gvf.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "airway/enhance.hpp"
#include "airway/parallel.hpp"

namespace airway {

void GvfParams::validate() const {
  if (sigma <= 0) throw std::invalid_argument("gvf sigma must be > 0");
  if (mu <= 0) throw std::invalid_argument("gvf mu must be > 0");
  if (max_iters < 0) throw std::invalid_argument("gvf max_iters must be >= 0");
  if (tol <= 0) throw std::invalid_argument("gvf tol must be > 0");
}

VectorField::VectorField(const Geometry& g) : geom(g) {
  geom.validate();
  data.assign(3 * geom.voxel_count(), 0.0f);
}

Vec3 VectorField::at(int x, int y, int z) const {
  if (!geom.contains(x, y, z))
    throw std::out_of_range("vector field index out of range");
  const std::size_t i = vec_index(x, y, z);
  return {data[i], data[i + 1], data[i + 2]};
}

void VectorField::set(int x, int y, int z, const Vec3& v) {
  if (!geom.contains(x, y, z))
    throw std::out_of_range("vector field index out of range");
  const std::size_t i = vec_index(x, y, z);
  data[i] = static_cast<float>(v.x);
  data[i + 1] = static_cast<float>(v.y);
  data[i + 2] = static_cast<float>(v.z);
}

bool VectorField::sample(const Vec3& c, Vec3& out) const {
  const Index3 d = geom.dims;
  if (c.x < 0 || c.y < 0 || c.z < 0 || c.x > d.x - 1 || c.y > d.y - 1 || c.z > d.z - 1)
    return false;
  const int x0 = std::min(static_cast<int>(c.x), d.x - 1);
  const int y0 = std::min(static_cast<int>(c.y), d.y - 1);
  const int z0 = std::min(static_cast<int>(c.z), d.z - 1);
  const int x1 = std::min(x0 + 1, d.x - 1);
  const int y1 = std::min(y0 + 1, d.y - 1);
  const int z1 = std::min(z0 + 1, d.z - 1);
  const double fx = c.x - x0, fy = c.y - y0, fz = c.z - z0;
  out = {0, 0, 0};
  for (int comp = 0; comp < 3; ++comp) {
    auto v = [&](int x, int y, int z) -> double {
      return data[3 * geom.index(x, y, z) + comp];
    };
    const double c00 = v(x0, y0, z0) * (1 - fx) + v(x1, y0, z0) * fx;
    const double c10 = v(x0, y1, z0) * (1 - fx) + v(x1, y1, z0) * fx;
    const double c01 = v(x0, y0, z1) * (1 - fx) + v(x1, y0, z1) * fx;
    const double c11 = v(x0, y1, z1) * (1 - fx) + v(x1, y1, z1) * fx;
    out[comp] = (c00 * (1 - fy) + c10 * fy) * (1 - fz) + (c01 * (1 - fy) + c11 * fy) * fz;
  }
  return true;
}

VectorField smoothed_gradient(const ScalarVolume& v, double sigma_mm) {
  const ScalarVolume sm = gaussian_smooth(v, sigma_mm);
  const Index3 d = v.geom.dims;
  const Vec3 h = v.geom.spacing;
  VectorField out(v.geom);
  parallel_for(0, static_cast<std::size_t>(d.z), [&](std::size_t z0, std::size_t z1) {
    for (int z = static_cast<int>(z0); z < static_cast<int>(z1); ++z)
      for (int y = 0; y < d.y; ++y)
        for (int x = 0; x < d.x; ++x) {
          auto val = [&](int ax, int ay, int az) {
            return static_cast<double>(sm.values[sm.geom.index(std::clamp(ax, 0, d.x - 1),
                                                               std::clamp(ay, 0, d.y - 1),
                                                               std::clamp(az, 0, d.z - 1))]);
          };
          const std::size_t i = out.vec_index(x, y, z);
          out.data[i] = static_cast<float>(-(val(x + 1, y, z) - val(x - 1, y, z)) / (2 * h.x));
          out.data[i + 1] =
              static_cast<float>(-(val(x, y + 1, z) - val(x, y - 1, z)) / (2 * h.y));
          out.data[i + 2] =
              static_cast<float>(-(val(x, y, z + 1) - val(x, y, z - 1)) / (2 * h.z));
        }
  });
  return out;
}

double effective_f_max(const VectorField& raw, const GvfParams& p) {
  if (p.f_max > 0) return p.f_max;
  const std::size_t n = raw.geom.voxel_count();
  std::vector<double> mags(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double fx = raw.data[3 * i], fy = raw.data[3 * i + 1], fz = raw.data[3 * i + 2];
    mags[i] = std::sqrt(fx * fx + fy * fy + fz * fz);
  }
  const std::size_t k = static_cast<std::size_t>(0.99 * (n - 1));
  std::nth_element(mags.begin(), mags.begin() + k, mags.end());
  return mags[k];
}

VectorField initial_field(const ScalarVolume& v, const GvfParams& p) {
  p.validate();
  VectorField f = smoothed_gradient(v, p.sigma);
  const double fmax = effective_f_max(f, p);
  const std::size_t n = f.geom.voxel_count();
  if (fmax <= 0) {
    std::fill(f.data.begin(), f.data.end(), 0.0f);
    return f;
  }
  for (std::size_t i = 0; i < n; ++i) {
    const double fx = f.data[3 * i], fy = f.data[3 * i + 1], fz = f.data[3 * i + 2];
    const double mag = std::sqrt(fx * fx + fy * fy + fz * fz);
    if (mag == 0) continue;
    const double scale = std::min(mag, fmax) / (fmax * mag);
    f.data[3 * i] = static_cast<float>(fx * scale);
    f.data[3 * i + 1] = static_cast<float>(fy * scale);
    f.data[3 * i + 2] = static_cast<float>(fz * scale);
  }
  return f;
}

double discrete_energy(const VectorField& v, const VectorField& f, double mu) {
  require_same_geometry(v.geom, f.geom, "discrete_energy");
  const Index3 d = v.geom.dims;
  const Vec3 h = v.geom.spacing;
  double energy = 0;
  for (int z = 0; z < d.z; ++z)
    for (int y = 0; y < d.y; ++y)
      for (int x = 0; x < d.x; ++x) {
        const std::size_t i = v.vec_index(x, y, z);
        for (int comp = 0; comp < 3; ++comp) {
          const double c = v.data[i + comp];
          if (x + 1 < d.x) {
            const double g = (v.data[v.vec_index(x + 1, y, z) + comp] - c) / h.x;
            energy += mu * g * g;
          }
          if (y + 1 < d.y) {
            const double g = (v.data[v.vec_index(x, y + 1, z) + comp] - c) / h.y;
            energy += mu * g * g;
          }
          if (z + 1 < d.z) {
            const double g = (v.data[v.vec_index(x, y, z + 1) + comp] - c) / h.z;
            energy += mu * g * g;
          }
        }
        const double bx = f.data[i], by = f.data[i + 1], bz = f.data[i + 2];
        const double b = bx * bx + by * by + bz * bz;
        const double dx = v.data[i] - bx, dy = v.data[i + 1] - by, dz = v.data[i + 2] - bz;
        energy += b * (dx * dx + dy * dy + dz * dz);
      }
  return energy;
}

VectorField solve_gvf(const VectorField& f, const GvfParams& p, GvfDiagnostics* diag) {
  p.validate();
  for (const float x : f.data)
    if (!std::isfinite(x)) throw std::invalid_argument("non-finite value in initial field");

  const Index3 d = f.geom.dims;
  const Vec3 h = f.geom.spacing;
  const std::size_t n = f.geom.voxel_count();

  std::vector<float> b(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double fx = f.data[3 * i], fy = f.data[3 * i + 1], fz = f.data[3 * i + 2];
    b[i] = static_cast<float>(fx * fx + fy * fy + fz * fz);
  }
  double b_max = 0;
  for (const float v : b) b_max = std::max(b_max, static_cast<double>(v));

  // Explicit step bounded so the energy is non-increasing: the descent factor
  // 1.8 < 2 stays inside the convergence range of gradient descent with
  // curvature mu * sum(4/h^2) + b_max. This also satisfies dt <= h^2/(6 mu).
  const double lap_gain = 4.0 / (h.x * h.x) + 4.0 / (h.y * h.y) + 4.0 / (h.z * h.z);
  const double dt = 1.8 / (p.mu * lap_gain + std::max(b_max, 1e-12));

  VectorField cur = f;
  VectorField next(f.geom);
  if (diag) {
    diag->energy.clear();
    diag->energy.push_back(discrete_energy(cur, f, p.mu));
    diag->iterations = 0;
  }

  std::vector<double> max_update_z(static_cast<std::size_t>(d.z));
  int iter = 0;
  for (; iter < p.max_iters; ++iter) {
    parallel_for(0, static_cast<std::size_t>(d.z), [&](std::size_t z0, std::size_t z1) {
      for (int z = static_cast<int>(z0); z < static_cast<int>(z1); ++z) {
        double local_max = 0;
        for (int y = 0; y < d.y; ++y)
          for (int x = 0; x < d.x; ++x) {
            const std::size_t vi = cur.vec_index(x, y, z);
            const std::size_t si = cur.geom.index(x, y, z);
            auto comp_at = [&](int ax, int ay, int az, int comp) {
              return static_cast<double>(
                  cur.data[cur.vec_index(std::clamp(ax, 0, d.x - 1), std::clamp(ay, 0, d.y - 1),
                                         std::clamp(az, 0, d.z - 1)) +
                           comp]);
            };
            for (int comp = 0; comp < 3; ++comp) {
              const double c = cur.data[vi + comp];
              const double lap = (comp_at(x + 1, y, z, comp) - 2 * c + comp_at(x - 1, y, z, comp)) /
                                     (h.x * h.x) +
                                 (comp_at(x, y + 1, z, comp) - 2 * c + comp_at(x, y - 1, z, comp)) /
                                     (h.y * h.y) +
                                 (comp_at(x, y, z + 1, comp) - 2 * c + comp_at(x, y, z - 1, comp)) /
                                     (h.z * h.z);
              const double upd = dt * (p.mu * lap - b[si] * (c - f.data[vi + comp]));
              next.data[vi + comp] = static_cast<float>(c + upd);
              local_max = std::max(local_max, std::abs(upd));
            }
          }
        max_update_z[static_cast<std::size_t>(z)] = local_max;
      }
    });
    std::swap(cur.data, next.data);
    double max_update = 0;
    for (const double m : max_update_z) max_update = std::max(max_update, m);
    if (diag) {
      diag->energy.push_back(discrete_energy(cur, f, p.mu));
      diag->iterations = iter + 1;
    }
    if (max_update < p.tol) {
      ++iter;
      break;
    }
  }
  if (diag) diag->iterations = iter;
  return cur;
}

ScalarVolume magnitude_map(const VectorField& f) {
  ScalarVolume out(f.geom);
  const std::size_t n = f.geom.voxel_count();
  for (std::size_t i = 0; i < n; ++i) {
    const double fx = f.data[3 * i], fy = f.data[3 * i + 1], fz = f.data[3 * i + 2];
    out.values[i] = static_cast<float>(std::sqrt(fx * fx + fy * fy + fz * fz));
  }
  return out;
}

}  // namespace airway
