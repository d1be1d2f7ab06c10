#include "trigamma/fields.hpp"

#include <algorithm>
#include <random>

#include "trigamma/diagnostics.hpp"

namespace trigamma {

double site_field_residual(const TriGammaGeometry& geom, const LatticeSpec& lattice, int n_sites,
                           std::uint64_t seed, const CancellationOptions& options) {
  if (n_sites < 0) throw DomainError("cancellation_residual: n_sites must be >= 0");
  if (n_sites == 0) {
    warn("cancellation_residual: no lattice sites sampled, residual is 0 by convention");
    return 0.0;
  }
  if (options.grid_per_axis < 1) throw DomainError("cancellation_residual: grid_per_axis must be >= 1");

  double grid_max = 0.0;
  const int n = options.grid_per_axis;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int l = 0; l < n; ++l) {
        const Eigen::Vector3d crystal = lattice.a() * Eigen::Vector3d(i, j, l) / n;
        grid_max = std::max(grid_max, evaluate_E(geom, lattice.to_working(crystal)).norm());
      }

  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> coeff(-options.site_range, options.site_range);
  double site_max = 0.0;
  for (int s = 0; s < n_sites; ++s) {
    const Eigen::Vector3i c(coeff(rng), coeff(rng), coeff(rng));
    site_max = std::max(site_max, evaluate_E(geom, lattice.site(c)).norm());
  }
  return site_max / grid_max;
}

double cancellation_residual(const TriGammaGeometry& geom, const LatticeSpec& lattice, int n_sites,
                             std::uint64_t seed, const CancellationOptions& options) {
  const BraggCheck check = verify_bragg(geom, lattice);
  if (!check.ok)
    throw PreconditionError("cancellation_residual: geometry is not Bragg-matched (residual " +
                            std::to_string(check.max_residual) + ")");
  return site_field_residual(geom, lattice, n_sites, seed, options);
}

double transverse_antisymmetry(const TriGammaGeometry& geom, const Eigen::Vector3d& site,
                               const Eigen::Vector3d& delta) {
  const double d = delta.norm();
  if (!(d > 0.0)) throw DomainError("transverse_antisymmetry: delta must be nonzero");
  if (std::abs(delta.z()) > 1e-12 * d) throw DomainError("transverse_antisymmetry: delta must be transverse");
  const auto plus = evaluate_E(geom, site + delta);
  const auto minus = evaluate_E(geom, site - delta);
  return (plus + minus).norm() / (plus - minus).norm();
}

}  // namespace trigamma
