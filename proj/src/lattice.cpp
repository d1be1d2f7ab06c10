#include "trigamma/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "trigamma/error.hpp"

namespace trigamma {
namespace {

constexpr double kTwoPi = 2 * units::pi;
constexpr double kThirdTurn = kTwoPi / 3;

bool same_parity(int h, int k, int l) {
  const auto odd = [](int v) { return (v % 2 + 2) % 2; };
  return odd(h) == odd(k) && odd(k) == odd(l);
}

Eigen::Vector3d default_reference(const Eigen::Vector3d& axis) {
  const Eigen::Vector3d u = axis.normalized();
  if (u.cross(Eigen::Vector3d(1, 1, 1).normalized()).norm() < 1e-12) return {2, -1, -1};
  Eigen::Index least = 0;
  u.cwiseAbs().minCoeff(&least);
  return Eigen::Vector3d::Unit(least);
}

const ReciprocalVector& nearest(const std::vector<ReciprocalVector>& set, const Eigen::Vector3d& d) {
  auto best = set.begin();
  double best_dist = std::numeric_limits<double>::infinity();
  for (auto it = set.begin(); it != set.end(); ++it) {
    const double dist = (d - it->g).squaredNorm();
    if (dist < best_dist) {
      best_dist = dist;
      best = it;
    }
  }
  return *best;
}

BraggCheck verify_against(const TriGammaGeometry& geom, const std::vector<ReciprocalVector>& set,
                          double tol) {
  BraggCheck out;
  if (set.empty()) {
    out.max_residual = std::numeric_limits<double>::infinity();
    return out;
  }
  double worst = 0.0;
  for (int n = 0; n < 3; ++n) {
    for (int m = 0; m < 3; ++m) {
      if (n == m) continue;
      const Eigen::Vector3d d = geom.k(n) - geom.k(m);
      const ReciprocalVector& g = nearest(set, d);
      worst = std::max(worst, (d - g.g).norm() / g.g.norm());
      if (m == (n + 1) % 3) out.matched[n] = g;
    }
  }
  out.max_residual = worst;
  out.ok = worst <= tol;
  return out;
}

// Root of sqrt(3) k sin(theta) = g_mag on [0, pi/2): grid scan for the bracket,
// then bisection until the bracket stops shrinking.
std::optional<double> solve_cone_angle(double k_mag, double g_mag, int grid_points) {
  const double half_pi = units::pi / 2;
  const auto f = [&](double theta) { return std::sqrt(3.0) * k_mag * std::sin(theta) - g_mag; };
  double lo = -1.0;
  double hi = -1.0;
  double prev_theta = 0.0;
  double prev_f = f(0.0);
  for (int i = 1; i <= grid_points; ++i) {
    const double theta = half_pi * i / grid_points;
    const double fi = f(theta);
    if (prev_f <= 0.0 && fi > 0.0) {
      lo = prev_theta;
      hi = theta;
      break;
    }
    prev_theta = theta;
    prev_f = fi;
  }
  if (lo < 0.0) return std::nullopt;
  for (;;) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (f(mid) > 0.0 ? hi : lo) = mid;
  }
  const double root = std::abs(f(lo)) <= std::abs(f(hi)) ? lo : hi;
  if (!(root < half_pi)) return std::nullopt;
  return root;
}

}  // namespace

LatticeSpec::LatticeSpec(double a, Eigen::Vector3d channel_axis, int g_shell_cutoff,
                         std::optional<Eigen::Vector3d> azimuth_reference)
    : a_(a), channel_axis_(channel_axis), cutoff_(g_shell_cutoff) {
  if (!(a > 0.0)) throw DomainError("LatticeSpec: lattice constant must be > 0");
  if (!(channel_axis.norm() > 0.0)) throw DomainError("LatticeSpec: channel axis must be nonzero");
  if (g_shell_cutoff < 0) throw DomainError("LatticeSpec: g_shell_cutoff must be >= 0");
  azimuth_reference_ = azimuth_reference.value_or(default_reference(channel_axis));

  const Eigen::Vector3d z = channel_axis.normalized();
  Eigen::Vector3d x = azimuth_reference_ - azimuth_reference_.dot(z) * z;
  if (x.norm() < 1e-12 * azimuth_reference_.norm())
    throw DomainError("LatticeSpec: azimuth reference is parallel to the channel axis");
  x.normalize();
  const Eigen::Vector3d y = z.cross(x);
  rotation_.row(0) = x;
  rotation_.row(1) = y;
  rotation_.row(2) = z;
}

Eigen::Vector3d LatticeSpec::site(const Eigen::Vector3i& n) const {
  Eigen::Matrix3d primitive;
  primitive.col(0) << 0, 1, 1;
  primitive.col(1) << 1, 0, 1;
  primitive.col(2) << 1, 1, 0;
  return rotation_ * (0.5 * a_ * primitive * n.cast<double>());
}

std::vector<ReciprocalVector> reciprocal_vectors(const LatticeSpec& lattice) {
  const int c = lattice.g_shell_cutoff();
  const double scale = kTwoPi / lattice.a();
  std::vector<ReciprocalVector> out;
  for (int h = -c; h <= c; ++h)
    for (int k = -c; k <= c; ++k)
      for (int l = -c; l <= c; ++l) {
        if (h == 0 && k == 0 && l == 0) continue;
        if (!same_parity(h, k, l)) continue;
        const Eigen::Vector3i hkl(h, k, l);
        out.push_back({hkl, lattice.to_working(scale * hkl.cast<double>())});
      }
  return out;
}

BraggCheck verify_bragg(const TriGammaGeometry& geom, const LatticeSpec& lattice, double tol) {
  return verify_against(geom, reciprocal_vectors(lattice), tol);
}

std::vector<BraggCandidate> bragg_angle_solve(double k_mag, const LatticeSpec& lattice,
                                              const BraggSolveOptions& options) {
  if (!(k_mag > 0.0)) throw DomainError("bragg_angle_solve: k_mag must be > 0");
  if (options.grid_points < 1) throw DomainError("bragg_angle_solve: grid_points must be >= 1");

  const auto all = reciprocal_vectors(lattice);
  const Eigen::Vector3d axis = lattice.channel_axis();

  // Pairwise differences of the cone lie in the plane normal to the channel, so only
  // in-plane reciprocal vectors can match.
  std::vector<const ReciprocalVector*> in_plane;
  for (const auto& g : all) {
    const Eigen::Vector3d h = g.hkl.cast<double>();
    if (std::abs(h.dot(axis)) <= 1e-12 * h.norm() * axis.norm()) in_plane.push_back(&g);
  }

  std::vector<BraggCandidate> out;
  std::vector<std::pair<double, double>> seen;  // (|G|, offset)
  for (const ReciprocalVector* g : in_plane) {
    const double g_mag = g->g.norm();
    const auto theta = solve_cone_angle(k_mag, g_mag, options.grid_points);
    if (!theta) continue;

    // k1 - k2 points at azimuth offset - pi/6.
    double offset = std::fmod(std::atan2(g->g.y(), g->g.x()) + units::pi / 6, kThirdTurn);
    if (offset < 0) offset += kThirdTurn;
    if (offset > kThirdTurn - 1e-12) offset = 0.0;

    const bool duplicate = std::any_of(seen.begin(), seen.end(), [&](const auto& s) {
      return std::abs(s.first - g_mag) <= 1e-12 * g_mag && std::abs(s.second - offset) <= 1e-9;
    });
    if (duplicate) continue;
    seen.emplace_back(g_mag, offset);

    const auto geom = build_trigamma(k_mag, *theta, offset);
    const BraggCheck check = verify_against(geom, all, options.tol);
    if (!check.ok) continue;
    out.push_back({*theta, offset, check.matched, check.max_residual});
  }
  std::sort(out.begin(), out.end(), [](const BraggCandidate& a, const BraggCandidate& b) {
    if (a.theta != b.theta) return a.theta < b.theta;
    return a.azimuth_offset < b.azimuth_offset;
  });
  return out;
}

}  // namespace trigamma
