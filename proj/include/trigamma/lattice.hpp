#pragma once

#include <Eigen/Core>
#include <array>
#include <optional>
#include <vector>

#include "trigamma/geometry.hpp"

namespace trigamma {

/// An fcc crystal viewed in the working frame, whose z axis is the channel axis.
/// The in-plane x axis is `azimuth_reference` projected onto the plane normal to
/// the channel; for the (1,1,1) channel it defaults to [2,-1,-1].
class LatticeSpec {
 public:
  explicit LatticeSpec(double a, Eigen::Vector3d channel_axis = Eigen::Vector3d(1, 1, 1),
                       int g_shell_cutoff = 4,
                       std::optional<Eigen::Vector3d> azimuth_reference = std::nullopt);

  double a() const { return a_; }
  const Eigen::Vector3d& channel_axis() const { return channel_axis_; }
  const Eigen::Vector3d& azimuth_reference() const { return azimuth_reference_; }
  int g_shell_cutoff() const { return cutoff_; }

  /// Rows are the working-frame axes expressed in crystal coordinates, so
  /// v_working = rotation() * v_crystal.
  const Eigen::Matrix3d& rotation() const { return rotation_; }

  Eigen::Vector3d to_working(const Eigen::Vector3d& crystal) const { return rotation_ * crystal; }

  /// Lattice translation n1 a1 + n2 a2 + n3 a3 (fcc primitive vectors), working frame, m.
  Eigen::Vector3d site(const Eigen::Vector3i& n) const;

 private:
  double a_;
  Eigen::Vector3d channel_axis_;
  Eigen::Vector3d azimuth_reference_;
  int cutoff_;
  Eigen::Matrix3d rotation_;
};

struct ReciprocalVector {
  Eigen::Vector3i hkl;  ///< Miller indices in the conventional cubic basis
  Eigen::Vector3d g;    ///< (2 pi / a) hkl rotated to the working frame, 1/m
};

/// Nonzero fcc reciprocal vectors (h, k, l all even or all odd) with
/// max(|h|,|k|,|l|) <= cutoff.
std::vector<ReciprocalVector> reciprocal_vectors(const LatticeSpec& lattice);

struct BraggCheck {
  bool ok = false;
  double max_residual = 0.0;  ///< worst |k_n - k_m - G| / |G| over ordered pairs
  /// Nearest reciprocal vector to k1-k2, k2-k3, k3-k1.
  std::array<ReciprocalVector, 3> matched{};
};

/// True iff every pairwise difference k_n - k_m lies within `tol` (relative) of a
/// reciprocal vector of the enumerated set.
BraggCheck verify_bragg(const TriGammaGeometry& geom, const LatticeSpec& lattice, double tol = 1e-9);

struct BraggCandidate {
  double theta = 0.0;
  double azimuth_offset = 0.0;  ///< in [0, 2pi/3)
  std::array<ReciprocalVector, 3> g{};  ///< matched to k1-k2, k2-k3, k3-k1
  double residual = 0.0;
};

struct BraggSolveOptions {
  int grid_points = 10000;
  double tol = 1e-9;
};

/// All cone angles and azimuth offsets for which the three pairwise differences are
/// reciprocal vectors within the cutoff shell. Sorted by theta, then azimuth offset.
/// Empty when the photon is too soft to reach any in-plane G.
std::vector<BraggCandidate> bragg_angle_solve(double k_mag, const LatticeSpec& lattice,
                                              const BraggSolveOptions& options = {});

inline TriGammaGeometry build_trigamma(double k_mag, const BraggCandidate& c) {
  return build_trigamma(k_mag, c.theta, c.azimuth_offset);
}

}  // namespace trigamma
