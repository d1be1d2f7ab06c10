#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>
#include <array>
#include <cmath>

#include "trigamma/constants.hpp"
#include "trigamma/error.hpp"

namespace trigamma {

/// Three equal-magnitude wavevectors on a cone of half-angle theta about the
/// channel axis (z of the working frame), at azimuths offset + (n-1) 2pi/3, with
/// azimuthal polarizations. Column n of `k_vectors` / `e_pols` belongs to photon n.
template <class Scalar>
struct TriGamma {
  using Vec3 = Eigen::Matrix<Scalar, 3, 1>;
  using Mat3 = Eigen::Matrix<Scalar, 3, 3>;

  Scalar k_mag{};
  Scalar theta{};
  Scalar azimuth_offset{};
  std::array<Scalar, 3> phis{};
  Mat3 k_vectors = Mat3::Zero();
  Vec3 k_entangled = Vec3::Zero();
  Mat3 e_pols = Mat3::Zero();

  Vec3 k(int n) const { return k_vectors.col(n); }
  Vec3 e_pol(int n) const { return e_pols.col(n); }
};

using TriGammaGeometry = TriGamma<double>;

template <class Scalar>
Eigen::Matrix<Scalar, 3, 3> rotation_about_z(Scalar angle) {
  return Eigen::AngleAxis<Scalar>(angle, Eigen::Matrix<Scalar, 3, 1>::UnitZ()).toRotationMatrix();
}

/// k_n = k sin(theta) e_rho(phi_n) + k cos(theta) e_z, e_pol_n = e_phi(phi_n).
template <class Scalar>
TriGamma<Scalar> build_trigamma(Scalar k_mag, Scalar theta, Scalar azimuth_offset = Scalar(0)) {
  using std::cos;
  using std::sin;
  if (!(k_mag > Scalar(0))) throw DomainError("build_trigamma: k_mag must be > 0");
  if (!(theta >= Scalar(0) && theta < Scalar(units::pi / 2)))
    throw DomainError("build_trigamma: theta must lie in [0, pi/2)");

  TriGamma<Scalar> g;
  g.k_mag = k_mag;
  g.theta = theta;
  g.azimuth_offset = azimuth_offset;
  const Scalar kt = k_mag * sin(theta);
  const Scalar kz = k_mag * cos(theta);
  for (int n = 0; n < 3; ++n) {
    const Scalar phi = azimuth_offset + Scalar(n) * Scalar(2 * units::pi / 3);
    g.phis[n] = phi;
    g.k_vectors.col(n) << kt * cos(phi), kt * sin(phi), kz;
    g.e_pols.col(n) << -sin(phi), cos(phi), Scalar(0);
  }
  g.k_entangled << Scalar(0), Scalar(0), kz;
  return g;
}

}  // namespace trigamma
