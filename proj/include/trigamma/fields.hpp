#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>
#include <complex>
#include <cstdint>

#include "trigamma/error.hpp"
#include "trigamma/geometry.hpp"
#include "trigamma/lattice.hpp"

namespace trigamma {

/// Complex spatial amplitudes of a monochromatic mode (e^{-i omega t} factored out),
/// Gaussian-style pairing so |E| = |B| for a single plane wave.
template <class Scalar>
struct FieldState {
  using Vec3c = Eigen::Matrix<std::complex<Scalar>, 3, 1>;
  Vec3c E = Vec3c::Zero();
  Vec3c B = Vec3c::Zero();
};

using FieldStated = FieldState<double>;

namespace detail {
template <class Scalar, class Derived>
Eigen::Matrix<std::complex<Scalar>, 3, 1> phasors(const TriGamma<Scalar>& geom,
                                                  const Eigen::MatrixBase<Derived>& r) {
  const Eigen::Matrix<Scalar, 3, 1> phase = geom.k_vectors.transpose() * r;
  Eigen::Matrix<std::complex<Scalar>, 3, 1> out;
  for (int n = 0; n < 3; ++n) out[n] = std::polar(Scalar(1), phase[n]);
  return out;
}
}  // namespace detail

/// Entangled electric field sum_n e_phi_n exp(i k_n . r) with unit amplitude.
template <class Scalar, class Derived>
Eigen::Matrix<std::complex<Scalar>, 3, 1> evaluate_E(const TriGamma<Scalar>& geom,
                                                     const Eigen::MatrixBase<Derived>& r) {
  return geom.e_pols.template cast<std::complex<Scalar>>() * detail::phasors(geom, r);
}

/// Magnetic field of the same mode, built per photon as khat_n x E_n and summed.
template <class Scalar, class Derived>
Eigen::Matrix<std::complex<Scalar>, 3, 1> evaluate_B(const TriGamma<Scalar>& geom,
                                                     const Eigen::MatrixBase<Derived>& r) {
  Eigen::Matrix<Scalar, 3, 3> b_pols;
  for (int n = 0; n < 3; ++n) b_pols.col(n) = geom.k(n).normalized().cross(geom.e_pol(n));
  return b_pols.template cast<std::complex<Scalar>>() * detail::phasors(geom, r);
}

template <class Scalar, class Derived>
FieldState<Scalar> field_state(const TriGamma<Scalar>& geom, const Eigen::MatrixBase<Derived>& r) {
  return {evaluate_E(geom, r), evaluate_B(geom, r)};
}

/// Field transformation to a frame moving with velocity beta (in units of c):
///   E' = g (E + beta x B) - g^2/(g+1) beta (beta . E)
///   B' = g (B - beta x E) - g^2/(g+1) beta (beta . B)
/// applied to real and imaginary parts alike.
template <class Scalar, class Derived>
FieldState<Scalar> lorentz_transform(const FieldState<Scalar>& fs, const Eigen::MatrixBase<Derived>& beta) {
  using C = std::complex<Scalar>;
  const Scalar b2 = beta.squaredNorm();
  if (!(b2 < Scalar(1))) throw DomainError("lorentz_transform: |beta| must be < 1");
  const Scalar gamma = Scalar(1) / std::sqrt(Scalar(1) - b2);
  const Scalar k = gamma * gamma / (gamma + Scalar(1));
  const Eigen::Matrix<C, 3, 1> bc = beta.template cast<C>();
  const auto cross = [](const Eigen::Matrix<C, 3, 1>& a, const Eigen::Matrix<C, 3, 1>& b) {
    return a.cross(b);
  };
  const C beta_dot_E = (bc.array() * fs.E.array()).sum();
  const C beta_dot_B = (bc.array() * fs.B.array()).sum();
  FieldState<Scalar> out;
  out.E = gamma * (fs.E + cross(bc, fs.B)) - k * beta_dot_E * bc;
  out.B = gamma * (fs.B - cross(bc, fs.E)) - k * beta_dot_B * bc;
  return out;
}

/// Lorentz invariants (|E|^2 - |B|^2, Re E . B*).
template <class Scalar>
std::pair<Scalar, Scalar> field_invariants(const FieldState<Scalar>& fs) {
  const Scalar i1 = fs.E.squaredNorm() - fs.B.squaredNorm();
  const Scalar i2 = (fs.E.array() * fs.B.conjugate().array()).sum().real();
  return {i1, i2};
}

/// True iff E vanishes, B has no component transverse to beta, and the
/// transformation leaves B unchanged, all within `tol` (scaled by max(1, |B|)).
/// Vacuously true for beta = 0.
template <class Scalar, class Derived>
bool longitudinal_B_invariance_check(const FieldState<Scalar>& fs, const Eigen::MatrixBase<Derived>& beta,
                                     Scalar tol = Scalar(1e-12)) {
  const Scalar bnorm = beta.norm();
  if (!(bnorm < Scalar(1))) throw DomainError("longitudinal_B_invariance_check: |beta| must be < 1");
  if (bnorm == Scalar(0)) return true;
  const Scalar scale = std::max(Scalar(1), fs.B.norm());
  if (fs.E.norm() > tol * scale) return false;
  using C = std::complex<Scalar>;
  const Eigen::Matrix<C, 3, 1> u = (beta / bnorm).template cast<C>();
  const C b_par = (u.array() * fs.B.array()).sum();
  if ((fs.B - b_par * u).norm() > tol * scale) return false;
  return (lorentz_transform(fs, beta).B - fs.B).norm() <= tol * scale;
}

struct CancellationOptions {
  int site_range = 50;  ///< sampled translations use primitive coefficients in [-range, range]
  int grid_per_axis = 16;
};

/// max |E(site)| over `n_sites` random lattice translations divided by max |E|
/// over a grid on the conventional cell. Requires a Bragg-matched geometry.
/// n_sites = 0 yields 0 with a warning.
double cancellation_residual(const TriGammaGeometry& geom, const LatticeSpec& lattice, int n_sites,
                             std::uint64_t seed, const CancellationOptions& options = {});

/// Same ratio without the Bragg precondition, for studying detuned geometries.
double site_field_residual(const TriGammaGeometry& geom, const LatticeSpec& lattice, int n_sites,
                           std::uint64_t seed, const CancellationOptions& options = {});

/// |E(site+d) + E(site-d)| / |E(site+d) - E(site-d)| for a transverse offset d.
/// Small when the field's leading increment about the site is odd in d.
double transverse_antisymmetry(const TriGammaGeometry& geom, const Eigen::Vector3d& site,
                               const Eigen::Vector3d& delta);

}  // namespace trigamma
