#pragma once

#include <Eigen/Core>

namespace trigamma {

namespace units {
/// Reduced Planck constant, eV s (CODATA 2018).
inline constexpr double hbar_eV_s = 6.582119569e-16;
/// Speed of light in vacuum, m/s.
inline constexpr double c = 299792458.0;
/// hbar * c, eV m.
inline constexpr double hbar_c_eV_m = hbar_eV_s * c;
inline constexpr double pi = 3.141592653589793238462643383279502884;
}  // namespace units

/// Nominal 40 keV Mössbauer gamma energy, eV.
inline constexpr double kRhodiumGammaEnergy = 40.0e3;
/// Tabulated 103mRh isomeric transition energy, eV.
inline constexpr double kRhodiumGammaEnergyTabulated = 39.755e3;
/// Cubic lattice constant of fcc rhodium at room temperature, m (external crystallographic data).
inline constexpr double kRhodiumLatticeConstant = 3.8034e-10;

/// Physical parameters of the 103Rh Mössbauer system. SI units throughout
/// except gamma_energy, which is in eV.
struct RhodiumParams {
  double tau0 = 4857.0;                   ///< mean lifetime of the isomeric state, s
  double gamma_energy = kRhodiumGammaEnergy;  ///< eV
  double depth_photoelectric = 50e-6;     ///< non-Borrmann photo-electric penetration depth, m
  double depth_nuclear = 22e-6;           ///< non-Borrmann nuclear-scattering penetration depth, m
  double expansion_coeff = 8.5e-6;        ///< linear thermal expansion, 1/K
  double specific_heat = 244.0;           ///< J/(K kg)
  double density = 12.4e3;                ///< kg/m^3
  double lattice_constant = kRhodiumLatticeConstant;  ///< m
  Eigen::Vector3d sample_dims{0.025, 0.025, 0.001};   ///< m
  double stored_energy = 1e-3;            ///< J held in the isomeric state after irradiation

  double sample_volume() const { return sample_dims.prod(); }
  double sample_mass() const { return density * sample_volume(); }
};

/// Throws DomainError naming the first field that is not strictly positive.
/// stored_energy may be zero (an unirradiated sample).
void validate(const RhodiumParams& params);

/// Natural linewidth Gamma = hbar / tau0, eV.
double natural_linewidth(double tau0);

/// Source/absorber speed whose first-order Doppler shift equals one natural linewidth, m/s.
double doppler_speed_per_linewidth(const RhodiumParams& params);

/// Initial thermal strain rate, 1/s. The stored energy is released with time constant
/// tau0, so the heating power is stored_energy / tau0 and
/// rate = expansion_coeff * power / (mass * specific_heat).
double thermal_strain_rate(const RhodiumParams& params);

/// Photon wavenumber k = E / (hbar c), 1/m.
double photon_wavenumber(double gamma_energy);

}  // namespace trigamma
