#include "trigamma/constants.hpp"

#include <cmath>
#include <string>

#include "trigamma/error.hpp"

namespace trigamma {
namespace {

void require_positive(double value, const char* name) {
  if (!(value > 0.0)) throw DomainError(std::string("RhodiumParams.") + name + " must be > 0");
}

}  // namespace

void validate(const RhodiumParams& p) {
  require_positive(p.tau0, "tau0");
  require_positive(p.gamma_energy, "gamma_energy");
  require_positive(p.depth_photoelectric, "depth_photoelectric");
  require_positive(p.depth_nuclear, "depth_nuclear");
  require_positive(p.expansion_coeff, "expansion_coeff");
  require_positive(p.specific_heat, "specific_heat");
  require_positive(p.density, "density");
  require_positive(p.lattice_constant, "lattice_constant");
  for (int i = 0; i < 3; ++i) require_positive(p.sample_dims[i], "sample_dims");
  if (!(p.stored_energy >= 0.0) || !std::isfinite(p.stored_energy))
    throw DomainError("RhodiumParams.stored_energy must be finite and >= 0");
}

double natural_linewidth(double tau0) {
  if (!(tau0 > 0.0)) throw DomainError("natural_linewidth: tau0 must be > 0");
  return units::hbar_eV_s / tau0;
}

double doppler_speed_per_linewidth(const RhodiumParams& params) {
  validate(params);
  return units::c * natural_linewidth(params.tau0) / params.gamma_energy;
}

double thermal_strain_rate(const RhodiumParams& params) {
  if (!(params.sample_volume() > 0.0)) throw DomainError("thermal_strain_rate: zero sample volume");
  validate(params);
  const double power = params.stored_energy / params.tau0;
  const double heating_rate = power / (params.sample_mass() * params.specific_heat);
  return params.expansion_coeff * heating_rate;
}

double photon_wavenumber(double gamma_energy) {
  if (!(gamma_energy > 0.0)) throw DomainError("photon_wavenumber: energy must be > 0");
  return gamma_energy / units::hbar_c_eV_m;
}

}  // namespace trigamma
