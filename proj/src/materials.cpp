#include "porostab/materials.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace porostab {

DerivedModuli derive_moduli(const RegionMaterial& m) {
  if (!(m.K_dr > 0.0)) throw std::invalid_argument("materials: K_dr must be positive");
  if (m.nu >= 0.5)
    throw std::invalid_argument(
        "materials: nu >= 0.5 (incompressible skeleton) is not supported; "
        "use incompressible grains/fluid instead");
  if (m.nu <= -1.0) throw std::invalid_argument("materials: nu must exceed -1");
  if (!(m.phi0 > 0.0 && m.phi0 < 1.0))
    throw std::invalid_argument("materials: phi0 must lie in (0,1)");
  if (m.kappa < 0.0) throw std::invalid_argument("materials: kappa must be >= 0");
  if (!(m.mu_f > 0.0)) throw std::invalid_argument("materials: mu_f must be positive");

  DerivedModuli d;
  d.G = 3.0 * m.K_dr * (1.0 - 2.0 * m.nu) / (2.0 * (1.0 + m.nu));
  d.lambda = m.K_dr - 2.0 * d.G / 3.0;
  d.b = m.K_s.infinite ? 1.0 : 1.0 - m.K_dr / m.K_s.value;
  if (!(d.b > 0.0 && d.b <= 1.0))
    throw std::invalid_argument("materials: Biot coefficient b = 1 - K_dr/K_s = " +
                                std::to_string(d.b) + " outside (0,1]");
  d.invN = m.K_s.infinite ? 0.0 : (d.b - m.phi0) / m.K_s.value;
  d.invM = d.invN + (m.K_f.infinite ? 0.0 : m.phi0 / m.K_f.value);
  if (d.invM < 0.0)
    throw std::invalid_argument("materials: negative storage 1/M (phi0 > b with stiff fluid)");
  return d;
}

double compute_tau(double lambda, double G, double c) {
  if (c < 0.0) throw std::invalid_argument("compute_tau: c must be >= 0");
  const double denom = 32.0 * (lambda + 4.0 * G);
  if (!(denom > 0.0)) throw std::invalid_argument("compute_tau: lambda + 4G must be positive");
  return c * 9.0 / denom;
}

void StabilizationConfig::validate() const {
  if (enabled && !(c > 0.0))
    throw std::invalid_argument("stabilization: c must be positive when enabled");
}

MaterialSet::MaterialSet(const std::map<int, RegionMaterial>& per_region)
    : per_region_(per_region) {
  for (const auto& [region, mat] : per_region_) derived_[region] = derive_moduli(mat);
}

const RegionMaterial& MaterialSet::material(int region) const {
  auto it = per_region_.find(region);
  if (it == per_region_.end())
    throw std::out_of_range("materials: no material for region " + std::to_string(region));
  return it->second;
}

const DerivedModuli& MaterialSet::derived(int region) const {
  auto it = derived_.find(region);
  if (it == derived_.end())
    throw std::out_of_range("materials: no material for region " + std::to_string(region));
  return it->second;
}

}  // namespace porostab
