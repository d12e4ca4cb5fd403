#pragma once

#include <map>
#include <set>
#include <vector>

namespace porostab {

/// A bulk modulus that may be exactly infinite (incompressible constituent).
/// Kept as an explicit flag so 1/N and 1/M come out exactly zero.
struct Modulus {
  double value = 0.0;
  bool infinite = false;

  static Modulus finite(double v) { return {v, false}; }
  static Modulus inf() { return {0.0, true}; }
  double reciprocal() const { return infinite ? 0.0 : 1.0 / value; }
};

/// Poroelastic and fluid constants of one material region.
struct RegionMaterial {
  double K_dr = 0.0;            // drained bulk modulus, Pa
  double nu = 0.0;              // Poisson ratio
  Modulus K_s = Modulus::inf(); // solid grain bulk modulus, Pa
  Modulus K_f = Modulus::inf(); // fluid bulk modulus, Pa
  double phi0 = 0.0;            // reference porosity
  double kappa = 0.0;           // isotropic permeability, m^2
  double mu_f = 1e-3;           // fluid viscosity, Pa s
  double rho_f = 1000.0;        // fluid density, kg/m^3
  double rho_s = 2700.0;        // solid density, kg/m^3
};

/// Moduli derived from a RegionMaterial.
struct DerivedModuli {
  double G = 0.0;      // shear modulus, Pa
  double lambda = 0.0; // first Lame parameter, Pa
  double b = 0.0;      // Biot coefficient
  double invN = 0.0;   // 1/N, 1/Pa
  double invM = 0.0;   // 1/M (Biot modulus reciprocal), 1/Pa
};

/// G = 3 K_dr (1-2nu) / (2(1+nu)), lambda = K_dr - 2G/3, b = 1 - K_dr/K_s,
/// 1/N = (b - phi0)/K_s, 1/M = 1/N + phi0/K_f.
DerivedModuli derive_moduli(const RegionMaterial& m);

/// tau = c * 9 / (32 (lambda + 4 G)). c = 0 turns stabilization off.
double compute_tau(double lambda, double G, double c);

/// Pressure-jump stabilization settings.
struct StabilizationConfig {
  bool enabled = false;
  double c = 1.0;                 // topology constant (1 hexahedra, 3 tetrahedra)
  std::set<int> region_mask;     // regions where the jump flux applies

  void validate() const;
};

/// Materials for every region id appearing in a mesh, with derived moduli.
class MaterialSet {
 public:
  explicit MaterialSet(const std::map<int, RegionMaterial>& per_region);

  const RegionMaterial& material(int region) const;
  const DerivedModuli& derived(int region) const;
  bool has_region(int region) const { return per_region_.count(region) > 0; }
  const std::map<int, RegionMaterial>& all() const { return per_region_; }

 private:
  std::map<int, RegionMaterial> per_region_;
  std::map<int, DerivedModuli> derived_;
};

}  // namespace porostab
