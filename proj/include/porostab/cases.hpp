#pragma once

#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "porostab/assembly.hpp"
#include "porostab/materials.hpp"
#include "porostab/mesh.hpp"

namespace porostab {

/// Traction history on one boundary side. Sinusoidal loads report
/// -amplitude * sin(2 pi t / period); after freeze_time the force is held at
/// +amplitude (the maximum value along +component).
struct LoadSchedule {
  enum class Kind { Sinusoidal, Constant };
  Kind kind = Kind::Sinusoidal;
  Side side = Side::ZPlus;
  int component = 2;
  double total_force = 0.0;  // N
  double period_s = 0.0;
  double freeze_time_s = std::numeric_limits<double>::infinity();

  double force_at(double t) const;
};

/// Fluid source: total volumetric rate split equally over tagged cells,
/// active while t <= duration.
struct Injection {
  std::vector<int> cells;
  double volumetric_rate = 0.0;  // m^3/s
  double duration_s = std::numeric_limits<double>::infinity();

  double rate_at(double t) const { return t <= duration_s ? volumetric_rate : 0.0; }
};

/// Complete problem description: geometry, materials, boundary conditions,
/// forcing, and the default diagnostic/stabilization masks. Flow boundaries
/// are no-flow everywhere.
struct Scenario {
  std::string name;
  int nx = 1, ny = 1, nz = 1;
  double lx = 1.0, ly = 1.0, lz = 1.0;
  std::vector<int> region_of_cell;  // lexicographic, i fastest
  std::map<int, RegionMaterial> materials;

  std::vector<Side> fixed_sides;                  // all components zero
  std::vector<std::pair<Side, int>> roller_sides; // (side, constrained component)

  std::optional<LoadSchedule> traction;
  std::optional<Injection> injection;

  std::vector<int> index_mask_regions;  // oscillation-index mask
  std::vector<int> stab_mask_regions;   // default stabilization mask
  double p0 = 0.0;                      // initial/reference pressure

  StructuredMesh make_mesh() const;
  MaterialSet make_materials() const { return MaterialSet(materials); }
  DirichletSet make_dirichlet(const StructuredMesh& mesh) const;
  Loads loads_at(const StructuredMesh& mesh, double t) const;
};

/// Overridable inputs of the cantilevered-plate problem.
struct CantileverParams {
  int nx = 20, ny = 1, nz = 20;
  double lx = 1.0, ly = 0.05, lz = 1.0;
  double K_dr = 5e9;
  double nu = 0.25;
  Modulus K_s = Modulus::inf();
  Modulus K_f = Modulus::inf();
  double phi0 = 0.05;
  double kappa = 0.0;
  double mu_f = 1e-3;
  double rho_f = 1000.0;
  double rho_s = 2700.0;
  double total_force = 100.0;                  // N, peak of the sinusoid
  double period_s = 10.0 * 86400.0;
  double freeze_time_s = std::numeric_limits<double>::infinity();
};

/// Plate fixed along x-, sinusoidal traction on top, one-cell-thick slab with
/// rollers on both y faces (plane strain), no-flow everywhere.
Scenario build_cantilever(const CantileverParams& params = {});

/// Overridable inputs of the spiral-staircase problem.
struct StaircaseParams {
  int n = 12;           // cells per axis (must be even)
  double edge = 120.0;  // m, cube edge
  double K_dr = 5e9;
  double nu = 0.25;
  double channel_kappa = 9.8e-13;
  double channel_phi0 = 0.2;
  double barrier_kappa = 0.0;
  double barrier_phi0 = 0.05;
  double mu_f = 1e-3;
  double rho_f = 1000.0;
  double rho_s = 2700.0;
  double mass_rate = 1.0;                       // kg/s
  double duration_s = 30.0 * 365.0 * 86400.0;
};

/// High-permeability channel spiraling upward through a zero-permeability
/// barrier (2x2x2 octants); injection into the bottom inlet cells, rollers on
/// all sides except the free top.
Scenario build_staircase(const StaircaseParams& params = {});

constexpr int kChannelRegion = 0;
constexpr int kBarrierRegion = 1;

}  // namespace porostab
