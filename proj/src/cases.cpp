#include "porostab/cases.hpp"

#include <cmath>
#include <stdexcept>

namespace porostab {

double LoadSchedule::force_at(double t) const {
  if (kind == Kind::Constant) return total_force;
  if (t >= freeze_time_s) return total_force;
  return -total_force * std::sin(2.0 * M_PI * t / period_s);
}

StructuredMesh Scenario::make_mesh() const {
  if (static_cast<int>(region_of_cell.size()) != nx * ny * nz)
    throw std::invalid_argument("scenario: region_of_cell size mismatch");
  const double dx = lx / nx, dy = ly / ny, dz = lz / nz;
  const auto& regions = region_of_cell;
  const int nxl = nx, nyl = ny;
  return StructuredMesh(nx, ny, nz, dx, dy, dz, [&regions, nxl, nyl](int i, int j, int k) {
    return regions[static_cast<size_t>(i + nxl * (j + nyl * k))];
  });
}

DirichletSet Scenario::make_dirichlet(const StructuredMesh& mesh) const {
  DirichletSet d(mesh.n_dofs());
  for (Side s : fixed_sides)
    for (int n : mesh.boundary_nodes_on(s)) d.fix_node(n);
  for (auto [s, comp] : roller_sides)
    for (int n : mesh.boundary_nodes_on(s)) d.fix_component(n, comp);
  return d;
}

Loads Scenario::loads_at(const StructuredMesh& mesh, double t) const {
  Loads l;
  l.Q_u = Eigen::VectorXd::Zero(mesh.n_dofs());
  l.Q_p = Eigen::VectorXd::Zero(mesh.n_cells());
  if (traction) {
    const double f = traction->force_at(t);
    if (f != 0.0)
      l.Q_u = traction_forces(mesh, traction->side, traction->component, f);
  }
  if (injection) {
    const double q = injection->rate_at(t);
    if (q != 0.0) l.Q_p = volumetric_sources(mesh, injection->cells, q);
  }
  return l;
}

Scenario build_cantilever(const CantileverParams& p) {
  Scenario s;
  s.name = "cantilever";
  s.nx = p.nx;
  s.ny = p.ny;
  s.nz = p.nz;
  s.lx = p.lx;
  s.ly = p.ly;
  s.lz = p.lz;
  s.region_of_cell.assign(static_cast<size_t>(p.nx) * p.ny * p.nz, 0);

  RegionMaterial m;
  m.K_dr = p.K_dr;
  m.nu = p.nu;
  m.K_s = p.K_s;
  m.K_f = p.K_f;
  m.phi0 = p.phi0;
  m.kappa = p.kappa;
  m.mu_f = p.mu_f;
  m.rho_f = p.rho_f;
  m.rho_s = p.rho_s;
  s.materials[0] = m;

  s.fixed_sides = {Side::XMinus};
  s.roller_sides = {{Side::YMinus, 1}, {Side::YPlus, 1}};

  LoadSchedule load;
  load.kind = LoadSchedule::Kind::Sinusoidal;
  load.side = Side::ZPlus;
  load.component = 2;
  load.total_force = p.total_force;
  load.period_s = p.period_s;
  load.freeze_time_s = p.freeze_time_s;
  s.traction = load;

  s.index_mask_regions = {0};
  s.stab_mask_regions = {0};
  return s;
}

Scenario build_staircase(const StaircaseParams& p) {
  if (p.n < 2 || p.n % 2 != 0)
    throw std::invalid_argument("staircase: cell count per axis must be even and >= 2");

  Scenario s;
  s.name = "staircase";
  s.nx = s.ny = s.nz = p.n;
  s.lx = s.ly = s.lz = p.edge;

  // Channel octants (X,Y,Z in {0,1}): a face-connected path rising through
  // the cube; everything else is barrier.
  auto octant_is_channel = [](int X, int Y, int Z) {
    return (X == 0 && Y == 0 && Z == 0) || (X == 1 && Y == 0 && Z == 0) ||
           (X == 1 && Y == 0 && Z == 1) || (X == 1 && Y == 1 && Z == 1);
  };
  const int half = p.n / 2;
  s.region_of_cell.resize(static_cast<size_t>(p.n) * p.n * p.n);
  for (int k = 0; k < p.n; ++k)
    for (int j = 0; j < p.n; ++j)
      for (int i = 0; i < p.n; ++i) {
        const bool ch = octant_is_channel(i >= half, j >= half, k >= half);
        s.region_of_cell[static_cast<size_t>(i + p.n * (j + p.n * k))] =
            ch ? kChannelRegion : kBarrierRegion;
      }

  RegionMaterial channel;
  channel.K_dr = p.K_dr;
  channel.nu = p.nu;
  channel.K_s = Modulus::inf();
  channel.K_f = Modulus::inf();
  channel.phi0 = p.channel_phi0;
  channel.kappa = p.channel_kappa;
  channel.mu_f = p.mu_f;
  channel.rho_f = p.rho_f;
  channel.rho_s = p.rho_s;
  RegionMaterial barrier = channel;
  barrier.phi0 = p.barrier_phi0;
  barrier.kappa = p.barrier_kappa;
  s.materials[kChannelRegion] = channel;
  s.materials[kBarrierRegion] = barrier;

  s.fixed_sides = {};
  s.roller_sides = {{Side::XMinus, 0}, {Side::XPlus, 0}, {Side::YMinus, 1},
                    {Side::YPlus, 1},  {Side::ZMinus, 2}};

  // Inlet: bottom layer of the (0,0,0) channel octant.
  Injection inj;
  for (int j = 0; j < half; ++j)
    for (int i = 0; i < half; ++i) inj.cells.push_back(i + p.n * j);
  inj.volumetric_rate = p.mass_rate / p.rho_f;
  inj.duration_s = p.duration_s;
  s.injection = inj;

  s.index_mask_regions = {kBarrierRegion};
  s.stab_mask_regions = {kBarrierRegion};
  return s;
}

}  // namespace porostab
