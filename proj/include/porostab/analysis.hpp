#pragma once

#include <set>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "porostab/assembly.hpp"
#include "porostab/materials.hpp"
#include "porostab/mesh.hpp"

namespace porostab {

/// Index values above/below which a pressure field is classified as
/// checkerboard-polluted / smooth.
constexpr double kOscillatoryIndexThreshold = 0.5;
constexpr double kSmoothIndexThreshold = 0.1;

/// Inputs of the 1D amplification factor of the stabilized explicit
/// fixed-stress scheme.
struct VonNeumannParams {
  Modulus M_biot = Modulus::inf();  // Biot modulus, Pa
  double b = 1.0;                   // Biot coefficient
  double K_dr = 0.0;                // Pa
  double k = 0.0;                   // permeability, m^2
  double mu = 1e-3;                 // Pa s
  double dx = 1.0;                  // m
  double dt = 1.0;                  // s
  double tau = 0.0;                 // 1/Pa
  double theta = 0.0;               // radians in [0, pi]
};

/// Nonzero amplification factor of the per-mode two-level recurrence:
///
///   gamma = [dx^2 mu (K + M b^2) + 2 mu K M dx^3 tau (1-cos t)] /
///           [dx^2 mu (K + M b^2) + 2 K M dt k (1-cos t)
///                                + 2 mu K M dx^3 tau (1-cos t)]
///
/// For infinite M the expression is evaluated with numerator and denominator
/// divided through by M. Always returns a value in [0, 1].
double amplification_factor(const VonNeumannParams& p);

struct SweepRow {
  double theta, dt, tau, gamma;
};

struct SweepGrid {
  std::vector<double> thetas;
  std::vector<double> dts;
  std::vector<double> taus;
  VonNeumannParams base;  // theta, dt, tau ignored
};

/// Evaluates gamma over the grid; throws if any value exceeds 1.
std::vector<SweepRow> stability_sweep(const SweepGrid& grid);

/// CSV with columns theta,dt,tau,gamma (17 significant digits).
void write_sweep_csv(const std::string& path, const std::vector<SweepRow>& rows);

/// Normalized checkerboard content of a cell field over the cells of the
/// masked regions: jump energy across masked interior faces over field
/// variance, divided by the value the same quotient attains on the pure
/// checkerboard. Constant fields give 0; the checkerboard gives 1.
double oscillation_index(const Eigen::VectorXd& p, const StructuredMesh& mesh,
                         const std::set<int>& region_mask);

/// max_{interior dofs} |(B^T p_mode)|.
double nullspace_residual(const SparseMatrix& B, const Eigen::VectorXd& p_mode,
                          const std::vector<int>& interior_nodes);

}  // namespace porostab
