#include "porostab/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace porostab {

double amplification_factor(const VonNeumannParams& p) {
  if (!(p.dx > 0.0) || !(p.dt > 0.0))
    throw std::invalid_argument("amplification_factor: dx and dt must be positive");
  if (p.tau < 0.0 || p.k < 0.0)
    throw std::invalid_argument("amplification_factor: tau and k must be >= 0");
  if (p.theta < 0.0 || p.theta > M_PI + 1e-12)
    throw std::invalid_argument("amplification_factor: theta outside [0, pi]");
  if (!(p.K_dr > 0.0)) throw std::invalid_argument("amplification_factor: K_dr must be positive");

  const double onc = 1.0 - std::cos(p.theta);
  if (onc == 0.0) return 1.0;

  const double dx2mu = p.dx * p.dx * p.mu;
  double num, den;
  if (p.M_biot.infinite) {
    // Formula divided through by M.
    const double stab = 2.0 * p.mu * p.K_dr * p.dx * p.dx * p.dx * p.tau * onc;
    num = dx2mu * p.b * p.b + stab;
    den = dx2mu * p.b * p.b + 2.0 * p.K_dr * p.dt * p.k * onc + stab;
  } else {
    const double M = p.M_biot.value;
    const double stab = 2.0 * p.mu * p.K_dr * M * p.dx * p.dx * p.dx * p.tau * onc;
    num = dx2mu * (p.K_dr + M * p.b * p.b) + stab;
    den = dx2mu * (p.K_dr + M * p.b * p.b) + 2.0 * p.K_dr * M * p.dt * p.k * onc + stab;
  }
  if (!(den > 0.0))
    throw std::invalid_argument("amplification_factor: degenerate parameters (zero denominator)");
  return num / den;
}

std::vector<SweepRow> stability_sweep(const SweepGrid& grid) {
  std::vector<SweepRow> rows;
  rows.reserve(grid.thetas.size() * grid.dts.size() * grid.taus.size());
  for (double theta : grid.thetas)
    for (double dt : grid.dts)
      for (double tau : grid.taus) {
        VonNeumannParams p = grid.base;
        p.theta = theta;
        p.dt = dt;
        p.tau = tau;
        const double gamma = amplification_factor(p);
        if (gamma > 1.0)
          throw std::logic_error("stability_sweep: gamma exceeds 1");
        rows.push_back({theta, dt, tau, gamma});
      }
  return rows;
}

void write_sweep_csv(const std::string& path, const std::vector<SweepRow>& rows) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("stability_sweep: cannot open " + path);
  out << "theta,dt,tau,gamma\n";
  char buf[160];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%.17g\n", r.theta, r.dt, r.tau,
                  r.gamma);
    out << buf;
  }
}

namespace {

struct JumpQuotient {
  double jump = 0.0;
  double var = 0.0;
};

JumpQuotient masked_quotient(const Eigen::VectorXd& p, const StructuredMesh& mesh,
                             const std::set<int>& mask) {
  JumpQuotient q;
  double sum = 0.0;
  int n = 0;
  for (int c = 0; c < mesh.n_cells(); ++c)
    if (mask.count(mesh.region_of_cell(c))) {
      sum += p[c];
      ++n;
    }
  if (n == 0) throw std::invalid_argument("oscillation_index: empty region mask");
  const double mean = sum / n;
  for (int c = 0; c < mesh.n_cells(); ++c)
    if (mask.count(mesh.region_of_cell(c))) {
      const double d = p[c] - mean;
      q.var += d * d;
    }
  int n_faces = 0;
  for (const auto& f : mesh.interior_faces()) {
    if (!mask.count(mesh.region_of_cell(f.left)) ||
        !mask.count(mesh.region_of_cell(f.right)))
      continue;
    const double d = p[f.left] - p[f.right];
    q.jump += d * d;
    ++n_faces;
  }
  if (n_faces == 0)
    throw std::invalid_argument("oscillation_index: mask contains no interior face");
  return q;
}

}  // namespace

double oscillation_index(const Eigen::VectorXd& p, const StructuredMesh& mesh,
                         const std::set<int>& region_mask) {
  if (p.size() != mesh.n_cells())
    throw std::invalid_argument("oscillation_index: field size mismatch");
  const JumpQuotient qp = masked_quotient(p, mesh, region_mask);
  if (qp.var == 0.0) return 0.0;
  const JumpQuotient qc = masked_quotient(checkerboard_vector(mesh), mesh, region_mask);
  const double index = (qp.jump / qp.var) / (qc.jump / qc.var);
  return std::clamp(index, 0.0, 1.0);
}

double nullspace_residual(const SparseMatrix& B, const Eigen::VectorXd& p_mode,
                          const std::vector<int>& interior_nodes) {
  const Eigen::VectorXd r = apply_transpose(B, p_mode);
  double worst = 0.0;
  for (int n : interior_nodes)
    for (int c = 0; c < 3; ++c) worst = std::max(worst, std::abs(r[3 * n + c]));
  return worst;
}

}  // namespace porostab
