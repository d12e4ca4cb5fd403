#include "porostab/assembly.hpp"

#include <cmath>
#include <stdexcept>

namespace porostab {

int DirichletSet::count() const {
  int n = 0;
  for (bool c : constrained) n += c ? 1 : 0;
  return n;
}

Eigen::Matrix<double, 24, 24> element_stiffness(double dx, double dy, double dz,
                                                double lambda, double G) {
  const double detJ = dx * dy * dz / 8.0;
  if (!(detJ > 0.0)) throw std::invalid_argument("element_stiffness: degenerate element");

  Eigen::Matrix<double, 24, 24> K = Eigen::Matrix<double, 24, 24>::Zero();
  const double g = 1.0 / std::sqrt(3.0);
  const double inv_len[3] = {2.0 / dx, 2.0 / dy, 2.0 / dz};

  // Corner signs follow the cell_nodes ordering (ci fastest).
  auto corner_sign = [](int a, int axis) {
    int bit = (axis == 0) ? (a & 1) : (axis == 1) ? ((a >> 1) & 1) : ((a >> 2) & 1);
    return bit == 1 ? 1.0 : -1.0;
  };

  for (int q = 0; q < 8; ++q) {
    const double xi[3] = {g * corner_sign(q, 0), g * corner_sign(q, 1),
                          g * corner_sign(q, 2)};
    // Physical gradients of the 8 trilinear shape functions at this point.
    double dN[8][3];
    for (int a = 0; a < 8; ++a) {
      double s[3], f[3];
      for (int d = 0; d < 3; ++d) {
        s[d] = corner_sign(a, d);
        f[d] = 0.5 * (1.0 + s[d] * xi[d]);
      }
      dN[a][0] = 0.5 * s[0] * f[1] * f[2] * inv_len[0];
      dN[a][1] = f[0] * 0.5 * s[1] * f[2] * inv_len[1];
      dN[a][2] = f[0] * f[1] * 0.5 * s[2] * inv_len[2];
    }
    for (int a = 0; a < 8; ++a)
      for (int b = 0; b < 8; ++b) {
        double dot = dN[a][0] * dN[b][0] + dN[a][1] * dN[b][1] + dN[a][2] * dN[b][2];
        for (int i = 0; i < 3; ++i)
          for (int j = 0; j < 3; ++j) {
            double v = lambda * dN[a][i] * dN[b][j] + G * dN[a][j] * dN[b][i];
            if (i == j) v += G * dot;
            K(3 * a + i, 3 * b + j) += v * detJ;
          }
      }
  }
  return K;
}

SparseMatrix assemble_stiffness(const StructuredMesh& mesh, const MaterialSet& mats,
                                const DirichletSet& dirichlet) {
  const int n = mesh.n_dofs();
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(static_cast<size_t>(mesh.n_cells()) * 24 * 24 + n);

  // Element matrices are shared within a region (uniform cells).
  std::map<int, Eigen::Matrix<double, 24, 24>> K_region;
  for (const auto& [region, mat] : mats.all()) {
    (void)mat;
    const auto& d = mats.derived(region);
    K_region[region] = element_stiffness(mesh.dx(), mesh.dy(), mesh.dz(), d.lambda, d.G);
  }

  for (int e = 0; e < mesh.n_cells(); ++e) {
    const auto& K = K_region.at(mesh.region_of_cell(e));
    const auto nodes = mesh.cell_nodes(e);
    for (int a = 0; a < 8; ++a)
      for (int i = 0; i < 3; ++i) {
        const int row = 3 * nodes[a] + i;
        if (dirichlet.is_constrained(row)) continue;
        for (int b = 0; b < 8; ++b)
          for (int j = 0; j < 3; ++j) {
            const int col = 3 * nodes[b] + j;
            if (dirichlet.is_constrained(col)) continue;
            trips.emplace_back(row, col, K(3 * a + i, 3 * b + j));
          }
      }
  }
  for (int d = 0; d < n; ++d)
    if (dirichlet.is_constrained(d)) trips.emplace_back(d, d, 1.0);

  SparseMatrix A(n, n);
  A.setFromTriplets(trips.begin(), trips.end());
  return A;
}

SparseMatrix assemble_divergence(const StructuredMesh& mesh) {
  // int_e dN_a/dx_i dV = sign_i(a) * A_i / 4 on an axis-aligned hex.
  const double area4[3] = {mesh.face_area(0) / 4.0, mesh.face_area(1) / 4.0,
                           mesh.face_area(2) / 4.0};
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(static_cast<size_t>(mesh.n_cells()) * 24);
  for (int e = 0; e < mesh.n_cells(); ++e) {
    const auto nodes = mesh.cell_nodes(e);
    for (int a = 0; a < 8; ++a) {
      const double sx = (a & 1) ? 1.0 : -1.0;
      const double sy = ((a >> 1) & 1) ? 1.0 : -1.0;
      const double sz = ((a >> 2) & 1) ? 1.0 : -1.0;
      trips.emplace_back(e, 3 * nodes[a] + 0, sx * area4[0]);
      trips.emplace_back(e, 3 * nodes[a] + 1, sy * area4[1]);
      trips.emplace_back(e, 3 * nodes[a] + 2, sz * area4[2]);
    }
  }
  SparseMatrix D(mesh.n_cells(), mesh.n_dofs());
  D.setFromTriplets(trips.begin(), trips.end());
  return D;
}

SparseMatrix assemble_coupling(const StructuredMesh& mesh, const MaterialSet& mats) {
  SparseMatrix B = assemble_divergence(mesh);
  for (int col = 0; col < B.outerSize(); ++col)
    for (SparseMatrix::InnerIterator it(B, col); it; ++it)
      it.valueRef() *= mats.derived(mesh.region_of_cell(static_cast<int>(it.row()))).b;
  return B;
}

SparseMatrix assemble_tpfa(const StructuredMesh& mesh, const MaterialSet& mats) {
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(mesh.interior_faces().size() * 4);
  for (const auto& f : mesh.interior_faces()) {
    const auto& mL = mats.material(mesh.region_of_cell(f.left));
    const auto& mR = mats.material(mesh.region_of_cell(f.right));
    const double dh = 0.5 * f.dist;  // cell center to face
    const double hL = mL.kappa * f.area / (mL.mu_f * dh);
    const double hR = mR.kappa * f.area / (mR.mu_f * dh);
    double t = 0.0;
    if (hL > 0.0 && hR > 0.0) t = hL * hR / (hL + hR);
    if (t == 0.0) continue;
    trips.emplace_back(f.left, f.left, t);
    trips.emplace_back(f.right, f.right, t);
    trips.emplace_back(f.left, f.right, -t);
    trips.emplace_back(f.right, f.left, -t);
  }
  SparseMatrix T(mesh.n_cells(), mesh.n_cells());
  T.setFromTriplets(trips.begin(), trips.end());
  return T;
}

Eigen::VectorXd assemble_accumulation_fim(const StructuredMesh& mesh,
                                          const MaterialSet& mats) {
  const double V = mesh.cell_volume();
  Eigen::VectorXd D(mesh.n_cells());
  for (int e = 0; e < mesh.n_cells(); ++e)
    D[e] = mats.derived(mesh.region_of_cell(e)).invM * V;
  return D;
}

Eigen::VectorXd assemble_accumulation_fs(const StructuredMesh& mesh,
                                         const MaterialSet& mats) {
  const double V = mesh.cell_volume();
  Eigen::VectorXd D(mesh.n_cells());
  for (int e = 0; e < mesh.n_cells(); ++e) {
    const auto& d = mats.derived(mesh.region_of_cell(e));
    const double K_dr = mats.material(mesh.region_of_cell(e)).K_dr;
    D[e] = (d.invM + d.b * d.b / K_dr) * V;
  }
  return D;
}

SparseMatrix assemble_stabilization(const StructuredMesh& mesh, const MaterialSet& mats,
                                    const StabilizationConfig& stab) {
  SparseMatrix S(mesh.n_cells(), mesh.n_cells());
  if (!stab.enabled) return S;
  stab.validate();

  std::map<int, double> tau_region;
  for (const auto& [region, mat] : mats.all()) {
    (void)mat;
    const auto& d = mats.derived(region);
    tau_region[region] = compute_tau(d.lambda, d.G, stab.c);
  }

  const double Vface = mesh.cell_volume();  // uniform cells: (V_L + V_R)/2 = V
  std::vector<Eigen::Triplet<double>> trips;
  for (const auto& f : mesh.interior_faces()) {
    const int rL = mesh.region_of_cell(f.left);
    const int rR = mesh.region_of_cell(f.right);
    if (!stab.region_mask.count(rL) || !stab.region_mask.count(rR)) continue;
    const double tau = 0.5 * (tau_region.at(rL) + tau_region.at(rR));
    const double w = tau * Vface;
    if (w == 0.0) continue;
    trips.emplace_back(f.left, f.left, w);
    trips.emplace_back(f.right, f.right, w);
    trips.emplace_back(f.left, f.right, -w);
    trips.emplace_back(f.right, f.left, -w);
  }
  S.setFromTriplets(trips.begin(), trips.end());
  return S;
}

Eigen::VectorXd traction_forces(const StructuredMesh& mesh, Side side, int component,
                                double total_force) {
  const auto faces = mesh.boundary_faces_on(side);
  if (faces.empty()) throw std::invalid_argument("traction_forces: empty boundary set");
  double total_area = 0.0;
  for (const auto& f : faces) total_area += f.area;

  Eigen::VectorXd Q = Eigen::VectorXd::Zero(mesh.n_dofs());
  for (const auto& f : faces) {
    const double face_force = total_force * f.area / total_area;
    // The 4 face nodes each take int N dA = A/4 of a uniform traction.
    const auto nodes = mesh.cell_nodes(f.cell);
    for (int a = 0; a < 8; ++a) {
      const int bit = (f.axis == 0) ? (a & 1) : (f.axis == 1) ? ((a >> 1) & 1)
                                                              : ((a >> 2) & 1);
      const int on_face = (f.normal_sign > 0) ? 1 : 0;
      if (bit != on_face) continue;
      Q[3 * nodes[a] + component] += face_force / 4.0;
    }
  }
  return Q;
}

Eigen::VectorXd volumetric_sources(const StructuredMesh& mesh,
                                   const std::vector<int>& cells, double total_rate) {
  Eigen::VectorXd Q = Eigen::VectorXd::Zero(mesh.n_cells());
  if (cells.empty()) {
    if (total_rate != 0.0)
      throw std::invalid_argument("volumetric_sources: rate given but no cells tagged");
    return Q;
  }
  const double per_cell = total_rate / static_cast<double>(cells.size());
  for (int c : cells) Q[c] += per_cell;
  return Q;
}

Eigen::VectorXd apply_transpose(const SparseMatrix& B, const Eigen::VectorXd& p) {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(B.cols());
  for (int col = 0; col < B.outerSize(); ++col) {
    double acc = 0.0;
    for (SparseMatrix::InnerIterator it(B, col); it; ++it) acc += it.value() * p[it.row()];
    out[col] = acc;
  }
  return out;
}

AssembledSystem assemble_system(const StructuredMesh& mesh, const MaterialSet& mats,
                                const DirichletSet& dirichlet,
                                const StabilizationConfig& stab) {
  AssembledSystem sys;
  sys.dirichlet = dirichlet;
  sys.A = assemble_stiffness(mesh, mats, dirichlet);
  sys.div_op = assemble_divergence(mesh);
  sys.B = assemble_coupling(mesh, mats);
  sys.T = assemble_tpfa(mesh, mats);
  sys.D_fim = assemble_accumulation_fim(mesh, mats);
  sys.D_fs = assemble_accumulation_fs(mesh, mats);
  sys.S = assemble_stabilization(mesh, mats, stab);
  return sys;
}

}  // namespace porostab
