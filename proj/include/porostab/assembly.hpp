#pragma once

#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "porostab/materials.hpp"
#include "porostab/mesh.hpp"

namespace porostab {

using SparseMatrix = Eigen::SparseMatrix<double>;

/// Per-dof essential (zero-displacement) constraints.
struct DirichletSet {
  std::vector<bool> constrained;  // size 3*n_nodes

  explicit DirichletSet(int n_dofs) : constrained(static_cast<size_t>(n_dofs), false) {}
  void fix_node(int node) {
    for (int c = 0; c < 3; ++c) constrained[3 * node + c] = true;
  }
  void fix_component(int node, int comp) { constrained[3 * node + comp] = true; }
  bool is_constrained(int dof) const { return constrained[dof]; }
  int count() const;
};

/// Time-level force/source vectors of the block system.
struct Loads {
  Eigen::VectorXd Q_u;  // nodal forces, N
  Eigen::VectorXd Q_p;  // volumetric fluid sources per cell, m^3/s
};

/// All discrete operators of the coupled system.
///
/// A      : Q1 elasticity stiffness with Dirichlet rows/columns eliminated
/// div_op : cell-wise volume-integrated divergence, row e = int_e grad(N) dV
/// B      : Biot coupling, row e = b_e * div_op row e
/// T      : TPFA transmissibility (applied to p^{n+1})
/// D_fim  : accumulation diagonal (1/M) V per cell
/// D_fs   : fixed-stress accumulation diagonal (1/M + b^2/K_dr) V per cell
/// S      : pressure-jump stabilization (applied to the pressure increment)
struct AssembledSystem {
  SparseMatrix A;
  SparseMatrix div_op;
  SparseMatrix B;
  SparseMatrix T;
  Eigen::VectorXd D_fim;
  Eigen::VectorXd D_fs;
  SparseMatrix S;
  DirichletSet dirichlet{0};
};

/// 24x24 Q1 element stiffness for an axis-aligned hex (2x2x2 Gauss).
Eigen::Matrix<double, 24, 24> element_stiffness(double dx, double dy, double dz,
                                                double lambda, double G);

SparseMatrix assemble_stiffness(const StructuredMesh& mesh, const MaterialSet& mats,
                                const DirichletSet& dirichlet);

/// Volume-integrated divergence: (div_op u)_e = int_e div(u) dV.
SparseMatrix assemble_divergence(const StructuredMesh& mesh);

/// B = diag(b_region) * div_op.
SparseMatrix assemble_coupling(const StructuredMesh& mesh, const MaterialSet& mats);

SparseMatrix assemble_tpfa(const StructuredMesh& mesh, const MaterialSet& mats);

Eigen::VectorXd assemble_accumulation_fim(const StructuredMesh& mesh,
                                          const MaterialSet& mats);
Eigen::VectorXd assemble_accumulation_fs(const StructuredMesh& mesh,
                                         const MaterialSet& mats);

/// Jump-penalty operator; interior faces whose two cells both lie in the
/// region mask get weight tau_face * (V_L + V_R)/2. Returns an empty (zero)
/// operator when disabled.
SparseMatrix assemble_stabilization(const StructuredMesh& mesh, const MaterialSet& mats,
                                    const StabilizationConfig& stab);

/// Consistent nodal forces of a uniform traction (total force spread over the
/// selected boundary side), acting along `component`.
Eigen::VectorXd traction_forces(const StructuredMesh& mesh, Side side, int component,
                                double total_force);

/// Volumetric source rate split equally over the given cells.
Eigen::VectorXd volumetric_sources(const StructuredMesh& mesh,
                                   const std::vector<int>& cells, double total_rate);

/// B^T p evaluated column-by-column in ascending cell order (deterministic,
/// preserves the exact cancellation of alternating modes).
Eigen::VectorXd apply_transpose(const SparseMatrix& B, const Eigen::VectorXd& p);

AssembledSystem assemble_system(const StructuredMesh& mesh, const MaterialSet& mats,
                                const DirichletSet& dirichlet,
                                const StabilizationConfig& stab);

}  // namespace porostab
