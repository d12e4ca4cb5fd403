#pragma once

#include <array>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace porostab {

/// Axis-aligned boundary plane selector.
enum class Side { XMinus, XPlus, YMinus, YPlus, ZMinus, ZPlus };

Side parse_side(const std::string& token);
std::string side_name(Side s);

/// Interior face between two cells, oriented along +axis (left -> right).
struct InteriorFace {
  int left = -1;
  int right = -1;
  int axis = 0;        // 0=x, 1=y, 2=z
  double area = 0.0;   // m^2
  double dist = 0.0;   // distance between adjacent cell centers, m
};

/// Boundary face of a single cell; normal points outward.
struct BoundaryFace {
  int cell = -1;
  int axis = 0;
  int normal_sign = 1;  // +1 on the plus side of the cell, -1 on the minus side
  double area = 0.0;
};

/// Uniform axis-aligned hexahedral grid. Cells and nodes are numbered
/// lexicographically with i fastest, then j, then k. Immutable once built.
class StructuredMesh {
 public:
  StructuredMesh(int nx, int ny, int nz, double dx, double dy, double dz,
                 const std::function<int(int, int, int)>& region_fn,
                 const Eigen::Vector3d& origin = Eigen::Vector3d::Zero());

  int nx() const { return nx_; }
  int ny() const { return ny_; }
  int nz() const { return nz_; }
  double dx() const { return dx_; }
  double dy() const { return dy_; }
  double dz() const { return dz_; }
  const Eigen::Vector3d& origin() const { return origin_; }

  int n_cells() const { return nx_ * ny_ * nz_; }
  int n_nodes() const { return (nx_ + 1) * (ny_ + 1) * (nz_ + 1); }
  int n_dofs() const { return 3 * n_nodes(); }

  double cell_volume() const { return dx_ * dy_ * dz_; }
  double face_area(int axis) const;

  int cell_index(int i, int j, int k) const { return i + nx_ * (j + ny_ * k); }
  int node_index(int i, int j, int k) const {
    return i + (nx_ + 1) * (j + (ny_ + 1) * k);
  }
  std::array<int, 3> cell_ijk(int cell) const;
  std::array<int, 3> node_ijk(int node) const;

  Eigen::Vector3d cell_center(int cell) const;
  Eigen::Vector3d node_position(int node) const;

  /// Nodes of a cell in the local corner order used by the Q1 element:
  /// corner c = (ci, cj, ck) with ci fastest, ci/cj/ck in {0,1}.
  std::array<int, 8> cell_nodes(int cell) const;

  int region_of_cell(int cell) const { return region_of_cell_[cell]; }
  const std::vector<int>& regions() const { return region_of_cell_; }

  const std::vector<InteriorFace>& interior_faces() const { return interior_faces_; }
  const std::vector<BoundaryFace>& boundary_faces() const { return boundary_faces_; }

  std::vector<BoundaryFace> boundary_faces_on(Side side) const;
  std::vector<int> boundary_nodes_on(Side side) const;

  /// Nodes strictly interior along every axis with more than one cell.
  /// Along slab axes (a single cell) every index is accepted; the discrete
  /// gradient of an alternating cell field still cancels at these nodes.
  std::vector<int> interior_nodes() const;

 private:
  int nx_, ny_, nz_;
  double dx_, dy_, dz_;
  Eigen::Vector3d origin_;
  std::vector<int> region_of_cell_;
  std::vector<InteriorFace> interior_faces_;
  std::vector<BoundaryFace> boundary_faces_;
};

StructuredMesh build_mesh(int nx, int ny, int nz, double dx, double dy, double dz,
                          const std::function<int(int, int, int)>& region_fn);

/// Cell field with entry (-1)^(i+j+k); the classic alternating-sign mode.
Eigen::VectorXd checkerboard_vector(const StructuredMesh& mesh);

}  // namespace porostab
