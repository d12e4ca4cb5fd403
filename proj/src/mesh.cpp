#include "porostab/mesh.hpp"

#include <stdexcept>

namespace porostab {

Side parse_side(const std::string& token) {
  if (token == "x-") return Side::XMinus;
  if (token == "x+") return Side::XPlus;
  if (token == "y-") return Side::YMinus;
  if (token == "y+") return Side::YPlus;
  if (token == "z-") return Side::ZMinus;
  if (token == "z+") return Side::ZPlus;
  throw std::invalid_argument("invalid side token '" + token +
                              "' (expected one of x-,x+,y-,y+,z-,z+)");
}

std::string side_name(Side s) {
  switch (s) {
    case Side::XMinus: return "x-";
    case Side::XPlus: return "x+";
    case Side::YMinus: return "y-";
    case Side::YPlus: return "y+";
    case Side::ZMinus: return "z-";
    case Side::ZPlus: return "z+";
  }
  return "?";
}

namespace {
int side_axis(Side s) {
  switch (s) {
    case Side::XMinus:
    case Side::XPlus: return 0;
    case Side::YMinus:
    case Side::YPlus: return 1;
    default: return 2;
  }
}
bool side_is_plus(Side s) {
  return s == Side::XPlus || s == Side::YPlus || s == Side::ZPlus;
}
}  // namespace

StructuredMesh::StructuredMesh(int nx, int ny, int nz, double dx, double dy,
                               double dz,
                               const std::function<int(int, int, int)>& region_fn,
                               const Eigen::Vector3d& origin)
    : nx_(nx), ny_(ny), nz_(nz), dx_(dx), dy_(dy), dz_(dz), origin_(origin) {
  if (nx < 1 || ny < 1 || nz < 1)
    throw std::invalid_argument("mesh: cell counts must be positive");
  if (!(dx > 0.0) || !(dy > 0.0) || !(dz > 0.0))
    throw std::invalid_argument("mesh: cell edge lengths must be positive");

  region_of_cell_.resize(static_cast<size_t>(n_cells()));
  for (int k = 0; k < nz_; ++k)
    for (int j = 0; j < ny_; ++j)
      for (int i = 0; i < nx_; ++i)
        region_of_cell_[cell_index(i, j, k)] = region_fn(i, j, k);

  const double areas[3] = {dy_ * dz_, dx_ * dz_, dx_ * dy_};
  const double dists[3] = {dx_, dy_, dz_};

  // Interior faces, axis by axis, lexicographic within each axis.
  for (int axis = 0; axis < 3; ++axis) {
    for (int k = 0; k < nz_; ++k)
      for (int j = 0; j < ny_; ++j)
        for (int i = 0; i < nx_; ++i) {
          int ii = i + (axis == 0), jj = j + (axis == 1), kk = k + (axis == 2);
          if (ii >= nx_ || jj >= ny_ || kk >= nz_) continue;
          InteriorFace f;
          f.left = cell_index(i, j, k);
          f.right = cell_index(ii, jj, kk);
          f.axis = axis;
          f.area = areas[axis];
          f.dist = dists[axis];
          interior_faces_.push_back(f);
        }
  }

  for (int axis = 0; axis < 3; ++axis) {
    const int n_axis[3] = {nx_, ny_, nz_};
    for (int k = 0; k < nz_; ++k)
      for (int j = 0; j < ny_; ++j)
        for (int i = 0; i < nx_; ++i) {
          const int idx[3] = {i, j, k};
          if (idx[axis] == 0)
            boundary_faces_.push_back({cell_index(i, j, k), axis, -1, areas[axis]});
          if (idx[axis] == n_axis[axis] - 1)
            boundary_faces_.push_back({cell_index(i, j, k), axis, +1, areas[axis]});
        }
  }
}

double StructuredMesh::face_area(int axis) const {
  switch (axis) {
    case 0: return dy_ * dz_;
    case 1: return dx_ * dz_;
    default: return dx_ * dy_;
  }
}

std::array<int, 3> StructuredMesh::cell_ijk(int cell) const {
  int i = cell % nx_;
  int j = (cell / nx_) % ny_;
  int k = cell / (nx_ * ny_);
  return {i, j, k};
}

std::array<int, 3> StructuredMesh::node_ijk(int node) const {
  int i = node % (nx_ + 1);
  int j = (node / (nx_ + 1)) % (ny_ + 1);
  int k = node / ((nx_ + 1) * (ny_ + 1));
  return {i, j, k};
}

Eigen::Vector3d StructuredMesh::cell_center(int cell) const {
  auto [i, j, k] = cell_ijk(cell);
  return origin_ + Eigen::Vector3d((i + 0.5) * dx_, (j + 0.5) * dy_, (k + 0.5) * dz_);
}

Eigen::Vector3d StructuredMesh::node_position(int node) const {
  auto [i, j, k] = node_ijk(node);
  return origin_ + Eigen::Vector3d(i * dx_, j * dy_, k * dz_);
}

std::array<int, 8> StructuredMesh::cell_nodes(int cell) const {
  auto [i, j, k] = cell_ijk(cell);
  std::array<int, 8> nodes;
  int c = 0;
  for (int ck = 0; ck < 2; ++ck)
    for (int cj = 0; cj < 2; ++cj)
      for (int ci = 0; ci < 2; ++ci) nodes[c++] = node_index(i + ci, j + cj, k + ck);
  return nodes;
}

std::vector<BoundaryFace> StructuredMesh::boundary_faces_on(Side side) const {
  const int axis = side_axis(side);
  const int sign = side_is_plus(side) ? +1 : -1;
  std::vector<BoundaryFace> out;
  for (const auto& f : boundary_faces_)
    if (f.axis == axis && f.normal_sign == sign) out.push_back(f);
  return out;
}

std::vector<int> StructuredMesh::boundary_nodes_on(Side side) const {
  const int axis = side_axis(side);
  const int n_axis[3] = {nx_, ny_, nz_};
  const int plane = side_is_plus(side) ? n_axis[axis] : 0;
  std::vector<int> out;
  for (int n = 0; n < n_nodes(); ++n)
    if (node_ijk(n)[axis] == plane) out.push_back(n);
  return out;
}

std::vector<int> StructuredMesh::interior_nodes() const {
  const int n_axis[3] = {nx_, ny_, nz_};
  std::vector<int> out;
  for (int n = 0; n < n_nodes(); ++n) {
    auto ijk = node_ijk(n);
    bool interior = true;
    for (int axis = 0; axis < 3; ++axis) {
      if (n_axis[axis] == 1) continue;
      if (ijk[axis] == 0 || ijk[axis] == n_axis[axis]) interior = false;
    }
    if (interior) out.push_back(n);
  }
  return out;
}

StructuredMesh build_mesh(int nx, int ny, int nz, double dx, double dy, double dz,
                          const std::function<int(int, int, int)>& region_fn) {
  return StructuredMesh(nx, ny, nz, dx, dy, dz, region_fn);
}

Eigen::VectorXd checkerboard_vector(const StructuredMesh& mesh) {
  Eigen::VectorXd v(mesh.n_cells());
  for (int c = 0; c < mesh.n_cells(); ++c) {
    auto [i, j, k] = mesh.cell_ijk(c);
    v[c] = ((i + j + k) % 2 == 0) ? 1.0 : -1.0;
  }
  return v;
}

}  // namespace porostab
