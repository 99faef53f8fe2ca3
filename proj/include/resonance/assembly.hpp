// SPDX-License-Identifier: Apache-2.0

#ifndef RESONANCE_ASSEMBLY_HPP
#define RESONANCE_ASSEMBLY_HPP

#include <complex>
#include <iosfwd>
#include <memory>
#include <vector>

#include <Eigen/Dense>

#include "resonance/mesh.hpp"
#include "resonance/potential.hpp"
#include "resonance/types.hpp"

namespace resonance
{

struct Triplet
{
  int row = 0;
  int col = 0;
  Complex value{};
};

// Square complex matrix in compressed sparse row form with sorted column indices.
struct SparseComplexMatrix
{
  int n = 0;
  std::vector<int> row_ptr{0};
  std::vector<int> col_idx;
  ComplexVector values;

  // Duplicate entries are summed.
  static SparseComplexMatrix from_triplets(int n, const std::vector<Triplet> &triplets);
  static SparseComplexMatrix identity(int n);

  std::size_t nnz() const { return col_idx.size(); }
  // Storage position of (i, j), or -1 if the entry is not in the pattern.
  long find(int i, int j) const;
  Complex coeff(int i, int j) const;
  ComplexVector multiply(const ComplexVector &x) const;
  double norm_inf() const;
  // Complex symmetry A^T == A (not Hermitian), entrywise to `tol` relative to the largest
  // entry.
  bool is_symmetric(double tol = 0.0) const;
  bool is_structurally_symmetric() const;

  // Coordinate text format: one "row col re im" line per stored entry, 0-based indices.
  void write_coo(std::ostream &os) const;
};

enum class QuadratureRule
{
  ThreePoint,
  SevenPoint
};

struct PotentialQuadrature
{
  QuadratureRule rule = QuadratureRule::SevenPoint;
  // Triangles straddling a piece boundary are split recursively up to this depth; -1 picks
  // a depth from the mesh size so the misassigned area stays O(h^2).
  int max_cut_depth = -1;
};

SparseComplexMatrix assemble_stiffness(const Mesh &mesh);
SparseComplexMatrix assemble_mass(const Mesh &mesh);
SparseComplexMatrix assemble_potential(const Mesh &mesh, const PotentialSpec &spec,
                                       const PotentialQuadrature &quad = {});

// Fourier moments of the boundary hat functions,
//   c_n^i = int_0^{2pi} v_i(theta) cos(n theta) dtheta,  s_n^i likewise with sin,
// with traces linear in theta on every boundary edge. Rows follow `vertices`.
struct BoundaryModes
{
  int N = 0;
  double R = 1.0;
  int dim = 0;
  std::vector<int> vertices;
  Eigen::MatrixXd cos_moments;  // vertices.size() x (N + 1)
  Eigen::MatrixXd sin_moments;

  ComplexVector c(int n) const;
  ComplexVector s(int n) const;
};

BoundaryModes assemble_boundary_modes(const Mesh &mesh, int N);

// All k-independent pieces of F(k) = S + M_V - k^2 M - E(k), together with the sparsity
// pattern of F (mesh graph plus the dense boundary block) and scatter maps into it.
struct OperatorBundle
{
  std::shared_ptr<const Mesh> mesh;
  double R = 1.0;
  int N = 20;
  SparseComplexMatrix S;
  SparseComplexMatrix M;
  SparseComplexMatrix MV;
  BoundaryModes modes;

  SparseComplexMatrix pattern;       // values unused
  std::vector<long> mesh_to_pattern;  // for each stored entry of S (= M = MV pattern)
  std::vector<long> boundary_block;   // row-major nb x nb positions in `pattern`

  // Pattern of the bordered system (see assemble_bordered) and its scatter maps.
  SparseComplexMatrix bordered;
  std::vector<long> mesh_to_bordered;
  std::vector<long> border_right;  // (mode, boundary row) -> position of B
  std::vector<long> border_below;  // (mode, boundary row) -> position of diag(beta) B^T
  std::vector<long> border_diag;   // mode -> position of the identity block

  int dim() const { return S.n; }
  // Number of bordering modes: c_0..c_N and s_1..s_N.
  int num_modes() const { return 2 * N + 1; }
};

// Throws ParamError if supp V is not inside the disk of radius mesh.radius.
OperatorBundle build_bundle(std::shared_ptr<const Mesh> mesh, const PotentialSpec &spec, int N,
                            const PotentialQuadrature &quad = {});

// beta_n(k) = (k R / pi) H_n'(kR) / H_n(kR) for n = 0..N, with the n = 0 term halved.
ComplexVector dtn_coefficients(const OperatorBundle &bundle, Complex k);

// d beta_n / dk for n = 0..N.
ComplexVector dtn_coefficient_derivatives(const OperatorBundle &bundle, Complex k);

// Dense boundary block of E(k), rows/columns ordered as bundle.modes.vertices.
Eigen::MatrixXcd boundary_block(const OperatorBundle &bundle, Complex k);

SparseComplexMatrix assemble_F(const OperatorBundle &bundle, Complex k);

// F(k) x without materializing F.
ComplexVector apply_F(const OperatorBundle &bundle, Complex k, const ComplexVector &x);

// F'(k) x = -2k M x - E'(k) x.
ComplexVector apply_dF(const OperatorBundle &bundle, Complex k, const ComplexVector &x);

// Sparse (J + m) x (J + m) system equivalent to F(k) x = f:
//
//   [ S + M_V - k^2 M    B ] [x]   [f]
//   [ diag(beta) B^T     I ] [y] = [0]
//
// where the m = 2N + 1 columns of B are c_0..c_N, s_1..s_N. Eliminating y gives back
// F(k) = S + M_V - k^2 M - B diag(beta) B^T; the border replaces the dense boundary block
// of E(k) and keeps the factorization close to that of the sparse part.
SparseComplexMatrix assemble_bordered(const OperatorBundle &bundle, Complex k);

}  // namespace resonance

#endif  // RESONANCE_ASSEMBLY_HPP
