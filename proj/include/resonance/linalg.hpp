// SPDX-License-Identifier: Apache-2.0

#ifndef RESONANCE_LINALG_HPP
#define RESONANCE_LINALG_HPP

#include <cstdint>
#include <functional>
#include <memory>
#include <vector>

#include "resonance/assembly.hpp"

namespace resonance
{

struct LUOptions
{
  // Symmetric pivoting strategy (diagonal preference); suits structurally symmetric systems.
  bool symmetric = false;
  // Nested-dissection (METIS) ordering instead of AMD/COLAMD.
  bool metis = false;
  // Iterative refinement steps in solve().
  int refinement_steps = 2;
};

// Fill-reducing ordering and symbolic LU analysis of a sparsity pattern. Every F(z) of one
// operator bundle shares a pattern, so a single analysis serves all quadrature nodes.
class SymbolicLU
{
public:
  explicit SymbolicLU(const SparseComplexMatrix &pattern, const LUOptions &options = {});
  ~SymbolicLU();
  SymbolicLU(const SymbolicLU &) = delete;
  SymbolicLU &operator=(const SymbolicLU &) = delete;

  bool matches(const SparseComplexMatrix &A) const;
  void *handle() const { return symbolic_; }
  const LUOptions &options() const { return options_; }

private:
  LUOptions options_;
  int n_ = 0;
  std::vector<long> ptr_;
  std::vector<long> idx_;
  void *symbolic_ = nullptr;
};

// Solves with one fixed operator.
class LinearSolver
{
public:
  virtual ~LinearSolver() = default;
  virtual int dim() const = 0;
  virtual ComplexVector solve(const ComplexVector &b) const = 0;
};

// Sparse LU factors (UMFPACK, threshold partial pivoting on a fill-reducing ordering) of a
// complex matrix. Immutable after construction; concurrent solves are safe.
class Factorization : public LinearSolver
{
public:
  // Throws SingularError (with the zero pivot's position) for an exactly singular matrix.
  explicit Factorization(SparseComplexMatrix A, std::shared_ptr<const SymbolicLU> symbolic = {});
  ~Factorization() override;
  Factorization(const Factorization &) = delete;
  Factorization &operator=(const Factorization &) = delete;
  Factorization(Factorization &&other) noexcept;
  Factorization &operator=(Factorization &&other) noexcept;

  int dim() const override { return A_.n; }
  const SparseComplexMatrix &matrix() const { return A_; }
  // UMFPACK's reciprocal condition estimate min|U_ii| / max|U_ii|.
  double rcond() const { return rcond_; }

  // Throws DimensionError on a size mismatch.
  ComplexVector solve(const ComplexVector &b) const override;

  // ||A x - b||_2 / ||b||_2.
  double relative_residual(const ComplexVector &x, const ComplexVector &b) const;

private:
  void release();

  SparseComplexMatrix A_;
  std::vector<long> ptr_;
  std::vector<long> idx_;
  std::shared_ptr<const SymbolicLU> symbolic_;
  void *numeric_ = nullptr;
  double rcond_ = 0.0;
};

Factorization lu_factor(const SparseComplexMatrix &A);
ComplexVector solve(const Factorization &fact, const ComplexVector &b);

double norm2(const ComplexVector &x);

// Unit-norm complex Gaussian vector from a seeded generator.
ComplexVector random_unit_vector(int n, std::uint64_t seed);

struct InverseIterationResult
{
  Complex lambda{};
  ComplexVector u;
  int iterations = 0;
  bool converged = false;
  double residual = 0.0;  // ||A u - lambda u||_2
};

// Inverse iteration for the smallest-magnitude eigenvalue of A with a Rayleigh-quotient
// estimate. Stops once ||A u - lambda u||_2 <= tol ||A||_inf; on exhausting max_iter the best
// iterate is returned with converged = false.
InverseIterationResult inverse_iteration(const SparseComplexMatrix &A, double tol, int max_iter,
                                         std::uint64_t seed);
InverseIterationResult inverse_iteration(const Factorization &fact, double tol, int max_iter,
                                         std::uint64_t seed);

// Same iteration for an operator known only through `apply` and a solver for it. `scale`
// stands in for ||A||_inf; `start` (if non-empty) replaces the random starting vector.
InverseIterationResult inverse_iteration(const LinearSolver &solver,
                                         const std::function<ComplexVector(const ComplexVector &)> &apply,
                                         double scale, double tol, int max_iter, std::uint64_t seed,
                                         const ComplexVector &start = {});

}  // namespace resonance

#endif  // RESONANCE_LINALG_HPP
