// SPDX-License-Identifier: Apache-2.0

#include "resonance/linalg.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <string>
#include <utility>

#include <umfpack.h>

#include "resonance/errors.hpp"

namespace resonance
{

namespace
{

// Our CSR arrays are the CSC arrays of A^T; UMFPACK factors that transpose and solves with
// UMFPACK_Aat (array transpose, no conjugation) to recover A x = b.
void csr_as_csc(const SparseComplexMatrix &A, std::vector<long> &ptr, std::vector<long> &idx)
{
  ptr.assign(A.row_ptr.begin(), A.row_ptr.end());
  idx.assign(A.col_idx.begin(), A.col_idx.end());
}

std::string umfpack_status(int status)
{
  switch (status)
  {
    case UMFPACK_ERROR_out_of_memory:
      return "out of memory";
    case UMFPACK_ERROR_invalid_matrix:
      return "invalid matrix";
    case UMFPACK_ERROR_different_pattern:
      return "pattern differs from the symbolic analysis";
    default:
      return "UMFPACK status " + std::to_string(status);
  }
}

void set_control(double *control, const LUOptions &options)
{
  umfpack_zl_defaults(control);
  if (options.symmetric)
  {
    control[UMFPACK_STRATEGY] = UMFPACK_STRATEGY_SYMMETRIC;
  }
  if (options.metis)
  {
    control[UMFPACK_ORDERING] = UMFPACK_ORDERING_METIS;
  }
  control[UMFPACK_IRSTEP] = options.refinement_steps;
}

}  // namespace

SymbolicLU::SymbolicLU(const SparseComplexMatrix &pattern, const LUOptions &options)
  : options_(options), n_(pattern.n)
{
  csr_as_csc(pattern, ptr_, idx_);
  double control[UMFPACK_CONTROL];
  double info[UMFPACK_INFO];
  set_control(control, options_);
  const int status = umfpack_zl_symbolic(n_, n_, ptr_.data(), idx_.data(), nullptr, nullptr,
                                         &symbolic_, control, info);
  if (status != UMFPACK_OK)
  {
    throw SingularError("symbolic analysis failed: " + umfpack_status(status), 0);
  }
}

SymbolicLU::~SymbolicLU()
{
  if (symbolic_)
  {
    umfpack_zl_free_symbolic(&symbolic_);
  }
}

bool SymbolicLU::matches(const SparseComplexMatrix &A) const
{
  if (A.n != n_ || A.col_idx.size() != idx_.size())
  {
    return false;
  }
  for (std::size_t i = 0; i < ptr_.size(); i++)
  {
    if (ptr_[i] != A.row_ptr[i])
    {
      return false;
    }
  }
  for (std::size_t p = 0; p < idx_.size(); p++)
  {
    if (idx_[p] != A.col_idx[p])
    {
      return false;
    }
  }
  return true;
}

Factorization::Factorization(SparseComplexMatrix A, std::shared_ptr<const SymbolicLU> symbolic)
  : A_(std::move(A)), symbolic_(std::move(symbolic))
{
  if (A_.n <= 0)
  {
    throw DimensionError("cannot factor an empty matrix");
  }
  csr_as_csc(A_, ptr_, idx_);
  if (!symbolic_)
  {
    symbolic_ = std::make_shared<const SymbolicLU>(A_);
  }
  else if (!symbolic_->matches(A_))
  {
    throw DimensionError("matrix pattern differs from the symbolic analysis");
  }
  double control[UMFPACK_CONTROL];
  double info[UMFPACK_INFO];
  set_control(control, symbolic_->options());
  const double *ax = reinterpret_cast<const double *>(A_.values.data());
  const int status = umfpack_zl_numeric(ptr_.data(), idx_.data(), ax, nullptr,
                                        symbolic_->handle(), &numeric_, control, info);
  rcond_ = info[UMFPACK_RCOND];
  if (status == UMFPACK_WARNING_singular_matrix)
  {
    std::vector<double> diag(2 * static_cast<std::size_t>(A_.n));
    umfpack_zl_get_numeric(nullptr, nullptr, nullptr, nullptr, nullptr, nullptr, nullptr, nullptr,
                           nullptr, nullptr, diag.data(), nullptr, nullptr, nullptr, numeric_);
    std::size_t pivot = 0;
    for (std::size_t i = 0; i < static_cast<std::size_t>(A_.n); i++)
    {
      if (diag[2 * i] == 0.0 && diag[2 * i + 1] == 0.0)
      {
        pivot = i;
        break;
      }
    }
    release();
    throw SingularError("matrix is singular", pivot);
  }
  if (status != UMFPACK_OK)
  {
    release();
    throw SingularError("numeric factorization failed: " + umfpack_status(status), 0);
  }
}

Factorization::~Factorization()
{
  release();
}

Factorization::Factorization(Factorization &&other) noexcept
  : A_(std::move(other.A_)), ptr_(std::move(other.ptr_)), idx_(std::move(other.idx_)),
    symbolic_(std::move(other.symbolic_)), numeric_(std::exchange(other.numeric_, nullptr)),
    rcond_(other.rcond_)
{
}

Factorization &Factorization::operator=(Factorization &&other) noexcept
{
  if (this != &other)
  {
    release();
    A_ = std::move(other.A_);
    ptr_ = std::move(other.ptr_);
    idx_ = std::move(other.idx_);
    symbolic_ = std::move(other.symbolic_);
    numeric_ = std::exchange(other.numeric_, nullptr);
    rcond_ = other.rcond_;
  }
  return *this;
}

void Factorization::release()
{
  if (numeric_)
  {
    umfpack_zl_free_numeric(&numeric_);
    numeric_ = nullptr;
  }
}

ComplexVector Factorization::solve(const ComplexVector &b) const
{
  if (static_cast<int>(b.size()) != A_.n)
  {
    throw DimensionError("right-hand side has length " + std::to_string(b.size()) +
                         ", expected " + std::to_string(A_.n));
  }
  ComplexVector x(b.size());
  double control[UMFPACK_CONTROL];
  double info[UMFPACK_INFO];
  set_control(control, symbolic_->options());
  const int status = umfpack_zl_solve(
      UMFPACK_Aat, ptr_.data(), idx_.data(), reinterpret_cast<const double *>(A_.values.data()),
      nullptr, reinterpret_cast<double *>(x.data()), nullptr,
      reinterpret_cast<const double *>(b.data()), nullptr, numeric_, control, info);
  if (status != UMFPACK_OK && status != UMFPACK_WARNING_singular_matrix)
  {
    throw SingularError("solve failed: " + umfpack_status(status), 0);
  }
  return x;
}

double Factorization::relative_residual(const ComplexVector &x, const ComplexVector &b) const
{
  const ComplexVector Ax = A_.multiply(x);
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < b.size(); i++)
  {
    num += std::norm(Ax[i] - b[i]);
    den += std::norm(b[i]);
  }
  return den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
}

Factorization lu_factor(const SparseComplexMatrix &A)
{
  return Factorization(A);
}

ComplexVector solve(const Factorization &fact, const ComplexVector &b)
{
  return fact.solve(b);
}

double norm2(const ComplexVector &x)
{
  double s = 0.0;
  for (const auto &v : x)
  {
    s += std::norm(v);
  }
  return std::sqrt(s);
}

ComplexVector random_unit_vector(int n, std::uint64_t seed)
{
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  ComplexVector v(n);
  for (auto &e : v)
  {
    const double re = normal(gen);
    const double im = normal(gen);
    e = {re, im};
  }
  const double nv = norm2(v);
  for (auto &e : v)
  {
    e /= nv;
  }
  return v;
}

InverseIterationResult inverse_iteration(const SparseComplexMatrix &A, double tol, int max_iter,
                                         std::uint64_t seed)
{
  const Factorization fact(A);
  return inverse_iteration(fact, tol, max_iter, seed);
}

InverseIterationResult inverse_iteration(const Factorization &fact, double tol, int max_iter,
                                         std::uint64_t seed)
{
  const SparseComplexMatrix &A = fact.matrix();
  return inverse_iteration(
      fact, [&A](const ComplexVector &x) { return A.multiply(x); }, A.norm_inf(), tol, max_iter,
      seed);
}

InverseIterationResult inverse_iteration(const LinearSolver &solver,
                                         const std::function<ComplexVector(const ComplexVector &)> &apply,
                                         double scale, double tol, int max_iter, std::uint64_t seed,
                                         const ComplexVector &start)
{
  InverseIterationResult best;
  best.residual = std::numeric_limits<double>::infinity();
  ComplexVector u = random_unit_vector(solver.dim(), seed);
  if (!start.empty())
  {
    if (static_cast<int>(start.size()) != solver.dim() || !(norm2(start) > 0.0))
    {
      throw DimensionError("starting vector does not match the operator");
    }
    u = start;
    const double nu = norm2(u);
    for (auto &e : u)
    {
      e /= nu;
    }
  }
  for (int it = 1; it <= max_iter; it++)
  {
    ComplexVector y = solver.solve(u);
    const double ny = norm2(y);
    if (!(ny > 0.0) || !std::isfinite(ny))
    {
      break;
    }
    for (auto &e : y)
    {
      e /= ny;
    }
    u = std::move(y);
    const ComplexVector Au = apply(u);
    Complex lambda(0.0, 0.0);
    for (std::size_t i = 0; i < u.size(); i++)
    {
      lambda += std::conj(u[i]) * Au[i];
    }
    double r = 0.0;
    for (std::size_t i = 0; i < u.size(); i++)
    {
      r += std::norm(Au[i] - lambda * u[i]);
    }
    r = std::sqrt(r);
    if (r < best.residual)
    {
      best.lambda = lambda;
      best.u = u;
      best.residual = r;
    }
    best.iterations = it;
    if (r <= tol * scale)
    {
      best.converged = true;
      break;
    }
  }
  return best;
}

}  // namespace resonance
