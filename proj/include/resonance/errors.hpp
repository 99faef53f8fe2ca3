// SPDX-License-Identifier: Apache-2.0

#ifndef RESONANCE_ERRORS_HPP
#define RESONANCE_ERRORS_HPP

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>

namespace resonance
{

// Root of the library's exception hierarchy. Every error raised by the library derives
// from this type so callers (the CLI in particular) can map families of failures onto exit
// codes without listing each one.
class Error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

// Argument outside the supported range of a special function.
class DomainError : public Error
{
public:
  using Error::Error;
};

// A Hankel function vanished (or underflowed) where it appears in a denominator.
class PoleError : public Error
{
public:
  using Error::Error;
};

// A contour quadrature node landed on a Hankel zero of the boundary symbol.
class HankelPoleError : public PoleError
{
public:
  using PoleError::PoleError;
};

// Invalid numeric parameter (mesh size, tolerances, ...).
class ParamError : public Error
{
public:
  using Error::Error;
};

// Malformed potential text. Line and column are 1-based.
class SyntaxError : public Error
{
public:
  SyntaxError(const std::string &msg, int line, int column)
    : Error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " +
            msg),
      line_(line), column_(column)
  {
  }
  int line() const { return line_; }
  int column() const { return column_; }

private:
  int line_;
  int column_;
};

// Well-formed but meaningless potential text (unknown identifier, unbounded region, ...).
class SemanticError : public Error
{
public:
  SemanticError(const std::string &msg, int line, int column)
    : Error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " +
            msg),
      line_(line), column_(column)
  {
  }
  int line() const { return line_; }
  int column() const { return column_; }

private:
  int line_;
  int column_;
};

// Potential expression is singular at the evaluation point.
class EvalError : public Error
{
public:
  using Error::Error;
};

class DimensionError : public Error
{
public:
  using Error::Error;
};

// Exactly singular matrix met during factorization.
class SingularError : public Error
{
public:
  SingularError(const std::string &msg, std::size_t pivot)
    : Error(msg + " (pivot " + std::to_string(pivot) + ")"), pivot_(pivot)
  {
  }
  std::size_t pivot() const { return pivot_; }

private:
  std::size_t pivot_;
};

// A linear solve at a quadrature node failed its residual check, which means the node is
// (numerically) an eigenvalue of the matrix function.
class NearPoleError : public Error
{
public:
  NearPoleError(const std::string &msg, std::complex<double> z, double residual)
    : Error(msg), z_(z), residual_(residual)
  {
  }
  std::complex<double> node() const { return z_; }
  double residual() const { return residual_; }

private:
  std::complex<double> z_;
  double residual_;
};

// The number of live search regions exceeded the configured cap.
class BudgetError : public Error
{
public:
  using Error::Error;
};

class ConfigError : public Error
{
public:
  ConfigError(const std::string &msg, int line = 0)
    : Error(line > 0 ? "line " + std::to_string(line) + ": " + msg : msg), line_(line)
  {
  }
  int line() const { return line_; }

private:
  int line_;
};

// A tracked resonance could not be matched across refinement levels.
class MatchError : public Error
{
public:
  using Error::Error;
};

}  // namespace resonance

#endif  // RESONANCE_ERRORS_HPP
