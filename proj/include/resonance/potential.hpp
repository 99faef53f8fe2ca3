// SPDX-License-Identifier: Apache-2.0

#ifndef RESONANCE_POTENTIAL_HPP
#define RESONANCE_POTENTIAL_HPP

#include <complex>
#include <optional>
#include <string>
#include <vector>

namespace resonance
{

// Expression tree for piece values. Nodes live in a flat pool and refer to their operands by
// index; the root of a tree is the last node pushed for it.
struct ValueNode
{
  enum class Op
  {
    Literal,
    Var,
    Neg,
    Add,
    Sub,
    Mul,
    Div,
    Pow,
    Exp,
    Abs
  };
  enum class Variable
  {
    X,
    Y,
    R,
    Theta
  };

  Op op = Op::Literal;
  std::complex<double> literal{};
  Variable var = Variable::X;
  int exponent = 0;
  int lhs = -1;
  int rhs = -1;

  bool operator==(const ValueNode &) const = default;
};

struct ValueExpr
{
  std::vector<ValueNode> nodes;
  int root = -1;

  bool is_constant() const;
  bool operator==(const ValueExpr &) const = default;
};

// Geometric predicate. Bounds are closed; sector angles are taken in [0, 2*pi) and a point
// belongs to sector(t1; t2) when t1 <= theta < t2.
struct RegionNode
{
  enum class Kind
  {
    Disk,
    Annulus,
    Sector,
    Rect,
    And,
    Or
  };
  Kind kind = Kind::Disk;
  std::vector<double> params;
  int lhs = -1;
  int rhs = -1;

  bool operator==(const RegionNode &) const = default;
};

struct Region
{
  std::vector<RegionNode> nodes;
  int root = -1;

  bool contains(double x, double y) const;
  // Radius of a disk about the origin enclosing the region; +inf for unbounded regions.
  double bounding_radius() const;
  bool operator==(const Region &) const = default;
};

struct Piece
{
  Region region;
  ValueExpr value;
  int line = 0;  // source line, not part of the tree identity

  bool operator==(const Piece &o) const { return region == o.region && value == o.value; }
};

// Ordered piecewise potential; the first piece whose region contains a point defines V there
// and V = 0 outside every piece.
struct PotentialSpec
{
  double support = 0.0;
  bool support_declared = false;
  std::vector<Piece> pieces;

  bool operator==(const PotentialSpec &) const = default;
};

// Parses the line-oriented potential language:
//
//   support 1
//   piece disk(0,0;1) & sector(0;pi/2): 2
//   piece annulus(0.5;1): exp(1/(r^2-2)) + 0.5i
//
// Blank lines and '#' comments are ignored. Region parameters are real constant expressions.
// `first_line` is the line number reported for the first line of `text`.
// Throws SyntaxError or SemanticError with line and column.
PotentialSpec parse_potential(const std::string &text, int first_line = 1);

// Canonical text form; parse_potential(print_potential(s)) == s.
std::string print_potential(const PotentialSpec &spec);

// Index of the first piece containing (x, y), or -1.
int locate(const PotentialSpec &spec, double x, double y);

std::complex<double> eval_value(const ValueExpr &expr, double x, double y);

// Throws EvalError if the value is singular or non-finite at the point.
std::complex<double> eval_potential(const PotentialSpec &spec, double x, double y);

// Same as eval_potential when the containing piece is already known.
std::complex<double> eval_piece(const PotentialSpec &spec, int piece, double x, double y);

bool is_zero_potential(const PotentialSpec &spec);

// (r0, V0) if the potential is a single constant piece on a disk centred at the origin.
struct ConstantDisk
{
  double r0 = 0.0;
  std::complex<double> V0{};
};
std::optional<ConstantDisk> as_constant_disk(const PotentialSpec &spec);

}  // namespace resonance

#endif  // RESONANCE_POTENTIAL_HPP
