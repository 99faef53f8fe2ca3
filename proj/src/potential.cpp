// SPDX-License-Identifier: Apache-2.0

#include "resonance/potential.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <sstream>

#include "resonance/errors.hpp"

namespace resonance
{

namespace
{

constexpr double kTwoPi = 2.0 * std::numbers::pi;
// Closed bounds are tested with this slack so vertices placed on a circle by cos/sin still
// count as inside.
constexpr double kBoundSlack = 1e-12;

struct Token
{
  enum class Type
  {
    Number,
    Imaginary,
    Ident,
    Punct,
    End
  };
  Type type = Type::End;
  double number = 0.0;
  std::string text;
  char punct = '\0';
  int column = 0;
};

class Lexer
{
public:
  Lexer(const std::string &line, int line_no) : line_no_(line_no)
  {
    std::size_t i = 0;
    while (i < line.size())
    {
      const char c = line[i];
      if (std::isspace(static_cast<unsigned char>(c)))
      {
        i++;
        continue;
      }
      Token t;
      t.column = static_cast<int>(i) + 1;
      if (std::isdigit(static_cast<unsigned char>(c)) ||
          (c == '.' && i + 1 < line.size() && std::isdigit(static_cast<unsigned char>(line[i + 1]))))
      {
        std::size_t j = i;
        while (j < line.size() && (std::isdigit(static_cast<unsigned char>(line[j])) || line[j] == '.'))
        {
          j++;
        }
        if (j < line.size() && (line[j] == 'e' || line[j] == 'E'))
        {
          std::size_t k = j + 1;
          if (k < line.size() && (line[k] == '+' || line[k] == '-'))
          {
            k++;
          }
          if (k < line.size() && std::isdigit(static_cast<unsigned char>(line[k])))
          {
            while (k < line.size() && std::isdigit(static_cast<unsigned char>(line[k])))
            {
              k++;
            }
            j = k;
          }
        }
        const std::string literal = line.substr(i, j - i);
        if (std::count(literal.begin(), literal.end(), '.') > 1)
        {
          throw SyntaxError("malformed number '" + literal + "'", line_no_, t.column);
        }
        t.number = std::stod(literal);
        t.text = literal;
        t.type = Token::Type::Number;
        if (j < line.size() && line[j] == 'i' &&
            (j + 1 == line.size() || !(std::isalnum(static_cast<unsigned char>(line[j + 1])) ||
                                       line[j + 1] == '_')))
        {
          t.type = Token::Type::Imaginary;
          j++;
        }
        i = j;
      }
      else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_')
      {
        std::size_t j = i;
        while (j < line.size() &&
               (std::isalnum(static_cast<unsigned char>(line[j])) || line[j] == '_'))
        {
          j++;
        }
        t.type = Token::Type::Ident;
        t.text = line.substr(i, j - i);
        i = j;
      }
      else if (std::string_view("(),;:&|+-*/^").find(c) != std::string_view::npos)
      {
        t.type = Token::Type::Punct;
        t.punct = c;
        i++;
      }
      else
      {
        throw SyntaxError(std::string("unexpected character '") + c + "'", line_no_, t.column);
      }
      tokens_.push_back(t);
    }
    Token end;
    end.column = static_cast<int>(line.size()) + 1;
    tokens_.push_back(end);
  }

  const Token &peek() const { return tokens_[pos_]; }
  Token next() { return tokens_[pos_ < tokens_.size() - 1 ? pos_++ : pos_]; }
  bool at_punct(char c) const
  {
    return peek().type == Token::Type::Punct && peek().punct == c;
  }
  void expect(char c)
  {
    if (!at_punct(c))
    {
      fail(std::string("expected '") + c + "'");
    }
    pos_++;
  }
  [[noreturn]] void fail(const std::string &msg) const
  {
    const Token &t = peek();
    std::string found = t.type == Token::Type::End ? "end of line" : "'" + describe(t) + "'";
    throw SyntaxError(msg + ", found " + found, line_no_, t.column);
  }
  int line() const { return line_no_; }

private:
  static std::string describe(const Token &t)
  {
    if (t.type == Token::Type::Punct)
    {
      return std::string(1, t.punct);
    }
    return t.type == Token::Type::Imaginary ? t.text + "i" : t.text;
  }

  int line_no_;
  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

class ValueParser
{
public:
  explicit ValueParser(Lexer &lex) : lex_(lex) {}

  ValueExpr parse()
  {
    ValueExpr e;
    expr_ = &e;
    e.root = parse_sum();
    return e;
  }

private:
  int push(ValueNode n)
  {
    expr_->nodes.push_back(n);
    return static_cast<int>(expr_->nodes.size()) - 1;
  }

  int binary(ValueNode::Op op, int lhs, int rhs)
  {
    ValueNode n;
    n.op = op;
    n.lhs = lhs;
    n.rhs = rhs;
    return push(n);
  }

  int parse_sum()
  {
    int lhs = parse_product();
    while (lex_.at_punct('+') || lex_.at_punct('-'))
    {
      const char c = lex_.next().punct;
      const int rhs = parse_product();
      lhs = binary(c == '+' ? ValueNode::Op::Add : ValueNode::Op::Sub, lhs, rhs);
    }
    return lhs;
  }

  int parse_product()
  {
    int lhs = parse_unary();
    while (lex_.at_punct('*') || lex_.at_punct('/'))
    {
      const char c = lex_.next().punct;
      const int rhs = parse_unary();
      lhs = binary(c == '*' ? ValueNode::Op::Mul : ValueNode::Op::Div, lhs, rhs);
    }
    return lhs;
  }

  int parse_unary()
  {
    if (lex_.at_punct('-'))
    {
      lex_.next();
      ValueNode n;
      n.op = ValueNode::Op::Neg;
      n.lhs = parse_unary();
      return push(n);
    }
    if (lex_.at_punct('+'))
    {
      lex_.next();
      return parse_unary();
    }
    return parse_power();
  }

  int parse_power()
  {
    const int base = parse_primary();
    if (!lex_.at_punct('^'))
    {
      return base;
    }
    lex_.next();
    int sign = 1;
    if (lex_.at_punct('-') || lex_.at_punct('+'))
    {
      sign = lex_.next().punct == '-' ? -1 : 1;
    }
    const Token &t = lex_.peek();
    if (t.type != Token::Type::Number || t.text.find_first_of(".eE") != std::string::npos ||
        t.number > 64.0)
    {
      lex_.fail("expected an integer exponent (at most 64)");
    }
    lex_.next();
    ValueNode n;
    n.op = ValueNode::Op::Pow;
    n.lhs = base;
    n.exponent = sign * static_cast<int>(t.number);
    return push(n);
  }

  int parse_primary()
  {
    const Token t = lex_.peek();
    if (t.type == Token::Type::Number || t.type == Token::Type::Imaginary)
    {
      lex_.next();
      ValueNode n;
      n.literal = t.type == Token::Type::Number ? std::complex<double>(t.number, 0.0)
                                                : std::complex<double>(0.0, t.number);
      return push(n);
    }
    if (t.type == Token::Type::Punct && t.punct == '(')
    {
      lex_.next();
      const int inner = parse_sum();
      lex_.expect(')');
      return inner;
    }
    if (t.type != Token::Type::Ident)
    {
      lex_.fail("expected a number, variable, function or '('");
    }
    lex_.next();
    ValueNode n;
    if (t.text == "exp" || t.text == "abs")
    {
      n.op = t.text == "exp" ? ValueNode::Op::Exp : ValueNode::Op::Abs;
      lex_.expect('(');
      n.lhs = parse_sum();
      lex_.expect(')');
      return push(n);
    }
    if (t.text == "i")
    {
      n.literal = {0.0, 1.0};
      return push(n);
    }
    if (t.text == "pi")
    {
      n.literal = {std::numbers::pi, 0.0};
      return push(n);
    }
    n.op = ValueNode::Op::Var;
    if (t.text == "x")
    {
      n.var = ValueNode::Variable::X;
    }
    else if (t.text == "y")
    {
      n.var = ValueNode::Variable::Y;
    }
    else if (t.text == "r")
    {
      n.var = ValueNode::Variable::R;
    }
    else if (t.text == "theta")
    {
      n.var = ValueNode::Variable::Theta;
    }
    else
    {
      throw SemanticError("unknown identifier '" + t.text + "'", lex_.line(), t.column);
    }
    return push(n);
  }

  Lexer &lex_;
  ValueExpr *expr_ = nullptr;
};

double polar_angle(double x, double y)
{
  double theta = std::atan2(y, x);
  if (theta < 0.0)
  {
    theta += kTwoPi;
  }
  return theta >= kTwoPi ? 0.0 : theta;
}

std::complex<double> eval_node(const ValueExpr &e, int idx, double x, double y)
{
  const ValueNode &n = e.nodes[idx];
  switch (n.op)
  {
    case ValueNode::Op::Literal:
      return n.literal;
    case ValueNode::Op::Var:
      switch (n.var)
      {
        case ValueNode::Variable::X:
          return x;
        case ValueNode::Variable::Y:
          return y;
        case ValueNode::Variable::R:
          return std::hypot(x, y);
        case ValueNode::Variable::Theta:
          return polar_angle(x, y);
      }
      break;
    case ValueNode::Op::Neg:
      return -eval_node(e, n.lhs, x, y);
    case ValueNode::Op::Add:
      return eval_node(e, n.lhs, x, y) + eval_node(e, n.rhs, x, y);
    case ValueNode::Op::Sub:
      return eval_node(e, n.lhs, x, y) - eval_node(e, n.rhs, x, y);
    case ValueNode::Op::Mul:
      return eval_node(e, n.lhs, x, y) * eval_node(e, n.rhs, x, y);
    case ValueNode::Op::Div:
    {
      const auto den = eval_node(e, n.rhs, x, y);
      if (den == std::complex<double>(0.0, 0.0))
      {
        throw EvalError("division by zero");
      }
      return eval_node(e, n.lhs, x, y) / den;
    }
    case ValueNode::Op::Pow:
    {
      const auto base = eval_node(e, n.lhs, x, y);
      std::complex<double> acc(1.0, 0.0);
      for (int k = 0; k < std::abs(n.exponent); k++)
      {
        acc *= base;
      }
      if (n.exponent < 0)
      {
        if (acc == std::complex<double>(0.0, 0.0))
        {
          throw EvalError("negative power of zero");
        }
        acc = 1.0 / acc;
      }
      return acc;
    }
    case ValueNode::Op::Exp:
      return std::exp(eval_node(e, n.lhs, x, y));
    case ValueNode::Op::Abs:
      return std::abs(eval_node(e, n.lhs, x, y));
  }
  throw EvalError("corrupt expression tree");
}

void print_value(std::ostream &os, const ValueExpr &e, int idx)
{
  const ValueNode &n = e.nodes[idx];
  auto binary = [&](const char *op)
  {
    os << "(";
    print_value(os, e, n.lhs);
    os << " " << op << " ";
    print_value(os, e, n.rhs);
    os << ")";
  };
  char buf[64];
  switch (n.op)
  {
    case ValueNode::Op::Literal:
      if (n.literal.imag() == 0.0 && !std::signbit(n.literal.real()))
      {
        std::snprintf(buf, sizeof buf, "%.17g", n.literal.real());
        os << buf;
      }
      else if (n.literal.real() == 0.0 && !std::signbit(n.literal.imag()) &&
               !std::signbit(n.literal.real()))
      {
        std::snprintf(buf, sizeof buf, "%.17gi", n.literal.imag());
        os << buf;
      }
      else
      {
        std::snprintf(buf, sizeof buf, "(%.17g + %.17gi)", n.literal.real(), n.literal.imag());
        os << buf;
      }
      break;
    case ValueNode::Op::Var:
    {
      static const char *names[] = {"x", "y", "r", "theta"};
      os << names[static_cast<int>(n.var)];
      break;
    }
    case ValueNode::Op::Neg:
      os << "(-";
      print_value(os, e, n.lhs);
      os << ")";
      break;
    case ValueNode::Op::Add:
      binary("+");
      break;
    case ValueNode::Op::Sub:
      binary("-");
      break;
    case ValueNode::Op::Mul:
      binary("*");
      break;
    case ValueNode::Op::Div:
      binary("/");
      break;
    case ValueNode::Op::Pow:
      os << "(";
      print_value(os, e, n.lhs);
      os << ")^" << n.exponent;
      break;
    case ValueNode::Op::Exp:
    case ValueNode::Op::Abs:
      os << (n.op == ValueNode::Op::Exp ? "exp(" : "abs(");
      print_value(os, e, n.lhs);
      os << ")";
      break;
  }
}

class RegionParser
{
public:
  explicit RegionParser(Lexer &lex) : lex_(lex) {}

  Region parse()
  {
    Region r;
    region_ = &r;
    r.root = parse_union();
    return r;
  }

private:
  int push(RegionNode n)
  {
    region_->nodes.push_back(std::move(n));
    return static_cast<int>(region_->nodes.size()) - 1;
  }

  int parse_union()
  {
    int lhs = parse_intersection();
    while (lex_.at_punct('|'))
    {
      lex_.next();
      RegionNode n;
      n.kind = RegionNode::Kind::Or;
      n.lhs = lhs;
      n.rhs = parse_intersection();
      lhs = push(n);
    }
    return lhs;
  }

  int parse_intersection()
  {
    int lhs = parse_atom();
    while (lex_.at_punct('&'))
    {
      lex_.next();
      RegionNode n;
      n.kind = RegionNode::Kind::And;
      n.lhs = lhs;
      n.rhs = parse_atom();
      lhs = push(n);
    }
    return lhs;
  }

  double constant()
  {
    const int column = lex_.peek().column;
    ValueParser vp(lex_);
    const ValueExpr e = vp.parse();
    if (!e.is_constant())
    {
      throw SemanticError("region parameters must be constant", lex_.line(), column);
    }
    std::complex<double> v;
    try
    {
      v = eval_value(e, 0.0, 0.0);
    }
    catch (const EvalError &err)
    {
      throw SemanticError(std::string("region parameter: ") + err.what(), lex_.line(), column);
    }
    if (v.imag() != 0.0 || !std::isfinite(v.real()))
    {
      throw SemanticError("region parameters must be finite real numbers", lex_.line(), column);
    }
    return v.real();
  }

  int parse_atom()
  {
    if (lex_.at_punct('('))
    {
      lex_.next();
      const int inner = parse_union();
      lex_.expect(')');
      return inner;
    }
    const Token t = lex_.peek();
    if (t.type != Token::Type::Ident)
    {
      lex_.fail("expected a region (disk, annulus, sector, rect) or '('");
    }
    RegionNode n;
    int before = 0, after = 0;
    if (t.text == "disk")
    {
      n.kind = RegionNode::Kind::Disk;
      before = 2;
      after = 1;
    }
    else if (t.text == "annulus")
    {
      n.kind = RegionNode::Kind::Annulus;
      before = 1;
      after = 1;
    }
    else if (t.text == "sector")
    {
      n.kind = RegionNode::Kind::Sector;
      before = 1;
      after = 1;
    }
    else if (t.text == "rect")
    {
      n.kind = RegionNode::Kind::Rect;
      before = 2;
      after = 2;
    }
    else
    {
      throw SemanticError("unknown region '" + t.text + "'", lex_.line(), t.column);
    }
    lex_.next();
    lex_.expect('(');
    for (int k = 0; k < before + after; k++)
    {
      if (k > 0)
      {
        lex_.expect(k == before ? ';' : ',');
      }
      n.params.push_back(constant());
    }
    lex_.expect(')');

    const auto &p = n.params;
    bool ordered = true;
    switch (n.kind)
    {
      case RegionNode::Kind::Disk:
        ordered = p[2] > 0.0;
        break;
      case RegionNode::Kind::Annulus:
        ordered = p[0] >= 0.0 && p[0] < p[1];
        break;
      case RegionNode::Kind::Sector:
        ordered = p[0] >= 0.0 && p[0] < p[1] && p[1] <= kTwoPi + 1e-12;
        break;
      case RegionNode::Kind::Rect:
        ordered = p[0] < p[1] && p[2] < p[3];
        break;
      default:
        break;
    }
    if (!ordered)
    {
      throw SemanticError("region '" + t.text + "' has ill-ordered bounds", lex_.line(),
                          t.column);
    }
    return push(n);
  }

  Lexer &lex_;
  Region *region_ = nullptr;
};

bool region_contains(const Region &reg, int idx, double x, double y)
{
  const RegionNode &n = reg.nodes[idx];
  const auto &p = n.params;
  switch (n.kind)
  {
    case RegionNode::Kind::Disk:
      return std::hypot(x - p[0], y - p[1]) <= p[2] + kBoundSlack * std::max(1.0, p[2]);
    case RegionNode::Kind::Annulus:
    {
      const double r = std::hypot(x, y);
      const double slack = kBoundSlack * std::max(1.0, p[1]);
      return r >= p[0] - slack && r <= p[1] + slack;
    }
    case RegionNode::Kind::Sector:
    {
      const double theta = polar_angle(x, y);
      return theta >= p[0] && theta < p[1];
    }
    case RegionNode::Kind::Rect:
    {
      const double slack = kBoundSlack * std::max({1.0, std::abs(p[0]), std::abs(p[1]),
                                                   std::abs(p[2]), std::abs(p[3])});
      return x >= p[0] - slack && x <= p[1] + slack && y >= p[2] - slack && y <= p[3] + slack;
    }
    case RegionNode::Kind::And:
      return region_contains(reg, n.lhs, x, y) && region_contains(reg, n.rhs, x, y);
    case RegionNode::Kind::Or:
      return region_contains(reg, n.lhs, x, y) || region_contains(reg, n.rhs, x, y);
  }
  return false;
}

double region_radius(const Region &reg, int idx)
{
  const RegionNode &n = reg.nodes[idx];
  const auto &p = n.params;
  switch (n.kind)
  {
    case RegionNode::Kind::Disk:
      return std::hypot(p[0], p[1]) + p[2];
    case RegionNode::Kind::Annulus:
      return p[1];
    case RegionNode::Kind::Sector:
      return std::numeric_limits<double>::infinity();
    case RegionNode::Kind::Rect:
      return std::hypot(std::max(std::abs(p[0]), std::abs(p[1])),
                        std::max(std::abs(p[2]), std::abs(p[3])));
    case RegionNode::Kind::And:
      return std::min(region_radius(reg, n.lhs), region_radius(reg, n.rhs));
    case RegionNode::Kind::Or:
      return std::max(region_radius(reg, n.lhs), region_radius(reg, n.rhs));
  }
  return std::numeric_limits<double>::infinity();
}

void print_region(std::ostream &os, const Region &reg, int idx)
{
  const RegionNode &n = reg.nodes[idx];
  if (n.kind == RegionNode::Kind::And || n.kind == RegionNode::Kind::Or)
  {
    os << "(";
    print_region(os, reg, n.lhs);
    os << (n.kind == RegionNode::Kind::And ? " & " : " | ");
    print_region(os, reg, n.rhs);
    os << ")";
    return;
  }
  static const char *names[] = {"disk", "annulus", "sector", "rect"};
  const int before = (n.kind == RegionNode::Kind::Disk || n.kind == RegionNode::Kind::Rect) ? 2 : 1;
  os << names[static_cast<int>(n.kind)] << "(";
  char buf[40];
  for (std::size_t k = 0; k < n.params.size(); k++)
  {
    if (k > 0)
    {
      os << (static_cast<int>(k) == before ? ";" : ",");
    }
    std::snprintf(buf, sizeof buf, "%.17g", n.params[k]);
    os << buf;
  }
  os << ")";
}

std::string strip_comment(const std::string &line)
{
  const auto hash = line.find('#');
  return hash == std::string::npos ? line : line.substr(0, hash);
}

}  // namespace

bool ValueExpr::is_constant() const
{
  return std::none_of(nodes.begin(), nodes.end(),
                      [](const ValueNode &n) { return n.op == ValueNode::Op::Var; });
}

bool Region::contains(double x, double y) const
{
  return region_contains(*this, root, x, y);
}

double Region::bounding_radius() const
{
  return region_radius(*this, root);
}

PotentialSpec parse_potential(const std::string &text, int first_line)
{
  PotentialSpec spec;
  std::istringstream in(text);
  std::string raw;
  int line_no = first_line - 1;
  while (std::getline(in, raw))
  {
    line_no++;
    const std::string line = strip_comment(raw);
    Lexer lex(line, line_no);
    if (lex.peek().type == Token::Type::End)
    {
      continue;
    }
    const Token head = lex.next();
    if (head.type != Token::Type::Ident || (head.text != "support" && head.text != "piece"))
    {
      throw SyntaxError("expected 'support' or 'piece'", line_no, head.column);
    }
    if (head.text == "support")
    {
      if (spec.support_declared)
      {
        throw SemanticError("duplicate 'support' declaration", line_no, head.column);
      }
      const int column = lex.peek().column;
      ValueParser vp(lex);
      const ValueExpr e = vp.parse();
      if (lex.peek().type != Token::Type::End)
      {
        lex.fail("unexpected trailing input");
      }
      if (!e.is_constant())
      {
        throw SemanticError("support radius must be constant", line_no, column);
      }
      const auto v = eval_value(e, 0.0, 0.0);
      if (v.imag() != 0.0 || !(v.real() > 0.0) || !std::isfinite(v.real()))
      {
        throw SemanticError("support radius must be a positive real number", line_no, column);
      }
      spec.support = v.real();
      spec.support_declared = true;
      continue;
    }

    Piece piece;
    piece.line = line_no;
    const int region_column = lex.peek().column;
    RegionParser rp(lex);
    piece.region = rp.parse();
    lex.expect(':');
    ValueParser vp(lex);
    piece.value = vp.parse();
    if (lex.peek().type != Token::Type::End)
    {
      lex.fail("unexpected trailing input");
    }
    if (!std::isfinite(piece.region.bounding_radius()))
    {
      throw SemanticError("unbounded region (intersect sectors with a bounded region)", line_no,
                          region_column);
    }
    spec.pieces.push_back(std::move(piece));
  }

  double extent = 0.0;
  for (const auto &p : spec.pieces)
  {
    extent = std::max(extent, p.region.bounding_radius());
  }
  if (!spec.support_declared)
  {
    spec.support = extent;
  }
  else
  {
    for (const auto &p : spec.pieces)
    {
      if (p.region.bounding_radius() > spec.support * (1.0 + 1e-12))
      {
        throw SemanticError("piece region extends beyond the declared support radius", p.line,
                            1);
      }
    }
  }
  return spec;
}

std::string print_potential(const PotentialSpec &spec)
{
  std::ostringstream os;
  if (spec.support_declared)
  {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", spec.support);
    os << "support " << buf << "\n";
  }
  for (const auto &p : spec.pieces)
  {
    os << "piece ";
    print_region(os, p.region, p.region.root);
    os << ": ";
    print_value(os, p.value, p.value.root);
    os << "\n";
  }
  return os.str();
}

int locate(const PotentialSpec &spec, double x, double y)
{
  for (std::size_t i = 0; i < spec.pieces.size(); i++)
  {
    if (spec.pieces[i].region.contains(x, y))
    {
      return static_cast<int>(i);
    }
  }
  return -1;
}

std::complex<double> eval_value(const ValueExpr &expr, double x, double y)
{
  const auto v = eval_node(expr, expr.root, x, y);
  if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
  {
    throw EvalError("non-finite potential value");
  }
  return v;
}

std::complex<double> eval_piece(const PotentialSpec &spec, int piece, double x, double y)
{
  if (piece < 0)
  {
    return {0.0, 0.0};
  }
  try
  {
    return eval_value(spec.pieces[piece].value, x, y);
  }
  catch (const EvalError &e)
  {
    char buf[96];
    std::snprintf(buf, sizeof buf, " at (%.6g, %.6g), piece on line %d", x, y,
                  spec.pieces[piece].line);
    throw EvalError(e.what() + std::string(buf));
  }
}

std::complex<double> eval_potential(const PotentialSpec &spec, double x, double y)
{
  return eval_piece(spec, locate(spec, x, y), x, y);
}

bool is_zero_potential(const PotentialSpec &spec)
{
  return std::all_of(spec.pieces.begin(), spec.pieces.end(),
                     [](const Piece &p)
                     {
                       return p.value.is_constant() &&
                              eval_value(p.value, 0.0, 0.0) == std::complex<double>(0.0, 0.0);
                     });
}

std::optional<ConstantDisk> as_constant_disk(const PotentialSpec &spec)
{
  if (spec.pieces.size() != 1)
  {
    return std::nullopt;
  }
  const Piece &p = spec.pieces.front();
  const RegionNode &root = p.region.nodes[p.region.root];
  if (root.kind != RegionNode::Kind::Disk || root.params[0] != 0.0 || root.params[1] != 0.0 ||
      !p.value.is_constant())
  {
    return std::nullopt;
  }
  return ConstantDisk{root.params[2], eval_value(p.value, 0.0, 0.0)};
}

}  // namespace resonance
