// SPDX-License-Identifier: Apache-2.0
//
// Rational-expression grammar for scenario files.
//
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := '-' unary | '+' unary | power
//   power   := atom ('^' ['-'] integer)?
//   atom    := number ['i'] | 'i' | variable | 'conj' '(' expr ')' | '(' expr ')'
//
// Variables are z, z1, z2 (holomorphic), and for test-form coefficients also
// x, y, x1, y1, x2, y2, zb, zb1, zb2 (zb = conjugate of z). Implicit
// multiplication is not supported: write 2*z, not 2z. The literal "2i" is the
// imaginary number 2i.

#pragma once

#include <array>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "bcurrent/common.hpp"

namespace bcurrent {

/// Multivariate polynomial in (z1, zb1, z2, zb2) with complex coefficients.
class Polynomial {
 public:
  using Exponents = std::array<int, 4>;

  Polynomial() = default;
  static Polynomial constant(cplx c);
  /// var: 0 = z1, 1 = zb1, 2 = z2, 3 = zb2.
  static Polynomial variable(int var);

  cplx operator()(const CPoint& z) const;

  Polynomial operator+(const Polynomial& o) const;
  Polynomial operator-(const Polynomial& o) const;
  Polynomial operator*(const Polynomial& o) const;
  Polynomial operator-() const;
  Polynomial pow(int k) const;
  Polynomial conj() const;

  /// Derivative with respect to one of the four variables.
  Polynomial derivative(int var) const;

  bool is_constant() const;
  bool is_zero() const { return terms_.empty(); }
  /// Bitmask of variables with nonzero exponent in some term.
  unsigned variables() const;
  int total_degree() const;
  const std::map<Exponents, cplx>& terms() const { return terms_; }

 private:
  void add_term(const Exponents& e, cplx c);
  std::map<Exponents, cplx> terms_;
};

/// Affine complex hyperplane {z : a . z = c} carrying a pole of given order.
/// In C^1 this is the single point c / a[0].
struct PoleLocus {
  CPoint a{cplx(1.0), cplx(0.0)};
  cplx c{0.0};
  int order = 1;

  double distance(const CPoint& z) const;
  /// Locus of z -> f(z - shift): {a . z = c + a . shift}.
  PoleLocus shifted(const CPoint& shift) const;
  /// For a locus {a_k z_k = c} in one coordinate, that coordinate; otherwise -1.
  int single_coordinate() const;
};

class Expression {
 public:
  enum class Domain { Holomorphic, Smooth };

  /// Throws Error(ConfigParse) on malformed text or disallowed variables.
  static Expression parse(const std::string& text, Domain domain);

  cplx operator()(const CPoint& z) const;

  const std::string& text() const { return text_; }
  /// Highest coordinate index referenced plus one (0 for constants).
  int dimension() const { return dimension_; }

  /// Exact polynomial form; throws Error(Unsupported) if a division by a
  /// non-constant occurs.
  Polynomial to_polynomial() const;

  /// Poles from every division and negative power; throws Error(Unsupported)
  /// for denominators that are not univariate or affine in z1, z2.
  std::vector<PoleLocus> pole_loci() const;

  struct Node;

 private:
  std::string text_;
  int dimension_ = 0;
  std::shared_ptr<const Node> root_;

  struct Instr {
    enum Op { Push, Var, Add, Sub, Mul, Div, Neg, Pow, Conj } op;
    cplx value{};
    int arg = 0;
  };
  std::vector<Instr> program_;
};

}  // namespace bcurrent
