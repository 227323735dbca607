// SPDX-License-Identifier: Apache-2.0

#include "bcurrent/expression.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cctype>
#include <cmath>
#include <functional>

namespace bcurrent {

// ---------------------------------------------------------------------------
// Polynomial

Polynomial Polynomial::constant(cplx c) {
  Polynomial p;
  p.add_term({0, 0, 0, 0}, c);
  return p;
}

Polynomial Polynomial::variable(int var) {
  Polynomial p;
  Exponents e{0, 0, 0, 0};
  e[var] = 1;
  p.add_term(e, 1.0);
  return p;
}

void Polynomial::add_term(const Exponents& e, cplx c) {
  auto [it, inserted] = terms_.emplace(e, c);
  if (!inserted) it->second += c;
  if (it->second == cplx(0.0)) terms_.erase(it);
}

cplx Polynomial::operator()(const CPoint& z) const {
  const std::array<cplx, 4> vars{z[0], std::conj(z[0]), z[1], std::conj(z[1])};
  cplx sum = 0.0;
  for (const auto& [e, c] : terms_) {
    cplx term = c;
    for (int v = 0; v < 4; ++v)
      for (int k = 0; k < e[v]; ++k) term *= vars[v];
    sum += term;
  }
  return sum;
}

Polynomial Polynomial::operator+(const Polynomial& o) const {
  Polynomial r = *this;
  for (const auto& [e, c] : o.terms_) r.add_term(e, c);
  return r;
}

Polynomial Polynomial::operator-(const Polynomial& o) const { return *this + (-o); }

Polynomial Polynomial::operator-() const {
  Polynomial r;
  for (const auto& [e, c] : terms_) r.add_term(e, -c);
  return r;
}

Polynomial Polynomial::operator*(const Polynomial& o) const {
  Polynomial r;
  for (const auto& [ea, ca] : terms_)
    for (const auto& [eb, cb] : o.terms_) {
      Exponents e;
      for (int v = 0; v < 4; ++v) e[v] = ea[v] + eb[v];
      r.add_term(e, ca * cb);
    }
  return r;
}

Polynomial Polynomial::pow(int k) const {
  if (k < 0) throw Error(ErrorCode::Unsupported, "negative power of a polynomial");
  Polynomial r = constant(1.0);
  for (int i = 0; i < k; ++i) r = r * *this;
  return r;
}

Polynomial Polynomial::conj() const {
  Polynomial r;
  for (const auto& [e, c] : terms_) r.add_term({e[1], e[0], e[3], e[2]}, std::conj(c));
  return r;
}

Polynomial Polynomial::derivative(int var) const {
  Polynomial r;
  for (const auto& [e, c] : terms_) {
    if (e[var] == 0) continue;
    Exponents d = e;
    d[var] -= 1;
    r.add_term(d, c * static_cast<double>(e[var]));
  }
  return r;
}

bool Polynomial::is_constant() const { return variables() == 0; }

unsigned Polynomial::variables() const {
  unsigned mask = 0;
  for (const auto& [e, c] : terms_)
    for (int v = 0; v < 4; ++v)
      if (e[v] > 0) mask |= 1u << v;
  return mask;
}

int Polynomial::total_degree() const {
  int deg = 0;
  for (const auto& [e, c] : terms_) deg = std::max(deg, e[0] + e[1] + e[2] + e[3]);
  return deg;
}

// ---------------------------------------------------------------------------
// PoleLocus

double PoleLocus::distance(const CPoint& z) const {
  const double an = std::sqrt(std::norm(a[0]) + std::norm(a[1]));
  return std::abs(a[0] * z[0] + a[1] * z[1] - c) / an;
}

PoleLocus PoleLocus::shifted(const CPoint& shift) const {
  PoleLocus r = *this;
  r.c = c + a[0] * shift[0] + a[1] * shift[1];
  return r;
}

int PoleLocus::single_coordinate() const {
  if (a[1] == cplx(0.0)) return 0;
  if (a[0] == cplx(0.0)) return 1;
  return -1;
}

// ---------------------------------------------------------------------------
// Parser

struct Expression::Node {
  enum Kind { Const, Var, Add, Sub, Mul, Div, Neg, Pow, Conj } kind;
  cplx value{};
  int var = 0;
  int exponent = 0;
  std::shared_ptr<const Node> lhs, rhs;
};

namespace {

using NodePtr = std::shared_ptr<const Expression::Node>;
using Node = Expression::Node;

NodePtr make(Node::Kind k, NodePtr a = nullptr, NodePtr b = nullptr) {
  auto n = std::make_shared<Node>();
  n->kind = k;
  n->lhs = std::move(a);
  n->rhs = std::move(b);
  return n;
}

NodePtr make_const(cplx c) {
  auto n = std::make_shared<Node>();
  n->kind = Node::Const;
  n->value = c;
  return n;
}

NodePtr make_var(int v) {
  auto n = std::make_shared<Node>();
  n->kind = Node::Var;
  n->var = v;
  return n;
}

class Parser {
 public:
  Parser(const std::string& text, Expression::Domain domain) : s_(text), domain_(domain) {}

  NodePtr parse() {
    NodePtr n = expr();
    skip_ws();
    if (pos_ != s_.size()) fail("unexpected character '" + std::string(1, s_[pos_]) + "'");
    return n;
  }

  int dimension() const { return dimension_; }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw Error(ErrorCode::ConfigParse,
                "expression \"" + s_ + "\" at offset " + std::to_string(pos_) + ": " + msg);
  }

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  NodePtr expr() {
    NodePtr n = term();
    for (;;) {
      if (accept('+'))
        n = make(Node::Add, n, term());
      else if (accept('-'))
        n = make(Node::Sub, n, term());
      else
        return n;
    }
  }

  NodePtr term() {
    NodePtr n = unary();
    for (;;) {
      if (accept('*'))
        n = make(Node::Mul, n, unary());
      else if (accept('/'))
        n = make(Node::Div, n, unary());
      else
        return n;
    }
  }

  NodePtr unary() {
    if (accept('-')) return make(Node::Neg, unary());
    if (accept('+')) return unary();
    return power();
  }

  NodePtr power() {
    NodePtr base = atom();
    if (!accept('^')) return base;
    bool negative = false;
    if (accept('-'))
      negative = true;
    else
      accept('+');
    skip_ws();
    const std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (start == pos_) fail("exponent must be an integer literal");
    auto n = std::make_shared<Node>();
    n->kind = Node::Pow;
    n->exponent = std::stoi(s_.substr(start, pos_ - start)) * (negative ? -1 : 1);
    n->lhs = base;
    return n;
  }

  NodePtr atom() {
    skip_ws();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    const char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      NodePtr n = expr();
      if (!accept(')')) fail("expected ')'");
      return n;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c))) return identifier();
    fail("unexpected character '" + std::string(1, c) + "'");
  }

  NodePtr number() {
    const char* begin = s_.c_str() + pos_;
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end == begin) fail("malformed number");
    pos_ += static_cast<std::size_t>(end - begin);
    if (pos_ < s_.size() && s_[pos_] == 'i' &&
        (pos_ + 1 >= s_.size() || !std::isalnum(static_cast<unsigned char>(s_[pos_ + 1])))) {
      ++pos_;
      return make_const(cplx(0.0, v));
    }
    return make_const(cplx(v, 0.0));
  }

  void use_coordinate(int k) {
    if (k >= kMaxDim) fail("only coordinates z1, z2 are supported");
    dimension_ = std::max(dimension_, k + 1);
  }

  NodePtr identifier() {
    const std::size_t start = pos_;
    while (pos_ < s_.size() && std::isalnum(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    const std::string id = s_.substr(start, pos_ - start);
    if (id == "i") return make_const(cplx(0.0, 1.0));
    if (id == "conj") {
      require_smooth(id);
      if (!accept('(')) fail("expected '(' after conj");
      NodePtr inner = expr();
      if (!accept(')')) fail("expected ')'");
      return make(Node::Conj, inner);
    }
    auto coordinate = [&](std::size_t prefix) -> int {
      if (id.size() == prefix) return 0;
      if (id.size() == prefix + 1 && (id[prefix] == '1' || id[prefix] == '2')) return id[prefix] - '1';
      return -1;
    };
    if (id[0] == 'z' && id.size() >= 2 && id[1] == 'b') {
      const int k = coordinate(2);
      if (k < 0) fail("unknown variable '" + id + "'");
      require_smooth(id);
      use_coordinate(k);
      return make_var(2 * k + 1);
    }
    if (id[0] == 'z' || id[0] == 'x' || id[0] == 'y') {
      const int k = coordinate(1);
      if (k < 0) fail("unknown variable '" + id + "'");
      use_coordinate(k);
      if (id[0] == 'z') return make_var(2 * k);
      require_smooth(id);
      NodePtr z = make_var(2 * k), zb = make_var(2 * k + 1);
      if (id[0] == 'x') return make(Node::Mul, make_const(0.5), make(Node::Add, z, zb));
      return make(Node::Mul, make_const(cplx(0.0, -0.5)), make(Node::Sub, z, zb));
    }
    fail("unknown identifier '" + id + "'");
  }

  void require_smooth(const std::string& id) {
    if (domain_ == Expression::Domain::Holomorphic)
      fail("'" + id + "' is not allowed in a holomorphic function");
  }

  const std::string& s_;
  Expression::Domain domain_;
  std::size_t pos_ = 0;
  int dimension_ = 0;
};

Polynomial polynomial_of(const NodePtr& n) {
  switch (n->kind) {
    case Node::Const: return Polynomial::constant(n->value);
    case Node::Var: return Polynomial::variable(n->var);
    case Node::Add: return polynomial_of(n->lhs) + polynomial_of(n->rhs);
    case Node::Sub: return polynomial_of(n->lhs) - polynomial_of(n->rhs);
    case Node::Mul: return polynomial_of(n->lhs) * polynomial_of(n->rhs);
    case Node::Neg: return -polynomial_of(n->lhs);
    case Node::Conj: return polynomial_of(n->lhs).conj();
    case Node::Div: {
      const Polynomial d = polynomial_of(n->rhs);
      if (!d.is_constant() || d.is_zero())
        throw Error(ErrorCode::Unsupported, "division by a non-constant is not polynomial");
      return polynomial_of(n->lhs) * Polynomial::constant(1.0 / d.terms().begin()->second);
    }
    case Node::Pow: {
      const Polynomial b = polynomial_of(n->lhs);
      if (n->exponent >= 0) return b.pow(n->exponent);
      if (!b.is_constant() || b.is_zero())
        throw Error(ErrorCode::Unsupported, "negative power of a non-constant is not polynomial");
      return Polynomial::constant(std::pow(b.terms().begin()->second, n->exponent));
    }
  }
  return {};
}

void add_locus(std::vector<PoleLocus>& out, PoleLocus locus) {
  // Normalize so that the first nonzero coefficient of a is 1.
  const cplx lead = locus.a[0] != cplx(0.0) ? locus.a[0] : locus.a[1];
  locus.a = {locus.a[0] / lead, locus.a[1] / lead};
  locus.c /= lead;
  for (auto& p : out) {
    if (std::abs(p.a[0] - locus.a[0]) + std::abs(p.a[1] - locus.a[1]) < 1e-12 &&
        std::abs(p.c - locus.c) < 1e-9 * (1.0 + std::abs(p.c))) {
      p.order += locus.order;
      return;
    }
  }
  out.push_back(locus);
}

void loci_of_denominator(const Polynomial& d, int multiplicity, std::vector<PoleLocus>& out) {
  if (d.is_zero()) throw Error(ErrorCode::ConfigParse, "division by zero");
  if (d.is_constant()) return;
  const unsigned vars = d.variables();
  if (vars & 0b1010u) throw Error(ErrorCode::Unsupported, "denominator depends on a conjugate variable");
  if (d.total_degree() == 1) {
    PoleLocus l;
    l.a = {0.0, 0.0};
    l.c = 0.0;
    for (const auto& [e, c] : d.terms()) {
      if (e[0] == 1) l.a[0] = c;
      else if (e[2] == 1) l.a[1] = c;
      else l.c = -c;
    }
    l.order = multiplicity;
    add_locus(out, l);
    return;
  }
  if (vars != 0b0001u && vars != 0b0100u)
    throw Error(ErrorCode::Unsupported, "denominator is neither affine nor univariate");
  const int var = vars == 0b0001u ? 0 : 2;
  const int deg = d.total_degree();
  std::vector<cplx> coef(static_cast<std::size_t>(deg) + 1, 0.0);
  for (const auto& [e, c] : d.terms()) coef[static_cast<std::size_t>(e[var])] = c;
  // Companion matrix of the monic polynomial.
  Eigen::MatrixXcd comp = Eigen::MatrixXcd::Zero(deg, deg);
  for (int r = 1; r < deg; ++r) comp(r, r - 1) = 1.0;
  for (int r = 0; r < deg; ++r) comp(r, deg - 1) = -coef[static_cast<std::size_t>(r)] / coef[static_cast<std::size_t>(deg)];
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(comp, false);
  std::vector<cplx> roots(solver.eigenvalues().data(), solver.eigenvalues().data() + deg);
  std::vector<bool> used(roots.size(), false);
  for (std::size_t i = 0; i < roots.size(); ++i) {
    if (used[i]) continue;
    cplx sum = roots[i];
    int count = 1;
    for (std::size_t j = i + 1; j < roots.size(); ++j)
      if (!used[j] && std::abs(roots[j] - roots[i]) < 1e-5 * (1.0 + std::abs(roots[i]))) {
        used[j] = true;
        sum += roots[j];
        ++count;
      }
    cplx root = sum / static_cast<double>(count);
    // Snap roundoff so that e.g. z^2 has its pole exactly at 0.
    if (std::abs(root.real()) < 1e-12) root.real(0.0);
    if (std::abs(root.imag()) < 1e-12) root.imag(0.0);
    PoleLocus l;
    l.a = var == 0 ? CPoint{1.0, 0.0} : CPoint{0.0, 1.0};
    l.c = root;
    l.order = count * multiplicity;
    add_locus(out, l);
  }
}

void collect_poles(const NodePtr& n, std::vector<PoleLocus>& out) {
  if (!n) return;
  collect_poles(n->lhs, out);
  collect_poles(n->rhs, out);
  if (n->kind == Node::Div) loci_of_denominator(polynomial_of(n->rhs), 1, out);
  if (n->kind == Node::Pow && n->exponent < 0) loci_of_denominator(polynomial_of(n->lhs), -n->exponent, out);
}

}  // namespace

Expression Expression::parse(const std::string& text, Domain domain) {
  Parser p(text, domain);
  Expression e;
  e.text_ = text;
  e.root_ = p.parse();
  e.dimension_ = p.dimension();

  // Flatten to a postfix program for evaluation.
  std::function<void(const NodePtr&)> emit = [&](const NodePtr& n) {
    switch (n->kind) {
      case Node::Const: e.program_.push_back({Instr::Push, n->value, 0}); return;
      case Node::Var: e.program_.push_back({Instr::Var, {}, n->var}); return;
      case Node::Neg: emit(n->lhs); e.program_.push_back({Instr::Neg, {}, 0}); return;
      case Node::Conj: emit(n->lhs); e.program_.push_back({Instr::Conj, {}, 0}); return;
      case Node::Pow: emit(n->lhs); e.program_.push_back({Instr::Pow, {}, n->exponent}); return;
      default: break;
    }
    emit(n->lhs);
    emit(n->rhs);
    Instr::Op op = Instr::Add;
    if (n->kind == Node::Sub) op = Instr::Sub;
    if (n->kind == Node::Mul) op = Instr::Mul;
    if (n->kind == Node::Div) op = Instr::Div;
    e.program_.push_back({op, {}, 0});
  };
  emit(e.root_);
  int depth = 0, max_depth = 0;
  for (const Instr& in : e.program_) {
    if (in.op == Instr::Push || in.op == Instr::Var) ++depth;
    else if (in.op != Instr::Neg && in.op != Instr::Conj && in.op != Instr::Pow) --depth;
    max_depth = std::max(max_depth, depth);
  }
  if (max_depth > 64) throw Error(ErrorCode::ConfigParse, "expression is nested too deeply");
  return e;
}

cplx Expression::operator()(const CPoint& z) const {
  cplx stack[64];
  int top = 0;
  for (const Instr& in : program_) {
    switch (in.op) {
      case Instr::Push: stack[top++] = in.value; break;
      case Instr::Var: {
        const cplx v = z[static_cast<std::size_t>(in.arg / 2)];
        stack[top++] = (in.arg % 2) ? std::conj(v) : v;
        break;
      }
      case Instr::Neg: stack[top - 1] = -stack[top - 1]; break;
      case Instr::Conj: stack[top - 1] = std::conj(stack[top - 1]); break;
      case Instr::Pow: {
        const cplx b = stack[top - 1];
        const int k = std::abs(in.arg);
        cplx r = 1.0;
        for (int i = 0; i < k; ++i) r *= b;
        stack[top - 1] = in.arg < 0 ? 1.0 / r : r;
        break;
      }
      case Instr::Add: --top; stack[top - 1] += stack[top]; break;
      case Instr::Sub: --top; stack[top - 1] -= stack[top]; break;
      case Instr::Mul: --top; stack[top - 1] *= stack[top]; break;
      case Instr::Div: --top; stack[top - 1] /= stack[top]; break;
    }
  }
  return stack[0];
}

Polynomial Expression::to_polynomial() const { return polynomial_of(root_); }

std::vector<PoleLocus> Expression::pole_loci() const {
  std::vector<PoleLocus> out;
  collect_poles(root_, out);
  return out;
}

}  // namespace bcurrent
