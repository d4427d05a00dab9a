#pragma once

// Expression language used to define objective functions Q(x) and
// modulating maps G(u, v, s).
//
// Grammar (lowest to highest precedence):
//
//   sum     := product (('+' | '-') product)*
//   product := unary (('*' | '/') unary)*
//   unary   := '-' unary | power
//   power   := primary ('^' unary)?          right associative
//   primary := number | 'e' | variable | func '(' args ')' | '(' sum ')'
//   func    := exp | log | abs | sqrt | max | min
//
// Variables are x1..xn in function bodies and u1..un, v1..vn, s in
// modulating maps. Indices are 1-based.

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace gsconvex {

using Point = std::vector<double>;

enum class VariableSet { Function, ModMap };

/// Thrown on malformed input. `position()` is the 1-based character column.
class ParseError : public std::runtime_error {
public:
  ParseError(const std::string& message, std::size_t position);
  std::size_t position() const noexcept { return position_; }

private:
  std::size_t position_;
};

/// Log of a non-positive number, division by zero, 0^negative, etc.
class DomainError : public std::runtime_error {
public:
  DomainError(const std::string& message, std::string node);
  const std::string& node() const noexcept { return node_; }

private:
  std::string node_;
};

/// Wrong binding shape, wrong variable set, etc.
class BindingError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

enum class Op : std::uint8_t {
  Const, Var, Neg, Exp, Log, Abs, Sqrt, Add, Sub, Mul, Div, Pow, Max, Min
};

enum class VarKind : std::uint8_t { X, U, V, S };

struct Node {
  Op op = Op::Const;
  VarKind kind = VarKind::X;
  int index = 0;  // 0-based coordinate for Var
  double value = 0.0;
  std::vector<int> children;
};

/// Values bound to the free variables of an expression.
struct Binding {
  std::span<const double> x;  // function body: x; modmap: u
  std::span<const double> v;  // modmap only
  std::optional<double> s;    // modmap only

  static Binding function(std::span<const double> x) { return {x, {}, std::nullopt}; }
  static Binding modmap(std::span<const double> u, std::span<const double> v, double s) {
    return {u, v, s};
  }
};

struct DualValue {
  double value = 0.0;
  double derivative = 0.0;
  bool nonsmooth = false;
};

/// Immutable expression tree. Copies share the node storage.
class Expr {
public:
  Expr() = default;

  static Expr parse(std::string_view text, int dimension, VariableSet set);
  static Expr constant(double c, int dimension, VariableSet set);

  // Composite builders used by the closure algebra.
  static Expr add(const Expr& lhs, const Expr& rhs);
  static Expr scale(double c, const Expr& e);
  static Expr maximum(std::span<const Expr> terms);

  int dimension() const noexcept { return dimension_; }
  VariableSet variable_set() const noexcept { return set_; }
  bool empty() const noexcept { return !nodes_ || nodes_->empty(); }
  const Node& root() const { return (*nodes_)[static_cast<std::size_t>(root_)]; }
  const std::vector<Node>& nodes() const { return *nodes_; }

  double eval(const Binding& binding) const;
  double eval(std::span<const double> x) const { return eval(Binding::function(x)); }
  double eval(std::span<const double> u, std::span<const double> v, double s) const {
    return eval(Binding::modmap(u, v, s));
  }

  /// Value and directional derivative along `direction` (function bodies only).
  /// At kinks of abs/max/min the right branch / first argument is used and
  /// `nonsmooth` is set.
  DualValue eval_dual(std::span<const double> x, std::span<const double> direction) const;

  /// Fully parenthesized source text; numbers printed with 17 significant digits.
  std::string to_string() const;

private:
  Expr(std::shared_ptr<const std::vector<Node>> nodes, int root, int dimension, VariableSet set)
      : nodes_(std::move(nodes)), root_(root), dimension_(dimension), set_(set) {}

  void check_binding(const Binding& b) const;

  std::shared_ptr<const std::vector<Node>> nodes_;
  int root_ = -1;
  int dimension_ = 0;
  VariableSet set_ = VariableSet::Function;
};

std::string to_string(Op op);

}  // namespace gsconvex
