#include "gsconvex/expr.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>

namespace gsconvex {

ParseError::ParseError(const std::string& message, std::size_t position)
    : std::runtime_error("parse error at position " + std::to_string(position) + ": " + message),
      position_(position) {}

DomainError::DomainError(const std::string& message, std::string node)
    : std::runtime_error("domain error in '" + node + "': " + message), node_(std::move(node)) {}

std::string to_string(Op op) {
  switch (op) {
    case Op::Const: return "const";
    case Op::Var: return "var";
    case Op::Neg: return "neg";
    case Op::Exp: return "exp";
    case Op::Log: return "log";
    case Op::Abs: return "abs";
    case Op::Sqrt: return "sqrt";
    case Op::Add: return "+";
    case Op::Sub: return "-";
    case Op::Mul: return "*";
    case Op::Div: return "/";
    case Op::Pow: return "^";
    case Op::Max: return "max";
    case Op::Min: return "min";
  }
  return "?";
}

namespace {

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

enum class Tok { Number, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, Comma, End };

struct Token {
  Tok kind;
  std::size_t pos;  // 1-based
  std::string text;
  double number = 0.0;
};

class Parser {
public:
  Parser(std::string_view text, int dimension, VariableSet set)
      : text_(text), dimension_(dimension), set_(set) {
    advance();
  }

  std::vector<Node> run() {
    if (text_.find_first_not_of(" \t\r\n") == std::string_view::npos)
      throw ParseError("empty expression", 1);
    parse_sum();
    if (tok_.kind != Tok::End) throw ParseError("unexpected '" + tok_.text + "'", tok_.pos);
    return std::move(nodes_);
  }

private:
  int push(Node n) {
    nodes_.push_back(std::move(n));
    return static_cast<int>(nodes_.size()) - 1;
  }

  int push_op(Op op, std::vector<int> children) {
    Node n;
    n.op = op;
    n.children = std::move(children);
    return push(std::move(n));
  }

  void advance() {
    while (at_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[at_]))) ++at_;
    const std::size_t pos = at_ + 1;
    if (at_ >= text_.size()) {
      tok_ = {Tok::End, pos, "end of input"};
      return;
    }
    const char c = text_[at_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      std::size_t end = at_;
      while (end < text_.size() && (std::isdigit(static_cast<unsigned char>(text_[end])) || text_[end] == '.'))
        ++end;
      // exponent only when followed by a digit, so "2*e" stays unambiguous
      if (end < text_.size() && (text_[end] == 'e' || text_[end] == 'E')) {
        std::size_t k = end + 1;
        if (k < text_.size() && (text_[k] == '+' || text_[k] == '-')) ++k;
        if (k < text_.size() && std::isdigit(static_cast<unsigned char>(text_[k]))) {
          end = k;
          while (end < text_.size() && std::isdigit(static_cast<unsigned char>(text_[end]))) ++end;
        }
      }
      const std::string lexeme(text_.substr(at_, end - at_));
      double value = 0.0;
      auto [ptr, ec] = std::from_chars(lexeme.data(), lexeme.data() + lexeme.size(), value);
      if (ec != std::errc() || ptr != lexeme.data() + lexeme.size())
        throw ParseError("malformed number '" + lexeme + "'", pos);
      tok_ = {Tok::Number, pos, lexeme, value};
      at_ = end;
      return;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t end = at_;
      while (end < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[end])) || text_[end] == '_'))
        ++end;
      tok_ = {Tok::Ident, pos, std::string(text_.substr(at_, end - at_))};
      at_ = end;
      return;
    }
    Tok kind;
    switch (c) {
      case '+': kind = Tok::Plus; break;
      case '-': kind = Tok::Minus; break;
      case '*': kind = Tok::Star; break;
      case '/': kind = Tok::Slash; break;
      case '^': kind = Tok::Caret; break;
      case '(': kind = Tok::LParen; break;
      case ')': kind = Tok::RParen; break;
      case ',': kind = Tok::Comma; break;
      default: throw ParseError(std::string("unexpected character '") + c + "'", pos);
    }
    tok_ = {kind, pos, std::string(1, c)};
    ++at_;
  }

  void expect(Tok kind, const char* what) {
    if (tok_.kind != kind) throw ParseError(std::string("expected ") + what, tok_.pos);
    advance();
  }

  int parse_sum() {
    int lhs = parse_product();
    while (tok_.kind == Tok::Plus || tok_.kind == Tok::Minus) {
      const Op op = tok_.kind == Tok::Plus ? Op::Add : Op::Sub;
      advance();
      const int rhs = parse_product();
      lhs = push_op(op, {lhs, rhs});
    }
    return lhs;
  }

  int parse_product() {
    int lhs = parse_unary();
    while (tok_.kind == Tok::Star || tok_.kind == Tok::Slash) {
      const Op op = tok_.kind == Tok::Star ? Op::Mul : Op::Div;
      advance();
      const int rhs = parse_unary();
      lhs = push_op(op, {lhs, rhs});
    }
    return lhs;
  }

  int parse_unary() {
    if (tok_.kind == Tok::Minus) {
      advance();
      const int operand = parse_unary();
      return push_op(Op::Neg, {operand});
    }
    return parse_power();
  }

  int parse_power() {
    const int base = parse_primary();
    if (tok_.kind == Tok::Caret) {
      advance();
      const int exponent = parse_unary();
      return push_op(Op::Pow, {base, exponent});
    }
    return base;
  }

  int parse_primary() {
    const Token t = tok_;
    switch (t.kind) {
      case Tok::Number: {
        advance();
        Node n;
        n.value = t.number;
        return push(std::move(n));
      }
      case Tok::LParen: {
        advance();
        const int inner = parse_sum();
        expect(Tok::RParen, "')'");
        return inner;
      }
      case Tok::Ident: return parse_identifier(t);
      case Tok::End: throw ParseError("expected operand", t.pos);
      default: throw ParseError("unexpected '" + t.text + "'", t.pos);
    }
  }

  int parse_identifier(const Token& t) {
    const std::string& name = t.text;
    static constexpr std::array<std::pair<std::string_view, Op>, 6> kFunctions{{
        {"exp", Op::Exp}, {"log", Op::Log}, {"abs", Op::Abs},
        {"sqrt", Op::Sqrt}, {"max", Op::Max}, {"min", Op::Min}}};
    for (const auto& [fname, op] : kFunctions) {
      if (name != fname) continue;
      advance();
      expect(Tok::LParen, "'(' after function name");
      std::vector<int> args{parse_sum()};
      while (tok_.kind == Tok::Comma) {
        advance();
        args.push_back(parse_sum());
      }
      const bool nary = op == Op::Max || op == Op::Min;
      if (!nary && args.size() != 1) throw ParseError(name + " takes exactly one argument", t.pos);
      expect(Tok::RParen, "')'");
      return push_op(op, std::move(args));
    }
    if (name == "e") {
      advance();
      Node n;
      n.value = std::numbers::e;
      return push(std::move(n));
    }
    if (name == "s") {
      if (set_ != VariableSet::ModMap)
        throw ParseError("variable 's' is only available in modulating maps", t.pos);
      advance();
      Node n;
      n.op = Op::Var;
      n.kind = VarKind::S;
      return push(std::move(n));
    }
    if (name.size() >= 2 && (name[0] == 'x' || name[0] == 'u' || name[0] == 'v') &&
        name.find_first_not_of("0123456789", 1) == std::string::npos) {
      const char prefix = name[0];
      if (prefix == 'x' && set_ != VariableSet::Function)
        throw ParseError("variable " + name + " not allowed in a modulating map (use u/v)", t.pos);
      if (prefix != 'x' && set_ != VariableSet::ModMap)
        throw ParseError("variable " + name + " not allowed in a function body (use x)", t.pos);
      int index = 0;
      auto [ptr, ec] = std::from_chars(name.data() + 1, name.data() + name.size(), index);
      if (ec != std::errc() || index < 1 || index > dimension_)
        throw ParseError("variable index out of range in " + name + " (dimension " +
                             std::to_string(dimension_) + ")",
                         t.pos);
      advance();
      Node n;
      n.op = Op::Var;
      n.kind = prefix == 'x' ? VarKind::X : prefix == 'u' ? VarKind::U : VarKind::V;
      n.index = index - 1;
      return push(std::move(n));
    }
    throw ParseError("unknown identifier '" + name + "'", t.pos);
  }

  std::string_view text_;
  std::size_t at_ = 0;
  int dimension_;
  VariableSet set_;
  Token tok_{Tok::End, 0, ""};
  std::vector<Node> nodes_;
};

std::string print_node(const std::vector<Node>& nodes, int id) {
  const Node& n = nodes[static_cast<std::size_t>(id)];
  auto child = [&](std::size_t k) { return print_node(nodes, n.children[k]); };
  switch (n.op) {
    case Op::Const:
      return n.value < 0 || std::signbit(n.value) ? "(-" + format_number(-n.value) + ")"
                                                  : format_number(n.value);
    case Op::Var:
      switch (n.kind) {
        case VarKind::X: return "x" + std::to_string(n.index + 1);
        case VarKind::U: return "u" + std::to_string(n.index + 1);
        case VarKind::V: return "v" + std::to_string(n.index + 1);
        case VarKind::S: return "s";
      }
      return "?";
    case Op::Neg: return "(-" + child(0) + ")";
    case Op::Exp:
    case Op::Log:
    case Op::Abs:
    case Op::Sqrt: return to_string(n.op) + "(" + child(0) + ")";
    case Op::Add:
    case Op::Sub:
    case Op::Mul:
    case Op::Div:
    case Op::Pow: return "(" + child(0) + " " + to_string(n.op) + " " + child(1) + ")";
    case Op::Max:
    case Op::Min: {
      std::string out = to_string(n.op) + "(";
      for (std::size_t k = 0; k < n.children.size(); ++k) out += (k ? ", " : "") + child(k);
      return out + ")";
    }
  }
  return "?";
}

[[noreturn]] void domain_fail(const std::vector<Node>& nodes, int id, const std::string& why) {
  std::string where = print_node(nodes, id);
  if (where.size() > 80) where = where.substr(0, 77) + "...";
  throw DomainError(why, std::move(where));
}

double checked(const std::vector<Node>& nodes, int id, double v) {
  if (!std::isfinite(v)) domain_fail(nodes, id, "non-finite result");
  return v;
}

bool is_integer(double p) { return std::nearbyint(p) == p; }

template <typename T, std::size_t N>
class Scratch {
public:
  explicit Scratch(std::size_t n) {
    if (n > N) heap_.resize(n);
  }
  T& operator[](std::size_t i) { return heap_.empty() ? stack_[i] : heap_[i]; }

private:
  std::array<T, N> stack_{};
  std::vector<T> heap_;
};

}  // namespace

Expr Expr::parse(std::string_view text, int dimension, VariableSet set) {
  if (dimension < 1) throw BindingError("dimension must be >= 1");
  auto nodes = std::make_shared<std::vector<Node>>(Parser(text, dimension, set).run());
  const int root = static_cast<int>(nodes->size()) - 1;
  return Expr(std::move(nodes), root, dimension, set);
}

Expr Expr::constant(double c, int dimension, VariableSet set) {
  if (dimension < 1) throw BindingError("dimension must be >= 1");
  Node n;
  n.value = c;
  auto nodes = std::make_shared<std::vector<Node>>(std::vector<Node>{n});
  return Expr(std::move(nodes), 0, dimension, set);
}

namespace {

// Appends a copy of `e`'s nodes to `out`, returning the new root index.
int splice(std::vector<Node>& out, const Expr& e) {
  const int offset = static_cast<int>(out.size());
  for (Node n : e.nodes()) {
    for (int& c : n.children) c += offset;
    out.push_back(std::move(n));
  }
  return offset + static_cast<int>(e.nodes().size()) - 1;
}

void require_compatible(const Expr& a, const Expr& b) {
  if (a.empty() || b.empty()) throw BindingError("empty expression");
  if (a.dimension() != b.dimension() || a.variable_set() != b.variable_set())
    throw BindingError("cannot combine expressions of different dimension or variable set");
}

}  // namespace

Expr Expr::add(const Expr& lhs, const Expr& rhs) {
  require_compatible(lhs, rhs);
  auto nodes = std::make_shared<std::vector<Node>>();
  const int l = splice(*nodes, lhs);
  const int r = splice(*nodes, rhs);
  Node n;
  n.op = Op::Add;
  n.children = {l, r};
  nodes->push_back(std::move(n));
  const int root = static_cast<int>(nodes->size()) - 1;
  return Expr(std::move(nodes), root, lhs.dimension(), lhs.variable_set());
}

Expr Expr::scale(double c, const Expr& e) {
  if (e.empty()) throw BindingError("empty expression");
  auto nodes = std::make_shared<std::vector<Node>>();
  Node k;
  k.value = c;
  nodes->push_back(k);
  const int body = splice(*nodes, e);
  Node n;
  n.op = Op::Mul;
  n.children = {0, body};
  nodes->push_back(std::move(n));
  const int root = static_cast<int>(nodes->size()) - 1;
  return Expr(std::move(nodes), root, e.dimension(), e.variable_set());
}

Expr Expr::maximum(std::span<const Expr> terms) {
  if (terms.empty()) throw BindingError("max of an empty family");
  if (terms.size() == 1) return terms.front();
  auto nodes = std::make_shared<std::vector<Node>>();
  Node n;
  n.op = Op::Max;
  for (const Expr& t : terms) {
    require_compatible(terms.front(), t);
    n.children.push_back(splice(*nodes, t));
  }
  nodes->push_back(std::move(n));
  const int root = static_cast<int>(nodes->size()) - 1;
  return Expr(std::move(nodes), root, terms.front().dimension(), terms.front().variable_set());
}

void Expr::check_binding(const Binding& b) const {
  if (empty()) throw BindingError("evaluating an empty expression");
  const auto n = static_cast<std::size_t>(dimension_);
  if (b.x.size() != n) throw BindingError("binding dimension mismatch");
  if (set_ == VariableSet::ModMap) {
    if (b.v.size() != n) throw BindingError("modulating map needs both u and v of the same dimension");
    if (!b.s) throw BindingError("modulating map needs a value for s");
  } else if (b.s || !b.v.empty()) {
    throw BindingError("function bodies bind x only");
  }
}

double Expr::eval(const Binding& b) const {
  check_binding(b);
  const auto& nodes = *nodes_;
  Scratch<double, 64> val(nodes.size());
  for (std::size_t i = 0; i <= static_cast<std::size_t>(root_); ++i) {
    const Node& n = nodes[i];
    const int id = static_cast<int>(i);
    auto c = [&](std::size_t k) { return val[static_cast<std::size_t>(n.children[k])]; };
    double r = 0.0;
    switch (n.op) {
      case Op::Const: r = n.value; break;
      case Op::Var:
        switch (n.kind) {
          case VarKind::X:
          case VarKind::U: r = b.x[static_cast<std::size_t>(n.index)]; break;
          case VarKind::V: r = b.v[static_cast<std::size_t>(n.index)]; break;
          case VarKind::S: r = *b.s; break;
        }
        break;
      case Op::Neg: r = -c(0); break;
      case Op::Exp: r = std::exp(c(0)); break;
      case Op::Log:
        if (!(c(0) > 0.0)) domain_fail(nodes, id, "log of non-positive value");
        r = std::log(c(0));
        break;
      case Op::Abs: r = std::fabs(c(0)); break;
      case Op::Sqrt:
        if (c(0) < 0.0) domain_fail(nodes, id, "sqrt of negative value");
        r = std::sqrt(c(0));
        break;
      case Op::Add: r = c(0) + c(1); break;
      case Op::Sub: r = c(0) - c(1); break;
      case Op::Mul: r = c(0) * c(1); break;
      case Op::Div:
        if (c(1) == 0.0) domain_fail(nodes, id, "division by zero");
        r = c(0) / c(1);
        break;
      case Op::Pow:
        if (c(0) == 0.0 && c(1) < 0.0) domain_fail(nodes, id, "zero to a negative power");
        if (c(0) < 0.0 && !is_integer(c(1)))
          domain_fail(nodes, id, "negative base with non-integer exponent");
        r = std::pow(c(0), c(1));
        break;
      case Op::Max:
        r = c(0);
        for (std::size_t k = 1; k < n.children.size(); ++k) r = c(k) > r ? c(k) : r;
        break;
      case Op::Min:
        r = c(0);
        for (std::size_t k = 1; k < n.children.size(); ++k) r = c(k) < r ? c(k) : r;
        break;
    }
    val[i] = checked(nodes, id, r);
  }
  return val[static_cast<std::size_t>(root_)];
}

DualValue Expr::eval_dual(std::span<const double> x, std::span<const double> direction) const {
  if (set_ != VariableSet::Function) throw BindingError("eval_dual applies to function bodies only");
  check_binding(Binding::function(x));
  if (direction.size() != x.size()) throw BindingError("direction dimension mismatch");
  const auto& nodes = *nodes_;
  Scratch<DualValue, 64> val(nodes.size());
  for (std::size_t i = 0; i <= static_cast<std::size_t>(root_); ++i) {
    const Node& n = nodes[i];
    const int id = static_cast<int>(i);
    auto c = [&](std::size_t k) { return val[static_cast<std::size_t>(n.children[k])]; };
    DualValue r;
    for (int ch : n.children) r.nonsmooth = r.nonsmooth || val[static_cast<std::size_t>(ch)].nonsmooth;
    switch (n.op) {
      case Op::Const: r.value = n.value; break;
      case Op::Var:
        r.value = x[static_cast<std::size_t>(n.index)];
        r.derivative = direction[static_cast<std::size_t>(n.index)];
        break;
      case Op::Neg:
        r.value = -c(0).value;
        r.derivative = -c(0).derivative;
        break;
      case Op::Exp:
        r.value = std::exp(c(0).value);
        r.derivative = r.value * c(0).derivative;
        break;
      case Op::Log:
        if (!(c(0).value > 0.0)) domain_fail(nodes, id, "log of non-positive value");
        r.value = std::log(c(0).value);
        r.derivative = c(0).derivative / c(0).value;
        break;
      case Op::Abs: {
        const DualValue a = c(0);
        r.value = std::fabs(a.value);
        r.derivative = a.value < 0.0 ? -a.derivative : a.derivative;
        if (a.value == 0.0) r.nonsmooth = true;
        break;
      }
      case Op::Sqrt: {
        const DualValue a = c(0);
        if (a.value < 0.0) domain_fail(nodes, id, "sqrt of negative value");
        r.value = std::sqrt(a.value);
        if (a.value == 0.0) {
          if (a.derivative != 0.0) domain_fail(nodes, id, "sqrt is not differentiable at 0");
        } else {
          r.derivative = a.derivative / (2.0 * r.value);
        }
        break;
      }
      case Op::Add:
        r.value = c(0).value + c(1).value;
        r.derivative = c(0).derivative + c(1).derivative;
        break;
      case Op::Sub:
        r.value = c(0).value - c(1).value;
        r.derivative = c(0).derivative - c(1).derivative;
        break;
      case Op::Mul:
        r.value = c(0).value * c(1).value;
        r.derivative = c(0).derivative * c(1).value + c(0).value * c(1).derivative;
        break;
      case Op::Div: {
        const DualValue a = c(0), b = c(1);
        if (b.value == 0.0) domain_fail(nodes, id, "division by zero");
        r.value = a.value / b.value;
        r.derivative = (a.derivative * b.value - a.value * b.derivative) / (b.value * b.value);
        break;
      }
      case Op::Pow: {
        const DualValue a = c(0), p = c(1);
        if (a.value == 0.0 && p.value < 0.0) domain_fail(nodes, id, "zero to a negative power");
        if (a.value < 0.0 && !is_integer(p.value))
          domain_fail(nodes, id, "negative base with non-integer exponent");
        r.value = std::pow(a.value, p.value);
        if (a.derivative != 0.0) {
          if (p.value == 0.0) {
            r.derivative = 0.0;
          } else {
            const double slope = p.value * std::pow(a.value, p.value - 1.0);
            if (!std::isfinite(slope)) domain_fail(nodes, id, "power is not differentiable here");
            r.derivative = slope * a.derivative;
          }
        }
        if (p.derivative != 0.0) {
          if (!(a.value > 0.0)) domain_fail(nodes, id, "variable exponent needs a positive base");
          r.derivative += r.value * std::log(a.value) * p.derivative;
        }
        break;
      }
      case Op::Max:
      case Op::Min: {
        std::size_t best = 0;
        for (std::size_t k = 1; k < n.children.size(); ++k) {
          const bool better = n.op == Op::Max ? c(k).value > c(best).value : c(k).value < c(best).value;
          if (better) best = k;
        }
        for (std::size_t k = 0; k < n.children.size(); ++k)
          if (k != best && c(k).value == c(best).value) r.nonsmooth = true;
        r.value = c(best).value;
        r.derivative = c(best).derivative;
        break;
      }
    }
    if (!std::isfinite(r.value) || !std::isfinite(r.derivative))
      domain_fail(nodes, id, "non-finite result");
    val[i] = r;
  }
  return val[static_cast<std::size_t>(root_)];
}

std::string Expr::to_string() const {
  if (empty()) return "";
  return print_node(*nodes_, root_);
}

}  // namespace gsconvex
