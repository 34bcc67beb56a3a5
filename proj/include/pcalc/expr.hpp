#pragma once

// Scalar expressions of t (and x, h, alpha, beta, user parameters):
// parsing, printing, evaluation and symbolic differentiation.

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace pcalc {

enum class BinaryOp { add, sub, mul, div, pow };
enum class Func { sin, cos, tan, exp, ln, sqrt, abs, gamma };

struct ExprNode;

/// Immutable expression tree. Copies share structure.
class Expr {
 public:
  Expr();  // the literal 0

  static Expr number(double value);
  static Expr variable(std::string name);

  const ExprNode& node() const { return *node_; }

  bool is_number() const;
  bool is_number(double value) const;

  friend bool operator==(const Expr& a, const Expr& b);

 private:
  explicit Expr(std::shared_ptr<const ExprNode> node) : node_(std::move(node)) {}
  friend Expr make_node(ExprNode node);

  std::shared_ptr<const ExprNode> node_;
};

namespace node {
struct Number {
  double value;
};
struct Variable {
  std::string name;
};
struct Negate {
  Expr operand;
};
struct Binary {
  BinaryOp op;
  Expr lhs;
  Expr rhs;
};
struct Call {
  Func fn;
  Expr arg;
};
}  // namespace node

struct ExprNode {
  std::variant<node::Number, node::Variable, node::Negate, node::Binary, node::Call> v;
};

// Builders with constant folding and the trivial identities (x+0, 1*x, x^1, ...).
Expr operator+(const Expr& a, const Expr& b);
Expr operator-(const Expr& a, const Expr& b);
Expr operator*(const Expr& a, const Expr& b);
Expr operator/(const Expr& a, const Expr& b);
Expr operator-(const Expr& a);
Expr pow(const Expr& base, const Expr& exponent);
Expr call(Func fn, const Expr& arg);

/// Names that need no declaration: the function variables and the two
/// family parameters.
inline constexpr std::string_view kBuiltinVariables[] = {"t", "x", "h", "alpha", "beta"};

/// Parse `source` under the grammar
///
///   expr   := term (("+"|"-") term)*
///   term   := factor (("*"|"/") factor)*
///   factor := "-" factor | atom ("^" factor)?
///   atom   := NUMBER | IDENT | IDENT "(" expr ")" | "(" expr ")"
///
/// `^` is right-associative and binds tighter than unary minus, so "-t^2"
/// is -(t^2). `pi` and `e` are constants. Identifiers other than the builtin
/// variables must be listed in `parameters`. Throws ParseError.
Expr parse(std::string_view source, std::span<const std::string> parameters = {});

/// Minimal-parenthesis printer; parse(to_string(parse(s))) == parse(s).
std::string to_string(const Expr& e);

std::optional<Func> function_by_name(std::string_view name);
std::string_view function_name(Func fn);

/// Variable bindings. Looking up an unbound name throws InvalidArgument.
class Env {
 public:
  Env() = default;
  Env(std::initializer_list<std::pair<const std::string, double>> init) : values_(init) {}

  Env& set(std::string name, double value) {
    values_[std::move(name)] = value;
    return *this;
  }
  double at(std::string_view name) const;
  bool contains(std::string_view name) const { return values_.find(name) != values_.end(); }

 private:
  std::map<std::string, double, std::less<>> values_;
};

/// IEEE double evaluation. Throws InvalidArgument for unbound variables and
/// DomainError for ln/sqrt/division/pow/gamma outside their domains.
double evaluate(const Expr& e, const Env& env);

/// Symbolic derivative. Throws NotDifferentiable when an abs (or gamma) node
/// depends on `var`.
Expr differentiate(const Expr& e, std::string_view var);

/// Replace every occurrence of variable `var` by `replacement`.
Expr substitute(const Expr& e, std::string_view var, const Expr& replacement);

/// Free variables, excluding the constants pi and e.
std::set<std::string> variables(const Expr& e);
bool depends_on(const Expr& e, std::string_view var);

/// The independent variable of a one-variable function expression: "t"
/// unless the expression mentions x and not t.
std::string function_variable(const Expr& e);

/// Flattened stack program for fast repeated evaluation. Variables are
/// resolved to slots at construction.
class CompiledExpr {
 public:
  CompiledExpr(const Expr& e, std::vector<std::string> slots);

  double operator()(std::span<const double> values) const;
  const std::vector<std::string>& slots() const { return slots_; }

 private:
  enum class OpCode { constant, slot, negate, binary, call };
  struct Instr {
    OpCode code;
    double value = 0.0;
    int index = 0;
    BinaryOp op = BinaryOp::add;
    Func fn = Func::sin;
  };
  void emit(const Expr& e, int depth);

  std::vector<std::string> slots_;
  std::vector<Instr> program_;
  int max_depth_ = 0;
};

using RealFn = std::function<double(double)>;

/// Bind every variable except `var` from `params` and return the resulting
/// one-variable function. Unbound variables throw at bind time.
RealFn as_function(const Expr& e, std::string_view var, const Env& params = {});

/// Same, for a two-variable expression (first, second).
std::function<double(double, double)> as_function2(const Expr& e, std::string_view first,
                                                   std::string_view second,
                                                   const Env& params = {});

}  // namespace pcalc
