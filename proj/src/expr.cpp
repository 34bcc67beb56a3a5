#include "pcalc/expr.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <numbers>

#include "pcalc/error.hpp"

namespace pcalc {

Expr make_node(ExprNode node) { return Expr(std::make_shared<const ExprNode>(std::move(node))); }

namespace {

constexpr std::array<std::pair<std::string_view, Func>, 8> kFunctions{{
    {"sin", Func::sin},
    {"cos", Func::cos},
    {"tan", Func::tan},
    {"exp", Func::exp},
    {"ln", Func::ln},
    {"sqrt", Func::sqrt},
    {"abs", Func::abs},
    {"gamma", Func::gamma},
}};

bool is_constant_name(std::string_view name) { return name == "pi" || name == "e"; }

double constant_value(std::string_view name) {
  return name == "pi" ? std::numbers::pi : std::numbers::e;
}

double apply(Func fn, double x) {
  switch (fn) {
    case Func::sin:
      return std::sin(x);
    case Func::cos:
      return std::cos(x);
    case Func::tan:
      return std::tan(x);
    case Func::exp:
      return std::exp(x);
    case Func::ln:
      if (!(x > 0.0)) throw DomainError("ln of nonpositive argument " + std::to_string(x));
      return std::log(x);
    case Func::sqrt:
      if (!(x >= 0.0)) throw DomainError("sqrt of negative argument " + std::to_string(x));
      return std::sqrt(x);
    case Func::abs:
      return std::abs(x);
    case Func::gamma: {
      if (x <= 0.0 && x == std::floor(x))
        throw DomainError("gamma pole at " + std::to_string(x));
      return std::tgamma(x);
    }
  }
  return 0.0;
}

double apply(BinaryOp op, double a, double b) {
  switch (op) {
    case BinaryOp::add:
      return a + b;
    case BinaryOp::sub:
      return a - b;
    case BinaryOp::mul:
      return a * b;
    case BinaryOp::div:
      if (b == 0.0) throw DomainError("division by zero");
      return a / b;
    case BinaryOp::pow: {
      const double r = std::pow(a, b);
      if (std::isnan(r) && !std::isnan(a) && !std::isnan(b))
        throw DomainError("pow(" + std::to_string(a) + ", " + std::to_string(b) +
                          ") is not real");
      if (a == 0.0 && b < 0.0) throw DomainError("zero to a negative power");
      return r;
    }
  }
  return 0.0;
}

const node::Number* as_number(const Expr& e) { return std::get_if<node::Number>(&e.node().v); }

Expr binary(BinaryOp op, const Expr& a, const Expr& b) {
  return make_node(ExprNode{node::Binary{op, a, b}});
}

// ---------------------------------------------------------------- parser

class Parser {
 public:
  Parser(std::string_view src, std::span<const std::string> params) : src_(src), params_(params) {}

  Expr run() {
    skip_ws();
    if (pos_ == src_.size()) throw ParseError("empty expression", pos_);
    Expr e = parse_expr();
    skip_ws();
    if (pos_ != src_.size()) throw ParseError("unexpected character '" + std::string(1, src_[pos_]) + "'", pos_);
    return e;
  }

 private:
  void skip_ws() {
    while (pos_ < src_.size() && (src_[pos_] == ' ' || src_[pos_] == '\t' || src_[pos_] == '\n' ||
                                  src_[pos_] == '\r'))
      ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) {
      if (pos_ >= src_.size()) throw ParseError(std::string("expected '") + c + "' before end of input", pos_);
      throw ParseError(std::string("expected '") + c + "'", pos_);
    }
  }

  Expr parse_expr() {
    Expr lhs = parse_term();
    for (;;) {
      if (accept('+'))
        lhs = binary(BinaryOp::add, lhs, parse_term());
      else if (accept('-'))
        lhs = binary(BinaryOp::sub, lhs, parse_term());
      else
        return lhs;
    }
  }

  Expr parse_term() {
    Expr lhs = parse_factor();
    for (;;) {
      if (accept('*'))
        lhs = binary(BinaryOp::mul, lhs, parse_factor());
      else if (accept('/'))
        lhs = binary(BinaryOp::div, lhs, parse_factor());
      else
        return lhs;
    }
  }

  Expr parse_factor() {
    if (accept('-')) return make_node(ExprNode{node::Negate{parse_factor()}});
    Expr base = parse_atom();
    if (accept('^')) return binary(BinaryOp::pow, base, parse_factor());
    return base;
  }

  static bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
  static bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }
  static bool digit(char c) { return c >= '0' && c <= '9'; }

  Expr parse_atom() {
    skip_ws();
    if (pos_ >= src_.size()) throw ParseError("unexpected end of input", pos_);
    const char c = src_[pos_];
    if (digit(c) || (c == '.' && pos_ + 1 < src_.size() && digit(src_[pos_ + 1]))) return parse_number();
    if (ident_start(c)) return parse_identifier();
    if (accept('(')) {
      Expr inner = parse_expr();
      expect(')');
      return inner;
    }
    throw ParseError("unexpected character '" + std::string(1, c) + "'", pos_);
  }

  Expr parse_number() {
    const std::size_t start = pos_;
    while (pos_ < src_.size() && digit(src_[pos_])) ++pos_;
    if (pos_ < src_.size() && src_[pos_] == '.') {
      ++pos_;
      while (pos_ < src_.size() && digit(src_[pos_])) ++pos_;
    }
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      std::size_t p = pos_ + 1;
      if (p < src_.size() && (src_[p] == '+' || src_[p] == '-')) ++p;
      if (p < src_.size() && digit(src_[p])) {
        while (p < src_.size() && digit(src_[p])) ++p;
        pos_ = p;
      }
    }
    double value = 0.0;
    const auto res = std::from_chars(src_.data() + start, src_.data() + pos_, value);
    if (res.ec != std::errc() || res.ptr != src_.data() + pos_)
      throw ParseError("malformed number", start);
    return Expr::number(value);
  }

  Expr parse_identifier() {
    const std::size_t start = pos_;
    while (pos_ < src_.size() && ident_char(src_[pos_])) ++pos_;
    const std::string name(src_.substr(start, pos_ - start));
    skip_ws();
    if (pos_ < src_.size() && src_[pos_] == '(') {
      const auto fn = function_by_name(name);
      if (!fn) throw ParseError("unknown function '" + name + "'", start);
      ++pos_;
      std::vector<Expr> args;
      skip_ws();
      if (pos_ < src_.size() && src_[pos_] == ')') {
        ++pos_;
      } else {
        args.push_back(parse_expr());
        while (accept(',')) args.push_back(parse_expr());
        expect(')');
      }
      if (args.size() != 1)
        throw ParseError("function '" + name + "' takes 1 argument, got " + std::to_string(args.size()),
                         start);
      return call(*fn, args.front());
    }
    if (!known_variable(name)) {
      if (function_by_name(name)) throw ParseError("function '" + name + "' used without arguments", start);
      throw ParseError("unknown variable '" + name + "'", start);
    }
    return Expr::variable(name);
  }

  bool known_variable(std::string_view name) const {
    if (is_constant_name(name)) return true;
    if (std::find(std::begin(kBuiltinVariables), std::end(kBuiltinVariables), name) !=
        std::end(kBuiltinVariables))
      return true;
    return std::find(params_.begin(), params_.end(), name) != params_.end();
  }

  std::string_view src_;
  std::span<const std::string> params_;
  std::size_t pos_ = 0;
};

// ---------------------------------------------------------------- printer

int precedence(const Expr& e) {
  return std::visit(
      [](const auto& n) -> int {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, node::Negate>) {
          return 3;
        } else if constexpr (std::is_same_v<T, node::Binary>) {
          switch (n.op) {
            case BinaryOp::add:
            case BinaryOp::sub:
              return 1;
            case BinaryOp::mul:
            case BinaryOp::div:
              return 2;
            case BinaryOp::pow:
              return 4;
          }
          return 0;
        } else {
          return 5;
        }
      },
      e.node().v);
}

std::string format_number(double v) {
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  std::string s(buf.data(), res.ptr);
  if (v < 0.0) return "(" + s + ")";
  return s;
}

void print(const Expr& e, std::string& out);

void print_child(const Expr& e, int min_prec, std::string& out) {
  if (precedence(e) < min_prec) {
    out += '(';
    print(e, out);
    out += ')';
  } else {
    print(e, out);
  }
}

void print(const Expr& e, std::string& out) {
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, node::Number>) {
          out += format_number(n.value);
        } else if constexpr (std::is_same_v<T, node::Variable>) {
          out += n.name;
        } else if constexpr (std::is_same_v<T, node::Negate>) {
          out += '-';
          print_child(n.operand, 3, out);
        } else if constexpr (std::is_same_v<T, node::Call>) {
          out += function_name(n.fn);
          out += '(';
          print(n.arg, out);
          out += ')';
        } else {
          switch (n.op) {
            case BinaryOp::add:
            case BinaryOp::sub:
              print_child(n.lhs, 1, out);
              out += n.op == BinaryOp::add ? "+" : "-";
              print_child(n.rhs, 2, out);
              break;
            case BinaryOp::mul:
            case BinaryOp::div:
              print_child(n.lhs, 2, out);
              out += n.op == BinaryOp::mul ? "*" : "/";
              print_child(n.rhs, 3, out);
              break;
            case BinaryOp::pow:
              print_child(n.lhs, 5, out);
              out += '^';
              print_child(n.rhs, 3, out);
              break;
          }
        }
      },
      e.node().v);
}

void collect_variables(const Expr& e, std::set<std::string>& out) {
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, node::Variable>) {
          if (!is_constant_name(n.name)) out.insert(n.name);
        } else if constexpr (std::is_same_v<T, node::Negate>) {
          collect_variables(n.operand, out);
        } else if constexpr (std::is_same_v<T, node::Binary>) {
          collect_variables(n.lhs, out);
          collect_variables(n.rhs, out);
        } else if constexpr (std::is_same_v<T, node::Call>) {
          collect_variables(n.arg, out);
        }
      },
      e.node().v);
}

}  // namespace

// ---------------------------------------------------------------- Expr

Expr::Expr() : Expr(number(0.0)) {}

Expr Expr::number(double value) { return make_node(ExprNode{node::Number{value}}); }

Expr Expr::variable(std::string name) { return make_node(ExprNode{node::Variable{std::move(name)}}); }

bool Expr::is_number() const { return as_number(*this) != nullptr; }

bool Expr::is_number(double value) const {
  const auto* n = as_number(*this);
  return n != nullptr && n->value == value;
}

bool operator==(const Expr& a, const Expr& b) {
  if (a.node_ == b.node_) return true;
  const auto& va = a.node().v;
  const auto& vb = b.node().v;
  if (va.index() != vb.index()) return false;
  return std::visit(
      [&](const auto& x) -> bool {
        using T = std::decay_t<decltype(x)>;
        const auto& y = std::get<T>(vb);
        if constexpr (std::is_same_v<T, node::Number>) {
          return x.value == y.value;
        } else if constexpr (std::is_same_v<T, node::Variable>) {
          return x.name == y.name;
        } else if constexpr (std::is_same_v<T, node::Negate>) {
          return x.operand == y.operand;
        } else if constexpr (std::is_same_v<T, node::Binary>) {
          return x.op == y.op && x.lhs == y.lhs && x.rhs == y.rhs;
        } else {
          return x.fn == y.fn && x.arg == y.arg;
        }
      },
      va);
}

Expr operator+(const Expr& a, const Expr& b) {
  const auto* na = as_number(a);
  const auto* nb = as_number(b);
  if (na && nb) return Expr::number(na->value + nb->value);
  if (na && na->value == 0.0) return b;
  if (nb && nb->value == 0.0) return a;
  return binary(BinaryOp::add, a, b);
}

Expr operator-(const Expr& a, const Expr& b) {
  const auto* na = as_number(a);
  const auto* nb = as_number(b);
  if (na && nb) return Expr::number(na->value - nb->value);
  if (nb && nb->value == 0.0) return a;
  if (na && na->value == 0.0) return -b;
  return binary(BinaryOp::sub, a, b);
}

Expr operator*(const Expr& a, const Expr& b) {
  const auto* na = as_number(a);
  const auto* nb = as_number(b);
  if (na && nb) return Expr::number(na->value * nb->value);
  if ((na && na->value == 0.0) || (nb && nb->value == 0.0)) return Expr::number(0.0);
  if (na && na->value == 1.0) return b;
  if (nb && nb->value == 1.0) return a;
  return binary(BinaryOp::mul, a, b);
}

Expr operator/(const Expr& a, const Expr& b) {
  const auto* na = as_number(a);
  const auto* nb = as_number(b);
  if (na && nb && nb->value != 0.0) return Expr::number(na->value / nb->value);
  if (na && na->value == 0.0) return Expr::number(0.0);
  if (nb && nb->value == 1.0) return a;
  return binary(BinaryOp::div, a, b);
}

Expr operator-(const Expr& a) {
  if (const auto* na = as_number(a)) return Expr::number(-na->value);
  if (const auto* neg = std::get_if<node::Negate>(&a.node().v)) return neg->operand;
  return make_node(ExprNode{node::Negate{a}});
}

Expr pow(const Expr& base, const Expr& exponent) {
  const auto* nb = as_number(base);
  const auto* ne = as_number(exponent);
  if (ne && ne->value == 1.0) return base;
  if (ne && ne->value == 0.0) return Expr::number(1.0);
  if (nb && ne) {
    const double r = std::pow(nb->value, ne->value);
    if (std::isfinite(r)) return Expr::number(r);
  }
  return binary(BinaryOp::pow, base, exponent);
}

Expr call(Func fn, const Expr& arg) { return make_node(ExprNode{node::Call{fn, arg}}); }

std::optional<Func> function_by_name(std::string_view name) {
  for (const auto& [n, f] : kFunctions)
    if (n == name) return f;
  return std::nullopt;
}

std::string_view function_name(Func fn) {
  for (const auto& [n, f] : kFunctions)
    if (f == fn) return n;
  return "?";
}

Expr parse(std::string_view source, std::span<const std::string> parameters) {
  return Parser(source, parameters).run();
}

std::string to_string(const Expr& e) {
  std::string out;
  print(e, out);
  return out;
}

double Env::at(std::string_view name) const {
  const auto it = values_.find(name);
  if (it == values_.end()) throw InvalidArgument("unbound variable '" + std::string(name) + "'");
  return it->second;
}

double evaluate(const Expr& e, const Env& env) {
  return std::visit(
      [&](const auto& n) -> double {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, node::Number>) {
          return n.value;
        } else if constexpr (std::is_same_v<T, node::Variable>) {
          if (is_constant_name(n.name)) return constant_value(n.name);
          return env.at(n.name);
        } else if constexpr (std::is_same_v<T, node::Negate>) {
          return -evaluate(n.operand, env);
        } else if constexpr (std::is_same_v<T, node::Binary>) {
          return apply(n.op, evaluate(n.lhs, env), evaluate(n.rhs, env));
        } else {
          return apply(n.fn, evaluate(n.arg, env));
        }
      },
      e.node().v);
}

Expr differentiate(const Expr& e, std::string_view var) {
  if (!depends_on(e, var)) return Expr::number(0.0);
  return std::visit(
      [&](const auto& n) -> Expr {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, node::Number>) {
          return Expr::number(0.0);
        } else if constexpr (std::is_same_v<T, node::Variable>) {
          return Expr::number(n.name == var ? 1.0 : 0.0);
        } else if constexpr (std::is_same_v<T, node::Negate>) {
          return -differentiate(n.operand, var);
        } else if constexpr (std::is_same_v<T, node::Binary>) {
          const Expr& u = n.lhs;
          const Expr& v = n.rhs;
          switch (n.op) {
            case BinaryOp::add:
              return differentiate(u, var) + differentiate(v, var);
            case BinaryOp::sub:
              return differentiate(u, var) - differentiate(v, var);
            case BinaryOp::mul:
              return differentiate(u, var) * v + u * differentiate(v, var);
            case BinaryOp::div:
              return (differentiate(u, var) * v - u * differentiate(v, var)) /
                     pow(v, Expr::number(2.0));
            case BinaryOp::pow: {
              const bool base_varies = depends_on(u, var);
              const bool exp_varies = depends_on(v, var);
              if (!exp_varies) return v * pow(u, v - Expr::number(1.0)) * differentiate(u, var);
              if (!base_varies) return e * call(Func::ln, u) * differentiate(v, var);
              return e * (differentiate(v, var) * call(Func::ln, u) + v * differentiate(u, var) / u);
            }
          }
          return Expr::number(0.0);
        } else {
          const Expr& u = n.arg;
          const Expr du = differentiate(u, var);
          switch (n.fn) {
            case Func::sin:
              return call(Func::cos, u) * du;
            case Func::cos:
              return -(call(Func::sin, u) * du);
            case Func::tan:
              return du / pow(call(Func::cos, u), Expr::number(2.0));
            case Func::exp:
              return e * du;
            case Func::ln:
              return du / u;
            case Func::sqrt:
              return du / (Expr::number(2.0) * e);
            case Func::abs:
              throw NotDifferentiable("abs(" + to_string(u) + ") has no symbolic derivative");
            case Func::gamma:
              throw NotDifferentiable("gamma(" + to_string(u) + ") has no symbolic derivative");
          }
          return Expr::number(0.0);
        }
      },
      e.node().v);
}

Expr substitute(const Expr& e, std::string_view var, const Expr& replacement) {
  return std::visit(
      [&](const auto& n) -> Expr {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, node::Number>) {
          return e;
        } else if constexpr (std::is_same_v<T, node::Variable>) {
          return n.name == var ? replacement : e;
        } else if constexpr (std::is_same_v<T, node::Negate>) {
          return make_node(ExprNode{node::Negate{substitute(n.operand, var, replacement)}});
        } else if constexpr (std::is_same_v<T, node::Binary>) {
          return binary(n.op, substitute(n.lhs, var, replacement), substitute(n.rhs, var, replacement));
        } else {
          return call(n.fn, substitute(n.arg, var, replacement));
        }
      },
      e.node().v);
}

std::set<std::string> variables(const Expr& e) {
  std::set<std::string> out;
  collect_variables(e, out);
  return out;
}

bool depends_on(const Expr& e, std::string_view var) {
  return std::visit(
      [&](const auto& n) -> bool {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, node::Number>) {
          return false;
        } else if constexpr (std::is_same_v<T, node::Variable>) {
          return n.name == var;
        } else if constexpr (std::is_same_v<T, node::Negate>) {
          return depends_on(n.operand, var);
        } else if constexpr (std::is_same_v<T, node::Binary>) {
          return depends_on(n.lhs, var) || depends_on(n.rhs, var);
        } else {
          return depends_on(n.arg, var);
        }
      },
      e.node().v);
}

std::string function_variable(const Expr& e) {
  if (!depends_on(e, "t") && depends_on(e, "x")) return "x";
  return "t";
}

// ---------------------------------------------------------------- compiled form

CompiledExpr::CompiledExpr(const Expr& e, std::vector<std::string> slots) : slots_(std::move(slots)) {
  emit(e, 1);
}

void CompiledExpr::emit(const Expr& e, int depth) {
  max_depth_ = std::max(max_depth_, depth);
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, node::Number>) {
          program_.push_back({OpCode::constant, n.value});
        } else if constexpr (std::is_same_v<T, node::Variable>) {
          if (is_constant_name(n.name)) {
            program_.push_back({OpCode::constant, constant_value(n.name)});
            return;
          }
          const auto it = std::find(slots_.begin(), slots_.end(), n.name);
          if (it == slots_.end()) throw InvalidArgument("unbound variable '" + n.name + "'");
          program_.push_back({OpCode::slot, 0.0, static_cast<int>(it - slots_.begin())});
        } else if constexpr (std::is_same_v<T, node::Negate>) {
          emit(n.operand, depth);
          program_.push_back({OpCode::negate});
        } else if constexpr (std::is_same_v<T, node::Binary>) {
          emit(n.lhs, depth);
          emit(n.rhs, depth + 1);
          program_.push_back({OpCode::binary, 0.0, 0, n.op});
        } else {
          emit(n.arg, depth);
          program_.push_back({OpCode::call, 0.0, 0, BinaryOp::add, n.fn});
        }
      },
      e.node().v);
}

double CompiledExpr::operator()(std::span<const double> values) const {
  constexpr int kInline = 32;
  std::array<double, kInline> small{};
  std::vector<double> big;
  double* stack = small.data();
  if (max_depth_ > kInline) {
    big.resize(static_cast<std::size_t>(max_depth_));
    stack = big.data();
  }
  int top = 0;
  for (const Instr& in : program_) {
    switch (in.code) {
      case OpCode::constant:
        stack[top++] = in.value;
        break;
      case OpCode::slot:
        stack[top++] = values[static_cast<std::size_t>(in.index)];
        break;
      case OpCode::negate:
        stack[top - 1] = -stack[top - 1];
        break;
      case OpCode::binary:
        --top;
        stack[top - 1] = apply(in.op, stack[top - 1], stack[top]);
        break;
      case OpCode::call:
        stack[top - 1] = apply(in.fn, stack[top - 1]);
        break;
    }
  }
  return stack[0];
}

namespace {

Expr bind_parameters(const Expr& e, std::span<const std::string_view> keep, const Env& params) {
  Expr bound = e;
  for (const auto& name : variables(e)) {
    if (std::find(keep.begin(), keep.end(), name) != keep.end()) continue;
    if (!params.contains(name)) throw InvalidArgument("unbound variable '" + name + "'");
    bound = substitute(bound, name, Expr::number(params.at(name)));
  }
  return bound;
}

}  // namespace

RealFn as_function(const Expr& e, std::string_view var, const Env& params) {
  const std::array<std::string_view, 1> keep{var};
  auto compiled = std::make_shared<const CompiledExpr>(bind_parameters(e, keep, params),
                                                       std::vector<std::string>{std::string(var)});
  return [compiled](double v) { return (*compiled)(std::span<const double>(&v, 1)); };
}

std::function<double(double, double)> as_function2(const Expr& e, std::string_view first,
                                                   std::string_view second, const Env& params) {
  const std::array<std::string_view, 2> keep{first, second};
  auto compiled = std::make_shared<const CompiledExpr>(
      bind_parameters(e, keep, params), std::vector<std::string>{std::string(first), std::string(second)});
  return [compiled](double a, double b) {
    const std::array<double, 2> v{a, b};
    return (*compiled)(v);
  };
}

}  // namespace pcalc
