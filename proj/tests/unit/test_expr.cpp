#include <doctest.h>

#include <boost/math/constants/constants.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include <string>
#include <vector>

#include "pcalc/error.hpp"
#include "pcalc/expr.hpp"
#include "support.hpp"

using namespace pcalc;
using testing::Gen;

namespace {

const node::Binary& binary(const Expr& e) { return std::get<node::Binary>(e.node().v); }
const node::Call& callnode(const Expr& e) { return std::get<node::Call>(e.node().v); }
const std::string& var(const Expr& e) { return std::get<node::Variable>(e.node().v).name; }

double eval_t(const char* src, double t) { return evaluate(parse(src), Env{{"t", t}}); }

}  // namespace

TEST_CASE("parse builds the expected trees") {
  const Expr e = parse("t^2 + sin(t)");
  const auto& add = binary(e);
  CHECK(add.op == BinaryOp::add);
  CHECK(binary(add.lhs).op == BinaryOp::pow);
  CHECK(var(binary(add.lhs).lhs) == "t");
  CHECK(binary(add.lhs).rhs.is_number(2.0));
  CHECK(callnode(add.rhs).fn == Func::sin);

  CHECK(callnode(parse("abs(t)")).fn == Func::abs);
  CHECK(variables(parse("t + h*t^(1-alpha)")) == std::set<std::string>{"t", "h", "alpha"});
}

TEST_CASE("precedence and associativity") {
  CHECK(eval_t("-t^2", 3.0) == -9.0);
  CHECK(eval_t("2^3^2", 0.0) == 512.0);
  CHECK(eval_t("2*t+1", 3.0) == 7.0);
  CHECK(eval_t("8/2/2", 0.0) == 2.0);
  CHECK(eval_t("2^-1", 0.0) == 0.5);
  CHECK(eval_t("pi", 0.0) == doctest::Approx(3.141592653589793).epsilon(1e-15));
  CHECK(eval_t("e", 0.0) == doctest::Approx(2.718281828459045).epsilon(1e-15));
}

TEST_CASE("parse errors carry byte offsets") {
  try {
    parse("t + * 2");
    FAIL("no error");
  } catch (const ParseError& e) {
    CHECK(e.offset() == 4);
  }
  CHECK_THROWS_AS(parse("foo(t)"), ParseError);
  CHECK_THROWS_AS(parse("sin(t, t)"), ParseError);
  CHECK_THROWS_AS(parse("sin t"), ParseError);
  CHECK_THROWS_AS(parse("(t"), ParseError);
  CHECK_THROWS_AS(parse(""), ParseError);
  CHECK_THROWS_AS(parse("q + 1"), ParseError);
  const std::vector<std::string> params{"q"};
  CHECK_NOTHROW(parse("q + 1", params));
}

TEST_CASE("evaluate examples and errors") {
  CHECK(eval_t("2*t", 3.0) == 6.0);
  CHECK(eval_t("t^2", 4.0) == 16.0);
  CHECK_THROWS_AS(evaluate(parse("t + x"), Env{{"t", 1.0}}), InvalidArgument);
  CHECK_THROWS_AS(eval_t("ln(t)", 0.0), DomainError);
  CHECK_THROWS_AS(eval_t("sqrt(t)", -1.0), DomainError);
  CHECK_THROWS_AS(eval_t("1/t", 0.0), DomainError);
  CHECK_THROWS_AS(eval_t("gamma(t)", -2.0), DomainError);
}

TEST_CASE("gamma against a multiprecision oracle") {
  using boost::multiprecision::cpp_bin_float_50;
  const double sqrt_pi = boost::math::constants::root_pi<cpp_bin_float_50>().convert_to<double>();
  CHECK(std::abs(evaluate(parse("gamma(x)"), Env{{"x", 0.5}}) - sqrt_pi) < 1e-10);
  CHECK(std::abs(evaluate(parse("gamma(x)"), Env{{"x", 0.5}}) - 1.7724538509) < 1e-10);
  Gen g(11);
  for (int i = 0; i < 200; ++i) {
    const double x = g.uniform(0.01, 30.0);
    const double want = boost::math::tgamma(cpp_bin_float_50(x)).convert_to<double>();
    CHECK(std::abs(evaluate(parse("gamma(x)"), Env{{"x", x}}) / want - 1.0) < 1e-10);
  }
}

TEST_CASE("differentiate examples") {
  CHECK(differentiate(parse("t^2"), "t") == parse("2*t"));
  CHECK(differentiate(parse("sin(t)"), "t") == parse("cos(t)"));
  CHECK(differentiate(parse("t + h*t^(1-alpha)"), "h") == parse("t^(1-alpha)"));
  CHECK(differentiate(parse("5 + h"), "t").is_number(0.0));
  CHECK_THROWS_AS(differentiate(parse("abs(t)"), "t"), NotDifferentiable);
  CHECK_NOTHROW(differentiate(parse("abs(h) + t"), "t"));
}

TEST_CASE("symbolic derivatives match central differences") {
  const std::vector<std::string> corpus{
      "t^3 - 2*t",       "sin(t)*cos(t)",  "exp(t)/(1+t^2)", "ln(t)*sqrt(t)", "tan(t/2)",
      "t^t",             "sqrt(1+t^2)",    "exp(-t)*t^2.5",  "cos(t^2)",      "1/(t+1)^3",
      "2^t",             "-t^2 + ln(t+1)", "sin(exp(t/3))",  "t/(t+sin(t)+2)"};
  Gen g(7);
  for (int i = 0; i < 300; ++i) {
    const std::string& src = g.pick(corpus);
    const Expr f = parse(src);
    const double t = g.uniform(0.2, 2.5);
    const double h = 1e-5 * std::max(1.0, t);
    const double fd = (eval_t(src.c_str(), t + h) - eval_t(src.c_str(), t - h)) / (2.0 * h);
    const double d = evaluate(differentiate(f, "t"), Env{{"t", t}});
    CAPTURE(src);
    CAPTURE(t);
    CHECK(std::abs(d - fd) / std::max(1.0, std::abs(d)) < 1e-6);
  }
}

// Random trees for the printer round trip.
Expr random_expr(Gen& g, int depth) {
  if (depth == 0 || g.integer(0, 3) == 0) {
    switch (g.integer(0, 3)) {
      case 0: return Expr::variable("t");
      case 1: return Expr::variable("h");
      case 2: return Expr::number(static_cast<double>(g.integer(-5, 9)));
      default: return Expr::number(g.uniform(-3.0, 3.0));
    }
  }
  const Expr a = random_expr(g, depth - 1);
  const Expr b = random_expr(g, depth - 1);
  switch (g.integer(0, 6)) {
    case 0: return a + b;
    case 1: return a - b;
    case 2: return a * b;
    case 3: return a / b;
    case 4: return pow(a, b);
    case 5: return -a;
    default: return call(static_cast<Func>(g.integer(0, 7)), a);
  }
}

TEST_CASE("print then parse is the identity") {
  Gen g(3);
  for (int i = 0; i < 2000; ++i) {
    const Expr parsed = parse(to_string(random_expr(g, 4)));
    const std::string s = to_string(parsed);
    CAPTURE(s);
    const Expr back = parse(s);
    CHECK(back == parsed);
    CHECK(to_string(back) == s);
  }
}

TEST_CASE("compiled functions agree with the tree evaluator") {
  const Expr e = parse("alpha*t^2 + sin(t)/beta");
  const RealFn f = as_function(e, "t", Env{{"alpha", 2.0}, {"beta", 4.0}});
  for (double t : {-1.5, 0.0, 0.3, 2.0})
    CHECK(f(t) == doctest::Approx(evaluate(e, Env{{"t", t}, {"alpha", 2.0}, {"beta", 4.0}})).epsilon(1e-15));
  CHECK_THROWS_AS(as_function(e, "t"), InvalidArgument);
  const auto f2 = as_function2(parse("t + h*t^(1-alpha)"), "t", "h", Env{{"alpha", 0.5}});
  CHECK(f2(4.0, 0.01) == doctest::Approx(4.02).epsilon(1e-15));
  CHECK(function_variable(parse("x^2")) == "x");
  CHECK(function_variable(parse("t*x")) == "t");
}
