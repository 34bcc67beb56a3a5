#include "pcalc/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <limits>
#include <optional>
#include <sstream>

#include "pcalc/corpus.hpp"
#include "pcalc/error.hpp"
#include "pcalc/pderiv.hpp"
#include "pcalc/pfamily.hpp"
#include "pcalc/pintegral.hpp"
#include "pcalc/riccati.hpp"
#include "pcalc/theorems.hpp"
#include "pcalc/weierstrass.hpp"

namespace pcalc::cli {

using json = nlohmann::ordered_json;

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

namespace {

constexpr double kDefaultTol = 1e-8;
constexpr double kMinTol = 1e-12;
constexpr double kMaxTol = 1e-2;

struct UsageError : Error {
  using Error::Error;
};

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<json>> rows;
};

struct Output {
  json inputs = json::object();
  json result = json::object();
  json diagnostics = json::object();
  std::optional<Table> table;
  bool failed = false;  // numerical failure with a printable result
};

struct FamilyOptions {
  std::string family;
  double alpha;
  std::optional<double> beta;
  std::string F;
};

struct Globals {
  std::string format = "csv";
  std::string out_path;
  std::optional<double> tol;
};

json number(double v) { return std::isfinite(v) ? json(v) : json(format_number(v)); }

json number(const std::optional<double>& v) { return v ? number(*v) : json(nullptr); }

std::string cell(const json& v) {
  if (v.is_null()) return "";
  if (v.is_number_float()) return format_number(v.get<double>());
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

void add_family_options(CLI::App* sub, FamilyOptions& f, const char* family, double alpha) {
  f.family = family;
  f.alpha = alpha;
  sub->add_option("--family", f.family, "khalil|katugampola|gfd|nderiv|cosine|power|custom")->capture_default_str();
  sub->add_option("--alpha", f.alpha, "family order alpha")->capture_default_str();
  sub->add_option("--beta", f.beta, "gfd parameter beta");
  sub->add_option("--F", f.F, "custom p(t,h), or the nderiv multiplier F(t,alpha)");
}

PFunction build_family(const FamilyOptions& o) {
  const auto kind = family_by_name(o.family);
  if (!kind) throw UsageError("unknown family '" + o.family + "'");
  std::optional<Expr> F;
  if (!o.F.empty()) F = parse(o.F);
  return make_family(*kind, o.alpha, o.beta, F);
}

json family_inputs(const FamilyOptions& o) {
  json j;
  j["family"] = o.family;
  j["alpha"] = o.alpha;
  j["beta"] = number(o.beta);
  j["F"] = o.F.empty() ? json(nullptr) : json(o.F);
  return j;
}

double resolve_tol(const Globals& g) {
  double tol = kDefaultTol;
  if (g.tol) {
    tol = *g.tol;
  } else if (const char* env = std::getenv("PCALC_TOL"); env && *env) {
    const std::string_view s(env);
    const auto res = std::from_chars(s.data(), s.data() + s.size(), tol);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size())
      throw UsageError("PCALC_TOL is not a number: '" + std::string(s) + "'");
  }
  if (!(tol >= kMinTol && tol <= kMaxTol))
    throw UsageError("tolerance " + format_number(tol) + " outside [1e-12, 1e-2]");
  return tol;
}

Side parse_side(const std::string& s) {
  if (s == "both") return Side::both;
  if (s == "left") return Side::left;
  if (s == "right") return Side::right;
  throw UsageError("side must be both, left or right");
}

std::vector<std::pair<double, double>> read_vertices(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open vertex file '" + path + "'");
  std::vector<std::pair<double, double>> v;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const auto comma = line.find(',');
    double x = 0.0, y = 0.0;
    bool ok = comma != std::string::npos;
    if (ok) {
      auto trim = [](std::string_view s) {
        while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
        while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
        return s;
      };
      const std::string_view xs = trim(std::string_view(line).substr(0, comma));
      const std::string_view ys = trim(std::string_view(line).substr(comma + 1));
      const auto rx = std::from_chars(xs.data(), xs.data() + xs.size(), x);
      const auto ry = std::from_chars(ys.data(), ys.data() + ys.size(), y);
      ok = rx.ec == std::errc() && rx.ptr == xs.data() + xs.size() && ry.ec == std::errc() &&
           ry.ptr == ys.data() + ys.size();
    }
    if (!ok) {
      if (v.empty() && lineno == 1) continue;  // header
      throw UsageError("bad vertex at " + path + ":" + std::to_string(lineno));
    }
    v.emplace_back(x, y);
  }
  return v;
}

void emit(const std::string& command, const Globals& g, const Output& o, std::ostream& out) {
  std::ostringstream buf;
  if (g.format == "json") {
    json doc;
    doc["command"] = command;
    doc["inputs"] = o.inputs;
    json result = o.result;
    if (o.table) {
      json rows = json::array();
      for (const auto& r : o.table->rows) {
        json row;
        for (std::size_t i = 0; i < r.size(); ++i) row[o.table->columns[i]] = r[i];
        rows.push_back(std::move(row));
      }
      result["rows"] = std::move(rows);
    }
    doc["result"] = std::move(result);
    doc["diagnostics"] = o.diagnostics;
    buf << doc.dump(2) << '\n';
  } else if (o.table) {
    buf << "# " << o.result.dump() << '\n';
    for (std::size_t i = 0; i < o.table->columns.size(); ++i) buf << (i ? "," : "") << o.table->columns[i];
    buf << '\n';
    for (const auto& r : o.table->rows) {
      for (std::size_t i = 0; i < r.size(); ++i) buf << (i ? "," : "") << cell(r[i]);
      buf << '\n';
    }
  } else {
    std::vector<std::pair<std::string, const json*>> scalars;
    for (const auto& [k, v] : o.result.items())
      if (!v.is_structured()) scalars.emplace_back(k, &v);
    for (std::size_t i = 0; i < scalars.size(); ++i) buf << (i ? "," : "") << scalars[i].first;
    buf << '\n';
    for (std::size_t i = 0; i < scalars.size(); ++i) buf << (i ? "," : "") << cell(*scalars[i].second);
    buf << '\n';
  }
  if (g.out_path.empty()) {
    out << buf.str();
  } else {
    std::ofstream file(g.out_path, std::ios::binary);
    if (!file) throw UsageError("cannot write '" + g.out_path + "'");
    file << buf.str();
  }
}

void report_error(const Globals& g, const std::string& command, const char* kind, const std::string& message,
                  std::ostream& err) {
  if (g.format == "json") {
    json e;
    e["command"] = command;
    e["error"] = {{"kind", kind}, {"message", message}};
    err << e.dump() << '\n';
  } else {
    err << "error: " << message << '\n';
  }
}

std::string try_note(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const DomainError& e) {
    return e.what();
  } catch (const NotDifferentiable& e) {
    return e.what();
  } catch (const NumericalFailure& e) {
    return e.what();
  }
  return {};
}

void mvt_result(Output& o, const MvtResult& r) {
  o.result["c"] = r.c;
  o.result["k"] = r.k;
  o.result["residual"] = r.residual;
  o.result["bracket_lo"] = r.bracket.first;
  o.result["bracket_hi"] = r.bracket.second;
  o.result["degenerate"] = r.degenerate;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Globals g;
  // Known before parsing so that parse errors honour --format json.
  for (std::size_t i = 0; i < args.size(); ++i)
    if (args[i] == "--format=json" || (args[i] == "--format" && i + 1 < args.size() && args[i + 1] == "json"))
      g.format = "json";

  CLI::App app{"Numerical p-derivative calculus", "pcalc"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");
  auto global_options = [&](CLI::App* sub) {
    sub->add_option("--format", g.format, "csv or json")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
    sub->add_option("--out", g.out_path, "write to this file instead of standard output");
    sub->add_option("--tol", g.tol, "tolerance in [1e-12, 1e-2] (default PCALC_TOL or 1e-8)");
  };

  std::function<Output(double)> handler;
  auto command = [&](const char* name, const char* help) {
    CLI::App* sub = app.add_subcommand(name, help);
    global_options(sub);
    return sub;
  };

  // deriv
  FamilyOptions d_fam;
  std::string d_f, d_side = "both";
  double d_t = 0.0;
  {
    CLI::App* sub = command("deriv", "p-derivative by the limit definition and the multiplier formula");
    add_family_options(sub, d_fam, "khalil", 0.5);
    sub->add_option("--f", d_f, "function of t (or corpus:NAME)")->required();
    sub->add_option("--t", d_t, "point")->required();
    sub->add_option("--side", d_side, "both|left|right")->capture_default_str();
    sub->callback([&] {
      handler = [&](double tol) {
        Output o;
        o.inputs = family_inputs(d_fam);
        o.inputs["f"] = d_f;
        o.inputs["t"] = d_t;
        o.inputs["side"] = d_side;
        o.inputs["tol"] = tol;
        const PFunction P = build_family(d_fam);
        const Expr f = resolve_function(d_f);
        const DerivEstimate est = p_derivative_limit(P, f, d_t, parse_side(d_side), tol);
        o.result["limit"] = est.value;
        o.result["limit_error"] = est.error_estimate;
        o.result["converged"] = est.converged;
        o.result["left_limit"] = number(est.left_value);
        o.result["right_limit"] = number(est.right_value);
        std::optional<double> formula;
        const std::string note = try_note([&] { formula = p_derivative_formula(P, f, d_t); });
        o.result["formula"] = number(formula);
        o.diagnostics["levels"] = est.h_sequence.size();
        if (!note.empty()) o.diagnostics["formula_unavailable"] = note;
        o.failed = !est.converged;
        return o;
      };
    });
  }

  // integral
  FamilyOptions i_fam;
  std::string i_f;
  double i_a = 0.0, i_t = 0.0;
  {
    CLI::App* sub = command("integral", "generalized integral I_p(f) from a to t");
    add_family_options(sub, i_fam, "khalil", 0.5);
    sub->add_option("--f", i_f, "integrand")->required();
    sub->add_option("--a", i_a, "lower limit")->capture_default_str();
    sub->add_option("--t", i_t, "upper limit")->required();
    sub->callback([&] {
      handler = [&](double tol) {
        Output o;
        o.inputs = family_inputs(i_fam);
        o.inputs["f"] = i_f;
        o.inputs["a"] = i_a;
        o.inputs["t"] = i_t;
        o.inputs["tol"] = tol;
        const QuadratureResult r = p_integral(build_family(i_fam), resolve_function(i_f), i_a, i_t, tol);
        o.result["value"] = r.value;
        o.result["error_estimate"] = r.error_estimate;
        o.diagnostics["subdivisions"] = r.subdivisions;
        o.diagnostics["graded"] = r.graded;
        return o;
      };
    });
  }

  // ftc
  FamilyOptions f_fam;
  std::string f_f;
  double f_a = 0.0, f_t = 0.0;
  {
    CLI::App* sub = command("ftc", "fundamental theorem residuals in both directions");
    add_family_options(sub, f_fam, "khalil", 0.5);
    sub->add_option("--f", f_f, "function")->required();
    sub->add_option("--a", f_a, "lower limit")->capture_default_str();
    sub->add_option("--t", f_t, "upper limit")->required();
    sub->callback([&] {
      handler = [&](double tol) {
        Output o;
        o.inputs = family_inputs(f_fam);
        o.inputs["f"] = f_f;
        o.inputs["a"] = f_a;
        o.inputs["t"] = f_t;
        o.inputs["tol"] = tol;
        const PFunction P = build_family(f_fam);
        const Expr f = resolve_function(f_f);
        std::optional<double> fwd, bwd;
        const std::string nf = try_note([&] { fwd = ftc_forward(P, f, f_a, f_t, tol); });
        const std::string nb = try_note([&] { bwd = ftc_backward(P, f, f_a, f_t, tol); });
        o.result["forward_residual"] = number(fwd);
        o.result["backward_residual"] = number(bwd);
        if (!nf.empty()) o.diagnostics["forward_unavailable"] = nf;
        if (!nb.empty()) o.diagnostics["backward_unavailable"] = nb;
        o.failed = !fwd && !bwd;
        return o;
      };
    });
  }

  // ibp
  FamilyOptions b_fam;
  std::string b_f, b_g;
  double b_a = 0.0, b_b = 0.0;
  {
    CLI::App* sub = command("ibp", "integration by parts residual");
    add_family_options(sub, b_fam, "khalil", 0.5);
    sub->add_option("--f", b_f, "first factor")->required();
    sub->add_option("--g", b_g, "second factor")->required();
    sub->add_option("--a", b_a, "lower limit")->capture_default_str();
    sub->add_option("--b", b_b, "upper limit")->required();
    sub->callback([&] {
      handler = [&](double tol) {
        Output o;
        o.inputs = family_inputs(b_fam);
        o.inputs["f"] = b_f;
        o.inputs["g"] = b_g;
        o.inputs["a"] = b_a;
        o.inputs["b"] = b_b;
        o.inputs["tol"] = tol;
        o.result["residual"] = integration_by_parts_check(build_family(b_fam), resolve_function(b_f),
                                                          resolve_function(b_g), b_a, b_b, tol);
        return o;
      };
    });
  }

  // mvt
  FamilyOptions m_fam;
  std::string m_f, m_g;
  double m_a = 0.0, m_b = 0.0;
  {
    CLI::App* sub = command("mvt", "mean value point (Cauchy form with --g)");
    add_family_options(sub, m_fam, "khalil", 0.5);
    sub->add_option("--f", m_f, "function")->required();
    sub->add_option("--g", m_g, "second function for the Cauchy form");
    sub->add_option("--a", m_a, "left end")->required();
    sub->add_option("--b", m_b, "right end")->required();
    sub->callback([&] {
      handler = [&](double tol) {
        Output o;
        o.inputs = family_inputs(m_fam);
        o.inputs["f"] = m_f;
        o.inputs["g"] = m_g.empty() ? json(nullptr) : json(m_g);
        o.inputs["a"] = m_a;
        o.inputs["b"] = m_b;
        o.inputs["tol"] = tol;
        const PFunction P = build_family(m_fam);
        const Expr f = resolve_function(m_f);
        mvt_result(o, m_g.empty() ? find_mvt_point(P, f, m_a, m_b, tol)
                                  : find_cauchy_mvt_point(P, f, resolve_function(m_g), m_a, m_b, tol));
        return o;
      };
    });
  }

  // rolle
  FamilyOptions r_fam;
  std::string r_f;
  double r_a = 0.0, r_b = 0.0;
  {
    CLI::App* sub = command("rolle", "point with D_p f(c) = 0 when f(a) = f(b) = 0");
    add_family_options(sub, r_fam, "khalil", 0.5);
    sub->add_option("--f", r_f, "function")->required();
    sub->add_option("--a", r_a, "left end")->required();
    sub->add_option("--b", r_b, "right end")->required();
    sub->callback([&] {
      handler = [&](double tol) {
        Output o;
        o.inputs = family_inputs(r_fam);
        o.inputs["f"] = r_f;
        o.inputs["a"] = r_a;
        o.inputs["b"] = r_b;
        o.inputs["tol"] = tol;
        mvt_result(o, find_rolle_point(build_family(r_fam), resolve_function(r_f), r_a, r_b, tol));
        return o;
      };
    });
  }

  // maxprinciple
  FamilyOptions x_fam;
  std::vector<double> x_t;
  std::vector<double> x_h{-1e-1, -1e-2, -1e-3, -1e-4, -1e-5, -1e-6, 1e-6, 1e-5, 1e-4, 1e-3, 1e-2, 1e-1};
  std::string x_f;
  double x_a = 0.0, x_b = 0.0;
  {
    CLI::App* sub = command("maxprinciple", "sign conditions on p(t,h) - t, and D_p f at an interior maximum");
    add_family_options(sub, x_fam, "khalil", 0.5);
    sub->add_option("--t", x_t, "points (comma separated)")->required()->delimiter(',');
    sub->add_option("--h-samples", x_h, "sampled h (comma separated)")->delimiter(',');
    sub->add_option("--f", x_f, "function whose maximum on (a, b) is examined");
    sub->add_option("--a", x_a, "left end for --f");
    sub->add_option("--b", x_b, "right end for --f");
    sub->callback([&] {
      handler = [&](double tol) {
        Output o;
        o.inputs = family_inputs(x_fam);
        o.inputs["t"] = x_t;
        o.inputs["h"] = x_h;
        o.inputs["f"] = x_f.empty() ? json(nullptr) : json(x_f);
        o.inputs["tol"] = tol;
        const PFunction P = build_family(x_fam);
        Table table{{"t", "holds_37", "holds_38"}, {}};
        bool all = true;
        for (double t : x_t) {
          const MonotonicityReport r = check_monotonicity_conditions(P, t, x_h);
          table.rows.push_back({t, r.holds_37, r.holds_38});
          all = all && r.holds_37 && r.holds_38;
        }
        o.result["all_hold"] = all;
        if (!x_f.empty()) {
          if (!(x_a < x_b)) throw UsageError("--f needs --a < --b");
          const RealFn f = as_function(resolve_function(x_f), "t");
          constexpr int kSamples = 10000;
          double best_c = x_a, best_f = -std::numeric_limits<double>::infinity();
          for (int i = 1; i < kSamples; ++i) {
            const double c = x_a + (x_b - x_a) * i / kSamples;
            const double v = f(c);
            if (v > best_f) best_f = v, best_c = c;
          }
          const DerivEstimate d = p_derivative_limit(P, f, best_c, Side::both, tol);
          o.result["max_point"] = best_c;
          o.result["max_value"] = best_f;
          o.result["derivative_at_max"] = d.value;
        }
        o.table = std::move(table);
        return o;
      };
    });
  }

  // hypothesis
  FamilyOptions h_fam;
  double h_t = 1.0;
  std::vector<double> h_eps{1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6};
  std::optional<double> h_l1a, h_l1b;
  {
    CLI::App* sub = command("hypothesis", "solvability of p(t,h) = t +- eps, and the L1 norm of 1/p_h");
    add_family_options(sub, h_fam, "khalil", 0.5);
    sub->add_option("--t", h_t, "point")->capture_default_str();
    sub->add_option("--eps", h_eps, "epsilons, decreasing (comma separated)")->delimiter(',');
    sub->add_option("--l1-a", h_l1a, "left end of the L1 check");
    sub->add_option("--l1-b", h_l1b, "right end of the L1 check");
    sub->callback([&] {
      handler = [&](double tol) {
        Output o;
        o.inputs = family_inputs(h_fam);
        o.inputs["t"] = h_t;
        o.inputs["eps"] = h_eps;
        o.inputs["tol"] = tol;
        const PFunction P = build_family(h_fam);
        const HReport r = check_hypothesis_H(P, h_t, h_eps);
        Table table{{"epsilon", "h_plus", "h_minus"}, {}};
        for (const HRecord& rec : r.records) table.rows.push_back({rec.epsilon, number(rec.h_plus), number(rec.h_minus)});
        o.result["verdict_plus"] = r.verdict_plus;
        o.result["verdict_minus"] = r.verdict_minus;
        if (h_l1a || h_l1b) {
          if (!h_l1a || !h_l1b) throw UsageError("--l1-a and --l1-b go together");
          const L1Report l1 = check_l1(P, *h_l1a, *h_l1b, tol);
          o.result["l1_estimate"] = number(l1.estimate);
          o.result["l1_converged"] = l1.converged;
          json refinements = json::array();
          for (double v : l1.refinements) refinements.push_back(number(v));
          o.diagnostics["l1_refinements"] = std::move(refinements);
        }
        o.table = std::move(table);
        return o;
      };
    });
  }

  // riccati
  FamilyOptions q_fam;
  std::string q_q;
  double q_u0 = 0.0, q_T = 0.0;
  std::size_t q_n = 64;
  int q_iter = 200;
  bool q_override = false;
  {
    CLI::App* sub = command("riccati", "solve D_p u + u^2 = q, u(0) = u0 on [0, T]");
    add_family_options(sub, q_fam, "khalil", 0.5);
    sub->add_option("--q", q_q, "forcing q(t)")->required();
    sub->add_option("--u0", q_u0, "initial value")->required();
    sub->add_option("--T", q_T, "horizon")->required();
    sub->add_option("--n", q_n, "grid intervals (>= 16)")->capture_default_str();
    sub->add_option("--max-iter", q_iter, "maximum Picard sweeps")->capture_default_str();
    sub->add_flag("--override", q_override, "iterate even without a contraction certificate");
    sub->callback([&] {
      handler = [&](double tol) {
        Output o;
        o.inputs = family_inputs(q_fam);
        o.inputs["q"] = q_q;
        o.inputs["u0"] = q_u0;
        o.inputs["T"] = q_T;
        o.inputs["n"] = q_n;
        o.inputs["override"] = q_override;
        o.inputs["tol"] = tol;
        const RiccatiProblem pr{build_family(q_fam), resolve_function(q_q), q_u0, q_T, q_n, tol, q_override,
                                std::nullopt, q_iter};
        const RiccatiSolution s = solve_riccati(pr);
        const ContractionCertificate& c = s.certificate;
        o.result["certificate"] = {{"feasible", c.feasible}, {"b", c.b},           {"k", c.k},
                                   {"l1_norm", c.l1_norm},   {"q_inf", c.q_inf}};
        o.result["certified"] = s.certified;
        o.result["converged"] = s.converged;
        o.result["iterations"] = s.iterations;
        o.result["final_delta"] = s.final_delta;
        o.result["residual"] = s.residual;
        json norms = json::array();
        for (double v : s.update_norms) norms.push_back(v);
        o.diagnostics["update_norms"] = std::move(norms);
        Table table{{"t", "u"}, {}};
        for (std::size_t j = 0; j < s.grid.size(); ++j) table.rows.push_back({s.grid[j], s.u[j]});
        o.table = std::move(table);
        o.failed = !s.converged;
        return o;
      };
    });
  }

  // weierstrass
  std::int64_t w_a = 41;
  double w_b = 0.9, w_alpha = 2.0;
  std::string w_x = "0";
  std::size_t w_m = 8;
  {
    CLI::App* sub = command("weierstrass", "difference quotients of sum b^n cos(a^n pi x) along h_m");
    sub->add_option("--alpha", w_alpha, "exponent of p(t,h) = t + h^alpha")->capture_default_str();
    sub->add_option("--a", w_a, "odd integer >= 3")->capture_default_str();
    sub->add_option("--b", w_b, "ratio in (0, 1)")->capture_default_str();
    sub->add_option("--x", w_x, "rational point, e.g. 1/3")->capture_default_str();
    sub->add_option("--m", w_m, "number of steps")->capture_default_str();
    sub->callback([&] {
      handler = [&](double tol) {
        Output o;
        o.inputs = {{"alpha", w_alpha}, {"a", w_a}, {"b", w_b}, {"x", w_x}, {"m", w_m}, {"tol", tol}};
        const WeierstrassParams W = make_weierstrass(w_a, w_b, w_alpha);
        const Rational x = parse_rational(w_x);
        std::vector<HmStep> steps;
        try {
          steps = divergence_report(W, x, w_m, tol);
        } catch (const BoundViolation& e) {
          steps = e.steps();
          o.failed = true;
          o.diagnostics["bound_violation"] = e.what();
        }
        o.result["condition"] = check_condition(W);
        o.result["coefficient"] = lower_bound_coefficient(W);
        o.result["terms"] = truncation_terms(W.b, tol);
        Table table{{"m", "alpha_m", "t_m", "h_m", "quotient", "lower_bound"}, {}};
        for (const HmStep& s : steps)
          table.rows.push_back({s.m, s.alpha_m.str(), rational_to_string(s.t_m), s.h_m, s.quotient, s.lower_bound});
        o.table = std::move(table);
        return o;
      };
    });
  }

  // polygon
  FamilyOptions p_fam;
  std::string p_vertices;
  std::vector<double> p_grid;
  {
    CLI::App* sub = command("polygon", "limit p-derivative of a piecewise-linear function");
    add_family_options(sub, p_fam, "power", 2.0);
    sub->add_option("--vertices", p_vertices, "CSV file of x,y vertices")->required();
    sub->add_option("--grid", p_grid, "points (comma separated; default: the vertices)")->delimiter(',');
    sub->callback([&] {
      handler = [&](double tol) {
        Output o;
        o.inputs = family_inputs(p_fam);
        o.inputs["vertices"] = p_vertices;
        o.inputs["tol"] = tol;
        const Polygon poly(read_vertices(p_vertices));
        std::vector<double> grid = p_grid;
        if (grid.empty())
          for (const auto& v : poly.vertices()) grid.push_back(v.first);
        o.inputs["grid"] = grid;
        const std::vector<DerivEstimate> est = polygonal_derivative_scan(poly, build_family(p_fam), grid, tol);
        Table table{{"t", "value", "converged"}, {}};
        double worst = 0.0;
        for (std::size_t i = 0; i < grid.size(); ++i) {
          table.rows.push_back({grid[i], est[i].value, est[i].converged});
          worst = std::max(worst, std::abs(est[i].value));
        }
        o.result["max_abs"] = worst;
        o.table = std::move(table);
        return o;
      };
    });
  }

  // compare
  FamilyOptions c_fam1, c_fam2;
  std::string c_f;
  double c_t = 0.0;
  {
    CLI::App* sub = command("compare", "limit p-derivatives of one function under two families");
    add_family_options(sub, c_fam1, "khalil", 0.5);
    c_fam2.family = "katugampola";
    c_fam2.alpha = 0.5;
    sub->add_option("--family2", c_fam2.family, "second family")->capture_default_str();
    sub->add_option("--alpha2", c_fam2.alpha, "second alpha")->capture_default_str();
    sub->add_option("--beta2", c_fam2.beta, "second beta");
    sub->add_option("--F2", c_fam2.F, "second custom F");
    sub->add_option("--f", c_f, "function")->required();
    sub->add_option("--t", c_t, "point")->required();
    sub->callback([&] {
      handler = [&](double tol) {
        Output o;
        o.inputs = {{"first", family_inputs(c_fam1)}, {"second", family_inputs(c_fam2)}};
        o.inputs["f"] = c_f;
        o.inputs["t"] = c_t;
        o.inputs["tol"] = tol;
        const ComparisonReport r =
            compare_definitions(build_family(c_fam1), build_family(c_fam2), resolve_function(c_f), c_t, tol);
        o.result["value_1"] = r.value_1;
        o.result["value_2"] = r.value_2;
        o.result["abs_diff"] = r.abs_diff;
        o.result["ratio"] = number(r.ratio);
        o.result["expected_ratio"] = number(r.expected_ratio);
        return o;
      };
    });
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    report_error(g, "", "usage", e.what(), err);
    return 1;
  }

  const std::string name = app.get_subcommands().front()->get_name();
  try {
    const double tol = resolve_tol(g);
    const Output o = handler(tol);
    emit(name, g, o, out);
    return o.failed ? 2 : 0;
  } catch (const UsageError& e) {
    report_error(g, name, "usage", e.what(), err);
  } catch (const ParseError& e) {
    report_error(g, name, "parse", e.what(), err);
  } catch (const InvalidArgument& e) {
    report_error(g, name, "invalid_argument", e.what(), err);
  } catch (const DomainError& e) {
    report_error(g, name, "domain", e.what(), err);
  } catch (const NoRootFound& e) {
    report_error(g, name, "no_root", e.what(), err);
    return 2;
  } catch (const NumericalFailure& e) {
    report_error(g, name, "numerical_failure", e.what(), err);
    return 2;
  } catch (const NotDifferentiable& e) {
    report_error(g, name, "not_differentiable", e.what(), err);
    return 2;
  }
  return 1;
}

}  // namespace pcalc::cli
