#include "mi_ellipse/cli.hpp"

#include <cmath>
#include <iostream>
#include <sstream>
#include <utility>

#include <CLI11.hpp>

#include "mi_ellipse/error.hpp"
#include "mi_ellipse/extremal.hpp"
#include "mi_ellipse/intersect.hpp"
#include "mi_ellipse/io.hpp"
#include "mi_ellipse/oracle.hpp"
#include "mi_ellipse/position.hpp"
#include "mi_ellipse/solver.hpp"
#include "mi_ellipse/svg.hpp"
#include "mi_ellipse/variation.hpp"

namespace mie::cli {

namespace {

const std::vector<std::pair<std::string, std::string>> kCommands = {
    {"area", "Area of the body inside the ellipse"},
    {"crossings", "Boundary crossings with the ellipse (CSV)"},
    {"derivs", "First and second derivative of the intersection area (CSV)"},
    {"profile", "Intersection area along E_t (CSV)"},
    {"john", "Maximal inscribed centred ellipse"},
    {"loewner", "Minimal circumscribed centred ellipse"},
    {"mi", "Maximal-intersection ellipse of area --lambda"},
    {"family", "MI ellipses from the John to the Loewner area (CSV)"},
    {"check-position", "Is the unit disk an MI ellipse of the body"},
    {"isotropic", "Balanced isotropic weights on the crossing points"},
    {"oracle", "Brute-force reference for area, derivs or mi"},
    {"plot", "SVG of the body with its John, Loewner and MI ellipses"},
    {"fig1", "SVG of the built-in quartic with the unit circle"}};

// Flat JSON object with insertion order preserved.
class Json {
 public:
  explicit Json(int digits) : digits_(digits) {}
  Json& num(const std::string& k, double v) { return raw(k, format_number(v, digits_)); }
  Json& integer(const std::string& k, long long v) { return raw(k, std::to_string(v)); }
  Json& boolean(const std::string& k, bool v) { return raw(k, v ? "true" : "false"); }
  Json& str(const std::string& k, const std::string& v) {
    std::string q = "\"";
    for (char ch : v) {
      if (ch == '"' || ch == '\\') q += '\\';
      q += ch;
    }
    return raw(k, q + '"');
  }
  Json& nums(const std::string& k, const std::vector<double>& v) {
    std::string s = "[";
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + format_number(v[i], digits_);
    return raw(k, s + "]");
  }
  Json& raw(const std::string& k, const std::string& v) {
    body_ += (body_.empty() ? "" : ",") + ('"' + k + "\":") + v;
    return *this;
  }
  std::string dump() const { return '{' + body_ + '}'; }

 private:
  int digits_;
  std::string body_;
};

struct Context {
  const RunConfig& cfg;
  std::ostream& out;

  ConvexBody body() const { return load_body(cfg.body); }
  CenteredEllipse ellipse() const {
    return cfg.ellipse.empty() ? CenteredEllipse() : parse_ellipse(cfg.ellipse);
  }
  std::string e_json(const CenteredEllipse& e) const { return ellipse_json(e, cfg.digits); }

  double lambda_for(const ConvexBody& k, MIOptions& opt) const {
    if (cfg.lambda > 0.0) return cfg.lambda;
    opt.john = john_ellipse(k);
    opt.loewner = loewner_ellipse(k);
    return 0.5 * (opt.john->ellipse.area() + opt.loewner->ellipse.area());
  }

  void emit(const std::string& text) const {
    if (cfg.out.empty()) {
      out << text;
    } else {
      write_text_file(cfg.out, text);
    }
  }
};

std::string parity_name(Parity p) { return p == Parity::Enter ? "enter" : "exit"; }

std::string containment_name(Containment c) {
  switch (c) {
    case Containment::None: return "none";
    case Containment::BodyInsideEllipse: return "body_inside_ellipse";
    case Containment::EllipseInsideBody: return "ellipse_inside_body";
    case Containment::Coincident: return "coincident";
  }
  return "none";
}

void cmd_area(const Context& c, const std::string& method) {
  const ConvexBody k = c.body();
  const CenteredEllipse e = c.ellipse();
  Json j(c.cfg.digits);
  if (method == "analytic") {
    j.num("intersection", intersection_area(k, e))
        .num("body_area", k.area())
        .num("ellipse_area", e.area())
        .num("symdiff", symdiff_distance(k, e));
  } else if (method == "mc") {
    const OracleEstimate m = mc_intersection_area(k, e, c.cfg.samples, c.cfg.seed);
    j.num("intersection", m.value).num("sigma", m.sigma).str("method", "mc");
    j.integer("seed", static_cast<long long>(m.seed)).integer("samples", static_cast<long long>(m.samples));
  } else if (method == "clip") {
    const OracleEstimate m = clip_area(polygon_of(k), polygon_of(e));
    j.num("intersection", m.value).num("sigma", 0.0).str("method", "clip");
  } else {
    throw Error(Errc::InvalidInput, "area supports --method analytic|mc|clip");
  }
  c.emit(j.dump() + '\n');
}

void cmd_crossings(const Context& c) {
  const CrossingSet cs = find_crossings(c.body(), c.ellipse());
  std::ostringstream s;
  s << "theta,xi,parity,alpha,slope,tangency\n";
  for (const Crossing& x : cs.crossings) {
    s << format_number(x.theta, c.cfg.digits) << ',' << format_number(x.xi, c.cfg.digits) << ','
      << parity_name(x.parity) << ',' << format_number(x.alpha, c.cfg.digits) << ','
      << format_number(x.slope, c.cfg.digits) << ',' << (x.tangency ? 1 : 0) << '\n';
  }
  if (cs.crossings.empty()) s << "# no crossings: " << containment_name(cs.containment) << '\n';
  c.emit(s.str());
}

void cmd_derivs(const Context& c, const std::string& method) {
  const ConvexBody k = c.body();
  if (method == "fd") {
    if (!c.cfg.ellipse.empty()) throw Error(Errc::InvalidInput, "fd derivatives are taken at the unit disk");
    c.emit(csv({"d1", "d2"}, {{fd_derivative(k, 1, 1e-4).value, fd_derivative(k, 2, 1e-3).value}},
               c.cfg.digits));
    return;
  }
  if (method != "analytic") throw Error(Errc::InvalidInput, "derivs supports --method analytic|fd");
  const CrossingSet cs = find_crossings(k, c.ellipse());
  const IntersectionProfile p = make_profile(cs);
  c.emit(csv({"d1", "d2", "bound", "D_abs"},
             {{deriv1(cs), deriv2(cs), deriv2_lower_bound(p), std::abs(p.D)}}, c.cfg.digits));
}

void cmd_profile(const Context& c) {
  const auto samples = intersection_profile(c.body(), c.cfg.t_min, c.cfg.t_max, c.cfg.steps);
  std::vector<std::vector<double>> rows;
  for (const ProfileSample& s : samples) rows.push_back({s.t, s.area});
  c.emit(csv({"t", "area"}, rows, c.cfg.digits));
}

void cmd_extremal(const Context& c, ExtremalKind kind) {
  const ConvexBody k = c.body();
  const ExtremalResult r = kind == ExtremalKind::John ? john_ellipse(k, c.cfg.tol) : loewner_ellipse(k, c.cfg.tol);
  Json j(c.cfg.digits);
  j.str("kind", kind == ExtremalKind::John ? "john" : "loewner")
      .raw("ellipse", c.e_json(r.ellipse))
      .num("optimality_gap", r.optimality_gap)
      .integer("iterations", r.iterations);
  c.emit(j.dump() + '\n');
}

void cmd_mi(const Context& c, const std::string& method) {
  const ConvexBody k = c.body();
  MIOptions opt;
  opt.tol = c.cfg.tol;
  const double lambda = c.lambda_for(k, opt);
  Json j(c.cfg.digits);
  if (method == "grid") {
    const GridSearchResult g = grid_search_mi(k, lambda, c.cfg.t_span, c.cfg.grid);
    j.num("lambda", lambda)
        .raw("ellipse", c.e_json(CenteredEllipse::from_params(g.t, g.phi, lambda)))
        .num("intersection", g.estimate.value)
        .num("a", g.a)
        .num("b", g.b)
        .num("refined_cell", g.refined_cell)
        .boolean("connected", g.connected)
        .str("method", "grid");
    c.emit(j.dump() + '\n');
    return;
  }
  if (method != "analytic") throw Error(Errc::InvalidInput, "mi supports --method analytic|grid");
  const MIResult r = mi_ellipse(k, lambda, opt);
  j.num("lambda", lambda)
      .raw("ellipse", c.e_json(r.ellipse))
      .num("intersection", r.intersection)
      .num("residual", r.residual)
      .integer("iterations", r.iterations)
      .boolean("converged", r.converged);
  c.emit(j.dump() + '\n');
}

void cmd_family(const Context& c) {
  const auto fam = mi_family(c.body(), c.cfg.steps, c.cfg.tol);
  std::vector<std::vector<double>> rows;
  for (const FamilyPoint& p : fam) {
    rows.push_back({p.lambda, p.result.ellipse.t(), p.result.ellipse.phi(), p.result.intersection,
                    p.result.residual});
  }
  c.emit(csv({"lambda", "t", "phi", "intersection", "residual"}, rows, c.cfg.digits));
}

std::string position_json(const PositionReport& r, int digits) {
  Json j(digits);
  std::vector<double> angles;
  for (const Crossing& x : r.crossings.crossings) angles.push_back(x.theta);
  j.boolean("is_mi", r.is_mi).num("residual", r.residual).nums("crossings", angles);
  if (r.quarter_turn_checked) {
    j.boolean("quarter_turn_invariant", r.quarter_turn_invariant)
        .num("quarter_turn_error", r.quarter_turn_error);
  }
  return j.dump();
}

void cmd_check_position(const Context& c, const ConvexBody& k) {
  c.emit(position_json(check_mi_position(k, std::max(c.cfg.tol, 1e-6)), c.cfg.digits) + '\n');
}

void cmd_isotropic(const Context& c) {
  const ConvexBody k = c.body();
  const PositionReport r = check_mi_position(k, std::max(c.cfg.tol, 1e-6));
  Json j(c.cfg.digits);
  j.boolean("is_mi", r.is_mi).num("residual", r.residual);
  const IsotropicMeasure m = isotropic_weights(r.crossings, std::max(c.cfg.tol, 1e-6));
  std::vector<double> angles;
  for (const Vec2& z : m.support) angles.push_back(wrap(std::atan2(z.y(), z.x()), kTwoPi));
  j.nums("weights", m.weights)
      .nums("support", angles)
      .num("balance_residual", m.balance_residual)
      .num("isotropy_residual", m.isotropy_residual);
  c.emit(j.dump() + '\n');
}

void cmd_plot(const Context& c, const ConvexBody& k, bool unit_circle) {
  MIOptions opt;
  opt.tol = c.cfg.tol;
  opt.john = john_ellipse(k);
  opt.loewner = loewner_ellipse(k);
  std::vector<SvgEllipse> layers;
  if (unit_circle) layers.push_back({CenteredEllipse(), "unit circle", "#888888"});
  layers.push_back({opt.john->ellipse, "John", "#1f77b4"});
  layers.push_back({opt.loewner->ellipse, "Loewner", "#d62728"});
  if (!unit_circle) {
    const double lambda = c.lambda_for(k, opt);
    layers.push_back({mi_ellipse(k, lambda, opt).ellipse, "MI", "#2ca02c"});
  }
  c.emit(svg_document(k, layers));
}

void cmd_fig1(const Context& c) {
  const ConvexBody k = *builtin_body("fig1");
  if (c.cfg.check_position) {
    cmd_check_position(c, k);
    return;
  }
  cmd_plot(c, k, true);
}

void cmd_oracle(const Context& c) {
  const std::string& target = c.cfg.oracle_target;
  const std::string& m = c.cfg.method;
  if (target == "area") return cmd_area(c, m == "analytic" ? "mc" : m);
  if (target == "derivs") return cmd_derivs(c, m == "analytic" ? "fd" : m);
  if (target == "mi") return cmd_mi(c, m == "analytic" ? "grid" : m);
  throw Error(Errc::InvalidInput, "oracle target must be area, derivs or mi");
}

std::string config_json(const RunConfig& cfg) {
  Json j(17);
  j.str("command", cfg.command)
      .str("oracle_target", cfg.oracle_target)
      .str("body", cfg.body)
      .str("ellipse", cfg.ellipse)
      .num("lambda", cfg.lambda)
      .integer("steps", cfg.steps)
      .num("tol", cfg.tol)
      .integer("seed", static_cast<long long>(cfg.seed))
      .str("out", cfg.out)
      .integer("digits", cfg.digits)
      .str("method", cfg.method)
      .integer("samples", static_cast<long long>(cfg.samples))
      .integer("grid", cfg.grid)
      .num("t_span", cfg.t_span)
      .num("t_min", cfg.t_min)
      .num("t_max", cfg.t_max)
      .boolean("check_position", cfg.check_position);
  return j.dump();
}

void dispatch(const RunConfig& cfg, std::ostream& out) {
  const Context c{cfg, out};
  const std::string& cmd = cfg.command;
  if (cmd == "area") return cmd_area(c, cfg.method);
  if (cmd == "crossings") return cmd_crossings(c);
  if (cmd == "derivs") return cmd_derivs(c, cfg.method);
  if (cmd == "profile") return cmd_profile(c);
  if (cmd == "john") return cmd_extremal(c, ExtremalKind::John);
  if (cmd == "loewner") return cmd_extremal(c, ExtremalKind::Loewner);
  if (cmd == "mi") return cmd_mi(c, cfg.method);
  if (cmd == "family") return cmd_family(c);
  if (cmd == "check-position") return cmd_check_position(c, c.body());
  if (cmd == "isotropic") return cmd_isotropic(c);
  if (cmd == "oracle") return cmd_oracle(c);
  if (cmd == "plot") return cmd_plot(c, c.body(), false);
  if (cmd == "fig1") return cmd_fig1(c);
  throw Error(Errc::InvalidInput, "unknown command '" + cmd + "'");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"Maximal-intersection, John and Loewner ellipses of symmetric convex bodies", "mi_ellipse"};
  app.set_help_all_flag("--help-all");
  app.add_flag("--show-config", cfg.show_config, "Print the resolved configuration and exit");
  app.require_subcommand(0, 1);

  for (const auto& [name, help] : kCommands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->fallthrough();
    if (name == "oracle") {
      sub->add_option("target", cfg.oracle_target, "area | derivs | mi")
          ->check(CLI::IsMember({"area", "derivs", "mi"}));
    }
    if (name == "fig1") sub->add_flag("--check-position", cfg.check_position, "Report MI position");
  }
  app.add_option("--body", cfg.body, "Built-in name or JSON body file")->capture_default_str();
  app.add_option("--ellipse", cfg.ellipse, "Ellipse JSON {t, phi, area} or {form}");
  app.add_option("--lambda", cfg.lambda, "Ellipse area; default mid-sandwich")->check(CLI::NonNegativeNumber);
  app.add_option("--steps", cfg.steps, "Family or profile samples")->check(CLI::Range(2, 100000))->capture_default_str();
  app.add_option("--tol", cfg.tol, "Solver tolerance")->check(CLI::PositiveNumber)->capture_default_str();
  app.add_option("--seed", cfg.seed, "Monte Carlo seed")->capture_default_str();
  app.add_option("--out", cfg.out, "Output file (stdout when absent)");
  app.add_option("--digits", cfg.digits, "Significant digits")->check(CLI::Range(1, 17))->capture_default_str();
  app.add_option("--method", cfg.method, "analytic | mc | clip | grid | fd")
      ->check(CLI::IsMember({"analytic", "mc", "clip", "grid", "fd"}))
      ->capture_default_str();
  app.add_option("--samples", cfg.samples, "Monte Carlo samples")->check(CLI::Range(10000.0, 1e10))->capture_default_str();
  app.add_option("--grid", cfg.grid, "Grid search resolution")->check(CLI::Range(21, 401))->capture_default_str();
  app.add_option("--t-span", cfg.t_span, "Grid search range of t")->check(CLI::PositiveNumber)->capture_default_str();
  app.add_option("--t-min", cfg.t_min, "Profile start")->capture_default_str();
  app.add_option("--t-max", cfg.t_max, "Profile end")->capture_default_str();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  }
  for (const CLI::App* sub : app.get_subcommands()) cfg.command = sub->get_name();
  if (cfg.show_config) {
    out << config_json(cfg) << '\n';
    return kOk;
  }
  if (cfg.command.empty()) {
    err << "error: a command is required (" << kCommands.size() << " available, see --help)\n";
    return kInputError;
  }
  if (cfg.t_max <= cfg.t_min) {
    err << "error: --t-max must exceed --t-min\n";
    return kInputError;
  }
  try {
    dispatch(cfg, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return is_input_error(e.code()) ? kInputError : kNumericalError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kNumericalError;
  }
  return kOk;
}

int run(int argc, char** argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args, std::cout, std::cerr);
}

}  // namespace mie::cli
