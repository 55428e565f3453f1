#include "cli.hpp"

#include <CLI11.hpp>
#include <chrono>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <random>
#include <sstream>

#include "hyperfermi/bounds.hpp"
#include "hyperfermi/cluster.hpp"
#include "hyperfermi/errors.hpp"
#include "hyperfermi/forests.hpp"
#include "hyperfermi/graph.hpp"
#include "hyperfermi/model.hpp"
#include "hyperfermi/singlesite.hpp"

namespace hyperfermi::cli {

namespace {

using json = nlohmann::json;

class Report {
 public:
  explicit Report(std::string command) { doc_["command"] = std::move(command); }

  json& inputs() { return doc_["inputs"]; }
  json& results() { return doc_["results"]; }

  void check(std::string name, bool pass, json lhs, json rhs, json tolerance = "0") {
    all_pass_ = all_pass_ && pass;
    checks_.push_back({{"name", std::move(name)},
                       {"status", pass ? "pass" : "fail"},
                       {"lhs", std::move(lhs)},
                       {"rhs", std::move(rhs)},
                       {"tolerance", std::move(tolerance)}});
  }

  bool all_pass() const { return all_pass_; }

  json finish(std::optional<double> seconds) {
    json out = doc_;
    if (!out.contains("inputs")) out["inputs"] = json::object();
    if (!out.contains("results")) out["results"] = json::object();
    out["checks"] = checks_;
    json summary = {{"total", checks_.size()}, {"passed", 0}};
    std::size_t passed = 0;
    for (const auto& c : checks_) passed += c["status"] == "pass";
    summary["passed"] = passed;
    out["results"]["summary"] = summary;
    if (seconds) out["timing"] = {{"seconds", *seconds}};
    return out;
  }

 private:
  json doc_;
  json checks_ = json::array();
  bool all_pass_ = true;
};

std::string str(const Rational& r) { return to_string(r); }

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

WeightedGraph load_graph(const RunConfig& c) {
  if (!c.graph_path.empty() && !c.lattice.empty()) throw UsageError("give either --graph or --lattice, not both");
  if (!c.graph_path.empty()) return graph_from_json(read_file(c.graph_path));
  if (!c.lattice.empty()) return parse_lattice_spec(c.lattice);
  throw UsageError("this command needs --graph or --lattice");
}

// --eps overrides the vertex fields of the graph only when given explicitly
void apply_eps(WeightedGraph& g, const RunConfig& c) {
  if (!c.eps.empty()) g.set_uniform_eps(parse_rational(c.eps));
}

json graph_json(const WeightedGraph& g) { return json::parse(graph_to_json(g)); }

Rational random_rational(std::mt19937_64& rng, long num_lo, long num_hi, long den_lo, long den_hi) {
  std::uniform_int_distribution<long> num(num_lo, num_hi), den(den_lo, den_hi);
  const long n = num(rng);
  Rational r(n, den(rng));
  r.canonicalize();
  return r;
}

CoefficientMode mode_of(const RunConfig& c) {
  if (c.mode == "exact") return CoefficientMode::exact;
  if (c.mode == "float") return CoefficientMode::float64;
  throw UsageError("mode must be exact or float");
}

void verify_single_site(const RunConfig& c, Report& rep) {
  std::vector<Rational> eps_values;
  for (const auto& e : c.eps_list) eps_values.push_back(parse_rational(e));
  rep.inputs() = {{"m_max", c.m_max}, {"r_m_max", c.r_m_max}, {"one_point_m_max", c.one_point_m_max},
                  {"eps", c.eps_list}};
  for (int m = 1; m <= c.m_max; ++m) {
    for (const Rational& eps : eps_values) {
      const Rational closed = single_site_Z({m, eps});
      const Rational engine = single_site_Z_engine({m, eps});
      rep.check("single_site_Z[m=" + std::to_string(m) + ",eps=" + str(eps) + "]", closed == engine, str(closed),
                str(engine));
    }
    const Rational am = abs(coeff_a(m, 0));
    const Rational anchor = Rational(binomial(2 * m, m)) / pow(Rational(4), m);
    rep.check("a_m0_anchor[m=" + std::to_string(m) + "]", am == anchor, str(am), str(anchor));

    auto alg = make_algebra(1, m, false, CoefficientMode::exact);
    const auto x = symmetric_product<Rational>(alg, 0, 0);
    auto p = ExactElement::constant(alg, 1);
    for (int k = 0; k <= m; ++k) {
      const Rational engine = l1_norm(p);
      const Rational formula(norm_psi_pow(k, m));
      rep.check("psi_pow_norm[k=" + std::to_string(k) + ",m=" + std::to_string(m) + "]", engine == formula,
                str(engine), str(formula));
      p = p * x;
    }
    const auto z = series_apply<Rational>(binomial_series(Rational(1, 2), m), x);
    const Rational z2 = l1_norm(z * z);
    rep.check("z_squared_norm[m=" + std::to_string(m) + "]", z2 == 1 + 2 * m, str(z2), std::to_string(1 + 2 * m));
  }
  const Rational z01 = single_site_Z({1, 0});
  rep.check("single_site_Z_anchor[eps=0,m=1]", z01 == 1, str(z01), "1");

  for (int m = 0; m <= c.r_m_max; ++m) {
    // sum_{j <= m} 2^j / j! is a rational lower bound for e^2
    const Rational e2_low = exp_lower_bound(2, m + 1);
    for (int l = 0; l <= m; ++l) {
      const Rational r = ratio_R(l, m);
      rep.check("R_bound[l=" + std::to_string(l) + ",m=" + std::to_string(m) + "]", r <= e2_low, str(r),
                str(e2_low));
    }
  }
  for (int m = 1; m <= c.one_point_m_max; ++m) {
    for (const Rational& eps : eps_values) {
      const auto [plain, inv] = one_point_norm_ratios({m, eps});
      const std::string tag = "[m=" + std::to_string(m) + ",eps=" + str(eps) + "]";
      rep.check("one_point_ratio" + tag, plain <= kOnePointThreshold, str(plain), kOnePointThreshold);
      rep.check("one_point_ratio_inverse_z" + tag, inv <= kOnePointThreshold, str(inv), kOnePointThreshold);
    }
  }
}

void verify_polymer(const RunConfig& c, Report& rep) {
  const WeightedGraph base = load_graph(c);
  rep.inputs() = {{"graph", graph_json(base)}, {"m", c.m}, {"trials", c.trials}, {"seed", c.seed}};
  std::mt19937_64 rng(c.seed);
  json trials = json::array();
  for (int t = 0; t < c.trials; ++t) {
    const Rational beta = random_rational(rng, 1, 12, 2, 40);
    const Rational eps = random_rational(rng, 0, 8, 1, 4);
    WeightedGraph g = base;
    g.set_uniform_eps(eps);
    PolymerSystem<Rational> sys(Model<Rational>(g, beta, c.m));
    const auto res = polymer_identity_check(sys);
    trials.push_back({{"beta", str(beta)}, {"eps", str(eps)}});
    rep.check("polymer_identity[" + std::to_string(t) + "]", res.equal, str(res.lhs), str(res.rhs));
  }
  rep.results()["trials"] = trials;
}

void verify_arboreal(const RunConfig& c, Report& rep) {
  const WeightedGraph base = load_graph(c);
  rep.inputs() = {{"graph", graph_json(base)}, {"trials", c.trials}, {"seed", c.seed}};
  std::mt19937_64 rng(c.seed);
  json trials = json::array();
  for (int t = 0; t < c.trials; ++t) {
    const Rational beta = random_rational(rng, 1, 12, 1, 12);
    WeightedGraph g = base.scaled(beta);
    json eps = json::array();
    for (int v = 0; v < g.num_vertices(); ++v) {
      const Rational e = random_rational(rng, 0, 6, 1, 4);
      g.set_eps(v, e);
      eps.push_back(str(e));
    }
    const Rational arb = arboreal_Z(g);
    const Rational h02 = h02_partition(g);
    rep.check("duality[" + std::to_string(t) + "]", arb == h02, str(h02), str(arb));
    trials.push_back({{"beta", str(beta)}, {"eps", eps}, {"Z", str(arb)}});
  }
  rep.results()["trials"] = trials;
}

void verify_norms(const RunConfig& c, Report& rep) {
  WeightedGraph g = load_graph(c);
  apply_eps(g, c);
  const Rational beta = parse_rational(c.beta);
  rep.inputs() = {{"graph", graph_json(g)}, {"beta", str(beta)}, {"m", c.m}};
  const NormReport nr = verify_norm_estimates(g, beta, c.m);
  rep.results()["C"] = str(nr.C);
  for (const auto& ch : nr.checks) {
    rep.check(ch.name + "[" + std::to_string(ch.u) + "-" + std::to_string(ch.v) + ",s=" + str(ch.s) + "]", ch.pass,
              str(ch.lhs), str(ch.rhs));
  }
}

void two_point(const RunConfig& c, Report& rep) {
  WeightedGraph g = load_graph(c);
  apply_eps(g, c);
  const Rational beta = parse_rational(c.beta);
  rep.inputs() = {{"graph", graph_json(g)}, {"beta", str(beta)}, {"m", c.m}, {"i", c.i}, {"j", c.j},
                  {"mode", c.mode}};
  if (c.i < 0 || c.j < 0 || c.i >= g.num_vertices() || c.j >= g.num_vertices()) {
    throw UsageError("--i/--j out of range");
  }
  if (mode_of(c) == CoefficientMode::exact) {
    const Rational v = Model<Rational>(g, beta, c.m).two_point(c.i, c.j, 1);
    rep.results()["value"] = str(v);
    rep.results()["value_float"] = to_double(v);
  } else {
    rep.results()["value"] = Model<double>(g, beta, c.m).two_point(c.i, c.j, 1);
  }
}

json bound_json(const DecayBoundReport& r) {
  return {{"inputs",
           {{"beta", r.beta},
            {"m", r.m},
            {"d", r.d},
            {"class", to_string(r.kind)},
            {"metric", to_string(r.metric)},
            {"a", r.a},
            {"dist", r.dist}}},
          {"A_value", r.A_value},
          {"B_value", r.B_value},
          {"bound", r.convergent ? json(r.bound) : json("inf")},
          {"convergent", r.convergent},
          {"truncation_tail", r.convergent ? json(r.truncation_tail) : json("inf")},
          {"scaling", r.scaling},
          {"lattice_factor", r.lattice_factor},
          {"convolution_constant", r.convolution},
          {"constants_used", {{"C", r.C}, {"C_activity", r.C_activity}, {"C0", r.C0}}}};
}

void bound(const RunConfig& c, Report& rep) {
  const double beta = to_double(parse_rational(c.beta));
  const InteractionKind kind = parse_interaction(c.interaction);
  DecayBoundReport r;
  switch (kind) {
    case InteractionKind::nearest_neighbour:
      if (c.dist != std::floor(c.dist)) throw UsageError("nearest-neighbour distance must be an integer");
      r = nn_decay_bound(beta, c.m, c.d, static_cast<int>(c.dist), c.C, c.C_activity);
      break;
    case InteractionKind::exponential:
      r = exp_decay_bound(beta, c.m, c.a, parse_metric(c.metric), c.dist, c.d, c.C, c.C_activity);
      break;
    case InteractionKind::polynomial:
      r = poly_decay_bound(beta, c.m, c.a, c.d, c.dist, c.C, c.C_activity);
      break;
  }
  json j = bound_json(r);
  rep.inputs() = j["inputs"];
  j.erase("inputs");
  rep.results() = j;
}

struct ConstantsRow {
  int m;
  Rational beta;
  Rational eps;
  ActivityBoundReport report;
};

std::vector<ConstantsRow> constants_rows(const RunConfig& c, const WeightedGraph& base) {
  std::vector<Rational> betas;
  for (const auto& b : c.beta_list.empty() ? std::vector<std::string>{c.beta} : c.beta_list) {
    betas.push_back(parse_rational(b));
  }
  const std::vector<int> ms = c.m_list.empty() ? std::vector<int>{c.m} : c.m_list;
  std::vector<Rational> epss;
  for (const auto& e : c.eps_list) epss.push_back(parse_rational(e));
  const int y_max = c.y_max > 0 ? c.y_max : base.num_vertices();
  std::vector<ConstantsRow> rows;
  for (int m : ms) {
    for (const Rational& beta : betas) {
      for (const Rational& eps : epss) {
        WeightedGraph g = base;
        g.set_uniform_eps(eps);
        rows.push_back({m, beta, eps, activity_bound_check(g, {beta, m, mode_of(c)}, y_max, c.C)});
      }
    }
  }
  return rows;
}

void constants_json(const RunConfig& c, Report& rep) {
  const WeightedGraph base = load_graph(c);
  rep.inputs() = {{"graph", graph_json(base)}, {"y_max", c.y_max}, {"C_probe", c.C}};
  json table = json::array();
  for (const auto& row : constants_rows(c, base)) {
    table.push_back({{"m", row.m},
                     {"beta", str(row.beta)},
                     {"eps", str(row.eps)},
                     {"polymers", row.report.polymers_checked},
                     {"C_emp_K", row.report.C_emp_K},
                     {"C_emp_two_point", row.report.C_emp_two_point},
                     {"C_emp", row.report.C_emp}});
    rep.check("activity_bound[m=" + std::to_string(row.m) + ",beta=" + str(row.beta) + ",eps=" + str(row.eps) + "]",
              row.report.pass, row.report.C_emp, c.C);
  }
  rep.results()["constants"] = table;
}

int constants_csv(const RunConfig& c, std::ostream& out) {
  const WeightedGraph base = load_graph(c);
  out << "m,beta,eps,polymers,C_emp_K,C_emp_two_point,C_emp,counterexamples\n";
  bool pass = true;
  std::ostringstream row_out;
  row_out.precision(17);
  for (const auto& row : constants_rows(c, base)) {
    row_out << row.m << ',' << str(row.beta) << ',' << str(row.eps) << ',' << row.report.polymers_checked << ','
            << row.report.C_emp_K << ',' << row.report.C_emp_two_point << ',' << row.report.C_emp << ','
            << row.report.counterexamples.size() << '\n';
    pass = pass && row.report.pass;
  }
  out << row_out.str();
  return pass ? kOk : kCheckFailed;
}

void write_output(const RunConfig& c, const std::string& text, std::ostream& out) {
  if (c.out.empty()) {
    out << text;
    return;
  }
  std::ofstream f(c.out);
  if (!f) throw std::invalid_argument("cannot write '" + c.out + "'");
  f << text;
}

}  // namespace

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    const auto start = std::chrono::steady_clock::now();
    if (config.command == "constants" && config.extract) {
      std::ostringstream csv;
      const int code = constants_csv(config, csv);
      write_output(config, csv.str(), out);
      return code;
    }
    Report rep(config.command);
    if (config.command == "verify-single-site") {
      verify_single_site(config, rep);
    } else if (config.command == "verify-polymer") {
      verify_polymer(config, rep);
    } else if (config.command == "verify-arboreal") {
      verify_arboreal(config, rep);
    } else if (config.command == "verify-norms") {
      verify_norms(config, rep);
    } else if (config.command == "two-point") {
      two_point(config, rep);
    } else if (config.command == "bound") {
      bound(config, rep);
    } else if (config.command == "constants") {
      constants_json(config, rep);
    } else {
      throw UsageError("unknown command '" + config.command + "'");
    }
    std::optional<double> seconds;
    if (config.timing) {
      seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
    write_output(config, rep.finish(seconds).dump(2) + "\n", out);
    return rep.all_pass() ? kOk : kCheckFailed;
  } catch (const CapacityError& e) {
    err << "capacity error: " << e.what() << "\n";
    return kCapacityError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kConfigError;
  }
}

int run_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact and certified computations for the H^{0|2m} fermionic model"};
  app.require_subcommand(1);
  RunConfig c;
  c.eps.clear();
  std::vector<std::string> eps_list;

  auto graph_opts = [&](CLI::App* s) {
    s->add_option("--graph", c.graph_path, "graph JSON file");
    s->add_option("--lattice", c.lattice, "lattice shorthand, 1d:L or 2d:LxW");
  };
  auto model_opts = [&](CLI::App* s) {
    s->add_option("--beta", c.beta, "inverse temperature (rational string)");
    s->add_option("--eps", c.eps, "uniform vertex field (rational string)");
    s->add_option("--m", c.m, "number of fermion colours")->check(CLI::Range(1, 64));
  };
  auto common = [&](CLI::App* s) {
    s->add_option("--out", c.out, "write the report here instead of stdout");
    s->add_flag("--timing", c.timing, "add wall-clock timing to the report");
  };

  auto* single = app.add_subcommand("verify-single-site", "single-site closed forms and norm identities");
  single->add_option("--m-max", c.m_max, "largest m for closed-form checks");
  single->add_option("--r-m-max", c.r_m_max, "largest m for the R_l bound");
  single->add_option("--one-point-m-max", c.one_point_m_max, "largest m for the one-point ratios");
  single->add_option("--eps-list", eps_list, "eps grid");
  common(single);

  auto* polymer = app.add_subcommand("verify-polymer", "polymer expansion identity on random (beta, eps)");
  graph_opts(polymer);
  polymer->add_option("--m", c.m, "number of fermion colours")->check(CLI::Range(1, 64));
  polymer->add_option("--trials", c.trials);
  polymer->add_option("--seed", c.seed);
  common(polymer);

  auto* arboreal = app.add_subcommand("verify-arboreal", "fermion / arboreal gas duality on random weights");
  graph_opts(arboreal);
  arboreal->add_option("--trials", c.trials);
  arboreal->add_option("--seed", c.seed);
  common(arboreal);

  auto* norms = app.add_subcommand("verify-norms", "edge norm estimates");
  graph_opts(norms);
  model_opts(norms);
  common(norms);

  auto* tp = app.add_subcommand("two-point", "exact two-point function <psibar_i psi_j>");
  graph_opts(tp);
  model_opts(tp);
  tp->add_option("--i", c.i)->required();
  tp->add_option("--j", c.j)->required();
  tp->add_option("--mode", c.mode)->check(CLI::IsMember({"exact", "float"}));
  common(tp);

  auto* bd = app.add_subcommand("bound", "decay certificate for an interaction class");
  bd->add_option("--class", c.interaction)->check(CLI::IsMember({"nn", "exp", "poly"}));
  bd->add_option("--beta", c.beta);
  bd->add_option("--m", c.m)->check(CLI::Range(1, 1 << 20));
  bd->add_option("--d", c.d)->check(CLI::Range(1, 16));
  bd->add_option("--dist", c.dist);
  bd->add_option("--a", c.a, "decay rate or exponent");
  bd->add_option("--metric", c.metric)->check(CLI::IsMember({"euclidean", "log"}));
  bd->add_option("--C", c.C, "Mayer weight per vertex");
  bd->add_option("--C-activity", c.C_activity, "activity constant per vertex");
  common(bd);

  std::vector<std::string> beta_list;
  auto* consts = app.add_subcommand("constants", "empirical activity constants");
  graph_opts(consts);
  consts->add_option("--beta", beta_list, "beta grid")->delimiter(',');
  consts->add_option("--m", c.m_list, "m grid")->delimiter(',');
  consts->add_option("--eps", eps_list, "eps grid")->delimiter(',');
  consts->add_option("--y-max", c.y_max, "largest polymer size (default: all)");
  consts->add_option("--C", c.C, "probe constant");
  consts->add_option("--mode", c.mode)->check(CLI::IsMember({"exact", "float"}));
  consts->add_flag("--extract", c.extract, "emit CSV");
  common(consts);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kConfigError;
  }
  c.command = app.get_subcommands().front()->get_name();
  if (!beta_list.empty()) c.beta_list = beta_list;
  if (!eps_list.empty()) {
    c.eps_list = eps_list;
  } else if (c.command == "constants") {
    c.eps_list = {"0"};
  }
  return run(c, out, err);
}

}  // namespace hyperfermi::cli
