// nilflow command-line front end.
//
// Subcommands: check-params, build, eval, verify, holder, markov,
// obstruction, export-layout.  A JSON config file supplies defaults, flags
// override.  Exit codes: 0 pass, 1 verification failure, 2 usage/config
// error.  Reports embed the resolved configuration and the chart profile
// cache hash; the same config and seed produce byte-identical output.

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>

#include "nilflow/estimates.hpp"
#include "nilflow/group.hpp"
#include "nilflow/holder.hpp"
#include "nilflow/lattice.hpp"
#include "nilflow/markov.hpp"
#include "nilflow/obstruction.hpp"
#include "nilflow/params.hpp"
#include "nilflow/realization.hpp"

using namespace nilflow;
using ordered_json = nlohmann::ordered_json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerifyFail = 1;
constexpr int kExitUsage = 2;

struct RunConfig {
  double alpha = 0.4;
  double p = 0.0, q = 0.0, r = 0.0;  // 0 = unset
  bool auto_params = false;
  int N = 6;
  u64 seed = 0;
  std::string out = "-";
};

ParamSet resolve_params(const RunConfig& cfg) {
  if (cfg.auto_params) {
    if (!(cfg.alpha > 0.0 && cfg.alpha < 0.5))
      throw std::domain_error("auto mode requires alpha in (0, 1/2)");
    auto found = search_feasible(cfg.alpha);
    if (!found) throw std::domain_error("no feasible parameters found");
    return *found;
  }
  ParamSet ps{cfg.alpha, cfg.p, cfg.q, cfg.r};
  if (ps.p <= 0.0 || ps.q <= 0.0 || ps.r <= 0.0)
    throw std::domain_error("p, q, r must be positive reals (set them or pass --auto)");
  return ps;
}

ordered_json config_json(const RunConfig& cfg, const ParamSet& ps) {
  ordered_json j;
  j["alpha"] = ps.alpha;
  j["p"] = ps.p;
  j["q"] = ps.q;
  j["r"] = ps.r;
  j["auto"] = cfg.auto_params;
  j["N"] = cfg.N;
  j["seed"] = cfg.seed;
  return j;
}

void emit(const RunConfig& cfg, const std::string& text) {
  if (cfg.out == "-") {
    std::cout << text;
    if (text.empty() || text.back() != '\n') std::cout << '\n';
  } else {
    std::ofstream os(cfg.out);
    if (!os) throw std::runtime_error("cannot open output file: " + cfg.out);
    os << text;
    if (text.empty() || text.back() != '\n') os << '\n';
  }
}

void load_config_file(const std::string& path, RunConfig& cfg) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open config file: " + path);
  ordered_json j = ordered_json::parse(is);
  if (j.contains("alpha")) cfg.alpha = j["alpha"].get<double>();
  if (j.contains("p")) cfg.p = j["p"].get<double>();
  if (j.contains("q")) cfg.q = j["q"].get<double>();
  if (j.contains("r")) cfg.r = j["r"].get<double>();
  if (j.contains("auto")) cfg.auto_params = j["auto"].get<bool>();
  if (j.contains("N")) cfg.N = j["N"].get<int>();
  if (j.contains("seed")) cfg.seed = j["seed"].get<u64>();
  if (j.contains("out")) cfg.out = j["out"].get<std::string>();
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back(std::stod(tok));
  if (out.empty()) throw std::invalid_argument("empty list: " + text);
  return out;
}

LatticePoint parse_point(const std::string& text) {
  std::stringstream ss(text);
  std::string tok;
  std::vector<i64> v;
  while (std::getline(ss, tok, ',')) v.push_back(std::stoll(tok));
  if (v.size() != 3) throw std::invalid_argument("expected i,j,k: " + text);
  return {v[0], v[1], v[2]};
}

// -- subcommand bodies -------------------------------------------------------

int cmd_check_params(const RunConfig& cfg) {
  ParamSet ps;
  ConditionReport rep;
  try {
    ps = resolve_params(cfg);
    rep = check_conditions(ps);
  } catch (const std::domain_error& e) {
    // auto mode at infeasible alpha still reports the closed-form candidate
    if (cfg.auto_params && cfg.alpha > 0.0 && cfg.alpha < 1.0) {
      ps = ParamSet{cfg.alpha, 4.0 / cfg.alpha, 4.0 / cfg.alpha, 4.0 / 3.0};
      rep = check_conditions(ps);
    } else {
      throw;
    }
  }
  ordered_json j;
  j["config"] = config_json(cfg, ps);
  static const char* names[8] = {"i",  "ii",  "iii", "iv", "v", "vi", "vii", "viii"};
  ordered_json conds;
  for (int t = 0; t < 8; ++t) conds[names[t]] = rep.holds[std::size_t(t)];
  j["conditions"] = conds;
  j["feasible"] = rep.feasible;
  RunConfig out_cfg = cfg;
  emit(out_cfg, j.dump(2));
  return rep.feasible ? kExitOk : kExitVerifyFail;
}

int cmd_build(const RunConfig& cfg) {
  ParamSet ps = resolve_params(cfg);
  auto fam = std::make_shared<IntervalFamily>(ps, cfg.N);
  Realization real = build_action(fam);
  // touch every safe map once so the profile hash covers the family
  auto perm = real.induced_permutation_check();
  ordered_json j;
  j["config"] = config_json(cfg, ps);
  j["intervals"] = fam->count();
  j["total_raw_mass"] = fam->total_raw();
  j["normalization"] = fam->normalization();
  j["safe_index_maps"] = perm.checked;
  j["index_permutation_ok"] = perm.mismatches == 0;
  j["chart_profile_hash"] = real.profile().content_hash();
  emit(cfg, j.dump(2));
  return perm.mismatches == 0 ? kExitOk : kExitVerifyFail;
}

int cmd_eval(const RunConfig& cfg, const std::string& word_text, std::vector<double> xs,
             int grid) {
  ParamSet ps = resolve_params(cfg);
  auto fam = std::make_shared<IntervalFamily>(ps, cfg.N);
  Realization real = build_action(fam);
  RWord w = parse_rword(word_text);
  if (grid > 0) {
    xs.clear();
    for (int t = 1; t <= grid; ++t) xs.push_back(double(t) / (grid + 1));
  }
  if (xs.empty()) throw std::invalid_argument("eval: pass --x values or --grid");
  std::ostringstream os;
  os.precision(17);
  os << "x,gx,dgx\n";
  bool any_unsafe = false;
  for (double x : xs) {
    try {
      double gx = real.eval(w, x);
      double dgx = real.derivative(w, x);
      os << x << ',' << gx << ',' << dgx << '\n';
    } catch (const UnsafeWordError& e) {
      os << x << ",unsafe,unsafe\n";
      any_unsafe = true;
    }
  }
  emit(cfg, os.str());
  return any_unsafe ? kExitVerifyFail : kExitOk;
}

int cmd_verify(const RunConfig& cfg, const std::string& suite, const std::string& perturb) {
  ParamSet ps = resolve_params(cfg);
  ordered_json j;
  j["config"] = config_json(cfg, ps);
  bool all_ok = true;
  auto record = [&](const std::string& name, bool ok, const std::string& detail) {
    ordered_json entry;
    entry["pass"] = ok;
    entry["detail"] = detail;
    j["suites"][name] = entry;
    all_ok = all_ok && ok;
  };

  bool group_only = suite == "group-only";
  {
    SplitMix64 rng(cfg.seed ^ 0x9a0u);
    i64 bad = 0;
    for (int t = 0; t < 5000; ++t) {
      N4Element g;
      for (auto& e : g.n) e = rng.uniform_int(-50, 50);
      if (!(from_matrix(to_matrix(g)) == g)) ++bad;
      if (!(multiply(g, inverse(g)) == N4Element::identity())) ++bad;
      i64 n1 = rng.uniform_int(-20, 20), n2 = rng.uniform_int(-20, 20);
      if ((n1 || n2) && !embedding_identity_check(n1, n2, rng.uniform_int(-20, 20))) ++bad;
    }
    record("group_core", bad == 0, std::to_string(bad) + " violations in 5000 samples");
  }
  if (!group_only) {
    auto hom = check_homomorphism(20000, cfg.seed ^ 0x9a1u, Convention::Interval);
    auto ord = check_order_preservation(20000, cfg.seed ^ 0x9a2u, Convention::Interval);
    record("lattice_homomorphism", hom.ok() && ord.ok(),
           std::to_string(hom.violations) + "+" + std::to_string(ord.violations) + " violations");

    auto fam = std::make_shared<IntervalFamily>(ps, cfg.N);
    Realization real = build_action(fam);
    if (!perturb.empty()) {
      // test hook: "i,j,k,factor" scales one target length of the e-map
      auto comma = perturb.rfind(',');
      LatticePoint at = parse_point(perturb.substr(0, comma));
      double factor = std::stod(perturb.substr(comma + 1));
      real.inject_length_perturbation(Letter3::E, at, factor);
    }
    auto perm = real.induced_permutation_check();
    record("induced_permutation", perm.ok(),
           std::to_string(perm.checked) + " checked, " + std::to_string(perm.mismatches) +
               " mismatches");
    auto c1 = real.check_c1_matching();
    record("c1_matching", c1.max_abs_log_mismatch < 1e-9,
           "max log mismatch " + std::to_string(c1.max_abs_log_mismatch));

    // PT contract spot check
    ChartProfile& profile = real.profile();
    SplitMix64 rng(cfg.seed ^ 0x9a3u);
    double worst = 0.0;
    for (int t = 0; t < 200; ++t) {
      double lens[6];
      for (double& v : lens) v = std::exp(rng.uniform(std::log(0.05), 0.0));
      PtMap ij{lens[0], lens[1], lens[2], lens[3], 0.0, 0.0};
      PtMap jk{lens[2], lens[3], lens[4], lens[5], 0.0, 0.0};
      PtMap ik{lens[0], lens[1], lens[4], lens[5], 0.0, 0.0};
      double x = rng.uniform() * ij.len_i;
      worst = std::max(worst, std::fabs(pt_eval(profile, jk, pt_eval(profile, ij, x)) -
                                        pt_eval(profile, ik, x)));
    }
    record("pt_contract", worst < 1e-10, "equivariance residual " + std::to_string(worst));
    j["chart_profile_hash"] = profile.content_hash();
  }
  j["pass"] = all_ok;
  emit(cfg, j.dump(2));
  return all_ok ? kExitOk : kExitVerifyFail;
}

int cmd_holder(const RunConfig& cfg, const std::string& alpha_list, const std::string& n_list,
               const std::string& gen_name, const std::string& csv_path, bool text) {
  ParamSet ps = resolve_params(cfg);
  Letter3 gen = gen_name == "e" ? Letter3::E : gen_name == "d" ? Letter3::D : Letter3::F;
  if (gen_name != "e" && gen_name != "d" && gen_name != "f")
    throw std::invalid_argument("holder: --gen must be e, d or f");

  std::vector<double> alphas = parse_list(alpha_list);
  std::vector<double> ns = parse_list(n_list);

  std::ostringstream csv;
  csv.precision(17);
  csv << "N,alpha,generator,constant,argmax_x,argmax_y\n";
  ordered_json j;
  j["config"] = config_json(cfg, ps);
  ordered_json rows = ordered_json::array();
  u64 profile_hash = 0;
  for (double nd : ns) {
    int N = int(nd);
    auto fam = std::make_shared<IntervalFamily>(ps, N);
    Realization real = build_action(fam);
    for (double alpha : alphas) {
      HolderPlan plan;
      plan.seed = cfg.seed;
      auto rep = holder_constant(real, gen, alpha, plan);
      csv << N << ',' << alpha << ',' << gen_name << ',' << rep.c << ',' << rep.arg.a.x << ','
          << rep.arg.b.x << '\n';
      ordered_json row;
      row["N"] = N;
      row["alpha"] = alpha;
      row["generator"] = gen_name;
      row["constant"] = rep.c;
      row["samples"] = rep.pair_count;
      row["argmax_x"] = rep.arg.a.x;
      row["argmax_y"] = rep.arg.b.x;
      row["within_interval_c"] = rep.within.c;
      row["cross_interval_c"] = rep.cross.c;
      row["endpoint_c"] = rep.endpoints.c;
      ordered_json regimes = ordered_json::array();
      for (const auto& reg : rep.regimes) regimes.push_back(reg.c);
      row["regime_c"] = regimes;
      rows.push_back(row);
    }
    profile_hash = real.profile().content_hash();
  }
  j["rows"] = rows;
  j["chart_profile_hash"] = profile_hash;
  if (!csv_path.empty()) {
    std::ofstream os(csv_path);
    if (!os) throw std::runtime_error("cannot open csv file: " + csv_path);
    os << csv.str();
  }
  if (text) {
    std::ostringstream os;
    char line[160];
    std::snprintf(line, sizeof line, "%4s %6s %4s %12s %12s %12s %12s\n", "N", "alpha", "gen",
                  "constant", "within", "cross", "endpoints");
    os << line;
    for (const auto& row : rows) {
      std::snprintf(line, sizeof line, "%4d %6.2f %4s %12.5f %12.5f %12.5f %12.5f\n",
                    row["N"].get<int>(), row["alpha"].get<double>(),
                    row["generator"].get<std::string>().c_str(), row["constant"].get<double>(),
                    row["within_interval_c"].get<double>(), row["cross_interval_c"].get<double>(),
                    row["endpoint_c"].get<double>());
      os << line;
    }
    emit(cfg, os.str());
  } else {
    emit(cfg, j.dump(2));
  }
  return kExitOk;
}

int cmd_markov(const RunConfig& cfg, int d, i64 paths, const std::string& horizons_text,
               bool text) {
  ParamSet ps = resolve_params(cfg);
  std::vector<i64> horizons;
  for (double h : parse_list(horizons_text)) horizons.push_back(i64(h));
  std::vector<double> expo;
  if (d == 3) expo = {ps.p, ps.q, ps.r};
  else for (int t = 0; t < d; ++t) expo.push_back(ps.r);
  PowerSumLengths len(expo);
  auto res = markov_expectation(d, len, ps.alpha, paths, horizons, cfg.seed);

  ordered_json j;
  j["config"] = config_json(cfg, ps);
  j["d"] = d;
  j["paths"] = paths;
  ordered_json rows = ordered_json::array();
  for (std::size_t t = 0; t < res.horizons.size(); ++t) {
    ordered_json row;
    row["horizon"] = res.horizons[t];
    row["mean"] = res.means[t];
    row["std_error"] = res.std_errors[t];
    rows.push_back(row);
  }
  j["estimates"] = rows;
  j["final_delta_rel"] = res.final_delta_rel;
  // spot transition rows in exact rational form
  ordered_json trans = ordered_json::array();
  for (auto& state : std::vector<std::vector<i64>>{{0, 0, 0}, {1, 0, 0}}) {
    if (int(state.size()) != d) continue;
    ordered_json row;
    row["state"] = state;
    ordered_json probs = ordered_json::array();
    for (const auto& pr : markov_transition(state))
      probs.push_back(std::to_string(pr.num) + "/" + std::to_string(pr.den));
    row["probabilities"] = probs;
    trans.push_back(row);
  }
  j["transitions"] = trans;
  if (text) {
    std::ostringstream os;
    char line[120];
    std::snprintf(line, sizeof line, "%10s %16s %14s\n", "horizon", "mean", "std_error");
    os << line;
    for (std::size_t t = 0; t < res.horizons.size(); ++t) {
      std::snprintf(line, sizeof line, "%10lld %16.8f %14.2e\n",
                    static_cast<long long>(res.horizons[t]), res.means[t], res.std_errors[t]);
      os << line;
    }
    std::snprintf(line, sizeof line, "final relative delta: %.3e\n", res.final_delta_rel);
    os << line;
    emit(cfg, os.str());
  } else {
    emit(cfg, j.dump(2));
  }
  return kExitOk;
}

int cmd_obstruction(const RunConfig& cfg, const std::string& base_text, bool all_bases,
                    int radius, bool text) {
  ParamSet ps = resolve_params(cfg);
  auto fam = std::make_shared<IntervalFamily>(ps, cfg.N);
  Realization real = build_action(fam);

  ordered_json j;
  j["config"] = config_json(cfg, ps);
  bool ok = true;
  if (all_bases) {
    i64 passed = 0, rejected = 0, failed = 0;
    for (std::size_t f = 0; f < fam->count(); ++f) {
      auto cert = lemma_main_certificate(real, fam->unflatten(f));
      if (!cert) ++rejected;
      else if (cert->pass()) ++passed;
      else ++failed;
    }
    j["bases_passed"] = passed;
    j["bases_failed"] = failed;
    j["bases_outside_safe_domain"] = rejected;
    ok = failed == 0 && passed > 0;
  } else {
    LatticePoint base = parse_point(base_text);
    auto cert = lemma_main_certificate(real, base);
    if (!cert) {
      j["certificate"] = "base outside the safe domain";
      ok = false;
    } else {
      ordered_json cj;
      cj["base"] = to_string(cert->base);
      cj["x0"] = cert->x0;
      cj["j_c_nondegenerate"] = cert->j_c_nondegenerate;
      cj["d_moves_j_c"] = cert->d_moves_j_c;
      cj["e_moves_j_d"] = cert->e_moves_j_d;
      cj["triple_commutes"] = cert->triple_commutes;
      cj["pass"] = cert->pass();
      // orbit dump of J_c as index triples
      JInterval jc = j_interval(real, word_c(), fam->midpoint(base), 2 * cfg.N);
      ordered_json orbit = ordered_json::array();
      for (const auto& t : jc.orbit) orbit.push_back(to_string(t.index));
      cj["j_c_orbit"] = orbit;
      j["certificate"] = cj;
      ok = cert->pass();
    }
  }
  auto lex = lex_family_check(real, {0, 0, 0}, radius);
  ordered_json lj;
  lj["ok"] = lex.ok;
  lj["intervals"] = lex.intervals;
  lj["shift_checks"] = lex.shift_checks;
  lj["shift_skipped"] = lex.shift_skipped;
  if (!lex.failure.empty()) lj["failure"] = lex.failure;
  j["lex_family"] = lj;
  ok = ok && lex.ok;
  j["chart_profile_hash"] = real.profile().content_hash();
  j["pass"] = ok;
  if (text) {
    std::ostringstream os;
    if (all_bases)
      os << "bases: " << j["bases_passed"] << " pass, " << j["bases_failed"] << " fail, "
         << j["bases_outside_safe_domain"] << " outside the safe domain\n";
    else
      os << "certificate at " << base_text << ": " << (ok ? "pass" : "fail") << "\n";
    os << "lex family: " << lex.intervals << " cells, " << lex.shift_checks << " shift checks, "
       << lex.shift_skipped << " skipped, " << (lex.ok ? "ok" : "FAILED") << "\n";
    os << "overall: " << (ok ? "pass" : "FAIL") << "\n";
    emit(cfg, os.str());
  } else {
    emit(cfg, j.dump(2));
  }
  return ok ? kExitOk : kExitVerifyFail;
}

int cmd_export_layout(const RunConfig& cfg) {
  ParamSet ps = resolve_params(cfg);
  IntervalFamily fam(ps, cfg.N);
  std::ostringstream os;
  fam.export_csv(os);
  emit(cfg, os.str());
  return kExitOk;
}

// debug: dump one chart as (u, h(u), h'(u)) rows
int cmd_chart_table(const RunConfig& cfg, double lambda, int points) {
  if (points < 2) throw std::invalid_argument("chart-table: need at least 2 points");
  ChartProfile profile;
  auto cd = profile.chart(lambda);
  std::ostringstream os;
  os.precision(17);
  os << "u,h,hprime\n";
  for (int t = 1; t <= points; ++t) {
    double u = double(t) / (points + 1);
    os << u << ',' << chart_value(*cd, u) << ',' << chart_speed(cd->lam, u) << '\n';
  }
  emit(cfg, os.str());
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  RunConfig cfg;
  // the config file is applied before flags so flags win
  for (int a = 1; a + 1 < argc; ++a) {
    if (std::string(argv[a]) == "--config") {
      try {
        load_config_file(argv[a + 1], cfg);
      } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitUsage;
      }
    }
  }

  CLI::App app{"explicit nilpotent interval action: construction and verification lab"};
  app.require_subcommand(1);
  std::string config_path;
  app.add_option("--config", config_path, "JSON config file with defaults");

  auto add_common = [&](CLI::App* sub, bool with_n = true) {
    sub->add_option("--config", config_path, "JSON config file with defaults (already applied)");
    sub->add_option("--alpha", cfg.alpha, "Holder exponent target");
    sub->add_option("--p", cfg.p, "exponent p");
    sub->add_option("--q", cfg.q, "exponent q");
    sub->add_option("--r", cfg.r, "exponent r");
    sub->add_flag("--auto", cfg.auto_params, "derive p,q,r from alpha by feasibility search");
    if (with_n) sub->add_option("--N", cfg.N, "truncation radius of the index box");
    sub->add_option("--seed", cfg.seed, "RNG seed");
    sub->add_option("--out", cfg.out, "output path ('-' = stdout)");
  };

  auto* scp = app.add_subcommand("check-params", "evaluate feasibility conditions (i)-(viii)");
  add_common(scp, false);

  auto* sb = app.add_subcommand("build", "build the interval family and action tables");
  add_common(sb);

  std::string word_text = "e";
  std::vector<double> eval_xs;
  int eval_grid = 0;
  auto* se = app.add_subcommand("eval", "evaluate a word over e,d,f and its derivative");
  add_common(se);
  se->add_option("--word", word_text, "word over e,d,f with ^-exponents, e.g. \"e^2 f^-1\"");
  se->add_option("--x", eval_xs, "evaluation points in [0,1]");
  se->add_option("--grid", eval_grid, "use an equispaced grid of this many points");

  std::string suite = "all", perturb;
  auto* sv = app.add_subcommand("verify", "run the verification suites");
  add_common(sv);
  sv->add_option("--suite", suite, "all | group-only");
  sv->add_option("--inject-length-perturbation", perturb,
                 "test hook: i,j,k,factor applied to the e-map at that index");

  bool as_text = false;
  std::string alpha_list = "0.40", n_list = "6", gen_name = "f", csv_path;
  auto* sh = app.add_subcommand("holder", "empirical Holder constants of log Dg");
  add_common(sh);
  sh->add_flag("--text", as_text, "human-readable aligned output instead of JSON");
  sh->add_option("--alpha-list", alpha_list, "comma-separated Holder exponents");
  sh->add_option("--N-list", n_list, "comma-separated truncation radii");
  sh->add_option("--gen", gen_name, "generator: e, d or f");
  sh->add_option("--csv", csv_path, "also write a CSV sweep to this path");

  int markov_d = 3;
  i64 markov_paths = 10000;
  std::string horizons_text = "1000,10000,100000";
  auto* sm = app.add_subcommand("markov", "Monte Carlo estimate of the orbit-length series");
  add_common(sm, false);
  sm->add_flag("--text", as_text, "human-readable aligned output instead of JSON");
  sm->add_option("--d", markov_d, "dimension of the walk");
  sm->add_option("--paths", markov_paths, "number of sample paths");
  sm->add_option("--horizons", horizons_text, "comma-separated truncation horizons");

  std::string base_text = "0,0,0";
  bool all_bases = false;
  int radius = 2;
  auto* so = app.add_subcommand("obstruction", "commuting-triple certificate and lex family");
  add_common(so);
  so->add_flag("--text", as_text, "human-readable aligned output instead of JSON");
  so->add_option("--base", base_text, "base index i,j,k");
  so->add_flag("--all-bases", all_bases, "sweep every base index in the box");
  so->add_option("--radius", radius, "lex family radius");

  auto* sx = app.add_subcommand("export-layout", "write the interval layout as CSV");
  add_common(sx);

  double chart_lambda = 1.0;
  int chart_points = 63;
  auto* sc = app.add_subcommand("chart-table", "debug: dump (u, h(u), h'(u)) for one chart");
  sc->add_option("--lambda", chart_lambda, "chart parameter (left-neighbour/length ratio)");
  sc->add_option("--points", chart_points, "number of interior grid points");
  sc->add_option("--out", cfg.out, "output path ('-' = stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (scp->parsed()) return cmd_check_params(cfg);
    if (sb->parsed()) return cmd_build(cfg);
    if (se->parsed()) return cmd_eval(cfg, word_text, eval_xs, eval_grid);
    if (sv->parsed()) return cmd_verify(cfg, suite, perturb);
    if (sh->parsed()) return cmd_holder(cfg, alpha_list, n_list, gen_name, csv_path, as_text);
    if (sm->parsed()) return cmd_markov(cfg, markov_d, markov_paths, horizons_text, as_text);
    if (so->parsed()) return cmd_obstruction(cfg, base_text, all_bases, radius, as_text);
    if (sx->parsed()) return cmd_export_layout(cfg);
    if (sc->parsed()) return cmd_chart_table(cfg, chart_lambda, chart_points);
  } catch (const std::domain_error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitVerifyFail;
  }
  return kExitUsage;
}
