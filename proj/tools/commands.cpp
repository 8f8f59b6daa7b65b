#include "commands.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>

#include "qsep/bloch.hpp"
#include "qsep/oracles.hpp"
#include "qsep/suite.hpp"

namespace qsep::cli {

namespace {

constexpr int kWvalCap = 200000;

struct Globals {
  std::string config;
  std::string out;
  std::string format = "json";
  std::uint64_t seed = 7;
  int jobs = 1;
  int max_dim = kMaxDim;
};

std::vector<int> parse_dims(const std::string& s) {
  std::vector<int> dims;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      size_t used = 0;
      const int d = std::stoi(tok, &used);
      require(used == tok.size() && d >= 1, ErrorKind::InvalidInput, "");
      dims.push_back(d);
    } catch (...) {
      fail(ErrorKind::InvalidInput, "bad dimension list '" + s + "'");
    }
  }
  require(!dims.empty(), ErrorKind::InvalidInput, "empty dimension list");
  return dims;
}

void flatten(const json& j, const std::string& prefix, std::vector<std::pair<std::string, std::string>>& cols) {
  if (j.is_object()) {
    for (auto it = j.begin(); it != j.end(); ++it)
      flatten(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key(), cols);
  } else if (j.is_array()) {
    for (size_t i = 0; i < j.size(); ++i) flatten(j[i], prefix + "." + std::to_string(i), cols);
  } else if (j.is_number_float()) {
    cols.emplace_back(prefix, format_double(j.get<double>()));
  } else if (j.is_null()) {
    cols.emplace_back(prefix, "");
  } else if (j.is_string()) {
    cols.emplace_back(prefix, j.get<std::string>());
  } else {
    cols.emplace_back(prefix, j.dump());
  }
}

std::string to_csv(const json& j) {
  std::ostringstream os;
  auto write_row = [&](const std::vector<std::pair<std::string, std::string>>& cols, bool header) {
    for (size_t i = 0; i < cols.size(); ++i) os << (i ? "," : "") << (header ? cols[i].first : cols[i].second);
    os << "\n";
  };
  if (j.contains("suites") && j["suites"].is_object()) {
    bool first = true;
    for (auto it = j["suites"].begin(); it != j["suites"].end(); ++it) {
      std::vector<std::pair<std::string, std::string>> cols{{"suite", it.key()}};
      flatten(it.value(), "", cols);
      if (first) write_row(cols, true);
      write_row(cols, false);
      first = false;
    }
    return os.str();
  }
  std::vector<std::pair<std::string, std::string>> cols;
  flatten(j, "", cols);
  write_row(cols, true);
  write_row(cols, false);
  return os.str();
}

void emit(const json& j, const Globals& g, std::ostream& out) {
  const std::string text = g.format == "csv" ? to_csv(j) : dump_json(j);
  if (g.out.empty()) {
    out << text;
    return;
  }
  std::ofstream f(g.out, std::ios::binary);
  if (!f) fail(ErrorKind::InvalidInput, "cannot write '" + g.out + "'");
  f << text;
}

json halfspace_to_json(const Halfspace& h) {
  json a = json::array();
  for (Eigen::Index i = 0; i < h.a.size(); ++i) a.push_back(h.a(i));
  return {{"a", a}, {"b", h.b}};
}

void check_cap(const RegisterLayout& l, const Globals& g) {
  require(l.total_dim() <= g.max_dim, ErrorKind::DimensionCap,
          "state dimension " + std::to_string(l.total_dim()) + " exceeds the configured cap " +
              std::to_string(g.max_dim));
}

BlochVector read_bloch_or_state(const std::string& path) {
  const JsonDoc doc = read_json_file(path);
  if (doc.value.contains("coords")) return bloch_from_json(doc);
  return encode(load_state(doc).density);
}

// Fills options that were not given on the command line from the config object.
void apply_config(CLI::App* app, const json& cfg) {
  for (CLI::Option* opt : app->get_options()) {
    const std::string key = opt->get_lnames().empty() ? "" : opt->get_lnames().front();
    if (key.empty() || key == "help" || key == "config" || opt->count() > 0 || !cfg.contains(key)) continue;
    const json& v = cfg[key];
    if (v.is_array()) {
      for (const auto& e : v) opt->add_result(e.is_string() ? e.get<std::string>() : e.dump());
    } else {
      opt->add_result(v.is_string() ? v.get<std::string>() : v.dump());
    }
    opt->run_callback();
  }
}

}  // namespace

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Separability, convex-oracle and protocol toolkit"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Show help for all subcommands");

  Globals g;
  if (const char* env = std::getenv("QSEP_SEED")) {
    try {
      g.seed = std::stoull(env);
    } catch (...) {
      err << "error: QSEP_SEED must be an unsigned integer\n";
      return 1;
    }
  }
  app.add_option("--config", g.config, "JSON config file (flags take precedence)");
  app.add_option("--out", g.out, "Write the result to this file");
  app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--jobs", g.jobs, "Worker threads for independent trials")->check(CLI::Range(1, 256));

  // bloch
  auto* bloch = app.add_subcommand("bloch", "Bloch-vector encoding");
  bloch->require_subcommand(1);
  std::string bloch_in, bloch_dims;
  auto* enc = bloch->add_subcommand("encode", "State JSON to Bloch vector");
  enc->add_option("--input", bloch_in, "State JSON")->required();
  auto* dec = bloch->add_subcommand("decode", "Bloch vector to matrix");
  dec->add_option("--input", bloch_in, "Bloch JSON")->required();
  dec->add_option("--dims", bloch_dims, "Register dims, e.g. 2,2");

  // septest
  auto* sep = app.add_subcommand("septest", "Separability test");
  std::string sep_in, sep_cut = "B:C";
  int sep_level = 2, sep_iters = kExtensionCap;
  double sep_tol = 1e-6;
  bool sep_ppt = true;
  sep->add_option("--input", sep_in, "State JSON")->required();
  sep->add_option("--cut", sep_cut, "Bipartition, e.g. B:C");
  sep->add_option("--level", sep_level, "Highest extension level")->check(CLI::Range(1, 4));
  sep->add_option("--tol", sep_tol, "Feasibility slack")->check(CLI::PositiveNumber);
  sep->add_flag("--ppt,!--no-ppt", sep_ppt, "Add PPT constraints (default on)");
  sep->add_option("--max-iter", sep_iters, "Extension iteration cap")->check(CLI::Range(1, kExtensionCap));

  // wmem
  auto* wm = app.add_subcommand("wmem", "Weak membership query");
  std::string wm_in, wm_body = "wis", wm_layout = "2,2,2";
  double wm_beta = 1e-3;
  wm->add_option("--input", wm_in, "Bloch or state JSON")->required();
  wm->add_option("--body", wm_body, "Convex body")->check(CLI::IsMember({"k1", "k2", "wis"}));
  wm->add_option("--layout", wm_layout, "A,B,C register dims");
  wm->add_option("--beta", wm_beta, "Membership slack")->check(CLI::PositiveNumber);

  // wval
  auto* wv = app.add_subcommand("wval", "Weak validity via the ellipsoid method");
  std::string wv_v, wv_layout = "2,2,2";
  double wv_delta = 0.1, wv_sound = 0.4;
  int wv_iters = kWvalCap;
  wv->add_option("--verifier", wv_v, "Verifier operator JSON")->required();
  wv->add_option("--layout", wv_layout, "A,B,C register dims");
  wv->add_option("--delta", wv_delta, "Completeness-soundness gap")->check(CLI::PositiveNumber);
  wv->add_option("--soundness", wv_sound, "Soundness threshold");
  wv->add_option("--max-iter", wv_iters, "Ellipsoid iteration cap")->check(CLI::Range(1, kWvalCap));

  // protocol
  auto* proto = app.add_subcommand("protocol", "Protocol simulation");
  proto->require_subcommand(1);
  auto* prun = proto->add_subcommand("run", "Exact acceptance probabilities");
  std::string p_csp, p_proof, p_sched;
  prun->add_option("--csp", p_csp, "CSP JSON")->required();
  prun->add_option("--proof", p_proof, "Proof JSON")->required();
  prun->add_option("--schedule", p_sched, "Schedule JSON")->required();

  // lemmas
  auto* lem = app.add_subcommand("lemmas", "Lemma certification");
  lem->require_subcommand(1);
  auto* lver = lem->add_subcommand("verify", "Run lemma suites");
  std::vector<std::string> l_suites{"all"};
  int l_trials = 500;
  std::uint64_t l_seed = 0;
  lver->add_option("--suite", l_suites, "Suite names or 'all'")->delimiter(',');
  lver->add_option("--trials", l_trials, "Trials per suite")->check(CLI::Range(1, 1000000));
  auto* seed_opt = lver->add_option("--seed", l_seed, "Master seed (default QSEP_SEED or 7)");

  // schedule
  auto* sch = app.add_subcommand("schedule", "Protocol probability schedule");
  int s_kappa = 2;
  double s_cyes = 0.9, s_xi = 0.1;
  sch->add_option("--kappa", s_kappa, "Alphabet size")->check(CLI::Range(2, 1 << 20));
  sch->add_option("--cyes", s_cyes, "Completeness of the constraint test");
  sch->add_option("--xi", s_xi, "Soundness gap of the constraint test");

  for (CLI::App* sub : {bloch, enc, dec, sep, wm, wv, proto, prun, lem, lver, sch}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return 1;
  }

  try {
    std::map<std::string, double> tolerances;
    if (!g.config.empty()) {
      const JsonDoc doc = read_json_file(g.config);
      const json& cfg = doc.value;
      if (cfg.contains("tolerances")) {
        for (auto it = cfg["tolerances"].begin(); it != cfg["tolerances"].end(); ++it) {
          if (it.key() != "septest" && it.key() != "wmem") doc.error_at(it.key(), "unknown tolerance '" + it.key() + "'");
          if (!it.value().is_number() || it.value().get<double>() <= 0)
            doc.error_at(it.key(), "tolerances must be positive numbers");
          tolerances[it.key()] = it.value().get<double>();
        }
      }
      if (cfg.contains("caps")) {
        const json& caps = cfg["caps"];
        for (auto it = caps.begin(); it != caps.end(); ++it) {
          if (!it.value().is_number_integer() || it.value().get<long long>() < 1)
            doc.error_at(it.key(), "caps must be positive integers");
          const long long v = it.value().get<long long>();
          if (it.key() == "max_dim") {
            if (v > kMaxDim) doc.error_at(it.key(), "max_dim exceeds the hard limit " + std::to_string(kMaxDim));
            g.max_dim = static_cast<int>(v);
          } else if (it.key() == "extension_iterations") {
            if (v > kExtensionCap) doc.error_at(it.key(), "extension_iterations exceeds the hard limit");
            if (sep->get_option("--max-iter")->count() == 0) sep_iters = static_cast<int>(v);
          } else if (it.key() == "wval_iterations") {
            if (v > kWvalCap) doc.error_at(it.key(), "wval_iterations exceeds the hard limit");
            if (wv->get_option("--max-iter")->count() == 0) wv_iters = static_cast<int>(v);
          } else {
            doc.error_at(it.key(), "unknown cap '" + it.key() + "'");
          }
        }
      }
      if (cfg.contains("seed") && cfg["seed"].is_number_unsigned()) g.seed = cfg["seed"].get<std::uint64_t>();
      try {
        apply_config(&app, cfg);
        for (CLI::App* sub : app.get_subcommands()) {
          apply_config(sub, cfg);
          for (CLI::App* leaf : sub->get_subcommands()) apply_config(leaf, cfg);
        }
      } catch (const CLI::Error& e) {
        doc.error_at("", std::string("bad config value: ") + e.what());
      }
    }
    if (tolerances.count("septest") && sep->get_option("--tol")->count() == 0) sep_tol = tolerances["septest"];
    if (tolerances.count("wmem") && wm->get_option("--beta")->count() == 0) wm_beta = tolerances["wmem"];

    if (bloch->parsed()) {
      if (enc->parsed()) {
        const LoadedState s = load_state_file(bloch_in);
        check_cap(s.layout, g);
        emit(bloch_to_json(encode(s.density)), g, out);
      } else {
        const BlochVector r = bloch_from_json(read_json_file(bloch_in));
        std::vector<int> dims = bloch_dims.empty() ? std::vector<int>{r.M} : parse_dims(bloch_dims);
        int prod = 1;
        for (int d : dims) prod *= d;
        require(prod == r.M, ErrorKind::InvalidInput, "--dims do not multiply to M");
        const CMat m = decode(r);
        emit({{"dims", dims}, {"data", matrix_to_json(m)}, {"psd", min_eigenvalue(m) >= -kMinEigTol}}, g, out);
      }
      return 0;
    }
    if (sep->parsed()) {
      const LoadedState s = load_state_file(sep_in);
      check_cap(s.layout, g);
      ExtensionOptions opt;
      opt.delta = sep_tol;
      opt.ppt = sep_ppt;
      opt.max_iterations = sep_iters;
      const Cut cut = parse_cut(sep_cut);
      SepResult r = sep_level == 1 ? ppt_check(s.as_density(), cut)
                                   : separability_test(s.as_density(), cut, sep_level, opt);
      emit(sep_result_to_json(r), g, out);
      return 0;
    }
    if (wm->parsed()) {
      const BlochVector y = read_bloch_or_state(wm_in);
      MembershipResult m;
      if (wm_body == "k1") {
        m = wmem_k1(y.coords, wm_beta, y.M);
      } else {
        const RegisterLayout l = qubit_layout(parse_dims(wm_layout));
        require(l.total_dim() == y.M, ErrorKind::InvalidInput, "--layout does not match the input dimension");
        m = wm_body == "k2" ? wmem_k2(y.coords, wm_beta, l) : wmem_intersection(y.coords, wm_beta, l);
      }
      json j = {{"answer", to_string(m.answer)}, {"reason", m.reason}};
      j["cut"] = m.cut ? halfspace_to_json(*m.cut) : json(nullptr);
      emit(j, g, out);
      return 0;
    }
    if (wv->parsed()) {
      const RegisterLayout l = qubit_layout(parse_dims(wv_layout));
      const LoadedOperator V = load_operator(read_json_file(wv_v));
      const WvalInstance inst = build_wval_from_verifier(V.matrix, l, wv_delta, wv_sound);
      WvalOptions opt;
      opt.max_iterations = wv_iters;
      const WvalResult r = wval_solve(inst, opt);
      emit(wval_result_to_json(inst, r), g, out);
      return r.status == SolveStatus::BudgetExceeded ? 2 : 0;
    }
    if (prun->parsed()) {
      const CspInstance csp = csp_from_json(read_json_file(p_csp));
      const ProtocolSchedule s = schedule_from_json(read_json_file(p_sched));
      const ProtocolState psi = protocol_state_from_json(read_json_file(p_proof), csp.R, csp.kappa);
      const TestOutcome t = protocol_accept_prob(psi, s, csp);
      json j = outcome_to_json(t);
      j["P_YES"] = s.p_yes;
      j["case"] = static_cast<int>(classify_case(t, s));
      emit(j, g, out);
      return 0;
    }
    if (lver->parsed()) {
      SuiteOptions opt;
      opt.trials = l_trials;
      opt.seed = seed_opt->count() > 0 ? l_seed : g.seed;
      opt.jobs = g.jobs;
      emit(run_suites(l_suites, opt), g, out);
      return 0;
    }
    if (sch->parsed()) {
      const ProtocolSchedule s = schedule_compute(s_kappa, s_cyes, s_xi);
      emit(schedule_to_json(s), g, out);
      return 0;
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return e.kind() == ErrorKind::Budget ? 2 : 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  err << app.help();
  return 1;
}

}  // namespace qsep::cli
