#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>

#include "orbit/solver.hpp"

using nlohmann::json;
using namespace orbit;

namespace {

enum Exit { kYes = 0, kNo = 1, kUnknown = 2, kMalformed = 3, kUnsupported = 4, kInternal = 5 };

json read_document(const std::string& path) {
  std::string text;
  if (path == "-") {
    text.assign(std::istreambuf_iterator<char>(std::cin), {});
  } else {
    std::ifstream in(path);
    if (!in) throw InvalidInput("cannot open " + path);
    text.assign(std::istreambuf_iterator<char>(in), {});
  }
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw InvalidInput(std::string("malformed JSON: ") + e.what());
  }
}

bool is_power_form(const json& j) { return j.is_object() && j.value("kind", "") == "matrix_power"; }

int verdict_exit(const Verdict& v) {
  switch (v.result) {
    case Verdict::Result::Yes: return kYes;
    case Verdict::Result::No: return kNo;
    case Verdict::Result::Unknown: return kUnknown;
  }
  return kUnknown;
}

Verdict decide_document(const json& j, const SolverConfig& cfg) {
  if (is_power_form(j)) return decide_power(matrix_power_from_json(j), cfg);
  return decide(orbit_instance_from_json(j), cfg);
}

struct Case {
  std::string name;
  std::string instance;
  std::string result;
  std::optional<unsigned long> witness;
  std::optional<std::pair<unsigned long, unsigned long>> congruence;
};

// Small instances whose answers follow from hand calculation.
std::vector<Case> corpus() {
  return {
      {"rotation-odd", R"({"matrix":[[0,-1],[1,0]],"point":[1,0],"target_basis":[[0,1]]})", "yes", 1,
       std::make_pair(1UL, 2UL)},
      {"rotation-even", R"({"matrix":[[0,-1],[1,0]],"point":[1,0],"target_basis":[[1,0]]})", "yes", 0,
       std::make_pair(0UL, 2UL)},
      {"diag23-axis", R"({"matrix":[[2,0],[0,3]],"point":[1,1],"target_basis":[[1,0]]})", "no", {}, {}},
      {"diag235-start-inside",
       R"({"matrix":[[2,0,0],[0,3,0],[0,0,5]],"point":[1,1,0],"target_basis":[[1,0,0],[0,1,0]]})", "yes", 0, {}},
      {"fibonacci", R"({"matrix":[[0,1],[1,1]],"point":[0,1],"target_basis":[[1,1]]})", "yes", 1, {}},
      {"diag23-quotient", R"({"matrix":[[2,0],[0,3]],"point":[1,1],"target_basis":[[4,9]]})", "yes", 2, {}},
      {"jordan-pinned", R"({"matrix":[[1,1],[0,1]],"point":[0,1],"target_basis":[[2,1]]})", "yes", 2, {}},
      {"jordan-never", R"({"matrix":[[1,1],[0,1]],"point":[0,1],"target_basis":[[1,0]]})", "no", {}, {}},
      {"diag235-plane",
       R"({"matrix":[[2,0,0],[0,3,0],[0,0,5]],"point":[1,1,1],"target_basis":[[4,0,25],[0,1,0]]})", "yes", 2, {}},
      {"diag2357-never",
       R"({"matrix":[[2,0,0,0],[0,3,0,0],[0,0,5,0],[0,0,0,7]],"point":[1,1,1,1],
           "target_basis":[[1,2,0,0],[0,0,1,0],[0,0,0,1]]})",
       "no", {}, {}},
      {"nilpotent-prefix", R"({"matrix":[[0,1],[0,0]],"point":[0,1],"target_basis":[[1,0]]})", "yes", 1,
       std::make_pair(1UL, 1UL)},
  };
}

int run_selftest(const SolverConfig& cfg) {
  json cases = json::array();
  int failed = 0;
  for (auto& c : corpus()) {
    json row = {{"name", c.name}, {"expected", c.result}};
    bool ok = false;
    try {
      Verdict v = decide(orbit_instance_from_json(json::parse(c.instance)), cfg);
      row["got"] = to_json(v);
      ok = result_name(v.result) == c.result && v.witness == c.witness && (!c.congruence || v.congruence == c.congruence);
    } catch (const std::exception& e) {
      row["error"] = e.what();
    }
    row["ok"] = ok;
    if (!ok) ++failed;
    cases.push_back(row);
  }
  json out = {{"passed", static_cast<int>(cases.size()) - failed}, {"failed", failed}, {"cases", cases}};
  std::cout << out.dump(2) << "\n";
  return failed ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Decide whether a linear orbit reaches a subspace of dimension one to three"};
  app.require_subcommand(1);
  app.fallthrough();

  SolverConfig cfg;
  std::string budget = "1/18446744073709551616";
  bool no_prob = false;
  unsigned long max_n = 2000;
  app.add_option("--cap", cfg.search_cap, "largest exhaustive witness search")->check(CLI::PositiveNumber);
  app.add_option("--residue-cap", cfg.residue_work_cap, "residue and tuple work cap")->check(CLI::PositiveNumber);
  app.add_option("--error-budget", budget, "error probability for circuit screening, as p/q");
  app.add_flag("--no-prob", no_prob, "screen candidates by exact membership only");
  app.add_option("--max-n", max_n, "oracle search limit");
  app.add_option("--seed", cfg.seed, "seed for prime sampling");

  std::string path;
  auto* decide_cmd = app.add_subcommand("decide", "print the verdict JSON");
  auto* oracle_cmd = app.add_subcommand("oracle", "brute-force search up to --max-n");
  auto* reduce_cmd = app.add_subcommand("reduce", "print the polynomial-form instance");
  auto* system_cmd = app.add_subcommand("system", "print the equation system");
  auto* bound_cmd = app.add_subcommand("bound", "print the bounds harvested while deciding");
  auto* self_cmd = app.add_subcommand("selftest", "run the built-in corpus");
  for (auto* c : {decide_cmd, oracle_cmd, reduce_cmd, system_cmd, bound_cmd})
    c->add_option("instance", path, "instance JSON file, - for stdin")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kMalformed;
  }

  try {
    cfg.error_budget = parse_q(budget);
    if (cfg.error_budget <= 0 || cfg.error_budget >= 1) throw InvalidInput("error budget must lie in (0, 1)");
    cfg.use_prob_membership = !no_prob;

    if (*self_cmd) return run_selftest(cfg);
    json doc = read_document(path);
    if (*decide_cmd) {
      Verdict v = decide_document(doc, cfg);
      std::cout << to_json(v).dump() << "\n";
      return verdict_exit(v);
    }
    if (*bound_cmd) {
      Verdict v = decide_document(doc, cfg);
      json bs = json::array();
      for (auto& [label, b] : v.bounds) bs.push_back({{"label", label}, {"bound", to_json(b)}});
      std::cout << json{{"result", result_name(v.result)}, {"bounds", bs}}.dump() << "\n";
      return 0;
    }
    if (*oracle_cmd) {
      if (is_power_form(doc)) throw InvalidInput("the oracle needs an orbit instance");
      auto w = brute_force(orbit_instance_from_json(doc), max_n);
      std::cout << json{{"witness", w ? json(*w) : json(nullptr)}, {"max_n", max_n}}.dump() << "\n";
      return w ? kYes : kNo;
    }
    MatrixPowerInstance mp =
        is_power_form(doc) ? matrix_power_from_json(doc) : reduce_orbit_to_power(orbit_instance_from_json(doc));
    if (*reduce_cmd) {
      std::cout << to_json(mp).dump() << "\n";
      return 0;
    }
    if (*system_cmd) {
      std::cout << to_json(build_system(mp)).dump() << "\n";
      return 0;
    }
  } catch (const UnsupportedDimension& e) {
    std::cerr << "unsupported: " << e.what() << "\n";
    return kUnsupported;
  } catch (const InvalidInput& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kMalformed;
  } catch (const json::exception& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kMalformed;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInternal;
  }
  return kInternal;
}
