// voaforge: command-line front end for the exact engine.
#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <iostream>
#include <random>
#include <sstream>

#include "voaforge/anv.hpp"
#include "voaforge/notation.hpp"
#include "voaforge/regrep.hpp"
#include "voaforge/verify.hpp"

using json = nlohmann::ordered_json;
using namespace voaforge;

namespace {

constexpr const char* kVersion = "0.1.0";

struct Config {
  std::string voa = "heisenberg";
  std::string c = "1/2";
  std::string h;
  std::string lambda;
  long n = 0;
  long cutoff = 8;
  long levels = 4;
  long vmax = 6;
  std::uint64_t seed = 0;
  bool oracle = false;
  std::string format = "json";
  std::string suite = "all";
  std::string expression;
  bool psi = false;
  bool zero_module = false;
  bool tamper_theta = false;
  bool cutoff_given = false;
};

class UsageError : public std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

std::string str(const Scalar& s) { return to_string(s); }

json config_json(const Config& cfg) {
  json j;
  j["voa"] = cfg.voa;
  if (cfg.voa == "virasoro") j["c"] = str(parse_rational(cfg.c));
  if (!cfg.h.empty()) j["h"] = str(parse_rational(cfg.h));
  if (!cfg.lambda.empty()) j["lambda"] = str(parse_rational(cfg.lambda));
  j["n"] = cfg.n;
  j["cutoff"] = cfg.cutoff;
  j["levels"] = cfg.levels;
  j["vmax"] = cfg.vmax;
  j["seed"] = cfg.seed;
  return j;
}

std::shared_ptr<Module> make_voa(const Config& cfg, int max_level) {
  if (cfg.voa == "heisenberg") return Module::heisenberg(max_level);
  if (cfg.voa == "virasoro") return Module::virasoro(parse_rational(cfg.c), max_level);
  throw UsageError("unknown --voa '" + cfg.voa + "' (heisenberg or virasoro)");
}

// The module selected by --h (Verma) or --lambda (Fock), else the VOA itself.
std::shared_ptr<Module> make_module(const Config& cfg, const std::shared_ptr<Module>& V, int max_level) {
  if (cfg.voa == "virasoro" && !cfg.h.empty()) return Module::verma(V, parse_rational(cfg.h), max_level);
  if (cfg.voa == "heisenberg" && !cfg.lambda.empty()) return Module::fock(V, parse_rational(cfg.lambda), max_level);
  if (!cfg.h.empty() || !cfg.lambda.empty())
    throw UsageError("--h goes with virasoro and --lambda with heisenberg");
  return V;
}

json coefficients(const SparseVector& v) {
  json j = json::object();
  for (const auto& [i, x] : v) j[std::to_string(i)] = str(x);
  return j;
}

json state_json(const State& s) {
  json j;
  j["text"] = format_state(s);
  json terms = json::array();
  for (const auto& [id, x] : s.coeffs) terms.push_back({{"basis", format_basis(*s.module, id)}, {"coeff", str(x)}});
  j["terms"] = terms;
  return j;
}

struct Output {
  json result = json::object();
  json warnings = json::array();
  std::vector<std::vector<std::string>> csv;  ///< rows, first row is the header
};

// ------------------------------------------------------------------ commands

Output cmd_parse(const Config& cfg) {
  auto V = make_voa(cfg, 40);
  auto W = make_module(cfg, V, 40);
  State s = parse_state(cfg.expression, *W);
  Output out;
  out.result["module"] = W->name();
  out.result["state"] = state_json(s);
  out.result["homogeneous"] = s.is_homogeneous();
  if (!s.is_zero()) out.result["max_level"] = s.max_level();
  out.csv.push_back({"basis", "coeff"});
  for (const auto& [id, x] : s.coeffs) out.csv.push_back({format_basis(*W, id), str(x)});
  return out;
}

Output cmd_an_table(const Config& cfg) {
  auto V = make_voa(cfg, static_cast<int>(2 * cfg.cutoff + 2 * cfg.n + 4));
  anv::ContextCache cache;
  anv::AnTable t = anv::an_table(*V, cfg.n, cfg.cutoff, cache);
  Output out;
  json basis = json::array();
  for (Index id : t.basis) basis.push_back(format_basis(*V, id));
  out.result["basis"] = basis;
  out.result["identity"] = t.identity;
  if (t.omega) out.result["omega"] = *t.omega;
  out.result["omega_class"] = coefficients(t.omega_class);
  out.result["filtration"] = t.filtration;
  out.result["internal_cutoff"] = t.internal_cutoff;
  out.csv.push_back({"i", "j", "k", "coeff"});
  json products = json::array();
  for (std::size_t i = 0; i < t.products.size(); ++i)
    for (std::size_t j = 0; j < t.products[i].size(); ++j) {
      products.push_back({{"i", i}, {"j", j}, {"coeffs", coefficients(t.products[i][j])}});
      for (const auto& [k, x] : t.products[i][j])
        out.csv.push_back({std::to_string(i), std::to_string(j), std::to_string(k), str(x)});
    }
  out.result["products"] = products;
  json overflow = json::array();
  for (const auto& [i, j, level] : t.overflow) overflow.push_back({{"i", i}, {"j", j}, {"level", level}});
  out.result["overflow"] = overflow;
  if (!t.overflow.empty())
    out.warnings.push_back(std::to_string(t.overflow.size()) + " products leave the weight window and are omitted");
  json theta_rows = json::array();
  for (const auto& row : t.theta) theta_rows.push_back(coefficients(row));
  out.result["theta"] = theta_rows;
  if (cfg.psi) {
    if (cfg.n == 0) throw UsageError("--psi needs n >= 1");
    auto lower = cache.get(*V, cfg.n - 1, t.internal_cutoff, anv::Variant::OnV);
    json psi = json::array();
    for (Index id : t.basis) psi.push_back(format_state(anv::psi_reduce(V->basis(id), *lower)));
    out.result["psi"] = psi;
  }
  return out;
}

Output cmd_omega(const Config& cfg) {
  auto V = make_voa(cfg, static_cast<int>(cfg.levels + cfg.vmax + 8));
  auto W = make_module(cfg, V, static_cast<int>(cfg.levels + 4));
  auto o = regrep::omega_n_basis(*W, cfg.n, cfg.levels, cfg.vmax);
  Output out;
  out.result["module"] = W->name();
  out.result["label"] = "candidate";
  out.result["dims"] = o.dims();
  out.result["dimension"] = o.dimension();
  json basis = json::array();
  for (const auto& level : o.levels)
    for (const auto& s : level) basis.push_back(format_state(s));
  out.result["basis"] = basis;
  out.csv.push_back({"level", "dim"});
  for (std::size_t l = 0; l < o.levels.size(); ++l) out.csv.push_back({std::to_string(l), std::to_string(o.levels[l].size())});
  if (cfg.oracle) {
    // a larger weight bound can only shrink the candidate; equality means stable
    auto wider = regrep::omega_n_basis(*W, cfg.n, cfg.levels, cfg.vmax + 2);
    out.result["oracle"] = {{"vmax", cfg.vmax + 2}, {"dims", wider.dims()}, {"equal", wider.dims() == o.dims()}};
    if (wider.dims() != o.dims()) out.warnings.push_back("candidate shrinks with a larger weight bound");
  }
  return out;
}

Output cmd_induce(const Config& cfg) {
  auto V = make_voa(cfg, static_cast<int>(6 * cfg.levels + 6));
  std::shared_ptr<Module> M;
  if (!cfg.zero_module) {
    M = make_module(cfg, V, static_cast<int>(cfg.levels + cfg.n + 4));
    if (M == V) throw UsageError("induce needs --h (virasoro) or --lambda (heisenberg), or --zero");
  }
  regrep::InduceOptions opt;
  auto r = regrep::induce(*V, regrep::AnModule{M.get(), cfg.n}, cfg.levels, opt);
  Output out;
  out.result["lowest_weight"] = str(r.lowest_weight);
  out.result["dims"] = r.dims;
  out.result["below_lowest"] = r.below_lowest;
  out.result["below_lowest_vanishes"] = r.below_lowest_vanishes();
  if (cfg.oracle) {
    out.result["oracle"] = {{"dims", r.oracle}, {"equal", r.oracle == r.dims}};
  }
  out.csv.push_back(cfg.oracle ? std::vector<std::string>{"level", "dim", "oracle"} : std::vector<std::string>{"level", "dim"});
  for (std::size_t l = 0; l < r.dims.size(); ++l) {
    std::vector<std::string> row{std::to_string(l), std::to_string(r.dims[l])};
    if (cfg.oracle) row.push_back(l < r.oracle.size() ? std::to_string(r.oracle[l]) : "");
    out.csv.push_back(row);
  }
  return out;
}

Output cmd_verify(const Config& cfg, bool& ok) {
  verify::Options o;
  o.seed = cfg.seed;
  o.cutoff = cfg.cutoff;
  o.raise_cutoff = !cfg.cutoff_given;
  o.levels = cfg.levels;
  o.vmax = cfg.vmax;
  o.tamper_theta = cfg.tamper_theta;
  auto report = verify::run_suite(cfg.suite, o);
  ok = report.ok();
  Output out;
  json checks = json::array();
  out.csv.push_back({"check", "passed", "failed", "inconclusive", "seconds"});
  for (const auto& c : report.checks) {
    checks.push_back({{"name", c.name},
                      {"passed", c.passed},
                      {"failed", c.failed},
                      {"inconclusive", c.inconclusive},
                      {"seconds", c.seconds},
                      {"notes", c.notes}});
    std::ostringstream secs;
    secs << c.seconds;
    out.csv.push_back({c.name, std::to_string(c.passed), std::to_string(c.failed), std::to_string(c.inconclusive), secs.str()});
  }
  out.result["suite"] = cfg.suite;
  out.result["checks"] = checks;
  out.result["ok"] = ok;
  for (const auto& w : report.warnings) out.warnings.push_back(w);
  return out;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char ch : s) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
  return q + "\"";
}

void emit(const Config& cfg, const Output& out) {
  if (cfg.format == "csv") {
    for (const auto& row : out.csv) {
      for (std::size_t i = 0; i < row.size(); ++i) std::cout << (i ? "," : "") << csv_field(row[i]);
      std::cout << '\n';
    }
    for (const auto& w : out.warnings) std::cerr << "warning: " << w.get<std::string>() << '\n';
    return;
  }
  json doc;
  doc["config"] = config_json(cfg);
  doc["result"] = out.result;
  doc["warnings"] = out.warnings;
  doc["version"] = kVersion;
  std::cout << doc.dump(2) << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  Config cfg;
  if (const char* s = std::getenv("VOAFORGE_SEED")) cfg.seed = std::strtoull(s, nullptr, 10);

  CLI::App app{"Exact computations with A_n(V), Omega_n and induced modules for the rank-one Heisenberg and Virasoro vertex operator algebras"};
  app.set_help_flag("--help", "print this help and exit");  // -h would clash with --h
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--voa", cfg.voa, "heisenberg or virasoro")->check(CLI::IsMember({"heisenberg", "virasoro"}));
    sub->add_option("--c", cfg.c, "central charge (exact rational)");
    sub->add_option("--h", cfg.h, "lowest weight of a Virasoro Verma module");
    sub->add_option("--lambda", cfg.lambda, "Heisenberg Fock module charge");
    sub->add_option("--n", cfg.n, "the index n")->check(CLI::NonNegativeNumber);
    sub->add_option("--levels", cfg.levels, "level window K")->check(CLI::NonNegativeNumber);
    sub->add_option("--vmax", cfg.vmax, "weight bound for VOA states")->check(CLI::NonNegativeNumber);
    sub->add_option("--seed", cfg.seed, "random seed (default from VOAFORGE_SEED)");
    sub->add_option("--format", cfg.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    sub->add_flag("--oracle", cfg.oracle, "compare with an independent count");
  };

  auto* parse = app.add_subcommand("parse", "parse a state and print its canonical form");
  add_common(parse);
  parse->add_option("expression", cfg.expression, "e.g. \"1/2 a(-1)^2|0>\"")->required();

  auto* table = app.add_subcommand("an-table", "product table of A_n(V) on weight <= cutoff representatives");
  add_common(table);
  table->add_option("--cutoff", cfg.cutoff, "weight cutoff D")->check(CLI::NonNegativeNumber);
  table->add_flag("--psi", cfg.psi, "also reduce the representatives into A_{n-1}(V)");

  auto* omega = app.add_subcommand("omega", "Omega_n candidate of a module up to level K");
  add_common(omega);

  auto* induce = app.add_subcommand("induce", "graded dimensions of the module induced from A_n(V)");
  add_common(induce);
  induce->add_flag("--zero", cfg.zero_module, "induce from the zero module");

  auto* verify = app.add_subcommand("verify", "run identity suites; nonzero exit on any exact mismatch");
  add_common(verify);
  verify->add_option("--suite", cfg.suite, "formal, anv, regrep or all")
      ->check(CLI::IsMember({"formal", "anv", "regrep", "all"}));
  auto* cutoff_opt = verify->add_option("--cutoff", cfg.cutoff, "congruence cutoff D (fixed when given)");
  verify->add_flag("--tamper-theta", cfg.tamper_theta, "fault injection: use a broken theta")->group("");

  CLI11_PARSE(app, argc, argv);
  cfg.cutoff_given = cutoff_opt->count() > 0;

  try {
    bool ok = true;
    Output out;
    if (*parse) out = cmd_parse(cfg);
    else if (*table) out = cmd_an_table(cfg);
    else if (*omega) out = cmd_omega(cfg);
    else if (*induce) out = cmd_induce(cfg);
    else out = cmd_verify(cfg, ok);
    emit(cfg, out);
    if (!ok) {
      std::cerr << "verification failed:";
      for (const auto& c : out.result["checks"])
        if (c["failed"].get<std::size_t>() > 0) std::cerr << " [" << c["name"].get<std::string>() << "]";
      std::cerr << '\n';
      return 1;
    }
    return 0;
  } catch (const anv::CutoffInsufficient& e) {
    std::cerr << "error: " << e.what() << " (required cutoff " << e.required() << ")\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
