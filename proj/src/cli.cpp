#include "srpave/cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "srpave/json_io.hpp"
#include "srpave/paving.hpp"
#include "srpave/sr_process.hpp"
#include "srpave/stable_poly.hpp"
#include "srpave/verify.hpp"

namespace srpave::cli {

using io::Json;

namespace {

struct Options {
  std::uint64_t seed = 1;
  std::string out = "-";
  std::string csv;
  double tol = 0.0;
  bool no_timings = false;
  int threads = 0;

  std::string in;
  int r = 2;
  double alpha = -1.0;
  double lambda = 1.0;
  double delta = 0.0;
  std::string method = "exhaustive";

  std::string suite = "all";
  int n = 0;
  int count = 0;
  bool list = false;

  std::string kind;
  std::string matrix;
  std::string graph = "complete";
  std::vector<double> p;
};

double env_tol() {
  const char* v = std::getenv("SRPAVE_TOL");
  if (v == nullptr || *v == '\0') return 0.0;
  char* end = nullptr;
  const double t = std::strtod(v, &end);
  if (end == v || *end != '\0' || !(t > 0.0)) throw Error(Errc::ParamOutOfRange, "SRPAVE_TOL must be a positive number");
  return t;
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + "\"";
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

void emit(const Options& o, const std::string& text, std::ostream& out) {
  if (o.out == "-") {
    out << text;
  } else {
    io::write_text_file(o.out, text);
  }
}

void emit_csv(const Options& o, const std::string& text, std::ostream& out) {
  if (o.csv.empty()) return;
  if (o.csv == "-") {
    out << text;
  } else {
    io::write_text_file(o.csv, text);
  }
}

std::string part_table(const paving::PavingResult& res, const std::vector<double>* extra, const char* extra_name) {
  std::string t = std::string("part,size,maxroot") + (extra ? std::string(",") + extra_name : "") + "\n";
  for (std::size_t i = 0; i < res.partition.parts.size(); ++i) {
    t += std::to_string(i) + "," + std::to_string(popcount(res.partition.parts[i])) + "," +
         fmt(res.per_part_maxroot[i]);
    if (extra) t += "," + fmt((*extra)[i]);
    t += "\n";
  }
  return t;
}

void check_r(int r) {
  if (r < 2) throw Error(Errc::ParamOutOfRange, "--r must be at least 2");
}

int pave_matrix(const Options& o, std::ostream& out) {
  check_r(o.r);
  const linalg::Matrix k = io::matrix_from_json(io::read_json_file(o.in));
  const double alpha = o.alpha >= 0.0 ? o.alpha : (k.rows() > 0 ? k.diagonal().maxCoeff() : 0.0);
  const paving::MatrixPavingReport rep = paving::matrix_paving(k, {o.r, alpha, 1.0});
  Json j = io::to_json(rep.result, !o.no_timings);
  Json norms = Json::array();
  for (double v : rep.op_norms) norms.push_back(v);
  j["op_norms"] = norms;
  j["max_norm_mismatch"] = rep.max_norm_mismatch;
  const bool ok = rep.result.max_part_value() <= rep.result.bound + 1e-8;
  j["within_bound"] = ok;
  emit(o, j.dump(2) + "\n", out);
  emit_csv(o, part_table(rep.result, &rep.op_norms, "op_norm"), out);
  return ok ? 0 : 1;
}

int pave_poly(const Options& o, std::ostream& out) {
  check_r(o.r);
  const MultiAffine g = io::multi_affine_from_json(io::read_json_file(o.in));
  if (o.method == "barrier") {
    paving::BarrierOptions opts;
    if (o.tol > 0.0) opts.tol = o.tol;
    const paving::CertifiedBound cb = paving::certified_maxroot_bound(g, o.r, opts);
    Json j = io::to_json(cb);
    j["r"] = o.r;
    j["lr_bound"] = paving::lr_bound(o.r, cb.alpha);
    emit(o, j.dump(2) + "\n", out);
    return cb.phi_bound_holds && cb.uniform_delta_holds ? 0 : 1;
  }
  const double alpha = o.alpha >= 0.0 ? o.alpha : paving::diagonal_alpha(g);
  paving::PavingResult res;
  if (o.method == "exhaustive") {
    res = paving::exhaustive_paving(g, {o.r, alpha, o.lambda});
  } else if (o.method == "descent") {
    res = paving::interlacing_descent(g, {o.r, alpha, o.lambda});
  } else {
    res = paving::two_stage_paving(g, o.r, o.lambda);
  }
  const bool ok = res.max_part_value() <= res.bound + 1e-8;
  Json j = io::to_json(res, !o.no_timings);
  j["within_bound"] = ok;
  emit(o, j.dump(2) + "\n", out);
  emit_csv(o, part_table(res, nullptr, ""), out);
  return ok ? 0 : 1;
}

int sr_pave(const Options& o, std::ostream& out) {
  if (o.delta <= 0.0 && o.r < 4) throw Error(Errc::ParamOutOfRange, "sr-pave needs --delta or --r >= 4");
  const sr::PointProcess x = io::process_from_json(io::read_json_file(o.in));
  const int r = o.delta > 0.0 ? sr::r_for_delta(o.delta) : o.r;
  const sr::SrPavingReport rep = sr::sr_paving(x, r);
  Json j = io::to_json(rep, !o.no_timings);
  bool ok = true;
  if (o.delta > 0.0) {
    j["delta"] = o.delta;
    for (double g : rep.entropy_gaps) ok = ok && g < o.delta;
    j["all_gaps_below_delta"] = ok;
  }
  emit(o, j.dump(2) + "\n", out);
  if (!o.csv.empty()) {
    std::string t = "part,size,rootnorm,entropy_gap\n";
    for (std::size_t i = 0; i < rep.per_part_rootnorm.size(); ++i) {
      const int size = i < rep.paving.partition.parts.size() ? popcount(rep.paving.partition.parts[i]) : 0;
      t += std::to_string(i) + "," + std::to_string(size) + "," + fmt(rep.per_part_rootnorm[i]) + "," +
           fmt(rep.entropy_gaps[i]) + "\n";
    }
    emit_csv(o, t, out);
  }
  return ok ? 0 : 1;
}

Json instance_json(const verify::InstanceResult& r) {
  Json j{{"index", r.index}, {"n", r.n}, {"ok", r.ok}};
  if (!r.failure.empty()) j["failure"] = r.failure;
  if (!r.note.empty()) j["note"] = r.note;
  Json v = Json::object();
  for (const auto& [k, x] : r.values) v[k] = std::isfinite(x) ? Json(x) : Json(nullptr);
  j["values"] = v;
  return j;
}

int run_verify(const Options& o, std::ostream& out, std::ostream& err) {
  if (o.list) {
    std::string t;
    for (const auto& info : verify::registry()) t += info.name + "  " + info.statement + "\n";
    emit(o, t, out);
    return 0;
  }
  std::vector<std::string> names;
  if (o.suite == "all") {
    for (const auto& info : verify::registry()) names.push_back(info.name);
  } else {
    names.push_back(o.suite);
  }
  verify::SuiteConfig cfg;
  cfg.n = o.n;
  cfg.count = o.count;
  cfg.seed = o.seed;
  cfg.tol = o.tol;
  cfg.threads = o.threads;
  cfg.delta = o.delta;

  Json suites = Json::array();
  std::string csv = "suite,instance,n,ok,key,value\n";
  bool all_ok = true;
  for (const std::string& name : names) {
    const verify::SuiteReport rep = verify::run_suite(name, cfg);
    all_ok = all_ok && rep.ok();
    Json s{{"suite", rep.suite},
           {"statement", rep.statement},
           {"config",
            {{"n", rep.config.n}, {"count", rep.config.count}, {"seed", rep.config.seed}, {"tol", rep.config.tol}}},
           {"passed", rep.passed},
           {"failed", rep.failed},
           {"ok", rep.ok()}};
    Json summary = Json::object();
    for (const auto& [k, v] : rep.summary) summary[k] = std::isfinite(v) ? Json(v) : Json(nullptr);
    if (!summary.empty()) s["summary"] = summary;
    // Failures and flagged instances carry their seed coordinates for replay.
    Json flagged = Json::array();
    for (const auto& inst : rep.instances) {
      if (!inst.ok || inst.note.find("counterexample") != std::string::npos) flagged.push_back(instance_json(inst));
      for (const auto& [k, v] : inst.values) {
        csv += rep.suite + "," + std::to_string(inst.index) + "," + std::to_string(inst.n) + "," +
               (inst.ok ? "1" : "0") + "," + csv_escape(k) + "," + fmt(v) + "\n";
      }
    }
    s["flagged"] = flagged;
    if (!o.no_timings) s["runtime_ms"] = rep.runtime_ms;
    suites.push_back(s);
    err << rep.suite << ": " << rep.passed << "/" << rep.config.count << " pass\n";
  }
  Json j{{"seed", o.seed}, {"ok", all_ok}, {"suites", suites}};
  emit(o, j.dump(2) + "\n", out);
  emit_csv(o, csv, out);
  return all_ok ? 0 : 1;
}

int gen(const Options& o, std::ostream& out) {
  std::mt19937_64 rng(o.seed);
  Json j;
  sr::PointProcess x(0, {1.0});
  std::optional<long long> trees;
  if (o.kind == "independent") {
    std::vector<double> p = o.p;
    if (p.empty()) {
      if (o.n < 1) throw Error(Errc::ParamOutOfRange, "--n must be positive");
      std::uniform_real_distribution<double> unif(0.0, 1.0);
      p.resize(static_cast<std::size_t>(o.n));
      for (double& q : p) q = unif(rng);
    }
    for (double q : p) {
      if (!(q >= 0.0 && q <= 1.0)) throw Error(Errc::ParamOutOfRange, "marginals must lie in [0, 1]");
    }
    x = sr::independent(p);
  } else if (o.kind == "determinantal") {
    if (!o.matrix.empty()) {
      const linalg::Matrix k = io::matrix_from_json(io::read_json_file(o.matrix));
      if (!linalg::is_psd_contraction(k)) throw Error(Errc::InvalidInput, "kernel is not a PSD contraction");
      x = sr::determinantal_process(k);
    } else {
      if (o.n < 1) throw Error(Errc::ParamOutOfRange, "--n must be positive");
      x = sr::random_process(sr::Family::Determinantal, o.n, rng);
    }
  } else if (o.kind == "ust") {
    if (o.n < 2) throw Error(Errc::ParamOutOfRange, "ust needs --n >= 2 vertices");
    const sr::Graph g = o.graph == "cycle" ? sr::cycle_graph(o.n) : sr::complete_graph(o.n);
    if (static_cast<int>(g.edges.size()) > kMaxMultiAffineVars) {
      throw Error(Errc::BudgetExceeded, "graph has too many edges");
    }
    x = sr::ust_edges(g);
    trees = sr::count_spanning_trees(g);
  } else {
    if (o.n < 1) throw Error(Errc::ParamOutOfRange, "--n must be positive");
    x = sr::random_process(o.kind == "conditioned" ? sr::Family::Conditioned : sr::Family::Field, o.n, rng);
  }
  j = io::to_json(x);
  j["kind"] = o.kind;
  j["seed"] = o.seed;
  if (trees) j["spanning_trees"] = *trees;
  emit(o, j.dump(2) + "\n", out);
  return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Paving and strongly Rayleigh process toolkit", "srpave"};
  app.require_subcommand(1);
  app.fallthrough();
  Options o;
  app.add_option("--seed", o.seed, "Random seed")->capture_default_str();
  app.add_option("--out", o.out, "Report path, - for stdout")->capture_default_str();
  app.add_option("--csv", o.csv, "Also write per-instance scalars as CSV");
  app.add_option("--tol", o.tol, "Comparison tolerance (default: SRPAVE_TOL or per suite)")
      ->check(CLI::PositiveNumber);
  app.add_flag("--no-timings", o.no_timings, "Omit runtimes so reports are byte-identical");
  app.add_option("--threads", o.threads, "Worker threads for verify (0: all cores)")->check(CLI::NonNegativeNumber);

  auto* pm = app.add_subcommand("pave-matrix", "Pave a PSD contraction given as JSON");
  pm->add_option("--in", o.in, "Matrix JSON")->required();
  pm->add_option("--r", o.r, "Number of parts")->capture_default_str();
  pm->add_option("--alpha", o.alpha, "Diagonal bound (default: largest diagonal entry)");

  auto* pp = app.add_subcommand("pave-poly", "Pave a multi-affine polynomial given as JSON");
  pp->add_option("--in", o.in, "Polynomial JSON")->required();
  pp->add_option("--r", o.r, "Number of parts")->capture_default_str();
  pp->add_option("--alpha", o.alpha, "Diagonal bound (default: from the coefficients)");
  pp->add_option("--lambda", o.lambda, "Root bound for two-stage")->capture_default_str();
  pp->add_option("--method", o.method)
      ->check(CLI::IsMember({"exhaustive", "descent", "two-stage", "barrier"}))
      ->capture_default_str();

  auto* sp = app.add_subcommand("sr-pave", "Pave a strongly Rayleigh process given as JSON");
  sp->add_option("--in", o.in, "Process JSON")->required();
  sp->add_option("--delta", o.delta, "Target entropy gap")->check(CLI::PositiveNumber);
  sp->add_option("--r", o.r, "Parts per stage when --delta is absent");

  auto* vf = app.add_subcommand("verify", "Run invariant suites");
  vf->add_option("--suite", o.suite, "Suite name or all")->capture_default_str();
  vf->add_option("--n", o.n, "Largest instance size (0: suite default)")->check(CLI::NonNegativeNumber);
  vf->add_option("--count", o.count, "Instances (0: suite default)")->check(CLI::NonNegativeNumber);
  vf->add_option("--delta", o.delta, "sr-paving target gap (default: 0.5 and 0.25)")->check(CLI::PositiveNumber);
  vf->add_flag("--list", o.list, "List suites and exit");

  auto* gn = app.add_subcommand("gen", "Generate a process instance");
  gn->add_option("--kind", o.kind)
      ->required()
      ->check(CLI::IsMember({"independent", "determinantal", "ust", "conditioned", "field"}));
  gn->add_option("--n", o.n, "Points, or vertices for ust");
  gn->add_option("--matrix", o.matrix, "Kernel JSON for determinantal");
  gn->add_option("--graph", o.graph, "ust graph")->check(CLI::IsMember({"complete", "cycle"}))->capture_default_str();
  gn->add_option("--p", o.p, "Marginals for independent")->delimiter(',');

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? 0 : 2;
  }

  try {
    if (!app.get_option("--tol")->count()) o.tol = env_tol();
    if (*pm) return pave_matrix(o, out);
    if (*pp) return pave_poly(o, out);
    if (*sp) return sr_pave(o, out);
    if (*vf) return run_verify(o, out, err);
    return gen(o, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const nlohmann::json::exception& e) {
    err << "error: InvalidInput: " << e.what() << "\n";
    return 2;
  }
}

int main(int argc, char** argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args, std::cout, std::cerr);
}

}  // namespace srpave::cli
