#include "srpave/json_io.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

namespace srpave::io {

namespace {

Json number(double x) {
  if (std::isfinite(x)) return x;
  return nullptr;
}

Json numbers(const std::vector<double>& v) {
  Json a = Json::array();
  for (double x : v) a.push_back(number(x));
  return a;
}

Json parts_json(const paving::Partition& s) {
  Json a = Json::array();
  for (Mask m : s.parts) a.push_back(to_indices(m));
  return a;
}

int read_n(const Json& j, const char* what) {
  if (!j.is_object() || !j.contains("n") || !j["n"].is_number_integer()) {
    throw Error(Errc::InvalidInput, std::string(what) + " JSON needs an integer \"n\"");
  }
  const int n = j["n"].get<int>();
  if (n < 0) throw Error(Errc::InvalidInput, std::string(what) + " JSON has negative n");
  return n;
}

const Json& read_array(const Json& j, const char* key, const char* what) {
  if (!j.contains(key) || !j[key].is_array()) {
    throw Error(Errc::InvalidInput, std::string(what) + " JSON needs an array \"" + key + "\"");
  }
  return j[key];
}

Mask set_from_json(const Json& vars, int n, const char* what) {
  if (!vars.is_array()) throw Error(Errc::InvalidInput, std::string(what) + ": set is not an array");
  Mask s = 0;
  for (const Json& v : vars) {
    if (!v.is_number_integer()) throw Error(Errc::InvalidInput, std::string(what) + ": non-integer index");
    const int i = v.get<int>();
    if (i < 0 || i >= n) throw Error(Errc::InvalidInput, std::string(what) + ": index out of range");
    if (contains(s, i)) throw Error(Errc::InvalidInput, std::string(what) + ": repeated index");
    s |= bit(i);
  }
  return s;
}

}  // namespace

Json to_json(const MultiAffine& p) {
  Json terms = Json::array();
  for (Mask s = 0; s < p.size(); ++s) {
    if (p.coeff(s) == 0.0) continue;
    terms.push_back(Json{{"vars", to_indices(s)}, {"coeff", p.coeff(s)}});
  }
  return Json{{"n", p.num_vars()}, {"terms", terms}};
}

MultiAffine multi_affine_from_json(const Json& j) {
  const int n = read_n(j, "polynomial");
  MultiAffine p(n);
  for (const Json& t : read_array(j, "terms", "polynomial")) {
    if (!t.contains("coeff") || !t["coeff"].is_number()) throw Error(Errc::InvalidInput, "term without coeff");
    const Mask s = set_from_json(t.value("vars", Json::array()), n, "polynomial");
    p.set_coeff(s, p.coeff(s) + t["coeff"].get<double>());
  }
  return p;
}

Json to_json(const MultiDegree& p) {
  Json terms = Json::array();
  for (std::size_t idx = 0; idx < p.size(); ++idx) {
    if (p.coeff_at(idx) == 0.0) continue;
    terms.push_back(Json{{"vars", p.exponents(idx)}, {"coeff", p.coeff_at(idx)}});
  }
  return Json{{"n", p.num_vars()}, {"caps", p.caps()}, {"terms", terms}};
}

MultiDegree multi_degree_from_json(const Json& j) {
  const int n = read_n(j, "polynomial");
  const Json& terms = read_array(j, "terms", "polynomial");
  std::vector<int> caps(static_cast<std::size_t>(n), 0);
  const bool explicit_caps = j.contains("caps");
  if (explicit_caps) {
    caps = j["caps"].get<std::vector<int>>();
    if (static_cast<int>(caps.size()) != n) throw Error(Errc::InvalidInput, "caps length differs from n");
  }
  std::vector<std::pair<std::vector<int>, double>> parsed;
  for (const Json& t : terms) {
    if (!t.contains("coeff") || !t["coeff"].is_number()) throw Error(Errc::InvalidInput, "term without coeff");
    auto e = t.value("vars", std::vector<int>(static_cast<std::size_t>(n), 0));
    if (static_cast<int>(e.size()) != n) throw Error(Errc::InvalidInput, "exponent vector length differs from n");
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (e[i] < 0) throw Error(Errc::InvalidInput, "negative exponent");
      if (explicit_caps && e[i] > caps[i]) throw Error(Errc::InvalidInput, "exponent above its cap");
      if (!explicit_caps) caps[i] = std::max(caps[i], e[i]);
    }
    parsed.emplace_back(std::move(e), t["coeff"].get<double>());
  }
  MultiDegree p(caps);
  for (const auto& [e, c] : parsed) p.add_coeff(e, c);
  return p;
}

Json matrix_to_json(const linalg::Matrix& k) {
  Json rows = Json::array();
  for (int i = 0; i < k.rows(); ++i) {
    Json row = Json::array();
    for (int c = 0; c < k.cols(); ++c) row.push_back(k(i, c));
    rows.push_back(row);
  }
  return Json{{"n", k.rows()}, {"rows", rows}};
}

linalg::Matrix matrix_from_json(const Json& j) {
  const int n = read_n(j, "matrix");
  const Json& rows = read_array(j, "rows", "matrix");
  if (static_cast<int>(rows.size()) != n) throw Error(Errc::InvalidInput, "matrix row count differs from n");
  linalg::Matrix k(n, n);
  for (int i = 0; i < n; ++i) {
    const Json& row = rows[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<int>(row.size()) != n) throw Error(Errc::InvalidInput, "matrix is not square");
    for (int c = 0; c < n; ++c) k(i, c) = row[static_cast<std::size_t>(c)].get<double>();
  }
  for (int i = 0; i < n; ++i) {
    for (int c = 0; c < i; ++c) {
      if (std::abs(k(i, c) - k(c, i)) > 1e-12) throw Error(Errc::InvalidInput, "matrix is not symmetric");
    }
  }
  return k;
}

Json to_json(const sr::PointProcess& x) {
  Json pmf = Json::array();
  for (Mask s = 0; s < x.pmf().size(); ++s) {
    if (x.prob(s) == 0.0) continue;
    pmf.push_back(Json{{"set", to_indices(s)}, {"p", x.prob(s)}});
  }
  return Json{{"n", x.n()}, {"pmf", pmf}};
}

sr::PointProcess process_from_json(const Json& j) {
  const int n = read_n(j, "process");
  if (n > kMaxMultiAffineVars) throw Error(Errc::BudgetExceeded, "process has too many points");
  std::vector<double> pmf(std::size_t{1} << n, 0.0);
  for (const Json& t : read_array(j, "pmf", "process")) {
    if (!t.contains("p") || !t["p"].is_number()) throw Error(Errc::InvalidInput, "pmf entry without p");
    pmf[set_from_json(t.value("set", Json::array()), n, "process")] += t["p"].get<double>();
  }
  return sr::PointProcess(n, std::move(pmf));
}

Json to_json(const paving::PavingResult& res, bool with_timing) {
  Json j{{"method", paving::to_string(res.method)},
         {"r", res.r},
         {"alpha", number(res.alpha)},
         {"lambda", number(res.lambda)},
         {"bound", number(res.bound)},
         {"partition", parts_json(res.partition)},
         {"per_part_maxroot", numbers(res.per_part_maxroot)},
         {"certified", res.certified}};
  if (res.method == paving::Method::TwoStage) {
    j["part_labels"] = res.part_labels;
    j["num_parts"] = res.num_parts;
    j["stage_one"] = parts_json(res.stage_one);
  }
  if (res.method == paving::Method::Descent) j["reference_maxroot"] = number(res.reference_maxroot);
  if (with_timing) j["runtime_ms"] = res.runtime_ms;
  return j;
}

Json to_json(const paving::CertifiedBound& b) {
  return Json{{"method", "barrier"},
              {"bound", number(b.bound)},
              {"best_b", number(b.best_b)},
              {"alpha", number(b.alpha)},
              {"runs", b.runs},
              {"steps_checked", b.steps_checked},
              {"phi_bound_holds", b.phi_bound_holds},
              {"uniform_delta_holds", b.uniform_delta_holds}};
}

Json to_json(const sr::SrPavingReport& rep, bool with_timing) {
  Json j = to_json(rep.paving, with_timing);
  j["per_part_rootnorm"] = numbers(rep.per_part_rootnorm);
  j["entropy_gaps"] = numbers(rep.entropy_gaps);
  j["epsilon"] = number(rep.epsilon);
  return j;
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::IOError, "cannot read " + path);
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::IOError, path + ": " + e.what());
  }
}

void write_text_file(const std::string& path, const std::string& text) {
  if (path == "-") {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream out(path);
  if (!out) throw Error(Errc::IOError, "cannot write " + path);
  out << text;
  if (!out) throw Error(Errc::IOError, "write failed for " + path);
}

}  // namespace srpave::io
