#pragma once

#include <string>

#include "json.hpp"
#include "srpave/linalg.hpp"
#include "srpave/multi_affine.hpp"
#include "srpave/multi_degree.hpp"
#include "srpave/paving.hpp"
#include "srpave/sr_process.hpp"

namespace srpave::io {

using Json = nlohmann::ordered_json;

/// {"n": int, "terms": [{"vars": [int...], "coeff": float}...]}; vars is the
/// monomial's variable set. Zero coefficients are omitted on output.
Json to_json(const MultiAffine& p);
MultiAffine multi_affine_from_json(const Json& j);

/// Same layout with "vars" an exponent vector of length n and an optional
/// "caps" array; without caps each variable's cap is its largest exponent.
Json to_json(const MultiDegree& p);
MultiDegree multi_degree_from_json(const Json& j);

/// {"n": int, "rows": [[float...]...]}; input must be symmetric to 1e-12.
Json matrix_to_json(const linalg::Matrix& k);
linalg::Matrix matrix_from_json(const Json& j);

/// {"n": int, "pmf": [{"set": [ints], "p": float}...]}; omitted sets are 0.
Json to_json(const sr::PointProcess& x);
sr::PointProcess process_from_json(const Json& j);

/// {method, r, alpha, lambda, bound, partition, per_part_maxroot, certified,
/// runtime_ms}; two-stage reports add part_labels and num_parts.
Json to_json(const paving::PavingResult& res, bool with_timing = true);

Json to_json(const paving::CertifiedBound& b);

/// sr_paving report: the paving record plus per_part_rootnorm,
/// entropy_gaps and epsilon.
Json to_json(const sr::SrPavingReport& rep, bool with_timing = true);

/// Throws IOError on unreadable files or malformed JSON.
Json read_json_file(const std::string& path);
/// Writes dump(2) plus a newline; "-" means stdout. Throws IOError.
void write_text_file(const std::string& path, const std::string& text);

}  // namespace srpave::io
