#pragma once

// JSON (de)serialization and small text parsers shared by the CLI and the suites.

#include "tsmkit/bipolynomial.hpp"
#include "tsmkit/group.hpp"
#include "tsmkit/radial.hpp"
#include "tsmkit/symplectic.hpp"
#include "tsmkit/type_function.hpp"

#include <nlohmann/json.hpp>

#include <string>

namespace tsmkit {

using json = nlohmann::json;

struct GroupSpec {
  StepTwoGroup group;
  GroupMode mode = GroupMode::metivier;
};

/// {"n": int, "m": int, "U": [matrix, ...], "mode": "metivier"|"htype"|"heisenberg"}.
/// Each matrix is either a flat row-major list of (2n)^2 reals or a list of rows.
/// Shape errors throw DimensionError carrying the offending matrix index.
GroupSpec group_from_json(const json& j);
json group_to_json(const StepTwoGroup& group, GroupMode mode);
/// Also understands the names "heisenberg", "heisenberg:N" and "quaternionic".
GroupSpec load_group(const std::string& path_or_name);

/// 64-bit FNV-1a of the canonical JSON dump of the structure matrices.
std::string group_hash(const StepTwoGroup& group);

json to_json(const ValidationReport& r);
json to_json(const ReducedFrame& f, bool include_matrices);
json to_json(const TwistTable& t);

/// [{"alpha": [...], "beta": [...], "re": r, "im": i}, ...]
json to_json(const BiPolynomial& p);
BiPolynomial bipolynomial_from_json(const json& j, int n);

/// [{"re_c", "im_c", "re_a", "im_a", "k"}, ...]
json to_json(const RadialSum& r);
RadialSum radial_from_json(const json& j);

/// {"n": int, "summands": [{"radial": RadialSum, "angular": BiPolynomial}, ...]}
json to_json(const TypeFunction& f);
TypeFunction type_function_from_json(const json& j);

json read_json_file(const std::string& path);

/// "3,4,0" -> (3, 4, 0).
RVec parse_real_list(const std::string& csv);
/// Interleaved re,im pairs: "0.3,0,1,-2" -> (0.3, 1-2i).
CVec parse_complex_list(const std::string& csv);

json complex_to_json(cplx c);
json vector_to_json(const RVec& v);
json vector_to_json(const CVec& v);
json matrix_to_json(const RMat& m);

}  // namespace tsmkit
