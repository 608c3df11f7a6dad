#include "tsmkit/io.hpp"

#include <cctype>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

namespace tsmkit {

namespace {

RMat matrix_from_json(const json& j, int dim, int index) {
  RMat m(dim, dim);
  if (!j.is_array()) throw DimensionError("structure matrix " + std::to_string(index) + " is not an array", index);
  if (!j.empty() && j.front().is_array()) {
    if (static_cast<int>(j.size()) != dim)
      throw DimensionError("structure matrix " + std::to_string(index) + " has " + std::to_string(j.size()) +
                               " rows, expected " + std::to_string(dim),
                           index);
    for (int r = 0; r < dim; ++r) {
      if (!j[r].is_array() || static_cast<int>(j[r].size()) != dim)
        throw DimensionError("structure matrix " + std::to_string(index) + " row " + std::to_string(r) +
                                 " has wrong length, expected " + std::to_string(dim),
                             index);
      for (int c = 0; c < dim; ++c) m(r, c) = j[r][c].get<double>();
    }
    return m;
  }
  if (static_cast<int>(j.size()) != dim * dim)
    throw DimensionError("structure matrix " + std::to_string(index) + " has " + std::to_string(j.size()) +
                             " entries, expected " + std::to_string(dim * dim),
                         index);
  for (int r = 0; r < dim; ++r)
    for (int c = 0; c < dim; ++c) m(r, c) = j[r * dim + c].get<double>();
  return m;
}

}  // namespace

GroupSpec group_from_json(const json& j) {
  if (!j.is_object()) throw std::invalid_argument("group spec must be a JSON object");
  for (const char* key : {"n", "m", "U"})
    if (!j.contains(key)) throw std::invalid_argument(std::string("group spec is missing \"") + key + "\"");
  const int n = j.at("n").get<int>();
  const int m = j.at("m").get<int>();
  if (n < 1 || m < 1) throw DimensionError("group spec needs n >= 1 and m >= 1", -1);
  const json& u = j.at("U");
  if (!u.is_array()) throw std::invalid_argument("group spec \"U\" must be a list of matrices");
  if (static_cast<int>(u.size()) != m)
    throw DimensionError("group spec lists " + std::to_string(u.size()) + " matrices but m = " + std::to_string(m),
                         static_cast<int>(u.size()));
  std::vector<RMat> mats;
  for (int k = 0; k < m; ++k) mats.push_back(matrix_from_json(u[k], 2 * n, k));
  GroupMode mode = GroupMode::metivier;
  if (j.contains("mode")) mode = parse_group_mode(j.at("mode").get<std::string>());
  return {StepTwoGroup(n, m, std::move(mats)), mode};
}

json matrix_to_json(const RMat& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

json group_to_json(const StepTwoGroup& group, GroupMode mode) {
  json u = json::array();
  for (const auto& a : group.structure()) u.push_back(matrix_to_json(a));
  return {{"n", group.n()}, {"m", group.m()}, {"U", u}, {"mode", to_string(mode)}};
}

GroupSpec load_group(const std::string& path_or_name) {
  if (path_or_name == "heisenberg") return {heisenberg_group(1), GroupMode::heisenberg};
  if (path_or_name.rfind("heisenberg:", 0) == 0) {
    const int n = std::stoi(path_or_name.substr(11));
    return {heisenberg_group(n), GroupMode::heisenberg};
  }
  if (path_or_name == "quaternionic") return {quaternionic_group(), GroupMode::htype};
  return group_from_json(read_json_file(path_or_name));
}

std::string group_hash(const StepTwoGroup& group) {
  json u = json::array();
  for (const auto& a : group.structure()) u.push_back(matrix_to_json(a));
  const std::string text = json{{"n", group.n()}, {"m", group.m()}, {"U", u}}.dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

json complex_to_json(cplx c) { return json::array({c.real(), c.imag()}); }

json vector_to_json(const RVec& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

json vector_to_json(const CVec& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(complex_to_json(v[i]));
  return out;
}

json to_json(const ValidationReport& r) {
  json conds = json::array();
  for (const auto& c : r.conditions)
    conds.push_back({{"name", c.name}, {"pass", c.pass}, {"residual", c.residual}, {"tolerance", c.tolerance}});
  json out = {{"mode", to_string(r.mode)}, {"n", r.n}, {"m", r.m}, {"conditions", conds}, {"all_pass", r.all_pass()}};
  if (r.metivier) {
    const auto& mv = *r.metivier;
    out["metivier"] = {{"status", to_string(mv.status)},
                       {"samples", mv.samples},
                       {"min_abs_det", mv.min_abs_det},
                       {"argmin_lambda", vector_to_json(mv.argmin_lambda)},
                       {"tolerance", mv.tolerance}};
  }
  return out;
}

json to_json(const ReducedFrame& f, bool include_matrices) {
  json out = {{"lambda", vector_to_json(f.lambda)},
              {"mu", vector_to_json(f.mu)},
              {"orthogonality_residual", f.orthogonality_residual},
              {"conjugation_residual", f.conjugation_residual}};
  if (include_matrices) {
    out["V"] = matrix_to_json(f.V);
    out["A"] = matrix_to_json(f.A);
    out["Ucanon"] = matrix_to_json(f.Ucanon);
  }
  return out;
}

json to_json(const TwistTable& t) {
  auto cm = [](const CMat& m) {
    json rows = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      json row = json::array();
      for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(complex_to_json(m(r, c)));
      rows.push_back(std::move(row));
    }
    return rows;
  };
  return {{"lambda", vector_to_json(t.lambda)}, {"alpha", cm(t.alpha)}, {"beta", cm(t.beta)},
          {"nu", cm(t.nu)}, {"eta", cm(t.eta)}};
}

json to_json(const BiPolynomial& p) {
  json out = json::array();
  for (const auto& [idx, c] : p.terms())
    out.push_back({{"alpha", idx.alpha_vec()}, {"beta", idx.beta_vec()}, {"re", c.real()}, {"im", c.imag()}});
  return out;
}

BiPolynomial bipolynomial_from_json(const json& j, int n) {
  if (!j.is_array()) throw std::invalid_argument("polynomial must be a list of terms");
  BiPolynomial p(n);
  for (const auto& t : j) {
    const auto alpha = t.at("alpha").get<std::vector<int>>();
    const auto beta = t.at("beta").get<std::vector<int>>();
    if (static_cast<int>(alpha.size()) != n || static_cast<int>(beta.size()) != n)
      throw DimensionError("polynomial term has multi-index of wrong length", -1);
    const double re = t.value("re", 0.0);
    const double im = t.value("im", 0.0);
    p.add_term(BiIndex(alpha, beta), cplx(re, im));
  }
  return p;
}

json to_json(const RadialSum& r) {
  json out = json::array();
  for (const auto& t : r.terms())
    out.push_back({{"re_c", t.c.real()}, {"im_c", t.c.imag()}, {"re_a", t.a.real()}, {"im_a", t.a.imag()}, {"k", t.k}});
  return out;
}

RadialSum radial_from_json(const json& j) {
  if (!j.is_array()) throw std::invalid_argument("radial sum must be a list of terms");
  RadialSum r;
  for (const auto& t : j)
    r.add(cplx(t.value("re_c", 0.0), t.value("im_c", 0.0)), cplx(t.value("re_a", 0.0), t.value("im_a", 0.0)),
          t.value("k", 0));
  return r;
}

json to_json(const TypeFunction& f) {
  json s = json::array();
  for (const auto& [radial, angular] : f.summands()) s.push_back({{"radial", to_json(radial)}, {"angular", to_json(angular)}});
  return {{"n", f.n()}, {"summands", s}};
}

TypeFunction type_function_from_json(const json& j) {
  if (!j.is_object() || !j.contains("n") || !j.contains("summands"))
    throw std::invalid_argument("type function needs \"n\" and \"summands\"");
  const int n = j.at("n").get<int>();
  TypeFunction f(n);
  for (const auto& s : j.at("summands")) {
    const RadialSum r = s.contains("radial") ? radial_from_json(s.at("radial")) : RadialSum::constant(1.0);
    const BiPolynomial p =
        s.contains("angular") ? bipolynomial_from_json(s.at("angular"), n) : BiPolynomial::constant(n, 1.0);
    f += TypeFunction::product(r, p);
  }
  return f;
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw std::runtime_error("'" + path + "' is not valid JSON: " + e.what());
  }
}

RVec parse_real_list(const std::string& csv) {
  std::vector<double> vals;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      throw std::invalid_argument("'" + item + "' is not a number");
    }
    while (used < item.size() && std::isspace(static_cast<unsigned char>(item[used]))) ++used;
    if (used != item.size()) throw std::invalid_argument("'" + item + "' is not a number");
    vals.push_back(v);
  }
  if (vals.empty()) throw std::invalid_argument("empty number list");
  return Eigen::Map<RVec>(vals.data(), static_cast<Eigen::Index>(vals.size()));
}

CVec parse_complex_list(const std::string& csv) {
  const RVec r = parse_real_list(csv);
  if (r.size() % 2 != 0) throw std::invalid_argument("complex list needs re,im pairs");
  CVec z(r.size() / 2);
  for (Eigen::Index i = 0; i < z.size(); ++i) z[i] = cplx(r[2 * i], r[2 * i + 1]);
  return z;
}

}  // namespace tsmkit
