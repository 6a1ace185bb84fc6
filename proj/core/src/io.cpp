#include "k3c/io.hpp"

#include <fstream>
#include <limits>
#include <sstream>

namespace k3c::io {

namespace {

[[noreturn]] void invalid(std::string const& message, std::string const& where) {
  throw Error("invalid_input", message, where);
}

Json const& field(Json const& j, char const* key, std::string const& where) {
  if (!j.is_object()) invalid("expected an object", where);
  auto it = j.find(key);
  if (it == j.end()) invalid(std::string("missing field '") + key + "'", where);
  return *it;
}

Json const& array(Json const& j, std::string const& where) {
  if (!j.is_array()) invalid("expected an array", where);
  return j;
}

std::string at(std::string const& where, std::size_t i) { return where + "[" + std::to_string(i) + "]"; }

// Exact value of a JSON real: a double is a dyadic rational.
Rational real_from_json(Json const& j, std::string const& where) {
  if (j.is_number_integer() || j.is_string()) return rational_from_json(j, where);
  if (j.is_number_float()) return GaussRational::from_double(j.get<double>(), 0.0).re;
  invalid("expected a real number", where);
}

}  // namespace

Json parse_json(std::string const& text, std::string const& source) {
  try {
    return Json::parse(text);
  } catch (nlohmann::json::parse_error const& e) {
    throw Error("malformed_json", e.what(), source + ":" + std::to_string(e.byte));
  }
}

Json read_json_file(std::string const& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("io_error", "cannot open file", path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_json(ss.str(), path);
}

std::string dump(Json const& j) { return j.dump(2) + "\n"; }

Json error_to_json(Error const& e) {
  Json inner = Json::object();
  inner["code"] = e.code();
  inner["message"] = e.what();
  inner["location"] = e.location();
  Json out = Json::object();
  out["error"] = inner;
  return out;
}

Integer integer_from_json(Json const& j, std::string const& where) {
  if (j.is_number_unsigned()) return Integer(j.get<std::uint64_t>());
  if (j.is_number_integer()) return Integer(j.get<std::int64_t>());
  if (j.is_string()) {
    Rational q = parse_rational(j.get<std::string>());
    if (denominator(q) != 1) invalid("expected an integer", where);
    return numerator(q);
  }
  if (j.is_number_float()) {
    double x = j.get<double>();
    if (std::nearbyint(x) == x && std::abs(x) < 9.0e15) return Integer(static_cast<long long>(x));
  }
  invalid("expected an integer", where);
}

Json to_json(Integer const& v) {
  if (v >= std::numeric_limits<std::int64_t>::min() && v <= std::numeric_limits<std::int64_t>::max())
    return Json(static_cast<std::int64_t>(v));
  return Json(v.str());
}

Rational rational_from_json(Json const& j, std::string const& where) {
  if (j.is_number_integer()) return Rational(integer_from_json(j, where));
  if (j.is_string()) {
    try {
      return parse_rational(j.get<std::string>());
    } catch (Error const& e) {
      throw Error(e.code(), e.what(), where);
    }
  }
  invalid("expected an integer or a \"p/q\" string", where);
}

Json to_json(Rational const& q) { return Json(to_string(q)); }

IntVector int_vector_from_json(Json const& j, std::string const& where) {
  IntVector v;
  for (std::size_t i = 0; i < array(j, where).size(); ++i) v.push_back(integer_from_json(j[i], at(where, i)));
  return v;
}

RatVector rational_vector_from_json(Json const& j, std::string const& where) {
  RatVector v;
  for (std::size_t i = 0; i < array(j, where).size(); ++i) v.push_back(rational_from_json(j[i], at(where, i)));
  return v;
}

IntMatrix int_matrix_from_json(Json const& j, std::string const& where) {
  std::vector<IntVector> rows;
  for (std::size_t i = 0; i < array(j, where).size(); ++i) rows.push_back(int_vector_from_json(j[i], at(where, i)));
  std::size_t cols = rows.empty() ? 0 : rows[0].size();
  IntMatrix m(rows.size(), cols);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != cols) invalid("ragged matrix", at(where, i));
    for (std::size_t k = 0; k < cols; ++k) m(i, k) = rows[i][k];
  }
  return m;
}

Json to_json(IntVector const& v) {
  Json out = Json::array();
  for (auto const& x : v) out.push_back(to_json(x));
  return out;
}

Json to_json(RatVector const& v) {
  Json out = Json::array();
  for (auto const& x : v) out.push_back(to_json(x));
  return out;
}

Json to_json(IntMatrix const& m) {
  Json out = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) out.push_back(to_json(m.row(i)));
  return out;
}

Json to_json(RatMatrix const& m) {
  Json out = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) out.push_back(to_json(m.row(i)));
  return out;
}

Lattice lattice_from_json(Json const& j) {
  if (j.is_object() && j.contains("builtin")) {
    std::string name = j["builtin"].is_string() ? j["builtin"].get<std::string>() : "";
    if (name == "K3") return build_k3_lattice();
    if (name == "L2d") {
      Integer d = integer_from_json(field(j, "d", "$"), "$.d");
      if (d < 1 || d > 1000000) invalid("polarization degree out of range", "$.d");
      return build_polarized_lattice(static_cast<int>(d)).lattice;
    }
    invalid("unknown builtin lattice", "$.builtin");
  }
  IntMatrix gram = int_matrix_from_json(field(j, "gram", "$"), "$.gram");
  if (j.contains("rank") && integer_from_json(j["rank"], "$.rank") != Integer(gram.rows()))
    invalid("rank does not match gram size", "$.rank");
  std::vector<std::string> labels;
  if (j.contains("labels")) {
    for (std::size_t i = 0; i < array(j["labels"], "$.labels").size(); ++i) {
      if (!j["labels"][i].is_string()) invalid("labels must be strings", at("$.labels", i));
      labels.push_back(j["labels"][i].get<std::string>());
    }
  }
  return Lattice(std::move(gram), std::move(labels));
}

Json to_json(Lattice const& l) {
  Json out = Json::object();
  out["rank"] = l.rank();
  out["gram"] = to_json(l.gram());
  if (!l.labels().empty()) out["labels"] = l.labels();
  return out;
}

RationalSubspace subspace_from_json(Json const& j) {
  Json const& vs = j.is_array() ? j : field(j, "vectors", "$");
  std::vector<RatVector> basis;
  for (std::size_t i = 0; i < array(vs, "$.vectors").size(); ++i)
    basis.push_back(rational_vector_from_json(vs[i], at("$.vectors", i)));
  return RationalSubspace(std::move(basis));
}

GaussRational complex_from_json(Json const& j, std::string const& where) {
  if (j.is_array()) {
    if (j.size() != 2) invalid("complex numbers are [re, im] pairs", where);
    return {real_from_json(j[0], where + "[0]"), real_from_json(j[1], where + "[1]")};
  }
  return {real_from_json(j, where), Rational(0)};
}

Json to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

WeierstrassFamily family_from_json(Json const& j) {
  auto poly = [&](char const* key) {
    std::string where = std::string("$.") + key;
    Json const& cs = array(field(j, key, "$"), where);
    std::vector<GaussRational> c;
    for (std::size_t i = 0; i < cs.size(); ++i) c.push_back(complex_from_json(cs[i], at(where, i)));
    return ExactPolynomial(std::move(c));
  };
  return WeierstrassFamily(poly("A"), poly("B"));
}

Json to_json(WeierstrassFamily const& f) {
  auto poly = [](ExactPolynomial const& p) {
    Json out = Json::array();
    for (auto const& c : p.coefficients()) out.push_back(Json::array({to_string(c.re), to_string(c.im)}));
    return out;
  };
  Json out = Json::object();
  out["A"] = poly(f.a());
  out["B"] = poly(f.b());
  return out;
}

FiniteMetricSpace metric_from_json(Json const& j) {
  Json const& rows = array(field(j, "dist", "$"), "$.dist");
  std::size_t n = rows.size();
  if (j.contains("n") && integer_from_json(j["n"], "$.n") != Integer(n)) invalid("n does not match dist size", "$.n");
  Eigen::MatrixXd d(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    Json const& row = array(rows[i], at("$.dist", i));
    if (row.size() != n) invalid("distance matrix is not square", at("$.dist", i));
    for (std::size_t k = 0; k < n; ++k) {
      if (!row[k].is_number()) invalid("distances must be numbers", at(at("$.dist", i), k));
      d(i, k) = row[k].get<double>();
    }
  }
  std::vector<std::string> labels;
  if (j.contains("meta") && j["meta"].is_object() && j["meta"].contains("labels")) {
    Json const& ls = array(j["meta"]["labels"], "$.meta.labels");
    for (std::size_t i = 0; i < ls.size(); ++i) {
      if (!ls[i].is_string()) invalid("labels must be strings", at("$.meta.labels", i));
      labels.push_back(ls[i].get<std::string>());
    }
  }
  return FiniteMetricSpace(std::move(d), std::move(labels));
}

Json to_json(FiniteMetricSpace const& m, Json meta) {
  Json out = Json::object();
  out["n"] = m.size();
  Json rows = Json::array();
  for (std::size_t i = 0; i < m.size(); ++i) {
    Json row = Json::array();
    for (std::size_t k = 0; k < m.size(); ++k) row.push_back(m(i, k));
    rows.push_back(std::move(row));
  }
  out["dist"] = std::move(rows);
  if (!m.labels().empty()) meta["labels"] = m.labels();
  out["meta"] = std::move(meta);
  return out;
}

FlatTorus torus_from_json(Json const& j) {
  Json const& g = j.is_array() ? j : field(j, "gram", "$");
  std::string const where = j.is_array() ? "$" : "$.gram";
  std::size_t n = array(g, where).size();
  Eigen::MatrixXd m(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    Json const& row = array(g[i], at(where, i));
    if (row.size() != n) invalid("torus gram is not square", at(where, i));
    for (std::size_t k = 0; k < n; ++k) {
      if (row[k].is_string()) {
        m(i, k) = rational_from_json(row[k], at(at(where, i), k)).convert_to<double>();
      } else {
        if (!row[k].is_number()) invalid("gram entries must be numbers", at(at(where, i), k));
        m(i, k) = row[k].get<double>();
      }
    }
  }
  return FlatTorus(std::move(m));
}

CollapseInput collapse_input_from_json(Json const& j) {
  Json const& v = field(j, "variant", "$");
  if (!v.is_string()) invalid("variant must be a string", "$.variant");
  switch (parse_collapse_variant(v.get<std::string>())) {
    case CollapseVariant::BoundaryLine: {
      BoundaryLineInput in{family_from_json(field(j, "family", "$")), std::nullopt};
      if (j.contains("metadata")) {
        Json const& md = j["metadata"];
        in.metadata = LineMetadata{int_vector_from_json(field(md, "e", "$.metadata"), "$.metadata.e"),
                                   int_vector_from_json(field(md, "v", "$.metadata"), "$.metadata.v")};
      }
      return in;
    }
    case CollapseVariant::BoundaryPoint: return BoundaryPointInput{};
    case CollapseVariant::KummerInterior: {
      FlatTorus t = torus_from_json(field(j, "gram", "$"));
      if (t.rank() != 4) invalid("kummer_interior needs a rank-4 gram", "$.gram");
      return KummerInput{std::move(t)};
    }
    case CollapseVariant::DeepStratumTorus: {
      FlatTorus t = torus_from_json(field(j, "gram", "$"));
      if (t.rank() > 3) invalid("deep_stratum_torus needs rank 1, 2 or 3", "$.gram");
      if (j.contains("rank") && integer_from_json(j["rank"], "$.rank") != Integer(t.rank()))
        invalid("rank does not match gram size", "$.rank");
      return DeepStratumInput{std::move(t)};
    }
  }
  invalid("unknown variant", "$.variant");
}

std::vector<CollapseInput> collapse_path_from_json(Json const& j) {
  Json const& items = j.is_array() ? j : field(j, "path", "$");
  std::vector<CollapseInput> out;
  for (std::size_t i = 0; i < array(items, "$.path").size(); ++i) {
    try {
      out.push_back(collapse_input_from_json(items[i]));
    } catch (Error const& e) {
      throw Error(e.code(), e.what(), at("$.path", i) + (e.location().empty() ? "" : " " + e.location()));
    }
  }
  return out;
}

}  // namespace k3c::io
