#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "k3c/collapse_map.hpp"
#include "k3c/error.hpp"
#include "k3c/exact.hpp"
#include "k3c/lattice.hpp"
#include "k3c/metric_space.hpp"
#include "k3c/weierstrass.hpp"

namespace k3c::io {

using Json = nlohmann::ordered_json;

// Reads and parses a file; malformed input raises malformed_json with the
// byte offset as location.
Json read_json_file(std::string const& path);
Json parse_json(std::string const& text, std::string const& source);
std::string dump(Json const& j);

Json error_to_json(Error const& e);

// Integers are JSON numbers when they fit in 64 bits, decimal strings
// otherwise. Rationals are "p/q" strings; plain integers are accepted too.
Integer integer_from_json(Json const& j, std::string const& where);
Json to_json(Integer const& v);
Rational rational_from_json(Json const& j, std::string const& where);
Json to_json(Rational const& q);

IntVector int_vector_from_json(Json const& j, std::string const& where);
RatVector rational_vector_from_json(Json const& j, std::string const& where);
IntMatrix int_matrix_from_json(Json const& j, std::string const& where);
Json to_json(IntVector const& v);
Json to_json(RatVector const& v);
Json to_json(IntMatrix const& m);
Json to_json(RatMatrix const& m);

// {"rank": n, "gram": [[...]], "labels": [...]}; alternatively
// {"builtin": "K3"} or {"builtin": "L2d", "d": d}.
Lattice lattice_from_json(Json const& j);
Json to_json(Lattice const& l);

// {"vectors": [[...], ...]} with integer or "p/q" entries.
RationalSubspace subspace_from_json(Json const& j);

// Complex numbers are [re, im] pairs or plain reals, converted exactly.
GaussRational complex_from_json(Json const& j, std::string const& where);
Json to_json(Complex z);
WeierstrassFamily family_from_json(Json const& j);
Json to_json(WeierstrassFamily const& f);

// {"n": n, "dist": [[...]], "meta": {"labels": [...], ...}}
FiniteMetricSpace metric_from_json(Json const& j);
Json to_json(FiniteMetricSpace const& m, Json meta = Json::object());

// {"gram": [[...]]} or a bare matrix.
FlatTorus torus_from_json(Json const& j);

// {"variant": name, "family": {...}, "metadata": {"e": [...], "v": [...]},
//  "gram": [[...]]}; fields as required by the variant.
CollapseInput collapse_input_from_json(Json const& j);
// {"path": [input, ...]} or a bare array.
std::vector<CollapseInput> collapse_path_from_json(Json const& j);

}  // namespace k3c::io
