#pragma once

#include <json.hpp>

#include <string>

#include "hyparr/calculus.hpp"

// JSON (de)serialization: arrangements, sheaves, complexes, reports.
// Rationals are strings "p/q" (or "p"), matrices row-major nested arrays,
// faces sign strings over "-0+" in hyperplane order.

namespace hyparr {

using Json = nlohmann::ordered_json;

Json to_json(const Rational& r);
Rational rational_from_json(const Json& j);

Json to_json(const Mat& m);
Mat mat_from_json(const Json& j, Eigen::Index rows, Eigen::Index cols);
RowVec covector_from_json(const Json& j, Eigen::Index dim);

Json to_json(const Arrangement& arr);
Arrangement arrangement_from_json(const Json& j);

Json to_json(const FacePoset& poset);

Json to_json(const ChainComplex& cx);
Json to_json(const CohomologyReport& rep);
Json to_json(const ConeSelection& sel, const FacePoset& poset);
Json to_json(const ValidationReport& rep, const FacePoset& poset);

Json sheaf_to_json(const HyperbolicSheaf& q);
HyperbolicSheaf sheaf_from_json(const Json& j);

/// File helpers; FormatError on malformed content.
Json load_json_file(const std::string& path);
void save_json_file(const std::string& path, const Json& j);
HyperbolicSheaf read_sheaf(const std::string& path);
void write_sheaf(const HyperbolicSheaf& q, const std::string& path);

}  // namespace hyparr
