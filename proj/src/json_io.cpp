#include "hyparr/json_io.hpp"

#include <fstream>
#include <set>
#include <sstream>

namespace hyparr {

Json to_json(const Rational& r) { return r.str(); }

Rational rational_from_json(const Json& j) {
  if (j.is_number_integer()) return Rational(static_cast<long>(j.get<long long>()));
  if (j.is_string()) return Rational::from_string(j.get<std::string>());
  throw FormatError("expected a rational (string \"p/q\" or integer)");
}

Json to_json(const Mat& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j).str());
    rows.push_back(std::move(row));
  }
  return rows;
}

Mat mat_from_json(const Json& j, Eigen::Index rows, Eigen::Index cols) {
  if (!j.is_array()) throw FormatError("matrix must be an array of rows");
  if (static_cast<Eigen::Index>(j.size()) != rows) throw FormatError("matrix has wrong row count");
  Mat m = zero_mat(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const Json& row = j[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols)
      throw FormatError("matrix has wrong column count in row " + std::to_string(i));
    for (Eigen::Index c = 0; c < cols; ++c) m(i, c) = rational_from_json(row[static_cast<std::size_t>(c)]);
  }
  return m;
}

RowVec covector_from_json(const Json& j, Eigen::Index dim) {
  if (!j.is_array() || static_cast<Eigen::Index>(j.size()) != dim) throw FormatError("covector has wrong length");
  RowVec r(dim);
  for (Eigen::Index c = 0; c < dim; ++c) r(c) = rational_from_json(j[static_cast<std::size_t>(c)]);
  return r;
}

Json to_json(const Arrangement& arr) {
  Json j;
  j["dim"] = arr.dim;
  Json hs = Json::array();
  for (const auto& h : arr.hyperplanes) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < h.size(); ++c) row.push_back(h(c).str());
    hs.push_back(std::move(row));
  }
  j["hyperplanes"] = std::move(hs);
  return j;
}

Arrangement arrangement_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("dim") || !j.contains("hyperplanes"))
    throw FormatError("arrangement needs \"dim\" and \"hyperplanes\"");
  Eigen::Index dim = j.at("dim").get<Eigen::Index>();
  if (dim < 0) throw FormatError("negative dimension");
  std::vector<RowVec> rows;
  for (const auto& h : j.at("hyperplanes")) rows.push_back(covector_from_json(h, dim));
  return make_arrangement(dim, std::move(rows));
}

Json to_json(const FacePoset& poset) {
  Json j;
  j["arrangement"] = to_json(poset.arr);
  Json faces = Json::array();
  for (const auto& f : poset.faces) {
    Json jf;
    jf["signs"] = f.sign_string();
    jf["dim"] = f.dim;
    Json pt = Json::array();
    for (Eigen::Index c = 0; c < f.interior_point.size(); ++c) pt.push_back(f.interior_point(c).str());
    jf["interior_point"] = std::move(pt);
    faces.push_back(std::move(jf));
  }
  j["faces"] = std::move(faces);
  Json covers = Json::array();
  Json incidence = Json::object();
  for (const auto& [a, b] : poset.covers) {
    covers.push_back(Json::array({a, b}));
    incidence[std::to_string(a) + "->" + std::to_string(b)] = poset.incidence.at({a, b});
  }
  j["covers"] = std::move(covers);
  j["incidence"] = std::move(incidence);
  long long euler = 0;
  for (int i = 0; i < poset.size(); ++i) euler += (poset.dim_of(i) % 2 == 0) ? 1 : -1;
  j["euler"] = euler;
  return j;
}

Json to_json(const ChainComplex& cx) {
  Json j;
  j["lowest_degree"] = cx.lowest_degree;
  Json terms = Json::array();
  for (int i = 0; i < cx.num_terms(); ++i) {
    Json term;
    term["degree"] = cx.lowest_degree + i;
    term["dim"] = cx.term_dim(i);
    Json summands = Json::array();
    for (const auto& s : cx.terms[static_cast<std::size_t>(i)]) {
      Json js;
      js["label"] = s.label;
      js["dim"] = s.dim;
      summands.push_back(std::move(js));
    }
    term["summands"] = std::move(summands);
    terms.push_back(std::move(term));
  }
  j["terms"] = std::move(terms);
  Json diffs = Json::array();
  for (const auto& d : cx.diffs) diffs.push_back(to_json(d));
  j["differentials"] = std::move(diffs);
  return j;
}

Json to_json(const CohomologyReport& rep) {
  Json j;
  Json ranks = Json::object();
  for (const auto& [deg, r] : rep.ranks) ranks[std::to_string(deg)] = r;
  j["ranks"] = std::move(ranks);
  if (rep.h0_kernel_basis) j["h0_kernel_basis"] = to_json(*rep.h0_kernel_basis);
  if (rep.h0_cokernel_projection) j["h0_cokernel_projection"] = to_json(*rep.h0_cokernel_projection);
  return j;
}

Json to_json(const ConeSelection& sel, const FacePoset& poset) {
  Json j;
  j["tag"] = cone_tag_name(sel.tag);
  Json faces = Json::array();
  for (int id : sel.face_ids) faces.push_back(poset.faces[static_cast<std::size_t>(id)].sign_string());
  j["faces"] = std::move(faces);
  return j;
}

Json to_json(const ValidationReport& rep, const FacePoset& poset) {
  Json j;
  j["valid"] = rep.ok();
  j["shapes"] = rep.shapes_ok;
  j["gamma_functorial"] = rep.gamma_functorial;
  j["delta_functorial"] = rep.delta_functorial;
  j["axiom_i"] = rep.axiom_i;
  j["flop_well_defined"] = rep.flop_independent;
  j["axiom_ii"] = rep.axiom_ii;
  j["axiom_iii"] = rep.axiom_iii;
  if (!rep.first_failure.empty()) {
    j["first_failure"] = rep.first_failure;
    Json faces = Json::array();
    for (int f : rep.offending) faces.push_back(poset.faces[static_cast<std::size_t>(f)].sign_string());
    j["offending_faces"] = std::move(faces);
  }
  return j;
}

Json sheaf_to_json(const HyperbolicSheaf& q) {
  Json j;
  j["arrangement"] = to_json(q.poset.arr);
  Json faces = Json::array();
  for (const auto& f : q.poset.faces) faces.push_back(f.sign_string());
  j["faces"] = std::move(faces);
  Json dims = Json::array();
  for (auto d : q.dims) dims.push_back(d);
  j["dims"] = std::move(dims);
  Json gamma = Json::object(), delta = Json::object();
  for (const auto& [pr, m] : q.gamma) gamma[std::to_string(pr.first) + "->" + std::to_string(pr.second)] = to_json(m);
  for (const auto& [pr, m] : q.delta) delta[std::to_string(pr.second) + "->" + std::to_string(pr.first)] = to_json(m);
  j["gamma"] = std::move(gamma);
  j["delta"] = std::move(delta);
  return j;
}

namespace {

std::pair<int, int> parse_edge(const std::string& key) {
  auto pos = key.find("->");
  if (pos == std::string::npos) throw FormatError("bad structure-map key '" + key + "' (expected \"i->j\")");
  try {
    int a = std::stoi(key.substr(0, pos));
    int b = std::stoi(key.substr(pos + 2));
    return {a, b};
  } catch (const std::exception&) {
    throw FormatError("bad structure-map key '" + key + "'");
  }
}

}  // namespace

HyperbolicSheaf sheaf_from_json(const Json& j) {
  if (!j.is_object()) throw FormatError("sheaf file must be a JSON object");
  for (const char* k : {"arrangement", "faces", "dims", "gamma", "delta"})
    if (!j.contains(k)) throw FormatError(std::string("sheaf file missing \"") + k + "\"");
  Arrangement arr = arrangement_from_json(j.at("arrangement"));
  FacePoset poset = enumerate_faces(arr);

  const Json& jfaces = j.at("faces");
  if (!jfaces.is_array()) throw FormatError("\"faces\" must be an array of sign strings");
  std::vector<int> file_to_poset(jfaces.size(), -1);
  std::set<std::string> seen;
  std::ostringstream missing, extra;
  for (std::size_t i = 0; i < jfaces.size(); ++i) {
    std::string s = jfaces[i].get<std::string>();
    if (!seen.insert(s).second) throw FormatError("duplicate face '" + s + "' in sheaf file");
    int idx = poset.face_index(s);
    if (idx < 0) extra << " " << s;
    file_to_poset[i] = idx;
  }
  for (const auto& f : poset.faces)
    if (!seen.count(f.sign_string())) missing << " " << f.sign_string();
  if (!extra.str().empty() || !missing.str().empty()) {
    std::string msg = "face list does not enumerate the arrangement's faces:";
    if (!missing.str().empty()) msg += " missing:" + missing.str();
    if (!extra.str().empty()) msg += " not faces:" + extra.str();
    throw FormatError(msg);
  }

  HyperbolicSheaf q;
  q.poset = std::move(poset);
  const Json& jdims = j.at("dims");
  if (!jdims.is_array() || jdims.size() != jfaces.size()) throw FormatError("\"dims\" must match the face list");
  q.dims.assign(static_cast<std::size_t>(q.poset.size()), 0);
  for (std::size_t i = 0; i < jdims.size(); ++i) {
    long long d = jdims[i].get<long long>();
    if (d < 0) throw FormatError("negative dimension in \"dims\"");
    q.dims[static_cast<std::size_t>(file_to_poset[i])] = static_cast<Eigen::Index>(d);
  }

  auto read_maps = [&](const Json& maps, bool is_gamma) {
    for (const auto& [key, jm] : maps.items()) {
      auto [fi, fj] = parse_edge(key);
      if (fi < 0 || fj < 0 || fi >= static_cast<int>(file_to_poset.size()) || fj >= static_cast<int>(file_to_poset.size()))
        throw FormatError("structure-map key '" + key + "' indexes outside the face list");
      int lower = file_to_poset[static_cast<std::size_t>(is_gamma ? fi : fj)];
      int upper = file_to_poset[static_cast<std::size_t>(is_gamma ? fj : fi)];
      if (!q.poset.incidence.count({lower, upper}))
        throw FormatError("structure-map key '" + key + "' is not a covering pair");
      Eigen::Index rows = is_gamma ? q.dim_of(upper) : q.dim_of(lower);
      Eigen::Index cols = is_gamma ? q.dim_of(lower) : q.dim_of(upper);
      Mat m;
      try {
        m = mat_from_json(jm, rows, cols);
      } catch (const FormatError& e) {
        throw FormatError(std::string(is_gamma ? "gamma" : "delta") + " matrix for covering pair '" + key + "': " + e.what());
      }
      auto& store = is_gamma ? q.gamma : q.delta;
      store[{lower, upper}] = std::move(m);
    }
  };
  read_maps(j.at("gamma"), true);
  read_maps(j.at("delta"), false);
  for (const auto& pr : q.poset.covers) {
    if (!q.gamma.count(pr))
      throw FormatError("missing gamma matrix for covering pair " + q.poset.faces[static_cast<std::size_t>(pr.first)].sign_string() + "->" +
                        q.poset.faces[static_cast<std::size_t>(pr.second)].sign_string());
    if (!q.delta.count(pr))
      throw FormatError("missing delta matrix for covering pair " + q.poset.faces[static_cast<std::size_t>(pr.second)].sign_string() + "->" +
                        q.poset.faces[static_cast<std::size_t>(pr.first)].sign_string());
  }
  return q;
}

Json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open file: " + path);
  Json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError("malformed JSON in " + path + ": " + e.what());
  }
  return j;
}

void save_json_file(const std::string& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw FormatError("cannot write file: " + path);
  out << j.dump(2) << "\n";
}

HyperbolicSheaf read_sheaf(const std::string& path) { return sheaf_from_json(load_json_file(path)); }

void write_sheaf(const HyperbolicSheaf& q, const std::string& path) { save_json_file(path, sheaf_to_json(q)); }

}  // namespace hyparr
