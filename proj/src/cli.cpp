#include "hyparr/cli.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <fstream>
#include <ostream>
#include <sstream>

#include "hyparr/json_io.hpp"

namespace hyparr {

namespace {

std::string file_hash(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return fnv1a_hex(ss.str());
}

RowVec parse_covector(const std::string& text, Eigen::Index dim) {
  std::vector<Rational> vals;
  std::string cur;
  std::istringstream ss(text);
  while (std::getline(ss, cur, ',')) vals.push_back(Rational::from_string(cur));
  if (static_cast<Eigen::Index>(vals.size()) != dim)
    throw DomainError("covector has " + std::to_string(vals.size()) + " entries, expected " + std::to_string(dim));
  RowVec r(dim);
  for (Eigen::Index i = 0; i < dim; ++i) r(i) = vals[static_cast<std::size_t>(i)];
  return r;
}

std::vector<int> parse_indices(const std::string& text) {
  std::vector<int> out;
  if (text.empty()) return out;
  std::string cur;
  std::istringstream ss(text);
  while (std::getline(ss, cur, ',')) {
    try {
      out.push_back(std::stoi(cur));
    } catch (const std::exception&) {
      throw DomainError("bad hyperplane index '" + cur + "'");
    }
  }
  return out;
}

int face_by_signs(const FacePoset& poset, const std::string& signs) {
  if (signs.size() != static_cast<std::size_t>(poset.arr.size()))
    throw DomainError("face sign string has length " + std::to_string(signs.size()) + ", expected " + std::to_string(poset.arr.size()));
  for (char c : signs)
    if (c != '-' && c != '0' && c != '+') throw DomainError(std::string("bad sign character '") + c + "' in face address");
  int idx = poset.face_index(signs);
  if (idx < 0) throw DomainError("'" + signs + "' is not a realizable face of the arrangement");
  return idx;
}

Json dims_with_faces(const HyperbolicSheaf& q) {
  Json j = Json::object();
  for (int i = 0; i < q.poset.size(); ++i) j[q.poset.faces[static_cast<std::size_t>(i)].sign_string()] = q.dim_of(i);
  return j;
}

struct Driver {
  CLI::App app{"exact calculus of sheaf data on real central hyperplane arrangements"};
  std::string output_path;
  bool pretty = false;
  int jobs = 1;
  Json inputs = Json::object();
  Json result;
  int domain_status = 0;  // validate sets 1 on invalid sheaves

  std::string sheaf_path, arr_path;
  std::string face_signs, covector_text, flat_text, flatn_text, flatm_text;
  std::string variant;  // rgamma
  bool emit_complexes = false;

  Json load_input(const std::string& path) {
    inputs[path] = file_hash(path);
    return load_json_file(path);
  }
  HyperbolicSheaf sheaf(const std::string& path) { return sheaf_from_json(load_input(path)); }
  Arrangement arrangement(const std::string& path) {
    Json j = load_input(path);
    if (j.contains("hyperplanes")) return arrangement_from_json(j);
    if (j.contains("arrangement")) return arrangement_from_json(j.at("arrangement"));
    throw FormatError("file contains neither an arrangement nor a sheaf: " + path);
  }
  Flat flat_from_text(const Arrangement& arr, const std::string& text) {
    return flat_of_hyperplanes(arr, parse_indices(text));
  }
};

void register_commands(Driver& d) {
  auto* faces = d.app.add_subcommand("faces", "enumerate faces of an arrangement");
  faces->add_option("input", d.arr_path, "arrangement JSON file")->required();
  faces->callback([&d] {
    Arrangement arr = d.arrangement(d.arr_path);
    FacePoset poset = enumerate_faces(arr);
    d.result = to_json(poset);
    d.result["count"] = poset.size();
  });

  auto* dual = d.app.add_subcommand("dual", "dual arrangement from 1-dimensional flats");
  dual->add_option("input", d.arr_path)->required();
  dual->callback([&d] {
    Arrangement arr = d.arrangement(d.arr_path);
    Arrangement dl = dual_arrangement(arr);
    d.result["dual"] = to_json(dl);
    d.result["hash"] = dl.hash();
    if (!d.output_path.empty()) save_json_file(d.output_path, to_json(dl));
  });

  auto* validate_cmd = d.app.add_subcommand("validate", "run the axiom validator on a sheaf file");
  validate_cmd->add_option("input", d.sheaf_path)->required();
  validate_cmd->callback([&d] {
    HyperbolicSheaf q = d.sheaf(d.sheaf_path);
    ValidationReport rep = validate(q);
    d.result = to_json(rep, q.poset);
    d.result["arrangement_hash"] = q.poset.arr.hash();
    if (!rep.ok()) d.domain_status = 1;
  });

  auto* rgamma = d.app.add_subcommand("rgamma", "global cohomology (compact or full)");
  rgamma->add_option("input", d.sheaf_path)->required();
  auto* compact_flag = rgamma->add_flag("--compact", "gamma complex graded by dim");
  auto* full_flag = rgamma->add_flag("--full", "delta complex graded by dim - n");
  rgamma->add_flag("--emit-complex", d.emit_complexes, "include the chain complex");
  rgamma->callback([&d, compact_flag, full_flag] {
    bool compact = compact_flag->count() > 0;
    bool full = full_flag->count() > 0;
    if (compact == full) throw FormatError("rgamma needs exactly one of --compact or --full");
    HyperbolicSheaf q = d.sheaf(d.sheaf_path);
    CohomologyReport rep = compact ? rgamma_compact(q) : rgamma_full(q);
    d.result["variant"] = compact ? "compact" : "full";
    d.result["cohomology"] = to_json(rep);
    if (d.emit_complexes) d.result["complex"] = to_json(compact ? rgamma_compact_complex(q) : rgamma_full_complex(q));
  });

  auto* stalk = d.app.add_subcommand("stalk", "ordinary stalk complex at a face");
  stalk->add_option("input", d.sheaf_path)->required();
  stalk->add_option("--face", d.face_signs, "sign string over -0+ in hyperplane order")->required();
  stalk->add_flag("--emit-complex", d.emit_complexes);
  stalk->callback([&d] {
    HyperbolicSheaf q = d.sheaf(d.sheaf_path);
    int face = face_by_signs(q.poset, d.face_signs);
    d.result["face"] = d.face_signs;
    d.result["cohomology"] = to_json(ordinary_stalk(q, face));
    d.result["stalks_reconstruct_hyperbolic"] = hyperbolic_from_stalks_check(q, face);
    if (d.emit_complexes) d.result["complex"] = to_json(ordinary_stalk_complex(q, face));
  });

  auto* vanish = d.app.add_subcommand("vanish", "vanishing cycles along a polarization");
  vanish->add_option("input", d.sheaf_path)->required();
  vanish->add_option("--f", d.covector_text, "covector, comma-separated rationals")->required();
  vanish->add_option("--face", d.face_signs)->required();
  vanish->add_flag("--emit-complexes", d.emit_complexes);
  vanish->callback([&d] {
    HyperbolicSheaf q = d.sheaf(d.sheaf_path);
    int face = face_by_signs(q.poset, d.face_signs);
    RowVec f = parse_covector(d.covector_text, q.poset.arr.dim);
    VanishingCycles v = vanishing_cycles(q, f, face);
    d.result["dim"] = v.dim;
    d.result["gamma_acyclic"] = true;
    d.result["delta_acyclic"] = true;
    Json lap = Json::object();
    for (const auto& [deg, iso] : v.laplacian) lap[std::to_string(deg)] = iso;
    d.result["laplacian_iso"] = std::move(lap);
    d.result["selection"] = to_json(v.gamma_cx.selection, q.poset);
    if (d.emit_complexes) {
      d.result["gamma_complex"] = to_json(v.gamma_cx.complex());
      d.result["delta_complex"] = to_json(v.delta_cx.complex());
    }
  });

  auto* specialize_cmd = d.app.add_subcommand("specialize", "specialization along a flat");
  specialize_cmd->add_option("input", d.sheaf_path)->required();
  specialize_cmd->add_option("--flat", d.flat_text, "hyperplane indices cutting the flat; empty string for the whole space")
      ->required();
  specialize_cmd->callback([&d] {
    HyperbolicSheaf q = d.sheaf(d.sheaf_path);
    Flat L = d.flat_from_text(q.poset.arr, d.flat_text);
    SpecializeResult r = specialize(q, L);
    d.result["flat_dim"] = L.dim;
    d.result["product_arrangement"] = to_json(r.geometry.product);
    d.result["dims"] = dims_with_faces(r.sheaf);
    d.result["valid"] = true;
    if (!d.output_path.empty()) write_sheaf(r.sheaf, d.output_path);
  });

  auto* bispec = d.app.add_subcommand("bispec", "iterated vs one-shot specialization consistency");
  bispec->add_option("input", d.sheaf_path)->required();
  bispec->add_option("--flatN", d.flatn_text, "inner flat")->required();
  bispec->add_option("--flatM", d.flatm_text, "outer flat")->required();
  bispec->callback([&d] {
    HyperbolicSheaf q = d.sheaf(d.sheaf_path);
    Flat n = d.flat_from_text(q.poset.arr, d.flatn_text);
    Flat m = d.flat_from_text(q.poset.arr, d.flatm_text);
    d.result["consistent"] = bispec_consistency(q, n, m);
  });

  auto* four = d.app.add_subcommand("fourier", "transform over the dual arrangement");
  four->add_option("input", d.sheaf_path)->required();
  four->callback([&d] {
    HyperbolicSheaf q = d.sheaf(d.sheaf_path);
    FourierResult r = fourier(q);
    d.result["dual_arrangement"] = to_json(r.dual);
    d.result["dims"] = dims_with_faces(r.sheaf);
    int o_dual = r.sheaf.poset.minimal_face();
    int o = q.poset.minimal_face();
    d.result["zero_dual_stalk_equals_origin_stalk"] = (r.sheaf.dim_of(o_dual) == q.dim_of(o));
    if (!d.output_path.empty()) write_sheaf(r.sheaf, d.output_path);
  });

  auto* fcheck = d.app.add_subcommand("fourier-check", "double-complex route against the small-cone route");
  fcheck->add_option("input", d.sheaf_path)->required();
  fcheck->add_option("--face", d.face_signs, "dual face sign string (default: all)");
  fcheck->callback([&d] {
    HyperbolicSheaf q = d.sheaf(d.sheaf_path);
    if (d.face_signs.empty()) {
      d.result["all_dual_faces"] = fourier_cross_check_all(q);
    } else {
      FacePoset dposet = enumerate_faces(dual_arrangement(q.poset.arr));
      int a = face_by_signs(dposet, d.face_signs);
      d.result["dual_face"] = d.face_signs;
      d.result["consistent"] = fourier_cross_check(q, a);
    }
  });

  auto* micro = d.app.add_subcommand("microlocalize", "experimental relative transform after specialization");
  micro->add_option("input", d.sheaf_path)->required();
  micro->add_option("--flat", d.flat_text)->required();
  micro->callback([&d] {
    HyperbolicSheaf q = d.sheaf(d.sheaf_path);
    Flat L = d.flat_from_text(q.poset.arr, d.flat_text);
    MicroResult r = microlocalize_experimental(q, L);
    d.result["ok"] = r.ok;
    Json issues = Json::array();
    for (const auto& s : r.issues) issues.push_back(s);
    d.result["issues"] = std::move(issues);
    if (r.sheaf) {
      d.result["dims"] = dims_with_faces(*r.sheaf);
      if (!d.output_path.empty()) write_sheaf(*r.sheaf, d.output_path);
    }
    if (!r.ok) d.domain_status = 1;
  });

  auto* check = d.app.add_subcommand("check-identities", "cone identities of the dual arrangement");
  check->add_option("input", d.arr_path)->required();
  check->callback([&d] {
    Arrangement arr = d.arrangement(d.arr_path);
    FacePoset poset = enumerate_faces(arr);
    FacePoset dposet = enumerate_faces(dual_arrangement(arr));
    d.result["inclusion_exclusion"] = inclusion_exclusion_check(arr);
    d.result["monotone_cones"] = monotone_cones_check(poset, dposet);
  });
}

}  // namespace

int cli_main(const std::vector<std::string>& args, std::ostream& out) {
  Driver d;
  d.app.require_subcommand(1);
  d.app.fallthrough();
  d.app.add_option("-o,--output", d.output_path, "write the derived object to this file");
  d.app.add_flag("--pretty", d.pretty, "indent the JSON report");
  d.app.add_option("--jobs", d.jobs, "worker threads for bulk checks");
  register_commands(d);

  Json report;
  report["command"] = args;
  auto start = std::chrono::steady_clock::now();
  int status = 0;
  try {
    std::vector<const char*> argv;
    argv.push_back("hyparr");
    for (const auto& a : args) argv.push_back(a.c_str());
    // All option values are populated before final callbacks run; push the
    // thread count into the library just ahead of the command bodies.
    d.app.parse_complete_callback([&d] { set_worker_threads(d.jobs); });
    try {
      d.app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
      if (e.get_exit_code() == 0) {  // --help
        out << d.app.help() << "\n";
        return 0;
      }
      throw FormatError(std::string("argument error: ") + e.what());
    }
    report["result"] = d.result;
    status = d.domain_status;
  } catch (const FormatError& e) {
    report["error"] = Json{{"kind", "format"}, {"message", e.what()}};
    status = 2;
  } catch (const DomainError& e) {
    report["error"] = Json{{"kind", "domain"}, {"message", e.what()}};
    status = 1;
  } catch (const std::exception& e) {
    report["error"] = Json{{"kind", "internal"}, {"message", e.what()}};
    status = 2;
  }
  auto end = std::chrono::steady_clock::now();
  report["inputs"] = d.inputs;
  report["elapsed_ms"] = std::chrono::duration<double, std::milli>(end - start).count();
  report["status"] = status;
  out << (d.pretty ? report.dump(2) : report.dump()) << "\n";
  return status;
}

}  // namespace hyparr
