#include "menuconnect/serialization.hpp"

#include <fstream>
#include <sstream>

namespace menuconnect {

using nlohmann::json;

namespace {

const json& field(const json& j, const char* name, const char* context) {
  auto it = j.find(name);
  if (it == j.end()) {
    throw SpecError(std::string(context) + ": missing field '" + name + "'");
  }
  return *it;
}

void check_menu_valid(const std::vector<Violation>& violations, const char* context) {
  if (violations.empty()) return;
  std::ostringstream os;
  os << context << ": invalid menu:";
  for (const Violation& v : violations) {
    os << " [option " << v.option << "] " << v.what << ";";
  }
  throw SpecError(os.str());
}

}  // namespace

json to_json(const RochetMenu& menu) {
  json options = json::array();
  for (const RochetOption& opt : menu.options) {
    options.push_back({{"allocation", opt.allocation}, {"price", opt.price}});
  }
  return {{"kind", "rochet"}, {"m", 1}, {"n", menu.items()}, {"options", std::move(options)}};
}

json to_json(const AmaMenu& menu) {
  json options = json::array();
  for (const AmaOption& opt : menu.options) {
    options.push_back({{"allocation", opt.allocation}, {"boost", opt.boost}});
  }
  return {{"kind", "ama"},
          {"m", menu.num_buyers},
          {"n", menu.num_items},
          {"options", std::move(options)}};
}

std::string menu_kind_of(const json& j) {
  const std::string kind = field(j, "kind", "menu").get<std::string>();
  if (kind != "rochet" && kind != "ama") {
    throw SpecError("menu: unknown kind '" + kind + "'");
  }
  return kind;
}

RochetMenu rochet_menu_from_json(const json& j) {
  if (menu_kind_of(j) != "rochet") throw SpecError("menu: expected kind 'rochet'");
  RochetMenu menu;
  const int items = field(j, "n", "menu").get<int>();
  for (const json& option : field(j, "options", "menu")) {
    RochetOption opt;
    opt.allocation = field(option, "allocation", "menu option").get<std::vector<double>>();
    opt.price = field(option, "price", "menu option").get<double>();
    if (static_cast<int>(opt.allocation.size()) != items) {
      throw SpecError("menu option: allocation length differs from n");
    }
    menu.options.push_back(std::move(opt));
  }
  check_menu_valid(validate(menu), "menu");
  return menu;
}

AmaMenu ama_menu_from_json(const json& j) {
  if (menu_kind_of(j) != "ama") throw SpecError("menu: expected kind 'ama'");
  AmaMenu menu;
  menu.num_buyers = field(j, "m", "menu").get<int>();
  menu.num_items = field(j, "n", "menu").get<int>();
  for (const json& option : field(j, "options", "menu")) {
    AmaOption opt;
    opt.allocation =
        field(option, "allocation", "menu option").get<std::vector<std::vector<double>>>();
    opt.boost = field(option, "boost", "menu option").get<double>();
    menu.options.push_back(std::move(opt));
  }
  check_menu_valid(validate(menu), "menu");
  return menu;
}

namespace {

template <class M, class FromJson>
MenuPath<M> path_from_json_impl(const json& j, FromJson from, const char* expected_kind) {
  if (menu_kind_of(j) != expected_kind) {
    throw SpecError(std::string("path: expected kind '") + expected_kind + "'");
  }
  MenuPath<M> path;
  for (const json& bp : field(j, "breakpoints", "path")) {
    path.breakpoints.push_back(from(bp));
  }
  check_path(path);
  return path;
}

template <class M>
json path_to_json_impl(const MenuPath<M>& path, const char* kind) {
  json breakpoints = json::array();
  for (const M& bp : path.breakpoints) breakpoints.push_back(to_json(bp));
  return {{"kind", kind}, {"breakpoints", std::move(breakpoints)}};
}

}  // namespace

json to_json(const RochetPath& path) { return path_to_json_impl(path, "rochet"); }
json to_json(const AmaPath& path) { return path_to_json_impl(path, "ama"); }

RochetPath rochet_path_from_json(const json& j) {
  return path_from_json_impl<RochetMenu>(j, rochet_menu_from_json, "rochet");
}

AmaPath ama_path_from_json(const json& j) {
  return path_from_json_impl<AmaMenu>(j, ama_menu_from_json, "ama");
}

json to_json(const ReductionSet& set) { return {{"indices", set.indices}}; }

ReductionSet reduction_set_from_json(const json& j, int option_count) {
  return make_reduction_set(field(j, "indices", "reduction set").get<std::vector<int>>(),
                            option_count);
}

json to_json(const DensitySpec& spec) {
  json j;
  switch (spec.kind) {
    case DensitySpec::Kind::uniform_box:
      j["kind"] = "uniform_box";
      j["rescale"] = spec.rescale;
      break;
    case DensitySpec::Kind::simplex_rejection:
      j["kind"] = "simplex_rejection";
      break;
    case DensitySpec::Kind::piecewise_1d: {
      j["kind"] = "piecewise_1d";
      json pieces = json::array();
      for (const DensityPiece& piece : spec.pieces) {
        pieces.push_back({{"upto", piece.upto}, {"density", piece.density}});
      }
      j["pieces"] = std::move(pieces);
      break;
    }
    case DensitySpec::Kind::product_of: {
      j["kind"] = "product_of";
      json buyers = json::array();
      for (const DensitySpec& buyer : spec.per_buyer) buyers.push_back(to_json(buyer));
      j["buyers"] = std::move(buyers);
      break;
    }
  }
  if (spec.density_bound) j["density_bound"] = *spec.density_bound;
  return j;
}

DensitySpec density_from_json(const json& j) {
  DensitySpec spec;
  const std::string kind = field(j, "kind", "density").get<std::string>();
  if (kind == "uniform_box") {
    spec.kind = DensitySpec::Kind::uniform_box;
    spec.rescale = j.value("rescale", false);
  } else if (kind == "simplex_rejection") {
    spec.kind = DensitySpec::Kind::simplex_rejection;
  } else if (kind == "piecewise_1d") {
    spec.kind = DensitySpec::Kind::piecewise_1d;
    for (const json& piece : field(j, "pieces", "density")) {
      spec.pieces.push_back(DensityPiece{field(piece, "upto", "density piece").get<double>(),
                                         field(piece, "density", "density piece").get<double>()});
    }
  } else if (kind == "product_of") {
    spec.kind = DensitySpec::Kind::product_of;
    for (const json& buyer : field(j, "buyers", "density")) {
      spec.per_buyer.push_back(density_from_json(buyer));
    }
  } else {
    throw SpecError("density: unknown kind '" + kind + "'");
  }
  if (j.contains("density_bound")) spec.density_bound = j["density_bound"].get<double>();
  validate_spec(spec);
  return spec;
}

json to_json(const PathReport& report) {
  return {{"t_grid", report.t_grid},
          {"estimate", report.estimate},
          {"stderr", report.stderr_value},
          {"min_slack_at_t", report.min_slack_at_t},
          {"epsilon", report.epsilon},
          {"min_per_sample_slack", report.min_per_sample_slack},
          {"samples", report.samples},
          {"pass", report.pass}};
}

json to_json(const ReducibilityReport& report) {
  return {{"selected", report.selected.indices},
          {"epsilon_hat", report.epsilon_hat},
          {"event_frequency", report.event_frequency},
          {"samples", report.samples}};
}

json to_json(const GapReport& report) {
  return {{"bound", report.bound},
          {"empirical_gap", report.empirical_gap},
          {"gap_stderr", report.gap_stderr},
          {"samples", report.samples}};
}

json to_json(const McResult& result) {
  return {{"estimate", result.estimate},
          {"stderr", result.stderr_value},
          {"samples", result.samples}};
}

void save_json(const json& j, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  out << j.dump(2) << '\n';
}

json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw SpecError("malformed JSON in '" + path + "': " + e.what());
  }
}

std::string fnv1a_hex(const std::string& text) {
  std::uint64_t hash = 0xcbf29ce484222325ull;
  for (unsigned char c : text) {
    hash ^= c;
    hash *= 0x100000001b3ull;
  }
  std::ostringstream os;
  os << std::hex << hash;
  return os.str();
}

}  // namespace menuconnect
