// menuconnect: train menu auctions, build low-loss parameter paths between
// them, and audit the paths on Monte-Carlo samples. One JSON config per run;
// flags override only the seed and the output directory, so a config file
// pins an experiment.

#include <cinttypes>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "menuconnect/connectivity.hpp"
#include "menuconnect/evaluation.hpp"
#include "menuconnect/serialization.hpp"
#include "menuconnect/training.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace menuconnect;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitAuditFail = 2;

struct Run {
  json config;
  std::uint64_t seed = 0;
  fs::path out;
  std::vector<std::string> files;
};

const json& need(const json& j, const char* name) {
  auto it = j.find(name);
  if (it == j.end()) throw SpecError(std::string("config: missing field '") + name + "'");
  return *it;
}

std::string format_double(double x) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.17g", x);
  return buffer;
}

void write_text(const Run& run, const std::string& name, const std::string& text) {
  const fs::path path = run.out / name;
  std::ofstream out(path);
  if (!out) throw Error("cannot open '" + path.string() + "' for writing");
  out << text;
}

void write_artifact(Run& run, const std::string& name, const json& j) {
  save_json(j, (run.out / name).string());
  run.files.push_back(name);
}

void write_csv(Run& run, const std::string& name, const std::string& text) {
  write_text(run, name, text);
  run.files.push_back(name);
}

void write_manifest(Run& run, const std::string& command) {
  json effective = run.config;
  effective["seed"] = run.seed;
  std::sort(run.files.begin(), run.files.end());
  const json manifest = {{"command", command},
                         {"config_hash", fnv1a_hex(effective.dump())},
                         {"files", run.files}};
  save_json(manifest, (run.out / "manifest.json").string());
}

TrainConfig train_config_of(const json& j, std::uint64_t seed) {
  TrainConfig cfg;
  cfg.seed = seed;
  cfg.regular_options = need(j, "regular_options").get<int>();
  cfg.temperature = need(j, "temperature").get<double>();
  cfg.steps = need(j, "steps").get<int>();
  cfg.batch_size = need(j, "batch_size").get<int>();
  cfg.learning_rate = need(j, "learning_rate").get<double>();
  cfg.report_every = j.value("report_every", 100);
  cfg.report_samples = j.value("report_samples", static_cast<std::int64_t>(20000));
  return cfg;
}

std::string history_csv(const TrainHistory& history) {
  std::string text = "step,softmax_objective,argmax_revenue_estimate\n";
  std::size_t next_report = 0;
  for (std::size_t step = 0; step < history.objective.size(); ++step) {
    text += std::to_string(step + 1);
    text += ',';
    text += format_double(history.objective[step]);
    text += ',';
    if (next_report < history.argmax_estimates.size() &&
        history.argmax_estimates[next_report].first == static_cast<int>(step + 1)) {
      text += format_double(history.argmax_estimates[next_report].second);
      ++next_report;
    }
    text += '\n';
  }
  return text;
}

int cmd_train(Run& run) {
  const json& cfg = run.config;
  const std::string kind = need(cfg, "kind").get<std::string>();
  const DensitySpec density = density_from_json(need(cfg, "density"));
  const TrainConfig train_cfg = train_config_of(need(cfg, "train"), run.seed);
  const int items = need(cfg, "items").get<int>();

  json summary;
  summary["temperature"] = train_cfg.temperature;
  if (kind == "rochet") {
    RochetTrainResult result = train_rochet(train_cfg, density, items);
    write_artifact(run, "menu.json", to_json(result.menu));
    write_csv(run, "history.csv", history_csv(result.history));
    summary["final_objective"] = result.history.objective.empty()
                                     ? 0.0
                                     : result.history.objective.back();
    if (!result.history.argmax_estimates.empty()) {
      summary["final_argmax_estimate"] = result.history.argmax_estimates.back().second;
    }
    summary["softmax_gap_bound"] =
        rochet_softmax_gap_bound(result.menu.option_count(), items, train_cfg.temperature,
                                 density_sup(density, items));
  } else if (kind == "ama") {
    const int buyers = need(cfg, "buyers").get<int>();
    AmaTrainResult result = train_ama(train_cfg, density, buyers, items);
    write_artifact(run, "menu.json", to_json(result.menu));
    write_csv(run, "history.csv", history_csv(result.history));
    summary["final_objective"] = result.history.objective.empty()
                                     ? 0.0
                                     : result.history.objective.back();
    if (!result.history.argmax_estimates.empty()) {
      summary["final_argmax_estimate"] = result.history.argmax_estimates.back().second;
    }
    summary["softmax_gap_bound"] = ama_softmax_gap_bound(
        train_cfg.regular_options + 1, buyers, items, train_cfg.temperature,
        density_sup(density, items));
  } else {
    throw SpecError("config: kind must be 'rochet' or 'ama'");
  }
  write_artifact(run, "train_summary.json", summary);
  std::cout << "trained " << kind << " menu; smoothing gap bound at Y="
            << train_cfg.temperature << ": " << summary["softmax_gap_bound"] << "\n";
  return kExitOk;
}

template <class M, class FromJson>
std::pair<ReductionSet, std::optional<ReducibilityReport>> reduction_set_for(
    const Run& run, const M& menu, const char* set_field, FromJson /*unused*/) {
  const json& cfg = run.config;
  if (cfg.contains(set_field)) {
    return {make_reduction_set(cfg[set_field].get<std::vector<int>>(),
                               next_square_size(menu.option_count())),
            std::nullopt};
  }
  if (!cfg.contains("estimate")) {
    throw SpecError(std::string("config: provide '") + set_field + "' or 'estimate'");
  }
  const json& est = cfg["estimate"];
  const DensitySpec density = density_from_json(need(cfg, "density"));
  ReducibilityReport report =
      estimate_reducibility(menu, density, need(est, "samples").get<std::int64_t>(),
                            need(est, "epsilon").get<double>(), run.seed);
  return {report.selected, std::move(report)};
}

template <class M, class FromJson>
int connect_with_kind(Run& run, const M& menu_a, const M& menu_b, FromJson from) {
  const std::string mode = need(run.config, "mode").get<std::string>();
  MenuPath<M> path;
  json sets = json::object();
  if (mode == "zero" || mode == "reducible") {
    auto [set_a, report_a] = reduction_set_for(run, menu_a, "set_a", from);
    auto [set_b, report_b] = reduction_set_for(run, menu_b, "set_b", from);
    sets["set_a"] = to_json(set_a);
    sets["set_b"] = to_json(set_b);
    if (report_a) sets["estimate_a"] = to_json(*report_a);
    if (report_b) sets["estimate_b"] = to_json(*report_b);
    path = mode == "zero" ? connect_zero_reducible(menu_a, set_a, menu_b, set_b)
                          : connect_epsilon_reducible(menu_a, set_a, menu_b, set_b);
  } else if (mode == "large") {
    path = connect_large(menu_a, menu_b, need(run.config, "epsilon").get<double>());
  } else {
    throw SpecError("config: mode must be zero, reducible or large");
  }
  write_artifact(run, "path.json", to_json(path));
  if (!sets.empty()) write_artifact(run, "reduction_sets.json", sets);
  std::cout << "built " << mode << " path with " << path.pieces() << " pieces\n";
  return kExitOk;
}

int cmd_connect(Run& run) {
  const json a = load_json(need(run.config, "menu_a").get<std::string>());
  const json b = load_json(need(run.config, "menu_b").get<std::string>());
  if (menu_kind_of(a) != menu_kind_of(b)) {
    throw SpecError("config: menu_a and menu_b have different kinds");
  }
  if (menu_kind_of(a) == "rochet") {
    return connect_with_kind(run, rochet_menu_from_json(a), rochet_menu_from_json(b),
                             rochet_menu_from_json);
  }
  return connect_with_kind(run, ama_menu_from_json(a), ama_menu_from_json(b),
                           ama_menu_from_json);
}

std::string path_report_csv(const PathReport& report) {
  std::string text = "t,rev_estimate,stderr,min_per_sample_slack\n";
  for (std::size_t q = 0; q < report.t_grid.size(); ++q) {
    text += format_double(report.t_grid[q]);
    text += ',';
    text += format_double(report.estimate[q]);
    text += ',';
    text += format_double(report.stderr_value[q]);
    text += ',';
    text += format_double(report.min_slack_at_t[q]);
    text += '\n';
  }
  return text;
}

int cmd_audit(Run& run) {
  const json& cfg = run.config;
  const json path_json = load_json(need(cfg, "path").get<std::string>());
  const DensitySpec density = density_from_json(need(cfg, "density"));
  const std::int64_t samples = need(cfg, "samples").get<std::int64_t>();
  const int t_points = need(cfg, "t_points").get<int>();
  const double epsilon = need(cfg, "epsilon").get<double>();

  PathReport report;
  if (menu_kind_of(path_json) == "rochet") {
    report = path_audit(rochet_path_from_json(path_json), density, samples, t_points, epsilon,
                        run.seed);
  } else {
    report =
        path_audit(ama_path_from_json(path_json), density, samples, t_points, epsilon, run.seed);
  }
  write_artifact(run, "path_report.json", to_json(report));
  write_csv(run, "path_report.csv", path_report_csv(report));
  std::cout << (report.pass ? "PASS" : "FAIL") << ": min estimate "
            << *std::min_element(report.estimate.begin(), report.estimate.end())
            << ", endpoint floor "
            << std::min(report.estimate.front(), report.estimate.back()) - epsilon
            << ", min per-sample slack " << report.min_per_sample_slack << "\n";
  return report.pass ? kExitOk : kExitAuditFail;
}

int cmd_reduce(Run& run) {
  const json menu_json = load_json(need(run.config, "menu").get<std::string>());
  json sets = json::object();
  if (menu_kind_of(menu_json) == "rochet") {
    const RochetMenu menu = rochet_menu_from_json(menu_json);
    auto [keep, report] = reduction_set_for(run, menu, "keep", rochet_menu_from_json);
    if (report) sets["estimate"] = to_json(*report);
    sets["keep"] = to_json(keep);
    write_artifact(run, "menu_reduced.json", to_json(reduce_by_price_inflation(menu, keep)));
  } else {
    const AmaMenu menu = ama_menu_from_json(menu_json);
    auto [keep, report] = reduction_set_for(run, menu, "keep", ama_menu_from_json);
    if (report) sets["estimate"] = to_json(*report);
    sets["keep"] = to_json(keep);
    write_artifact(run, "menu_reduced.json", to_json(reduce_by_boost_deflation(menu, keep)));
  }
  write_artifact(run, "reduction_sets.json", sets);
  return kExitOk;
}

int cmd_discretize(Run& run) {
  const json menu_json = load_json(need(run.config, "menu").get<std::string>());
  const double epsilon = need(run.config, "epsilon").get<double>();
  if (menu_kind_of(menu_json) == "rochet") {
    write_artifact(run, "menu_discretized.json",
                   to_json(discretize_rochet(rochet_menu_from_json(menu_json), epsilon)));
  } else {
    write_artifact(run, "menu_discretized.json",
                   to_json(discretize_ama(ama_menu_from_json(menu_json), epsilon)));
  }
  return kExitOk;
}

int cmd_eval(Run& run) {
  const json& cfg = run.config;
  const json menu_json = load_json(need(cfg, "menu").get<std::string>());
  const DensitySpec density = density_from_json(need(cfg, "density"));
  const std::int64_t samples = need(cfg, "samples").get<std::int64_t>();
  std::optional<double> temperature;
  if (cfg.contains("smoothing") && cfg["smoothing"].is_object()) {
    temperature = need(cfg["smoothing"], "softmax").get<double>();
  }
  McResult result;
  if (menu_kind_of(menu_json) == "rochet") {
    result = mc_revenue(rochet_menu_from_json(menu_json), density, samples, run.seed, temperature);
  } else {
    result = mc_revenue(ama_menu_from_json(menu_json), density, samples, run.seed, temperature);
  }
  write_artifact(run, "eval.json", to_json(result));
  std::cout << "estimate " << result.estimate << " +- " << result.stderr_value << "\n";
  return kExitOk;
}

int cmd_gap(Run& run) {
  const json& cfg = run.config;
  const double temperature = need(cfg, "temperature").get<double>();
  json out;
  if (cfg.contains("menu")) {
    const json menu_json = load_json(cfg["menu"].get<std::string>());
    const DensitySpec density = density_from_json(need(cfg, "density"));
    const std::int64_t samples = need(cfg, "samples").get<std::int64_t>();
    GapReport report;
    if (menu_kind_of(menu_json) == "rochet") {
      report = softmax_gap_report(rochet_menu_from_json(menu_json), density, temperature,
                                  samples, run.seed);
    } else {
      report = softmax_gap_report(ama_menu_from_json(menu_json), density, temperature, samples,
                                  run.seed);
    }
    out = to_json(report);
  } else {
    const json& shape = need(cfg, "shape");
    const std::string kind = need(shape, "kind").get<std::string>();
    const int options = need(shape, "options").get<int>();
    const int items = need(shape, "items").get<int>();
    const double bound_density = need(cfg, "density_bound").get<double>();
    double bound = 0.0;
    if (kind == "rochet") {
      bound = rochet_softmax_gap_bound(options, items, temperature, bound_density);
    } else if (kind == "ama") {
      bound = ama_softmax_gap_bound(options, need(shape, "buyers").get<int>(), items,
                                    temperature, bound_density);
    } else {
      throw SpecError("config: shape.kind must be 'rochet' or 'ama'");
    }
    out = {{"bound", bound}};
  }
  write_artifact(run, "gap.json", out);
  std::cout << "gap bound " << out["bound"] << "\n";
  return kExitOk;
}

std::vector<double> grid_of(const json& j, const char* name) {
  const json& g = need(j, name);
  if (g.is_array()) return g.get<std::vector<double>>();
  const double from = need(g, "from").get<double>();
  const double to = need(g, "to").get<double>();
  const double step = need(g, "step").get<double>();
  if (step <= 0.0 || to < from) throw SpecError("config: bad grid specification");
  std::vector<double> values;
  for (int i = 0;; ++i) {
    const double x = from + i * step;
    if (x > to + 1e-12) break;
    values.push_back(std::min(x, to));
  }
  return values;
}

int cmd_landscape(Run& run) {
  const json& cfg = run.config;
  const DensitySpec density = density_from_json(need(cfg, "density"));
  const LandscapeGrid grid =
      landscape_grid(density, grid_of(cfg, "xs"), grid_of(cfg, "ps"));
  std::string text = "x,p,revenue\n";
  for (std::size_t i = 0; i < grid.allocations.size(); ++i) {
    for (std::size_t j = 0; j < grid.prices.size(); ++j) {
      text += format_double(grid.allocations[i]);
      text += ',';
      text += format_double(grid.prices[j]);
      text += ',';
      text += format_double(grid.at(static_cast<int>(i), static_cast<int>(j)));
      text += '\n';
    }
  }
  write_csv(run, "landscape.csv", text);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"menu-auction training, parameter paths and Monte-Carlo audits"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = "out";
  std::int64_t seed_flag = -1;

  const std::vector<std::pair<std::string, std::string>> commands = {
      {"train", "train a menu by smoothed stochastic gradient ascent"},
      {"connect", "build a piecewise-linear path between two menus"},
      {"audit", "estimate revenue along a path on common random numbers"},
      {"reduce", "disable all options outside a kept subset"},
      {"discretize", "round allocations to a grid with a price/boost discount"},
      {"eval", "Monte-Carlo revenue of a single menu"},
      {"gap", "closed-form and empirical smoothing gap"},
      {"landscape", "revenue of one-option menus over an (x, p) grid"}};
  for (const auto& [name, description] : commands) {
    CLI::App* sub = app.add_subcommand(name, description);
    sub->add_option("--config", config_path, "JSON run configuration")->required();
    sub->add_option("--seed", seed_flag, "override the config seed");
    sub->add_option("--out", out_dir, "output directory (default: out)");
  }

  CLI11_PARSE(app, argc, argv);

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    Run run;
    run.config = load_json(config_path);
    if (seed_flag >= 0) {
      run.seed = static_cast<std::uint64_t>(seed_flag);
    } else if (run.config.contains("seed")) {
      run.seed = run.config["seed"].get<std::uint64_t>();
    } else {
      throw SpecError("config: missing field 'seed' (or pass --seed)");
    }
    run.out = out_dir;
    fs::create_directories(run.out);

    int status = kExitError;
    if (command == "train") status = cmd_train(run);
    else if (command == "connect") status = cmd_connect(run);
    else if (command == "audit") status = cmd_audit(run);
    else if (command == "reduce") status = cmd_reduce(run);
    else if (command == "discretize") status = cmd_discretize(run);
    else if (command == "eval") status = cmd_eval(run);
    else if (command == "gap") status = cmd_gap(run);
    else if (command == "landscape") status = cmd_landscape(run);

    write_manifest(run, command);
    return status;
  } catch (const std::exception& e) {
    std::cerr << "menuconnect " << command << ": " << e.what() << "\n";
    return kExitError;
  }
}
