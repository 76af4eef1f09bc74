// glcorner command-line front end. Exit codes: 0 success, 2 usage, 3 numerical failure.
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "glcorner/commands.hpp"
#include "glcorner/errors.hpp"

using namespace glcorner;

namespace {

std::string flag_name(const std::string& param) {
  std::string s = param;
  for (char& c : s)
    if (c == '_') c = '-';
  return "--" + s;
}

// Flag values are JSON when they parse as JSON ("0.1", "[8,12]", "true"), plain strings otherwise.
Json flag_value(const std::string& raw) {
  try {
    return Json::parse(raw);
  } catch (const Json::parse_error&) {
    return Json(raw);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Surface superconductivity in domains with corners: constants, corner energies and 2D solves"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", code_version());

  std::string config_file, json_out, cache_dir = ".glcorner-cache";
  bool quiet = false, no_cache = false;
  app.add_option("--config", config_file, "JSON file of parameters (flags override it)");
  app.add_option("--json", json_out, "write the run record as JSON to this path ('-' for stdout)");
  app.add_option("--cache-dir", cache_dir, "directory of cached corner and sector runs");
  app.add_flag("--no-cache", no_cache, "ignore and do not write the cache");
  app.add_flag("-q,--quiet", quiet, "suppress progress output");

  std::map<std::string, std::map<std::string, std::optional<std::string>>> raw;
  std::map<std::string, CLI::App*> subs;
  for (const auto& name : command_names()) {
    CLI::App* sub = app.add_subcommand(name, command_summary(name));
    sub->set_help_flag("--help", "Print this help message and exit");
    subs[name] = sub;
    if (name == "sweep") continue;
    for (const auto& doc : command_params(name)) {
      auto& slot = raw[name][doc.name];
      std::string help = fmt::format("{} (default {})", doc.help, doc.value.dump());
      sub->add_option_function<std::string>(flag_name(doc.name), [&slot](const std::string& v) { slot = v; }, help)
          ->type_name("VALUE");
    }
  }
  std::string sweep_file, sweep_output;
  int sweep_workers = 0;
  subs["sweep"]->add_option("spec", sweep_file, "sweep file (JSON)")->required();
  subs["sweep"]->add_option("--output", sweep_output, "output directory (overrides the sweep file)");
  subs["sweep"]->add_option("--workers", sweep_workers, "worker threads (overrides the sweep file)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  CommandContext ctx;
  ctx.cache_dir = cache_dir;
  ctx.use_cache = !no_cache;
  if (!quiet) ctx.log = [](const std::string& line) { std::cerr << line << '\n'; };

  try {
    Json config = Json::object();
    if (!config_file.empty()) {
      try {
        config = Json::parse(read_text(config_file));
      } catch (const Json::parse_error& e) {
        throw UsageError(fmt::format("config {}: {}", config_file, e.what()));
      }
    }
    if (subs["sweep"]->parsed()) {
      Json spec;
      try {
        spec = Json::parse(read_text(sweep_file));
      } catch (const Json::parse_error& e) {
        throw UsageError(fmt::format("sweep file {}: {}", sweep_file, e.what()));
      }
      if (!sweep_output.empty()) spec["output"] = sweep_output;
      if (sweep_workers > 0) spec["workers"] = sweep_workers;
      SweepSummary s = run_sweep(spec, ctx);
      std::cout << fmt::format("sweep: {} cells, {} failed, bundle {} ({})\n", s.cells, s.failed, s.output.string(),
                               s.complete ? "complete" : "incomplete");
      return s.complete ? 0 : 3;
    }
    for (const auto& [name, sub] : subs) {
      if (!sub->parsed()) continue;
      Json overrides = Json::object();
      for (const auto& [param, value] : raw[name])
        if (value) overrides[param] = flag_value(*value);
      Json params = merge_params(name, config, overrides);
      RunRecord rec = run_command(name, params, ctx);
      if (json_out == "-") {
        std::cout << rec.to_json().dump(2) << '\n';
      } else {
        std::cout << format_result(rec);
        if (!json_out.empty()) write_text(json_out, rec.to_json().dump(2) + "\n");
      }
    }
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return 3;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const GeometryError& e) {
    std::cerr << "geometry error: " << e.what() << '\n';
    return 2;
  } catch (const Json::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
  return 0;
}
