// Command-line front end for the local science map pipeline.
//
// Exit codes: 0 success, 1 usage error, 2 data error, 3 internal error.

#include <algorithm>
#include <iostream>
#include <map>
#include <string>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "lmap/errors.hpp"
#include "lmap/parallel.hpp"
#include "lmap/pipeline.hpp"
#include "lmap/version.hpp"

namespace {

std::string flag_name(std::string_view key) {
  std::string name(key);
  std::replace(name.begin(), name.end(), '_', '-');
  return "--" + name;
}

struct Command {
  const char* name;
  const char* help;
  lmap::Stage last;
};

int run(int argc, char** argv) {
  CLI::App app{"Local maps of science from weighted bibliographic coupling"};
  app.set_version_flag("--version", std::string(lmap::kVersion));
  app.require_subcommand(1);

  std::string config_path;
  bool print_config = false;
  app.add_option("-c,--config", config_path, "key = value configuration file")->check(CLI::ExistingFile);
  app.add_flag("--print-config", print_config, "print the effective configuration before running");

  std::map<std::string, std::string> overrides;
  for (auto key : lmap::PipelineConfig::keys()) {
    auto* option = app.add_option(flag_name(key), overrides[std::string(key)], fmt::format("config key '{}'", key));
    option->group("Configuration");
  }

  const Command commands[] = {
      {"ingest", "load the corpus, keep the largest component, break cycles, write the graph cache",
       lmap::Stage::ingest},
      {"sample", "draw the paper sample", lmap::Stage::sample},
      {"similarity", "pairwise weighted coupling of the sample", lmap::Stage::similarity},
      {"embed", "invert similarities and embed with t-SNE", lmap::Stage::embed},
      {"cluster", "mean-shift clustering of the embedding", lmap::Stage::cluster},
      {"keywords", "keyword ratio report and cluster keyword table", lmap::Stage::keywords},
      {"pipeline", "run every stage including plots", lmap::Stage::plots},
  };
  std::map<CLI::App*, lmap::Stage> stages;
  for (const auto& c : commands) stages[app.add_subcommand(c.name, c.help)->fallthrough()] = c.last;
  auto* compare = app.add_subcommand("compare", "similarity connectivity for several walk horizons")->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  lmap::apply_thread_override();
  lmap::PipelineConfig config;
  if (!config_path.empty()) config = lmap::PipelineConfig::load(config_path);
  for (auto key : lmap::PipelineConfig::keys()) {
    if (app.count(flag_name(key)) > 0) config.set(key, overrides[std::string(key)]);
  }
  if (print_config) std::cout << config.to_text() << std::flush;

  if (compare->parsed()) {
    config.validate();
    lmap::cmd_compare(config, config.compare_horizons, std::cout);
    return 0;
  }
  for (const auto& [sub, stage] : stages) {
    if (!sub->parsed()) continue;
    if (stage == lmap::Stage::ingest) {
      lmap::cmd_ingest(config, std::cout);
    } else {
      lmap::cmd_pipeline(config, std::cout, stage);
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const lmap::UsageError& e) {
    std::cerr << "lmap: usage error: " << e.what() << '\n';
    return 1;
  } catch (const lmap::DataError& e) {
    std::cerr << "lmap: data error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "lmap: internal error: " << e.what() << '\n';
    return 3;
  } catch (...) {
    std::cerr << "lmap: internal error\n";
    return 3;
  }
}
