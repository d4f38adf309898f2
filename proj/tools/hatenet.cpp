// hatenet: command-line entry point for the analysis pipeline.
//
//   hatenet <command> [--config FILE] [--set section.key=value ...] [flags]
//
// Exit codes: 0 success, 1 validation error, 2 data error, 3 internal error.
// Failures print a single JSON object to stderr.

#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "hatenet/hatenet.hpp"
#include "json.hpp"

namespace {

using namespace hatenet;

int report_error(ErrorKind kind, const std::string& message) {
  const char* name = kind == ErrorKind::Validation ? "validation"
                     : kind == ErrorKind::Data     ? "data"
                                                   : "internal";
  nlohmann::ordered_json j;
  j["error"] = {{"kind", name}, {"code", static_cast<int>(kind)}, {"message", message}};
  std::cerr << j.dump() << "\n";
  return static_cast<int>(kind);
}

struct CommonFlags {
  std::optional<std::string> config;
  std::vector<std::string> sets;
  // flag value -> config key
  std::map<std::string, std::string> values;
};

void add_common(CLI::App* sub, CommonFlags& f) {
  sub->add_option("-c,--config", f.config, "Config file (default: $HATENET_CONFIG)");
  sub->add_option("--set", f.sets, "Override a config key: section.key=value");
  const std::pair<const char*, const char*> flags[] = {
      {"--records", "input.records"}, {"--labels", "input.labels"}, {"--edges", "input.edges"},
      {"--nodes", "input.nodes"},     {"--keywords", "input.keywords"}, {"-o,--output", "run.output"},
      {"--seed", "run.seed"},         {"--workers", "run.workers"}};
  for (const auto& [flag, key] : flags) {
    sub->add_option_function<std::string>(
        flag, [&f, k = std::string(key)](const std::string& v) { f.values[k] = v; },
        std::string("Sets ") + key);
  }
}

config::RunConfig resolve(const CommonFlags& f) {
  std::vector<std::pair<std::string, std::string>> overrides;
  for (const auto& s : f.sets) overrides.push_back(config::parse_override(s));
  for (const auto& kv : f.values) overrides.push_back(kv);
  auto cfg = config::load_config(f.config, overrides);
  config::validate(cfg);
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hatenet: hate and counterspeech network analysis pipeline"};
  app.require_subcommand(1);
  app.set_version_flag("--version", pipeline::kVersion);

  using Cmd = void (*)(const config::RunConfig&);
  const std::pair<const char*, std::pair<const char*, Cmd>> commands[] = {
      {"ingest", {"Filter raw records by keyword and window; attach labels", pipeline::cmd_ingest}},
      {"classify", {"Cross-validate and train the tweet classifier", pipeline::cmd_classify}},
      {"users", {"Categorize users; tails and pre/post-activation comparisons", pipeline::cmd_users}},
      {"timeline", {"Daily series and event-window changes", pipeline::cmd_timeline}},
      {"homophily", {"Ego statistics and connectivity against shuffled graphs", pipeline::cmd_homophily}},
      {"contagion", {"Cascade and infection-risk curves against shuffled cascades", pipeline::cmd_contagion}},
      {"report", {"Render SVG charts from the CSV artifacts", pipeline::cmd_report}},
      {"run", {"Run every command in order", pipeline::cmd_run_all}},
  };
  CommonFlags flags;
  std::map<CLI::App*, Cmd> dispatch;
  for (const auto& [name, rest] : commands) {
    auto* sub = app.add_subcommand(name, rest.first);
    add_common(sub, flags);
    dispatch[sub] = rest.second;
  }

  std::string gen_dir;
  synth::SynthOptions gen;
  auto* generate = app.add_subcommand("generate", "Write the synthetic dataset and its config");
  generate->add_option("-o,--output", gen_dir, "Target directory")->required();
  generate->add_option("--seed", gen.seed, "Generator seed");
  generate->add_option("--users", gen.users, "Users who tweet");
  generate->add_option("--silent-users", gen.silent_users, "Graph-only users");
  generate->add_option("--records", gen.records, "Valid in-window records");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return report_error(ErrorKind::Validation, e.what());
  }

  try {
    if (generate->parsed()) {
      pipeline::cmd_generate(gen_dir, gen);
      return 0;
    }
    for (const auto& [sub, fn] : dispatch) {
      if (!sub->parsed()) continue;
      fn(resolve(flags));
      return 0;
    }
    return report_error(ErrorKind::Internal, "no command dispatched");
  } catch (const Error& e) {
    return report_error(e.kind(), e.what());
  } catch (const std::exception& e) {
    return report_error(ErrorKind::Internal, e.what());
  }
}
