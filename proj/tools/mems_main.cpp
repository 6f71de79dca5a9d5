// mems: command-line front end for the experiment runner.

#include <cstdio>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mems/error.hpp"
#include "mems/runner/config.hpp"
#include "mems/runner/experiments.hpp"

namespace {

std::string key_table() {
  std::string out = "Config keys (INI sections; override with --override section.key=value):\n";
  for (const auto& k : mems::runner::config_keys()) {
    char line[256];
    std::snprintf(line, sizeof line, "  %-28s %-12s %s\n", k.key.c_str(),
                  k.default_value.empty() ? "-" : k.default_value.c_str(), k.help.c_str());
    out += line;
  }
  return out;
}

struct Invocation {
  std::string config;
  std::string out;
  std::vector<std::string> overrides;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Nonlocal MEMS model: steady states, evolution and verification experiments"};
  app.require_subcommand(0, 1);
  bool list = false;
  app.add_flag("--list", list, "List the available experiments");

  std::map<std::string, Invocation> inv;
  for (const auto& [name, help] : mems::runner::experiment_catalog()) {
    auto* sub = app.add_subcommand(name, help);
    auto& i = inv[name];
    sub->add_option("--config", i.config, "INI configuration file (optional)");
    sub->add_option("--out", i.out, "Output directory (default runs/" + name + ")");
    sub->add_option("--override", i.overrides, "section.key=value, may be repeated")->take_all();
    sub->footer(key_table());
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  if (list) {
    for (const auto& [name, help] : mems::runner::experiment_catalog()) std::printf("%-16s %s\n", name.c_str(), help.c_str());
    return 0;
  }
  const auto subs = app.get_subcommands();
  if (subs.empty()) {
    std::cout << app.help();
    return 2;
  }
  const std::string name = subs.front()->get_name();
  const Invocation& i = inv[name];
  try {
    const auto cfg = mems::runner::load_config(name, i.config, i.overrides);
    const std::string out = i.out.empty() ? "runs/" + name : i.out;
    const int rc = mems::runner::run_to_directory(cfg, out);
    const auto rec = mems::runner::read_record(std::filesystem::path(out) / "record.json");
    for (const auto& v : rec.verdicts)
      std::printf("%-8s %s: %s\n", mems::runner::to_string(v.status).c_str(), v.name.c_str(), v.detail.c_str());
    std::printf("results in %s\n", out.c_str());
    return rc;
  } catch (const mems::Error& e) {
    std::fprintf(stderr, "mems: %s\n", e.what());
    return e.kind() == mems::ErrorKind::ConfigError ? 2 : 1;
  }
}
