// SPDX-License-Identifier: Apache-2.0
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "covert/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{std::string(covert::kToolName) +
               " - covert-ranging exponent analysis"};
  app.set_version_flag("--version", std::string(covert::kToolName) + " " +
                                        covert::kToolVersion);
  app.require_subcommand(1);

  struct Args {
    std::optional<std::string> config;
    std::vector<std::string> sets;
    std::optional<std::string> out;
    std::optional<std::string> format;
  };
  std::vector<std::pair<std::string, Args>> commands;
  commands.reserve(5);
  for (const char* name :
       {"tradeoff", "delta-xi", "perr", "covert-info", "validate"}) {
    commands.emplace_back(name, Args{});
    Args& args = commands.back().second;
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--config", args.config, "path to key=value config file");
    sub->add_option("--set", args.sets, "config override key=value (repeatable)");
    sub->add_option("--out", args.out, "output file path (default: stdout)");
    sub->add_option("--format", args.format, "output format (csv)");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return covert::kExitConfig;
  }

  for (const auto& [name, args] : commands) {
    if (!app.get_subcommand(name)->parsed()) continue;
    try {
      covert::RunConfig cfg = covert::load_config(args.config, args.sets);
      if (args.out) covert::apply_kv(cfg, "out_path", *args.out);
      if (args.format) covert::apply_kv(cfg, "format", *args.format);
      return covert::run_command(name, cfg);
    } catch (const covert::config_error& e) {
      std::cerr << "config error: " << e.what() << '\n';
      return covert::kExitConfig;
    }
  }
  return covert::kExitConfig;
}
