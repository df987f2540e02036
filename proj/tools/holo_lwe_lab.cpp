// holo-lwe-lab: run the lab experiments from a JSON config.
//
//   holo-lwe-lab <subcommand> [--config FILE] [--seed S] [--out DIR]
//                [--format json|csv|both]
//
// Exit codes: 0 success, 2 config error (bad flags, bad schema, unreadable
// config), 3 runtime error.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "hololab/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"holographic LWE laboratory"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
  std::optional<std::string> format;

  for (const std::string& name : hololab::cli::subcommands()) {
    const std::string what = name == "all" ? "run every experiment"
                                           : "run the " + name + " experiment";
    CLI::App* sub = app.add_subcommand(name, what);
    sub->add_option("--config", config_path, "JSON config file");
    sub->add_option("--seed", seed, "master seed override");
    sub->add_option("--out", out_dir, "output directory override");
    sub->add_option("--format", format, "json, csv or both")
        ->check(CLI::IsMember({"json", "csv", "both"}));
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  const std::string subcommand = app.get_subcommands().front()->get_name();
  return hololab::cli::run_cli(subcommand, config_path, seed, out_dir, format,
                               std::cerr);
}
