// SPDX-License-Identifier: MIT

#include <iostream>

#include "common.hpp"
#include "rpnet/version.hpp"

int main(int argc, char** argv) {
  using namespace rpnet::cli;
  CLI::App app{"Random projection pipelines for sparse high-dimensional data",
               "rpnet"};
  app.set_version_flag("--version", std::string(rpnet::kVersion));
  app.require_subcommand(1);
  Globals globals;
  app.add_option("--threads", globals.threads,
                 "Worker threads (1 guarantees bit-reproducible output)")
      ->check(CLI::PositiveNumber);

  Action action;
  add_data_commands(app, action, globals);
  add_train_commands(app, action, globals);
  add_metric_commands(app, action, globals);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }
  if (!action) {
    std::cerr << "error: no command given\n";
    return 1;
  }
  return run_guarded(action);
}
