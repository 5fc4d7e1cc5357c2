// Copyright 2026 The Corpus Forge Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// corpus-forge entry point.

#include <iostream>
#include <stdexcept>

#include "cli_support.h"
#include "corpus_forge/errors.h"

int main(int argc, char** argv) {
  using namespace corpus_forge;
  using namespace corpus_forge::cli;

  CLI::App app{"Corpus building, sampling, vocabulary and evaluation tools", "corpus-forge"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "corpus-forge 1.0.0");

  Context ctx;
  app.add_option("-w,--workers", ctx.workers, "Worker threads")
      ->check(CLI::Range(1, 1024))
      ->capture_default_str();
  app.add_option("--seed", ctx.seed, "Random seed")->capture_default_str();
  app.add_option("--max-record-errors", ctx.max_record_errors,
                 "Malformed records tolerated before exiting with status 2")
      ->capture_default_str();
  app.add_option("--report", ctx.report, "Run report path (default: <output>.report.json)");
  app.set_config("--config", "", "TOML or INI file; one section per subcommand")
      ->envname("CORPUS_FORGE_CONFIG");

  RegisterCorpusCommands(app, ctx);
  RegisterLidCommands(app, ctx);
  RegisterSamplingCommands(app, ctx);
  RegisterVocabCommands(app, ctx);
  RegisterPretrainCommands(app, ctx);
  RegisterMetricsCommands(app, ctx);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    return ctx.action ? ctx.action() : kExitConfig;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const UnsupportedScriptError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kExitData;
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  }
}
