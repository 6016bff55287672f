// Copyright 2026 The paramnoise Authors
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


// Experiment driver.
//
//   paramnoise toy --strategy pro --sparse
//   paramnoise toy --table --jobs 4 --out runs/table1
//   paramnoise rl --env sparse-cartpole-swingup --seeds 0-9
//   paramnoise baseline-compare --config exp.cfg --set rl.epochs=20
//
// Settings come from built-in defaults, then --config, then flags in the
// order given. --dry-run prints the resolved config, which is itself a valid
// --config file.

#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "paramnoise/cli.h"
#include "paramnoise/csv.h"
#include "paramnoise/error.h"

namespace {

using paramnoise::cli::Mode;
using paramnoise::cli::Override;

struct Flags {
  std::string config;
  bool dry_run = false;
};

// Flags that map onto config keys, collected in command-line order.
void AddMappedOptions(CLI::App* sub, std::vector<Override>* ov, Flags* f, Mode mode) {
  auto value = [&](const std::string& name, const std::string& key, const std::string& help) {
    sub->add_option_function<std::string>(
        name, [ov, key](const std::string& v) { ov->emplace_back(key, v); }, help);
  };
  auto flag = [&](const std::string& name, const std::string& key, const std::string& help) {
    sub->add_flag_function(
        name, [ov, key](std::int64_t) { ov->emplace_back(key, "true"); }, help);
  };
  sub->add_option("--config", f->config, "key = value config file");
  sub->add_option_function<std::vector<std::string>>(
         "--set",
         [ov](const std::vector<std::string>& kvs) {
           for (const auto& kv : kvs) {
             const auto eq = kv.find('=');
             if (eq == std::string::npos) {
               throw CLI::ValidationError("--set", "expects KEY=VALUE, got '" + kv + "'");
             }
             ov->emplace_back(kv.substr(0, eq), kv.substr(eq + 1));
           }
         },
         "override one key, KEY=VALUE (repeatable)")
      ->trigger_on_parse();
  sub->add_flag("--dry-run", f->dry_run, "print the resolved config and exit");
  value("--seeds", "seeds", "seed list, e.g. 0-9 or 1,4,7");
  value("--out", "out", "output directory");
  value("--jobs", "jobs", "seeds run in parallel");
  if (mode != Mode::kBaselineCompare) value("--strategy", "strategy", "fv, ac, pro or plappert");
  if (mode == Mode::kToy) {
    flag("--sparse", "toy.sparse", "sparse reward");
    value("--sigma2", "toy.sigma_fix_sq", "isotropic variance sigma_fix^2");
    value("--sparse-threshold", "toy.sparse_threshold", "sparse support radius squared");
    value("--max-steps", "toy.max_steps", "update budget per seed");
    flag("--table", "table", "run the full strategy x reward x variance grid");
    flag("--trajectory", "trajectory", "write per-seed trajectory and exploration CSVs");
  } else {
    value("--env", "rl.env", "environment name");
    value("--env-overrides", "rl.env_overrides", "JSON object of environment parameters");
    value("--epochs", "rl.epochs", "training epochs");
    value("--episodes-per-epoch", "rl.episodes_per_epoch", "episodes per epoch");
    value("--delta", "rl.delta", "target action-space distance");
    flag("--checkpoint", "checkpoint", "save a final checkpoint per seed");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"parameter-space noise experiments"};
  app.require_subcommand(1);
  struct Sub {
    Mode mode;
    CLI::App* app;
    std::vector<Override> ov;
    Flags flags;
  };
  std::vector<Sub> subs;
  subs.reserve(3);
  subs.push_back({Mode::kToy, app.add_subcommand("toy", "two-parameter benchmark sweep"), {}, {}});
  subs.push_back({Mode::kRl, app.add_subcommand("rl", "train one strategy over seeds"), {}, {}});
  subs.push_back({Mode::kBaselineCompare,
                  app.add_subcommand("baseline-compare", "train Pro and Plappert arms"), {}, {}});
  for (auto& s : subs) AddMappedOptions(s.app, &s.ov, &s.flags, s.mode);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return paramnoise::cli::ExitCodeFor(paramnoise::ErrorCode::kConfigParse);
  }

  try {
    for (auto& s : subs) {
      if (!s.app->parsed()) continue;
      const std::string text =
          s.flags.config.empty() ? std::string() : paramnoise::ReadFile(s.flags.config);
      const auto config = paramnoise::cli::ResolveConfig(s.mode, text, s.ov);
      if (s.flags.dry_run) {
        std::cout << paramnoise::cli::FormatConfig(config);
        return 0;
      }
      paramnoise::cli::RunExperiment(config, std::cout);
      std::cout << "wrote " << config.out.string() << '\n';
    }
  } catch (const paramnoise::Error& e) {
    std::cerr << "paramnoise: " << e.what() << '\n';
    return paramnoise::cli::ExitCodeFor(e.code());
  } catch (const std::exception& e) {
    std::cerr << "paramnoise: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
