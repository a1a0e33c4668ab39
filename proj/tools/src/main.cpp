// Copyright 2026 The rtlab Authors.
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

#include <cstdint>
#include <exception>
#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "rtlab/cli/experiments.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Return-time statistics experiments"};
  app.require_subcommand(1);

  std::string config;
  bool check = false;
  std::uint64_t seed = 0;
  std::string out;
  std::map<std::string, CLI::App*> subs;
  std::map<std::string, CLI::Option*> seed_opts, out_opts;
  for (const auto& name : rtlab::cli::experiment_names()) {
    auto* sub = app.add_subcommand(name, "Run the " + name + " experiment");
    sub->add_option("--config", config, "JSON config file")
        ->required()
        ->check(CLI::ExistingFile);
    sub->add_flag("--check", check, "Exit with 2 if an acceptance threshold fails");
    seed_opts[name] =
        sub->add_option("--seed-override", seed, "Replace the seed list");
    out_opts[name] = sub->add_option("--out", out, "Output directory");
    subs[name] = sub;
  }
  CLI11_PARSE(app, argc, argv);

  for (const auto& [name, sub] : subs) {
    if (!sub->parsed()) continue;
    rtlab::cli::RunOptions opts;
    opts.config_path = config;
    opts.check = check;
    if (seed_opts[name]->count() > 0) opts.seed_override = seed;
    if (out_opts[name]->count() > 0) opts.out_dir = out;
    try {
      const int code = rtlab::cli::run_from_file(name, opts);
      if (code == 2) std::cerr << name << ": acceptance threshold failed\n";
      return code;
    } catch (const std::exception& e) {
      std::cerr << name << ": " << e.what() << '\n';
      return 1;
    }
  }
  return 1;
}
