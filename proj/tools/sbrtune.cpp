/*
 * Copyright 2026 sbrtune authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *   http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "sbr/error.hpp"
#include "sbr/experiment.hpp"
#include "sbr/filters.hpp"

namespace {

// "1..10", "3", or comma lists of both: "1..4,9,20..22".
std::vector<std::uint64_t> parse_seeds(const std::string& text) {
  std::vector<std::uint64_t> seeds;
  std::size_t pos = 0;
  auto parse_u64 = [&](const std::string& tok) {
    std::size_t used = 0;
    unsigned long long v = std::stoull(tok, &used);
    if (used != tok.size()) throw std::invalid_argument(tok);
    return std::uint64_t(v);
  };
  while (pos <= text.size()) {
    std::size_t comma = text.find(',', pos);
    std::string tok = text.substr(
        pos, comma == std::string::npos ? std::string::npos : comma - pos);
    try {
      std::size_t dots = tok.find("..");
      if (dots == std::string::npos) {
        seeds.push_back(parse_u64(tok));
      } else {
        std::uint64_t lo = parse_u64(tok.substr(0, dots));
        std::uint64_t hi = parse_u64(tok.substr(dots + 2));
        if (hi < lo) throw sbr::ConfigError("bad seed range: " + tok);
        for (std::uint64_t s = lo; s <= hi; ++s) seeds.push_back(s);
      }
    } catch (const sbr::ConfigError&) {
      throw;
    } catch (const std::exception&) {
      throw sbr::ConfigError("bad seed token: '" + tok + "'");
    }
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return seeds;
}

void apply_config_file(const std::string& path, sbr::ExperimentConfig& cfg) {
  std::ifstream in(path);
  if (!in) throw sbr::ConfigError("cannot read config file " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw sbr::ConfigError("config file " + path + ": " + e.what());
  }
  if (!j.is_object()) throw sbr::ConfigError("config file must be an object");
  try {
    for (const auto& [key, val] : j.items()) {
      if (key == "optimizer")
        cfg.opt.optimizer = val.get<std::string>();
      else if (key == "epsilon")
        cfg.opt.epsilon = val.get<double>();
      else if (key == "n1")
        cfg.opt.n1 = val.get<long>();
      else if (key == "n2")
        cfg.opt.n2 = val.get<long>();
      else if (key == "np")
        cfg.opt.np = val.get<long>();
      else if (key == "goal")
        cfg.goal = val.get<std::string>();
      else if (key == "seed")
        cfg.seeds = {val.get<std::uint64_t>()};
      else if (key == "folds")
        cfg.opt.folds = val.get<long>();
      else
        throw sbr::ConfigError("config file: unknown key '" + key + "'");
    }
  } catch (const nlohmann::json::exception& e) {
    throw sbr::ConfigError("config file " + path + ": " + e.what());
  }
}

int run(int argc, char** argv) {
  CLI::App app{"Security bug report pipeline tuning harness"};
  app.require_subcommand(1);

  sbr::ExperimentConfig cfg;
  std::string seeds_text = "1..10";
  std::string config_path, results_path;

  auto add_data_flags = [&](CLI::App* sub) {
    sub->add_option("--train", cfg.train_path, "training CSV")->required();
    sub->add_option("--test", cfg.test_path, "held-out test CSV");
    sub->add_option("--filter", cfg.filter_name,
                    "training variant (train, farsec, farsecsq, farsectwo, "
                    "clni, clnifarsec, clnifarsecsq, clnifarsectwo)");
    sub->add_option("--project", cfg.project,
                    "row label (default: train file stem)");
  };
  auto add_tuning_flags = [&](CLI::App* sub) {
    sub->add_option("--goal", cfg.goal, "objective: g, pd, pf, f or prec");
    sub->add_option("--seeds", seeds_text, "e.g. 1..10 or 1,2,5");
    sub->add_option("--optimizer", cfg.opt.optimizer, "swift, de3 or de10");
    sub->add_option("--epsilon", cfg.opt.epsilon, "dominance width");
    sub->add_option("--n1", cfg.opt.n1, "item-ranking rounds");
    sub->add_option("--n2", cfg.opt.n2, "refinement rounds");
    sub->add_option("--np", cfg.opt.np, "DE population (0: per-item default)");
    sub->add_option("--iters", cfg.opt.iters, "DE generations");
    sub->add_option("--folds", cfg.opt.folds, "cross-validation folds");
    sub->add_option("--config", config_path, "JSON config file")
        ->check(CLI::ExistingFile);
    sub->add_option("--out", cfg.out_dir, "report directory")->required();
  };

  CLI::App* tune = app.add_subcommand("tune", "run one treatment");
  add_data_flags(tune);
  tune->add_option("--treatment", cfg.treatment, "treatment name");
  add_tuning_flags(tune);
  tune->get_option("--test")->required();

  CLI::App* bench =
      app.add_subcommand("bench", "run all five treatments and rank them");
  add_data_flags(bench);
  add_tuning_flags(bench);
  bench->get_option("--test")->required();

  CLI::App* rank =
      app.add_subcommand("rank", "recompute medians/ranks from results.csv");
  rank->add_option("--results", results_path, "per-seed results.csv")
      ->required()
      ->check(CLI::ExistingFile);
  rank->add_option("--out", cfg.out_dir, "report directory")->required();

  CLI::App* filters =
      app.add_subcommand("filters", "emit the filtered training variants");
  filters->add_option("--train", cfg.train_path, "training CSV")->required();
  filters->add_option("--filter", cfg.filter_name,
                      "emit just this variant (default: all eight)");
  filters->add_option("--out", cfg.out_dir, "output directory")->required();
  bool chosen_filter = false;

  try {
    app.parse(argc, argv);
    chosen_filter = filters->count("--filter") > 0;
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return 2;
  }

  if (rank->parsed()) {
    sbr::Report report = sbr::rank_only_report(sbr::load_result_rows(results_path));
    sbr::emit_report(report, cfg.out_dir);
    std::cout << "wrote " << cfg.out_dir << "/ranks.csv for "
              << report.rows.size() << " rows\n";
    return 0;
  }

  if (filters->parsed()) {
    sbr::Dataset train = sbr::load_dataset(cfg.train_path);
    std::filesystem::create_directories(cfg.out_dir);
    std::vector<std::string> names =
        chosen_filter ? std::vector<std::string>{cfg.filter_name}
                      : sbr::filter_names();
    for (const auto& name : names) {
      sbr::Dataset out = sbr::apply_named_filter(train, name);
      std::string path = cfg.out_dir + "/" + name + ".csv";
      sbr::save_dataset(out, path);
      std::cout << name << ": " << out.size() << " reports ("
                << out.sbr_count() << " SBR) -> " << path << "\n";
    }
    return 0;
  }

  if (!config_path.empty()) apply_config_file(config_path, cfg);
  CLI::App* active = tune->parsed() ? tune : bench;
  if (active->count("--seeds") > 0 || cfg.seeds.empty())
    cfg.seeds = parse_seeds(seeds_text);

  sbr::Report report =
      tune->parsed() ? sbr::run_experiment(cfg) : sbr::run_bench(cfg);
  sbr::emit_report(report, cfg.out_dir);
  std::cout << "wrote " << report.rows.size() << " result rows to "
            << cfg.out_dir << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const sbr::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
