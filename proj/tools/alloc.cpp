// Copyright 2026 The Authors.
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
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "fairalloc/io.hpp"

namespace {

int run_command(const std::string& mechanism, const std::string& mode, fairalloc::RunConfig cfg) {
  const auto mech = fairalloc::parse_mechanism(mechanism);
  if (!mech) throw fairalloc::InputError("unknown mechanism '" + mechanism + "'");
  const auto build = fairalloc::parse_mode(mode);
  if (!build) throw fairalloc::InputError("unknown mode '" + mode + "'");
  cfg.mechanism = *mech;
  cfg.mode = *build;
  const auto report = fairalloc::run(cfg);
  std::cout << report.dump(2) << "\n";
  return 0;
}

int synth_command(const std::string& responses, const std::string& status_text, int count, int ell,
                  std::uint64_t seed, const std::string& out) {
  const auto status = fairalloc::parse_status(status_text);
  if (!status) throw fairalloc::InputError("unknown status '" + status_text + "'");
  fairalloc::ResponseTable table = fairalloc::load_responses_raw(responses);
  fairalloc::Rng fit_rng = fairalloc::make_rng(seed, 3);
  const auto population = fairalloc::fit_status_population(table.agents, *status, ell, fit_rng);
  fairalloc::Rng sample_rng = fairalloc::make_rng(seed, 4);
  fairalloc::ResponseTable synth;
  synth.rating_headers = table.rating_headers;
  synth.agents = fairalloc::sample_population(population, count, sample_rng);
  fairalloc::write_response_table(out, synth);
  std::cout << "wrote " << count << " synthetic " << fairalloc::status_name(*status)
            << " respondents to " << out << "\n";
  return 0;
}

int oracle_command(const std::string& schedule_path, const std::string& responses_path, int k,
                   long long max_states) {
  const auto schedule = fairalloc::load_schedule(schedule_path);
  const auto respondents = fairalloc::load_responses(responses_path, schedule);
  fairalloc::StructuredInstance inst;
  inst.items = schedule;
  inst.agents = respondents;
  for (std::size_t i = 0; i < inst.agents.size(); ++i) inst.agents[i].id = static_cast<int>(i);
  inst.valuations = fairalloc::build_valuations(inst.items, inst.agents, k);

  nlohmann::ordered_json out;
  out["leximin"] = fairalloc::brute_force_leximin(inst, max_states);
  out["max_usw"] = fairalloc::brute_force_max_usw(inst, max_states);
  std::cout << out.dump(2) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fair course-seat allocation toolkit"};
  app.require_subcommand(1);

  fairalloc::RunConfig cfg;
  std::string mechanism = "ys";
  std::string mode = "real";
  auto* run = app.add_subcommand("run", "run an allocation mechanism and emit reports");
  run->add_option("--mechanism", mechanism, "sd|rr|ys|usw-flow|export-ilp")->required();
  run->add_option("--schedule", cfg.schedule_path, "schedule CSV")->required();
  run->add_option("--responses", cfg.responses_path, "responses CSV")->required();
  run->add_option("--k", cfg.k, "top-k approval threshold");
  run->add_option("--seed", cfg.seed, "random seed");
  run->add_option("--mode", mode, "real|reduced|full|stress");
  run->add_option("--cohort", cfg.cohort, "stress-mode cohort size");
  run->add_option("--ell", cfg.ell, "synthetic smoothing parameter");
  run->add_option("--out", cfg.out_dir, "output directory")->required();

  std::string synth_responses, synth_status, synth_out;
  int synth_count = 1;
  int synth_ell = 100;
  std::uint64_t synth_seed = 0;
  auto* synth = app.add_subcommand("synth", "generate synthetic respondents");
  synth->add_option("--responses", synth_responses, "source responses CSV")->required();
  synth->add_option("--status", synth_status, "academic status to synthesize")->required();
  synth->add_option("--count", synth_count, "number of synthetic respondents")->required();
  synth->add_option("--ell", synth_ell, "smoothing parameter");
  synth->add_option("--seed", synth_seed, "random seed");
  synth->add_option("--out", synth_out, "output CSV")->required();

  std::string oracle_schedule, oracle_responses;
  int oracle_k = 10;
  long long oracle_states = fairalloc::kDefaultOracleStates;
  auto* oracle = app.add_subcommand("oracle", "exhaustive leximin and welfare oracles");
  oracle->add_option("--schedule", oracle_schedule, "schedule CSV")->required();
  oracle->add_option("--responses", oracle_responses, "responses CSV")->required();
  oracle->add_option("--k", oracle_k, "top-k approval threshold");
  oracle->add_option("--max-states", oracle_states, "enumeration guard");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return run_command(mechanism, mode, cfg);
    if (synth->parsed()) return synth_command(synth_responses, synth_status, synth_count, synth_ell,
                                              synth_seed, synth_out);
    if (oracle->parsed()) return oracle_command(oracle_schedule, oracle_responses, oracle_k,
                                                oracle_states);
  } catch (const fairalloc::InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
