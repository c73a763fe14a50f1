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

#ifndef FAIRALLOC_IO_HPP_
#define FAIRALLOC_IO_HPP_

#include <array>
#include <cctype>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "fairalloc/exchange.hpp"
#include "fairalloc/mechanisms.hpp"
#include "fairalloc/metrics.hpp"
#include "fairalloc/synth.hpp"

namespace fairalloc {

// Anything wrong with user-supplied files or parameters; the CLI maps this to
// exit code 2 (internal failures exit 3).
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// CSV primitives.

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  fields.push_back(cur);
  return fields;
}

inline std::vector<std::vector<std::string>> read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() && in.peek() == std::ifstream::traits_type::eof()) break;
    rows.push_back(split_csv_line(line));
  }
  if (rows.empty()) throw InputError(path + ": empty file");
  return rows;
}

inline int parse_int(const std::string& text, const std::string& where) {
  std::size_t used = 0;
  int value = 0;
  try {
    value = std::stoi(text, &used);
  } catch (const std::exception&) {
    throw InputError(where + ": not an integer: '" + text + "'");
  }
  if (used != text.size()) throw InputError(where + ": not an integer: '" + text + "'");
  return value;
}

inline std::string lower(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

}  // namespace detail

inline std::optional<Status> parse_status(const std::string& text) {
  const std::string s = detail::lower(text);
  if (s == "freshman" || s == "freshmen") return Status::kFreshman;
  if (s == "sophomore") return Status::kSophomore;
  if (s == "junior") return Status::kJunior;
  if (s == "senior") return Status::kSenior;
  if (s == "ms") return Status::kMS;
  if (s == "phd") return Status::kPhD;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Schedule file: header `catalog,section,slot,capacity`.

inline std::vector<ItemType> load_schedule(const std::string& path) {
  const auto rows = detail::read_csv(path);
  const std::vector<std::string> expected = {"catalog", "section", "slot", "capacity"};
  if (rows[0] != expected) {
    throw InputError(path + ": expected header catalog,section,slot,capacity");
  }
  std::vector<ItemType> items;
  std::map<std::pair<std::string, std::string>, int> seen;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const std::string where = path + ":" + std::to_string(r + 1);
    if (rows[r].size() != 4) throw InputError(where + ": expected 4 fields");
    ItemType it;
    it.id = static_cast<int>(items.size());
    it.catalog_label = rows[r][0];
    it.section_label = rows[r][1];
    it.slot = detail::parse_int(rows[r][2], where);
    it.capacity = detail::parse_int(rows[r][3], where);
    if (it.capacity < 1) throw InputError(where + ": capacity must be positive");
    if (!seen.try_emplace({it.catalog_label, it.section_label}, it.id).second) {
      throw InputError(where + ": duplicate course " + it.catalog_label + "_" + it.section_label);
    }
    items.push_back(std::move(it));
  }
  if (items.empty()) throw InputError(path + ": no courses");
  return items;
}

inline void write_schedule(const std::string& path, const std::vector<ItemType>& items) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path);
  out << "catalog,section,slot,capacity\n";
  for (const auto& it : items) {
    out << it.catalog_label << "," << it.section_label << "," << it.slot << "," << it.capacity
        << "\n";
  }
}

// ---------------------------------------------------------------------------
// Responses file: header `student_id,status,course_max,rating_<cat>_<sec>...`.
// An optional sidecar `<path>.columns.json` remaps the fixed column names and
// the rating prefix when ingesting foreign exports.

struct ResponseColumns {
  std::string student_id = "student_id";
  std::string status = "status";
  std::string course_max = "course_max";
  std::string rating_prefix = "rating_";
};

inline ResponseColumns response_columns_for(const std::string& path) {
  ResponseColumns cols;
  const std::string sidecar = path + ".columns.json";
  if (std::filesystem::exists(sidecar)) {
    std::ifstream in(sidecar);
    nlohmann::json j;
    try {
      in >> j;
    } catch (const std::exception& e) {
      throw InputError(sidecar + ": " + e.what());
    }
    cols.student_id = j.value("student_id", cols.student_id);
    cols.status = j.value("status", cols.status);
    cols.course_max = j.value("course_max", cols.course_max);
    cols.rating_prefix = j.value("rating_prefix", cols.rating_prefix);
  }
  return cols;
}

// Responses with the rating columns kept opaque, for pipelines (like the
// synthetic generator) that never need the schedule.
struct ResponseTable {
  std::vector<std::string> rating_headers;  // without the prefix stripped
  std::vector<Agent> agents;                // ratings indexed by column order
};

inline ResponseTable load_responses_raw(const std::string& path) {
  const ResponseColumns cols = response_columns_for(path);
  const auto rows = detail::read_csv(path);
  const auto& header = rows[0];
  if (header.size() < 3 || header[0] != cols.student_id || header[1] != cols.status ||
      header[2] != cols.course_max) {
    throw InputError(path + ": expected header " + cols.student_id + "," + cols.status + "," +
                     cols.course_max + "," + cols.rating_prefix + "...");
  }
  ResponseTable table;
  for (std::size_t c = 3; c < header.size(); ++c) {
    if (header[c].rfind(cols.rating_prefix, 0) != 0) {
      throw InputError(path + ": rating column '" + header[c] + "' lacks prefix '" +
                       cols.rating_prefix + "'");
    }
    table.rating_headers.push_back(header[c]);
  }
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const std::string where = path + ":" + std::to_string(r + 1);
    if (rows[r].size() != header.size()) throw InputError(where + ": wrong field count");
    Agent a;
    a.id = static_cast<int>(table.agents.size());
    a.label = rows[r][0];
    const auto status = parse_status(rows[r][1]);
    if (!status) throw InputError(where + ": unknown status '" + rows[r][1] + "'");
    a.status = *status;
    const int declared = detail::parse_int(rows[r][2], where);
    if (declared < 1) throw InputError(where + ": course_max must be positive");
    a.course_max = std::min(declared, status_course_limit(a.status));
    for (std::size_t c = 3; c < header.size(); ++c) {
      const int rating = detail::parse_int(rows[r][c], where);
      if (rating < kMinRating || rating > kMaxRating) {
        throw InputError(where + ": rating out of range 1..8");
      }
      a.ratings.push_back(rating);
    }
    table.agents.push_back(std::move(a));
  }
  return table;
}

// Maps rating columns onto schedule items by catalog + section (split at the
// last underscore); absent courses default to rating 1, unknown columns are
// an error.
inline std::vector<Agent> load_responses(const std::string& path,
                                         const std::vector<ItemType>& items) {
  const ResponseColumns cols = response_columns_for(path);
  ResponseTable table = load_responses_raw(path);
  std::map<std::pair<std::string, std::string>, int> item_index;
  for (const auto& it : items) item_index[{it.catalog_label, it.section_label}] = it.id;

  std::vector<int> column_to_item(table.rating_headers.size(), -1);
  for (std::size_t c = 0; c < table.rating_headers.size(); ++c) {
    const std::string name = table.rating_headers[c].substr(cols.rating_prefix.size());
    const auto sep = name.rfind('_');
    if (sep == std::string::npos) {
      throw InputError(path + ": cannot split rating column '" + table.rating_headers[c] +
                       "' into catalog and section");
    }
    const auto found = item_index.find({name.substr(0, sep), name.substr(sep + 1)});
    if (found == item_index.end()) {
      throw InputError(path + ": rating column '" + table.rating_headers[c] +
                       "' matches no scheduled course");
    }
    column_to_item[c] = found->second;
  }

  for (Agent& a : table.agents) {
    std::vector<int> ratings(items.size(), kMinRating);
    for (std::size_t c = 0; c < column_to_item.size(); ++c) ratings[column_to_item[c]] = a.ratings[c];
    a.ratings = std::move(ratings);
  }
  return std::move(table.agents);
}

inline void write_responses(const std::string& path, const std::vector<Agent>& agents,
                            const std::vector<ItemType>& items) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path);
  out << "student_id,status,course_max";
  for (const auto& it : items) out << ",rating_" << it.catalog_label << "_" << it.section_label;
  out << "\n";
  for (const Agent& a : agents) {
    out << a.label << "," << status_name(a.status) << "," << a.course_max;
    for (int r : a.ratings) out << "," << r;
    out << "\n";
  }
}

inline void write_response_table(const std::string& path, const ResponseTable& table) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path);
  out << "student_id,status,course_max";
  for (const auto& h : table.rating_headers) out << "," << h;
  out << "\n";
  for (const Agent& a : table.agents) {
    out << a.label << "," << status_name(a.status) << "," << a.course_max;
    for (int r : a.ratings) out << "," << r;
    out << "\n";
  }
}

// ---------------------------------------------------------------------------
// Top-k approval translation.

// Approve every course rated at least the k-th highest rating, excluding the
// default rating 1. Returns sorted item ids.
inline std::vector<int> topk_approvals(const std::vector<int>& ratings, int k) {
  if (k < 1) throw std::invalid_argument("topk_approvals: k must be >= 1");
  std::vector<int> sorted = ratings;
  std::sort(sorted.begin(), sorted.end(), std::greater<int>());
  const int kth = sorted[std::min<std::size_t>(k, sorted.size()) - 1];
  std::vector<int> approved;
  for (std::size_t g = 0; g < ratings.size(); ++g) {
    if (ratings[g] >= kth && ratings[g] > kMinRating) approved.push_back(static_cast<int>(g));
  }
  return approved;
}

inline std::vector<StructuredValuation> build_valuations(const std::vector<ItemType>& items,
                                                         const std::vector<Agent>& agents, int k) {
  std::vector<int> slot_of(items.size());
  for (const auto& it : items) slot_of[it.id] = it.slot;
  std::vector<StructuredValuation> vals;
  vals.reserve(agents.size());
  for (const Agent& a : agents) {
    vals.emplace_back(static_cast<int>(items.size()), topk_approvals(a.ratings, k), slot_of,
                      a.course_max);
  }
  return vals;
}

// ---------------------------------------------------------------------------
// Instance construction.

enum class Mechanism { kSerialDictatorship, kRoundRobin, kYankeeSwap, kUswFlow, kExportIlp };
enum class BuildMode { kReal, kReduced, kFull, kStress };

inline std::optional<Mechanism> parse_mechanism(const std::string& name) {
  if (name == "sd") return Mechanism::kSerialDictatorship;
  if (name == "rr") return Mechanism::kRoundRobin;
  if (name == "ys") return Mechanism::kYankeeSwap;
  if (name == "usw-flow") return Mechanism::kUswFlow;
  if (name == "export-ilp") return Mechanism::kExportIlp;
  return std::nullopt;
}

inline const char* mechanism_name(Mechanism m) {
  switch (m) {
    case Mechanism::kSerialDictatorship: return "sd";
    case Mechanism::kRoundRobin: return "rr";
    case Mechanism::kYankeeSwap: return "ys";
    case Mechanism::kUswFlow: return "usw-flow";
    case Mechanism::kExportIlp: return "export-ilp";
  }
  return "?";
}

inline std::optional<BuildMode> parse_mode(const std::string& name) {
  if (name == "real") return BuildMode::kReal;
  if (name == "reduced") return BuildMode::kReduced;
  if (name == "full") return BuildMode::kFull;
  if (name == "stress") return BuildMode::kStress;
  return std::nullopt;
}

inline const char* mode_name(BuildMode m) {
  switch (m) {
    case BuildMode::kReal: return "real";
    case BuildMode::kReduced: return "reduced";
    case BuildMode::kFull: return "full";
    case BuildMode::kStress: return "stress";
  }
  return "?";
}

struct RunConfig {
  Mechanism mechanism = Mechanism::kYankeeSwap;
  std::uint64_t seed = 0;
  int k = 10;
  BuildMode mode = BuildMode::kReal;
  int cohort = 0;   // stress mode target size
  int ell = 100;    // synthetic smoothing parameter
  std::string schedule_path;
  std::string responses_path;
  std::string out_dir;
};

// Department head counts by standing; the reference cohort composition that
// reduced/full/stress instances are built against.
inline const std::array<int, kNumStatuses>& department_population() {
  static const std::array<int, kNumStatuses> counts = {239, 327, 408, 573, 613, 148};
  return counts;
}

inline int department_total() {
  int total = 0;
  for (int c : department_population()) total += c;
  return total;
}

namespace detail {

inline int round_half_up(double x) { return static_cast<int>(std::floor(x + 0.5)); }

// Seeded subsample that keeps the original relative order.
inline std::vector<Agent> subsample(const std::vector<Agent>& group, int target, Rng& rng) {
  std::vector<int> idx(group.size());
  for (std::size_t i = 0; i < group.size(); ++i) idx[i] = static_cast<int>(i);
  shuffle(idx, rng);
  idx.resize(target);
  std::sort(idx.begin(), idx.end());
  std::vector<Agent> out;
  out.reserve(target);
  for (int i : idx) out.push_back(group[i]);
  return out;
}

}  // namespace detail

inline std::vector<StatusPopulation> fit_all_populations(const std::vector<Agent>& respondents,
                                                         int ell, Rng& rng) {
  std::vector<StatusPopulation> pops;
  for (int s = 0; s < kNumStatuses; ++s) {
    const Status status = static_cast<Status>(s);
    bool any = false;
    for (const Agent& a : respondents) any = any || a.status == status;
    if (any) pops.push_back(fit_status_population(respondents, status, ell, rng));
  }
  return pops;
}

// Builds the experiment instance.
//   real:    the respondents and capacities as loaded.
//   reduced: capacities scaled by the lowest per-standing response rate and
//            respondents subsampled per standing to that rate.
//   full:    real capacities, respondents augmented with synthetic students
//            up to the department head counts.
//   stress:  real capacities, cohort grown (or shrunk) to `cohort` agents at
//            the department's standing proportions.
// Pre-fitted populations can be supplied to amortize inference across runs.
inline StructuredInstance build_instance(const RunConfig& config, std::vector<ItemType> schedule,
                                         const std::vector<Agent>& respondents,
                                         const std::vector<StatusPopulation>* prefit = nullptr) {
  std::array<std::vector<Agent>, kNumStatuses> by_status;
  for (const Agent& a : respondents) by_status[priority_of(a.status)].push_back(a);

  std::array<int, kNumStatuses> target{};
  switch (config.mode) {
    case BuildMode::kReal:
      for (int s = 0; s < kNumStatuses; ++s) target[s] = static_cast<int>(by_status[s].size());
      break;
    case BuildMode::kReduced: {
      double min_rate = 1.0;
      for (int s = 0; s < kNumStatuses; ++s) {
        if (by_status[s].empty()) continue;
        min_rate = std::min(min_rate, static_cast<double>(by_status[s].size()) /
                                          department_population()[s]);
      }
      for (int s = 0; s < kNumStatuses; ++s) {
        target[s] = by_status[s].empty()
                        ? 0
                        : detail::round_half_up(department_population()[s] * min_rate);
      }
      for (ItemType& it : schedule) {
        it.capacity = std::max(1, detail::round_half_up(it.capacity * min_rate));
      }
      break;
    }
    case BuildMode::kFull:
      for (int s = 0; s < kNumStatuses; ++s) target[s] = department_population()[s];
      break;
    case BuildMode::kStress: {
      if (config.cohort < 1) throw InputError("stress mode requires --cohort >= 1");
      const double share = static_cast<double>(config.cohort) / department_total();
      std::array<double, kNumStatuses> exact{};
      int assigned = 0;
      for (int s = 0; s < kNumStatuses; ++s) {
        exact[s] = department_population()[s] * share;
        target[s] = static_cast<int>(std::floor(exact[s]));
        assigned += target[s];
      }
      std::vector<int> by_frac(kNumStatuses);
      for (int s = 0; s < kNumStatuses; ++s) by_frac[s] = s;
      std::sort(by_frac.begin(), by_frac.end(), [&](int a, int b) {
        const double fa = exact[a] - std::floor(exact[a]);
        const double fb = exact[b] - std::floor(exact[b]);
        if (fa != fb) return fa > fb;
        return a < b;
      });
      for (int i = 0; assigned < config.cohort; ++i, ++assigned) target[by_frac[i % kNumStatuses]]++;
      break;
    }
  }

  Rng sample_rng = make_rng(config.seed, /*stream=*/2);
  std::vector<StatusPopulation> fitted;
  const auto population_for = [&](Status status) -> const StatusPopulation& {
    if (prefit != nullptr) {
      for (const auto& p : *prefit) {
        if (p.status == status) return p;
      }
      throw InputError(std::string("no pre-fitted population for status ") + status_name(status));
    }
    for (const auto& p : fitted) {
      if (p.status == status) return p;
    }
    Rng fit_rng = make_rng(config.seed, /*stream=*/3 + priority_of(status));
    fitted.push_back(fit_status_population(respondents, status, config.ell, fit_rng));
    return fitted.back();
  };

  StructuredInstance inst;
  inst.items = std::move(schedule);
  for (int s = kNumStatuses - 1; s >= 0; --s) {
    const auto& group = by_status[s];
    const int have = static_cast<int>(group.size());
    if (config.mode == BuildMode::kFull && have > target[s]) {
      throw InputError(std::string("more respondents than the department head count for status ") +
                       status_name(static_cast<Status>(s)));
    }
    if (target[s] == have) {
      for (const Agent& a : group) inst.agents.push_back(a);
    } else if (target[s] < have) {
      for (Agent& a : detail::subsample(group, target[s], sample_rng)) {
        inst.agents.push_back(std::move(a));
      }
    } else {
      if (config.mode == BuildMode::kReduced) {
        throw InputError("insufficient respondents to subsample");
      }
      if (group.empty()) {
        throw InputError(std::string("no respondents to seed synthetic students for status ") +
                         status_name(static_cast<Status>(s)));
      }
      for (const Agent& a : group) inst.agents.push_back(a);
      const auto& pop = population_for(static_cast<Status>(s));
      for (Agent& a : sample_population(pop, target[s] - have, sample_rng)) {
        inst.agents.push_back(std::move(a));
      }
    }
  }
  for (std::size_t i = 0; i < inst.agents.size(); ++i) inst.agents[i].id = static_cast<int>(i);
  inst.valuations = build_valuations(inst.items, inst.agents, config.k);
  return inst;
}

// ---------------------------------------------------------------------------
// Run orchestration and report emission.

namespace detail {

inline double round6(double x) { return std::round(x * 1e6) / 1e6; }

inline nlohmann::ordered_json metrics_json(const MetricsReport& rep) {
  nlohmann::ordered_json j;
  j["usw_sum"] = rep.usw_sum;
  j["usw_pct"] = round6(rep.usw_pct);
  j["nsw_norm"] = round6(rep.nsw_norm);
  j["zero_count"] = rep.zero_count;
  j["envy"] = rep.envy;
  j["ef1_violations"] = rep.ef1_violations;
  j["efx_violations"] = rep.efx_violations;
  j["pmms_violations"] = rep.pmms_violations;
  j["bundle_mean"] = round6(rep.bundle_mean);
  j["bundle_stddev"] = round6(rep.bundle_stddev);
  nlohmann::ordered_json hist;
  for (const auto& [size, count] : rep.bundle_histogram) hist[std::to_string(size)] = count;
  j["bundle_histogram"] = hist;
  return j;
}

inline void write_allocation_csv(const std::string& path, const StructuredInstance& inst,
                                 const Allocation& alloc) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path);
  out << "student_id,catalog,section\n";
  for (int i = 0; i < inst.num_agents(); ++i) {
    for (int g = 0; g < inst.num_types(); ++g) {
      if (alloc.of(i)[g] > 0) {
        out << inst.agents[i].label << "," << inst.items[g].catalog_label << ","
            << inst.items[g].section_label << "\n";
      }
    }
  }
}

}  // namespace detail

inline nlohmann::ordered_json run(const RunConfig& config) {
  const auto schedule = load_schedule(config.schedule_path);
  const auto respondents = load_responses(config.responses_path, schedule);
  const StructuredInstance inst = build_instance(config, schedule, respondents);
  const PickOrder order = make_pick_order(inst.agents, config.seed);

  std::filesystem::create_directories(config.out_dir);

  nlohmann::ordered_json report;
  report["config"] = {
      {"mechanism", mechanism_name(config.mechanism)},
      {"mode", mode_name(config.mode)},
      {"k", config.k},
      {"seed", config.seed},
      {"cohort", config.cohort},
      {"ell", config.ell},
      {"schedule", config.schedule_path},
      {"responses", config.responses_path},
  };
  report["instance"] = {
      {"agents", inst.num_agents()},
      {"item_types", inst.num_types()},
      {"total_seats", inst.seat_total()},
  };

  const auto started = std::chrono::steady_clock::now();
  if (config.mechanism == Mechanism::kExportIlp) {
    const std::string lp_path = (std::filesystem::path(config.out_dir) / "model.lp").string();
    std::ofstream lp(lp_path);
    if (!lp) throw InputError("cannot write " + lp_path);
    export_ilp(inst, lp);
    report["lp_file"] = lp_path;
  } else {
    Allocation alloc;
    switch (config.mechanism) {
      case Mechanism::kSerialDictatorship:
        alloc = serial_dictatorship(inst, order);
        break;
      case Mechanism::kRoundRobin:
        alloc = round_robin(inst, order);
        break;
      case Mechanism::kYankeeSwap: {
        auto [a, stats] = run_yankee_swap(inst, order);
        alloc = std::move(a);
        nlohmann::ordered_json hist;
        for (const auto& [len, count] : stats.histogram) hist[std::to_string(len)] = count;
        report["path_lengths"] = hist;
        break;
      }
      case Mechanism::kUswFlow:
        alloc = max_usw_flow(inst);
        break;
      case Mechanism::kExportIlp:
        break;
    }
    if (!alloc.is_valid(inst.items)) throw std::logic_error("mechanism produced invalid allocation");
    report["metrics"] = detail::metrics_json(compute_metrics(inst, alloc));
    detail::write_allocation_csv((std::filesystem::path(config.out_dir) / "allocation.csv").string(),
                                 inst, alloc);
  }
  const auto elapsed = std::chrono::steady_clock::now() - started;
  report["wall_ms"] =
      std::chrono::duration_cast<std::chrono::milliseconds>(elapsed).count();

  const std::string report_path = (std::filesystem::path(config.out_dir) / "report.json").string();
  std::ofstream out(report_path);
  if (!out) throw InputError("cannot write " + report_path);
  out << report.dump(2) << "\n";
  return report;
}

}  // namespace fairalloc

#endif  // FAIRALLOC_IO_HPP_
