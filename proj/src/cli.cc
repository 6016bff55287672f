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


#include "paramnoise/cli.h"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <functional>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

#include "paramnoise/csv.h"
#include "paramnoise/envs.h"

namespace paramnoise::cli {
namespace {

Error ParseError(std::string_view key, std::string_view value, std::string_view want) {
  return Error(ErrorCode::kConfigParse, "bad value '" + std::string(value) +
                                            "' for " + std::string(key) + " (want " +
                                            std::string(want) + ")");
}

std::string_view Trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <typename T>
T ParseInteger(std::string_view key, std::string_view v) {
  T out{};
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size()) throw ParseError(key, v, "an integer");
  return out;
}

bool ParseBool(std::string_view key, std::string_view v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ParseError(key, v, "true or false");
}

double ParseNumber(std::string_view key, std::string_view v) {
  try {
    return ParseDouble(v);
  } catch (const Error&) {
    throw ParseError(key, v, "a number");
  }
}

toy::Vec2 ParsePair(std::string_view key, std::string_view v) {
  const auto comma = v.find(',');
  if (comma == std::string_view::npos) throw ParseError(key, v, "x,y");
  return toy::Vec2(ParseNumber(key, Trim(v.substr(0, comma))),
                   ParseNumber(key, Trim(v.substr(comma + 1))));
}

// Typed accessors: each entry reads and writes one field as text.
struct Entry {
  std::string key;
  std::function<void(ExperimentConfig&, std::string_view)> set;
  std::function<std::string(const ExperimentConfig&)> get;
};

template <typename T>
std::string Show(const T& v) {
  if constexpr (std::is_same_v<T, bool>) {
    return v ? "true" : "false";
  } else if constexpr (std::is_floating_point_v<T>) {
    return FormatDouble(v);
  } else if constexpr (std::is_integral_v<T>) {
    return std::to_string(v);
  } else if constexpr (std::is_same_v<T, std::string>) {
    return v;
  } else if constexpr (std::is_same_v<T, toy::Vec2>) {
    return FormatDouble(v.x()) + "," + FormatDouble(v.y());
  } else {
    static_assert(sizeof(T) == 0, "no formatter");
  }
}

template <typename T>
T Read(std::string_view key, std::string_view v) {
  if constexpr (std::is_same_v<T, bool>) {
    return ParseBool(key, v);
  } else if constexpr (std::is_floating_point_v<T>) {
    return ParseNumber(key, v);
  } else if constexpr (std::is_integral_v<T>) {
    return ParseInteger<T>(key, v);
  } else if constexpr (std::is_same_v<T, std::string>) {
    return std::string(v);
  } else if constexpr (std::is_same_v<T, toy::Vec2>) {
    return ParsePair(key, v);
  } else {
    static_assert(sizeof(T) == 0, "no parser");
  }
}

template <typename Access>
Entry Field(std::string key, Access access) {
  using T = std::remove_cvref_t<decltype(access(std::declval<ExperimentConfig&>()))>;
  return Entry{key,
               [key, access](ExperimentConfig& c, std::string_view v) {
                 access(c) = Read<T>(key, v);
               },
               [access](const ExperimentConfig& c) { return Show<T>(access(c)); }};
}

#define PN_FIELD(key, member) \
  Field(key, [](auto& c) -> auto& { return c.member; })

const std::vector<Entry>& Entries() {
  static const std::vector<Entry> entries = [] {
    std::vector<Entry> e;
    e.push_back({"mode",
                 [](ExperimentConfig& c, std::string_view v) { c.mode = ParseMode(v); },
                 [](const ExperimentConfig& c) { return std::string(ModeName(c.mode)); }});
    e.push_back({"strategy",
                 [](ExperimentConfig& c, std::string_view v) { c.strategy = ParseStrategy(v); },
                 [](const ExperimentConfig& c) {
                   return std::string(StrategyName(c.strategy));
                 }});
    e.push_back({"seeds",
                 [](ExperimentConfig& c, std::string_view v) { c.seeds = ParseSeeds(v); },
                 [](const ExperimentConfig& c) { return FormatSeeds(c.seeds); }});
    e.push_back({"out",
                 [](ExperimentConfig& c, std::string_view v) {
                   if (v.empty()) throw ParseError("out", v, "a directory");
                   c.out = std::filesystem::path(std::string(v));
                 },
                 [](const ExperimentConfig& c) { return c.out.string(); }});
    e.push_back(PN_FIELD("jobs", jobs));
    e.push_back(PN_FIELD("table", table));
    e.push_back(PN_FIELD("trajectory", trajectory));
    e.push_back(PN_FIELD("checkpoint", checkpoint));

    e.push_back(PN_FIELD("toy.sparse", toy.sparse));
    e.push_back(PN_FIELD("toy.sparse_threshold", toy.sparse_threshold));
    e.push_back(PN_FIELD("toy.sigma_fix_sq", toy.sigma_fix_sq));
    e.push_back(PN_FIELD("toy.theta_init", toy.theta_init));
    e.push_back(PN_FIELD("toy.c", toy.c));
    e.push_back(PN_FIELD("toy.window", toy.window));
    e.push_back(PN_FIELD("toy.lr", toy.lr));
    e.push_back(PN_FIELD("toy.h", toy.h));
    e.push_back(PN_FIELD("toy.h2", toy.h2));
    e.push_back(PN_FIELD("toy.max_steps", toy.max_steps));
    e.push_back(PN_FIELD("toy.tol", toy.tol));
    e.push_back(PN_FIELD("toy.trajectory_stride", toy.trajectory_stride));

    e.push_back(PN_FIELD("rl.env", rl.env));
    e.push_back({"rl.env_overrides",
                 [](ExperimentConfig& c, std::string_view v) {
                   auto j = nlohmann::json::parse(v.empty() ? "{}" : v, nullptr, false);
                   if (j.is_discarded() || !j.is_object()) {
                     throw ParseError("rl.env_overrides", v, "a JSON object");
                   }
                   c.rl.env_overrides = std::move(j);
                 },
                 [](const ExperimentConfig& c) { return c.rl.env_overrides.dump(); }});
    e.push_back(PN_FIELD("rl.hidden1", rl.hidden1));
    e.push_back(PN_FIELD("rl.hidden2", rl.hidden2));
    e.push_back(PN_FIELD("rl.layer_norm", rl.layer_norm));
    e.push_back(PN_FIELD("rl.lr_actor", rl.lr_actor));
    e.push_back(PN_FIELD("rl.lr_critic", rl.lr_critic));
    e.push_back(PN_FIELD("rl.gamma", rl.gamma));
    e.push_back(PN_FIELD("rl.tau", rl.tau));
    e.push_back(PN_FIELD("rl.batch", rl.batch));
    e.push_back(PN_FIELD("rl.critic_l2", rl.critic_l2));
    e.push_back(PN_FIELD("rl.replay_capacity", rl.replay_capacity));
    e.push_back(PN_FIELD("rl.warmup_steps", rl.warmup_steps));
    e.push_back(PN_FIELD("rl.train_steps_per_env_step", rl.train_steps_per_env_step));
    e.push_back(PN_FIELD("rl.h", rl.noise.h));
    e.push_back(PN_FIELD("rl.h2", rl.noise.h2));
    e.push_back(PN_FIELD("rl.window", rl.noise.window));
    e.push_back(PN_FIELD("rl.delta", rl.noise.delta));
    e.push_back(PN_FIELD("rl.sigma_init", rl.noise.sigma_init));
    e.push_back(PN_FIELD("rl.sigma_factor", rl.noise.sigma_factor));
    e.push_back(PN_FIELD("rl.sigma_adapt_interval", rl.sigma_adapt_interval));
    e.push_back(PN_FIELD("rl.distance_batch", rl.distance_batch));
    e.push_back(PN_FIELD("rl.epochs", rl.epochs));
    e.push_back(PN_FIELD("rl.episodes_per_epoch", rl.episodes_per_epoch));
    e.push_back(PN_FIELD("rl.eval_episodes", rl.eval_episodes));
    return e;
  }();
  return entries;
}

#undef PN_FIELD

const Entry& Lookup(std::string_view key) {
  for (const auto& e : Entries()) {
    if (e.key == key) return e;
  }
  throw Error(ErrorCode::kConfigParse, "unknown key '" + std::string(key) + "'");
}

std::vector<Override> ParseLines(std::string_view text) {
  std::vector<Override> out;
  int line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string_view::npos) line = line.substr(0, hash);
    line = Trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw Error(ErrorCode::kConfigParse,
                  "line " + std::to_string(line_no) + ": expected key = value");
    }
    out.emplace_back(std::string(Trim(line.substr(0, eq))),
                     std::string(Trim(line.substr(eq + 1))));
  }
  return out;
}

std::vector<std::uint64_t> DefaultSeeds(Mode m) {
  std::vector<std::uint64_t> s(m == Mode::kToy ? 100 : 10);
  for (std::size_t i = 0; i < s.size(); ++i) s[i] = i;
  return s;
}

void Validate(const ExperimentConfig& c) {
  if (c.seeds.empty()) throw Error(ErrorCode::kConfigInvalid, "seed list is empty");
  if (c.jobs < 1) throw Error(ErrorCode::kConfigInvalid, "jobs must be >= 1");
  if (c.mode == Mode::kToy) {
    c.toy.Validate();
  } else {
    c.rl.Validate();
  }
}

std::string CellName(const toy::ToyConfig& cell) {
  std::string s = std::string(StrategyName(cell.strategy)) + "_" +
                  (cell.sparse ? "sparse" : "dense") + "_" + FormatDouble(cell.sigma_fix_sq);
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char ch) {
    return static_cast<char>(std::tolower(ch));
  });
  return s;
}

template <typename Write>
void WriteCsv(const std::filesystem::path& path, Write write) {
  std::ostringstream os;
  write(os);
  WriteFileAtomic(path, os.str());
}

std::string SciWithStd(double mean, double std) {
  if (std::isnan(mean)) return "-";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.2e +- %.2e", mean, std);
  return buf;
}

void RunToyMode(const ExperimentConfig& c, std::ostream& log) {
  std::vector<toy::ToyConfig> cells;
  if (c.table) {
    for (bool sparse : {false, true}) {
      for (Strategy s : {Strategy::kFixedVariance, Strategy::kAdaptiveCov,
                         Strategy::kProposed}) {
        for (double sig : {1.0, 0.5}) {
          toy::ToyConfig cell = c.toy;
          cell.sparse = sparse;
          cell.strategy = s;
          cell.sigma_fix_sq = sig;
          cells.push_back(cell);
        }
      }
    }
  } else {
    toy::ToyConfig cell = c.toy;
    cell.strategy = c.strategy;
    cells.push_back(cell);
  }

  std::ostringstream summary;
  summary << kToySummaryHeader << '\n';
  char line[256];
  std::snprintf(line, sizeof(line), "%-7s %-6s %-5s %5s %5s %22s %22s\n", "reward",
                "method", "s^2", "move", "opt", "steps", "distance");
  log << line;
  for (const auto& cell : cells) {
    const toy::SweepResult r = toy::RunSweep(cell, c.seeds, c.jobs);
    const auto dir = c.out / CellName(cell);
    WriteCsv(dir / "seeds.csv", [&](std::ostream& os) { toy::WriteSeedCsv(os, r.outcomes); });
    if (c.trajectory) {
      for (std::uint64_t seed : c.seeds) {
        toy::ToyConfig one = cell;
        one.seed = seed;
        one.record_trajectory = true;
        const toy::ToyResult tr = toy::RunToy(one);
        const std::string stem = "seed_" + std::to_string(seed);
        WriteCsv(dir / (stem + "_trajectory.csv"),
                 [&](std::ostream& os) { toy::WriteTrajectoryCsv(os, tr.trajectory); });
        WriteCsv(dir / (stem + "_exploration.csv"),
                 [&](std::ostream& os) { WriteExplorationLogCsv(os, tr.exploration); });
      }
    }
    summary << ToySummaryLine(cell, r.stats) << '\n';
    std::snprintf(line, sizeof(line), "%-7s %-6s %-5s %5d %5d %22s %22s\n",
                  cell.sparse ? "sparse" : "dense",
                  std::string(StrategyName(cell.strategy)).c_str(),
                  FormatDouble(cell.sigma_fix_sq).c_str(), r.stats.moved, r.stats.optimized,
                  SciWithStd(r.stats.step_mean, r.stats.step_std).c_str(),
                  SciWithStd(r.stats.distance_mean, r.stats.distance_std).c_str());
    log << line << std::flush;
  }
  WriteFileAtomic(c.out / "summary.csv", summary.str());
}

struct SeedRun {
  TrainingResult result;
  std::string checkpoint;
};

std::vector<SeedRun> TrainSeeds(const TrainConfig& base,
                                std::span<const std::uint64_t> seeds, int jobs,
                                bool checkpoint, std::ostream& log) {
  std::vector<SeedRun> runs(seeds.size());
  std::atomic<std::size_t> next{0};
  std::mutex log_mu;
  auto worker = [&] {
    for (std::size_t i = next++; i < seeds.size(); i = next++) {
      TrainConfig cfg = base;
      cfg.seed = seeds[i];
      Trainer t(cfg);
      t.Run();
      runs[i].result = t.result();
      if (checkpoint) {
        std::ostringstream os(std::ios::binary);
        t.SaveCheckpoint(os);
        runs[i].checkpoint = os.str();
      }
      std::lock_guard lock(log_mu);
      const auto& curve = t.result().curve;
      log << StrategyName(cfg.strategy) << " seed " << cfg.seed << ": final return "
          << (curve.empty() ? std::string("-") : FormatDouble(curve.back().mean_return_perturbed))
          << '\n'
          << std::flush;
    }
  };
  const std::size_t n_threads =
      std::clamp<std::size_t>(static_cast<std::size_t>(jobs), 1, seeds.size());
  if (n_threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < n_threads; ++t) pool.emplace_back(worker);
  }
  return runs;
}

std::vector<RlSummaryRow> RunArm(const ExperimentConfig& c, Strategy s,
                                 const std::filesystem::path& dir, std::ostream& log) {
  TrainConfig base = c.rl;
  base.strategy = s;
  const std::vector<SeedRun> runs = TrainSeeds(base, c.seeds, c.jobs, c.checkpoint, log);
  std::vector<std::vector<EpochStats>> curves;
  for (std::size_t i = 0; i < runs.size(); ++i) {
    const TrainingResult& r = runs[i].result;
    const std::string stem = "seed_" + std::to_string(c.seeds[i]);
    WriteCsv(dir / (stem + "_curve.csv"), [&](std::ostream& os) { WriteCurveCsv(os, r.curve); });
    WriteCsv(dir / (stem + "_exploration.csv"),
             [&](std::ostream& os) { WriteExplorationLogCsv(os, r.exploration); });
    WriteCsv(dir / (stem + "_episodes.csv"), [&](std::ostream& os) {
      os << kEpisodeCsvHeader << '\n';
      for (std::size_t e = 0; e < r.episode_returns.size(); ++e) {
        os << e << ',' << FormatDouble(r.episode_returns[e]) << ','
           << FormatDouble(r.episode_alpha[e]) << '\n';
      }
    });
    if (c.checkpoint) WriteFileAtomic(dir / (stem + ".ckpt"), runs[i].checkpoint);
    curves.push_back(ReadCurveCsv([&] {
      std::ostringstream os;
      WriteCurveCsv(os, r.curve);
      return os.str();
    }()));
  }
  return SummarizeCurves(StrategyName(s), curves);
}

void PrintRlSummary(std::span<const RlSummaryRow> rows, std::ostream& log) {
  char line[256];
  std::snprintf(line, sizeof(line), "%-9s %5s %12s %24s %8s\n", "arm", "epoch", "median",
                "iqr", "nonzero");
  log << line;
  for (const auto& r : rows) {
    std::snprintf(line, sizeof(line), "%-9s %5d %12.4g %11.4g .. %-10.4g %4d/%d\n",
                  r.arm.c_str(), r.epoch, r.median_perturbed, r.q25_perturbed,
                  r.q75_perturbed, r.nonzero_perturbed, r.seeds);
    log << line;
  }
}

void RunRlMode(const ExperimentConfig& c, std::ostream& log) {
  std::vector<Strategy> arms;
  if (c.mode == Mode::kBaselineCompare) {
    arms = {Strategy::kProposed, Strategy::kPlappert};
  } else {
    arms = {c.strategy};
  }
  std::vector<RlSummaryRow> rows;
  for (Strategy s : arms) {
    std::string dir = std::string(StrategyName(s));
    std::transform(dir.begin(), dir.end(), dir.begin(),
                   [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
    const auto arm_rows = RunArm(c, s, c.out / dir, log);
    rows.insert(rows.end(), arm_rows.begin(), arm_rows.end());
  }
  WriteCsv(c.out / "summary.csv", [&](std::ostream& os) { WriteRlSummary(os, rows); });
  PrintRlSummary(rows, log);
}

}  // namespace

std::string_view ModeName(Mode m) {
  switch (m) {
    case Mode::kToy: return "toy";
    case Mode::kRl: return "rl";
    case Mode::kBaselineCompare: return "baseline-compare";
  }
  return "toy";
}

Mode ParseMode(std::string_view name) {
  for (Mode m : {Mode::kToy, Mode::kRl, Mode::kBaselineCompare}) {
    if (ModeName(m) == name) return m;
  }
  throw ParseError("mode", name, "toy, rl or baseline-compare");
}

std::vector<std::uint64_t> ParseSeeds(std::string_view text) {
  std::vector<std::uint64_t> out;
  while (!text.empty()) {
    const auto comma = text.find(',');
    const std::string_view item = Trim(text.substr(0, comma));
    text = comma == std::string_view::npos ? std::string_view{} : text.substr(comma + 1);
    if (item.empty()) throw ParseError("seeds", item, "a seed list like 0-9,12");
    const auto dash = item.find('-');
    if (dash == std::string_view::npos) {
      out.push_back(ParseInteger<std::uint64_t>("seeds", item));
      continue;
    }
    const auto lo = ParseInteger<std::uint64_t>("seeds", Trim(item.substr(0, dash)));
    const auto hi = ParseInteger<std::uint64_t>("seeds", Trim(item.substr(dash + 1)));
    if (hi < lo || hi - lo >= 1000000) throw ParseError("seeds", item, "lo-hi with lo <= hi");
    for (std::uint64_t s = lo; s <= hi; ++s) out.push_back(s);
  }
  if (out.empty()) throw ParseError("seeds", text, "at least one seed");
  return out;
}

std::string FormatSeeds(std::span<const std::uint64_t> seeds) {
  std::string out;
  for (std::size_t i = 0; i < seeds.size();) {
    std::size_t j = i;
    while (j + 1 < seeds.size() && seeds[j + 1] == seeds[j] + 1) ++j;
    if (!out.empty()) out += ',';
    out += std::to_string(seeds[i]);
    if (j > i) out += '-' + std::to_string(seeds[j]);
    i = j + 1;
  }
  return out;
}

ExperimentConfig ResolveConfig(Mode mode, std::string_view file_text,
                               std::span<const Override> overrides) {
  ExperimentConfig c;
  c.seeds = DefaultSeeds(mode);
  bool sigma_set = false;
  bool seeds_set = false;
  auto apply = [&](const Override& kv) {
    Lookup(kv.first).set(c, kv.second);
    sigma_set |= kv.first == "rl.sigma_init";
    seeds_set |= kv.first == "seeds";
  };
  for (const auto& kv : ParseLines(file_text)) apply(kv);
  for (const auto& kv : overrides) apply(kv);
  // the subcommand decides the mode
  c.mode = mode;
  if (!seeds_set) c.seeds = DefaultSeeds(mode);
  if (!sigma_set) c.rl.noise.sigma_init = DefaultSigmaInit(c.rl.env);
  c.rl.strategy = c.strategy;
  Validate(c);
  return c;
}

std::string FormatConfig(const ExperimentConfig& config) {
  std::string out;
  for (const auto& e : Entries()) out += e.key + " = " + e.get(config) + "\n";
  return out;
}

double Quantile(std::vector<double> values, double q) {
  std::erase_if(values, [](double v) { return std::isnan(v); });
  if (values.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(values.begin(), values.end());
  const double pos = q * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, values.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return values[lo] + frac * (values[hi] - values[lo]);
}

std::vector<RlSummaryRow> SummarizeCurves(
    std::string_view arm, std::span<const std::vector<EpochStats>> curves) {
  std::vector<RlSummaryRow> rows;
  if (curves.empty()) return rows;
  const std::size_t n_epochs = curves.front().size();
  for (const auto& c : curves) {
    if (c.size() != n_epochs) {
      throw Error(ErrorCode::kDimensionMismatch, "seed curves differ in length");
    }
  }
  for (std::size_t e = 0; e < n_epochs; ++e) {
    std::vector<double> pert, clean;
    RlSummaryRow row;
    row.arm = std::string(arm);
    row.epoch = curves.front()[e].epoch;
    row.seeds = static_cast<int>(curves.size());
    for (const auto& c : curves) {
      pert.push_back(c[e].mean_return_perturbed);
      clean.push_back(c[e].mean_return_clean);
      row.nonzero_perturbed += c[e].mean_return_perturbed != 0.0;
    }
    row.median_perturbed = Quantile(pert, 0.5);
    row.q25_perturbed = Quantile(pert, 0.25);
    row.q75_perturbed = Quantile(pert, 0.75);
    row.median_clean = Quantile(clean, 0.5);
    row.q25_clean = Quantile(clean, 0.25);
    row.q75_clean = Quantile(clean, 0.75);
    rows.push_back(row);
  }
  return rows;
}

void WriteRlSummary(std::ostream& os, std::span<const RlSummaryRow> rows) {
  os << kRlSummaryHeader << '\n';
  for (const auto& r : rows) {
    os << r.arm << ',' << r.epoch << ',' << r.seeds << ',' << FormatDouble(r.median_perturbed)
       << ',' << FormatDouble(r.q25_perturbed) << ',' << FormatDouble(r.q75_perturbed) << ','
       << FormatDouble(r.median_clean) << ',' << FormatDouble(r.q25_clean) << ','
       << FormatDouble(r.q75_clean) << ',' << r.nonzero_perturbed << '\n';
  }
}

std::vector<EpochStats> ReadCurveCsv(std::string_view text) {
  std::vector<EpochStats> out;
  bool header = true;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    const std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    if (line.empty()) continue;
    if (header) {
      if (line != kCurveCsvHeader) throw Error(ErrorCode::kConfigParse, "not a curve CSV");
      header = false;
      continue;
    }
    const auto f = SplitCsvLine(line);
    if (f.size() != 3) throw Error(ErrorCode::kConfigParse, "curve CSV row needs 3 fields");
    out.push_back(EpochStats{ParseInteger<int>("epoch", f[0]), ParseDouble(f[1]),
                             ParseDouble(f[2])});
  }
  return out;
}

std::string ToySummaryLine(const toy::ToyConfig& cell, const toy::SweepStats& s) {
  std::string name(StrategyName(cell.strategy));
  return name + ',' + FormatDouble(cell.sigma_fix_sq) + ',' +
         (cell.sparse ? "sparse" : "dense") + ',' + std::to_string(s.runs) + ',' +
         std::to_string(s.moved) + ',' + std::to_string(s.optimized) + ',' +
         FormatDouble(s.step_mean) + ',' + FormatDouble(s.step_std) + ',' +
         FormatDouble(s.distance_mean) + ',' + FormatDouble(s.distance_std);
}

void RunExperiment(const ExperimentConfig& config, std::ostream& log) {
  Validate(config);
  std::error_code ec;
  std::filesystem::create_directories(config.out, ec);
  if (ec || !std::filesystem::is_directory(config.out)) {
    throw Error(ErrorCode::kIoError, "cannot create output directory " + config.out.string());
  }
  WriteFileAtomic(config.out / "config.txt", FormatConfig(config));
  if (config.mode == Mode::kToy) {
    RunToyMode(config, log);
  } else {
    RunRlMode(config, log);
  }
}

int ExitCodeFor(ErrorCode code) {
  switch (code) {
    case ErrorCode::kConfigParse: return 2;
    case ErrorCode::kEnvNotFound: return 3;
    case ErrorCode::kIoError: return 4;
    case ErrorCode::kConfigInvalid: return 5;
    default: return 1;
  }
}

}  // namespace paramnoise::cli
