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


// End-to-end acceptance checks. Prints one line per criterion:
//
//   criterion N PASS|FAIL  details
//
// and exits nonzero if any selected criterion fails. Select with
// --criteria 1,3,5 (default: all). Artifacts go under --out.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <numbers>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "CLI11.hpp"
#include "paramnoise/cli.h"
#include "paramnoise/csv.h"
#include "paramnoise/error.h"
#include "paramnoise/mvn.h"
#include "paramnoise/nets.h"
#include "paramnoise/noise.h"
#include "paramnoise/toybench.h"

namespace {

namespace fs = std::filesystem;
using namespace paramnoise;

struct Outcome {
  bool pass = true;
  std::string detail;
};

std::string Fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof(buf), f, args...);
  return buf;
}

std::vector<std::vector<std::string>> ReadCsvRows(const fs::path& path) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream is(ReadFile(path));
  std::string line;
  std::getline(is, line);  // header
  while (std::getline(is, line)) {
    if (!line.empty()) rows.push_back(SplitCsvLine(line));
  }
  return rows;
}

// ---------------------------------------------------------------- 1

struct Reference {
  const char* strategy;
  const char* reward;
  double sigma_sq;
  double steps;
};

// Reference mean steps-to-optimize per cell.
constexpr Reference kReference[] = {
    {"fv", "dense", 1.0, 4.39e3},  {"ac", "dense", 1.0, 2.35e3},
    {"pro", "dense", 1.0, 1.70e3}, {"fv", "dense", 0.5, 2.10e4},
    {"ac", "dense", 0.5, 2.45e3},  {"pro", "dense", 0.5, 2.20e3},
    {"fv", "sparse", 1.0, 4.61e3}, {"ac", "sparse", 1.0, 1.14e3},
    {"pro", "sparse", 1.0, 1.25e3}, {"fv", "sparse", 0.5, 2.81e4},
    {"ac", "sparse", 0.5, 1.17e3}, {"pro", "sparse", 0.5, 4.25e3},
};

Outcome Criterion1(const fs::path& out) {
  const fs::path dir = out / "toy_table";
  const std::vector<cli::Override> ov = {{"table", "true"}, {"out", dir.string()}};
  std::ostringstream log;
  cli::RunExperiment(cli::ResolveConfig(cli::Mode::kToy, "", ov), log);

  struct Cell {
    int optimized = 0;
    double steps = 0;
  };
  std::map<std::string, Cell> cells;
  auto key = [](const std::string& s, const std::string& r, double v) {
    return s + "/" + r + "/" + FormatDouble(v);
  };
  for (const auto& row : ReadCsvRows(dir / "summary.csv")) {
    cells[key(row[0], row[2], ParseDouble(row[1]))] =
        Cell{std::stoi(row[5]), ParseDouble(row[6])};
  }
  Outcome o;
  std::string failures;
  auto fail = [&](const std::string& why) {
    o.pass = false;
    failures += " " + why + ";";
  };
  for (const char* reward : {"dense", "sparse"}) {
    for (double v : {1.0, 0.5}) {
      const Cell pro = cells[key("pro", reward, v)];
      const Cell fv = cells[key("fv", reward, v)];
      const Cell ac = cells[key("ac", reward, v)];
      const std::string where = Fmt("%s/%g", reward, v);
      if (pro.optimized != 100) fail(Fmt("Pro %s optimized %d", where.c_str(), pro.optimized));
      if (fv.optimized < 96) fail(Fmt("FV %s optimized %d", where.c_str(), fv.optimized));
      if (std::string(reward) == "sparse" && ac.optimized > 80) {
        fail(Fmt("AC %s optimized %d", where.c_str(), ac.optimized));
      }
      if (!(pro.steps < fv.steps)) {
        fail(Fmt("Pro %s steps %.3g not below FV %.3g", where.c_str(), pro.steps, fv.steps));
      }
    }
  }
  double worst = 0;
  for (const auto& r : kReference) {
    const Cell c = cells[key(r.strategy, r.reward, r.sigma_sq)];
    const double ratio = std::abs(std::log10(c.steps / r.steps));
    worst = std::max(worst, std::isnan(ratio) ? 99.0 : ratio);
    if (!(ratio < 1.0)) {
      fail(Fmt("%s %s/%g steps %.3g vs %.3g", r.strategy, r.reward, r.sigma_sq, c.steps,
               r.steps));
    }
  }
  o.detail = Fmt("sparse optimized AC %d/%d FV %d/%d Pro %d/%d; worst step ratio 10^%.2f",
                 cells[key("ac", "sparse", 1.0)].optimized,
                 cells[key("ac", "sparse", 0.5)].optimized,
                 cells[key("fv", "sparse", 1.0)].optimized,
                 cells[key("fv", "sparse", 0.5)].optimized,
                 cells[key("pro", "sparse", 1.0)].optimized,
                 cells[key("pro", "sparse", 0.5)].optimized, worst) +
             failures;
  return o;
}

// ---------------------------------------------------------------- 2

Outcome Criterion2() {
  Outcome o;
  for (double v : {1.0, 0.5}) {
    int collapsed = 0;
    int pro_bad = 0, pro_windows = 0;
    double pro_min = 1e300;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
      toy::ToyConfig ac;
      ac.sparse = true;
      ac.strategy = Strategy::kAdaptiveCov;
      ac.sigma_fix_sq = v;
      ac.seed = seed;
      ac.max_steps = 100;
      const toy::ToyResult r = toy::RunToy(ac);
      bool below = false;
      for (const auto& l : r.exploration) below |= l.sigma_bar < 0.01;
      collapsed += below;

      toy::ToyConfig pro = ac;
      pro.strategy = Strategy::kProposed;
      pro.max_steps = 2000;
      pro.record_trajectory = true;
      const toy::ToyResult p = toy::RunToy(pro);
      const double floor = 0.5 * std::sqrt(v);
      for (std::size_t w = 0; w < p.exploration.size(); ++w) {
        bool rewarded = false;
        for (const auto& theta : p.trajectory[w].perturbed) {
          rewarded |= toy::RewardSparse(theta, pro.c, pro.sparse_threshold) > 0;
        }
        if (rewarded) break;
        ++pro_windows;
        pro_min = std::min(pro_min, p.exploration[w].sigma_bar / std::sqrt(v));
        pro_bad += p.exploration[w].sigma_bar < floor;
      }
    }
    const bool ok = collapsed >= 90 && pro_bad == 0;
    o.pass &= ok;
    o.detail += Fmt("s^2=%g: AC below 0.01 by window 100 in %d/100 seeds (need 90); "
                    "Pro min sigma_bar/sigma_fix %.3f over %d pre-reward windows; ",
                    v, collapsed, pro_min, pro_windows);
  }
  return o;
}

// ---------------------------------------------------------------- 3

double RelErr(double a, double b) {
  if (a == b) return 0.0;
  return std::abs(a - b) / std::max(std::abs(a), std::abs(b));
}

std::vector<double> OracleWeights(const std::vector<double>& j, double h) {
  long double hi = j[0], lo = j[0];
  for (double x : j) {
    hi = std::max<long double>(hi, x);
    lo = std::min<long double>(lo, x);
  }
  std::vector<double> p(j.size());
  if (hi == lo) {
    std::fill(p.begin(), p.end(), 1.0 / static_cast<double>(j.size()));
    return p;
  }
  long double z = 0;
  std::vector<long double> e(j.size());
  for (std::size_t k = 0; k < j.size(); ++k) {
    e[k] = std::exp(-static_cast<long double>(h) * (hi - j[k]) / (hi - lo));
    z += e[k];
  }
  for (std::size_t k = 0; k < j.size(); ++k) p[k] = static_cast<double>(e[k] / z);
  return p;
}

double OracleAlpha(const std::vector<double>& j, double h2) {
  long double hi = *std::max_element(j.begin(), j.end());
  long double lo = *std::min_element(j.begin(), j.end());
  if (hi == 0) return 1.0;
  if (hi < 0) {
    hi -= lo;
    lo = 0;
  }
  const long double a = std::exp(-static_cast<long double>(h2) * (hi - lo) / hi);
  return static_cast<double>(std::clamp<long double>(a, 0, 1));
}

Outcome Criterion3() {
  Rng rng(20260301);
  double worst_w = 0, worst_a = 0, worst_c = 0, worst_d = 0, worst_s = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const int k = 1 + static_cast<int>(rng.Uniform() * 20);
    const double scale = std::pow(10.0, rng.Uniform(-3, 3));
    const double shift = trial % 3 == 0 ? -scale * 2 : 0.0;
    std::vector<double> j(static_cast<std::size_t>(k));
    for (auto& x : j) x = shift + scale * rng.Uniform(-1, 1);
    const double h = rng.Uniform(0, 20), h2 = rng.Uniform(0, 20);

    const Vector w = ComputeWeights(j, h);
    const auto ow = OracleWeights(j, h);
    for (int i = 0; i < k; ++i) worst_w = std::max(worst_w, RelErr(w[i], ow[static_cast<std::size_t>(i)]));
    worst_a = std::max(worst_a, RelErr(ComputeAlpha(j, h2), OracleAlpha(j, h2)));

    const int n = 1 + static_cast<int>(rng.Uniform() * 8);
    std::vector<EpisodeRecord> records;
    for (int i = 0; i < k; ++i) records.push_back({StandardNormal(n, rng), j[static_cast<std::size_t>(i)]});
    const Matrix cov = UpdateCovariance(records, w);
    for (int r = 0; r < n; ++r) {
      for (int c = 0; c < n; ++c) {
        long double acc = 0;
        for (int i = 0; i < k; ++i) {
          acc += static_cast<long double>(w[i]) * records[static_cast<std::size_t>(i)].noise[r] *
                 records[static_cast<std::size_t>(i)].noise[c];
        }
        // entries summing to ~0 are compared against the sum of magnitudes
        long double mag = 0;
        for (int i = 0; i < k; ++i) {
          mag += std::abs(static_cast<long double>(w[i]) * records[static_cast<std::size_t>(i)].noise[r] *
                          records[static_cast<std::size_t>(i)].noise[c]);
        }
        const double err = std::abs(cov(r, c) - static_cast<double>(acc)) /
                           std::max(static_cast<double>(mag), 1e-300);
        worst_c = std::max(worst_c, err);
      }
    }

    const int sd = 1 + static_cast<int>(rng.Uniform() * 5);
    const int ad = 1 + static_cast<int>(rng.Uniform() * 3);
    std::vector<double> limits(static_cast<std::size_t>(ad));
    for (auto& l : limits) l = rng.Uniform(0.5, 2.0);
    PolicyNet pi(sd, 6, 5, limits, trial % 2 == 0);
    pi.Initialize(rng);
    const PolicyNet other = pi.Perturbed(0.3 * StandardNormal(pi.num_perturbable(), rng));
    const int batch = 1 + static_cast<int>(rng.Uniform() * 16);
    Matrix states(sd, batch);
    for (Eigen::Index i = 0; i < states.size(); ++i) states.data()[i] = rng.Uniform(-2, 2);
    long double sq = 0;
    for (int b = 0; b < batch; ++b) {
      const Vector x = pi.Act(states.col(b)), y = other.Act(states.col(b));
      for (int a = 0; a < ad; ++a) sq += static_cast<long double>(x[a] - y[a]) * (x[a] - y[a]);
    }
    const double oracle_d = static_cast<double>(std::sqrt(sq / ad / batch));
    worst_d = std::max(worst_d, RelErr(PolicyDistance(pi, other, states), oracle_d));

    const double sigma = rng.Uniform(0.01, 2), delta = rng.Uniform(0.01, 1);
    const double d = trial % 7 == 0 ? delta : rng.Uniform(0, 2);
    const double factor = 1.0 + rng.Uniform(0.001, 0.5);
    const double oracle_s = d < delta ? sigma * factor : sigma / factor;
    worst_s = std::max(worst_s, RelErr(AdaptSigma(sigma, d, delta, factor), oracle_s));
  }

  // degenerate branches
  std::string branch_fail;
  const std::vector<double> equal = {4.0, 4.0, 4.0, 4.0};
  const Vector u = ComputeWeights(equal, 8.0);
  for (int i = 0; i < 4; ++i) {
    if (u[i] != 0.25) branch_fail += " uniform";
  }
  if (ComputeAlpha(std::vector<double>{0, 0, 0}, 10) != 1.0) branch_fail += " all-zero";
  if (ComputeAlpha(std::vector<double>{0, -3}, 10) != 1.0) branch_fail += " zero-max";
  if (RelErr(ComputeAlpha(std::vector<double>{-2, -10}, 10), std::exp(-10.0)) > 1e-10) {
    branch_fail += " negative-shift";
  }
  if (ComputeAlpha(std::vector<double>{7, 7}, 10) != 1.0) branch_fail += " equal";

  Outcome o;
  const double worst = std::max({worst_w, worst_a, worst_c, worst_d, worst_s});
  o.pass = worst <= 1e-10 && branch_fail.empty();
  o.detail = Fmt("max rel err weights %.1e alpha %.1e covariance %.1e distance %.1e "
                 "sigma %.1e (tol 1e-10); degenerate branches %s",
                 worst_w, worst_a, worst_c, worst_d, worst_s,
                 branch_fail.empty() ? "ok" : branch_fail.c_str());
  return o;
}

// ---------------------------------------------------------------- 4

Outcome Criterion4() {
  Rng rng(44);
  double worst = 0;
  int cases = 0;
  for (int m = 0; m < 20; ++m) {
    const int n = 2 + m % 7;
    Matrix a(n, n);
    for (Eigen::Index i = 0; i < a.size(); ++i) a.data()[i] = rng.Normal();
    NoiseDistribution dist(n, rng.Uniform(0.2, 1.5));
    dist.set_covariance(a * a.transpose() / n);
    for (double alpha : {0.0, 0.3, 1.0}) {
      dist.set_alpha(alpha);
      const NoiseSampler sampler(dist);
      Matrix emp = Matrix::Zero(n, n);
      constexpr int kDraws = 100000;
      for (int i = 0; i < kDraws; ++i) {
        const Vector e = sampler.Sample(rng);
        emp.noalias() += e * e.transpose();
      }
      emp /= kDraws;
      const Matrix target = EffectiveCovariance(dist);
      worst = std::max(worst, (emp - target).norm() / target.norm());
      ++cases;
    }
  }
  Outcome o;
  o.pass = worst < 0.05;
  o.detail = Fmt("worst relative Frobenius error %.4f over %d cases (tol 0.05)", worst, cases);
  return o;
}

// ---------------------------------------------------------------- 5

double MaxRelGap(const Vector& a, const Vector& b) {
  double worst = 0;
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    const double scale = std::max({std::abs(a[i]), std::abs(b[i]), 1e-6});
    worst = std::max(worst, std::abs(a[i] - b[i]) / scale);
  }
  return worst;
}

template <typename F>
Vector CentralDifference(double* x, Eigen::Index n, F&& f, double h = 1e-5) {
  Vector g(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double keep = x[i];
    x[i] = keep + h;
    const double up = f();
    x[i] = keep - h;
    const double down = f();
    x[i] = keep;
    g[i] = (up - down) / (2 * h);
  }
  return g;
}

Outcome Criterion5() {
  Rng rng(55);
  double toy_worst = 0;
  const toy::Vec2 c(3.0, 3.0);
  for (int i = 0; i < 1000; ++i) {
    toy::Vec2 theta(rng.Uniform(-2, 8), rng.Uniform(-2, 8));
    for (bool sparse : {false, true}) {
      // keep sparse probes off the support edge, where the reward jumps
      if (sparse && std::abs((theta - c).squaredNorm() - 6.25) < 1e-3) continue;
      auto f = [&] {
        return sparse ? toy::RewardSparse(theta, c) : toy::RewardDense(theta, c);
      };
      const Vector fd = CentralDifference(theta.data(), 2, f, 1e-6);
      const toy::Vec2 g = toy::RewardGradient(theta, c, sparse);
      toy_worst = std::max(toy_worst, (g - toy::Vec2(fd[0], fd[1])).cwiseAbs().maxCoeff());
    }
  }

  double net_worst = 0;
  for (int trial = 0; trial < 8; ++trial) {
    const bool ln = trial % 2 == 0;
    PolicyNet actor(4, 12, 10, {1.0, 2.0}, ln);
    actor.Initialize(rng);
    actor.params() += 0.3 * StandardNormal(actor.params().size(), rng);
    Matrix s(4, 8), w(2, 8);
    for (Eigen::Index i = 0; i < s.size(); ++i) s.data()[i] = rng.Uniform(-2, 2);
    for (Eigen::Index i = 0; i < w.size(); ++i) w.data()[i] = rng.Uniform(-1, 1);
    auto actor_loss = [&] { return (actor.Forward(s).array() * w.array()).sum(); };
    const Vector ga = actor.Backward(s, w);
    net_worst = std::max(net_worst, MaxRelGap(ga, CentralDifference(actor.params().data(),
                                                                     actor.params().size(),
                                                                     actor_loss)));

    CriticNet critic(4, 2, 12, 10, ln);
    critic.Initialize(rng);
    critic.params() += 0.3 * StandardNormal(critic.params().size(), rng);
    Matrix act(2, 8);
    for (Eigen::Index i = 0; i < act.size(); ++i) act.data()[i] = rng.Uniform(-1, 1);
    Eigen::RowVectorXd q(8);
    for (int i = 0; i < 8; ++i) q[i] = rng.Uniform(-1, 1);
    auto critic_loss = [&] { return critic.Forward(s, act).dot(q); };
    const CriticNet::Gradients gc = critic.Backward(s, act, q);
    net_worst = std::max(net_worst, MaxRelGap(gc.params, CentralDifference(critic.params().data(),
                                                                          critic.params().size(),
                                                                          critic_loss)));
    const Vector ga_act = Eigen::Map<const Vector>(gc.actions.data(), gc.actions.size());
    net_worst = std::max(net_worst,
                         MaxRelGap(ga_act, CentralDifference(act.data(), act.size(), critic_loss)));
  }
  Outcome o;
  o.pass = toy_worst <= 1e-6 && net_worst <= 1e-4;
  o.detail = Fmt("toy max abs err %.1e (tol 1e-6); actor/critic max rel err %.1e (tol 1e-4)",
                 toy_worst, net_worst);
  return o;
}

// ---------------------------------------------------------------- 6 and 7

// Reduced-budget sparse cart-pole comparison: a weaker motor than the default
// task so that a lucky early swing-up does not decide every seed.
std::vector<cli::Override> SparseCartpoleRun(const fs::path& dir) {
  return {{"rl.env", "sparse-cartpole-swingup"},
          {"rl.env_overrides", R"({"force_max": 3})"},
          {"rl.hidden1", "32"},
          {"rl.hidden2", "32"},
          {"rl.epochs", "25"},
          {"seeds", "0-9"},
          {"out", dir.string()}};
}

struct Criterion67 {
  Outcome six, seven;
};

Criterion67 Criteria6And7(const fs::path& out) {
  const fs::path dir = out / "sparse_cartpole";
  std::ostringstream log;
  const auto config =
      cli::ResolveConfig(cli::Mode::kBaselineCompare, "", SparseCartpoleRun(dir));
  cli::RunExperiment(config, log);

  std::map<std::string, std::vector<std::string>> last;
  for (const auto& row : ReadCsvRows(dir / "summary.csv")) last[row[0]] = row;
  const auto& pro = last["pro"];
  const auto& pl = last["plappert"];
  Criterion67 r;
  const double pro_med = ParseDouble(pro[3]), pl_med = ParseDouble(pl[3]);
  const int pro_nz = std::stoi(pro[9]), pl_nz = std::stoi(pl[9]);
  r.six.pass = pro_med > pl_med && pro_nz > pl_nz;
  r.six.detail = Fmt("final epoch %s: median perturbed return Pro %.4g vs Plappert %.4g; "
                     "nonzero seeds Pro %d/10 vs Plappert %d/10",
                     pro[1].c_str(), pro_med, pl_med, pro_nz, pl_nz);

  int hit_seeds = 0, early_violations = 0, switched = 0;
  for (std::uint64_t seed : config.seeds) {
    const auto rows = ReadCsvRows(dir / "pro" / ("seed_" + std::to_string(seed) + "_episodes.csv"));
    std::size_t first = rows.size();
    for (std::size_t e = 0; e < rows.size(); ++e) {
      if (ParseDouble(rows[e][1]) != 0.0) {
        first = e;
        break;
      }
    }
    // alpha is fixed per window; every window up to and including the one
    // that sees the first reward was sampled isotropically
    for (std::size_t e = 0; e < std::min(first + 1, rows.size()); ++e) {
      early_violations += ParseDouble(rows[e][2]) != 1.0;
    }
    if (first == rows.size()) continue;
    ++hit_seeds;
    bool low = false;
    for (std::size_t e = first; e < rows.size(); ++e) low |= ParseDouble(rows[e][2]) < 0.5;
    switched += low;
  }
  r.seven.pass = early_violations == 0 && hit_seeds > 0 && switched == hit_seeds;
  r.seven.detail = Fmt("pre-reward episodes with alpha != 1: %d; seeds with a reward %d, of "
                       "which %d later sample with alpha < 0.5",
                       early_violations, hit_seeds, switched);
  return r;
}

// ---------------------------------------------------------------- 8

int CompareTrees(const fs::path& a, const fs::path& b, int* files) {
  int diffs = 0;
  for (const auto& entry : fs::recursive_directory_iterator(a)) {
    if (!entry.is_regular_file()) continue;
    const auto rel = fs::relative(entry.path(), a);
    if (rel == "config.txt") continue;  // holds the output path
    ++*files;
    if (!fs::exists(b / rel) || ReadFile(entry.path()) != ReadFile(b / rel)) ++diffs;
  }
  return diffs;
}

Outcome Criterion8(const fs::path& out) {
  std::ostringstream log;
  int files = 0, diffs = 0;
  const fs::path t1 = out / "det_toy_a", t2 = out / "det_toy_b";
  fs::remove_all(t1);
  fs::remove_all(t2);
  for (const auto& [dir, jobs] : {std::pair{t1, "1"}, std::pair{t2, "3"}}) {
    const std::vector<cli::Override> ov = {
        {"table", "true"}, {"seeds", "0-29"}, {"jobs", jobs}, {"out", dir.string()}};
    cli::RunExperiment(cli::ResolveConfig(cli::Mode::kToy, "", ov), log);
  }
  diffs += CompareTrees(t1, t2, &files);

  const fs::path r1 = out / "det_rl_a", r2 = out / "det_rl_b";
  fs::remove_all(r1);
  fs::remove_all(r2);
  for (const auto& [dir, jobs] : {std::pair{r1, "1"}, std::pair{r2, "2"}}) {
    const std::vector<cli::Override> ov = {{"rl.env", "sparse-cartpole-swingup"},
                                           {"rl.hidden1", "16"},
                                           {"rl.hidden2", "16"},
                                           {"rl.epochs", "3"},
                                           {"seeds", "0-2"},
                                           {"checkpoint", "true"},
                                           {"jobs", jobs},
                                           {"out", dir.string()}};
    cli::RunExperiment(cli::ResolveConfig(cli::Mode::kBaselineCompare, "", ov), log);
  }
  diffs += CompareTrees(r1, r2, &files);
  Outcome o;
  o.pass = diffs == 0 && files > 0;
  o.detail = Fmt("%d of %d files differ between re-runs (toy table and RL compare, "
                 "serial vs parallel)",
                 diffs, files);
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance checks"};
  std::vector<int> criteria = {1, 2, 3, 4, 5, 6, 7, 8};
  std::string out = (fs::current_path() / "acceptance_runs").string();
  app.add_option("--criteria", criteria, "criteria to run")->delimiter(',');
  app.add_option("--out", out, "artifact directory");
  CLI11_PARSE(app, argc, argv);

  const std::set<int> want(criteria.begin(), criteria.end());
  const fs::path root(out);
  fs::create_directories(root);
  bool all = true;
  auto report = [&](int n, const Outcome& o) {
    std::printf("criterion %d %s  %s\n", n, o.pass ? "PASS" : "FAIL", o.detail.c_str());
    std::fflush(stdout);
    all &= o.pass;
  };
  auto guarded = [&](int n, const std::function<Outcome()>& f) {
    if (!want.count(n)) return;
    try {
      report(n, f());
    } catch (const std::exception& e) {
      report(n, Outcome{false, std::string("error: ") + e.what()});
    }
  };
  guarded(1, [&] { return Criterion1(root); });
  guarded(2, [] { return Criterion2(); });
  guarded(3, [] { return Criterion3(); });
  guarded(4, [] { return Criterion4(); });
  guarded(5, [] { return Criterion5(); });
  if (want.count(6) || want.count(7)) {
    try {
      const Criterion67 r = Criteria6And7(root);
      if (want.count(6)) report(6, r.six);
      if (want.count(7)) report(7, r.seven);
    } catch (const std::exception& e) {
      for (int n : {6, 7}) {
        if (want.count(n)) report(n, Outcome{false, std::string("error: ") + e.what()});
      }
    }
  }
  guarded(8, [&] { return Criterion8(root); });
  return all ? 0 : 1;
}
