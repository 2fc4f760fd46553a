// Copyright 2026 The Varco Authors. All Rights Reserved.
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
// =============================================================================

// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// nonzero when any fails. Arguments select a subset of criteria by number.

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "support.hpp"
#include "varco/codec.hpp"
#include "varco/config.hpp"
#include "varco/experiment.hpp"
#include "varco/model.hpp"
#include "varco/partition.hpp"
#include "varco/report.hpp"
#include "varco/runtime.hpp"
#include "varco/scheduler.hpp"

namespace varco {
namespace {

struct Verdict {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

double max_abs_diff(const ModelParams& a, const ModelParams& b) {
  double worst = 0.0;
  for (std::size_t l = 0; l < a.layers.size(); ++l) {
    for (std::size_t k = 0; k < a.layers[l].taps.size(); ++k) {
      worst = std::max(worst, (a.layers[l].taps[k] - b.layers[l].taps[k]).cwiseAbs().maxCoeff());
    }
  }
  return worst;
}

double norm(const ModelParams& p) {
  double sq = 0.0;
  for (const auto& l : p.layers) {
    for (const auto& h : l.taps) sq += h.squaredNorm();
  }
  return std::sqrt(sq);
}

std::uint64_t boundary_size(const Partition& p) {
  std::uint64_t total = 0;
  for (std::uint32_t q = 0; q < p.num_workers; ++q) {
    for (std::uint32_t r = 0; r < p.num_workers; ++r) {
      if (q != r) total += p.halo_out[q][r].size();
    }
  }
  return total;
}

std::uint64_t closed_form_floats(const Partition& p, std::span<const std::size_t> dims,
                                 std::size_t taps, double ratio) {
  const std::uint64_t boundary = boundary_size(p);
  std::uint64_t total = 0;
  for (std::size_t l = 0; l + 1 < dims.size(); ++l) {
    total += (taps - 1) * boundary * kept_count(static_cast<std::uint32_t>(dims[l]), ratio);
  }
  return total;
}

Verdict oracle_equivalence() {
  const auto start = std::chrono::steady_clock::now();
  TrainConfig cfg;
  cfg.sbm.n = 300;
  cfg.sbm.seed = 11;
  cfg.init_seed = 12;
  cfg.epochs = 20;
  const Graph g = build_graph(cfg);
  const Gso gso = build_gso(g, cfg.gso);
  const auto dims = model_dims(cfg, g.feature_dim(), static_cast<std::size_t>(g.num_classes()));
  const ModelParams init = init_params(dims, cfg.taps, cfg.init_seed);
  const auto train = g.nodes_in(Split::train);

  std::vector<double> central_loss;
  ModelParams central = init;
  for (std::uint32_t t = 0; t < cfg.epochs; ++t) {
    const auto fwd = model_forward(g.features(), gso, central, cfg.activation);
    const auto loss = cross_entropy_loss(fwd.logits, g.labels(), train);
    central_loss.push_back(loss.loss);
    central = sgd_step(central, model_backward(fwd.tape, loss.grad, gso, central).weights, cfg.lr);
  }

  double worst_loss = 0.0;
  double worst_param = 0.0;
  for (std::uint32_t q : {2u, 4u}) {
    const Partition p = partition_random(g, q, 13 + q);
    Cluster cluster(g, gso, p, init, cfg.codec_key, runtime_options(cfg));
    const SchedulerSpec full = SchedulerSpec::fixed(1.0, cfg.epochs);
    for (std::uint32_t t = 0; t < cfg.epochs; ++t) {
      const auto m = cluster.varco_epoch(full, t, cfg.lr);
      worst_loss = std::max(worst_loss, std::abs(m.train_loss - central_loss[t]) / central_loss[t]);
    }
    worst_param = std::max(worst_param, max_abs_diff(cluster.params(), central));
  }
  const double secs = seconds_since(start);
  return {worst_loss < 1e-6 && worst_param < 1e-6 && secs < 10.0,
          fmt("max rel loss diff %.2e, max param diff %.2e, %.1fs < 10s", worst_loss, worst_param,
              secs)};
}

Verdict gradient_correctness() {
  const auto start = std::chrono::steady_clock::now();
  double worst = 0.0;
  std::size_t checked = 0;
  const std::vector<std::pair<Activation, GsoKind>> kinds{
      {Activation::relu, GsoKind::mean_neighbor},
      {Activation::tanh, GsoKind::symmetric_normalized},
      {Activation::identity, GsoKind::raw_adjacency}};
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    for (const auto& [act, kind] : kinds) {
      auto edges = testing::random_edges(6, 0.5, seed);
      edges.emplace_back(0, 5);
      const Graph g = testing::make_graph(6, edges, 3, seed + 10, 3);
      const Gso s = build_gso(g, kind);
      const std::vector<std::size_t> dims{3, 4, 4, 3};
      const ModelParams p = init_params(dims, 3, seed + 20);
      const std::vector<NodeId> nodes{0, 1, 2, 3, 4, 5};
      auto loss_of = [&](const ModelParams& q) {
        return cross_entropy_loss(model_forward(g.features(), s, q, act).logits, g.labels(), nodes)
            .loss;
      };
      const auto fwd = model_forward(g.features(), s, p, act);
      const auto loss = cross_entropy_loss(fwd.logits, g.labels(), nodes);
      const ModelParams grads = model_backward(fwd.tape, loss.grad, s, p).weights;
      const double h = 1e-5;
      for (std::size_t l = 0; l < p.layers.size(); ++l) {
        for (std::size_t k = 0; k < p.layers[l].taps.size(); ++k) {
          for (Eigen::Index i = 0; i < p.layers[l].taps[k].rows(); ++i) {
            for (Eigen::Index j = 0; j < p.layers[l].taps[k].cols(); ++j) {
              ModelParams up = p;
              ModelParams dn = p;
              up.layers[l].taps[k](i, j) += h;
              dn.layers[l].taps[k](i, j) -= h;
              const double fd = (loss_of(up) - loss_of(dn)) / (2 * h);
              const double a = grads.layers[l].taps[k](i, j);
              worst = std::max(worst,
                               std::abs(a - fd) / std::max({std::abs(a), std::abs(fd), 1e-6}));
              ++checked;
            }
          }
        }
      }
    }
  }
  const double secs = seconds_since(start);
  return {worst < 1e-4 && secs < 5.0,
          fmt("%zu entries, max rel err %.2e, %.2fs < 5s", checked, worst, secs)};
}

Verdict codec_error_law() {
  const auto start = std::chrono::steady_clock::now();
  const std::uint32_t n = 256;
  const int trials = 10000;
  std::vector<double> x(n);
  Rng rng(5);
  for (auto& v : x) v = rng.normal();
  double sq = 0.0;
  for (double v : x) sq += v * v;
  for (auto& v : x) v /= std::sqrt(sq);

  bool ok = true;
  std::string detail;
  const KeyContext ctx{.epoch = 3, .layer = 1, .hop = 0, .source = 0, .destination = 1, .node = 9};
  for (double r : {2.0, 4.0, 8.0, 128.0}) {
    double total = 0.0;
    for (int i = 0; i < trials; ++i) {
      const Codec codec(MasterKey::from_seed(static_cast<std::uint64_t>(i)));
      const auto y = codec.decompress(codec.compress(x, r, ctx), ctx);
      for (std::uint32_t j = 0; j < n; ++j) total += (y[j] - x[j]) * (y[j] - x[j]);
    }
    const double mean = total / trials;
    const double expect = 1.0 - static_cast<double>(kept_count(n, r)) / n;
    const double rel = std::abs(mean - expect) / expect;
    ok = ok && rel <= 0.02;
    detail += fmt("r=%g %.4f/%.4f ", r, mean, expect);
  }
  bool lossless = true;
  for (int i = 0; i < 100; ++i) {
    const Codec codec(MasterKey::from_seed(static_cast<std::uint64_t>(i)));
    lossless = lossless && codec.decompress(codec.compress(x, 1.0, ctx), ctx) == x;
  }
  const double secs = seconds_since(start);
  detail += fmt("r=1 lossless=%s, %.2fs < 5s", lossless ? "yes" : "no", secs);
  return {ok && lossless && secs < 5.0, detail};
}

Verdict scheduler_contract() {
  const auto start = std::chrono::steady_clock::now();
  const std::uint32_t horizon = 300;
  bool ok = true;
  std::string detail = "floor at";
  for (int a = 2; a <= 7; ++a) {
    SchedulerSpec spec;
    spec.c_max = 128.0;
    spec.c_min = 1.0;
    spec.slope = a;
    spec.horizon = horizon;
    const auto floor_at = static_cast<std::uint32_t>(std::ceil(double(horizon) / a));
    for (std::uint32_t t = 0; t <= horizon; ++t) {
      const double r = ratio_at(spec, t);
      if (t > 0 && r > ratio_at(spec, t - 1)) ok = false;
      if ((t >= floor_at) != (r == 1.0)) ok = false;
    }
    ok = ok && validate_monotone(spec).ok;
    detail += fmt(" a=%d:%u", a, floor_at);
  }
  for (SchedulerKind kind : {SchedulerKind::fixed, SchedulerKind::step, SchedulerKind::linear,
                             SchedulerKind::exponential, SchedulerKind::clamped_linear}) {
    SchedulerSpec spec;
    spec.kind = kind;
    spec.step = 0.01;
    spec.horizon = horizon;
    ok = ok && validate_monotone(spec).ok;
  }
  const double secs = seconds_since(start);
  detail += fmt(", all kinds monotone, %.3fs < 1s", secs);
  return {ok && secs < 1.0, detail};
}

// Runs shared by the arm-ordering and efficiency criteria.
struct ArmRuns {
  std::vector<std::string> arms{"nocomm", "fixed4", "fixed2", "varco", "full"};
  // runs[seed][arm]
  std::vector<std::vector<std::vector<MetricsRecord>>> runs;
  double seconds = 0.0;
};

TrainConfig arm_config(const std::string& arm, std::uint64_t seed) {
  TrainConfig cfg;
  cfg.sbm.seed = seed;
  cfg.partition_seed = seed;
  cfg.init_seed = seed;
  cfg.codec_key = MasterKey::from_seed(seed);
  if (arm == "fixed4" || arm == "fixed2") {
    cfg.arm = Arm::fixed;
    cfg.fixed_ratio = arm == "fixed4" ? 4.0 : 2.0;
  } else {
    cfg.arm = parse_arm(arm);
  }
  return cfg;
}

const ArmRuns& arm_runs() {
  static const ArmRuns cache = [] {
    ArmRuns r;
    const auto start = std::chrono::steady_clock::now();
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      r.runs.emplace_back();
      for (const auto& arm : r.arms) {
        r.runs.back().push_back(run_training(arm_config(arm, seed)).metrics);
        std::fprintf(stderr, "  seed %llu %-6s test_acc=%.3f cum_floats=%llu\n",
                     static_cast<unsigned long long>(seed), arm.c_str(),
                     r.runs.back().back().back().test_acc,
                     static_cast<unsigned long long>(r.runs.back().back().back().cum_floats));
      }
    }
    r.seconds = seconds_since(start);
    return r;
  }();
  return cache;
}

std::size_t arm_index(const ArmRuns& r, const std::string& arm) {
  return static_cast<std::size_t>(std::find(r.arms.begin(), r.arms.end(), arm) - r.arms.begin());
}

Verdict arm_ordering() {
  const ArmRuns& r = arm_runs();
  const std::size_t seeds = r.runs.size();
  std::vector<double> mean(r.arms.size(), 0.0);
  for (const auto& seed : r.runs) {
    for (std::size_t a = 0; a < r.arms.size(); ++a) mean[a] += seed[a].back().test_acc / seeds;
  }
  const std::size_t nocomm = arm_index(r, "nocomm"), fixed4 = arm_index(r, "fixed4"),
                    varco = arm_index(r, "varco"), full = arm_index(r, "full");
  int w1 = 0, w2 = 0, w3 = 0;
  for (const auto& seed : r.runs) {
    const auto acc = [&](std::size_t a) { return seed[a].back().test_acc; };
    w1 += acc(nocomm) <= acc(fixed4);
    w2 += acc(fixed4) <= acc(varco);
    w3 += acc(varco) >= acc(full) - 0.02;
  }
  const bool means = mean[nocomm] <= mean[fixed4] && mean[fixed4] <= mean[varco] &&
                     mean[varco] >= mean[full] - 0.02;
  const bool signs = w1 >= 4 && w2 >= 4 && w3 >= 4;
  return {means && signs && r.seconds < 900.0,
          fmt("mean acc nocomm %.3f fixed4 %.3f varco %.3f full %.3f; seeds nocomm<=fixed4 %d/5, "
              "fixed4<=varco %d/5, varco>=full-0.02 %d/5; %.0fs < 900s",
              mean[nocomm], mean[fixed4], mean[varco], mean[full], w1, w2, w3, r.seconds)};
}

Verdict efficiency_dominance() {
  const ArmRuns& r = arm_runs();
  std::size_t vs_fixed2 = 0, vs_full = 0, total = 0;
  for (const auto& seed : r.runs) {
    const std::vector<RunCurve> runs{{"varco", seed[arm_index(r, "varco")]},
                                     {"fixed2", seed[arm_index(r, "fixed2")]},
                                     {"full", seed[arm_index(r, "full")]}};
    const BudgetCurve curve = budget_curve(runs, 50);
    const Dominance a = dominance(curve, "varco", "fixed2");
    const Dominance b = dominance(curve, "varco", "full");
    vs_fixed2 += a.wins;
    vs_full += b.wins;
    total += a.total;
    std::fprintf(stderr, "  seed %zu varco>=fixed2 %zu/%zu varco>=full %zu/%zu\n", total / a.total - 1,
                 a.wins, a.total, b.wins, b.total);
  }
  const double fa = static_cast<double>(vs_fixed2) / total;
  const double fb = static_cast<double>(vs_full) / total;
  return {fa >= 0.9 && fb >= 0.9,
          fmt("varco>=fixed2 at %zu/%zu (%.3f), varco>=full at %zu/%zu (%.3f), need >= 0.9",
              vs_fixed2, total, fa, vs_full, total, fb)};
}

Verdict ledger_exactness() {
  TrainConfig cfg;
  cfg.sbm.seed = 21;
  cfg.partition_seed = 22;
  cfg.epochs = 60;
  cfg.taps = 3;
  const Graph g = build_graph(cfg);
  const Partition p = build_partition(g, cfg);
  const auto dims = model_dims(cfg, g.feature_dim(), static_cast<std::size_t>(g.num_classes()));
  const SchedulerSpec sched = effective_schedule(cfg);
  const auto metrics = run_training(cfg, g, p).metrics;
  std::size_t exact = 0;
  std::uint64_t cum = 0;
  for (const auto& m : metrics) {
    const std::uint64_t expect = closed_form_floats(p, dims, cfg.taps, ratio_at(sched, m.epoch));
    cum += 2 * expect;
    exact += m.ratio == ratio_at(sched, m.epoch) && m.fwd_floats == expect &&
             m.bwd_floats == expect && m.cum_floats == cum;
  }
  return {exact == metrics.size(),
          fmt("%zu/%zu epochs match the closed form exactly (boundary %llu, total %llu floats)",
              exact, metrics.size(), static_cast<unsigned long long>(boundary_size(p)),
              static_cast<unsigned long long>(cum))};
}

Verdict cross_edge_statistic() {
  const std::size_t n = 2000;
  const Graph g = testing::make_graph(n, testing::random_edges(n, 0.01, 31), 2, 32);
  bool ok = true;
  std::string detail;
  for (std::uint32_t q : {4u, 16u}) {
    const auto stats = cross_edge_stats(partition_random(g, q, 33));
    const double expect = (q - 1.0) / q;
    const double rel = std::abs(stats.cross_fraction - expect) / expect;
    ok = ok && rel <= 0.02;
    detail += fmt("Q=%u cross %.4f vs %.4f (rel %.4f) ", q, stats.cross_fraction, expect, rel);
  }
  return {ok, detail + "within 2%"};
}

struct ToyTrace {
  double plateau = 0.0;  // mean gradient norm over the last 20% of epochs
  double best = 0.0;     // min-so-far gradient norm at the end
};

ToyTrace toy_trace(std::uint64_t seed, const SchedulerSpec& sched) {
  const Graph g = synth_sbm({.n = 200, .classes = 2, .p_in = 0.1, .p_out = 0.02, .feat_dim = 8,
                             .noise = 1.0, .seed = seed});
  const Gso gso = build_gso(g, GsoKind::mean_neighbor);
  const Partition p = partition_random(g, 4, seed + 1);
  const std::vector<std::size_t> dims{8, 2};
  const ModelParams planted = init_params(dims, 2, seed + 2);
  Matrix targets = conv_forward(g.features(), gso, planted.layers[0].taps) +
                   testing::random_matrix(200, 2, seed + 3, 0.1);
  RuntimeOptions opts;
  opts.activation = Activation::identity;
  opts.loss = LossKind::mse;
  opts.targets = targets;
  Cluster cluster(g, gso, p, init_params(dims, 2, seed + 4), MasterKey::from_seed(seed), opts);
  const auto train = g.nodes_in(Split::train);

  std::vector<double> norms;
  for (std::uint32_t t = 0; t < sched.horizon; ++t) {
    cluster.varco_epoch(sched, t, 0.5);
    const auto fwd = model_forward(g.features(), gso, cluster.params(), Activation::identity);
    const auto loss = mse_loss(fwd.logits, targets, train);
    norms.push_back(norm(model_backward(fwd.tape, loss.grad, gso, cluster.params()).weights));
  }
  ToyTrace trace;
  const std::size_t tail = norms.size() / 5;
  for (std::size_t i = norms.size() - tail; i < norms.size(); ++i) trace.plateau += norms[i] / tail;
  trace.best = *std::min_element(norms.begin(), norms.end());
  return trace;
}

Verdict compression_plateau() {
  const auto start = std::chrono::steady_clock::now();
  const std::uint32_t horizon = 300;
  SchedulerSpec varco;
  varco.horizon = horizon;
  int ordered = 0, under1 = 0, under4 = 0, under8 = 0;
  std::string detail;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const ToyTrace r1 = toy_trace(seed, SchedulerSpec::fixed(1.0, horizon));
    const ToyTrace r4 = toy_trace(seed, SchedulerSpec::fixed(4.0, horizon));
    const ToyTrace r8 = toy_trace(seed, SchedulerSpec::fixed(8.0, horizon));
    const ToyTrace v = toy_trace(seed, varco);
    ordered += r1.plateau <= r4.plateau && r4.plateau <= r8.plateau;
    under1 += v.best < r1.plateau;
    under4 += v.best < r4.plateau;
    under8 += v.best < r8.plateau;
    std::fprintf(stderr, "  seed %llu plateau r1 %.3e r4 %.3e r8 %.3e varco min %.3e\n",
                 static_cast<unsigned long long>(seed), r1.plateau, r4.plateau, r8.plateau,
                 v.best);
  }
  const double secs = seconds_since(start);
  return {ordered >= 4 && under1 >= 4 && under4 >= 4 && under8 >= 4 && secs < 60.0,
          fmt("plateau ordered r1<=r4<=r8 %d/5, varco min below r1 %d/5, r4 %d/5, r8 %d/5; "
              "%.1fs < 60s",
              ordered, under1, under4, under8, secs)};
}

int run_command(const std::string& cmd) {
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Verdict determinism() {
  const auto dir = testing::temp_dir("acceptance_determinism");
  bool ok = true;
  std::string detail;
  for (const char* mode : {"sequential", "threads"}) {
    std::vector<std::string> csv;
    for (int i = 0; i < 2; ++i) {
      const auto out = dir / fmt("%s_%d", mode, i);
      const std::string cmd = std::string(VARCO_CLI_PATH) +
                              " train -q -s train.epochs=40 -s runtime.mode=" + mode + " -o " +
                              out.string() + " > /dev/null";
      if (run_command(cmd) != 0) ok = false;
      csv.push_back(slurp(out / "metrics.csv"));
    }
    const bool same = !csv[0].empty() && csv[0] == csv[1];
    ok = ok && same;
    detail += fmt("%s %s (%zu bytes) ", mode, same ? "identical" : "DIFFER", csv[0].size());
  }
  return {ok, detail};
}

struct Criterion {
  int id;
  const char* name;
  std::function<Verdict()> check;
};

}  // namespace
}  // namespace varco

int main(int argc, char** argv) {
  using namespace varco;
  const std::vector<Criterion> criteria{
      {1, "oracle equivalence at r=1", oracle_equivalence},
      {2, "gradient correctness", gradient_correctness},
      {3, "codec error law", codec_error_law},
      {4, "scheduler contract", scheduler_contract},
      {5, "ordering of arms", arm_ordering},
      {6, "efficiency dominance", efficiency_dominance},
      {7, "ledger exactness", ledger_exactness},
      {8, "cross-edge statistic", cross_edge_statistic},
      {9, "fixed-compression plateau vs varco floor", compression_plateau},
      {10, "determinism", determinism},
  };
  std::set<int> wanted;
  for (int i = 1; i < argc; ++i) wanted.insert(std::atoi(argv[i]));

  int failed = 0;
  for (const auto& c : criteria) {
    if (!wanted.empty() && !wanted.count(c.id)) continue;
    Verdict v;
    try {
      v = c.check();
    } catch (const std::exception& e) {
      v = {false, std::string("error: ") + e.what()};
    }
    failed += !v.pass;
    std::printf("criterion %2d %-42s %s  %s\n", c.id, c.name, v.pass ? "PASS" : "FAIL",
                v.detail.c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
