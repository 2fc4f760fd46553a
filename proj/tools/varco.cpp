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

// varco command-line driver: synth, partition, train, report.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "varco/config.hpp"
#include "varco/error.hpp"
#include "varco/experiment.hpp"
#include "varco/graph_io.hpp"
#include "varco/metrics.hpp"
#include "varco/model.hpp"
#include "varco/partition.hpp"
#include "varco/report.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitConfig = 2;
constexpr int kExitNumeric = 3;

struct ConfigArgs {
  std::string path;
  std::vector<std::string> overrides;
};

void add_config_options(CLI::App& cmd, ConfigArgs& args) {
  cmd.add_option("-c,--config", args.path, "key = value configuration file");
  cmd.add_option("-s,--set", args.overrides, "override as key=value (repeatable)");
}

varco::TrainConfig resolve_config(const ConfigArgs& args) {
  varco::TrainConfig cfg = args.path.empty() ? varco::TrainConfig{} : varco::load_config(args.path);
  for (const auto& kv : args.overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw varco::InvalidArgument("--set expects key=value, got " + kv);
    varco::apply_setting(cfg, kv.substr(0, eq), kv.substr(eq + 1));
  }
  return cfg;
}

int cmd_synth(const varco::SbmParams& params, const std::string& out, bool binary) {
  const varco::Graph g = varco::synth_sbm(params);
  const std::filesystem::path dir(out);
  std::filesystem::create_directories(dir);
  varco::write_edges(g, dir / "edges.txt");
  if (binary) {
    varco::write_features_bin(g.features(), dir / "features.bin");
  } else {
    varco::write_features_csv(g.features(), dir / "features.csv");
  }
  varco::write_labels(g, dir / "labels.csv");
  std::printf("nodes=%zu edges=%zu features=%zu classes=%d dir=%s\n", g.num_nodes(), g.num_edges(),
              g.feature_dim(), g.num_classes(), dir.string().c_str());
  return kExitOk;
}

int cmd_partition(const ConfigArgs& args, const std::string& out) {
  varco::TrainConfig cfg = resolve_config(args);
  if (cfg.workers < 1) throw varco::InvalidArgument("partition.workers must be >= 1");
  const varco::Graph g = varco::build_graph(cfg);
  const varco::Partition p = varco::build_partition(g, cfg);
  if (!out.empty()) varco::write_partition(p, out);
  const auto s = varco::cross_edge_stats(p);
  std::printf("workers=%u nodes=%zu edges=%zu self=%zu cross=%zu self_pct=%.2f cross_pct=%.2f\n",
              p.num_workers, g.num_nodes(), g.num_edges(), s.self_count, s.cross_count,
              100.0 * s.self_fraction, 100.0 * s.cross_fraction);
  return kExitOk;
}

int cmd_train(const ConfigArgs& args, const std::string& out, bool quiet) {
  varco::TrainConfig cfg = resolve_config(args);
  if (!out.empty()) cfg.output_dir = out;
  varco::validate(cfg);
  auto progress = [quiet](const varco::MetricsRecord& m) {
    if (quiet) return;
    std::fprintf(stderr, "epoch %u ratio %.4g loss %.6f val %.4f test %.4f floats %llu\n", m.epoch,
                 m.ratio, m.train_loss, m.val_acc, m.test_acc,
                 static_cast<unsigned long long>(m.cum_floats));
  };
  const varco::TrainResult result = varco::run_training(cfg, progress);
  std::filesystem::create_directories(cfg.output_dir);
  varco::write_metrics_csv(result.metrics, cfg.output_dir / "metrics.csv");
  varco::write_checkpoint(result.params, cfg.output_dir / "params.bin");
  const auto& last = result.metrics.back();
  std::printf("arm=%s epochs=%u test_acc=%.4f cum_floats=%llu out=%s\n",
              std::string(varco::to_string(cfg.arm)).c_str(), cfg.epochs, last.test_acc,
              static_cast<unsigned long long>(last.cum_floats), cfg.output_dir.string().c_str());
  return kExitOk;
}

int cmd_report(const std::vector<std::string>& inputs, std::size_t points, const std::string& lead,
               const std::string& out) {
  std::vector<varco::RunCurve> runs;
  for (const auto& spec : inputs) runs.push_back(varco::load_run(spec));
  if (out.empty()) {
    varco::write_report(runs, points, lead, std::cout);
    return kExitOk;
  }
  std::ofstream file(out);
  if (!file) throw varco::IoError("cannot write " + out);
  varco::write_report(runs, points, lead, file);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Distributed GNN training with variable activation compression"};
  app.require_subcommand(1);

  varco::SbmParams sbm;
  std::string synth_out = "data";
  bool synth_binary = false;
  auto* synth = app.add_subcommand("synth", "generate a stochastic block model graph");
  synth->add_option("--n", sbm.n, "number of nodes");
  synth->add_option("--classes", sbm.classes, "number of blocks");
  synth->add_option("--p-in", sbm.p_in, "edge probability inside a block");
  synth->add_option("--p-out", sbm.p_out, "edge probability across blocks");
  synth->add_option("--feat-dim", sbm.feat_dim, "feature width");
  synth->add_option("--noise", sbm.noise, "feature noise scale");
  synth->add_option("--seed", sbm.seed, "random seed");
  synth->add_option("-o,--out", synth_out, "output directory");
  synth->add_flag("--binary", synth_binary, "write features.bin instead of features.csv");

  ConfigArgs part_args;
  std::string part_out;
  auto* part = app.add_subcommand("partition", "partition a graph and print cross-edge statistics");
  add_config_options(*part, part_args);
  part->add_option("-o,--out", part_out, "partition file to write");

  ConfigArgs train_args;
  std::string train_out;
  bool quiet = false;
  auto* train = app.add_subcommand("train", "train one arm and write metrics.csv and params.bin");
  add_config_options(*train, train_args);
  train->add_option("-o,--out", train_out, "output directory (overrides output.dir)");
  train->add_flag("-q,--quiet", quiet, "no per-epoch progress on stderr");

  std::vector<std::string> report_inputs;
  std::size_t points = 50;
  std::string lead = "varco";
  std::string report_out;
  auto* report = app.add_subcommand("report", "merge metrics files into tables and curves");
  report->add_option("inputs", report_inputs, "metrics CSVs, optionally as arm=path")->required();
  report->add_option("--points", points, "budget grid size");
  report->add_option("--lead", lead, "arm checked for dominance over the others");
  report->add_option("-o,--out", report_out, "write the report here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*synth) return cmd_synth(sbm, synth_out, synth_binary);
    if (*part) return cmd_partition(part_args, part_out);
    if (*train) return cmd_train(train_args, train_out, quiet);
    if (*report) return cmd_report(report_inputs, points, lead, report_out);
  } catch (const varco::NumericFailure& e) {
    std::cerr << "numeric failure: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const varco::InvalidArgument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const varco::ParseError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitFailure;
}
