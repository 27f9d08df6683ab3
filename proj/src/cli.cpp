// Copyright 2026 The evofuse Authors.
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

#include "evofuse/cli.hpp"

#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "evofuse/baselines.hpp"
#include "evofuse/csv.hpp"
#include "evofuse/error.hpp"
#include "evofuse/metrics.hpp"
#include "evofuse/nsga2.hpp"
#include "evofuse/report.hpp"
#include "evofuse/score_data.hpp"
#include "evofuse/synthgen.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace evofuse {

namespace {

constexpr std::int64_t kDefaultPoolParams = 18'560'000'000;

struct Inputs {
  std::string manifest;
  std::string labels;
  std::string eval_labels;
  bool znorm = false;
  std::size_t workers = 0;
};

struct CostOptions {
  CostModel cost;
};

void add_inputs(CLI::App* cmd, Inputs& in, bool required) {
  auto* m = cmd->add_option("--manifest", in.manifest, "Detector manifest CSV (name,param_count,score_file)");
  auto* l = cmd->add_option("--labels", in.labels, "Trial label file (dev split when --eval-labels is given)");
  if (required) {
    m->required();
    l->required();
  }
  cmd->add_option("--eval-labels", in.eval_labels, "Evaluation-split label file");
  cmd->add_flag("--znorm", in.znorm, "Per-detector z-normalisation of scores (off by default)");
  cmd->add_option("--workers", in.workers, "Worker threads (0 = all cores)");
}

void add_cost(CLI::App* cmd, CostOptions& c) {
  cmd->add_option("--c-miss", c.cost.c_miss, "minDCF miss cost")->capture_default_str();
  cmd->add_option("--c-fa", c.cost.c_fa, "minDCF false-alarm cost")->capture_default_str();
  cmd->add_option("--p-target", c.cost.p_target, "minDCF bonafide prior")->capture_default_str();
}

void require_file(const std::string& path, const char* what) {
  if (path.empty()) throw ConfigError(std::string("missing --") + what);
  if (!fs::exists(path)) throw DataError(std::string(what) + " file not found: " + path);
}

Assembled load_matrix(const Inputs& in, const std::string& labels_path) {
  auto const pool = load_manifest(in.manifest);
  auto const labels = load_labels(labels_path);
  return assemble_matrix(pool, labels, {in.znorm, in.workers});
}

std::string timestamp_utc() {
  auto const now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y%m%dT%H%M%SZ", &tm);
  return buf;
}

void write_text(const std::string& path, std::string_view text, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
  } else {
    io::write_file_atomic(path, text);
  }
}

/// Expands `--config FILE` into flags inserted right after the subcommand.
std::vector<std::string> expand_config(std::vector<std::string> args, std::string& config_text) {
  std::optional<std::string> path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      path = args[i + 1];
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(i), args.begin() + static_cast<std::ptrdiff_t>(i + 2));
      break;
    }
    if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(i));
      break;
    }
  }
  if (!path) return args;
  std::ifstream in(*path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config file: " + *path);
  std::ostringstream buf;
  buf << in.rdbuf();
  config_text = buf.str();

  std::vector<std::string> injected;
  for (const auto& line : io::read_lines(*path)) {
    auto const text = io::trim(line.text);
    if (text.empty() || text[0] == '#' || text[0] == ';' || text[0] == '[') continue;
    auto const eq = text.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(*path + ":" + std::to_string(line.number) + ": expected 'key = value'");
    }
    auto key = io::trim(text.substr(0, eq));
    auto value = io::trim(text.substr(eq + 1));
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"') value = value.substr(1, value.size() - 2);
    for (auto& ch : key) {
      if (ch == '_') ch = '-';
    }
    if (value == "true") {
      injected.push_back("--" + key);
    } else if (value != "false") {
      injected.push_back("--" + key);
      injected.push_back(value);
    }
  }
  auto const at = args.empty() ? args.end() : args.begin() + 1;
  args.insert(at, injected.begin(), injected.end());
  return args;
}

// --- validate ----------------------------------------------------------------

int cmd_validate(const Inputs& in, const CostOptions& c, std::ostream& out) {
  require_file(in.manifest, "manifest");
  require_file(in.labels, "labels");
  c.cost.validate();
  auto const data = load_matrix(in, in.labels);
  auto const& m = data.matrix;
  out << "# detectors=" << m.detectors() << " trials=" << m.trials() << " bonafide=" << m.labels().bonafide_count()
      << " spoof=" << m.labels().spoof_count() << " total_params=" << m.pool().total_params() << " ("
      << io::format_params(m.pool().total_params()) << ")\n";
  out << "id,name,params,min,max,mean,unused_lines,eer,min_dcf\n";
  for (std::size_t i = 0; i < m.detectors(); ++i) {
    Eigen::RowVectorXd const row = m.row(i);
    auto const s = summarize(std::span<const double>(row.data(), m.trials()), m.labels().labels(), c.cost);
    auto const& st = data.stats[i];
    out << i << ',' << io::csv_quote(m.pool()[i].name) << ',' << m.pool()[i].param_count << ','
        << io::format_sig(st.min, 6) << ',' << io::format_sig(st.max, 6) << ',' << io::format_sig(st.mean, 6) << ','
        << st.unused_lines << ',' << io::format_sig(s.eer, 6) << ',' << io::format_sig(s.min_dcf, 6) << '\n';
  }
  if (!in.eval_labels.empty()) {
    require_file(in.eval_labels, "eval-labels");
    auto const eval = load_matrix(in, in.eval_labels);
    out << "# eval split: trials=" << eval.matrix.trials() << " bonafide=" << eval.matrix.labels().bonafide_count()
        << " spoof=" << eval.matrix.labels().spoof_count() << "\n";
  }
  return kOk;
}

// --- metrics -----------------------------------------------------------------

struct MetricsOptions {
  std::string scores;
  std::string labels;
  std::string det;
};

int cmd_metrics(const MetricsOptions& o, const CostOptions& c, std::ostream& out) {
  require_file(o.scores, "scores");
  require_file(o.labels, "labels");
  c.cost.validate();
  DetectorPool pool({{0, fs::path(o.scores).stem().string(), 1, o.scores}});
  auto const data = assemble_matrix(pool, load_labels(o.labels));
  Eigen::RowVectorXd const row = data.matrix.row(0);
  auto const curve = det_points(std::span<const double>(row.data(), data.matrix.trials()),
                                data.matrix.labels().labels());
  out << "metric,value\n";
  out << "eer," << io::format_exact(eer(curve)) << '\n';
  out << "min_dcf," << io::format_exact(min_dcf(curve, c.cost)) << '\n';
  if (!o.det.empty()) {
    std::ostringstream det;
    det << "threshold,far,frr\n";
    for (const auto& p : curve.points) {
      det << io::format_exact(p.threshold) << ',' << io::format_exact(p.far) << ',' << io::format_exact(p.frr) << '\n';
    }
    write_text(o.det, det.str(), out);
  }
  return kOk;
}

// --- synth -------------------------------------------------------------------

struct SynthOptions {
  std::string scenario = "S1";
  std::uint64_t seed = 1;
  std::size_t n_per_class = 1000;
  std::string out_dir;
  bool split = false;
};

int cmd_synth(const SynthOptions& o, std::ostream& out) {
  if (o.out_dir.empty()) throw ConfigError("missing --out");
  if (o.n_per_class == 0) throw ConfigError("--n-per-class must be positive");
  auto const scenario = named_scenario(o.scenario, o.seed, o.n_per_class);
  auto const data = generate(scenario);
  fs::path const dir = o.out_dir;
  fs::create_directories(dir / "scores");
  auto const& m = data.matrix;
  std::vector<DetectorMeta> metas;
  for (std::size_t i = 0; i < m.detectors(); ++i) {
    auto meta = m.pool()[i];
    meta.score_path = dir / "scores" / (meta.name + ".txt");
    write_scores(meta.score_path, m, i);
    metas.push_back(std::move(meta));
  }
  write_manifest(dir / "manifest.csv", DetectorPool(std::move(metas)));
  write_labels(dir / "labels.txt", m.labels());
  if (o.split) {
    std::vector<std::size_t> dev;
    std::vector<std::size_t> eval;
    for (std::size_t j = 0; j < m.trials(); ++j) (j % 2 == 0 ? dev : eval).push_back(j);
    write_labels(dir / "dev_labels.txt", m.labels().select(dev));
    write_labels(dir / "eval_labels.txt", m.labels().select(eval));
  }
  std::ostringstream gt;
  gt << "detector,d_prime,analytic_eer,param_count\n";
  for (const auto& row : data.truth) {
    gt << row.detector << ',' << io::format_exact(row.d_prime) << ',' << io::format_exact(row.analytic_eer) << ','
       << row.param_count << '\n';
  }
  io::write_file_atomic(dir / "ground_truth.csv", gt.str());
  out << "wrote scenario " << scenario.name << " (" << m.detectors() << " detectors, " << m.trials()
      << " trials) to " << dir.string() << "\n";
  out << "analytic EER of the all-detector average: " << io::format_sig(data.average_fusion_eer, 6) << "\n";
  return kOk;
}

// --- optimize ----------------------------------------------------------------

struct OptimizeOptions {
  std::string encoding = "binary";
  std::optional<double> crossover_rate;
  std::optional<double> mutation_rate;
  RunConfig run;
  std::size_t runs = 1;
  std::string out_dir = "out";
  std::string run_name;
};

json front_json(const ParetoFront& front) {
  json arr = json::array();
  for (const auto& m : front.members) {
    arr.push_back({{"eer", m.objectives.eer}, {"params", m.objectives.params}, {"chromosome", serialize(m.chromosome)}});
  }
  return arr;
}

int cmd_optimize(const Inputs& in, OptimizeOptions o, const std::string& config_text, std::ostream& out) {
  auto const encoding = parse_encoding(o.encoding);
  RunConfig config = o.run;
  auto const defaults = RunConfig::defaults(encoding);
  config.encoding = encoding;
  config.crossover_rate = o.crossover_rate.value_or(defaults.crossover_rate);
  config.mutation_rate = o.mutation_rate.value_or(defaults.mutation_rate);
  config.workers = in.workers;
  if (o.runs == 0) throw ConfigError("--runs must be positive");
  require_file(in.manifest, "manifest");
  require_file(in.labels, "labels");
  auto const pool = load_manifest(in.manifest);
  config.reference = resolve_reference(config.reference, pool);
  config.validate(pool.size());

  auto const data = load_matrix(in, in.labels);
  fs::path root = fs::path(o.out_dir) / "runs" / (o.run_name.empty() ? timestamp_utc() : o.run_name);
  if (o.run_name.empty()) {
    for (int k = 1; fs::exists(root); ++k) root = fs::path(o.out_dir) / "runs" / (timestamp_utc() + "_" + std::to_string(k));
  }
  bool const existed = fs::exists(root);
  fs::create_directories(root);
  try {
    json report;
    report["tool"] = "evofuse";
    report["version"] = EVOFUSE_VERSION;
    report["command"] = "optimize";
    report["config"] = {
        {"manifest", in.manifest},
        {"labels", in.labels},
        {"znorm", in.znorm},
        {"encoding", std::string(to_string(config.encoding))},
        {"population_size", config.population_size},
        {"max_generations", config.max_generations},
        {"crossover_rate", config.crossover_rate},
        {"mutation_rate", config.mutation_rate},
        {"eta_m", config.eta_m},
        {"cutoff", config.cutoff},
        {"epsilon", config.epsilon},
        {"patience", config.patience},
        {"seed", config.seed},
        {"reference", {{"eer", config.reference.eer}, {"params", config.reference.params}}},
        {"runs", o.runs},
    };
    report["config_file"] = config_text.empty() ? json(nullptr) : json(config_text);
    report["runs"] = json::array();

    std::vector<ParetoFront> fronts;
    for (std::size_t k = 0; k < o.runs; ++k) {
      RunConfig rc = config;
      rc.seed = o.runs == 1 ? config.seed : derive_seed(config.seed, k);
      auto const result = evolve(data.matrix, rc);
      auto const dir = root / ("run_" + std::to_string(k));
      io::write_file_atomic(dir / "front.csv", front_csv(result.front));
      io::write_file_atomic(dir / "hv.csv", hv_trace_csv(result.hv_trace));
      report["runs"].push_back({{"run", k},
                                {"seed", rc.seed},
                                {"generations_run", result.generations_run},
                                {"wall_seconds", result.wall_seconds},
                                {"final_hv", result.hv_trace.back()},
                                {"hv_trace", result.hv_trace},
                                {"front", front_json(result.front)}});
      out << "run " << k << ": seed=" << rc.seed << " generations=" << result.generations_run
          << " front=" << result.front.size() << " hv=" << io::format_sig(result.hv_trace.back(), 6) << "\n";
      fronts.push_back(result.front);
    }
    auto const super = super_pareto(fronts);
    double const super_hv = hypervolume_2d(super, config.reference);
    io::write_file_atomic(root / "super_front.csv", front_csv(super));
    report["super_front"] = front_json(super);
    report["super_hv"] = super_hv;
    io::write_file_atomic(root / "report.json", report.dump(2) + "\n");
    out << "super-Pareto front: " << super.size() << " points, hv=" << io::format_sig(super_hv, 6) << "\n";
    out << "output: " << root.string() << "\n";
  } catch (...) {
    std::error_code ec;
    if (!existed) fs::remove_all(root, ec);
    throw;
  }
  return kOk;
}

// --- baseline ----------------------------------------------------------------

struct BaselineOptions {
  std::string mode = "average";
  std::vector<std::string> subset;
  std::string prune;
  std::string name;
  std::string output;
  std::string sweep_output;
  LogRegHyper hyper;
};

std::vector<std::size_t> resolve_subset(const std::vector<std::string>& tokens, const DetectorPool& pool) {
  std::vector<std::size_t> ids;
  for (const auto& raw : tokens) {
    auto const t = io::trim(raw);
    if (t.empty()) continue;
    std::size_t id = 0;
    if (auto const found = pool.find(t)) {
      id = *found;
    } else if (auto const n = io::parse_int(t); n && *n >= 0 && static_cast<std::size_t>(*n) < pool.size()) {
      id = static_cast<std::size_t>(*n);
    } else {
      throw ConfigError("unknown detector '" + t + "' in --subset");
    }
    if (std::find(ids.begin(), ids.end(), id) == ids.end()) ids.push_back(id);
  }
  if (ids.empty()) throw ConfigError("--subset selects no detectors");
  return ids;
}

int cmd_baseline(const Inputs& in, const BaselineOptions& o, const CostOptions& c, std::ostream& out,
                 std::ostream& err) {
  require_file(in.manifest, "manifest");
  require_file(in.labels, "labels");
  c.cost.validate();
  if (o.mode != "average" && o.mode != "logreg") throw ConfigError("--mode must be average or logreg");
  std::optional<PruneMode> prune;
  if (!o.prune.empty()) {
    if (o.mode != "logreg") throw ConfigError("--prune requires --mode logreg");
    prune = parse_prune_mode(o.prune);
  }
  if (o.mode == "average" && o.subset.empty()) throw ConfigError("--mode average requires --subset");

  auto const dev = load_matrix(in, in.labels);
  std::optional<Assembled> eval_data;
  if (!in.eval_labels.empty()) {
    require_file(in.eval_labels, "eval-labels");
    eval_data = load_matrix(in, in.eval_labels);
  }
  const ScoreMatrix& eval = eval_data ? eval_data->matrix : dev.matrix;

  std::vector<SystemRow> rows;
  if (o.mode == "average") {
    auto const ids = resolve_subset(o.subset, eval.pool());
    auto const obj = average_fusion(ids, eval);
    BinaryChromosome chrom{Eigen::Array<bool, Eigen::Dynamic, 1>::Constant(static_cast<Eigen::Index>(eval.detectors()), false)};
    for (auto i : ids) chrom.bits(static_cast<Eigen::Index>(i)) = true;
    Eigen::RowVectorXd const fused = fuse_binary(chrom, eval);
    std::string name = o.name;
    if (name.empty()) {
      name = "average[";
      for (std::size_t k = 0; k < ids.size(); ++k) name += (k ? "+" : "") + eval.pool()[ids[k]].name;
      name += "]";
    }
    rows.push_back({name, obj.eer, min_dcf(fused, eval.labels(), c.cost), obj.params, false});
  } else {
    auto const model = logreg_fit(dev.matrix, o.hyper);
    if (!model.converged) {
      err << "warning: logistic regression stopped after " << model.iterations
                << " iterations, gradient norm " << model.final_grad_norm << "\n";
    }
    Eigen::RowVectorXd const fused = logreg_fuse(model, eval);
    auto const s = summarize(std::span<const double>(fused.data(), eval.trials()), eval.labels().labels(), c.cost);
    rows.push_back({o.name.empty() ? "logreg" : o.name, s.eer, s.min_dcf, eval.pool().total_params(), false});
  }
  write_text(o.output, systems_csv(rows), out);

  if (prune) {
    auto const sweep = prune_sweep(dev.matrix, eval, *prune, o.hyper);
    std::ostringstream csv;
    csv << "k,eer,params\n";
    for (const auto& r : sweep.records) csv << r.active.size() << ',' << io::format_exact(r.eer) << ',' << r.params << '\n';
    write_text(o.sweep_output, csv.str(), out);
  }
  return kOk;
}

// --- report / hv -------------------------------------------------------------

struct ReportOptions {
  std::vector<std::string> fronts;
  std::vector<std::string> baselines;
  std::string output;
  double ref_eer = 0.20;
  std::int64_t ref_params = 0;
  double cutoff = 0.001;
};

std::pair<std::string, std::string> split_named(const std::string& spec) {
  auto const eq = spec.find('=');
  if (eq != std::string::npos) return {spec.substr(0, eq), spec.substr(eq + 1)};
  return {fs::path(spec).parent_path().filename().string() + "/" + fs::path(spec).stem().string(), spec};
}

ReferencePoint reference_for(double eer_ref, std::int64_t params_ref, const Inputs& in) {
  ReferencePoint ref{eer_ref, params_ref};
  if (ref.params <= 0) {
    ref.params = in.manifest.empty() ? kDefaultPoolParams : load_manifest(in.manifest).total_params();
  }
  if (!(ref.eer > 0.0)) throw ConfigError("--ref-eer must be positive");
  return ref;
}

int cmd_report(const Inputs& in, const ReportOptions& o, const CostOptions& c, std::ostream& out) {
  if (o.fronts.empty() && o.baselines.empty()) throw ConfigError("report needs at least one --front or --baseline");
  c.cost.validate();
  std::optional<Assembled> data;
  if (!in.manifest.empty() || !in.labels.empty()) {
    require_file(in.manifest, "manifest");
    require_file(in.labels, "labels");
    data = load_matrix(in, in.eval_labels.empty() ? in.labels : in.eval_labels);
  }
  auto const ref = reference_for(o.ref_eer, o.ref_params, in);

  std::vector<SystemRow> front_rows;
  std::vector<std::pair<std::string, double>> hvs;
  for (const auto& spec : o.fronts) {
    auto const [name, path] = split_named(spec);
    require_file(path, "front");
    auto front = read_front_csv(path);
    std::size_t k = 0;
    for (auto& m : front.members) {
      SystemRow row{name + "#" + std::to_string(k++), m.objectives.eer, std::nullopt, m.objectives.params, false};
      if (data) {
        if (chromosome_size(m.chromosome) != data->matrix.detectors()) {
          throw DataError(path + ": chromosome length does not match the manifest");
        }
        Eigen::RowVectorXd const fused = fuse(m.chromosome, data->matrix, o.cutoff);
        auto const s = summarize(std::span<const double>(fused.data(), data->matrix.trials()),
                                 data->matrix.labels().labels(), c.cost);
        row.eer = s.eer;
        row.min_dcf = s.min_dcf;
        m.objectives.eer = s.eer;
      }
      front_rows.push_back(std::move(row));
    }
    hvs.emplace_back(name, hypervolume_2d(front, ref));
  }
  std::vector<SystemRow> base_rows;
  for (const auto& path : o.baselines) {
    require_file(path, "baseline");
    auto rows = read_systems_csv(path);
    base_rows.insert(base_rows.end(), rows.begin(), rows.end());
  }
  flag_dominated(base_rows, front_rows);

  std::vector<SystemRow> all = front_rows;
  all.insert(all.end(), base_rows.begin(), base_rows.end());
  if (!o.output.empty()) io::write_file_atomic(o.output, systems_csv(all, true));
  out << format_table(all);
  for (const auto& [name, hv] : hvs) out << "hv," << name << ',' << io::format_exact(hv) << '\n';
  return kOk;
}

struct HvOptions {
  std::string front;
  double ref_eer = 0.20;
  std::int64_t ref_params = 0;
};

int cmd_hv(const Inputs& in, const HvOptions& o, std::ostream& out) {
  require_file(o.front, "front");
  auto const ref = reference_for(o.ref_eer, o.ref_params, in);
  auto const front = read_front_csv(o.front);
  out << io::format_exact(hypervolume_2d(front, ref)) << '\n';
  return kOk;
}

}  // namespace

int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  std::string config_text;
  try {
    args = expand_config(std::move(args), config_text);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kUsageError;
  }

  CLI::App app{"Multi-objective evolutionary score fusion of spoofing detectors", "evofuse"};
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(EVOFUSE_VERSION));

  Inputs in;
  CostOptions cost;

  auto* validate = app.add_subcommand("validate", "Load and check inputs; print per-detector statistics and EERs");
  add_inputs(validate, in, false);
  add_cost(validate, cost);

  MetricsOptions mo;
  auto* metrics = app.add_subcommand("metrics", "EER and minDCF of one score file");
  metrics->add_option("--scores", mo.scores, "Score file (trial_id score)")->required();
  metrics->add_option("--labels", mo.labels, "Label file (trial_id label)")->required();
  metrics->add_option("--det", mo.det, "Write the DET curve CSV here ('-' for stdout)");
  add_cost(metrics, cost);

  SynthOptions so;
  auto* synth = app.add_subcommand("synth", "Write a synthetic detector pool with known EERs");
  synth->add_option("--scenario", so.scenario, "S1 or SEP")->capture_default_str();
  synth->add_option("--seed", so.seed, "Generator seed")->capture_default_str();
  synth->add_option("--n-per-class", so.n_per_class, "Trials per class")->capture_default_str();
  synth->add_option("--out", so.out_dir, "Output directory")->required();
  synth->add_flag("--split", so.split, "Also write dev_labels.txt / eval_labels.txt (alternating trials)");

  OptimizeOptions oo;
  auto* optimize = app.add_subcommand("optimize", "Run NSGA-II fusion search and write Pareto fronts");
  add_inputs(optimize, in, false);
  optimize->add_option("--encoding", oo.encoding, "binary or real")->capture_default_str();
  optimize->add_option("--population-size,--pop-size", oo.run.population_size)->capture_default_str();
  optimize->add_option("--max-generations,--max-gens", oo.run.max_generations)->capture_default_str();
  optimize->add_option("--crossover-rate,--pc", oo.crossover_rate, "Default: 0.7 binary, 0.5 real");
  optimize->add_option("--mutation-rate,--pm", oo.mutation_rate, "Default: 1/36 binary, 0.01 real");
  optimize->add_option("--eta-m", oo.run.eta_m, "Polynomial mutation distribution index")->capture_default_str();
  optimize->add_option("--cutoff", oo.run.cutoff, "Real-encoding weight cut-off W")->capture_default_str();
  optimize->add_option("--epsilon", oo.run.epsilon, "HV stagnation threshold")->capture_default_str();
  optimize->add_option("--patience", oo.run.patience, "Stagnant generations before stopping")->capture_default_str();
  optimize->add_option("--seed", oo.run.seed, "Root RNG seed")->capture_default_str();
  optimize->add_option("--ref-eer", oo.run.reference.eer, "HV reference EER")->capture_default_str();
  optimize->add_option("--ref-params", oo.run.reference.params, "HV reference parameter count (default: pool total)");
  optimize->add_option("--runs", oo.runs, "Independent runs (super-Pareto front over all)")->capture_default_str();
  optimize->add_option("--out", oo.out_dir, "Output root directory")->capture_default_str();
  optimize->add_option("--run-name", oo.run_name, "Run directory name (default: UTC timestamp)");

  BaselineOptions bo;
  auto* baseline = app.add_subcommand("baseline", "Averaging or logistic-regression reference fusions");
  add_inputs(baseline, in, false);
  add_cost(baseline, cost);
  baseline->add_option("--mode", bo.mode, "average or logreg")->capture_default_str();
  baseline->add_option("--subset", bo.subset, "Detector ids or names for --mode average")
      ->delimiter(',')
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
  baseline->add_option("--prune", bo.prune, "by_weight or by_eer pruning sweep (logreg only)");
  baseline->add_option("--name", bo.name, "System name in the output row");
  baseline->add_option("--output", bo.output, "Objectives CSV path (default stdout)");
  baseline->add_option("--sweep-output", bo.sweep_output, "Pruning sweep CSV path (default stdout)");
  baseline->add_option("--l2", bo.hyper.l2_lambda, "Logistic regression L2 strength")->capture_default_str();
  baseline->add_option("--max-iters", bo.hyper.max_iters)->capture_default_str();
  baseline->add_option("--tol", bo.hyper.tol)->capture_default_str();

  ReportOptions ro;
  auto* report = app.add_subcommand("report", "Compare fronts and baselines");
  add_inputs(report, in, false);
  add_cost(report, cost);
  report->add_option("--front", ro.fronts, "Front CSV, optionally NAME=PATH")
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
  report->add_option("--baseline", ro.baselines, "Baseline objectives CSV")
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
  report->add_option("--output", ro.output, "Comparison CSV path");
  report->add_option("--ref-eer", ro.ref_eer)->capture_default_str();
  report->add_option("--ref-params", ro.ref_params, "Default: manifest total, else 18.56B");
  report->add_option("--cutoff", ro.cutoff, "Cut-off W used to re-score real fronts")->capture_default_str();

  HvOptions ho;
  auto* hv = app.add_subcommand("hv", "Normalised hypervolume of a front CSV");
  hv->add_option("--front", ho.front, "Front CSV")->required();
  hv->add_option("--manifest", in.manifest, "Manifest providing the default reference parameter count");
  hv->add_option("--ref-eer", ho.ref_eer)->capture_default_str();
  hv->add_option("--ref-params", ho.ref_params, "Default: manifest total, else 18.56B");

  try {
    std::reverse(args.begin(), args.end());
    app.parse(std::move(args));
  } catch (const CLI::ParseError& e) {
    int const code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsageError;
  }

  try {
    if (validate->parsed()) return cmd_validate(in, cost, out);
    if (metrics->parsed()) return cmd_metrics(mo, cost, out);
    if (synth->parsed()) return cmd_synth(so, out);
    if (optimize->parsed()) return cmd_optimize(in, oo, config_text, out);
    if (baseline->parsed()) return cmd_baseline(in, bo, cost, out, err);
    if (report->parsed()) return cmd_report(in, ro, cost, out);
    if (hv->parsed()) return cmd_hv(in, ho, out);
  } catch (const ConfigError& e) {
    err << "configuration error: " << e.what() << "\n";
    return kUsageError;
  } catch (const DataError& e) {
    err << "data error: " << e.what() << "\n";
    return kDataError;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kInternalError;
  }
  return kUsageError;
}

}  // namespace evofuse
