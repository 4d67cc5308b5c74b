#include "seqtest/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "seqtest/special_functions.hpp"
#include "seqtest/theory.hpp"

namespace seqtest {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

std::string format_double(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

}  // namespace

Partition build_interval_partition(const Pool& pool, const IntervalPartitionSpec& spec,
                                   const std::vector<double>& priors) {
  if (spec.coordinate < 0 || static_cast<std::size_t>(spec.coordinate) >= pool.dim())
    throw std::invalid_argument("interval partition: coordinate out of range");
  if (!std::is_sorted(spec.boundaries.begin(), spec.boundaries.end()))
    throw std::invalid_argument("interval partition: boundaries must be ascending");
  const std::size_t cell_count = spec.boundaries.size() + 1;
  if (priors.size() != cell_count)
    throw std::invalid_argument("interval partition: need one prior per cell");
  Partition partition;
  partition.cells.resize(cell_count);
  partition.cell_priors = priors;
  for (std::size_t i = 0; i < pool.size(); ++i) {
    const double x = pool.feature(i)[spec.coordinate];
    const std::size_t cell =
        std::upper_bound(spec.boundaries.begin(), spec.boundaries.end(), x) -
        spec.boundaries.begin();
    partition.cells[cell].push_back(i);
  }
  return partition;
}

std::vector<double> gaussian_interval_priors(const GaussianScenario& scenario,
                                             const IntervalPartitionSpec& spec) {
  if (spec.coordinate != 0)
    throw std::invalid_argument(
        "gaussian_interval_priors: only coordinate 0 is label-dependent");
  std::vector<double> priors;
  priors.reserve(spec.boundaries.size() + 1);
  const double lo = -std::numeric_limits<double>::infinity();
  const double hi = std::numeric_limits<double>::infinity();
  auto mass = [](double a, double b, double mean) {
    const double upper = std::isinf(b) ? 1.0 : normal_cdf(b - mean);
    const double lower = std::isinf(a) ? 0.0 : normal_cdf(a - mean);
    return upper - lower;
  };
  for (std::size_t c = 0; c <= spec.boundaries.size(); ++c) {
    const double a = c == 0 ? lo : spec.boundaries[c - 1];
    const double b = c == spec.boundaries.size() ? hi : spec.boundaries[c];
    const double m0 = scenario.prior0 * mass(a, b, -scenario.delta);
    const double m1 = (1.0 - scenario.prior0) * mass(a, b, scenario.delta);
    priors.push_back(m0 + m1 > 0.0 ? m0 / (m0 + m1) : 0.5);
  }
  return priors;
}

const std::vector<double>& ExperimentConfig::scenario_params() const {
  return scenario == ScenarioKind::Gaussian ? deltas : mixture_ratios;
}

void ExperimentConfig::validate() const {
  if (scenario_params().empty())
    throw std::invalid_argument(scenario == ScenarioKind::Gaussian
                                    ? "config: no deltas given for the gaussian scenario"
                                    : "config: no mixture_ratios given for the mixture scenario");
  if (priors.empty() || budgets.empty() || classifiers.empty() || strategies.empty())
    throw std::invalid_argument("config: empty grid axis");
  if (replications < 1) throw std::invalid_argument("config: replications must be >= 1");
  if (init_labels < 1 || init_labels >= *std::min_element(budgets.begin(), budgets.end()))
    throw std::invalid_argument("config: init_labels must be >= 1 and below every budget");
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("config: alpha outside (0, 1)");
  if (pool_size < *std::max_element(budgets.begin(), budgets.end()))
    throw std::invalid_argument("config: pool_size smaller than the largest budget");
  for (double p : priors)
    if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("config: prior outside (0, 1)");
}

namespace {

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> out;
  std::string item;
  std::stringstream ss(value);
  while (std::getline(ss, item, ',')) {
    const auto begin = item.find_first_not_of(" \t");
    if (begin == std::string::npos) {
      out.emplace_back();
      continue;
    }
    const auto end = item.find_last_not_of(" \t");
    out.push_back(item.substr(begin, end - begin + 1));
  }
  return out;
}

struct ConfigParser {
  std::string name;
  int line_no = 0;

  [[noreturn]] void fail(const std::string& message) const {
    throw std::runtime_error(name + ":" + std::to_string(line_no) + ": " + message);
  }

  double parse_double(const std::string& s) const {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) fail("expected a number, got '" + s + "'");
    return v;
  }

  int parse_int(const std::string& s) const {
    int v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) fail("expected an integer, got '" + s + "'");
    return v;
  }

  std::uint64_t parse_u64(const std::string& s) const {
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) fail("expected a seed, got '" + s + "'");
    return v;
  }

  bool parse_bool(const std::string& s) const {
    if (s == "true" || s == "1" || s == "yes") return true;
    if (s == "false" || s == "0" || s == "no") return false;
    fail("expected a boolean, got '" + s + "'");
  }

  std::vector<double> parse_double_list(const std::string& s) const {
    std::vector<double> out;
    for (const auto& item : split_list(s)) out.push_back(parse_double(item));
    if (out.empty()) fail("empty list");
    return out;
  }

  std::vector<int> parse_int_list(const std::string& s) const {
    std::vector<int> out;
    for (const auto& item : split_list(s)) out.push_back(parse_int(item));
    if (out.empty()) fail("empty list");
    return out;
  }
};

}  // namespace

ExperimentConfig parse_experiment_config_text(const std::string& text, const std::string& name) {
  ExperimentConfig config;
  ConfigParser parser{name};
  std::stringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    ++parser.line_no;
    const auto comment = line.find('#');
    if (comment != std::string::npos) line.erase(comment);
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) parser.fail("expected 'key = value'");
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      if (b == std::string::npos) return std::string();
      const auto e = s.find_last_not_of(" \t\r");
      return s.substr(b, e - b + 1);
    };
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) parser.fail("missing key");
    if (value.empty()) parser.fail("missing value for '" + key + "'");

    if (key == "scenario") {
      if (value == "gaussian") config.scenario = ExperimentConfig::ScenarioKind::Gaussian;
      else if (value == "mixture") config.scenario = ExperimentConfig::ScenarioKind::Mixture;
      else parser.fail("unknown scenario '" + value + "'");
    } else if (key == "deltas") {
      config.deltas = parser.parse_double_list(value);
    } else if (key == "mixture_ratios") {
      config.mixture_ratios = parser.parse_double_list(value);
    } else if (key == "priors") {
      config.priors = parser.parse_double_list(value);
    } else if (key == "budgets") {
      config.budgets = parser.parse_int_list(value);
    } else if (key == "classifiers") {
      config.classifiers.clear();
      for (const auto& item : split_list(value)) {
        if (item == "logistic") config.classifiers.push_back(ClassifierConfig::Kind::Logistic);
        else if (item == "knn") config.classifiers.push_back(ClassifierConfig::Kind::Knn);
        else parser.fail("unknown classifier '" + item + "'");
      }
    } else if (key == "strategies") {
      config.strategies.clear();
      for (const auto& item : split_list(value)) {
        if (item == "bimodal") config.strategies.push_back(StrategyConfig::Kind::Bimodal);
        else if (item == "random") config.strategies.push_back(StrategyConfig::Kind::Random);
        else if (item == "partition") config.strategies.push_back(StrategyConfig::Kind::Partition);
        else parser.fail("unknown strategy '" + item + "'");
      }
    } else if (key == "replications") {
      config.replications = parser.parse_int(value);
    } else if (key == "init_labels") {
      config.init_labels = parser.parse_int(value);
    } else if (key == "alpha") {
      config.alpha = parser.parse_double(value);
    } else if (key == "pool_size") {
      config.pool_size = parser.parse_int(value);
    } else if (key == "dim") {
      config.dim = parser.parse_int(value);
    } else if (key == "epochs") {
      config.epochs = parser.parse_int(value);
    } else if (key == "step_size") {
      config.step_size = parser.parse_double(value);
    } else if (key == "l2") {
      config.l2 = parser.parse_double(value);
    } else if (key == "neighbor_count") {
      config.neighbor_count = parser.parse_int(value);
    } else if (key == "clip_epsilon") {
      config.clip_epsilon = parser.parse_double(value);
    } else if (key == "standardize") {
      config.standardize = parser.parse_bool(value);
    } else if (key == "mean_a") {
      config.mean_a = parser.parse_double_list(value);
    } else if (key == "mean_b") {
      config.mean_b = parser.parse_double_list(value);
    } else if (key == "mean_c") {
      config.mean_c = parser.parse_double_list(value);
    } else if (key == "partition_coordinate") {
      config.partition.coordinate = parser.parse_int(value);
    } else if (key == "partition_boundaries") {
      config.partition.boundaries = parser.parse_double_list(value);
    } else if (key == "partition_priors") {
      config.partition.priors = parser.parse_double_list(value);
    } else if (key == "partition_known_priors") {
      config.partition.known_priors = parser.parse_bool(value);
    } else if (key == "seed") {
      config.seed = parser.parse_u64(value);
    } else if (key == "threads") {
      config.threads = parser.parse_int(value);
    } else if (key == "trajectories") {
      config.write_trajectories = parser.parse_bool(value);
    } else {
      parser.fail("unknown key '" + key + "'");
    }
  }
  config.validate();
  return config;
}

ExperimentConfig parse_experiment_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_experiment_config_text(buffer.str(), path);
}

bool is_null_scenario(ExperimentConfig::ScenarioKind kind, double param) {
  return kind == ExperimentConfig::ScenarioKind::Gaussian ? param == 0.0 : param == 1.0;
}

std::string to_string(StrategyConfig::Kind kind) {
  switch (kind) {
    case StrategyConfig::Kind::Bimodal: return "bimodal";
    case StrategyConfig::Kind::Random: return "random";
    case StrategyConfig::Kind::Partition: return "partition";
  }
  return "?";
}

std::string to_string(ClassifierConfig::Kind kind) {
  return kind == ClassifierConfig::Kind::Logistic ? "logistic" : "knn";
}

std::string to_string(ExperimentConfig::ScenarioKind kind) {
  return kind == ExperimentConfig::ScenarioKind::Gaussian ? "gaussian" : "mixture";
}

namespace {

struct ReduceState {
  CellSummary summary;
  std::vector<double> reject_labels;
};

void finish_cell(ReduceState& state) {
  auto& s = state.summary;
  const double reps = static_cast<double>(s.replications);
  const double reject_fraction = s.rejections / reps;
  s.error_value = s.null_scenario ? reject_fraction : 1.0 - reject_fraction;
  if (!state.reject_labels.empty()) {
    double mean = 0.0;
    for (double v : state.reject_labels) mean += v;
    mean /= static_cast<double>(state.reject_labels.size());
    double ss = 0.0;
    for (double v : state.reject_labels) ss += (v - mean) * (v - mean);
    s.mean_labels_reject = mean;
    s.sd_labels_reject = state.reject_labels.size() > 1
                             ? std::sqrt(ss / static_cast<double>(state.reject_labels.size() - 1))
                             : 0.0;
  } else {
    s.mean_labels_reject = kNan;
    s.sd_labels_reject = kNan;
  }
  s.t_stat = kNan;
  s.p_value = kNan;
}

bool same_comparison_group(const CellKey& a, const CellKey& b) {
  return a.scenario == b.scenario && a.param == b.param && a.prior0 == b.prior0 &&
         a.classifier == b.classifier && a.budget == b.budget;
}

}  // namespace

std::vector<CellSummary> summarize_runs(const std::vector<RawRun>& runs) {
  std::vector<ReduceState> cells;
  auto find_cell = [&](const CellKey& key) -> ReduceState& {
    for (auto& c : cells)
      if (c.summary.key == key) return c;
    cells.emplace_back();
    cells.back().summary.key = key;
    cells.back().summary.null_scenario = is_null_scenario(key.scenario, key.param);
    return cells.back();
  };

  for (const auto& run : runs) {
    auto& cell = find_cell(run.key);
    ++cell.summary.replications;
    if (run.record.verdict == Decision::Reject) {
      ++cell.summary.rejections;
      cell.reject_labels.push_back(static_cast<double>(run.record.labels_spent_total));
    }
  }
  for (auto& cell : cells) finish_cell(cell);

  // Welch t-test on query counts: bimodal (proposed) against random (baseline)
  // within each (scenario, param, prior, classifier, budget) group.
  for (auto& cell : cells) {
    if (cell.summary.key.strategy != StrategyConfig::Kind::Bimodal) continue;
    for (auto& other : cells) {
      if (other.summary.key.strategy != StrategyConfig::Kind::Random) continue;
      if (!same_comparison_group(cell.summary.key, other.summary.key)) continue;
      if (cell.reject_labels.size() < 2 || other.reject_labels.size() < 2) break;
      try {
        const TTestResult t = welch_t_test(cell.reject_labels, other.reject_labels);
        cell.summary.t_stat = other.summary.t_stat = t.t;
        cell.summary.p_value = other.summary.p_value = t.p;
      } catch (const std::invalid_argument&) {
        // degenerate query-count samples stay unpaired
      }
      break;
    }
  }

  std::vector<CellSummary> out;
  out.reserve(cells.size());
  for (auto& cell : cells) out.push_back(cell.summary);
  return out;
}

ExperimentResult run_experiment(const ExperimentConfig& config, const CellLogger& logger) {
  config.validate();
  const int threads = config.threads > 0
                          ? config.threads
                          : std::max(1u, std::thread::hardware_concurrency());

  ExperimentResult result;
  std::uint64_t cell_index = 0;
  for (double param : config.scenario_params()) {
    for (double prior0 : config.priors) {
      for (auto classifier_kind : config.classifiers) {
        for (auto strategy_kind : config.strategies) {
          for (int budget : config.budgets) {
            const auto started = std::chrono::steady_clock::now();
            CellKey key{config.scenario, param, prior0, classifier_kind, strategy_kind, budget};

            RunConfig run_config;
            run_config.init_labels = config.init_labels;
            run_config.label_budget = budget;
            run_config.alpha = config.alpha;
            run_config.record_trajectory = config.write_trajectories;
            run_config.classifier.kind = classifier_kind;
            run_config.classifier.epochs = config.epochs;
            run_config.classifier.step_size = config.step_size;
            run_config.classifier.l2 = config.l2;
            run_config.classifier.neighbor_count = config.neighbor_count;
            run_config.classifier.clip_epsilon = config.clip_epsilon;
            run_config.classifier.standardize = config.standardize;
            run_config.strategy.kind = strategy_kind;
            run_config.strategy.known_cell_priors = config.partition.known_priors;

            PoolFactory pool_factory;
            PartitionBuilder partition_builder;
            if (config.scenario == ExperimentConfig::ScenarioKind::Gaussian) {
              GaussianScenario scenario{param, prior0, config.dim, config.pool_size};
              pool_factory = [scenario](Rng& rng) { return gen_gaussian_pool(scenario, rng); };
              if (strategy_kind == StrategyConfig::Kind::Partition) {
                const std::vector<double> cell_priors =
                    !config.partition.priors.empty()
                        ? config.partition.priors
                        : gaussian_interval_priors(scenario, config.partition);
                const IntervalPartitionSpec spec = config.partition;
                partition_builder = [spec, cell_priors](const Pool& pool) {
                  return build_interval_partition(pool, spec, cell_priors);
                };
              }
            } else {
              MixtureScenario scenario;
              scenario.mean_a = config.mean_a;
              scenario.mean_b = config.mean_b;
              scenario.mean_c = config.mean_c;
              scenario.mixture_ratio = param;
              scenario.prior0 = prior0;
              scenario.pool_size = config.pool_size;
              pool_factory = [scenario](Rng& rng) { return gen_mixture_pool(scenario, rng); };
              if (strategy_kind == StrategyConfig::Kind::Partition) {
                if (config.partition.priors.empty() && config.partition.known_priors)
                  throw std::invalid_argument(
                      "config: mixture partition needs explicit partition_priors "
                      "or partition_known_priors = false");
                const std::vector<double> cell_priors =
                    !config.partition.priors.empty()
                        ? config.partition.priors
                        : std::vector<double>(config.partition.boundaries.size() + 1, 0.5);
                const IntervalPartitionSpec spec = config.partition;
                partition_builder = [spec, cell_priors](const Pool& pool) {
                  return build_interval_partition(pool, spec, cell_priors);
                };
              }
            }

            const std::uint64_t cell_seed = derive_stream_seed(config.seed, cell_index);
            ++cell_index;
            std::vector<RunRecord> records = run_batch(run_config, pool_factory,
                                                       config.replications, cell_seed, threads,
                                                       partition_builder);
            std::vector<RawRun> cell_runs;
            cell_runs.reserve(records.size());
            for (std::size_t r = 0; r < records.size(); ++r)
              cell_runs.push_back({key, static_cast<int>(r), std::move(records[r])});

            if (logger) {
              const auto cell_summary = summarize_runs(cell_runs);
              const double seconds =
                  std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
              logger(cell_summary.front(), seconds);
            }
            for (auto& run : cell_runs) result.runs.push_back(std::move(run));
          }
        }
      }
    }
  }
  result.summaries = summarize_runs(result.runs);
  return result;
}

namespace {

nlohmann::json key_to_json(const CellKey& key) {
  return {
      {"scenario", to_string(key.scenario)}, {"param", key.param},
      {"prior0", key.prior0},                {"classifier", to_string(key.classifier)},
      {"strategy", to_string(key.strategy)}, {"budget", key.budget},
  };
}

CellKey key_from_json(const nlohmann::json& j) {
  CellKey key;
  const std::string scenario = j.at("scenario");
  key.scenario = scenario == "gaussian" ? ExperimentConfig::ScenarioKind::Gaussian
                                        : ExperimentConfig::ScenarioKind::Mixture;
  key.param = j.at("param");
  key.prior0 = j.at("prior0");
  const std::string classifier = j.at("classifier");
  key.classifier =
      classifier == "logistic" ? ClassifierConfig::Kind::Logistic : ClassifierConfig::Kind::Knn;
  const std::string strategy = j.at("strategy");
  key.strategy = strategy == "bimodal"   ? StrategyConfig::Kind::Bimodal
                 : strategy == "random" ? StrategyConfig::Kind::Random
                                        : StrategyConfig::Kind::Partition;
  key.budget = j.at("budget");
  return key;
}

}  // namespace

void write_raw_jsonl(const std::vector<RawRun>& runs, const std::string& path,
                     bool with_trajectories) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  for (const auto& run : runs) {
    nlohmann::json j = key_to_json(run.key);
    j["replication"] = run.replication;
    j["seed"] = run.record.seed;
    j["verdict"] = run.record.verdict == Decision::Reject ? "reject" : "retain";
    j["stopping_step"] = run.record.stopping_step;
    j["labels_spent_total"] = run.record.labels_spent_total;
    if (with_trajectories) j["log_w"] = run.record.log_w_trajectory;
    out << j.dump() << '\n';
  }
  if (!out) throw std::runtime_error("write failed for " + path);
}

std::vector<RawRun> read_raw_jsonl(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::vector<RawRun> runs;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& err) {
      throw std::runtime_error(path + ":" + std::to_string(line_no) + ": " + err.what());
    }
    RawRun run;
    run.key = key_from_json(j);
    run.replication = j.at("replication");
    run.record.seed = j.at("seed");
    run.record.verdict =
        j.at("verdict") == "reject" ? Decision::Reject : Decision::Retain;
    run.record.stopping_step = j.at("stopping_step");
    run.record.labels_spent_total = j.at("labels_spent_total");
    if (j.contains("log_w")) run.record.log_w_trajectory = j.at("log_w").get<std::vector<double>>();
    runs.push_back(std::move(run));
  }
  return runs;
}

namespace {

std::string csv_field(double v) { return std::isnan(v) ? std::string() : format_double(v); }

}  // namespace

std::string summary_to_csv(const std::vector<CellSummary>& summaries) {
  std::string out =
      "scenario,param,prior0,classifier,strategy,budget,replications,rejections,"
      "error_kind,error_value,mean_labels_reject,sd_labels_reject,t_stat,p_value\n";
  for (const auto& s : summaries) {
    out += to_string(s.key.scenario) + ',' + format_double(s.key.param) + ',' +
           format_double(s.key.prior0) + ',' + to_string(s.key.classifier) + ',' +
           to_string(s.key.strategy) + ',' + std::to_string(s.key.budget) + ',' +
           std::to_string(s.replications) + ',' + std::to_string(s.rejections) + ',' +
           (s.null_scenario ? "type_i" : "type_ii") + ',' + format_double(s.error_value) + ',' +
           csv_field(s.mean_labels_reject) + ',' + csv_field(s.sd_labels_reject) + ',' +
           csv_field(s.t_stat) + ',' + csv_field(s.p_value) + '\n';
  }
  return out;
}

void write_summary_csv(const std::vector<CellSummary>& summaries, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << summary_to_csv(summaries);
  if (!out) throw std::runtime_error("write failed for " + path);
}

namespace {

struct TableAxis {
  std::vector<int> budgets;
  std::vector<std::pair<double, StrategyConfig::Kind>> rows;  // (prior0, strategy)
  std::vector<double> params;
  std::vector<ClassifierConfig::Kind> classifiers;
};

TableAxis collect_axis(const std::vector<CellSummary>& summaries, bool null_cells) {
  TableAxis axis;
  for (const auto& s : summaries) {
    if (s.null_scenario != null_cells) continue;
    if (std::find(axis.budgets.begin(), axis.budgets.end(), s.key.budget) == axis.budgets.end())
      axis.budgets.push_back(s.key.budget);
    const std::pair<double, StrategyConfig::Kind> row{s.key.prior0, s.key.strategy};
    if (std::find(axis.rows.begin(), axis.rows.end(), row) == axis.rows.end())
      axis.rows.push_back(row);
    if (std::find(axis.params.begin(), axis.params.end(), s.key.param) == axis.params.end())
      axis.params.push_back(s.key.param);
    if (std::find(axis.classifiers.begin(), axis.classifiers.end(), s.key.classifier) ==
        axis.classifiers.end())
      axis.classifiers.push_back(s.key.classifier);
  }
  return axis;
}

const CellSummary* find_summary(const std::vector<CellSummary>& summaries, double param,
                                double prior0, ClassifierConfig::Kind classifier,
                                StrategyConfig::Kind strategy, int budget) {
  for (const auto& s : summaries)
    if (s.key.param == param && s.key.prior0 == prior0 && s.key.classifier == classifier &&
        s.key.strategy == strategy && s.key.budget == budget)
      return &s;
  return nullptr;
}

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

constexpr const char* kMissing = "—";  // em dash for absent cells

// column width in code points, not bytes (cells may hold "±" or the em dash)
std::size_t display_width(const std::string& s) {
  std::size_t width = 0;
  for (unsigned char c : s)
    if ((c & 0xC0) != 0x80) ++width;
  return width;
}

void append_row(std::string& out, const std::vector<std::string>& cells,
                const std::vector<std::size_t>& widths) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    out += cells[i];
    if (i + 1 < cells.size())
      for (std::size_t p = display_width(cells[i]); p < widths[i] + 2; ++p) out += ' ';
  }
  out += '\n';
}

std::string render_grid(const std::vector<CellSummary>& summaries, const TableAxis& axis,
                        double param, ClassifierConfig::Kind classifier,
                        const std::function<std::string(const CellSummary&)>& value) {
  std::vector<std::vector<std::string>> grid;
  std::vector<std::string> header{"prior0", "strategy"};
  for (int b : axis.budgets) header.push_back("Nq=" + std::to_string(b));
  grid.push_back(header);
  for (const auto& [prior0, strategy] : axis.rows) {
    std::vector<std::string> row{format_double(prior0), to_string(strategy)};
    for (int b : axis.budgets) {
      const CellSummary* s = find_summary(summaries, param, prior0, classifier, strategy, b);
      row.push_back(s ? value(*s) : kMissing);
    }
    grid.push_back(row);
  }
  std::vector<std::size_t> widths(header.size(), 0);
  for (const auto& row : grid)
    for (std::size_t i = 0; i < row.size(); ++i)
      widths[i] = std::max(widths[i], display_width(row[i]));
  std::string out;
  for (const auto& row : grid) append_row(out, row, widths);
  return out;
}

}  // namespace

std::string render_tables(const std::vector<CellSummary>& summaries) {
  std::string out;
  const TableAxis h1 = collect_axis(summaries, false);
  for (double param : h1.params) {
    for (auto classifier : h1.classifiers) {
      out += "== Type II error | param=" + format_double(param) + " classifier=" +
             to_string(classifier) + " ==\n";
      out += render_grid(summaries, h1, param, classifier,
                         [](const CellSummary& s) { return fixed(s.error_value, 2); });
      out += "\n== Labels spent to reject (mean ± sd) | param=" + format_double(param) +
             " classifier=" + to_string(classifier) + " ==\n";
      out += render_grid(summaries, h1, param, classifier, [](const CellSummary& s) {
        if (std::isnan(s.mean_labels_reject)) return std::string(kMissing);
        return fixed(s.mean_labels_reject, 1) + "±" + fixed(s.sd_labels_reject, 0);
      });
      out += '\n';
    }
  }
  const TableAxis h0 = collect_axis(summaries, true);
  for (double param : h0.params) {
    for (auto classifier : h0.classifiers) {
      out += "== Type I error | param=" + format_double(param) + " classifier=" +
             to_string(classifier) + " ==\n";
      out += render_grid(summaries, h0, param, classifier,
                         [](const CellSummary& s) { return fixed(s.error_value, 3); });
      out += '\n';
    }
  }
  return out;
}

std::string type_i_series_csv(const std::vector<CellSummary>& summaries) {
  std::string out = "scenario,param,prior0,classifier,strategy,budget,type_i_error\n";
  for (const auto& s : summaries) {
    if (!s.null_scenario) continue;
    out += to_string(s.key.scenario) + ',' + format_double(s.key.param) + ',' +
           format_double(s.key.prior0) + ',' + to_string(s.key.classifier) + ',' +
           to_string(s.key.strategy) + ',' + std::to_string(s.key.budget) + ',' +
           format_double(s.error_value) + '\n';
  }
  return out;
}

}  // namespace seqtest
