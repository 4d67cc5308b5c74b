#include "seqtest/scenario.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <system_error>

namespace seqtest {

namespace {

void check_common(double prior0, int pool_size) {
  if (!(prior0 > 0.0 && prior0 < 1.0))
    throw std::invalid_argument("scenario: prior0 must lie in (0, 1)");
  if (pool_size < 1)
    throw std::invalid_argument("scenario: pool_size must be positive");
}

}  // namespace

Pool gen_gaussian_pool(const GaussianScenario& scenario, Rng& rng) {
  check_common(scenario.prior0, scenario.pool_size);
  if (scenario.dim < 1)
    throw std::invalid_argument("gen_gaussian_pool: dim must be positive");
  if (scenario.delta < 0.0)
    throw std::invalid_argument("gen_gaussian_pool: delta must be non-negative");
  std::vector<std::vector<double>> features(scenario.pool_size);
  std::vector<int> labels(scenario.pool_size);
  for (int i = 0; i < scenario.pool_size; ++i) {
    const int z = rng.uniform01() < 1.0 - scenario.prior0 ? 1 : 0;
    labels[i] = z;
    std::vector<double> f(scenario.dim);
    f[0] = (z == 1 ? scenario.delta : -scenario.delta) + rng.normal();
    for (int j = 1; j < scenario.dim; ++j) f[j] = rng.normal();
    features[i] = std::move(f);
  }
  return Pool(std::move(features), std::move(labels));
}

Pool gen_mixture_pool(const MixtureScenario& scenario, Rng& rng) {
  check_common(scenario.prior0, scenario.pool_size);
  if (!(scenario.mixture_ratio >= 0.0 && scenario.mixture_ratio <= 1.0))
    throw std::invalid_argument("gen_mixture_pool: mixture_ratio outside [0, 1]");
  const std::size_t dim = scenario.mean_a.size();
  if (dim == 0 || scenario.mean_b.size() != dim || scenario.mean_c.size() != dim)
    throw std::invalid_argument("gen_mixture_pool: component means disagree in dimension");
  std::vector<std::vector<double>> features(scenario.pool_size);
  std::vector<int> labels(scenario.pool_size);
  for (int i = 0; i < scenario.pool_size; ++i) {
    const int z = rng.uniform01() < 1.0 - scenario.prior0 ? 1 : 0;
    labels[i] = z;
    const bool from_a = z == 0 || rng.uniform01() < scenario.mixture_ratio;
    const auto& mean = from_a ? scenario.mean_a : scenario.mean_b;
    std::vector<double> f(dim);
    for (std::size_t j = 0; j < dim; ++j) f[j] = mean[j] + rng.normal();
    features[i] = std::move(f);
  }
  return Pool(std::move(features), std::move(labels));
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::stringstream ss(line);
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_double_cell(const std::string& cell, int line_no, const std::string& path) {
  double value = 0.0;
  const char* begin = cell.data();
  const char* end = begin + cell.size();
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc{} || ptr != end)
    throw std::runtime_error(path + ":" + std::to_string(line_no) + ": non-numeric cell '" + cell + "'");
  return value;
}

}  // namespace

Pool load_csv_pool(const std::string& path, const std::string& label_column) {
  std::ifstream in(path);
  if (!in)
    throw std::runtime_error("load_csv_pool: cannot open " + path);
  std::string line;
  if (!std::getline(in, line))
    throw std::runtime_error(path + ":1: missing header row");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const auto header = split_csv_line(line);
  std::size_t label_idx = header.size();
  for (std::size_t i = 0; i < header.size(); ++i)
    if (header[i] == label_column) label_idx = i;
  if (label_idx == header.size())
    throw std::runtime_error(path + ":1: missing label column '" + label_column + "'");
  if (header.size() < 2)
    throw std::runtime_error(path + ":1: no feature columns");

  std::vector<std::vector<double>> features;
  std::vector<int> labels;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto cells = split_csv_line(line);
    if (cells.size() != header.size())
      throw std::runtime_error(path + ":" + std::to_string(line_no) + ": expected " +
                               std::to_string(header.size()) + " cells, got " +
                               std::to_string(cells.size()));
    std::vector<double> f;
    f.reserve(header.size() - 1);
    int z = -1;
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i == label_idx) {
        const double raw = parse_double_cell(cells[i], line_no, path);
        if (raw != 0.0 && raw != 1.0)
          throw std::runtime_error(path + ":" + std::to_string(line_no) +
                                   ": label must be 0 or 1, got '" + cells[i] + "'");
        z = static_cast<int>(raw);
      } else {
        f.push_back(parse_double_cell(cells[i], line_no, path));
      }
    }
    features.push_back(std::move(f));
    labels.push_back(z);
  }
  if (features.empty())
    throw std::runtime_error(path + ": no data rows");
  return Pool(std::move(features), std::move(labels));
}

void save_csv_pool(const Pool& pool, const std::string& path) {
  std::ofstream out(path);
  if (!out)
    throw std::runtime_error("save_csv_pool: cannot open " + path + " for writing");
  for (std::size_t j = 0; j < pool.dim(); ++j) out << 'f' << j << ',';
  out << "z\n";
  char buf[32];
  for (std::size_t i = 0; i < pool.size(); ++i) {
    const auto f = pool.feature(i);
    for (std::size_t j = 0; j < pool.dim(); ++j) {
      // shortest round-trip representation keeps reload bit-identical
      auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), f[j]);
      out.write(buf, ptr - buf);
      out << ',';
    }
    out << pool.hidden_labels()[i] << '\n';
  }
  if (!out)
    throw std::runtime_error("save_csv_pool: write failed for " + path);
}

}  // namespace seqtest
