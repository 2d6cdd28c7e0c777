#include "dapd/libsvm.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>
#include <utility>
#include <vector>

#include "dapd/errors.hpp"

namespace dapd {

namespace {

double parse_double(const std::string& token, std::size_t line, const char* what) {
  // std::from_chars for double is unavailable on some toolchains; strtod
  // with a full-consumption check is equivalent here.
  char* end = nullptr;
  const double v = std::strtod(token.c_str(), &end);
  if (token.empty() || end != token.c_str() + token.size() || !std::isfinite(v))
    throw ParseError(std::string("malformed ") + what + " '" + token + "'", line);
  return v;
}

std::size_t parse_index(const std::string& token, std::size_t line) {
  std::size_t idx = 0;
  const auto* first = token.data();
  const auto* last = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(first, last, idx);
  if (token.empty() || ec != std::errc() || ptr != last || idx == 0)
    throw ParseError("malformed feature index '" + token + "'", line);
  return idx;
}

}  // namespace

Dataset parse_libsvm(std::istream& in) {
  std::vector<double> labels;
  std::vector<std::vector<std::pair<std::size_t, double>>> rows;
  std::size_t max_index = 0;
  std::string text;
  std::size_t line = 0;
  while (std::getline(in, text)) {
    ++line;
    if (!text.empty() && text.back() == '\r') text.pop_back();
    std::istringstream tokens(text);
    std::string label;
    if (!(tokens >> label)) continue;
    labels.push_back(parse_double(label, line, "label") > 0.0 ? 1.0 : -1.0);
    auto& row = rows.emplace_back();
    std::string item;
    while (tokens >> item) {
      const auto colon = item.find(':');
      if (colon == std::string::npos) throw ParseError("expected idx:value, got '" + item + "'", line);
      const std::size_t idx = parse_index(item.substr(0, colon), line);
      const double val = parse_double(item.substr(colon + 1), line, "feature value");
      row.emplace_back(idx, val);
      max_index = std::max(max_index, idx);
    }
  }
  if (labels.empty()) throw ParseError("no samples in libsvm input");

  Dataset out;
  out.max_index = max_index;
  out.labels = Eigen::Map<const Vector>(labels.data(), static_cast<Eigen::Index>(labels.size()));
  out.features = Matrix::Zero(static_cast<Eigen::Index>(rows.size()),
                              static_cast<Eigen::Index>(max_index));
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (auto [idx, val] : rows[r]) out.features(r, idx - 1) = val;
  return out;
}

Dataset parse_libsvm(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open libsvm file '" + path.string() + "'");
  return parse_libsvm(in);
}

LossFamily partition_logistic(const Dataset& data, std::size_t m, std::size_t samples_per_agent,
                              std::uint64_t seed) {
  if (m == 0 || samples_per_agent == 0)
    throw ParameterError("agent count and samples per agent must be positive");
  if (m * samples_per_agent > data.samples()) {
    std::ostringstream msg;
    msg << "need " << m * samples_per_agent << " samples, dataset has " << data.samples();
    throw ParameterError(msg.str());
  }
  std::vector<Eigen::Index> order(data.samples());
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);

  const auto h = static_cast<Eigen::Index>(samples_per_agent);
  std::vector<std::shared_ptr<const Loss>> losses;
  losses.reserve(m);
  for (std::size_t i = 0; i < m; ++i) {
    Matrix a(h, data.features.cols());
    Vector b(h);
    for (Eigen::Index j = 0; j < h; ++j) {
      const Eigen::Index src = order[i * samples_per_agent + static_cast<std::size_t>(j)];
      a.row(j) = data.features.row(src);
      b(j) = data.labels(src);
    }
    losses.push_back(std::make_shared<LogisticLoss>(std::move(a), std::move(b)));
  }
  return LossFamily(std::move(losses));
}

Dataset generate_logistic_dataset(std::size_t samples, std::size_t features, double density,
                                  std::uint64_t seed) {
  if (samples == 0 || features == 0) throw ParameterError("dataset shape must be positive");
  if (!(density > 0.0 && density <= 1.0)) throw ParameterError("density must lie in (0, 1]");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::bernoulli_distribution active(density);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  Vector truth(static_cast<Eigen::Index>(features));
  for (Eigen::Index k = 0; k < truth.size(); ++k) truth(k) = normal(rng);

  Dataset out;
  out.max_index = features;
  out.features = Matrix::Zero(static_cast<Eigen::Index>(samples), truth.size());
  out.labels.resize(static_cast<Eigen::Index>(samples));
  for (Eigen::Index r = 0; r < out.features.rows(); ++r) {
    for (Eigen::Index k = 0; k < truth.size(); ++k)
      if (active(rng)) out.features(r, k) = 1.0;
    const double p = 1.0 / (1.0 + std::exp(-out.features.row(r).dot(truth)));
    out.labels(r) = unit(rng) < p ? 1.0 : -1.0;
  }
  return out;
}

}  // namespace dapd
