// Copyright 2026 The placetune Authors.
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


#include "placetune/tuner/surrogate.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

namespace placetune::tuner {

std::size_t Surrogate::feature_count(std::size_t d) { return 1 + 2 * d + d * (d - 1) / 2; }

void Surrogate::features(const SearchSpace& space, const Configuration& c, std::vector<double>& out) {
  const std::size_t d = space.dimensions();
  out.clear();
  out.push_back(1.0);
  std::vector<double> x(d);
  for (std::size_t i = 0; i < d; ++i) {
    const std::size_t n = space.levels(i);
    x[i] = n > 1 ? static_cast<double>(c[i]) / static_cast<double>(n - 1) : 0.0;
    out.push_back(x[i]);
  }
  for (std::size_t i = 0; i < d; ++i) out.push_back(x[i] * x[i]);
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = i + 1; j < d; ++j) out.push_back(x[i] * x[j]);
  }
}

double Surrogate::predict(const Configuration& c) const {
  std::vector<double> f;
  features(*space_, c, f);
  double y = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) y += coef_[i] * f[i];
  return y;
}

namespace {

std::optional<Eigen::VectorXd> least_squares(const Eigen::MatrixXd& X, const Eigen::VectorXd& y) {
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);
  qr.setThreshold(1e-10);
  if (qr.rank() < X.cols()) return std::nullopt;
  return Eigen::VectorXd(qr.solve(y));
}

}  // namespace

std::optional<Surrogate> fit_and_validate(const std::vector<Observation>& obs, const SearchSpace& space,
                                          const SurrogateOptions& options) {
  const std::size_t n = obs.size();
  if (n < options.minSamples || n == 0) return std::nullopt;

  double cap = 0.0;
  bool anyFinite = false;
  for (const auto& o : obs) {
    if (std::isfinite(o.objective)) {
      cap = std::max(cap, std::abs(o.objective));
      anyFinite = true;
    }
  }
  if (!anyFinite) return std::nullopt;
  cap = cap > 0.0 ? 2.0 * cap : 1.0;

  const std::size_t p = Surrogate::feature_count(space.dimensions());
  Eigen::MatrixXd X(n, p);
  Eigen::VectorXd y(n);
  std::vector<double> f;
  for (std::size_t i = 0; i < n; ++i) {
    Surrogate::features(space, obs[i].config, f);
    for (std::size_t j = 0; j < p; ++j) X(i, j) = f[j];
    y(i) = std::isfinite(obs[i].objective) ? obs[i].objective : cap;
  }
  auto full = least_squares(X, y);
  if (!full) return std::nullopt;

  const std::size_t k = std::max<std::size_t>(2, options.folds);
  double sse = 0.0;
  for (std::size_t fold = 0; fold < k; ++fold) {
    std::vector<Eigen::Index> train, test;
    for (std::size_t i = 0; i < n; ++i) (i % k == fold ? test : train).push_back(static_cast<Eigen::Index>(i));
    if (test.empty()) continue;
    Eigen::MatrixXd Xt(train.size(), p);
    Eigen::VectorXd yt(train.size());
    for (std::size_t r = 0; r < train.size(); ++r) {
      Xt.row(r) = X.row(train[r]);
      yt(r) = y(train[r]);
    }
    auto beta = least_squares(Xt, yt);
    if (!beta) return std::nullopt;
    for (auto i : test) {
      double e = y(i) - X.row(i).dot(*beta);
      sse += e * e;
    }
  }
  const double mean = y.mean();
  const double sst = (y.array() - mean).square().sum();
  double r2;
  if (sst <= 0.0) {
    r2 = sse <= 1e-12 ? 1.0 : 0.0;
  } else {
    r2 = 1.0 - sse / sst;
  }
  if (r2 < options.threshold) return std::nullopt;

  Surrogate s;
  s.space_ = &space;
  s.coef_.assign(full->data(), full->data() + full->size());
  s.cvR2_ = r2;
  return s;
}

}  // namespace placetune::tuner
