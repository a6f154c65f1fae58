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


#ifndef PLACETUNE_TUNER_SOBOL_HPP
#define PLACETUNE_TUNER_SOBOL_HPP

#include <cstddef>
#include <cstdint>
#include <vector>

namespace placetune::tuner {

/// Gray-code ordered Sobol points with Joe-Kuo direction numbers, 30 bits.
class SobolSequence {
 public:
  static constexpr std::size_t kMaxDimensions = 21;
  static constexpr int kBits = 30;

  /// Throws std::invalid_argument beyond kMaxDimensions.
  explicit SobolSequence(std::size_t dimensions);

  std::size_t dimensions() const { return dims_; }

  /// Point `index` of the sequence; index 0 is the origin.
  std::vector<double> point(std::uint64_t index) const;

 private:
  std::size_t dims_;
  std::vector<std::vector<std::uint32_t>> directions_;
};

}  // namespace placetune::tuner

#endif  // PLACETUNE_TUNER_SOBOL_HPP
