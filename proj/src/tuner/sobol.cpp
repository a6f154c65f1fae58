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


#include "placetune/tuner/sobol.hpp"

#include <bit>
#include <stdexcept>

namespace placetune::tuner {

namespace {

// Primitive polynomials (interior coefficients with the trailing one) and
// initial direction numbers for the first dimensions.
constexpr std::uint32_t kPoly[SobolSequence::kMaxDimensions] = {
    1, 3, 7, 11, 13, 19, 25, 37, 41, 47, 55, 59, 61, 67, 91, 97, 103, 109, 115, 131, 137};

const std::vector<std::uint32_t> kInit[SobolSequence::kMaxDimensions] = {
    {1},           {1},           {1, 3},           {1, 3, 1},        {1, 1, 1},         {1, 1, 3, 3},
    {1, 3, 5, 13}, {1, 1, 5, 5, 17}, {1, 1, 5, 5, 5}, {1, 1, 7, 11, 19}, {1, 1, 5, 1, 1},  {1, 1, 1, 3, 11},
    {1, 3, 5, 5, 31}, {1, 3, 3, 9, 7, 49}, {1, 1, 1, 15, 21, 21}, {1, 3, 1, 13, 27, 49}, {1, 1, 1, 15, 7, 5},
    {1, 3, 1, 15, 13, 25}, {1, 1, 5, 5, 19, 61}, {1, 3, 7, 11, 23, 15, 103}, {1, 3, 7, 13, 13, 15, 69}};

}  // namespace

SobolSequence::SobolSequence(std::size_t dimensions) : dims_(dimensions) {
  if (dimensions > kMaxDimensions) throw std::invalid_argument("Sobol sequence supports at most 21 dimensions");
  directions_.assign(dims_, std::vector<std::uint32_t>(kBits, 0));
  for (std::size_t d = 0; d < dims_; ++d) {
    auto& v = directions_[d];
    if (d == 0) {
      for (int j = 0; j < kBits; ++j) v[j] = 1;
    } else {
      const std::uint32_t p = kPoly[d];
      const int m = std::bit_width(p) - 1;
      for (int j = 0; j < m; ++j) v[j] = kInit[d][j];
      for (int j = m; j < kBits; ++j) {
        std::uint32_t next = v[j - m];
        std::uint32_t pow2 = 1;
        for (int k = 0; k < m; ++k) {
          pow2 <<= 1;
          if ((p >> (m - 1 - k)) & 1U) next ^= pow2 * v[j - k - 1];
        }
        v[j] = next;
      }
    }
    for (int j = 0; j < kBits; ++j) v[j] <<= (kBits - 1 - j);
  }
}

std::vector<double> SobolSequence::point(std::uint64_t index) const {
  const std::uint64_t gray = index ^ (index >> 1);
  std::vector<double> out(dims_, 0.0);
  for (std::size_t d = 0; d < dims_; ++d) {
    std::uint32_t x = 0;
    for (int j = 0; j < kBits; ++j) {
      if ((gray >> j) & 1U) x ^= directions_[d][j];
    }
    out[d] = static_cast<double>(x) / static_cast<double>(1U << kBits);
  }
  return out;
}

}  // namespace placetune::tuner
