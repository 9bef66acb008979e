// Copyright 2026 The dgsum Authors
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

#include <doctest.h>

#include <sstream>

#include "dgsum/checkpoint.hpp"
#include "dgsum/training.hpp"
#include "fixtures.hpp"

using namespace dgsum;

namespace {

template <typename S>
std::string bytes_of(const Model<S>& m) {
  std::ostringstream out(std::ios::binary);
  write_checkpoint(out, m);
  return out.str();
}

}  // namespace

TEST_CASE("checkpoint round-trips bytewise") {
  const auto model = testing::tiny_model<double>(1);
  const auto first = bytes_of(model);
  std::istringstream in(first, std::ios::binary);
  const auto loaded = read_checkpoint<double>(in);
  CHECK(bytes_of(loaded) == first);
  CHECK(loaded.config == model.config);
  CHECK(loaded.vocab == model.vocab);
  CHECK(loaded.speakers == model.speakers);
  const auto m = testing::gradient_meeting();
  CHECK(compute_loss(loaded, m) == compute_loss(model, m));
}

TEST_CASE("single-precision checkpoints round-trip too") {
  const auto model = testing::tiny_model<float>(2);
  const auto first = bytes_of(model);
  std::istringstream in(first, std::ios::binary);
  CHECK(bytes_of(read_checkpoint<float>(in)) == first);
  std::istringstream again(first, std::ios::binary);
  const auto widened = read_checkpoint<double>(again);
  CHECK(widened.params.output_weight.value(1, 1) ==
        static_cast<double>(model.params.output_weight.value(1, 1)));
}

TEST_CASE("corrupt checkpoints are rejected") {
  const auto good = bytes_of(testing::tiny_model<double>(3));
  SUBCASE("bad magic") {
    std::istringstream in("NOTACKPT" + good.substr(8), std::ios::binary);
    CHECK_THROWS_AS(read_checkpoint<double>(in), ParseError);
  }
  SUBCASE("truncated") {
    std::istringstream in(good.substr(0, good.size() - 5), std::ios::binary);
    CHECK_THROWS_AS(read_checkpoint<double>(in), ParseError);
  }
  SUBCASE("wrong version") {
    auto bad = good;
    bad[8] = 9;
    std::istringstream in(bad, std::ios::binary);
    CHECK_THROWS_AS(read_checkpoint<double>(in), ParseError);
  }
}
