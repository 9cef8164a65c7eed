// Copyright 2026 The DreamSched Authors
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

#include "dreamsched/schedule.hpp"

#include <doctest.h>

#include <random>
#include <sstream>

#include "dreamsched/errors.hpp"
#include "instance_gen.hpp"

namespace {

using namespace dreamsched;

TEST_CASE("validate accepts contiguous descending partitions") {
  Schedule schedule;
  schedule.period = 3;
  schedule.sets = {{5, 4}, {3}, {2, 1}};
  CHECK_NOTHROW(schedule.validate(5));
  CHECK(schedule.set_of_layer(3) == 2);
  CHECK(schedule.layer_count() == 5);
}

TEST_CASE("validate rejects broken shapes") {
  Schedule schedule;
  schedule.period = 2;

  schedule.sets = {{3, 1}, {2}};  // not contiguous
  CHECK_THROWS_AS(schedule.validate(3), ValidationError);

  schedule.sets = {{}, {3, 2, 1}};  // leading empty
  CHECK_THROWS_AS(schedule.validate(3), ValidationError);

  schedule.sets = {{3, 2}, {}};  // missing layer 1
  CHECK_THROWS_AS(schedule.validate(3), ValidationError);

  schedule.sets = {{3}, {2, 1}};
  schedule.supplemental = {{}, {2}};  // fill not a prefix {L,...,l}
  CHECK_THROWS_AS(schedule.validate(3), ValidationError);

  schedule.supplemental = {{3}, {}};  // fill overlaps its own set
  CHECK_THROWS_AS(schedule.validate(3), ValidationError);

  schedule.supplemental = {{}, {3}};
  CHECK_NOTHROW(schedule.validate(3));
}

TEST_CASE("equal_number_partition splits the descending sequence evenly") {
  const auto schedule = Schedule::equal_number_partition(6, 3);
  CHECK(schedule.sets[0] == std::vector<int>{6, 5});
  CHECK(schedule.sets[1] == std::vector<int>{4, 3});
  CHECK(schedule.sets[2] == std::vector<int>{2, 1});
  const auto uneven = Schedule::equal_number_partition(7, 3);
  CHECK(uneven.sets[0] == std::vector<int>{7, 6, 5});
  CHECK(uneven.sets[1] == std::vector<int>{4, 3});
  CHECK(uneven.sets[2] == std::vector<int>{2, 1});
  CHECK_THROWS_AS(Schedule::equal_number_partition(3, 4), ArgumentError);
}

TEST_CASE("schedule file round-trips bit-exactly") {
  std::mt19937_64 rng(61);
  for (int trial = 0; trial < 50; ++trial) {
    const int layers = 1 + static_cast<int>(rng() % 16);
    const int period =
        1 + static_cast<int>(rng() % static_cast<std::uint64_t>(std::min(layers, 5)));
    auto schedule = testing::random_partition(layers, period, rng);
    testing::add_random_fills(schedule, rng);
    std::stringstream first;
    write_schedule(schedule, first);
    const Schedule loaded = parse_schedule(first, "mem");
    std::stringstream second;
    write_schedule(loaded, second);
    CHECK(first.str() == second.str());
    CHECK(loaded.sets == schedule.sets);
    CHECK(loaded.supplemental == schedule.supplemental);
  }
}

TEST_CASE("schedule parser rejects malformed input") {
  std::stringstream bad_header{"nope\nH=1 L=1\nh=1: sync=[1] fill=[]\n"};
  CHECK_THROWS_AS(parse_schedule(bad_header, "mem"), ParseError);
  std::stringstream missing_row{"dreamsched-schedule v1\nH=2 L=3\nh=1: sync=[3,2,1] fill=[]\n"};
  CHECK_THROWS_AS(parse_schedule(missing_row, "mem"), ParseError);
  std::stringstream bad_cover{
      "dreamsched-schedule v1\nH=2 L=3\nh=1: sync=[3] fill=[]\nh=2: sync=[1] fill=[]\n"};
  CHECK_THROWS_AS(parse_schedule(bad_cover, "mem"), ValidationError);
}

}  // namespace
