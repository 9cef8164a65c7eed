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

#ifndef DREAMSCHED_TEXT_FORMAT_HPP_
#define DREAMSCHED_TEXT_FORMAT_HPP_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace dreamsched {

// Shortest decimal string that round-trips to the same double. Whole
// values keep one fractional digit ("9.0", not "9") so report lines stay
// visually typed as reals.
std::string format_real(double value);

// Parses a non-negative integer field; throws ParseError naming `what` on
// junk, sign, or overflow.
std::uint64_t parse_u64_field(std::string_view text, std::string_view what);

// Parses a finite double field; throws ParseError naming `what`.
double parse_real_field(std::string_view text, std::string_view what);

std::vector<std::string_view> split(std::string_view line, char sep);

std::string_view trim(std::string_view text);

}  // namespace dreamsched

#endif  // DREAMSCHED_TEXT_FORMAT_HPP_
