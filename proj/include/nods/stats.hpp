/*
 * Copyright 2026 The nodsearch Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */


#pragma once

#include <span>

namespace nods {

struct MannWhitney {
  double u = 0.0;  // U statistic of the first sample
  double z = 0.0;
  double p_value = 1.0;
};

/// One-sided test of "x tends to be larger than y": normal approximation
/// with tie correction and continuity correction.
MannWhitney mann_whitney_greater(std::span<const double> x, std::span<const double> y);

double mean(std::span<const double> x);

}  // namespace nods
