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

#include <stdexcept>
#include <string>

namespace nods {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define NODS_DEFINE_ERROR(Name)             \
  class Name : public Error {               \
   public:                                  \
    using Error::Error;                     \
  }

// sample_point() on a zero-area region.
NODS_DEFINE_ERROR(EmptyRegion);
// Malformed scenario, map, observation or config document.
NODS_DEFINE_ERROR(SchemaError);
// Well-formed document that breaks a domain invariant.
NODS_DEFINE_ERROR(InvariantError);
NODS_DEFINE_ERROR(ConfigError);
// The reference planner found no lattice path to the goal.
NODS_DEFINE_ERROR(NoRoute);
// mutate_add() refused: the added-participant cap is reached.
NODS_DEFINE_ERROR(Saturated);
NODS_DEFINE_ERROR(SeedRejected);
NODS_DEFINE_ERROR(UnknownStrategy);
// Jaccard similarity of two empty cell sets.
NODS_DEFINE_ERROR(BothEmpty);
NODS_DEFINE_ERROR(IoError);

#undef NODS_DEFINE_ERROR

}  // namespace nods
