/* Copyright 2026 The ionphoton Authors. All Rights Reserved.
Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at
    http://www.apache.org/licenses/LICENSE-2.0
Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#pragma once

#include <doctest.h>

#include <cmath>

namespace testing {

// Purely relative comparison; doctest's default Approx adds an absolute
// slack of epsilon, which is useless for metre- or second-sized values.
inline doctest::Approx approx(double value, double rel_tol) {
  return doctest::Approx(value).epsilon(rel_tol).scale(0.0);
}

inline double rel_err(double a, double b) { return std::abs(a - b) / std::abs(b); }

}  // namespace testing
