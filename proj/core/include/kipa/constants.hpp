// Copyright 2026 The kipa-esr Authors
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

#pragma once

#include <cmath>
#include <numbers>

namespace kipa {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

// SI exact (h, k_B) and CODATA 2018.
inline constexpr double kPlanck = 6.62607015e-34;
inline constexpr double kHbar = kPlanck / kTwoPi;
inline constexpr double kBoltzmann = 1.380649e-23;
inline constexpr double kMu0 = 1.25663706212e-6;
inline constexpr double kEps0 = 8.8541878128e-12;

inline constexpr double hz(double omega) { return omega / kTwoPi; }
inline constexpr double rad(double f_hz) { return f_hz * kTwoPi; }

inline double dbm_to_watts(double dbm) { return 1e-3 * std::pow(10.0, dbm / 10.0); }
inline double db_to_amplitude(double db) { return std::pow(10.0, db / 20.0); }
inline double db_to_power(double db) { return std::pow(10.0, db / 10.0); }

}  // namespace kipa
