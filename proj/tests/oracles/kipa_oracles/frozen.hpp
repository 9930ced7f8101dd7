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

// Reference values computed once by stand-alone numpy/scipy scripts
// (complex Kronecker Hamiltonian, numpy.linalg.eigh, brentq root finding;
// dense-grid trapezoid for the overlap integral) and frozen here.

namespace kipa_oracle::frozen {

// Sx branches (|4,m> -> |5,m-1> etc.) crossing 7.2 GHz on [0, 0.37] T with
// |<Sx>| >= 0.2 at the crossing, ascending field (T).
inline constexpr double kCrossings72[] = {
    7.562886301e-03, 9.830107832e-03, 1.415297866e-02, 2.685297567e-02,
    1.333613867e-01, 2.526910085e-01, 3.636846804e-01,
};

// |4,-4> -> |5,-5> reaching 7.203 GHz (T).
inline constexpr double kResonantField7203 = 7.443117530e-03;
// Same transition at 6.78 mT: gradient (Hz/T) and |<Sx>|.
inline constexpr double kGradient678 = -2.506300746e+10;
inline constexpr double kElement678 = 0.473082807;

// |<5,m|Sz|4,m>| at 1 T for m = -4..4.
inline constexpr double kSz1T[] = {0.098391, 0.121646, 0.130514, 0.131666, 0.127578,
                                   0.119255, 0.106857, 0.089651, 0.064816};

}  // namespace kipa_oracle::frozen
