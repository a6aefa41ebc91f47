// Copyright 2026 The swapsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SWAPSIM_SRC_COMBINATORICS_H
#define SWAPSIM_SRC_COMBINATORICS_H

#include <complex>

namespace swapsim {

inline double factorial(int n) {
    double result = 1;
    for (int k = 2; k <= n; k++) {
        result *= k;
    }
    return result;
}

inline double binomial(int n, int k) {
    if (k < 0 || k > n) {
        return 0;
    }
    double result = 1;
    for (int j = 1; j <= k; j++) {
        result = result * (n - k + j) / j;
    }
    return result;
}

// std::pow on complex values goes through log, which is wrong for 0^0.
inline std::complex<double> int_pow(std::complex<double> base, int exponent) {
    std::complex<double> result = 1;
    for (int k = 0; k < exponent; k++) {
        result *= base;
    }
    return result;
}

}  // namespace swapsim

#endif
