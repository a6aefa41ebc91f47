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

// Reference values derived by hand, independent of the library code. Tests
// compare the simulator against these rather than against its own closed
// forms.

#ifndef SWAPSIM_TESTS_ORACLES_H
#define SWAPSIM_TESTS_ORACLES_H

#include <cmath>
#include <numbers>

namespace oracle {

// Weight of the k-pair sector of exp(sqrt(p/2) X)|0>, X = a_e^dag b_e^dag -
// a_l^dag b_l^dag. X^k|0> expands over j early pairs and k-j late pairs with
// coefficient C(k,j) j! (k-j)! (+/-), so ||X^k|0>||^2 = sum_j (k!)^2 = (k+1)(k!)^2
// and the sector weight is (p/2)^k (k+1).
inline double pair_sector_weight(double p, int k) {
    return (k + 1) * std::pow(p / 2, k);
}

// ||X^2 |0>||: components |2200>, |1111>, |0022> with amplitudes 2, -2, 2
// giving sqrt(4 + 4 + 4) = 2 sqrt3.
inline double two_pair_norm() {
    return 2 * std::sqrt(3.0);
}

// Binomial loss of n photons to m survivors.
inline double binomial_survival(int n, int m, double eta) {
    double c = 1;
    for (int i = 0; i < m; i++) {
        c = c * (n - i) / (i + 1);
    }
    return c * std::pow(eta, m) * std::pow(1 - eta, n - m);
}

// Two-level Rabi problem in {|1_b 1_c 0_k>, |0 0 1_k>}: -iH tau acts as
// g [[0, -1], [1, 0]] so the amplitudes are cos g and +/- sin g.
inline double rabi_stay(double g) {
    return std::cos(g);
}
inline double rabi_convert(double g) {
    return std::sin(g);
}

// Linear-optics swap, leading order: after the 50/50 mixers the
// delta_e/deltabar_l coincidence keeps a_e a_l (two pairs from AB), d_e d_l
// (two pairs from CD) and the swapped pair. From Eq.-(1) weights:
//   AB double pair: 3p^2/4 * |<...>|^2 -> p_ab^2/16
//   one pair each:  p_ab p_cd * 1/8
inline double linear_weight_aa(double p_ab) {
    return p_ab * p_ab / 16;
}
inline double linear_weight_dd(double p_cd) {
    return p_cd * p_cd / 16;
}
inline double linear_weight_signal(double p_ab, double p_cd) {
    return p_ab * p_cd / 8;
}

inline double sfg_success_leading(double eta_sfg, double p_ab, double p_cd) {
    return 0.5 * eta_sfg * p_ab * p_cd;
}

inline double sixphoton_fidelity(double p, double cos2, double eta) {
    const double s2 = 1 - cos2;
    const double q = 1 - eta * s2;
    return cos2 * cos2 / (q * q) * (1 - 13.0 / 4 * p * q * q);
}

inline double sixphoton_success(double p, double cos2, double eta) {
    const double s2 = 1 - cos2;
    const double q = 1 - eta * s2;
    return 0.25 * p * p * p * std::pow(eta, 4) * std::pow(s2, 4) * q * q * (1 + 13.0 / 4 * p * q * q);
}

// eta_hat [%/(W cm^2)] * delta_nu_hat [GHz cm] * h nu [J] * L [cm] / tbp, by
// hand in SI-compatible units (the cm^2 cancels against cm * cm).
inline double sfg_efficiency(double eta_hat_percent, double dnu_ghz_cm, double length_cm, double lambda_nm, double tbp) {
    const double h = 6.62607015e-34;
    const double c = 299792458.0;
    const double photon_energy = h * c / (lambda_nm * 1e-9);
    return (eta_hat_percent / 100) * (dnu_ghz_cm * 1e9) * photon_energy * length_cm / tbp;
}

inline double fiber(double km, double db_per_km) {
    return std::pow(10.0, -db_per_km * km / 10);
}

// Fig. 3 default link: 0.5 eta_sfg p^2 T eta_c^2 (eta_c eta_d) pulses per
// second, times 60.
inline double fig3_heralds_per_min() {
    const double T = fiber(10, 0.2);
    return 0.5 * 6e-7 * 0.037 * 0.037 * T * 0.81 * 0.72 * 10e9 * 60;
}

}  // namespace oracle

#endif
