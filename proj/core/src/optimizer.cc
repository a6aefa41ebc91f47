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

#include "swapsim/optimizer.h"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <thread>
#include <vector>

#include <fmt/format.h>

#include "swapsim/analytic.h"

namespace swapsim {

unsigned default_thread_count() {
    if (const char *env = std::getenv("SWAPSIM_THREADS")) {
        int n = std::atoi(env);
        if (n > 0) {
            return static_cast<unsigned>(n);
        }
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

namespace {

struct Candidate {
    double p;
    double s;
    double fidelity;
    double success;
    bool feasible;
};

Candidate evaluate(double p, double s, double eta, double f_min) {
    const double theta = std::asin(std::sqrt(std::clamp(s, 0.0, 1.0)));
    const double f = analytic::sixphoton_fidelity(p, theta, eta).value;
    const double success = analytic::sixphoton_success(p, theta, eta);
    return {p, s, f, success, f >= f_min};
}

// Evaluates a p-major grid, possibly across threads, into index order so the
// reduction is identical to a serial run.
std::vector<Candidate> evaluate_grid(
    const std::vector<double> &ps, const std::vector<double> &ss, double eta, double f_min, unsigned threads) {
    std::vector<Candidate> out(ps.size() * ss.size());
    auto work = [&](std::size_t begin, std::size_t end) {
        for (std::size_t idx = begin; idx < end; idx++) {
            out[idx] = evaluate(ps[idx / ss.size()], ss[idx % ss.size()], eta, f_min);
        }
    };
    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(out.size() / 256 + 1)));
    if (threads == 1) {
        work(0, out.size());
        return out;
    }
    std::vector<std::thread> pool;
    const std::size_t chunk = (out.size() + threads - 1) / threads;
    for (unsigned t = 0; t < threads; t++) {
        std::size_t begin = t * chunk;
        std::size_t end = std::min(out.size(), begin + chunk);
        if (begin < end) {
            pool.emplace_back(work, begin, end);
        }
    }
    for (auto &th : pool) {
        th.join();
    }
    return out;
}

// Strictly better objective wins; earlier (smaller p, then smaller s) wins ties.
const Candidate *best_of(const std::vector<Candidate> &grid) {
    const Candidate *best = nullptr;
    for (const auto &c : grid) {
        if (c.feasible && (best == nullptr || c.success > best->success)) {
            best = &c;
        }
    }
    return best;
}

std::vector<double> log_space(double lo, double hi, int n) {
    std::vector<double> v(n);
    for (int i = 0; i < n; i++) {
        v[i] = n == 1 ? lo : lo * std::pow(hi / lo, static_cast<double>(i) / (n - 1));
    }
    return v;
}

std::vector<double> lin_space(double lo, double hi, int n) {
    std::vector<double> v(n);
    for (int i = 0; i < n; i++) {
        v[i] = n == 1 ? lo : lo + (hi - lo) * i / (n - 1);
    }
    return v;
}

}  // namespace

OptimizationResult optimize_sixphoton(double eta, double f_min, const SixPhotonSearch &search) {
    if (!(eta > 0 && eta <= 1)) {
        throw std::invalid_argument(fmt::format("eta must be in (0, 1], got {}", eta));
    }
    if (!(f_min >= 0 && f_min < 1)) {
        throw std::invalid_argument(fmt::format("F_min must be in [0, 1), got {}", f_min));
    }
    if (!(search.p_min > 0 && search.p_min < search.p_max && search.p_max < 1)) {
        throw std::invalid_argument("search needs 0 < p_min < p_max < 1");
    }
    if (search.p_points < 2 || search.s_points < 1 || search.refine_points < 3) {
        throw std::invalid_argument("search grid is too small");
    }
    const unsigned threads = search.threads > 0 ? search.threads : default_thread_count();

    OptimizationResult result;
    result.p_min = search.p_min;
    result.p_max = search.p_max;

    std::vector<double> ps = log_space(search.p_min, search.p_max, search.p_points);
    std::vector<double> ss(search.s_points);
    for (int j = 0; j < search.s_points; j++) {
        ss[j] = static_cast<double>(j + 1) / (search.s_points + 1);
    }
    std::vector<Candidate> grid = evaluate_grid(ps, ss, eta, f_min, threads);
    result.evaluations += grid.size();
    const Candidate *seed = best_of(grid);
    if (seed == nullptr) {
        return result;
    }
    Candidate best = *seed;

    // Success grows with p at fixed theta and fidelity falls, so the optimum
    // lies on the constraint boundary. Refine along that ridge in sin^2(theta).
    auto ridge_point = [&](double s) {
        Candidate top = evaluate(search.p_max, s, eta, f_min);
        result.evaluations++;
        if (top.feasible) {
            return top;
        }
        double lo = search.p_min;
        double hi = search.p_max;
        if (!evaluate(lo, s, eta, f_min).feasible) {
            return Candidate{lo, s, 0, 0, false};
        }
        for (int k = 0; k < 200 && (hi - lo) > 1e-14 * hi; k++) {
            double mid = 0.5 * (lo + hi);
            (evaluate(mid, s, eta, f_min).feasible ? lo : hi) = mid;
            result.evaluations++;
        }
        return evaluate(lo, s, eta, f_min);
    };

    const double s_ceiling = 1.0;
    const double s_floor = 1e-12;
    best = std::max(best, ridge_point(best.s), [](const Candidate &a, const Candidate &b) {
        return a.success < b.success;
    });
    double s_half = 1.0 / (search.s_points + 1);
    for (int round = 0; round < search.max_refinements; round++) {
        const double previous = best.success;
        const double s_lo = std::max(s_floor, best.s - s_half);
        const double s_hi = std::min(s_ceiling, best.s + s_half);
        result.refinement_steps++;
        for (double s : lin_space(s_lo, s_hi, search.refine_points)) {
            Candidate c = ridge_point(s);
            if (c.feasible && c.success > best.success) {
                best = c;
            }
        }
        s_half *= 2.0 / (search.refine_points - 1);
        const bool converged = best.success - previous <= search.relative_tolerance * 1e-3 * best.success;
        if (converged && s_half < search.relative_tolerance * 1e-3) {
            break;
        }
    }

    result.feasible = true;
    result.p = best.p;
    result.sin2_theta = best.s;
    result.cos2_theta = 1 - best.s;
    result.theta = std::asin(std::sqrt(best.s));
    result.fidelity = best.fidelity;
    result.success = best.success;
    result.boundary_active = best.p >= search.p_max * (1 - 1e-9) || best.p <= search.p_min * (1 + 1e-9) ||
                             best.s >= s_ceiling - 1e-6 || best.s <= 1.0 / (search.s_points + 1) * 1e-3;
    return result;
}

RequiredEfficiency required_sfg_efficiency(double p_target, double f_min, double eta_c, double eta_d) {
    if (!(p_target >= 0)) {
        throw std::invalid_argument("target probability must be non-negative");
    }
    if (!(f_min > 0 && f_min < 1)) {
        throw std::invalid_argument(fmt::format("F_min must be in (0, 1), got {}", f_min));
    }
    if (!(eta_c > 0 && eta_c <= 1) || !(eta_d > 0 && eta_d <= 1)) {
        throw std::invalid_argument("efficiencies must be in (0, 1]");
    }
    RequiredEfficiency r;
    r.p = (1 - f_min) / 3;
    const double eta = eta_c * eta_d;
    const double per_unit_efficiency = 0.5 * eta_c * eta_c * eta * r.p * r.p * (1 + 3 * r.p);
    r.eta_sfg_min = p_target / per_unit_efficiency;
    return r;
}

void LinkScenario::validate() const {
    auto check = [](bool ok, const char *what) {
        if (!ok) {
            throw std::invalid_argument(what);
        }
    };
    check(distance_km >= 0, "distance_km must be non-negative");
    check(attenuation_db_per_km >= 0, "attenuation must be non-negative");
    check(repetition_rate_hz >= 0, "repetition rate must be non-negative");
    check(eta_c > 0 && eta_c <= 1, "eta_c must be in (0, 1]");
    check(eta_d > 0 && eta_d <= 1, "eta_d must be in (0, 1]");
    check(eta_sfg >= 0 && eta_sfg <= 1, "eta_sfg must be in [0, 1]");
    check(p_ab > 0 && p_ab < 1, "p_ab must be in (0, 1)");
    check(p_cd > 0 && p_cd < 1, "p_cd must be in (0, 1)");
}

DiqkdRate diqkd_rate(const LinkScenario &s) {
    s.validate();
    DiqkdRate rate;
    rate.transmission = analytic::fiber_transmission(s.distance_km, s.attenuation_db_per_km);
    // B travels the fiber; B and C couple into the crystal; K is detected.
    rate.heralds_per_pulse = 0.5 * s.eta_sfg * s.p_ab * s.p_cd * rate.transmission * s.eta_c * s.eta_c * (s.eta_c * s.eta_d);
    if (s.include_alice_detection) {
        rate.heralds_per_pulse *= s.eta_c * s.eta_d;
    }
    rate.heralds_per_min = rate.heralds_per_pulse * s.repetition_rate_hz * 60.0;
    if (s.key_fraction) {
        HeraldQuality quality{1 - 1.5 * (s.p_ab + s.p_cd), rate.heralds_per_pulse};
        rate.key_fraction = std::max(0.0, s.key_fraction(quality));
        rate.bits_per_min = *rate.key_fraction * rate.heralds_per_min;
    }
    return rate;
}

KeyFractionModel constant_key_fraction(double bits_per_herald) {
    if (!(bits_per_herald >= 0 && bits_per_herald <= 1)) {
        throw std::invalid_argument(fmt::format("key fraction must be in [0, 1], got {}", bits_per_herald));
    }
    return [bits_per_herald](const HeraldQuality &) {
        return bits_per_herald;
    };
}

KeyFractionModel chsh_werner_key_fraction() {
    return [](const HeraldQuality &q) {
        auto h = [](double x) {
            if (x <= 0 || x >= 1) {
                return 0.0;
            }
            return -x * std::log2(x) - (1 - x) * std::log2(1 - x);
        };
        const double visibility = std::clamp((4 * q.fidelity - 1) / 3, 0.0, 1.0);
        const double chsh = 2 * std::sqrt(2.0) * visibility;
        if (chsh <= 2) {
            return 0.0;
        }
        const double qber = (1 - visibility) / 2;
        const double r = 1 - h(qber) - h((1 + std::sqrt(chsh * chsh / 4 - 1)) / 2);
        return std::max(0.0, r);
    };
}

}  // namespace swapsim
