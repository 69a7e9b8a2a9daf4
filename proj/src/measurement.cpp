// Copyright 2026 The kdq developers
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

#include "kdq/measurement.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

namespace kdq {

namespace {

constexpr double kPostselectFloor = 1e-12;

// Substream tags keep the schemes' draws disjoint per (entry, estimator).
constexpr std::uint64_t kTagJohansen = 0x4A4F48ULL;
constexpr std::uint64_t kTagWeakPointer = 0x57504FULL;
constexpr std::uint64_t kTagWeakMultinomial = 0x574D4EULL;

void check_triple(int d1, int d2, int d3) {
    if (d1 != d2 || d1 != d3) {
        throw DimensionMismatch("state and bases must share one dimension");
    }
}

void check_index(int idx, int d, const char *what) {
    if (idx < 0 || idx >= d) {
        throw DimensionMismatch(std::string(what) + " index " + std::to_string(idx) +
                                " out of range for dimension " + std::to_string(d));
    }
}

/// Binomial(n, p) count. Small batches are summed draw by draw; large
/// well-conditioned batches sample the count through its normal limit
/// (continuity-corrected, clamped), which is indistinguishable at the
/// accuracy the estimators are consumed at.
long long binomial_count(Rng &rng, long long n, double p) {
    p = std::clamp(p, 0.0, 1.0);
    if (p <= 0.0) {
        return 0;
    }
    if (p >= 1.0) {
        return n;
    }
    const double npq = static_cast<double>(n) * p * (1.0 - p);
    if (n <= 4096 || npq < 100.0) {
        long long count = 0;
        for (long long i = 0; i < n; ++i) {
            count += (rng.next_double() < p) ? 1 : 0;
        }
        return count;
    }
    const double mean = static_cast<double>(n) * p;
    const double raw = std::round(mean + std::sqrt(npq) * rng.next_gaussian());
    return static_cast<long long>(std::clamp(raw, 0.0, static_cast<double>(n)));
}

double bernoulli_mean(Rng &rng, long long n, double p) {
    return static_cast<double>(binomial_count(rng, n, p)) / static_cast<double>(n);
}

/// Exact multinomial via conditional binomials.
std::vector<long long> multinomial_draw(Rng &rng, long long n, const std::vector<double> &probs) {
    std::vector<long long> counts(probs.size(), 0);
    long long remaining = n;
    double prob_left = 1.0;
    for (std::size_t k = 0; k + 1 < probs.size() && remaining > 0; ++k) {
        const double p = std::clamp(probs[k], 0.0, 1.0);
        const double cond = (prob_left > 1e-15) ? std::clamp(p / prob_left, 0.0, 1.0) : 0.0;
        const long long c = binomial_count(rng, remaining, cond);
        counts[k] = c;
        remaining -= c;
        prob_left -= p;
    }
    if (!counts.empty()) {
        counts.back() += remaining;
    }
    return counts;
}

} // namespace

void ShotConfig::validate() const {
    if (shots < 1) {
        throw ValidationError("BadShotConfig", "shots must be at least 1, got " +
                                                   std::to_string(shots));
    }
    if (!(pointer_noise_sigma >= 0.0)) {
        throw ValidationError("BadShotConfig", "pointer_noise_sigma must be nonnegative");
    }
}

DensityMatrix measured_state(const DensityMatrix &state, int a_index, const OrthonormalBasis &basis) {
    if (state.dim() != basis.dim()) {
        throw DimensionMismatch("state and basis must share one dimension");
    }
    check_index(a_index, basis.dim(), "projector");
    const ComplexMatrix pi = basis.projector(a_index);
    const ComplexMatrix q = ComplexMatrix::Identity(state.dim(), state.dim()) - pi;
    ComplexMatrix out = pi * state.matrix() * pi + q * state.matrix() * q;
    out = Complex(0.5, 0.0) * (out + ComplexMatrix(out.adjoint()));
    return DensityMatrix(out);
}

ComplexMatrix rotated_projector(int b_index, int a_index, const OrthonormalBasis &basis_a,
                                const OrthonormalBasis &basis_b) {
    if (basis_a.dim() != basis_b.dim()) {
        throw DimensionMismatch("bases must share one dimension");
    }
    check_index(a_index, basis_a.dim(), "first-basis");
    check_index(b_index, basis_b.dim(), "second-basis");
    const int d = basis_a.dim();
    const ComplexMatrix rot =
        ComplexMatrix::Identity(d, d) + (Complex(0.0, 1.0) - 1.0) * basis_a.projector(a_index);
    return rot * basis_b.projector(b_index) * rot.adjoint();
}

Eigen::MatrixXd johansen_im_kd(const DensityMatrix &state, const OrthonormalBasis &basis_a,
                               const OrthonormalBasis &basis_b, bool exact, const ShotConfig &cfg) {
    check_triple(state.dim(), basis_a.dim(), basis_b.dim());
    if (!exact) {
        cfg.validate();
    }
    const int d = state.dim();
    Eigen::MatrixXd out(d, d);
    for (int a = 0; a < d; ++a) {
        const DensityMatrix rho_a = measured_state(state, a, basis_a);
        for (int b = 0; b < d; ++b) {
            const ComplexMatrix proj = rotated_projector(b, a, basis_a, basis_b);
            const double p_rho = (state.matrix() * proj).trace().real();
            const double p_rho_a = (rho_a.matrix() * proj).trace().real();
            if (exact) {
                out(a, b) = 0.5 * (p_rho - p_rho_a);
            } else {
                const std::uint64_t key = static_cast<std::uint64_t>(a * d + b);
                Rng rng1 = Rng::substream(cfg.seed, kTagJohansen ^ (2 * key));
                Rng rng2 = Rng::substream(cfg.seed, kTagJohansen ^ (2 * key + 1));
                out(a, b) = 0.5 * (bernoulli_mean(rng1, cfg.shots, p_rho) -
                                   bernoulli_mean(rng2, cfg.shots, p_rho_a));
            }
        }
    }
    return out;
}

WeakValueRecord weak_value(const DensityMatrix &state, int a_index, const OrthonormalBasis &basis_a,
                           const ComplexVector &b_ket, int b_index) {
    if (state.dim() != basis_a.dim() || state.dim() != b_ket.size()) {
        throw DimensionMismatch("state, basis and postselection ket must share one dimension");
    }
    check_index(a_index, basis_a.dim(), "projector");
    if (std::abs(b_ket.norm() - 1.0) > 1e-8) {
        throw ValidationError("NotNormalized", "postselection ket norm " +
                                                   std::to_string(b_ket.norm()) + " is not 1");
    }
    const double prob = (b_ket.adjoint() * state.matrix() * b_ket)(0, 0).real();
    if (prob <= kPostselectFloor) {
        throw ZeroPostselection("postselection probability " + std::to_string(prob) +
                                " <= 1e-12; weak value undefined");
    }
    const Complex numer = (b_ket.adjoint() * basis_a.projector(a_index) * state.matrix() * b_ket)(0, 0);
    const Complex w = numer / prob;
    const bool anomalous =
        std::abs(w.imag()) > 1e-12 || w.real() < -1e-12 || w.real() > 1.0 + 1e-12;
    return WeakValueRecord{a_index, b_index, w, std::clamp(prob, 0.0, 1.0), anomalous};
}

Eigen::MatrixXd weak_im_kd(const DensityMatrix &state, const OrthonormalBasis &basis_a,
                           const OrthonormalBasis &basis_b, bool exact, const ShotConfig &cfg) {
    check_triple(state.dim(), basis_a.dim(), basis_b.dim());
    if (!exact) {
        cfg.validate();
    }
    const int d = state.dim();
    const ComplexMatrix s = basis_a.kets().adjoint() * basis_b.kets();
    const ComplexMatrix t = basis_a.kets().adjoint() * state.matrix() * basis_b.kets();

    std::vector<double> probs(static_cast<std::size_t>(d));
    for (int b = 0; b < d; ++b) {
        probs[static_cast<std::size_t>(b)] = std::clamp(
            (basis_b.ket(b).adjoint() * state.matrix() * basis_b.ket(b))(0, 0).real(), 0.0, 1.0);
    }

    std::vector<double> prob_hat(probs);
    if (!exact) {
        Rng rng = Rng::substream(cfg.seed, kTagWeakMultinomial);
        const std::vector<long long> counts = multinomial_draw(rng, cfg.shots, probs);
        for (int b = 0; b < d; ++b) {
            prob_hat[static_cast<std::size_t>(b)] =
                static_cast<double>(counts[static_cast<std::size_t>(b)]) /
                static_cast<double>(cfg.shots);
        }
    }

    Eigen::MatrixXd out(d, d);
    for (int a = 0; a < d; ++a) {
        for (int b = 0; b < d; ++b) {
            const double im_numer = (std::conj(s(a, b)) * t(a, b)).imag(); // Im <b|Pi_a rho|b>
            const double p = probs[static_cast<std::size_t>(b)];
            // Vanishing postselection: rho|b> = 0 for PSD rho, so the
            // direct value is the (zero) limit of Im{w} Pr(b).
            const double im_weak = (p > kPostselectFloor) ? im_numer / p : 0.0;
            if (exact) {
                out(a, b) = (p > kPostselectFloor) ? im_weak * p : im_numer;
            } else {
                Rng rng = Rng::substream(cfg.seed,
                                         kTagWeakPointer ^ static_cast<std::uint64_t>(a * d + b));
                const double pointer_mean =
                    im_weak + cfg.pointer_noise_sigma / std::sqrt(static_cast<double>(cfg.shots)) *
                                  rng.next_gaussian();
                out(a, b) = pointer_mean * prob_hat[static_cast<std::size_t>(b)];
            }
        }
    }
    return out;
}

CoherenceResult estimate_kd_coherence(const DensityMatrix &state, const OrthonormalBasis &basis_a,
                                      Scheme scheme, bool exact, const ShotConfig &shot_cfg,
                                      const OptimizerConfig &opt_cfg) {
    if (state.dim() != basis_a.dim()) {
        throw DimensionMismatch("state and basis must share one dimension");
    }
    if (!exact) {
        shot_cfg.validate();
    }
    const int d = state.dim();

    // Each sampled evaluation draws fresh shot noise from a substream keyed
    // by its sequence number, so a run is reproducible from (seed, config).
    long long eval_counter = 0;
    const auto objective = [&](const OrthonormalBasis &second) -> double {
        ShotConfig eval_cfg = shot_cfg;
        eval_cfg.seed = Rng::substream(shot_cfg.seed,
                                       static_cast<std::uint64_t>(eval_counter++))
                            .next_u64();
        const Eigen::MatrixXd table = (scheme == Scheme::johansen)
                                          ? johansen_im_kd(state, basis_a, second, exact, eval_cfg)
                                          : weak_im_kd(state, basis_a, second, exact, eval_cfg);
        return table.cwiseAbs().sum();
    };

    OptimizerConfig cfg = opt_cfg;
    if (!exact) {
        // The objective cannot be resolved below its shot-noise floor, so
        // lift the simplex tolerance there; otherwise no restart would ever
        // register as converged on a stochastic objective.
        const double root_shots = std::sqrt(static_cast<double>(shot_cfg.shots));
        const double entry_sigma = (scheme == Scheme::johansen)
                                       ? 0.3536 / root_shots
                                       : std::max(shot_cfg.pointer_noise_sigma, 0.5) / root_shots;
        cfg.ftol = std::max(cfg.ftol, entry_sigma * d);
    }

    OptimizationReport report = maximize(objective, d, cfg);
    OrthonormalBasis argmax(basis_from_params(report.best_params, d, cfg.factor_dims).kets());
    const double value = report.best_value;
    long long total_shots = 0;
    if (!exact) {
        const long long per_eval = (scheme == Scheme::johansen)
                                       ? 2LL * d * d * shot_cfg.shots
                                       : shot_cfg.shots + static_cast<long long>(d) * d * shot_cfg.shots;
        total_shots = report.objective_evals * per_eval;
    }
    return CoherenceResult{value, std::move(argmax), std::move(report), total_shots};
}

} // namespace kdq
