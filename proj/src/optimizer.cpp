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

#include "kdq/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

namespace kdq {

void OptimizerConfig::validate(int problem_dim) const {
    if (restarts < 1 || max_iters < 1) {
        throw ValidationError("BadOptimizerConfig", "restarts and max_iters must be positive");
    }
    if (!(xtol > 0.0) || !(ftol > 0.0)) {
        throw ValidationError("BadOptimizerConfig", "xtol and ftol must be positive");
    }
    if (!factor_dims.empty()) {
        long long prod = 1;
        for (int f : factor_dims) {
            if (f < 1) {
                throw ValidationError("BadOptimizerConfig", "factor dims must be positive");
            }
            prod *= f;
        }
        if (prod != problem_dim) {
            throw ValidationError("BadOptimizerConfig",
                                  "factor dims multiply to " + std::to_string(prod) +
                                      ", expected " + std::to_string(problem_dim));
        }
    }
}

QubitBasisParams::QubitBasisParams(double a, double b) : alpha(a), beta(b) {
    if (!(a >= 0.0 && a <= std::numbers::pi)) {
        throw ValidationError("BadAngle", "alpha must lie in [0, pi], got " + std::to_string(a));
    }
    if (!(b >= 0.0 && b < 2.0 * std::numbers::pi)) {
        throw ValidationError("BadAngle", "beta must lie in [0, 2*pi), got " + std::to_string(b));
    }
}

OrthonormalBasis QubitBasisParams::basis() const {
    const double c = std::cos(alpha / 2.0);
    const double s = std::sin(alpha / 2.0);
    const Complex phase(std::cos(beta), std::sin(beta));
    ComplexMatrix kets(2, 2);
    kets(0, 0) = c;
    kets(1, 0) = s * phase;
    kets(0, 1) = s;
    kets(1, 1) = -c * phase;
    return OrthonormalBasis(kets);
}

int chart_param_count(int d, const std::vector<int> &factor_dims) {
    if (factor_dims.empty()) {
        return d * d;
    }
    int n = 0;
    for (int f : factor_dims) {
        n += f * f;
    }
    return n;
}

namespace {

ComplexMatrix hermitian_from_params(const double *p, int d) {
    ComplexMatrix h(d, d);
    for (int i = 0; i < d; ++i) {
        h(i, i) = p[i];
    }
    int k = d;
    for (int i = 0; i < d; ++i) {
        for (int j = i + 1; j < d; ++j) {
            const Complex z(p[k], p[k + 1]);
            h(i, j) = z;
            h(j, i) = std::conj(z);
            k += 2;
        }
    }
    return h;
}

void params_from_hermitian(const ComplexMatrix &h, double *p) {
    const int d = static_cast<int>(h.rows());
    for (int i = 0; i < d; ++i) {
        p[i] = h(i, i).real();
    }
    int k = d;
    for (int i = 0; i < d; ++i) {
        for (int j = i + 1; j < d; ++j) {
            p[k] = h(i, j).real();
            p[k + 1] = h(i, j).imag();
            k += 2;
        }
    }
}

ComplexMatrix unitary_from_chart(const double *p, int d, const std::vector<int> &factor_dims) {
    if (factor_dims.empty()) {
        return matrix_exp_i_hermitian(hermitian_from_params(p, d));
    }
    ComplexMatrix u = matrix_exp_i_hermitian(hermitian_from_params(p, factor_dims[0]));
    int offset = factor_dims[0] * factor_dims[0];
    for (std::size_t f = 1; f < factor_dims.size(); ++f) {
        const int df = factor_dims[f];
        u = tensor_product(u, matrix_exp_i_hermitian(hermitian_from_params(p + offset, df)));
        offset += df * df;
    }
    return u;
}

} // namespace

ComplexMatrix unitary_from_params(const std::vector<double> &params, int d) {
    check_dim_supported(d);
    if (static_cast<int>(params.size()) != d * d) {
        throw BadParamLength("expected " + std::to_string(d * d) + " parameters, got " +
                             std::to_string(params.size()));
    }
    return matrix_exp_i_hermitian(hermitian_from_params(params.data(), d));
}

std::vector<double> params_from_unitary(const ComplexMatrix &u) {
    const int d = static_cast<int>(u.rows());
    std::vector<double> p(static_cast<std::size_t>(d) * static_cast<std::size_t>(d));
    params_from_hermitian(hermitian_log_unitary(u), p.data());
    return p;
}

OrthonormalBasis basis_from_params(const std::vector<double> &params, int d,
                                   const std::vector<int> &factor_dims) {
    const int n = chart_param_count(d, factor_dims);
    if (static_cast<int>(params.size()) != n) {
        throw BadParamLength("expected " + std::to_string(n) + " parameters, got " +
                             std::to_string(params.size()));
    }
    return OrthonormalBasis::from_unitary_unchecked(unitary_from_chart(params.data(), d, factor_dims));
}

namespace {

struct SimplexOutcome {
    std::vector<double> x;
    double value = 0.0;
    bool converged = false;
};

// Nelder-Mead with standard coefficients (reflect 1, expand 2, contract 0.5,
// shrink 0.5) minimizing g = -objective. A restart interleaves three phases
// under one shared iteration budget: a wide first descent, shrinking-simplex
// polish rounds (Nelder-Mead loses terminal accuracy when its simplex
// collapses early), and basin-hopping kicks around the incumbent, which is
// what actually finds the rare global basins of the higher-dimensional
// charts. Kicks draw from the restart's own substream, so the whole search
// stays deterministic.
class NelderMead {
  public:
    NelderMead(const std::function<double(const double *)> &g, int n, const OptimizerConfig &cfg,
               long long &eval_counter)
        : g_(g), n_(n), cfg_(cfg), evals_(eval_counter) {}

    SimplexOutcome run(const std::vector<double> &x0, Rng rng) {
        SimplexOutcome best;
        best.x = x0;
        best.value = eval(x0.data());
        int iters_left = cfg_.max_iters;

        const int descent_cap = std::max(300, 30 * n_);
        const int hop_cap = std::max(200, 18 * n_);
        const int hops = std::max(2, n_ / 2);
        const int polish_cap = std::max(200, 15 * n_);
        // Keep enough budget for the polish rounds and the terminal
        // collapse; hopping with no budget to certify afterwards is wasted.
        const int tail_reserve = kPolishRounds * polish_cap + std::max(400, 20 * n_);

        improve(best, best.x, 0.55, iters_left, descent_cap);

        for (int hop = 0; hop < hops && iters_left > tail_reserve; ++hop) {
            std::vector<double> kicked = best.x;
            for (double &v : kicked) {
                v += rng.next_uniform(-0.65, 0.65);
            }
            improve(best, kicked, 0.35, iters_left, hop_cap);
        }
        polish(best, iters_left, polish_cap);
        // Terminal collapse from a tiny simplex; this is usually the round
        // that certifies convergence.
        improve(best, best.x, 0.004, iters_left, iters_left);
        return best;
    }

  private:
    static constexpr int kPolishRounds = 3;

    void improve(SimplexOutcome &best, const std::vector<double> &from, double step,
                 int &iters_left, int round_cap) {
        int budget = std::min(iters_left, round_cap);
        const int unused = iters_left - budget;
        const SimplexOutcome out = converge(from, step, budget);
        iters_left = unused + budget;
        if (out.value < best.value) {
            best.x = out.x;
            best.value = out.value;
        }
        best.converged = best.converged || out.converged;
    }

    void polish(SimplexOutcome &best, int &iters_left, int polish_cap) {
        double step = 0.08;
        for (int round = 0; round < kPolishRounds && iters_left > 0; ++round) {
            const double before = best.value;
            improve(best, best.x, step, iters_left, polish_cap);
            if (before - best.value <= std::max(cfg_.ftol, 1e-14)) {
                break;
            }
            step *= 0.15;
        }
    }

    double eval(const double *x) {
        ++evals_;
        return g_(x);
    }

    SimplexOutcome converge(const std::vector<double> &x0, double step, int &iters_left) {
        const int n = n_;
        const int m = n + 1;
        std::vector<std::vector<double>> pts(static_cast<std::size_t>(m));
        std::vector<double> vals(static_cast<std::size_t>(m));
        for (int i = 0; i < m; ++i) {
            pts[static_cast<std::size_t>(i)] = x0;
            if (i > 0) {
                pts[static_cast<std::size_t>(i)][static_cast<std::size_t>(i - 1)] += step;
            }
            vals[static_cast<std::size_t>(i)] = eval(pts[static_cast<std::size_t>(i)].data());
        }
        std::vector<int> order(static_cast<std::size_t>(m));
        std::iota(order.begin(), order.end(), 0);
        std::vector<double> xr(static_cast<std::size_t>(n)), xe(static_cast<std::size_t>(n)),
            xc(static_cast<std::size_t>(n)), centroid(static_cast<std::size_t>(n));

        // Absolute-value kinks can keep the simplex jittering above ftol
        // forever; a progress window ends the round once the best vertex
        // has effectively stopped improving.
        const int window = 6 * n + 30;
        const double window_tol = std::max(cfg_.ftol, 1e-11);
        int since_mark = 0;
        double mark_value = vals[0];

        bool converged = false;
        while (iters_left > 0) {
            --iters_left;
            std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
                return vals[static_cast<std::size_t>(a)] < vals[static_cast<std::size_t>(b)];
            });
            const int lo = order[0];
            const int hi = order[static_cast<std::size_t>(m - 1)];
            const int second_hi = order[static_cast<std::size_t>(m - 2)];

            double fspread = vals[static_cast<std::size_t>(hi)] - vals[static_cast<std::size_t>(lo)];
            double xspread = 0.0;
            for (int i = 1; i < m; ++i) {
                for (int k = 0; k < n; ++k) {
                    xspread = std::max(
                        xspread,
                        std::abs(pts[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])]
                                    [static_cast<std::size_t>(k)] -
                                 pts[static_cast<std::size_t>(lo)][static_cast<std::size_t>(k)]));
                }
            }
            if (fspread <= cfg_.ftol || xspread <= cfg_.xtol) {
                converged = true;
                break;
            }
            if (++since_mark >= window) {
                if (mark_value - vals[static_cast<std::size_t>(lo)] <= window_tol) {
                    converged = true;
                    break;
                }
                mark_value = vals[static_cast<std::size_t>(lo)];
                since_mark = 0;
            }

            for (int k = 0; k < n; ++k) {
                double s = 0.0;
                for (int i = 0; i < m; ++i) {
                    if (order[static_cast<std::size_t>(i)] != hi) {
                        s += pts[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])]
                                [static_cast<std::size_t>(k)];
                    }
                }
                centroid[static_cast<std::size_t>(k)] = s / n;
            }

            auto blend = [&](std::vector<double> &dst, double coef) {
                for (int k = 0; k < n; ++k) {
                    dst[static_cast<std::size_t>(k)] =
                        centroid[static_cast<std::size_t>(k)] +
                        coef * (centroid[static_cast<std::size_t>(k)] -
                                pts[static_cast<std::size_t>(hi)][static_cast<std::size_t>(k)]);
                }
            };

            blend(xr, 1.0);
            const double fr = eval(xr.data());
            if (fr < vals[static_cast<std::size_t>(lo)]) {
                blend(xe, 2.0);
                const double fe = eval(xe.data());
                if (fe < fr) {
                    pts[static_cast<std::size_t>(hi)] = xe;
                    vals[static_cast<std::size_t>(hi)] = fe;
                } else {
                    pts[static_cast<std::size_t>(hi)] = xr;
                    vals[static_cast<std::size_t>(hi)] = fr;
                }
                continue;
            }
            if (fr < vals[static_cast<std::size_t>(second_hi)]) {
                pts[static_cast<std::size_t>(hi)] = xr;
                vals[static_cast<std::size_t>(hi)] = fr;
                continue;
            }
            if (fr < vals[static_cast<std::size_t>(hi)]) {
                blend(xc, 0.5); // outside contraction
                const double fc = eval(xc.data());
                if (fc <= fr) {
                    pts[static_cast<std::size_t>(hi)] = xc;
                    vals[static_cast<std::size_t>(hi)] = fc;
                    continue;
                }
            } else {
                blend(xc, -0.5); // inside contraction
                const double fc = eval(xc.data());
                if (fc < vals[static_cast<std::size_t>(hi)]) {
                    pts[static_cast<std::size_t>(hi)] = xc;
                    vals[static_cast<std::size_t>(hi)] = fc;
                    continue;
                }
            }
            // shrink toward the best vertex
            for (int i = 0; i < m; ++i) {
                if (i == lo) {
                    continue;
                }
                for (int k = 0; k < n; ++k) {
                    pts[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)] =
                        pts[static_cast<std::size_t>(lo)][static_cast<std::size_t>(k)] +
                        0.5 * (pts[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)] -
                               pts[static_cast<std::size_t>(lo)][static_cast<std::size_t>(k)]);
                }
                vals[static_cast<std::size_t>(i)] = eval(pts[static_cast<std::size_t>(i)].data());
            }
        }

        std::size_t lo_final = 0;
        for (std::size_t i = 1; i < vals.size(); ++i) {
            if (vals[i] < vals[lo_final]) {
                lo_final = i;
            }
        }
        return SimplexOutcome{pts[lo_final], vals[lo_final], converged};
    }

    const std::function<double(const double *)> &g_;
    int n_;
    const OptimizerConfig &cfg_;
    long long &evals_;
};

} // namespace

OptimizationReport maximize(const std::function<double(const OrthonormalBasis &)> &objective, int d,
                            const OptimizerConfig &cfg) {
    check_dim_supported(d);
    cfg.validate(d);
    const int n = chart_param_count(d, cfg.factor_dims);

    const std::function<double(const double *)> g = [&](const double *p) {
        return -objective(
            OrthonormalBasis::from_unitary_unchecked(unitary_from_chart(p, d, cfg.factor_dims)));
    };

    std::vector<double> fourier_start(static_cast<std::size_t>(n), 0.0);
    {
        int offset = 0;
        const std::vector<int> dims = cfg.factor_dims.empty() ? std::vector<int>{d} : cfg.factor_dims;
        for (int df : dims) {
            params_from_hermitian(hermitian_log_unitary(fourier_basis(df).kets()),
                                  fourier_start.data() + offset);
            offset += df * df;
        }
    }

    OptimizationReport report;
    report.restarts_run = cfg.restarts;
    double worst_restart = 0.0;
    bool any = false;

    for (int r = 0; r < cfg.restarts; ++r) {
        std::vector<double> x0(static_cast<std::size_t>(n), 0.0);
        if (r == 1) {
            x0 = fourier_start;
        } else if (r >= 2) {
            Rng rng = Rng::substream(cfg.seed, static_cast<std::uint64_t>(r));
            for (double &v : x0) {
                v = rng.next_uniform(-std::numbers::pi, std::numbers::pi);
            }
        }
        NelderMead nm(g, n, cfg, report.objective_evals);
        const SimplexOutcome out =
            nm.run(x0, Rng::substream(cfg.seed, 0x486F70ULL + static_cast<std::uint64_t>(r)));
        const double value = -out.value;
        if (out.converged) {
            ++report.converged_restarts;
        }
        if (!any || value > report.best_value) {
            report.best_value = value;
            report.best_params = out.x;
        }
        worst_restart = any ? std::min(worst_restart, value) : value;
        any = true;
    }
    report.spread = report.best_value - worst_restart;
    if (report.converged_restarts == 0) {
        throw OptimizerFailure("no restart reached the ftol/xtol convergence criteria within " +
                               std::to_string(cfg.max_iters) + " iterations");
    }
    return report;
}

double grid_oracle_qubit(const DensityMatrix &state, const OrthonormalBasis &basis, int resolution) {
    if (state.dim() != 2 || basis.dim() != 2) {
        throw WrongDimension("qubit grid oracle requires dimension 2");
    }
    if (resolution < 8) {
        throw ValidationError("BadResolution", "resolution must be at least 8");
    }
    // entry(a,b) = conj(S_ab) T_ab with S = A^dag B, T = (A^dag rho) B;
    // evaluated in scalars over the (alpha, beta) grid.
    const ComplexMatrix a_dag = basis.kets().adjoint();
    const ComplexMatrix a_dag_rho = a_dag * state.matrix();

    const std::size_t res = static_cast<std::size_t>(resolution);
    std::vector<double> half_cos(res), half_sin(res);
    std::vector<Complex> beta_phase(res);
    for (std::size_t i = 0; i < res; ++i) {
        const double alpha =
            std::numbers::pi * static_cast<double>(i) / static_cast<double>(resolution - 1);
        half_cos[i] = std::cos(alpha / 2.0);
        half_sin[i] = std::sin(alpha / 2.0);
        const double beta =
            2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(resolution);
        beta_phase[i] = Complex(std::cos(beta), std::sin(beta));
    }

    double best = 0.0;
    for (std::size_t ia = 0; ia < res; ++ia) {
        const double c = half_cos[ia];
        const double s = half_sin[ia];
        for (std::size_t ib = 0; ib < res; ++ib) {
            const Complex e = beta_phase[ib];
            const Complex bp0 = c, bp1 = s * e;   // |b+>
            const Complex bm0 = s, bm1 = -c * e;  // |b->
            double total = 0.0;
            for (int a = 0; a < 2; ++a) {
                const Complex sp = std::conj(a_dag(a, 0) * bp0 + a_dag(a, 1) * bp1);
                const Complex tp = a_dag_rho(a, 0) * bp0 + a_dag_rho(a, 1) * bp1;
                total += std::abs((sp * tp).imag());
                const Complex sm = std::conj(a_dag(a, 0) * bm0 + a_dag(a, 1) * bm1);
                const Complex tm = a_dag_rho(a, 0) * bm0 + a_dag_rho(a, 1) * bm1;
                total += std::abs((sm * tm).imag());
            }
            best = std::max(best, total);
        }
    }
    return best;
}

double grid_oracle_general(const DensityMatrix &state, const OrthonormalBasis &basis, int samples,
                           std::uint64_t seed) {
    if (state.dim() != basis.dim()) {
        throw DimensionMismatch("state and basis must share one dimension");
    }
    if (samples < 1) {
        throw ValidationError("BadSampleCount", "samples must be at least 1");
    }
    const int d = state.dim();
    const ComplexMatrix a_dag = basis.kets().adjoint();
    const ComplexMatrix a_dag_rho = a_dag * state.matrix();
    double best = 0.0;
    ComplexMatrix s(d, d), t(d, d);
    for (int k = 0; k < samples; ++k) {
        const std::uint64_t sub = Rng::substream(seed, static_cast<std::uint64_t>(k)).next_u64();
        const ComplexMatrix b = random_unitary(d, sub);
        s.noalias() = a_dag * b;
        t.noalias() = a_dag_rho * b;
        const double v = s.conjugate().cwiseProduct(t).imag().cwiseAbs().sum();
        best = std::max(best, v);
    }
    return best;
}

} // namespace kdq
