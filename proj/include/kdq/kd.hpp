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

/**
 * @file
 * Kirkwood-Dirac quasiprobability tables over a pair of orthonormal bases:
 * construction, marginals, the inverse map back to the state, the
 * imaginary-part / commutator identity, and the nonclassicality witness.
 */

#pragma once

#include <Eigen/Dense>

#include "kdq/linalg.hpp"

namespace kdq {

/// Complex table with entry (a,b) = <b|a><a|rho|b>. Self-describing: both
/// bases are stored by value. The real part is the Terletsky-Margenau-Hill
/// distribution; marginals reproduce the Born probabilities of each basis.
class KdTable {
  public:
    KdTable(OrthonormalBasis basis_a, OrthonormalBasis basis_b, ComplexMatrix entries);

    int dim() const { return basis_a_.dim(); }
    const OrthonormalBasis &basis_a() const { return basis_a_; }
    const OrthonormalBasis &basis_b() const { return basis_b_; }
    const ComplexMatrix &entries() const { return entries_; }
    Complex entry(int a, int b) const { return entries_(a, b); }

  private:
    OrthonormalBasis basis_a_;
    OrthonormalBasis basis_b_;
    ComplexMatrix entries_;
};

/// Quasiprobability table of `state` over (basis_a, basis_b).
KdTable kd_table(const DensityMatrix &state, const OrthonormalBasis &basis_a,
                 const OrthonormalBasis &basis_b);

/// sum_{a,b} |Im entries(a,b)|: the pre-maximization coherence objective.
double imag_l1(const KdTable &table);

/// Entry (a,b) = <b|[Pi_a, rho]|b> / 2i, which equals Im of the KD table.
Eigen::MatrixXd commutator_imag(const DensityMatrix &state, const OrthonormalBasis &basis_a,
                                const OrthonormalBasis &basis_b);

/// Invert sum_{a,b} entries(a,b) |a><b| / <b|a> back to the state. Requires
/// every overlap <b|a> to be nonzero; refuses (rather than regularizes)
/// informationally incomplete tables.
DensityMatrix reconstruct_state(const KdTable &table);

/// N = sum_{a,b} |entries| - 1. Zero exactly for real nonnegative tables.
double nonclassicality(const KdTable &table);

/// Frobenius norm of [Pi_a, rho] maximized over a; the algebraic
/// incoherence test backing the faithfulness property.
double max_commutator_norm(const DensityMatrix &state, const OrthonormalBasis &basis);

} // namespace kdq
