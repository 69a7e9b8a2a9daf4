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
 * Batch verification of the coherence-measure properties on seeded random
 * instances: faithfulness, convexity, unitary covariance, invariance under
 * basis-diagonal and basis-permuting unitaries, partial-trace and
 * decoherence monotonicity, the l1/uncertainty sandwich, and
 * coarse-graining monotonicity. Instances run in parallel; per-instance
 * seeds make the aggregate independent of scheduling.
 */

#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "kdq/coherence.hpp"
#include "kdq/linalg.hpp"
#include "kdq/optimizer.hpp"

namespace kdq {

struct PropertyOptions {
    std::vector<int> dims{2, 3, 4};
    int instances = 100;
    std::uint64_t seed = 1;
    int threads = 0; // 0 = hardware concurrency
    /// Search budget per optimization; the suite default trades the library
    /// default's paranoia for throughput while staying inside the property
    /// tolerances with margin.
    OptimizerConfig opt = suite_optimizer_config();
    /// Test hook: replaces the dephasing map inside the decoherence check.
    std::function<DensityMatrix(const DensityMatrix &, const OrthonormalBasis &)> dephase_override;

    static OptimizerConfig suite_optimizer_config();
};

struct PropertyOutcome {
    std::string property;
    int dim = 0;
    int instances = 0;
    double max_violation = 0.0;
    double tolerance = 0.0;
    bool passed = false;
};

/// Runs every property at every configured dimension. Deterministic for a
/// fixed PropertyOptions, regardless of thread count.
std::vector<PropertyOutcome> run_property_suite(const PropertyOptions &options);

bool all_passed(const std::vector<PropertyOutcome> &outcomes);

/// Chunked parallel map used by the suite and the CLI; fn(i) must only
/// touch state owned by instance i.
void parallel_for(int count, int threads, const std::function<void(int)> &fn);

} // namespace kdq
