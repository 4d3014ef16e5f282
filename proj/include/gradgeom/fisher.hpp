#pragma once

#include <cstdint>
#include <vector>

#include "gradgeom/model.hpp"

namespace gradgeom::fisher {

struct FisherDiagonal {
    std::vector<double> f_hat;  // length K
    std::size_t m = 0;          // sketch count (0 for the exact path)
    std::uint64_t seed = 0;
    bool exact = false;
};

struct AlignmentReport {
    double cosine = 0.0;             // in [-1, 1]
    double angle = 0.0;              // radians, [0, pi]
    double persistence_proxy = 0.0;  // 1/angle, capped at 1e12
};

// f_hat[k] = mean over samples of g_{n,k}^2
FisherDiagonal exact_fisher_diag(const Model& model, const Dataset& data);

// Hutchinson diagonal estimator of the empirical Fisher: per sketch,
// f_hat += z (.) (J^T (J z)) / N with Rademacher z, where J stacks the
// per-sample loss-gradient rows. Unbiased; entries may be negative at
// finite m. Sketch i uses the stream derived from (seed, i).
FisherDiagonal hutchinson_fisher_diag(const Model& model, const Dataset& data,
                                      std::size_t m, std::uint64_t seed);

// s_n = ||g_n||^2
std::vector<double> replay_scores(const Model& model, const Dataset& pool);

// mean ||g||^2 over batch divided by mean ||g||^2 over clean_ref
double fisher_trace_ratio(const Model& model, const Dataset& batch,
                          const Dataset& clean_ref);

// max_k f_hat[k] / sum_k f_hat[k]
double solidification_ratio(const FisherDiagonal& fisher);

AlignmentReport gradient_alignment(const std::vector<double>& g_clean,
                                   const std::vector<double>& g_mal);

}  // namespace gradgeom::fisher
