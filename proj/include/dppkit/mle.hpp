#pragma once

#include <span>

#include "dppkit/kdpp.hpp"

namespace dppkit {

enum class StepRule { fixed, backtracking };
enum class InitRule { zeros, moment_match };

struct FitConfig {
    int max_iters = 500;
    double grad_tol = 1e-8;
    StepRule step_rule = StepRule::backtracking;
    double fixed_step = 0.1;       // used by StepRule::fixed
    double backtrack_beta = 0.5;   // step shrink factor
    double armijo_c1 = 1e-4;       // sufficient-ascent constant
    InitRule init = InitRule::zeros;
};

/// Sum over observations of <T(A), theta> - psi_k(theta), in the minimal
/// chart (last natural coordinate pinned to 0). All observations must share
/// the cardinality k and the ground-set size implied by theta_tilde.
double log_likelihood(std::span<const SubsetIndex> data, const MinimalParam& theta_tilde, int k);

/// Gradient in the minimal chart: per coordinate i <= n-1,
/// (observed count of i) - |data| * eta_i(theta).
Vector gradient(std::span<const SubsetIndex> data, const MinimalParam& theta_tilde, int k);

struct FitResult {
    MinimalParam theta_tilde_hat;
    double log_likelihood = 0.0;
    double grad_norm = 0.0;
    int iters = 0;
    bool converged = false;
};

/// Gradient ascent on the minimal-chart log-likelihood. Throws
/// BoundaryMleError (naming the element) when some element appears in every
/// observation or in none, since the maximizer then escapes to infinity.
FitResult fit(std::span<const SubsetIndex> data, int k, const FitConfig& config = {});

}  // namespace dppkit
