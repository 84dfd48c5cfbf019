#pragma once

#include <span>
#include <vector>

#include "dppkit/linalg.hpp"
#include "dppkit/subsets.hpp"

namespace dppkit {

/// Distribution of |A| for a DPP with the given spectrum; probs[k] = P(|A| = k).
struct CardinalityLaw {
    std::vector<double> probs;
};

/// Exact subset probabilities of the unconditional DPP. Tables are
/// materialized only for n <= 20.
struct DppDistribution {
    KernelMatrix kernel;
    double log_normalizer = 0.0;                // log det(L + I)
    std::vector<std::vector<double>> table;     // table[k][rank], canonical order

    double prob(const SubsetIndex& a) const;
};

DppDistribution dpp_distribution(const KernelMatrix& l);

/// det(L_A) / det(L + I); the empty set is allowed.
double dpp_probability(const KernelMatrix& l, const SubsetIndex& a);

/// probs[k] = e_k(lambda) / prod_i (1 + lambda_i).
CardinalityLaw cardinality_law(std::span<const double> lambdas);

/// K = U diag(lambda_i / (1 + lambda_i)) U^T, computed through the spectral
/// form so K stays exactly symmetric with eigenvalues in [0, 1).
KernelMatrix marginal_kernel(const KernelMatrix& l);

/// P(S subset of A) = det(K_S) for the marginal kernel K of l.
double inclusion_probability(const KernelMatrix& l, const SubsetIndex& s);

}  // namespace dppkit
