#pragma once

#include <vector>

#include "dppkit/linalg.hpp"
#include "dppkit/subsets.hpp"

namespace dppkit {

/// Exact distribution over the size-k stratum: table[i] is the probability of
/// support[i], in canonical subset order.
struct KDppDistribution {
    KernelMatrix kernel;
    int k = 0;
    double z_k = 0.0;  // sum of size-k principal minors
    std::vector<SubsetIndex> support;
    std::vector<double> table;

    double prob(const SubsetIndex& a) const;
};

/// Enumerates the stratum and normalizes the size-k principal minors.
/// Throws DegenerateStratumError when Z_k is numerically zero.
KDppDistribution kdpp_distribution(const KernelMatrix& l, int k);

/// Squared-minor expansion of the size-k conditional probability at A:
///   sum_B det(U_{A,B})^2 exp(sum_{i in B} theta_i) / e_k(e^theta),
/// for the kernel U diag(e^theta) U^T. Stabilized against large theta by a
/// common shift, which cancels between numerator and denominator.
double kdpp_cauchy_binet(const Matrix& u, const Vector& theta, int k, const SubsetIndex& a);

/// Natural parameter of the identifiable (minimal) chart: differences against
/// the last coordinate.
struct MinimalParam {
    Vector theta_tilde;
};

MinimalParam to_minimal(const Vector& theta);
Vector from_minimal(const MinimalParam& p, double pin = 0.0);

/// psi_k(theta) = log e_k(e^theta), evaluated shift-stably: entries of +-100
/// are fine.
double log_partition(const Vector& theta, int k);

/// Inclusion probabilities eta_i = s_i e_{k-1}(s minus i) / e_k(s) with
/// s = e^theta; the gradient of log_partition. Sums to k.
Vector mean_parameter(const Vector& theta, int k);

/// Fisher information of the diagonal k-DPP in theta, with the mean parameter
/// and the matrix of pair inclusion probabilities (zero diagonal):
///   g_ii = eta_i (1 - eta_i),  g_ij = pi_ij - eta_i eta_j,
///   pi_ij = s_i s_j e_{k-2}(s minus {i,j}) / e_k(s).
struct FisherMatrix {
    Matrix g;
    Vector eta;
    Matrix pair_probs;
};

FisherMatrix fisher_information(const Vector& theta, int k);

/// Entrywise comparison of the Fisher matrix at (theta, k) against the one at
/// (-theta, n-k); the two coincide by complementation of the stratum.
struct FisherSymmetryReport {
    double max_deviation = 0.0;
    bool pass = false;
};

FisherSymmetryReport fisher_symmetry_check(const Vector& theta, int k);

/// Column ranks of the indicator design over the stratum: the reduced design
/// [T_1 .. T_{n-1}, 1] must have full column rank n (no affine relation), and
/// the full design [T_1 .. T_n, 1] has rank exactly n (the single relation
/// sum_i T_i = k).
struct MinimalityReport {
    int n = 0;
    int k = 0;
    int minimal_rank = 0;  // of [T_1 .. T_{n-1}, 1], n columns
    int full_rank = 0;     // of [T_1 .. T_n, 1], n+1 columns
    bool minimal_full_column_rank = false;
};

MinimalityReport minimality_check(int n, int k);

}  // namespace dppkit
