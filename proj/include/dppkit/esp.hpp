#pragma once

#include <span>
#include <vector>

namespace dppkit {

/// Elementary symmetric polynomials over all prefixes of a value vector:
/// at(m, j) = e_j(lambda_1, ..., lambda_m) for 0 <= m <= n, 0 <= j <= k_max.
/// Cells with j > m are zero; every row has e_0 = 1.
class EspTable {
public:
    EspTable(int n, int k_max);

    int n() const { return n_; }
    int k_max() const { return k_max_; }

    double at(int m, int j) const;
    double& cell(int m, int j);

    /// e_j of the full vector (row n).
    double e(int j) const { return at(n_, j); }

private:
    int n_;
    int k_max_;
    std::vector<double> values_;
};

/// e_0..e_k_max of lambdas via the Pascal-style recurrence
/// e_j(1..m) = e_j(1..m-1) + lambda_m * e_{j-1}(1..m-1).
/// Division-free, so zero or tiny entries cost nothing in accuracy.
EspTable esp(std::span<const double> lambdas, int k_max);

/// e_j of lambdas with up to two (1-based, distinct) entries removed,
/// recomputed by a fresh recurrence pass rather than divided out.
/// Returns 0 for j < 0 or j beyond the reduced length.
double esp_leave_out(std::span<const double> lambdas, std::span<const int> excluded, int j);

}  // namespace dppkit
