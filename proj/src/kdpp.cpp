#include "dppkit/kdpp.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "dppkit/errors.hpp"
#include "dppkit/esp.hpp"

namespace dppkit {

namespace {

constexpr std::int64_t kStratumTableCap = 1'000'000;

void check_k_interior(int n, int k, const char* context) {
    if (k < 1 || k > n - 1) {
        throw std::domain_error(std::string(context) + ": k must be in 1..n-1");
    }
}

/// exp(theta - max theta); the dropped factor e^{k max theta} is degree-k
/// homogeneous in every ratio of elementary symmetric polynomials used below.
Vector shifted_weights(const Vector& theta) {
    if (!theta.allFinite()) throw std::domain_error("theta entries must be finite");
    return (theta.array() - theta.maxCoeff()).exp();
}

}  // namespace

double KDppDistribution::prob(const SubsetIndex& a) const {
    if (a.k() != k) throw std::domain_error("KDppDistribution::prob: subset size mismatch");
    return table.at(static_cast<std::size_t>(a.rank));
}

KDppDistribution kdpp_distribution(const KernelMatrix& l, int k) {
    const int n = l.n();
    if (k < 0 || k > n) throw std::domain_error("kdpp_distribution: k must be in 0..n");
    require_psd(eig_sym(l), "kdpp_distribution");
    if (binomial(n, k) > kStratumTableCap) {
        throw CapacityError("kdpp_distribution: C(n,k) exceeds the stratum table cap");
    }

    KDppDistribution d{l, k, 0.0, enumerate_subsets(n, k), {}};
    d.table.reserve(d.support.size());
    double max_minor = 0.0;
    for (const SubsetIndex& a : d.support) {
        const double m = principal_minor(l, a);
        max_minor = std::max(max_minor, std::abs(m));
        d.table.push_back(std::max(m, 0.0));
    }
    double z = 0.0;
    for (double v : d.table) z += v;
    if (z <= static_cast<double>(n) * static_cast<double>(k) * 1e-14 * max_minor || z <= 0.0) {
        throw DegenerateStratumError("kdpp_distribution: Z_" + std::to_string(k) +
                                     " vanishes; kernel is outside the admissible set");
    }
    d.z_k = z;
    for (double& v : d.table) v /= z;
    return d;
}

double kdpp_cauchy_binet(const Matrix& u, const Vector& theta, int k, const SubsetIndex& a) {
    const int n = static_cast<int>(u.rows());
    if (u.cols() != n || n == 0) throw std::domain_error("kdpp_cauchy_binet: u must be square");
    if (theta.size() != n) throw std::domain_error("kdpp_cauchy_binet: theta length mismatch");
    check_k_interior(n, k, "kdpp_cauchy_binet");
    if (a.k() != k) throw std::domain_error("kdpp_cauchy_binet: subset size must equal k");
    const Matrix gram = u.transpose() * u - Matrix::Identity(n, n);
    if (gram.cwiseAbs().maxCoeff() > 1e-10) {
        throw std::domain_error("kdpp_cauchy_binet: u is not orthogonal");
    }

    const Vector s = shifted_weights(theta);
    const double denom = esp(span_of(s), k).e(k);
    double num = 0.0;
    for (const SubsetIndex& b : enumerate_subsets(n, k)) {
        const double d = rectangular_minor(u, a, b);
        double w = 1.0;
        for (int el : b.elements) w *= s(el - 1);
        num += d * d * w;
    }
    return num / denom;
}

MinimalParam to_minimal(const Vector& theta) {
    const Eigen::Index n = theta.size();
    if (n < 1) throw std::domain_error("to_minimal: theta must be nonempty");
    MinimalParam p;
    p.theta_tilde = theta.head(n - 1).array() - theta(n - 1);
    return p;
}

Vector from_minimal(const MinimalParam& p, double pin) {
    const Eigen::Index n = p.theta_tilde.size() + 1;
    Vector theta(n);
    theta.head(n - 1) = p.theta_tilde.array() + pin;
    theta(n - 1) = pin;
    return theta;
}

double log_partition(const Vector& theta, int k) {
    const int n = static_cast<int>(theta.size());
    check_k_interior(n, k, "log_partition");
    const double shift = theta.maxCoeff();
    const Vector s = shifted_weights(theta);
    return static_cast<double>(k) * shift + std::log(esp(span_of(s), k).e(k));
}

Vector mean_parameter(const Vector& theta, int k) {
    const int n = static_cast<int>(theta.size());
    check_k_interior(n, k, "mean_parameter");
    const Vector s = shifted_weights(theta);
    const double ek = esp(span_of(s), k).e(k);
    Vector eta(n);
    for (int i = 0; i < n; ++i) {
        const int excluded[] = {i + 1};
        eta(i) = s(i) * esp_leave_out(span_of(s), excluded, k - 1) / ek;
    }
    return eta;
}

FisherMatrix fisher_information(const Vector& theta, int k) {
    const int n = static_cast<int>(theta.size());
    check_k_interior(n, k, "fisher_information");
    const Vector s = shifted_weights(theta);
    const double ek = esp(span_of(s), k).e(k);

    FisherMatrix fm;
    fm.eta = mean_parameter(theta, k);
    fm.pair_probs = Matrix::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const int excluded[] = {i + 1, j + 1};
            const double pij = s(i) * s(j) * esp_leave_out(span_of(s), excluded, k - 2) / ek;
            fm.pair_probs(i, j) = pij;
            fm.pair_probs(j, i) = pij;
        }
    }
    fm.g = fm.pair_probs - fm.eta * fm.eta.transpose();
    for (int i = 0; i < n; ++i) {
        fm.g(i, i) = fm.eta(i) * (1.0 - fm.eta(i));
    }
    return fm;
}

FisherSymmetryReport fisher_symmetry_check(const Vector& theta, int k) {
    const int n = static_cast<int>(theta.size());
    check_k_interior(n, k, "fisher_symmetry_check");
    const FisherMatrix lhs = fisher_information(theta, k);
    const FisherMatrix rhs = fisher_information(-theta, n - k);
    FisherSymmetryReport report;
    report.max_deviation = (lhs.g - rhs.g).cwiseAbs().maxCoeff();
    report.pass = report.max_deviation <= 1e-10;
    return report;
}

MinimalityReport minimality_check(int n, int k) {
    check_k_interior(n, k, "minimality_check");
    const auto subsets = enumerate_subsets(n, k);
    const auto rows = static_cast<Eigen::Index>(subsets.size());

    Matrix full = Matrix::Zero(rows, n + 1);
    for (Eigen::Index r = 0; r < rows; ++r) {
        for (int el : subsets[static_cast<std::size_t>(r)].elements) {
            full(r, el - 1) = 1.0;
        }
        full(r, n) = 1.0;
    }
    // Reduced design: drop the T_n column, keep the constant.
    Matrix minimal(rows, n);
    minimal.leftCols(n - 1) = full.leftCols(n - 1);
    minimal.col(n - 1) = full.col(n);

    MinimalityReport report;
    report.n = n;
    report.k = k;
    report.minimal_rank = rank_and_nullspace(minimal).rank;
    report.full_rank = rank_and_nullspace(full).rank;
    report.minimal_full_column_rank = report.minimal_rank == n;
    return report;
}

}  // namespace dppkit
