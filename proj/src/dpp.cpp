#include "dppkit/dpp.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "dppkit/errors.hpp"
#include "dppkit/esp.hpp"

namespace dppkit {

namespace {

constexpr int kTableMaxGroundSize = 20;

SpectralForm checked_psd_spectrum(const KernelMatrix& l, const char* context) {
    SpectralForm s = eig_sym(l);
    require_psd(s, context);
    return s;
}

double log_det_l_plus_i(const SpectralForm& s) {
    double acc = 0.0;
    for (Eigen::Index i = 0; i < s.lambdas.size(); ++i) {
        acc += std::log1p(std::max(s.lambdas(i), 0.0));
    }
    return acc;
}

}  // namespace

double DppDistribution::prob(const SubsetIndex& a) const {
    const int k = a.k();
    if (k < 0 || k >= static_cast<int>(table.size())) {
        throw std::domain_error("DppDistribution::prob: subset size out of range");
    }
    return table[static_cast<std::size_t>(k)].at(static_cast<std::size_t>(a.rank));
}

DppDistribution dpp_distribution(const KernelMatrix& l) {
    const int n = l.n();
    if (n > kTableMaxGroundSize) {
        throw CapacityError("dpp_distribution: full tables are materialized only for n <= 20");
    }
    const SpectralForm s = checked_psd_spectrum(l, "dpp_distribution");
    const double log_norm = log_det_l_plus_i(s);
    const double norm = std::exp(-log_norm);

    DppDistribution d{l, log_norm, {}};
    d.table.resize(static_cast<std::size_t>(n) + 1);
    for (int k = 0; k <= n; ++k) {
        auto& row = d.table[static_cast<std::size_t>(k)];
        row.reserve(static_cast<std::size_t>(binomial(n, k)));
        for (const SubsetIndex& a : enumerate_subsets(n, k)) {
            row.push_back(std::max(principal_minor(l, a), 0.0) * norm);
        }
    }
    return d;
}

double dpp_probability(const KernelMatrix& l, const SubsetIndex& a) {
    const SpectralForm s = checked_psd_spectrum(l, "dpp_probability");
    return principal_minor(l, a) * std::exp(-log_det_l_plus_i(s));
}

CardinalityLaw cardinality_law(std::span<const double> lambdas) {
    const int n = static_cast<int>(lambdas.size());
    double scale = 1.0;
    for (double v : lambdas) scale = std::max(scale, std::abs(v));
    std::vector<double> clamped(lambdas.begin(), lambdas.end());
    for (double& v : clamped) {
        if (v < -1e-10 * scale) {
            throw std::domain_error("cardinality_law: negative eigenvalue");
        }
        v = std::max(v, 0.0);
    }
    const EspTable t = esp(clamped, n);
    double denom = 1.0;
    for (double v : clamped) denom *= 1.0 + v;

    CardinalityLaw law;
    law.probs.resize(static_cast<std::size_t>(n) + 1);
    for (int k = 0; k <= n; ++k) {
        law.probs[static_cast<std::size_t>(k)] = t.e(k) / denom;
    }
    return law;
}

KernelMatrix marginal_kernel(const KernelMatrix& l) {
    const SpectralForm s = checked_psd_spectrum(l, "marginal_kernel");
    Vector mu(s.lambdas.size());
    for (Eigen::Index i = 0; i < s.lambdas.size(); ++i) {
        const double lam = std::max(s.lambdas(i), 0.0);
        mu(i) = lam / (1.0 + lam);
    }
    Matrix k = s.u * mu.asDiagonal() * s.u.transpose();
    return KernelMatrix(0.5 * (k + k.transpose()));
}

double inclusion_probability(const KernelMatrix& l, const SubsetIndex& s) {
    return principal_minor(marginal_kernel(l), s);
}

}  // namespace dppkit
