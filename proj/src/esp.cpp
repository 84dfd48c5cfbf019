#include "dppkit/esp.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dppkit {

EspTable::EspTable(int n, int k_max)
    : n_(n),
      k_max_(k_max),
      values_(static_cast<std::size_t>(n + 1) * static_cast<std::size_t>(k_max + 1), 0.0) {}

double EspTable::at(int m, int j) const {
    if (m < 0 || m > n_ || j < 0 || j > k_max_) throw std::out_of_range("EspTable::at");
    return values_[static_cast<std::size_t>(m) * static_cast<std::size_t>(k_max_ + 1) +
                   static_cast<std::size_t>(j)];
}

double& EspTable::cell(int m, int j) {
    if (m < 0 || m > n_ || j < 0 || j > k_max_) throw std::out_of_range("EspTable::cell");
    return values_[static_cast<std::size_t>(m) * static_cast<std::size_t>(k_max_ + 1) +
                   static_cast<std::size_t>(j)];
}

EspTable esp(std::span<const double> lambdas, int k_max) {
    const int n = static_cast<int>(lambdas.size());
    if (k_max < 0 || k_max > n) throw std::domain_error("esp: k_max must be in 0..n");
    for (double v : lambdas) {
        if (!std::isfinite(v)) throw std::domain_error("esp: values must be finite");
    }
    EspTable t(n, k_max);
    t.cell(0, 0) = 1.0;
    for (int m = 1; m <= n; ++m) {
        t.cell(m, 0) = 1.0;
        const double lam = lambdas[static_cast<std::size_t>(m - 1)];
        for (int j = 1; j <= std::min(m, k_max); ++j) {
            t.cell(m, j) = t.at(m - 1, j) + lam * t.at(m - 1, j - 1);
        }
    }
    return t;
}

double esp_leave_out(std::span<const double> lambdas, std::span<const int> excluded, int j) {
    const int n = static_cast<int>(lambdas.size());
    if (excluded.size() > 2) {
        throw std::domain_error("esp_leave_out: at most two indices may be excluded");
    }
    for (int idx : excluded) {
        if (idx < 1 || idx > n) throw std::domain_error("esp_leave_out: excluded index out of range");
    }
    if (excluded.size() == 2 && excluded[0] == excluded[1]) {
        throw std::domain_error("esp_leave_out: excluded indices must be distinct");
    }
    if (j < 0) return 0.0;
    const int m = n - static_cast<int>(excluded.size());
    if (j > m) return 0.0;
    if (j == 0) return 1.0;

    std::vector<double> e(static_cast<std::size_t>(j) + 1, 0.0);
    e[0] = 1.0;
    for (int idx = 1; idx <= n; ++idx) {
        bool skip = false;
        for (int ex : excluded) skip = skip || (ex == idx);
        if (skip) continue;
        const double lam = lambdas[static_cast<std::size_t>(idx - 1)];
        for (int q = j; q >= 1; --q) {
            e[static_cast<std::size_t>(q)] += lam * e[static_cast<std::size_t>(q - 1)];
        }
    }
    return e[static_cast<std::size_t>(j)];
}

}  // namespace dppkit
