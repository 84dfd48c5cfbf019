#include "dppkit/exterior.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "dppkit/dpp.hpp"
#include "dppkit/errors.hpp"
#include "dppkit/identifiability.hpp"

namespace dppkit {

namespace {

constexpr std::int64_t kCompoundCap = 1000;

}  // namespace

CompoundMatrix compound(const Matrix& m, int k) {
    const int n = static_cast<int>(m.rows());
    if (m.cols() != n || n == 0) throw std::domain_error("compound: matrix must be square");
    if (k < 1 || k > n) throw std::domain_error("compound: k must be in 1..n");
    const std::int64_t size = binomial(n, k);
    if (size > kCompoundCap) {
        throw CapacityError("compound: C(n,k) exceeds the 1000-row materialization cap");
    }

    CompoundMatrix c;
    c.k = k;
    c.base_n = n;
    c.index = enumerate_subsets(n, k);
    c.entries = Matrix(size, size);
    for (std::size_t a = 0; a < c.index.size(); ++a) {
        for (std::size_t b = 0; b < c.index.size(); ++b) {
            c.entries(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) =
                rectangular_minor(m, c.index[a], c.index[b]);
        }
    }
    return c;
}

double inclusion_via_exterior(const KernelMatrix& l, const SubsetIndex& s) {
    if (s.n != l.n()) throw std::domain_error("inclusion_via_exterior: ground-set size mismatch");
    if (s.k() == 0) return 1.0;
    const KernelMatrix km = marginal_kernel(l);
    const CompoundMatrix c = compound(km.mat(), s.k());
    const auto r = static_cast<Eigen::Index>(s.rank);
    return c.entries(r, r);
}

PluckerReport plucker_check(const Matrix& v) {
    if (v.rows() != 4 || v.cols() != 2) {
        throw std::domain_error("plucker_check: expected a 4x2 matrix");
    }
    if ((v.transpose() * v - Matrix::Identity(2, 2)).cwiseAbs().maxCoeff() > 1e-10) {
        throw std::domain_error("plucker_check: columns are not orthonormal");
    }
    const auto det_rows = [&v](int i, int j) {
        return v(i - 1, 0) * v(j - 1, 1) - v(j - 1, 0) * v(i - 1, 1);
    };

    PluckerReport rep;
    rep.p12 = det_rows(1, 2);
    rep.p13 = det_rows(1, 3);
    rep.p14 = det_rows(1, 4);
    rep.p23 = det_rows(2, 3);
    rep.p24 = det_rows(2, 4);
    rep.p34 = det_rows(3, 4);
    rep.plucker_residual = std::abs(rep.p12 * rep.p34 - rep.p13 * rep.p24 + rep.p14 * rep.p23);

    const double a = std::abs(rep.p12 * rep.p34);
    const double b = std::abs(rep.p13 * rep.p24);
    const double c = std::abs(rep.p14 * rep.p23);
    double best = std::abs(a + b + c);
    for (double sb : {-1.0, 1.0}) {
        for (double sc : {-1.0, 1.0}) {
            best = std::min(best, std::abs(a + sb * b + sc * c));
        }
    }
    rep.sqrt_identity_residual = best;
    rep.pass = rep.plucker_residual <= 1e-10 && rep.sqrt_identity_residual <= 1e-10;
    return rep;
}

ScaleContrastReport scale_invariance_contrast(const KernelMatrix& l, double c, int k) {
    if (c <= 0.0) throw std::domain_error("scale_invariance_contrast: scale must be positive");
    const KernelMatrix scaled(c * l.mat());

    ScaleContrastReport report;
    report.tv = check_kdpp_invariance(l, scaled, k).tv;

    const KernelMatrix km_l = marginal_kernel(l);
    const KernelMatrix km_scaled = marginal_kernel(scaled);
    for (const SubsetIndex& s : enumerate_subsets(l.n(), k)) {
        const double dev =
            std::abs(principal_minor(km_l, s) - principal_minor(km_scaled, s));
        report.max_inclusion_deviation = std::max(report.max_inclusion_deviation, dev);
    }
    return report;
}

}  // namespace dppkit
