#include "dppkit/identifiability.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "dppkit/errors.hpp"
#include "dppkit/rng.hpp"

namespace dppkit {

namespace {

Matrix symmetrized(const Matrix& m) { return 0.5 * (m + m.transpose()); }

int offdiag_column(int n, int i, int j) {
    // 1-based i < j; columns follow the diagonal block, lexicographic.
    return n + (i - 1) * n - i * (i - 1) / 2 + (j - i - 1);
}

/// tr(L_A^{-1} H_A) for every size-k subset, plus the inverse blocks consumer
/// needs; L must be positive definite so every L_A is invertible.
struct TraceData {
    std::vector<SubsetIndex> subsets;
    std::vector<Matrix> inverse_blocks;
};

TraceData principal_inverses(const KernelMatrix& l, int k, const char* context) {
    require_positive_definite(eig_sym(l), context);
    TraceData data;
    data.subsets = enumerate_subsets(l.n(), k);
    data.inverse_blocks.reserve(data.subsets.size());
    for (const SubsetIndex& a : data.subsets) {
        const Matrix block = submatrix(l.mat(), a.elements, a.elements);
        if (a.k() == 0) {
            data.inverse_blocks.emplace_back(0, 0);
            continue;
        }
        data.inverse_blocks.push_back(
            block.llt().solve(Matrix::Identity(a.k(), a.k())));
    }
    return data;
}

}  // namespace

AppliedInvariance apply_invariance(const SpectralForm& spectral, const InvarianceTransform& t) {
    const Eigen::Index n = spectral.lambdas.size();
    if (t.scale_c <= 0.0) throw std::domain_error("apply_invariance: scale must be positive");
    if (t.sign_flips.size() != n) {
        throw std::domain_error("apply_invariance: sign flip vector has wrong length");
    }
    for (Eigen::Index i = 0; i < n; ++i) {
        if (t.sign_flips(i) != 1.0 && t.sign_flips(i) != -1.0) {
            throw std::domain_error("apply_invariance: sign flips must be +1 or -1");
        }
    }
    if (t.rotation_q.rows() != n || t.rotation_q.cols() != n) {
        throw std::domain_error("apply_invariance: rotation has wrong shape");
    }
    const double lam_scale = std::max(1.0, spectral.lambdas.cwiseAbs().maxCoeff());
    if ((t.rotation_q.transpose() * t.rotation_q - Matrix::Identity(n, n)).cwiseAbs().maxCoeff() >
        1e-9) {
        throw std::domain_error("apply_invariance: rotation is not orthogonal");
    }
    const Matrix commutator =
        t.rotation_q * spectral.lambdas.asDiagonal() * t.rotation_q.transpose() -
        Matrix(spectral.lambdas.asDiagonal());
    if (commutator.cwiseAbs().maxCoeff() > 1e-9 * lam_scale) {
        throw std::domain_error("apply_invariance: rotation does not commute with the spectrum");
    }

    const Matrix duq = t.sign_flips.asDiagonal() * spectral.u * t.rotation_q;
    const Matrix m = duq * (t.scale_c * spectral.lambdas).asDiagonal() * duq.transpose();
    const Matrix l = reconstruct(spectral);
    const Matrix closed =
        t.scale_c * (t.sign_flips.asDiagonal() * l * t.sign_flips.asDiagonal());
    return {KernelMatrix(symmetrized(m)), KernelMatrix(symmetrized(closed))};
}

TvReport check_kdpp_invariance(const KernelMatrix& l, const KernelMatrix& m, int k) {
    if (l.n() != m.n()) {
        throw std::domain_error("check_kdpp_invariance: kernels have different sizes");
    }
    const KDppDistribution pl = kdpp_distribution(l, k);
    const KDppDistribution pm = kdpp_distribution(m, k);
    double tv = 0.0;
    for (std::size_t i = 0; i < pl.table.size(); ++i) {
        tv += std::abs(pl.table[i] - pm.table[i]);
    }
    TvReport report;
    report.tv = 0.5 * tv;
    report.pass = report.tv <= 1e-10;
    return report;
}

Matrix sample_commuting_rotation(const Vector& lambdas, std::uint64_t seed, double cluster_tol) {
    const int n = static_cast<int>(lambdas.size());
    const auto groups = cluster_eigenvalues(lambdas, cluster_tol);
    CounterRng rng(seed);
    Matrix q = Matrix::Zero(n, n);
    for (const auto& group : groups) {
        const int b = static_cast<int>(group.size());
        Matrix g(b, b);
        for (int i = 0; i < b; ++i) {
            for (int j = 0; j < b; ++j) g(i, j) = rng.normal();
        }
        Eigen::HouseholderQR<Matrix> qr(g);
        Matrix qb = qr.householderQ() * Matrix::Identity(b, b);
        const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
        for (int j = 0; j < b; ++j) {
            if (r(j, j) < 0.0) qb.col(j) = -qb.col(j);
        }
        for (int i = 0; i < b; ++i) {
            for (int j = 0; j < b; ++j) {
                q(group[static_cast<std::size_t>(i)] - 1,
                  group[static_cast<std::size_t>(j)] - 1) = qb(i, j);
            }
        }
    }
    return q;
}

Vector score(const KernelMatrix& l, const SymDirection& h, int k) {
    if (h.n() != l.n()) throw std::domain_error("score: direction has wrong size");
    const TraceData data = principal_inverses(l, k, "score");
    const KDppDistribution dist = kdpp_distribution(l, k);

    Vector traces(static_cast<Eigen::Index>(data.subsets.size()));
    for (std::size_t i = 0; i < data.subsets.size(); ++i) {
        const SubsetIndex& a = data.subsets[i];
        const Matrix ha = submatrix(h.mat(), a.elements, a.elements);
        traces(static_cast<Eigen::Index>(i)) =
            a.k() == 0 ? 0.0 : (data.inverse_blocks[i] * ha).trace();
    }
    double mean = 0.0;
    for (std::size_t i = 0; i < data.subsets.size(); ++i) {
        mean += dist.table[i] * traces(static_cast<Eigen::Index>(i));
    }
    return traces.array() - mean;
}

Vector PhiMap::apply(const SymDirection& h) const {
    if (h.n() != n) throw std::domain_error("PhiMap::apply: direction has wrong size");
    return matrix * sym_to_coords(h.mat());
}

PhiMap build_phi(const KernelMatrix& l, int k) {
    const int n = l.n();
    const TraceData data = principal_inverses(l, k, "build_phi");
    const int m = n * (n + 1) / 2;

    PhiMap phi;
    phi.n = n;
    phi.subset_order = data.subsets;
    phi.basis_labels.reserve(static_cast<std::size_t>(m));
    for (int i = 1; i <= n; ++i) phi.basis_labels.emplace_back(i, i);
    for (int i = 1; i <= n; ++i) {
        for (int j = i + 1; j <= n; ++j) phi.basis_labels.emplace_back(i, j);
    }

    phi.matrix = Matrix::Zero(static_cast<Eigen::Index>(data.subsets.size()), m);
    for (std::size_t r = 0; r < data.subsets.size(); ++r) {
        const SubsetIndex& a = data.subsets[r];
        const Matrix& w = data.inverse_blocks[r];
        const auto row = static_cast<Eigen::Index>(r);
        for (int pi = 0; pi < a.k(); ++pi) {
            const int i = a.elements[static_cast<std::size_t>(pi)];
            phi.matrix(row, i - 1) = w(pi, pi);
            for (int pj = pi + 1; pj < a.k(); ++pj) {
                const int j = a.elements[static_cast<std::size_t>(pj)];
                phi.matrix(row, offdiag_column(n, i, j)) = 2.0 * w(pi, pj);
            }
        }
    }
    return phi;
}

Vector sym_to_coords(const Matrix& h) {
    const int n = static_cast<int>(h.rows());
    Vector coords(n * (n + 1) / 2);
    for (int i = 0; i < n; ++i) coords(i) = h(i, i);
    int c = n;
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) coords(c++) = h(i, j);
    }
    return coords;
}

Matrix coords_to_sym(const Vector& coords, int n) {
    if (coords.size() != n * (n + 1) / 2) {
        throw std::domain_error("coords_to_sym: coordinate length mismatch");
    }
    Matrix h = Matrix::Zero(n, n);
    for (int i = 0; i < n; ++i) h(i, i) = coords(i);
    int c = n;
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            h(i, j) = coords(c);
            h(j, i) = coords(c);
            ++c;
        }
    }
    return h;
}

IdentifiabilityReport identifiability_report(const KernelMatrix& l, int k) {
    // dim V = m - rank(Phi) + 1 relies on the all-ones vector lying in the
    // range of Phi (the image of L itself is k * 1), which needs k >= 1.
    if (k < 1 || k > l.n() - 1) {
        throw std::domain_error("identifiability_report: k must be in 1..n-1");
    }
    const PhiMap phi = build_phi(l, k);
    const RankReport rr = rank_and_nullspace(phi.matrix);

    IdentifiabilityReport report;
    report.n = l.n();
    report.k = k;
    report.m = static_cast<int>(phi.matrix.cols());
    report.num_subsets = static_cast<int>(phi.matrix.rows());
    report.phi_rank = rr.rank;
    report.dim_v = report.m - rr.rank + 1;
    report.lower_bound = std::max(1, report.m - report.num_subsets + 1);
    for (const Vector& v : rr.nullspace_basis) {
        report.basis_v.emplace_back(coords_to_sym(v, report.n));
    }
    // The scale direction L itself: Phi maps it to k * 1, never into the
    // nullspace, so appending it keeps the basis independent.
    report.basis_v.emplace_back(l.mat());
    report.exceeds_scale_cone = report.dim_v >= 2;
    return report;
}

SymDirection h_rho(int n, double rho) {
    if (n < 2) throw std::domain_error("h_rho: n must be at least 2");
    if (rho <= -1.0 / (n - 1) || rho >= 1.0) {
        throw std::domain_error("h_rho: rho must lie in (-1/(n-1), 1)");
    }
    Matrix h = rho * Matrix::Ones(n, n);
    h.diagonal().setZero();
    return SymDirection(h);
}

}  // namespace dppkit
