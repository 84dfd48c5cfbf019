#include "dppkit/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "dppkit/errors.hpp"

namespace dppkit {

namespace {

Matrix checked_square(Matrix m, const char* type_name) {
    if (m.rows() == 0 || m.rows() != m.cols()) {
        throw std::domain_error(std::string(type_name) + ": matrix must be square and nonempty");
    }
    if (m.rows() > kMaxGroundSize) {
        throw std::domain_error(std::string(type_name) + ": dimension is capped at " +
                                std::to_string(kMaxGroundSize));
    }
    if (!m.allFinite()) {
        throw std::domain_error(std::string(type_name) + ": entries must be finite");
    }
    if (!is_symmetric(m)) {
        throw std::domain_error(std::string(type_name) + ": matrix is not symmetric");
    }
    return m;
}

}  // namespace

bool is_symmetric(const Matrix& m, double rel_tol) {
    if (m.rows() != m.cols() || m.rows() == 0) return false;
    const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
    return (m - m.transpose()).cwiseAbs().maxCoeff() <= rel_tol * scale;
}

KernelMatrix::KernelMatrix(Matrix entries)
    : entries_(checked_square(std::move(entries), "KernelMatrix")) {}

SymDirection::SymDirection(Matrix entries)
    : entries_(checked_square(std::move(entries), "SymDirection")) {}

SpectralForm eig_sym(const KernelMatrix& m) {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(m.mat());
    if (solver.info() != Eigen::Success) {
        throw std::runtime_error("eig_sym: eigendecomposition did not converge");
    }
    const int n = m.n();
    SpectralForm out;
    out.lambdas = solver.eigenvalues().reverse();
    out.u = solver.eigenvectors().rowwise().reverse();
    for (int j = 0; j < n; ++j) {
        const double colmax = out.u.col(j).cwiseAbs().maxCoeff();
        for (int i = 0; i < n; ++i) {
            if (std::abs(out.u(i, j)) > 1e-9 * colmax) {
                if (out.u(i, j) < 0.0) out.u.col(j) = -out.u.col(j);
                break;
            }
        }
    }
    return out;
}

Matrix reconstruct(const SpectralForm& s) {
    return s.u * s.lambdas.asDiagonal() * s.u.transpose();
}

double min_eigenvalue(const SpectralForm& s) { return s.lambdas.minCoeff(); }

double max_abs_eigenvalue(const SpectralForm& s) { return s.lambdas.cwiseAbs().maxCoeff(); }

void require_psd(const SpectralForm& s, const char* context) {
    if (min_eigenvalue(s) < -1e-10 * max_abs_eigenvalue(s)) {
        throw std::domain_error(std::string(context) + ": kernel is not positive semidefinite");
    }
}

void require_positive_definite(const SpectralForm& s, const char* context) {
    const double lam_max = s.lambdas.maxCoeff();
    if (lam_max <= 0.0 || min_eigenvalue(s) < 1e-10 * lam_max) {
        throw SingularKernelError(std::string(context) +
                                  ": kernel must be positive definite (singular or indefinite input)");
    }
}

Matrix submatrix(const Matrix& m, std::span<const int> rows, std::span<const int> cols) {
    for (int r : rows) {
        if (r < 1 || r > m.rows()) throw std::domain_error("submatrix: row index out of range");
    }
    for (int c : cols) {
        if (c < 1 || c > m.cols()) throw std::domain_error("submatrix: column index out of range");
    }
    Matrix sub(rows.size(), cols.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t j = 0; j < cols.size(); ++j) {
            sub(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                m(rows[i] - 1, cols[j] - 1);
        }
    }
    return sub;
}

double principal_minor(const KernelMatrix& m, const SubsetIndex& a) {
    return rectangular_minor(m.mat(), a, a);
}

double rectangular_minor(const Matrix& m, const SubsetIndex& rows, const SubsetIndex& cols) {
    if (rows.k() != cols.k()) {
        throw std::domain_error("rectangular_minor: row and column subsets must have equal size");
    }
    const int k = rows.k();
    if (k == 0) return 1.0;
    const Matrix sub = submatrix(m, rows.elements, cols.elements);
    if (k == 1) return sub(0, 0);
    return Eigen::PartialPivLU<Matrix>(sub).determinant();
}

RankReport rank_and_nullspace(const Matrix& m, double rel_tol) {
    if (!m.allFinite()) throw std::domain_error("rank_and_nullspace: entries must be finite");
    Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullV);
    RankReport report;
    report.singular_values = svd.singularValues();
    const double sigma_max =
        report.singular_values.size() > 0 ? report.singular_values(0) : 0.0;
    report.tolerance_used =
        rel_tol * sigma_max * static_cast<double>(std::max(m.rows(), m.cols()));
    report.rank = 0;
    for (Eigen::Index i = 0; i < report.singular_values.size(); ++i) {
        if (report.singular_values(i) > report.tolerance_used) ++report.rank;
    }
    const auto& v = svd.matrixV();
    for (Eigen::Index j = report.rank; j < v.cols(); ++j) {
        report.nullspace_basis.push_back(v.col(j));
    }
    return report;
}

std::vector<std::vector<int>> cluster_eigenvalues(const Vector& lambdas, double cluster_tol) {
    const int n = static_cast<int>(lambdas.size());
    if (n == 0) return {};
    const double scale = std::max(1.0, lambdas.cwiseAbs().maxCoeff());
    for (int i = 0; i + 1 < n; ++i) {
        if (lambdas(i + 1) > lambdas(i) + 1e-12 * scale) {
            throw std::domain_error("cluster_eigenvalues: values must be descending");
        }
    }
    std::vector<std::vector<int>> groups;
    groups.push_back({1});
    for (int i = 1; i < n; ++i) {
        if (lambdas(i - 1) - lambdas(i) <= cluster_tol * scale) {
            groups.back().push_back(i + 1);
        } else {
            groups.push_back({i + 1});
        }
    }
    return groups;
}

}  // namespace dppkit
