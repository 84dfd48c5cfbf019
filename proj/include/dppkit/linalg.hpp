#pragma once

#include <Eigen/Dense>
#include <span>
#include <vector>

#include "dppkit/subsets.hpp"

namespace dppkit {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

inline std::span<const double> span_of(const Vector& v) {
    return {v.data(), static_cast<std::size_t>(v.size())};
}

/// Entrywise symmetry within rel_tol * max(1, max|entry|).
bool is_symmetric(const Matrix& m, double rel_tol = 1e-12);

/// Square real symmetric matrix, validated at construction. Dimension is
/// capped at kMaxGroundSize with a clear error.
class KernelMatrix {
public:
    explicit KernelMatrix(Matrix entries);

    int n() const { return static_cast<int>(entries_.rows()); }
    const Matrix& mat() const { return entries_; }

private:
    Matrix entries_;
};

/// Symmetric perturbation direction; same validation as KernelMatrix but
/// with no positivity connotation.
class SymDirection {
public:
    explicit SymDirection(Matrix entries);

    int n() const { return static_cast<int>(entries_.rows()); }
    const Matrix& mat() const { return entries_; }

private:
    Matrix entries_;
};

/// Eigenvector matrix (columns) and descending eigenvalues.
struct SpectralForm {
    Matrix u;
    Vector lambdas;
};

struct RankReport {
    Vector singular_values;  // descending
    int rank = 0;
    double tolerance_used = 0.0;
    std::vector<Vector> nullspace_basis;
};

/// Symmetric eigendecomposition, eigenvalues descending. Deterministic for a
/// fixed input; each eigenvector is normalized so its first nonzero entry is
/// positive.
SpectralForm eig_sym(const KernelMatrix& m);

/// u * diag(lambdas) * u^T.
Matrix reconstruct(const SpectralForm& s);

double min_eigenvalue(const SpectralForm& s);
double max_abs_eigenvalue(const SpectralForm& s);

/// Throws std::domain_error unless min eigenvalue >= -1e-10 * max|eigenvalue|.
void require_psd(const SpectralForm& s, const char* context);

/// Throws SingularKernelError unless min eigenvalue >= 1e-10 * max eigenvalue.
void require_positive_definite(const SpectralForm& s, const char* context);

/// Rows and cols are 1-based element lists.
Matrix submatrix(const Matrix& m, std::span<const int> rows, std::span<const int> cols);

/// det of the principal submatrix with rows and columns a, via pivoted LU.
/// The empty selection yields 1.
double principal_minor(const KernelMatrix& m, const SubsetIndex& a);

/// det of the submatrix with the given rows and columns (|rows| = |cols|).
double rectangular_minor(const Matrix& m, const SubsetIndex& rows, const SubsetIndex& cols);

/// Numerical rank and nullspace by SVD with the pseudoinverse convention
/// tolerance = rel_tol * sigma_max * max(rows, cols).
RankReport rank_and_nullspace(const Matrix& m, double rel_tol = 1e-10);

/// Groups consecutive (descending) eigenvalues whose gap is at most
/// cluster_tol * max(1, max|lambda|). Returns 1-based index groups that
/// partition 1..n.
std::vector<std::vector<int>> cluster_eigenvalues(const Vector& lambdas,
                                                  double cluster_tol = 1e-8);

}  // namespace dppkit
