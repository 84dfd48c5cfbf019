#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "dppkit/kdpp.hpp"
#include "dppkit/linalg.hpp"

namespace dppkit {

/// One combined invariance of the size-k conditional law: a positive scale on
/// the spectrum, a diagonal sign flip of the eigenvectors, and an orthogonal
/// rotation commuting with the eigenvalue matrix.
struct InvarianceTransform {
    double scale_c = 1.0;
    Vector sign_flips;  // entries +-1, length n
    Matrix rotation_q;  // orthogonal, commutes with diag(lambdas)
};

/// The transformed kernel (D U Q)(c Lambda)(D U Q)^T together with the closed
/// form c D L D it must equal.
struct AppliedInvariance {
    KernelMatrix reconstructed;
    KernelMatrix closed_form;
};

AppliedInvariance apply_invariance(const SpectralForm& spectral, const InvarianceTransform& t);

/// Total-variation distance between the two size-k conditional laws; passes
/// at 1e-10.
struct TvReport {
    double tv = 0.0;
    bool pass = false;
};

TvReport check_kdpp_invariance(const KernelMatrix& l, const KernelMatrix& m, int k);

/// Block-diagonal orthogonal matrix with an independent Haar block on each
/// eigenvalue cluster (QR of standard-normal blocks, R diagonal sign-fixed).
/// Distinct spectra force 1x1 blocks, i.e. a plain sign flip.
Matrix sample_commuting_rotation(const Vector& lambdas, std::uint64_t seed,
                                 double cluster_tol = 1e-8);

/// Log-likelihood derivative of the size-k conditional law in direction h at
/// every size-k subset, in canonical order:
///   tr(L_A^{-1} H_A) - E[tr(L_S^{-1} H_S)].
/// Requires a positive definite kernel.
Vector score(const KernelMatrix& l, const SymDirection& h, int k);

/// Matrix of the linear map H -> (tr(L_A^{-1} H_A))_A over the symmetric
/// basis {E_ii} then {E_ij + E_ji, i < j} (diagonals first, off-diagonals
/// lexicographic). Applied to the coordinates of L itself it returns k * 1.
struct PhiMap {
    int n = 0;
    Matrix matrix;  // C(n,k) x n(n+1)/2
    std::vector<std::pair<int, int>> basis_labels;  // 1-based (i,i) then (i,j)
    std::vector<SubsetIndex> subset_order;

    Vector apply(const SymDirection& h) const;
};

PhiMap build_phi(const KernelMatrix& l, int k);

/// Coordinates of a symmetric matrix in the PhiMap basis order and back.
Vector sym_to_coords(const Matrix& h);
Matrix coords_to_sym(const Vector& coords, int n);

/// Exact dimension of the space of score-invisible symmetric directions,
/// dim V = m - rank(Phi) + 1, with a basis (nullspace of Phi plus the scale
/// direction L) and the counting lower bound max(1, m - C(n,k) + 1).
struct IdentifiabilityReport {
    int n = 0;
    int k = 0;
    int m = 0;            // dim Sym(n) = n(n+1)/2
    int num_subsets = 0;  // C(n,k)
    int phi_rank = 0;
    int dim_v = 0;
    int lower_bound = 0;
    std::vector<SymDirection> basis_v;
    bool exceeds_scale_cone = false;
};

IdentifiabilityReport identifiability_report(const KernelMatrix& l, int k);

/// The equicorrelation direction -rho I + rho 1 1^T, admissible for
/// rho in (-1/(n-1), 1); added to the identity it yields constant principal
/// minors (1-rho)^{k-1} (1 + (k-1) rho) and hence a uniform conditional law.
SymDirection h_rho(int n, double rho);

}  // namespace dppkit
