#pragma once

#include <vector>

#include "dppkit/linalg.hpp"
#include "dppkit/subsets.hpp"

namespace dppkit {

/// Order-k compound matrix: entry (A, B) = det(M_{A,B}) over the canonical
/// subset order. Materialized only while C(n,k) <= 1000.
struct CompoundMatrix {
    int k = 0;
    int base_n = 0;
    std::vector<SubsetIndex> index;
    Matrix entries;
};

CompoundMatrix compound(const Matrix& m, int k);

/// Inclusion probability of S as the diagonal entry of the order-|S| compound
/// of the marginal kernel; must agree with det(K_S).
double inclusion_via_exterior(const KernelMatrix& l, const SubsetIndex& s);

/// Plucker coordinates p_ij = det(V_{ij}) of an orthonormal 4x2 frame, the
/// quadratic relation residual |p12 p34 - p13 p24 + p14 p23|, and the
/// sign-resolved square-root identity on the squared coordinates (minimum
/// residual over the four +- patterns).
struct PluckerReport {
    double p12 = 0.0, p13 = 0.0, p14 = 0.0, p23 = 0.0, p24 = 0.0, p34 = 0.0;
    double plucker_residual = 0.0;
    double sqrt_identity_residual = 0.0;
    bool pass = false;
};

PluckerReport plucker_check(const Matrix& v);

/// Numerical contrast between the two objects: scaling the kernel leaves the
/// size-k conditional law untouched (tv ~ 0) while the order-k inclusion
/// probabilities move (deviation > 0 for c != 1).
struct ScaleContrastReport {
    double tv = 0.0;
    double max_inclusion_deviation = 0.0;
};

ScaleContrastReport scale_invariance_contrast(const KernelMatrix& l, double c, int k);

}  // namespace dppkit
