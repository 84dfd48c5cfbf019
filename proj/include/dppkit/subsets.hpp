#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace dppkit {

/// Hard cap on the ground-set size handled anywhere in the library.
inline constexpr int kMaxGroundSize = 64;

/// A size-k subset of {1,...,n} together with its 0-based position in the
/// canonical ordering of all size-k subsets. Canonical order is lexicographic
/// on the sorted element list: {1,2} < {1,3} < {2,3}.
struct SubsetIndex {
    std::vector<int> elements;  // strictly increasing, 1-based
    int n = 0;
    std::int64_t rank = 0;

    int k() const { return static_cast<int>(elements.size()); }
    bool contains(int element) const;
};

/// Exact binomial coefficient. Requires 0 <= n <= 64 so the result fits in
/// a signed 64-bit integer; returns 0 for k outside 0..n.
std::int64_t binomial(int n, int k);

/// Lexicographic rank of a strictly increasing 1-based element list.
std::int64_t subset_rank(int n, std::span<const int> elements);

/// Inverse of subset_rank.
SubsetIndex subset_unrank(int n, int k, std::int64_t rank);

/// Validates the element list (strictly increasing, within 1..n) and attaches
/// its canonical rank.
SubsetIndex make_subset(int n, std::vector<int> elements);

/// All size-k subsets of {1,...,n} in canonical order, rank fields 0..C(n,k)-1.
std::vector<SubsetIndex> enumerate_subsets(int n, int k);

}  // namespace dppkit
