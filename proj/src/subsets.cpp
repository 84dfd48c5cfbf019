#include "dppkit/subsets.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>

#include "dppkit/errors.hpp"

namespace dppkit {

namespace {

// Materialized subset lists beyond this size are refused outright.
constexpr std::int64_t kEnumerateCap = 5'000'000;

}  // namespace

bool SubsetIndex::contains(int element) const {
    return std::binary_search(elements.begin(), elements.end(), element);
}

std::int64_t binomial(int n, int k) {
    if (n < 0 || n > kMaxGroundSize) {
        throw std::domain_error("binomial: n must be in 0.." + std::to_string(kMaxGroundSize) +
                                ", got " + std::to_string(n));
    }
    if (k < 0 || k > n) return 0;
    k = std::min(k, n - k);
    // Multiply-then-divide stays integral at every step; the widened
    // accumulator absorbs the pre-division overshoot near C(64,32).
    unsigned __int128 acc = 1;
    for (int i = 1; i <= k; ++i) {
        acc = acc * static_cast<unsigned>(n - k + i) / static_cast<unsigned>(i);
    }
    return static_cast<std::int64_t>(acc);
}

std::int64_t subset_rank(int n, std::span<const int> elements) {
    const int k = static_cast<int>(elements.size());
    std::int64_t rank = 0;
    int prev = 0;
    for (int i = 0; i < k; ++i) {
        const int c = elements[i];
        if (c <= prev || c > n) {
            throw std::domain_error("subset_rank: elements must be strictly increasing within 1..n");
        }
        for (int v = prev + 1; v < c; ++v) {
            rank += binomial(n - v, k - 1 - i);
        }
        prev = c;
    }
    return rank;
}

SubsetIndex subset_unrank(int n, int k, std::int64_t rank) {
    if (k < 0 || k > n) throw std::domain_error("subset_unrank: k must be in 0..n");
    if (rank < 0 || rank >= binomial(n, k)) {
        throw std::domain_error("subset_unrank: rank out of range");
    }
    SubsetIndex s;
    s.n = n;
    s.rank = rank;
    s.elements.reserve(k);
    int v = 1;
    for (int i = 0; i < k; ++i) {
        for (;; ++v) {
            const std::int64_t block = binomial(n - v, k - 1 - i);
            if (rank < block) break;
            rank -= block;
        }
        s.elements.push_back(v);
        ++v;
    }
    return s;
}

SubsetIndex make_subset(int n, std::vector<int> elements) {
    SubsetIndex s;
    s.n = n;
    s.rank = subset_rank(n, elements);  // validates ordering and range
    s.elements = std::move(elements);
    return s;
}

std::vector<SubsetIndex> enumerate_subsets(int n, int k) {
    if (n < 1 || n > kMaxGroundSize) {
        throw std::domain_error("enumerate_subsets: n must be in 1.." + std::to_string(kMaxGroundSize));
    }
    if (k < 0 || k > n) throw std::domain_error("enumerate_subsets: k must be in 0..n");
    const std::int64_t count = binomial(n, k);
    if (count > kEnumerateCap) {
        throw CapacityError("enumerate_subsets: C(n,k) exceeds the materialization cap");
    }

    std::vector<SubsetIndex> out;
    out.reserve(static_cast<std::size_t>(count));
    std::vector<int> cur(static_cast<std::size_t>(k));
    std::iota(cur.begin(), cur.end(), 1);
    for (std::int64_t r = 0; r < count; ++r) {
        SubsetIndex s;
        s.elements = cur;
        s.n = n;
        s.rank = r;
        out.push_back(std::move(s));

        int i = k - 1;
        while (i >= 0 && cur[static_cast<std::size_t>(i)] == n - (k - 1 - i)) --i;
        if (i < 0) break;
        ++cur[static_cast<std::size_t>(i)];
        for (int j = i + 1; j < k; ++j) {
            cur[static_cast<std::size_t>(j)] = cur[static_cast<std::size_t>(j - 1)] + 1;
        }
    }
    return out;
}

}  // namespace dppkit
