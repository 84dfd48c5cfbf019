#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "dppkit/dpp.hpp"
#include "dppkit/errors.hpp"
#include "dppkit/kdpp.hpp"
#include "dppkit/rng.hpp"
#include "support/oracles.hpp"

using namespace dppkit;

namespace {

Matrix diag3(double a, double b, double c) {
    Matrix d = Matrix::Zero(3, 3);
    d.diagonal() << a, b, c;
    return d;
}

}  // namespace

TEST_SUITE("dpp") {

TEST_CASE("dpp_probability hand values") {
    CHECK(dpp_probability(KernelMatrix(Matrix::Identity(1, 1)), make_subset(1, {1})) ==
          doctest::Approx(0.5).epsilon(1e-12));
    CHECK(dpp_probability(KernelMatrix(Matrix::Identity(2, 2)), make_subset(2, {})) ==
          doctest::Approx(0.25).epsilon(1e-12));
    CHECK(dpp_probability(KernelMatrix(diag3(1, 2, 3)), make_subset(3, {1, 3})) ==
          doctest::Approx(1.0 / 8.0).epsilon(1e-12));
}

TEST_CASE("dpp_probability rejects indefinite kernels") {
    Matrix m = Matrix::Identity(2, 2);
    m(1, 1) = -0.5;
    CHECK_THROWS_AS(dpp_probability(KernelMatrix(m), make_subset(2, {1})), std::domain_error);
}

TEST_CASE("dpp table normalizes and matches the determinant ratio") {
    CounterRng rng(3);
    for (int n : {1, 2, 4, 6}) {
        const KernelMatrix l(oracles::random_spd(n, rng));
        const DppDistribution d = dpp_distribution(l);
        double total = 0.0;
        const double det_l_plus_i = std::exp(d.log_normalizer);
        for (int k = 0; k <= n; ++k) {
            for (const SubsetIndex& a : enumerate_subsets(n, k)) {
                const double p = d.prob(a);
                CHECK(p >= 0.0);
                CHECK(p * det_l_plus_i ==
                      doctest::Approx(principal_minor(l, a)).epsilon(1e-10));
                total += p;
            }
        }
        CHECK(total == doctest::Approx(1.0).epsilon(1e-10));
    }
}

TEST_CASE("dpp tables are capped at n = 20") {
    CHECK_THROWS_AS(dpp_distribution(KernelMatrix(Matrix::Identity(21, 21))), CapacityError);
}

TEST_CASE("cardinality_law hand values") {
    {
        const std::vector<double> lam{1.0, 1.0, 1.0};
        const CardinalityLaw law = cardinality_law(lam);
        const std::vector<double> expected{1.0 / 8, 3.0 / 8, 3.0 / 8, 1.0 / 8};
        REQUIRE(law.probs.size() == 4);
        for (std::size_t i = 0; i < expected.size(); ++i) {
            CHECK(law.probs[i] == doctest::Approx(expected[i]).epsilon(1e-12));
        }
    }
    {
        const std::vector<double> lam{0.0, 0.0};
        const CardinalityLaw law = cardinality_law(lam);
        CHECK(law.probs[0] == doctest::Approx(1.0));
        CHECK(law.probs[1] == doctest::Approx(0.0));
        CHECK(law.probs[2] == doctest::Approx(0.0));
    }
    {
        const std::vector<double> lam{1.0};
        const CardinalityLaw law = cardinality_law(lam);
        CHECK(law.probs[0] == doctest::Approx(0.5));
        CHECK(law.probs[1] == doctest::Approx(0.5));
    }
    const std::vector<double> negative{1.0, -0.5};
    CHECK_THROWS_AS(cardinality_law(negative), std::domain_error);
}

TEST_CASE("cardinality_law matches aggregation of the dpp table") {
    CounterRng rng(13);
    for (int n : {2, 5, 10}) {
        const KernelMatrix l(oracles::random_spd(n, rng));
        const SpectralForm s = eig_sym(l);
        const CardinalityLaw law = cardinality_law(span_of(s.lambdas));
        const DppDistribution d = dpp_distribution(l);
        for (int k = 0; k <= n; ++k) {
            double agg = 0.0;
            for (double p : d.table[static_cast<std::size_t>(k)]) agg += p;
            CHECK(law.probs[static_cast<std::size_t>(k)] ==
                  doctest::Approx(agg).epsilon(1e-10));
        }
    }
}

TEST_CASE("marginal_kernel closed forms") {
    {
        const KernelMatrix k = marginal_kernel(KernelMatrix(Matrix::Identity(3, 3)));
        CHECK((k.mat() - 0.5 * Matrix::Identity(3, 3)).cwiseAbs().maxCoeff() <= 1e-12);
    }
    {
        Matrix d = Matrix::Zero(2, 2);
        d.diagonal() << 1.0, 3.0;
        const KernelMatrix k = marginal_kernel(KernelMatrix(d));
        CHECK(k.mat()(0, 0) == doctest::Approx(0.5).epsilon(1e-12));
        CHECK(k.mat()(1, 1) == doctest::Approx(0.75).epsilon(1e-12));
        CHECK(std::abs(k.mat()(0, 1)) <= 1e-12);
    }
    {
        Matrix l(2, 2);
        l << 2.0, 1.0, 1.0, 2.0;
        const KernelMatrix km(l);
        const KernelMatrix k = marginal_kernel(km);
        const SpectralForm sk = eig_sym(k);
        CHECK(sk.lambdas(0) == doctest::Approx(0.75).epsilon(1e-12));
        CHECK(sk.lambdas(1) == doctest::Approx(0.5).epsilon(1e-12));
        // same eigenvectors as L, and K(L+I) = L
        const SpectralForm sl = eig_sym(km);
        CHECK((sk.u - sl.u).cwiseAbs().maxCoeff() <= 1e-10);
        CHECK((k.mat() * (l + Matrix::Identity(2, 2)) - l).cwiseAbs().maxCoeff() <= 1e-12);
    }
}

TEST_CASE("inclusion_probability hand values and brute-force sums") {
    CHECK(inclusion_probability(KernelMatrix(Matrix::Identity(3, 3)), make_subset(3, {1})) ==
          doctest::Approx(0.5).epsilon(1e-12));
    CHECK(inclusion_probability(KernelMatrix(Matrix::Identity(3, 3)), make_subset(3, {1, 2})) ==
          doctest::Approx(0.25).epsilon(1e-12));
    CHECK(inclusion_probability(KernelMatrix(diag3(1, 2, 3)), make_subset(3, {2, 3})) ==
          doctest::Approx(0.5).epsilon(1e-12));

    CounterRng rng(29);
    const auto brute_inclusion = [](const DppDistribution& d, const SubsetIndex& s, int n) {
        double total = 0.0;
        for (int k = 0; k <= n; ++k) {
            for (const SubsetIndex& a : enumerate_subsets(n, k)) {
                bool superset = true;
                for (int el : s.elements) superset = superset && a.contains(el);
                if (superset) total += d.prob(a);
            }
        }
        return total;
    };
    for (int n : {3, 6, 10}) {
        const KernelMatrix l(oracles::random_spd(n, rng));
        const DppDistribution d = dpp_distribution(l);
        for (const SubsetIndex& s : enumerate_subsets(n, 2)) {
            CHECK(inclusion_probability(l, s) ==
                  doctest::Approx(brute_inclusion(d, s, n)).epsilon(1e-10));
        }
    }
    {
        // every subset size at n = 5
        const int n = 5;
        const KernelMatrix l(oracles::random_spd(n, rng));
        const DppDistribution d = dpp_distribution(l);
        for (int j = 0; j <= n; ++j) {
            for (const SubsetIndex& s : enumerate_subsets(n, j)) {
                CHECK(inclusion_probability(l, s) ==
                      doctest::Approx(brute_inclusion(d, s, n)).epsilon(1e-10));
            }
        }
    }
}

TEST_CASE("stratification identity: P(A) = P(|A|=k) * P_k(A)") {
    CounterRng rng(37);
    for (int n : {1, 2, 3, 4, 6, 10}) {
        const KernelMatrix l(oracles::random_spd(n, rng));
        const SpectralForm s = eig_sym(l);
        const DppDistribution d = dpp_distribution(l);
        const CardinalityLaw law = cardinality_law(span_of(s.lambdas));
        for (int k = 0; k <= n; ++k) {
            const KDppDistribution dk = kdpp_distribution(l, k);
            for (const SubsetIndex& a : enumerate_subsets(n, k)) {
                CHECK(d.prob(a) ==
                      doctest::Approx(law.probs[static_cast<std::size_t>(k)] * dk.prob(a))
                          .epsilon(1e-10));
            }
        }
    }
}

}  // TEST_SUITE
