#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "dppkit/errors.hpp"
#include "dppkit/kdpp.hpp"
#include "dppkit/rng.hpp"
#include "support/oracles.hpp"

using namespace dppkit;

namespace {

Matrix diag_of(const std::vector<double>& values) {
    const auto n = static_cast<Eigen::Index>(values.size());
    Matrix d = Matrix::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) d(i, i) = values[static_cast<std::size_t>(i)];
    return d;
}

Vector vec_of(const std::vector<double>& values) {
    Vector v(static_cast<Eigen::Index>(values.size()));
    for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = values[static_cast<std::size_t>(i)];
    return v;
}

}  // namespace

TEST_SUITE("kdpp") {

TEST_CASE("kdpp_distribution hand tables") {
    {
        const KDppDistribution d = kdpp_distribution(KernelMatrix(Matrix::Identity(3, 3)), 2);
        REQUIRE(d.table.size() == 3);
        for (double p : d.table) CHECK(p == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
    }
    {
        const KDppDistribution d = kdpp_distribution(KernelMatrix(diag_of({1, 2, 3})), 2);
        CHECK(d.z_k == doctest::Approx(11.0).epsilon(1e-14));
        CHECK(d.table[0] == doctest::Approx(2.0 / 11.0).epsilon(1e-14));
        CHECK(d.table[1] == doctest::Approx(3.0 / 11.0).epsilon(1e-14));
        CHECK(d.table[2] == doctest::Approx(6.0 / 11.0).epsilon(1e-14));
    }
    {
        const KDppDistribution d = kdpp_distribution(KernelMatrix(diag_of({1, 2, 3})), 1);
        CHECK(d.table[0] == doctest::Approx(1.0 / 6.0).epsilon(1e-14));
        CHECK(d.table[1] == doctest::Approx(2.0 / 6.0).epsilon(1e-14));
        CHECK(d.table[2] == doctest::Approx(3.0 / 6.0).epsilon(1e-14));
    }
}

TEST_CASE("kdpp_distribution tables are normalized probability vectors") {
    CounterRng rng(271);
    for (int n : {2, 4, 6}) {
        const KernelMatrix l(oracles::random_spd(n, rng));
        for (int k = 0; k <= n; ++k) {
            const KDppDistribution d = kdpp_distribution(l, k);
            CHECK(d.z_k > 0.0);
            double total = 0.0;
            for (double p : d.table) {
                CHECK(p >= 0.0);
                total += p;
            }
            CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
        }
    }
}

TEST_CASE("kdpp_distribution flags degenerate strata") {
    CHECK_THROWS_AS(kdpp_distribution(KernelMatrix(diag_of({1, 0, 0})), 2),
                    DegenerateStratumError);
    CHECK_THROWS_AS(kdpp_distribution(KernelMatrix(Matrix::Zero(3, 3)), 1),
                    DegenerateStratumError);
    CHECK_NOTHROW(kdpp_distribution(KernelMatrix(diag_of({1, 0, 0})), 1));
}

TEST_CASE("kdpp_cauchy_binet uniform and Givens examples") {
    CHECK(kdpp_cauchy_binet(Matrix::Identity(3, 3), Vector::Zero(3), 2, make_subset(3, {1, 2})) ==
          doctest::Approx(1.0 / 3.0).epsilon(1e-13));

    // Givens rotation in the (1,2) plane by pi/4, embedded in I_3.
    const double c = std::cos(M_PI / 4), s = std::sin(M_PI / 4);
    Matrix u = Matrix::Identity(3, 3);
    u(0, 0) = c;
    u(0, 1) = -s;
    u(1, 0) = s;
    u(1, 1) = c;
    const Vector theta = vec_of({std::log(1.0), std::log(2.0), std::log(3.0)});
    Vector lam = theta.array().exp();
    const Matrix l = u * lam.asDiagonal() * u.transpose();
    const KDppDistribution ref = kdpp_distribution(KernelMatrix(0.5 * (l + l.transpose())), 2);
    for (const SubsetIndex& a : enumerate_subsets(3, 2)) {
        CHECK(kdpp_cauchy_binet(u, theta, 2, a) ==
              doctest::Approx(ref.prob(a)).epsilon(1e-12));
    }

    // theta = 0 makes the law uniform for any orthogonal u.
    CounterRng rng(113);
    const Matrix q = oracles::random_orthogonal(5, rng);
    for (const SubsetIndex& a : enumerate_subsets(5, 2)) {
        CHECK(kdpp_cauchy_binet(q, Vector::Zero(5), 2, a) ==
              doctest::Approx(0.1).epsilon(1e-12));
    }
}

TEST_CASE("kdpp_cauchy_binet equals the principal-minor route on random inputs") {
    CounterRng rng(311);
    int draws = 0;
    while (draws < 50) {
        const int n = 2 + static_cast<int>(rng.next_u64() % 5);  // 2..6
        const Matrix u = oracles::random_orthogonal(n, rng);
        const Vector theta = oracles::random_theta(n, rng);
        Vector lam = theta.array().exp();
        Matrix l = u * lam.asDiagonal() * u.transpose();
        const KernelMatrix kernel(0.5 * (l + l.transpose()));
        for (int k = 1; k <= n - 1; ++k) {
            const KDppDistribution ref = kdpp_distribution(kernel, k);
            for (const SubsetIndex& a : enumerate_subsets(n, k)) {
                CHECK(std::abs(kdpp_cauchy_binet(u, theta, k, a) - ref.prob(a)) <= 1e-10);
            }
        }
        ++draws;
    }
}

TEST_CASE("kdpp_cauchy_binet rejects non-orthogonal matrices") {
    Matrix u = Matrix::Identity(3, 3);
    u(0, 1) = 0.3;
    CHECK_THROWS_AS(kdpp_cauchy_binet(u, Vector::Zero(3), 2, make_subset(3, {1, 2})),
                    std::domain_error);
}

TEST_CASE("minimal parameterization round trip") {
    const MinimalParam p = to_minimal(vec_of({1, 2, 3}));
    CHECK(p.theta_tilde(0) == doctest::Approx(-2.0));
    CHECK(p.theta_tilde(1) == doctest::Approx(-1.0));

    MinimalParam zeros;
    zeros.theta_tilde = Vector::Zero(2);
    const Vector back = from_minimal(zeros, 0.0);
    CHECK(back.cwiseAbs().maxCoeff() == 0.0);

    const Vector theta = vec_of({0.4, -1.1, 2.2});
    const MinimalParam a = to_minimal(theta);
    const MinimalParam b = to_minimal(theta.array() + 5.0);
    CHECK((a.theta_tilde - b.theta_tilde).cwiseAbs().maxCoeff() <= 1e-14);
}

TEST_CASE("log_partition values and large-shift stability") {
    CHECK(log_partition(Vector::Zero(3), 2) == doctest::Approx(std::log(3.0)).epsilon(1e-14));
    CHECK(log_partition(vec_of({std::log(1.0), std::log(2.0), std::log(3.0)}), 2) ==
          doctest::Approx(std::log(11.0)).epsilon(1e-14));
    CHECK(log_partition(vec_of({100, 100, 100}), 2) ==
          doctest::Approx(200.0 + std::log(3.0)).epsilon(1e-14));
    CHECK(std::isfinite(log_partition(vec_of({-100, 0, 100}), 2)));
}

TEST_CASE("mean_parameter closed forms") {
    {
        const Vector eta = mean_parameter(Vector::Zero(3), 2);
        for (int i = 0; i < 3; ++i) CHECK(eta(i) == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
    }
    {
        const Vector eta =
            mean_parameter(vec_of({std::log(1.0), std::log(2.0), std::log(3.0)}), 2);
        CHECK(eta(0) == doctest::Approx(5.0 / 11.0).epsilon(1e-13));
        CHECK(eta(1) == doctest::Approx(8.0 / 11.0).epsilon(1e-13));
        CHECK(eta(2) == doctest::Approx(9.0 / 11.0).epsilon(1e-13));
        CHECK(eta.sum() == doctest::Approx(2.0).epsilon(1e-13));
    }
    {
        const Vector eta = mean_parameter(Vector::Zero(2), 1);
        CHECK(eta(0) == doctest::Approx(0.5).epsilon(1e-14));
        CHECK(eta(1) == doctest::Approx(0.5).epsilon(1e-14));
    }
}

TEST_CASE("mean_parameter is the gradient of log_partition") {
    CounterRng rng(401);
    for (int n = 2; n <= 6; ++n) {
        for (int k = 1; k <= n - 1; ++k) {
            const Vector theta = oracles::random_theta(n, rng);
            const Vector eta = mean_parameter(theta, k);
            const Vector fd = oracles::fd_gradient(
                [k](const Vector& t) { return log_partition(t, k); }, theta, 1e-5);
            CHECK((eta - fd).cwiseAbs().maxCoeff() <= 1e-6);
        }
    }
}

TEST_CASE("fisher_information at the symmetric point") {
    // At theta = 0 with n = 3 the matrix is (1/3) times the orthogonal
    // projector onto the zero-sum hyperplane, for k = 1 and k = 2 alike:
    // eta_i = k/3, pi_ij = P({i,j} in A), and G = Cov(T) follows.
    Matrix expected(3, 3);
    expected << 2, -1, -1, -1, 2, -1, -1, -1, 2;
    expected /= 9.0;
    const Matrix projector =
        Matrix::Identity(3, 3) - Matrix::Ones(3, 3) / 3.0;
    for (int k : {1, 2}) {
        const FisherMatrix fm = fisher_information(Vector::Zero(3), k);
        CHECK((fm.g - expected).cwiseAbs().maxCoeff() <= 1e-12);
        CHECK((fm.g - projector / 3.0).cwiseAbs().maxCoeff() <= 1e-12);
        const SpectralForm s = eig_sym(KernelMatrix(fm.g));
        CHECK(std::abs(s.lambdas(0) - 1.0 / 3.0) <= 1e-12);
        CHECK(std::abs(s.lambdas(1) - 1.0 / 3.0) <= 1e-12);
        CHECK(std::abs(s.lambdas(2)) <= 1e-12);
        CHECK(rank_and_nullspace(fm.g).rank == 2);

        // the enumeration oracle pins the scale: the uniform law over the
        // stratum has indicator covariance exactly (1/9) [[2,-1,-1],...]
        Vector lam = Vector::Ones(3);
        const Matrix cov = oracles::indicator_covariance(
            kdpp_distribution(KernelMatrix(Matrix(lam.asDiagonal())), k));
        CHECK((fm.g - cov).cwiseAbs().maxCoeff() <= 1e-12);
    }
}

TEST_CASE("fisher_information equals the covariance of the indicator statistic") {
    const Vector theta = vec_of({std::log(1.0), std::log(2.0), std::log(3.0)});
    const FisherMatrix fm = fisher_information(theta, 2);
    Vector lam = theta.array().exp();
    const KDppDistribution dist = kdpp_distribution(KernelMatrix(Matrix(lam.asDiagonal())), 2);
    const Matrix cov = oracles::indicator_covariance(dist);
    CHECK((fm.g - cov).cwiseAbs().maxCoeff() <= 1e-12);
    // pair probabilities match the stratum law directly: pi_ij = P({i,j})
    CHECK(fm.pair_probs(0, 1) == doctest::Approx(2.0 / 11.0).epsilon(1e-13));
    CHECK(fm.pair_probs(0, 2) == doctest::Approx(3.0 / 11.0).epsilon(1e-13));
    CHECK(fm.pair_probs(1, 2) == doctest::Approx(6.0 / 11.0).epsilon(1e-13));
}

TEST_CASE("fisher_information covariance oracle on random parameters") {
    CounterRng rng(419);
    for (int n = 2; n <= 7; ++n) {
        for (int k = 1; k <= n - 1; ++k) {
            const Vector theta = oracles::random_theta(n, rng);
            const FisherMatrix fm = fisher_information(theta, k);
            Vector lam = theta.array().exp();
            const KDppDistribution dist =
                kdpp_distribution(KernelMatrix(Matrix(lam.asDiagonal())), k);
            const Matrix cov = oracles::indicator_covariance(dist);
            CHECK((fm.g - cov).cwiseAbs().maxCoeff() <= 1e-10);
        }
    }
}

TEST_CASE("fisher_information structural invariants") {
    CounterRng rng(431);
    for (int n = 3; n <= 8; ++n) {
        for (int k = 1; k <= n - 1; ++k) {
            const Vector theta = oracles::random_theta(n, rng);
            const FisherMatrix fm = fisher_information(theta, k);
            CHECK(is_symmetric(fm.g));
            CHECK(fm.eta.sum() == doctest::Approx(static_cast<double>(k)).epsilon(1e-12));
            CHECK((fm.g * Vector::Ones(n)).cwiseAbs().maxCoeff() <= 1e-10);

            const SpectralForm s = eig_sym(KernelMatrix(fm.g));
            CHECK(s.lambdas.minCoeff() >= -1e-10 * s.lambdas.cwiseAbs().maxCoeff());

            const RankReport rr = rank_and_nullspace(fm.g);
            CHECK(rr.rank == n - 1);
            REQUIRE(rr.nullspace_basis.size() == 1);
            const Vector& null_vec = rr.nullspace_basis[0];
            const Vector ones_dir = Vector::Ones(n) / std::sqrt(static_cast<double>(n));
            CHECK(std::min((null_vec - ones_dir).cwiseAbs().maxCoeff(),
                           (null_vec + ones_dir).cwiseAbs().maxCoeff()) <= 1e-8);
        }
    }
}

TEST_CASE("fisher_information is positive definite on the zero-sum hyperplane") {
    CounterRng rng(443);
    const int n = 5;
    const Vector theta = oracles::random_theta(n, rng);
    const FisherMatrix fm = fisher_information(theta, 2);
    for (int trial = 0; trial < 20; ++trial) {
        Vector u(n);
        for (int i = 0; i < n; ++i) u(i) = rng.normal();
        u.array() -= u.mean();
        u.normalize();
        CHECK(u.dot(fm.g * u) > 0.0);
    }
}

TEST_CASE("fisher_information is the Hessian of log_partition") {
    CounterRng rng(457);
    for (int n : {3, 5}) {
        for (int k = 1; k <= n - 1; ++k) {
            const Vector theta = oracles::random_theta(n, rng, 1.0);
            const FisherMatrix fm = fisher_information(theta, k);
            const Matrix fd = oracles::fd_jacobian(
                [k](const Vector& t) { return mean_parameter(t, k); }, theta, 1e-5);
            CHECK((fm.g - fd).cwiseAbs().maxCoeff() <= 1e-5);
        }
    }
}

TEST_CASE("kdpp tables are invariant under common shifts of theta") {
    const Vector theta = vec_of({0.2, -0.7, 1.4, 0.0});
    for (double shift : {5.0, -3.0}) {
        Vector lam_a = theta.array().exp();
        Vector lam_b = (theta.array() + shift).exp();
        const KDppDistribution a = kdpp_distribution(KernelMatrix(Matrix(lam_a.asDiagonal())), 2);
        const KDppDistribution b = kdpp_distribution(KernelMatrix(Matrix(lam_b.asDiagonal())), 2);
        for (std::size_t i = 0; i < a.table.size(); ++i) {
            CHECK(std::abs(a.table[i] - b.table[i]) <= 1e-12);
        }
    }
}

TEST_CASE("fisher_symmetry_check: G^(k)(theta) = G^(n-k)(-theta)") {
    {
        const FisherSymmetryReport rep = fisher_symmetry_check(Vector::Zero(3), 2);
        CHECK(rep.pass);
        CHECK(rep.max_deviation <= 1e-12);
    }
    {
        const Vector theta = vec_of({1.0, -1.0, 0.0});
        const FisherSymmetryReport rep = fisher_symmetry_check(theta, 2);
        CHECK(rep.pass);
        // brute covariance on both sides
        Vector lam = theta.array().exp();
        Vector lam_neg = (-theta).array().exp();
        const Matrix cov_k = oracles::indicator_covariance(
            kdpp_distribution(KernelMatrix(Matrix(lam.asDiagonal())), 2));
        const Matrix cov_nk = oracles::indicator_covariance(
            kdpp_distribution(KernelMatrix(Matrix(lam_neg.asDiagonal())), 1));
        CHECK((cov_k - cov_nk).cwiseAbs().maxCoeff() <= 1e-12);
    }
    {
        const FisherSymmetryReport rep = fisher_symmetry_check(vec_of({0.3, 0.1}), 1);
        CHECK(rep.pass);
    }
    CounterRng rng(461);
    for (int n = 2; n <= 6; ++n) {
        for (int k = 1; k <= n - 1; ++k) {
            const FisherSymmetryReport rep =
                fisher_symmetry_check(oracles::random_theta(n, rng), k);
            CHECK(rep.max_deviation <= 1e-10);
        }
    }
}

TEST_CASE("minimality_check ranks") {
    {
        const MinimalityReport rep = minimality_check(3, 2);
        CHECK(rep.minimal_rank == 3);
        CHECK(rep.full_rank == 3);
        CHECK(rep.minimal_full_column_rank);
    }
    {
        const MinimalityReport rep = minimality_check(4, 1);
        CHECK(rep.minimal_rank == 4);
        CHECK(rep.full_rank == 4);
    }
    {
        const MinimalityReport rep = minimality_check(2, 1);
        CHECK(rep.minimal_rank == 2);
    }
}

}  // TEST_SUITE
