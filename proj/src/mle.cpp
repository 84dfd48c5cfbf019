#include "dppkit/mle.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "dppkit/errors.hpp"

namespace dppkit {

namespace {

void validate_data(std::span<const SubsetIndex> data, int n, int k) {
    for (const SubsetIndex& a : data) {
        if (a.n != n) {
            throw std::domain_error("mle: observation ground-set size does not match the model");
        }
        if (a.k() != k) {
            throw std::domain_error("mle: mixed cardinalities in data");
        }
    }
}

Vector element_counts(std::span<const SubsetIndex> data, int n) {
    Vector counts = Vector::Zero(n);
    for (const SubsetIndex& a : data) {
        for (int el : a.elements) counts(el - 1) += 1.0;
    }
    return counts;
}

}  // namespace

double log_likelihood(std::span<const SubsetIndex> data, const MinimalParam& p, int k) {
    const int n = static_cast<int>(p.theta_tilde.size()) + 1;
    validate_data(data, n, k);
    const Vector theta = from_minimal(p);
    const double psi = log_partition(theta, k);
    double ll = 0.0;
    for (const SubsetIndex& a : data) {
        for (int el : a.elements) ll += theta(el - 1);
    }
    return ll - psi * static_cast<double>(data.size());
}

Vector gradient(std::span<const SubsetIndex> data, const MinimalParam& p, int k) {
    const int n = static_cast<int>(p.theta_tilde.size()) + 1;
    validate_data(data, n, k);
    const Vector eta = mean_parameter(from_minimal(p), k);
    const Vector counts = element_counts(data, n);
    return counts.head(n - 1) - static_cast<double>(data.size()) * eta.head(n - 1);
}

FitResult fit(std::span<const SubsetIndex> data, int k, const FitConfig& config) {
    if (data.empty()) throw std::domain_error("fit: data must be nonempty");
    if (config.max_iters < 1) throw std::domain_error("fit: max_iters must be at least 1");
    if (config.grad_tol <= 0.0) throw std::domain_error("fit: grad_tol must be positive");
    const int n = data[0].n;
    validate_data(data, n, k);
    if (k < 1 || k > n - 1) throw std::domain_error("fit: k must be in 1..n-1");

    const Vector counts = element_counts(data, n);
    const auto num_obs = static_cast<double>(data.size());
    for (int i = 0; i < n; ++i) {
        if (counts(i) == 0.0) {
            throw BoundaryMleError(
                "fit: element " + std::to_string(i + 1) + " is absent from every observation",
                i + 1);
        }
        if (counts(i) == num_obs) {
            throw BoundaryMleError(
                "fit: element " + std::to_string(i + 1) + " is present in every observation",
                i + 1);
        }
    }

    MinimalParam p;
    if (config.init == InitRule::zeros) {
        p.theta_tilde = Vector::Zero(n - 1);
    } else {
        Vector theta(n);
        for (int i = 0; i < n; ++i) {
            const double freq = counts(i) / num_obs;  // in (0,1) after the boundary check
            theta(i) = std::log(freq / (1.0 - freq));
        }
        p = to_minimal(theta);
    }

    double ll = log_likelihood(data, p, k);
    Vector g = gradient(data, p, k);
    double gn = g.norm();
    int iters = 0;
    bool converged = gn <= config.grad_tol;

    // The Armijo step never grows again, so once it has shrunk below the
    // curvature scale every later step contracts the gradient. When the
    // certified gain falls under the objective's floating-point resolution
    // the test is skipped and the (already safe) step applied open-loop;
    // the gradient itself stays accurate to machine precision throughout.
    double step = 1.0;
    while (!converged && iters < config.max_iters) {
        if (config.step_rule == StepRule::fixed) {
            p.theta_tilde += config.fixed_step * g;
            ll = log_likelihood(data, p, k);
        } else {
            const double noise = 1e-12 * (1.0 + std::abs(ll));
            bool accepted = false;
            MinimalParam trial;
            while (step >= 1e-18) {
                trial.theta_tilde = p.theta_tilde + step * g;
                const double trial_ll = log_likelihood(data, trial, k);
                const double gain = config.armijo_c1 * step * gn * gn;
                if (trial_ll >= ll + gain || gain <= noise) {
                    p = trial;
                    ll = trial_ll;
                    accepted = true;
                    break;
                }
                step *= config.backtrack_beta;
            }
            if (!accepted) break;
        }
        ++iters;
        g = gradient(data, p, k);
        gn = g.norm();
        converged = gn <= config.grad_tol;
    }

    FitResult result;
    result.theta_tilde_hat = p;
    result.log_likelihood = ll;
    result.grad_norm = gn;
    result.iters = iters;
    result.converged = converged;
    return result;
}

}  // namespace dppkit
