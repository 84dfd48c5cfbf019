// dppkit command-line front end: exact DPP / k-DPP probabilities, Fisher
// information of the diagonal model, identifiability reports, invariance
// checks, inclusion probabilities through exterior powers, and maximum
// likelihood fitting of the diagonal model.
//
// Exit codes: 0 ok, 2 bad input, 3 degenerate stratum, 4 singular kernel,
// 5 boundary MLE, 6 capacity exceeded, 7 not a projection kernel.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "dppkit/dpp.hpp"
#include "dppkit/errors.hpp"
#include "dppkit/exterior.hpp"
#include "dppkit/identifiability.hpp"
#include "dppkit/kdpp.hpp"
#include "dppkit/kernel_io.hpp"
#include "dppkit/mle.hpp"

namespace {

using dppkit::KernelMatrix;
using dppkit::Matrix;
using dppkit::SubsetIndex;
using dppkit::Vector;
using nlohmann::json;

std::string sig12(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

std::vector<double> parse_csv_doubles(const std::string& text) {
    std::vector<double> out;
    std::istringstream in(text);
    std::string field;
    while (std::getline(in, field, ',')) {
        std::istringstream num(field);
        double v = 0.0;
        std::string rest;
        if (!(num >> v) || (num >> rest)) {
            throw std::domain_error("expected a comma-separated list of numbers: '" + text + "'");
        }
        out.push_back(v);
    }
    if (out.empty()) throw std::domain_error("empty numeric list");
    return out;
}

std::vector<int> parse_csv_ints(const std::string& text) {
    std::vector<int> out;
    for (double v : parse_csv_doubles(text)) {
        const int i = static_cast<int>(v);
        if (static_cast<double>(i) != v) {
            throw std::domain_error("expected integers: '" + text + "'");
        }
        out.push_back(i);
    }
    return out;
}

json vector_to_json(const Vector& v) {
    json arr = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v(i));
    return arr;
}

json matrix_to_json(const Matrix& m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

json subset_to_json(const SubsetIndex& a) {
    json arr = json::array();
    for (int el : a.elements) arr.push_back(el);
    return arr;
}

std::string subset_to_text(const SubsetIndex& a) {
    if (a.elements.empty()) return "-";
    std::string out;
    for (std::size_t i = 0; i < a.elements.size(); ++i) {
        if (i) out += ",";
        out += std::to_string(a.elements[i]);
    }
    return out;
}

struct ProbOpts {
    std::string kernel_path;
    std::optional<int> k;
    bool full = false;
    std::string subset;
    bool table = false;
    bool as_json = false;
};

int cmd_prob(const ProbOpts& opts) {
    if (opts.full == opts.k.has_value()) {
        throw std::domain_error("prob: choose exactly one of --k and --full");
    }
    if (opts.subset.empty() == !opts.table) {
        throw std::domain_error("prob: choose exactly one of --subset and --table");
    }
    const KernelMatrix kernel = dppkit::load_kernel_file(opts.kernel_path).kernel();
    const int n = kernel.n();

    std::vector<std::pair<SubsetIndex, double>> records;
    if (opts.k) {
        const dppkit::KDppDistribution dist = dppkit::kdpp_distribution(kernel, *opts.k);
        if (opts.table) {
            for (std::size_t i = 0; i < dist.support.size(); ++i) {
                records.emplace_back(dist.support[i], dist.table[i]);
            }
        } else {
            auto elements = parse_csv_ints(opts.subset);
            std::sort(elements.begin(), elements.end());
            const SubsetIndex a = dppkit::make_subset(n, std::move(elements));
            if (a.k() != *opts.k) {
                throw std::domain_error("prob: subset size does not match --k");
            }
            records.emplace_back(a, dist.prob(a));
        }
    } else {
        if (opts.table) {
            const dppkit::DppDistribution dist = dppkit::dpp_distribution(kernel);
            for (int k = 0; k <= n; ++k) {
                for (const SubsetIndex& a : dppkit::enumerate_subsets(n, k)) {
                    records.emplace_back(a, dist.prob(a));
                }
            }
        } else {
            auto elements = parse_csv_ints(opts.subset);
            std::sort(elements.begin(), elements.end());
            const SubsetIndex a = dppkit::make_subset(n, std::move(elements));
            records.emplace_back(a, dppkit::dpp_probability(kernel, a));
        }
    }

    if (opts.as_json) {
        json out;
        out["mode"] = opts.k ? "kdpp" : "dpp";
        out["n"] = n;
        if (opts.k) out["k"] = *opts.k;
        json recs = json::array();
        for (const auto& [subset, prob] : records) {
            recs.push_back({{"subset", subset_to_json(subset)}, {"prob", prob}});
        }
        out["records"] = std::move(recs);
        std::cout << out.dump(2) << "\n";
    } else {
        for (const auto& [subset, prob] : records) {
            std::cout << subset_to_text(subset) << " " << sig12(prob) << "\n";
        }
    }
    return 0;
}

struct FisherOpts {
    std::string kernel_path;
    std::string theta;
    int k = 0;
};

int cmd_fisher(const FisherOpts& opts) {
    if (opts.kernel_path.empty() == opts.theta.empty()) {
        throw std::domain_error("fisher: supply exactly one of a kernel file and --theta");
    }
    Vector theta;
    std::string source;
    if (!opts.theta.empty()) {
        const auto values = parse_csv_doubles(opts.theta);
        theta = Eigen::Map<const Vector>(values.data(), static_cast<Eigen::Index>(values.size()));
        source = "theta";
    } else {
        const dppkit::KernelFile file = dppkit::load_kernel_file(opts.kernel_path);
        Vector lambdas;
        Matrix u;
        if (file.is_spectral()) {
            lambdas = file.spectral->lambdas;
            u = file.spectral->u;
        } else if (Matrix offdiag = file.matrix->mat();
                   (offdiag - Matrix(offdiag.diagonal().asDiagonal())).cwiseAbs().maxCoeff() <=
                   1e-12 * std::max(1.0, offdiag.cwiseAbs().maxCoeff())) {
            // already diagonal: keep the caller's element order
            lambdas = offdiag.diagonal();
            u = Matrix::Identity(offdiag.rows(), offdiag.cols());
        } else {
            const dppkit::SpectralForm s = dppkit::eig_sym(*file.matrix);
            lambdas = s.lambdas;
            u = s.u;
        }
        if ((u - Matrix::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff() > 1e-8) {
            std::cerr << "warning: eigenvector orientation differs from the identity; "
                         "the diagonal model uses the eigenvalues only\n";
        }
        theta = Vector(lambdas.size());
        for (Eigen::Index i = 0; i < lambdas.size(); ++i) {
            if (lambdas(i) <= 0.0) {
                throw dppkit::SingularKernelError(
                    "fisher: eigenvalues must be strictly positive to form log-parameters");
            }
            theta(i) = std::log(lambdas(i));
        }
        source = "file";
    }

    const dppkit::FisherMatrix fm = dppkit::fisher_information(theta, opts.k);
    const dppkit::SpectralForm gs = dppkit::eig_sym(KernelMatrix(fm.g));
    const dppkit::RankReport rank = dppkit::rank_and_nullspace(fm.g);

    json out;
    out["n"] = static_cast<int>(theta.size());
    out["k"] = opts.k;
    out["source"] = source;
    out["theta"] = vector_to_json(theta);
    out["eta"] = vector_to_json(fm.eta);
    out["G"] = matrix_to_json(fm.g);
    out["eigvals_G"] = vector_to_json(gs.lambdas.reverse());  // ascending
    out["rank"] = rank.rank;
    std::cout << out.dump(2) << "\n";
    return 0;
}

struct IdentOpts {
    std::string kernel_path;
    int k = 0;
    std::string emit_basis;
};

int cmd_identifiability(const IdentOpts& opts) {
    const KernelMatrix kernel = dppkit::load_kernel_file(opts.kernel_path).kernel();
    const dppkit::IdentifiabilityReport rep = dppkit::identifiability_report(kernel, opts.k);

    json out;
    out["n"] = rep.n;
    out["k"] = rep.k;
    out["m"] = rep.m;
    out["num_subsets"] = rep.num_subsets;
    out["phi_rank"] = rep.phi_rank;
    out["dim_v"] = rep.dim_v;
    out["lower_bound"] = rep.lower_bound;
    out["exceeds_scale_cone"] = rep.exceeds_scale_cone;
    if (!opts.emit_basis.empty()) {
        json files = json::array();
        for (std::size_t i = 0; i < rep.basis_v.size(); ++i) {
            const std::string path = opts.emit_basis + "." + std::to_string(i) + ".json";
            dppkit::save_kernel_file(path, rep.basis_v[i].mat(),
                                     "invisible_direction_" + std::to_string(i),
                                     "score-invisible symmetric direction, k=" +
                                         std::to_string(opts.k));
            files.push_back(path);
        }
        out["basis_files"] = std::move(files);
    }
    std::cout << out.dump(2) << "\n";
    return 0;
}

struct InvarianceOpts {
    std::string kernel_path;
    int k = 0;
    double scale = 1.0;
    std::string flip;
    std::optional<std::uint64_t> rotate_seed;
    std::string against_path;
};

int cmd_invariance(const InvarianceOpts& opts) {
    const KernelMatrix kernel = dppkit::load_kernel_file(opts.kernel_path).kernel();
    const int n = kernel.n();

    KernelMatrix other = kernel;
    if (!opts.against_path.empty()) {
        other = dppkit::load_kernel_file(opts.against_path).kernel();
    } else {
        const dppkit::SpectralForm spectral = dppkit::eig_sym(kernel);
        dppkit::InvarianceTransform t;
        t.scale_c = opts.scale;
        t.sign_flips = Vector::Ones(n);
        if (!opts.flip.empty()) {
            const auto flips = parse_csv_ints(opts.flip);
            if (static_cast<int>(flips.size()) != n) {
                throw std::domain_error("invariance: --flip must list one sign per element");
            }
            for (int i = 0; i < n; ++i) t.sign_flips(i) = static_cast<double>(flips[i]);
        }
        t.rotation_q = opts.rotate_seed
                           ? dppkit::sample_commuting_rotation(spectral.lambdas, *opts.rotate_seed)
                           : Matrix::Identity(n, n);
        other = dppkit::apply_invariance(spectral, t).reconstructed;
    }

    const dppkit::TvReport rep = dppkit::check_kdpp_invariance(kernel, other, opts.k);
    std::cout << "tv_distance = " << sig12(rep.tv) << "\n";
    std::cout << "result = " << (rep.pass ? "PASS" : "FAIL") << " (tolerance 1e-10)\n";
    return 0;
}

struct FitOpts {
    std::string data_path;
    int n = 0;
    int k = 0;
    int max_iters = 500;
    double grad_tol = 1e-8;
    std::string step = "backtracking";
    double step_size = 0.1;
    std::string init = "zeros";
};

int cmd_fit(const FitOpts& opts) {
    const auto data = dppkit::load_subset_data(opts.data_path, opts.n);
    dppkit::FitConfig config;
    config.max_iters = opts.max_iters;
    config.grad_tol = opts.grad_tol;
    config.fixed_step = opts.step_size;
    if (opts.step == "fixed") {
        config.step_rule = dppkit::StepRule::fixed;
    } else if (opts.step == "backtracking") {
        config.step_rule = dppkit::StepRule::backtracking;
    } else {
        throw std::domain_error("fit: --step must be 'fixed' or 'backtracking'");
    }
    if (opts.init == "zeros") {
        config.init = dppkit::InitRule::zeros;
    } else if (opts.init == "moment") {
        config.init = dppkit::InitRule::moment_match;
    } else {
        throw std::domain_error("fit: --init must be 'zeros' or 'moment'");
    }

    const dppkit::FitResult result = dppkit::fit(data, opts.k, config);
    const Vector eta = dppkit::mean_parameter(dppkit::from_minimal(result.theta_tilde_hat), opts.k);

    json out;
    out["n"] = opts.n;
    out["k"] = opts.k;
    out["num_observations"] = data.size();
    out["theta_tilde"] = vector_to_json(result.theta_tilde_hat.theta_tilde);
    out["log_likelihood"] = result.log_likelihood;
    out["grad_norm"] = result.grad_norm;
    out["iters"] = result.iters;
    out["converged"] = result.converged;
    out["eta"] = vector_to_json(eta);
    std::cout << out.dump(2) << "\n";
    return 0;
}

struct ExteriorOpts {
    std::string kernel_path;
    int k = 0;
    bool plucker = false;
};

int cmd_exterior(const ExteriorOpts& opts) {
    const dppkit::KernelFile file = dppkit::load_kernel_file(opts.kernel_path);

    json out;
    out["k"] = opts.k;

    // In projection mode the file holds the marginal kernel K itself; a
    // projection DPP has no finite L. Otherwise the file holds L and K is
    // derived from it.
    KernelMatrix k_matrix = file.kernel();
    if (opts.plucker) {
        if (file.n() != 4 || opts.k != 2) {
            throw std::domain_error("exterior: --plucker requires n = 4 and --k 2");
        }
        const dppkit::SpectralForm s = dppkit::eig_sym(k_matrix);
        Vector target(4);
        target << 1.0, 1.0, 0.0, 0.0;
        if ((s.lambdas - target).cwiseAbs().maxCoeff() > 1e-8) {
            throw dppkit::NotProjectionError(
                "exterior: --plucker requires a rank-2 projection kernel (eigenvalues 1,1,0,0)");
        }
        out["plucker"] = true;
    } else {
        k_matrix = dppkit::marginal_kernel(k_matrix);
    }
    out["n"] = k_matrix.n();

    const dppkit::CompoundMatrix comp = dppkit::compound(k_matrix.mat(), opts.k);
    json recs = json::array();
    double max_dev = 0.0;
    for (const SubsetIndex& sub : dppkit::enumerate_subsets(k_matrix.n(), opts.k)) {
        const double via_minor = dppkit::principal_minor(k_matrix, sub);
        const double via_ext = comp.entries(static_cast<Eigen::Index>(sub.rank),
                                            static_cast<Eigen::Index>(sub.rank));
        max_dev = std::max(max_dev, std::abs(via_minor - via_ext));
        recs.push_back({{"subset", subset_to_json(sub)},
                        {"via_minor", via_minor},
                        {"via_exterior", via_ext}});
    }
    out["records"] = std::move(recs);
    out["max_deviation"] = max_dev;

    if (opts.plucker) {
        const dppkit::SpectralForm s = dppkit::eig_sym(k_matrix);
        const dppkit::PluckerReport rep = dppkit::plucker_check(s.u.leftCols(2));
        out["plucker_residual"] = rep.plucker_residual;
        out["sqrt_identity_residual"] = rep.sqrt_identity_residual;
        out["pass"] = rep.pass;
    }
    std::cout << out.dump(2) << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact inference and identifiability analysis for finite DPPs and k-DPPs"};
    app.require_subcommand(1);

    ProbOpts prob_opts;
    auto* prob = app.add_subcommand("prob", "Subset probabilities of the DPP or a k-DPP");
    prob->add_option("kernel", prob_opts.kernel_path, "Kernel JSON file")->required();
    int prob_k = 0;
    auto* prob_k_opt = prob->add_option("--k", prob_k, "Condition on cardinality k");
    prob->add_flag("--full", prob_opts.full, "Use the unconditional DPP");
    prob->add_option("--subset", prob_opts.subset, "Comma-separated 1-based elements");
    prob->add_flag("--table", prob_opts.table, "Print the whole table");
    prob->add_flag("--json", prob_opts.as_json, "Emit JSON records");

    FisherOpts fisher_opts;
    auto* fisher = app.add_subcommand("fisher", "Fisher information of the diagonal k-DPP");
    fisher->add_option("kernel", fisher_opts.kernel_path, "Kernel JSON file");
    fisher->add_option("--theta", fisher_opts.theta, "Comma-separated log-eigenvalues");
    fisher->add_option("--k", fisher_opts.k, "Cardinality")->required();

    IdentOpts ident_opts;
    auto* ident = app.add_subcommand("identifiability",
                                     "Dimension and basis of score-invisible directions");
    ident->add_option("kernel", ident_opts.kernel_path, "Kernel JSON file")->required();
    ident->add_option("--k", ident_opts.k, "Cardinality")->required();
    ident->add_option("--emit-basis", ident_opts.emit_basis,
                      "Write basis directions as kernel files with this path prefix");

    InvarianceOpts inv_opts;
    auto* inv = app.add_subcommand("invariance",
                                   "Check that a spectral transform preserves the k-DPP");
    inv->add_option("kernel", inv_opts.kernel_path, "Kernel JSON file")->required();
    inv->add_option("--k", inv_opts.k, "Cardinality")->required();
    inv->add_option("--scale", inv_opts.scale, "Positive spectrum scale factor");
    inv->add_option("--flip", inv_opts.flip, "Comma-separated signs, one per element");
    std::uint64_t rotate_seed = 0;
    auto* seed_opt = inv->add_option("--rotate-seed", rotate_seed,
                                     "Seed for a commuting eigenspace rotation");
    inv->add_option("--against", inv_opts.against_path,
                    "Compare against this kernel file instead of a transform");

    FitOpts fit_opts;
    auto* fitcmd = app.add_subcommand("fit", "Maximum likelihood for the diagonal k-DPP");
    fitcmd->add_option("data", fit_opts.data_path, "Subset data file")->required();
    fitcmd->add_option("--n", fit_opts.n, "Ground-set size")->required();
    fitcmd->add_option("--k", fit_opts.k, "Cardinality")->required();
    fitcmd->add_option("--max-iters", fit_opts.max_iters, "Iteration cap");
    fitcmd->add_option("--grad-tol", fit_opts.grad_tol, "Gradient norm tolerance");
    fitcmd->add_option("--step", fit_opts.step, "Step rule: fixed or backtracking");
    fitcmd->add_option("--step-size", fit_opts.step_size, "Step size for --step fixed");
    fitcmd->add_option("--init", fit_opts.init, "Initialization: zeros or moment");

    ExteriorOpts ext_opts;
    auto* ext = app.add_subcommand("exterior",
                                   "Inclusion probabilities via compound matrices");
    ext->add_option("kernel", ext_opts.kernel_path, "Kernel JSON file")->required();
    ext->add_option("--k", ext_opts.k, "Inclusion order")->required();
    ext->add_flag("--plucker", ext_opts.plucker,
                  "Treat the file as a rank-2 projection kernel on n=4 and check the "
                  "quadratic relation");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (app.got_subcommand(prob)) {
            if (*prob_k_opt) prob_opts.k = prob_k;
            return cmd_prob(prob_opts);
        }
        if (app.got_subcommand(fisher)) return cmd_fisher(fisher_opts);
        if (app.got_subcommand(ident)) return cmd_identifiability(ident_opts);
        if (app.got_subcommand(inv)) {
            if (*seed_opt) inv_opts.rotate_seed = rotate_seed;
            return cmd_invariance(inv_opts);
        }
        if (app.got_subcommand(fitcmd)) return cmd_fit(fit_opts);
        if (app.got_subcommand(ext)) return cmd_exterior(ext_opts);
        return 2;
    } catch (const dppkit::DegenerateStratumError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const dppkit::SingularKernelError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const dppkit::BoundaryMleError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 5;
    } catch (const dppkit::CapacityError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 6;
    } catch (const dppkit::NotProjectionError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 7;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
