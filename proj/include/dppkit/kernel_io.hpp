#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dppkit/linalg.hpp"
#include "dppkit/subsets.hpp"

namespace dppkit {

/// On-disk kernel description: either a dense symmetric matrix
///   {"n": 3, "matrix": [row-major n*n reals]}
/// or a spectral pair
///   {"eigenvalues": [n reals], "eigenvectors": [row-major n*n reals]}
/// (columns of the stored matrix are the eigenvectors), plus optional
/// {"metadata": {"name": ..., "description": ...}}. Exactly one form must be
/// present; matrix form is checked for symmetry, spectral form for
/// orthogonality. NaN/Inf are rejected.
struct KernelFile {
    std::optional<KernelMatrix> matrix;
    std::optional<SpectralForm> spectral;
    std::string name;
    std::string description;

    int n() const;
    bool is_spectral() const { return spectral.has_value(); }

    /// The kernel either way: the stored matrix, or U diag(lambda) U^T.
    KernelMatrix kernel() const;
};

KernelFile load_kernel_file(const std::string& path);
KernelFile parse_kernel_text(const std::string& text);

void save_kernel_file(const std::string& path, const Matrix& m, const std::string& name = "",
                      const std::string& description = "");

/// Plain-text subset data: one subset per line, comma-separated 1-based
/// elements, '#' starts a comment, blank lines are skipped.
std::vector<SubsetIndex> load_subset_data(const std::string& path, int n);
std::vector<SubsetIndex> parse_subset_data(const std::string& text, int n);

void save_subset_data(const std::string& path, const std::vector<SubsetIndex>& data);

}  // namespace dppkit
