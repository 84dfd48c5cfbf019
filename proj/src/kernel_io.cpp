#include "dppkit/kernel_io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace dppkit {

namespace {

using nlohmann::json;

Matrix matrix_from_flat(const json& arr, int n, const char* field) {
    if (!arr.is_array() || static_cast<int>(arr.size()) != n * n) {
        throw std::domain_error(std::string("kernel file: '") + field + "' must hold n*n numbers");
    }
    Matrix m(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const json& v = arr[static_cast<std::size_t>(i * n + j)];
            if (!v.is_number()) {
                throw std::domain_error(std::string("kernel file: '") + field +
                                        "' entries must be numbers");
            }
            m(i, j) = v.get<double>();
        }
    }
    if (!m.allFinite()) {
        throw std::domain_error(std::string("kernel file: '") + field +
                                "' entries must be finite");
    }
    return m;
}

KernelFile parse_kernel_json(const json& j) {
    if (!j.is_object()) throw std::domain_error("kernel file: top level must be an object");

    const bool has_matrix = j.contains("matrix");
    const bool has_spectral = j.contains("eigenvalues") || j.contains("eigenvectors");
    if (has_matrix == has_spectral) {
        throw std::domain_error(
            "kernel file: exactly one of matrix form and spectral form must be present");
    }

    KernelFile file;
    if (has_matrix) {
        if (!j.contains("n") || !j["n"].is_number_integer()) {
            throw std::domain_error("kernel file: matrix form requires an integer 'n'");
        }
        const int n = j["n"].get<int>();
        if (n < 1 || n > kMaxGroundSize) {
            throw std::domain_error("kernel file: n must be in 1..64");
        }
        file.matrix = KernelMatrix(matrix_from_flat(j["matrix"], n, "matrix"));
    } else {
        if (!j.contains("eigenvalues") || !j.contains("eigenvectors")) {
            throw std::domain_error(
                "kernel file: spectral form requires both 'eigenvalues' and 'eigenvectors'");
        }
        const json& ev = j["eigenvalues"];
        if (!ev.is_array() || ev.empty()) {
            throw std::domain_error("kernel file: 'eigenvalues' must be a nonempty array");
        }
        const int n = static_cast<int>(ev.size());
        if (n > kMaxGroundSize) throw std::domain_error("kernel file: n must be in 1..64");
        SpectralForm s;
        s.lambdas = Vector(n);
        for (int i = 0; i < n; ++i) {
            if (!ev[static_cast<std::size_t>(i)].is_number()) {
                throw std::domain_error("kernel file: 'eigenvalues' entries must be numbers");
            }
            s.lambdas(i) = ev[static_cast<std::size_t>(i)].get<double>();
        }
        if (!s.lambdas.allFinite()) {
            throw std::domain_error("kernel file: 'eigenvalues' entries must be finite");
        }
        s.u = matrix_from_flat(j["eigenvectors"], n, "eigenvectors");
        if ((s.u.transpose() * s.u - Matrix::Identity(n, n)).cwiseAbs().maxCoeff() > 1e-10) {
            throw std::domain_error("kernel file: eigenvector columns are not orthonormal");
        }
        file.spectral = std::move(s);
    }

    if (j.contains("metadata")) {
        const json& meta = j["metadata"];
        if (!meta.is_object()) throw std::domain_error("kernel file: 'metadata' must be an object");
        if (meta.contains("name")) file.name = meta["name"].get<std::string>();
        if (meta.contains("description")) file.description = meta["description"].get<std::string>();
    }
    return file;
}

}  // namespace

int KernelFile::n() const {
    if (matrix) return matrix->n();
    return static_cast<int>(spectral->lambdas.size());
}

KernelMatrix KernelFile::kernel() const {
    if (matrix) return *matrix;
    const Matrix l = reconstruct(*spectral);
    return KernelMatrix(0.5 * (l + l.transpose()));
}

KernelFile load_kernel_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::domain_error("cannot open kernel file: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_kernel_text(buffer.str());
}

KernelFile parse_kernel_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw std::domain_error(std::string("kernel file: invalid JSON: ") + e.what());
    }
    return parse_kernel_json(j);
}

void save_kernel_file(const std::string& path, const Matrix& m, const std::string& name,
                      const std::string& description) {
    const int n = static_cast<int>(m.rows());
    json j;
    j["n"] = n;
    json flat = json::array();
    for (int i = 0; i < n; ++i) {
        for (int c = 0; c < n; ++c) flat.push_back(m(i, c));
    }
    j["matrix"] = std::move(flat);
    if (!name.empty() || !description.empty()) {
        json meta = json::object();
        if (!name.empty()) meta["name"] = name;
        if (!description.empty()) meta["description"] = description;
        j["metadata"] = std::move(meta);
    }
    std::ofstream out(path);
    if (!out) throw std::domain_error("cannot write kernel file: " + path);
    out << j.dump(2) << "\n";
}

std::vector<SubsetIndex> load_subset_data(const std::string& path, int n) {
    std::ifstream in(path);
    if (!in) throw std::domain_error("cannot open data file: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_subset_data(buffer.str(), n);
}

std::vector<SubsetIndex> parse_subset_data(const std::string& text, int n) {
    std::vector<SubsetIndex> data;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        std::vector<int> elements;
        std::istringstream fields(line);
        std::string field;
        while (std::getline(fields, field, ',')) {
            std::istringstream num(field);
            int value = 0;
            if (!(num >> value)) {
                throw std::domain_error("data file line " + std::to_string(lineno) +
                                        ": expected comma-separated integers");
            }
            std::string rest;
            if (num >> rest) {
                throw std::domain_error("data file line " + std::to_string(lineno) +
                                        ": trailing characters after element");
            }
            elements.push_back(value);
        }
        if (elements.empty()) continue;  // blank or comment-only line
        std::sort(elements.begin(), elements.end());
        try {
            data.push_back(make_subset(n, std::move(elements)));
        } catch (const std::domain_error& e) {
            throw std::domain_error("data file line " + std::to_string(lineno) + ": " + e.what());
        }
    }
    return data;
}

void save_subset_data(const std::string& path, const std::vector<SubsetIndex>& data) {
    std::ofstream out(path);
    if (!out) throw std::domain_error("cannot write data file: " + path);
    for (const SubsetIndex& a : data) {
        for (std::size_t i = 0; i < a.elements.size(); ++i) {
            if (i) out << ",";
            out << a.elements[i];
        }
        out << "\n";
    }
}

}  // namespace dppkit
