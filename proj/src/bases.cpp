#include "hdqkd/bases.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace hdqkd {

SubspacePartition SubspacePartition::contiguous(int d, int k) {
    if (d < 2 || k < 2 || d % k != 0)
        throw std::invalid_argument("SubspacePartition: k must divide d, both >= 2");
    SubspacePartition part;
    part.d = d;
    part.k = k;
    for (int m = 0; m < d / k; ++m) {
        std::vector<int> block(k);
        for (int j = 0; j < k; ++j)
            block[j] = m * k + j;
        part.blocks.push_back(std::move(block));
    }
    return part;
}

PhaseFlavor default_flavor(int k) {
    return (k == 2 || k == 4) ? PhaseFlavor::RealHadamard
                              : PhaseFlavor::ComplexFourier;
}

ProjectiveBasis computational_basis(int d) {
    if (d < 2)
        throw std::invalid_argument("computational_basis: d must be >= 2");
    ProjectiveBasis b;
    b.dim = d;
    b.label = "computational";
    for (int i = 0; i < d; ++i) {
        Eigen::VectorXcd v = Eigen::VectorXcd::Zero(d);
        v(i) = 1.0;
        b.vectors.push_back(std::move(v));
    }
    return b;
}

namespace {

// Sign rows of the k=4 real test basis, matching the four detector states
// of the cascaded wave-plate analyzer: (++++), (++--), (+-+-), (+--+).
constexpr int kHadamard4[4][4] = {
    {1, 1, 1, 1}, {1, 1, -1, -1}, {1, -1, 1, -1}, {1, -1, -1, 1}};

} // namespace

ProjectiveBasis subspace_test_basis(int d, const SubspacePartition& part,
                                    PhaseFlavor flavor) {
    if (part.d != d)
        throw std::invalid_argument("subspace_test_basis: partition dimension mismatch");
    const int k = part.k;
    if (flavor == PhaseFlavor::RealHadamard && k != 2 && k != 4)
        throw std::invalid_argument("subspace_test_basis: real-hadamard needs k in {2,4}");

    ProjectiveBasis b;
    b.dim = d;
    b.label = (flavor == PhaseFlavor::RealHadamard ? "subspace-hadamard k="
                                                   : "subspace-fourier k=") +
              std::to_string(k);
    b.vectors.resize(d);
    const double norm = 1.0 / std::sqrt(static_cast<double>(k));
    for (const auto& block : part.blocks) {
        for (int m = 0; m < k; ++m) {
            Eigen::VectorXcd v = Eigen::VectorXcd::Zero(d);
            for (int j = 0; j < k; ++j) {
                std::complex<double> phase;
                if (flavor == PhaseFlavor::RealHadamard) {
                    phase = (k == 2) ? ((m == 1 && j == 1) ? -1.0 : 1.0)
                                     : static_cast<double>(kHadamard4[m][j]);
                } else {
                    const double arg =
                        2.0 * std::numbers::pi * m * j / static_cast<double>(k);
                    phase = std::polar(1.0, arg);
                }
                v(block[j]) = norm * phase;
            }
            b.vectors[block[m]] = std::move(v);
        }
    }
    return b;
}

ProjectiveBasis conjugate_basis(const ProjectiveBasis& b) {
    ProjectiveBasis out;
    out.dim = b.dim;
    out.label = b.label + " (conjugate)";
    for (const auto& v : b.vectors)
        out.vectors.push_back(v.conjugate());
    return out;
}

bool mub_overlap_check(const ProjectiveBasis& a, const ProjectiveBasis& b,
                       const SubspacePartition& part) {
    if (a.dim != b.dim || a.dim != part.d)
        throw std::invalid_argument("mub_overlap_check: dimension mismatch");
    const double target = 1.0 / part.k;
    for (const auto& block : part.blocks)
        for (int i : block)
            for (int m : block) {
                const double ov = std::norm(a.vectors[i].dot(b.vectors[m]));
                if (std::abs(ov - target) > 1e-12)
                    return false;
            }
    return true;
}

} // namespace hdqkd
