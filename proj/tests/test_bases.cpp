#include "hdqkd/bases.hpp"

#include "doctest.h"

#include <complex>

using namespace hdqkd;

namespace {

void check_orthonormal_complete(const ProjectiveBasis& b) {
    const int d = b.dim;
    REQUIRE(static_cast<int>(b.vectors.size()) == d);
    Eigen::MatrixXcd sum = Eigen::MatrixXcd::Zero(d, d);
    for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) {
            const auto o = b.vectors[i].dot(b.vectors[j]);
            CHECK(std::abs(o - (i == j ? 1.0 : 0.0)) < 1e-12);
        }
        sum += b.vectors[i] * b.vectors[i].adjoint();
    }
    CHECK((sum - Eigen::MatrixXcd::Identity(d, d)).norm() < 1e-12);
}

const std::vector<std::pair<int, int>> kScenarios = {
    {2, 2}, {4, 4}, {4, 2}, {8, 8}, {8, 4}, {8, 2}};

} // namespace

TEST_CASE("computational and test bases are orthonormal and complete") {
    for (auto [d, k] : kScenarios) {
        check_orthonormal_complete(computational_basis(d));
        const auto part = SubspacePartition::contiguous(d, k);
        check_orthonormal_complete(subspace_test_basis(d, part, PhaseFlavor::ComplexFourier));
        if (k == 2 || k == 4)
            check_orthonormal_complete(
                subspace_test_basis(d, part, PhaseFlavor::RealHadamard));
    }
}

TEST_CASE("test basis is block diagonal") {
    for (auto [d, k] : kScenarios) {
        const auto part = SubspacePartition::contiguous(d, k);
        for (auto flavor : {PhaseFlavor::ComplexFourier, PhaseFlavor::RealHadamard}) {
            if (flavor == PhaseFlavor::RealHadamard && k > 4)
                continue;
            const auto test = subspace_test_basis(d, part, flavor);
            for (int m = 0; m < part.block_count(); ++m) {
                for (int v = 0; v < k; ++v) {
                    const auto& vec = test.vectors[m * k + v];
                    for (int i = 0; i < d; ++i) {
                        const bool inside = i >= m * k && i < (m + 1) * k;
                        if (!inside)
                            CHECK(std::abs(vec(i)) <= 1e-15);
                    }
                }
            }
        }
    }
}

TEST_CASE("test basis is unbiased to the key basis within each block") {
    for (auto [d, k] : kScenarios) {
        const auto part = SubspacePartition::contiguous(d, k);
        const auto key = computational_basis(d);
        CHECK(mub_overlap_check(
            key, subspace_test_basis(d, part, PhaseFlavor::ComplexFourier), part));
        if (k == 2 || k == 4)
            CHECK(mub_overlap_check(
                key, subspace_test_basis(d, part, PhaseFlavor::RealHadamard), part));
    }
}

TEST_CASE("hadamard flavor k=2 matches the fourier basis") {
    const auto part = SubspacePartition::contiguous(8, 2);
    const auto f = subspace_test_basis(8, part, PhaseFlavor::ComplexFourier);
    const auto h = subspace_test_basis(8, part, PhaseFlavor::RealHadamard);
    for (size_t i = 0; i < f.vectors.size(); ++i)
        CHECK((f.vectors[i] - h.vectors[i]).norm() < 1e-14);
}

TEST_CASE("hadamard k=4 sign pattern") {
    const auto part = SubspacePartition::contiguous(4, 4);
    const auto h = subspace_test_basis(4, part, PhaseFlavor::RealHadamard);
    const double expected[4][4] = {{1, 1, 1, 1}, {1, 1, -1, -1}, {1, -1, 1, -1},
                                   {1, -1, -1, 1}};
    for (int v = 0; v < 4; ++v)
        for (int i = 0; i < 4; ++i)
            CHECK(std::abs(h.vectors[v](i) - 0.5 * expected[v][i]) < 1e-14);
}

TEST_CASE("conjugation is an involution") {
    const auto part = SubspacePartition::contiguous(8, 8);
    const auto b = subspace_test_basis(8, part, PhaseFlavor::ComplexFourier);
    const auto bb = conjugate_basis(conjugate_basis(b));
    for (size_t i = 0; i < b.vectors.size(); ++i)
        CHECK((b.vectors[i] - bb.vectors[i]).norm() < 1e-15);
}

TEST_CASE("default flavor and invalid arguments") {
    CHECK(default_flavor(2) == PhaseFlavor::RealHadamard);
    CHECK(default_flavor(4) == PhaseFlavor::RealHadamard);
    CHECK(default_flavor(8) == PhaseFlavor::ComplexFourier);
    CHECK_THROWS_AS(SubspacePartition::contiguous(8, 3), std::invalid_argument);
    CHECK_THROWS_AS(SubspacePartition::contiguous(0, 1), std::invalid_argument);
    const auto part = SubspacePartition::contiguous(8, 8);
    CHECK_THROWS_AS(subspace_test_basis(8, part, PhaseFlavor::RealHadamard),
                    std::invalid_argument);
}
