#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace hdqkd {

/// A complete d-outcome projective measurement given by an orthonormal basis.
struct ProjectiveBasis {
    int dim = 0;
    std::vector<Eigen::VectorXcd> vectors;
    std::string label;
};

/// Grouping of the d outcomes into d/k disjoint blocks of size k.
/// Default blocks are contiguous: block m = {m*k, ..., m*k + k - 1}.
struct SubspacePartition {
    int d = 0;
    int k = 0;
    std::vector<std::vector<int>> blocks;

    static SubspacePartition contiguous(int d, int k);
    int block_count() const { return static_cast<int>(blocks.size()); }
};

/// Phase convention of the test basis inside each block.
/// RealHadamard is defined for k in {2, 4} only (sign patterns of the
/// experiment's wave-plate settings); ComplexFourier works for any k.
enum class PhaseFlavor { ComplexFourier, RealHadamard };

/// RealHadamard where available, ComplexFourier otherwise.
PhaseFlavor default_flavor(int k);

ProjectiveBasis computational_basis(int d);

ProjectiveBasis subspace_test_basis(int d, const SubspacePartition& part,
                                    PhaseFlavor flavor);

/// Entrywise complex conjugate of every basis vector.
ProjectiveBasis conjugate_basis(const ProjectiveBasis& b);

/// True iff within every block all cross-overlaps satisfy ||<i|m>|^2 - 1/k| <= 1e-12.
bool mub_overlap_check(const ProjectiveBasis& a, const ProjectiveBasis& b,
                       const SubspacePartition& part);

} // namespace hdqkd
