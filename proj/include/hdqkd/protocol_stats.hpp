#pragma once

#include "hdqkd/bases.hpp"
#include "hdqkd/quantum_state.hpp"

#include <vector>

namespace hdqkd {

/// P(i,j) = probability that Alice gets outcome i and Bob gets outcome j.
struct JointDistribution {
    int d = 0;
    Eigen::MatrixXd probs;
};

/// Cyclic-shift correlation vector: e[j] = sum_i P(i, (i+j) mod k).
struct ErrorVector {
    std::vector<double> e;
    int k() const { return static_cast<int>(e.size()); }
};

/// One block of the post-selected distribution: the k x k conditional
/// distribution given both outcomes in the block, and the block's weight
/// conditioned on a same-subspace event.
struct SubspaceConditional {
    int block = 0;
    JointDistribution conditional;
    double weight = 0.0;
};

struct PostSelection {
    std::vector<SubspaceConditional> blocks;
    double same_subspace_probability = 0.0;
};

/// Born-rule evaluation: P(i,j) = <a_i b_j| rho |a_i b_j>.
JointDistribution joint_probabilities(const BipartiteState& rho,
                                      const ProjectiveBasis& basis_a,
                                      const ProjectiveBasis& basis_b);

/// Keep only outcome pairs inside a common block and renormalize per block.
PostSelection subspace_postselect(const JointDistribution& p,
                                  const SubspacePartition& part);

/// Error vector of a normalized k x k (block-conditional) distribution.
ErrorVector error_vector(const JointDistribution& p);

/// H(e) in bits, with 0 log 0 = 0.
double shannon_entropy(const ErrorVector& e);
double shannon_entropy(const std::vector<double>& probs);

} // namespace hdqkd
