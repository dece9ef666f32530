#include "hdqkd/protocol_stats.hpp"

#include <cmath>
#include <stdexcept>

namespace hdqkd {

JointDistribution joint_probabilities(const BipartiteState& rho,
                                      const ProjectiveBasis& basis_a,
                                      const ProjectiveBasis& basis_b) {
    const int d = rho.local_dim();
    if (basis_a.dim != d || basis_b.dim != d)
        throw std::invalid_argument("joint_probabilities: dimension mismatch");

    JointDistribution out;
    out.d = d;
    out.probs.resize(d, d);
    Eigen::VectorXcd joint(static_cast<long>(d) * d);
    for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) {
            for (int r = 0; r < d; ++r)
                for (int s = 0; s < d; ++s)
                    joint(static_cast<long>(r) * d + s) =
                        basis_a.vectors[i](r) * basis_b.vectors[j](s);
            const std::complex<double> p = joint.adjoint() * rho.matrix() * joint;
            double v = p.real();
            // PSD inputs guarantee nonnegativity; only float noise is clamped.
            if (v < -1e-10)
                throw std::domain_error("joint_probabilities: negative probability");
            out.probs(i, j) = std::max(v, 0.0);
        }
    }
    if (std::abs(out.probs.sum() - 1.0) > 1e-10)
        throw std::domain_error("joint_probabilities: distribution does not sum to 1");
    return out;
}

PostSelection subspace_postselect(const JointDistribution& p,
                                  const SubspacePartition& part) {
    if (part.d != p.d)
        throw std::invalid_argument("subspace_postselect: partition dimension mismatch");

    PostSelection out;
    std::vector<double> block_mass(part.block_count(), 0.0);
    for (int m = 0; m < part.block_count(); ++m)
        for (int i : part.blocks[m])
            for (int j : part.blocks[m])
                block_mass[m] += p.probs(i, j);
    double total = 0.0;
    for (double w : block_mass)
        total += w;
    if (total <= 0.0)
        throw std::domain_error("subspace_postselect: same-subspace mass is zero");
    out.same_subspace_probability = total;

    const int k = part.k;
    for (int m = 0; m < part.block_count(); ++m) {
        SubspaceConditional sc;
        sc.block = m;
        sc.weight = block_mass[m] / total;
        sc.conditional.d = k;
        sc.conditional.probs.resize(k, k);
        for (int a = 0; a < k; ++a)
            for (int b = 0; b < k; ++b)
                sc.conditional.probs(a, b) =
                    p.probs(part.blocks[m][a], part.blocks[m][b]) / block_mass[m];
        out.blocks.push_back(std::move(sc));
    }
    return out;
}

ErrorVector error_vector(const JointDistribution& p) {
    const int k = p.d;
    ErrorVector e;
    e.e.assign(k, 0.0);
    for (int j = 0; j < k; ++j)
        for (int i = 0; i < k; ++i)
            e.e[j] += p.probs(i, (i + j) % k);
    return e;
}

double shannon_entropy(const std::vector<double>& probs) {
    double h = 0.0;
    for (double q : probs)
        if (q > 0.0)
            h -= q * std::log2(q);
    return h;
}

double shannon_entropy(const ErrorVector& e) { return shannon_entropy(e.e); }

} // namespace hdqkd
