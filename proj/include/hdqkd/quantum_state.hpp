#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>

namespace hdqkd {

inline constexpr double kConstructTol = 1e-12;
inline constexpr double kEigenTol = 1e-10;

/// Unit-norm state vector on a Hilbert space of dimension `dim()`.
struct PureState {
    Eigen::VectorXcd amplitudes;

    explicit PureState(Eigen::VectorXcd amps);
    int dim() const { return static_cast<int>(amplitudes.size()); }
};

/// Density operator of a d x d bipartite system, stored as a dense
/// d^2 x d^2 matrix with index convention row/col = i*d + j for |i>|j>.
/// Hermiticity, unit trace and positive semidefiniteness are enforced
/// on construction.
class BipartiteState {
  public:
    BipartiteState(int local_dim, Eigen::MatrixXcd rho);

    int local_dim() const { return d_; }
    const Eigen::MatrixXcd& matrix() const { return rho_; }

  private:
    int d_;
    Eigen::MatrixXcd rho_;
};

/// |phi+_d> = (1/sqrt(d)) sum_i |ii>.
PureState max_entangled_vector(int d);

/// |phi+_d><phi+_d| as a BipartiteState. Rejects d < 2.
BipartiteState max_entangled_state(int d);

/// (1-p) rho + p I/d^2 with p in [0,1].
BipartiteState apply_isotropic_noise(const BipartiteState& rho, double p);

/// F+ = <phi+_d| rho |phi+_d>.
double fidelity_to_max_entangled(const BipartiteState& rho, int d);

} // namespace hdqkd
