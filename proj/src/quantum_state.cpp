#include "hdqkd/quantum_state.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

namespace hdqkd {

PureState::PureState(Eigen::VectorXcd amps) : amplitudes(std::move(amps)) {
    if (std::abs(amplitudes.norm() - 1.0) > kConstructTol)
        throw std::invalid_argument("PureState: vector is not unit norm");
}

BipartiteState::BipartiteState(int local_dim, Eigen::MatrixXcd rho)
    : d_(local_dim), rho_(std::move(rho)) {
    if (d_ < 2)
        throw std::invalid_argument("BipartiteState: local dimension must be >= 2");
    const long n = static_cast<long>(d_) * d_;
    if (rho_.rows() != n || rho_.cols() != n)
        throw std::invalid_argument("BipartiteState: matrix size does not match d^2");
    if ((rho_ - rho_.adjoint()).cwiseAbs().maxCoeff() > kConstructTol)
        throw std::invalid_argument("BipartiteState: matrix is not Hermitian");
    if (std::abs(rho_.trace().real() - 1.0) > kConstructTol ||
        std::abs(rho_.trace().imag()) > kConstructTol)
        throw std::invalid_argument("BipartiteState: trace is not 1");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho_, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -kEigenTol)
        throw std::invalid_argument("BipartiteState: matrix is not positive semidefinite");
}

PureState max_entangled_vector(int d) {
    if (d < 2)
        throw std::invalid_argument("max_entangled_vector: d must be >= 2");
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(static_cast<long>(d) * d);
    const double a = 1.0 / std::sqrt(static_cast<double>(d));
    for (int i = 0; i < d; ++i)
        v(static_cast<long>(i) * d + i) = a;
    return PureState(std::move(v));
}

BipartiteState max_entangled_state(int d) {
    const PureState phi = max_entangled_vector(d);
    Eigen::MatrixXcd rho = phi.amplitudes * phi.amplitudes.adjoint();
    return BipartiteState(d, std::move(rho));
}

BipartiteState apply_isotropic_noise(const BipartiteState& rho, double p) {
    if (p < 0.0 || p > 1.0)
        throw std::invalid_argument("apply_isotropic_noise: p must be in [0,1]");
    const long n = rho.matrix().rows();
    Eigen::MatrixXcd mixed =
        Eigen::MatrixXcd::Identity(n, n) / static_cast<double>(n);
    return BipartiteState(rho.local_dim(),
                          (1.0 - p) * rho.matrix() + p * mixed);
}

double fidelity_to_max_entangled(const BipartiteState& rho, int d) {
    if (rho.local_dim() != d)
        throw std::invalid_argument("fidelity_to_max_entangled: dimension mismatch");
    const PureState phi = max_entangled_vector(d);
    const std::complex<double> f =
        phi.amplitudes.adjoint() * rho.matrix() * phi.amplitudes;
    return f.real();
}

} // namespace hdqkd
