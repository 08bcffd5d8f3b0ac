#include "spinrestore/chain.hpp"

#include <cmath>

#include <fmt/format.h>

namespace spinrestore {

void Layout::validate() const {
    if (n < 2) throw ConfigError(fmt::format("N={} : the chain needs at least 2 nodes", n));
    if (n_s < 1) throw ConfigError(fmt::format("N_S={} : the sender needs at least 1 node", n_s));
    if (n_r != n_s) throw ConfigError(fmt::format("N_R={} must equal N_S={}", n_r, n_s));
    if (n_er < n_r) throw ConfigError(fmt::format("N_ER={} is smaller than N_R={}", n_er, n_r));
    if (n_er > n - n_s)
        throw ConfigError(fmt::format("N_ER={} overlaps the sender: N_ER must not exceed N - N_S = {}", n_er, n - n_s));
    if (control_dim() <= equation_count())
        throw ConfigError(fmt::format(
            "controllability bound N_ER(N_ER-1) > 2 N_S(N_S-1) violated: {}*{} = {} <= 2*{}*{} = {}",
            n_er, n_er - 1, control_dim(), n_s, n_s - 1, equation_count()));
}

CouplingMatrix build_couplings(int n) {
    if (n < 2) throw std::invalid_argument(fmt::format("coupling matrix needs N >= 2, got {}", n));
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j) d(i, j) = 1.0 / std::pow(std::abs(i - j), 3);
    return {d};
}

SingleExcitationHamiltonian single_excitation_hamiltonian(const CouplingMatrix& couplings) {
    const auto& d = couplings.d;
    if (d.rows() != d.cols() || d.rows() < 2) throw std::invalid_argument("coupling matrix must be square with N >= 2");
    if ((d - d.transpose()).cwiseAbs().maxCoeff() > 0.0) throw std::invalid_argument("coupling matrix is not symmetric");
    if (d.diagonal().cwiseAbs().maxCoeff() > 0.0) throw std::invalid_argument("coupling matrix has a nonzero diagonal");
    // I_x I_x + I_y I_y = (I+ I- + I- I+)/2 hops one excitation with amplitude D/2.
    return {0.5 * d};
}

ChainDynamics::ChainDynamics(const SingleExcitationHamiltonian& h) : h1_(h.h1) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h1_);
    if (es.info() != Eigen::Success) throw std::runtime_error("eigendecomposition of H1 failed");
    energies_ = es.eigenvalues();
    modes_ = es.eigenvectors();
}

ChainDynamics::ChainDynamics(int n) : ChainDynamics(single_excitation_hamiltonian(build_couplings(n))) {}

Propagator ChainDynamics::at(double tau) const {
    Eigen::VectorXcd phases(energies_.size());
    for (Eigen::Index k = 0; k < energies_.size(); ++k) phases(k) = std::polar(1.0, -energies_(k) * tau);
    const Eigen::MatrixXcd modes = modes_.cast<std::complex<double>>();
    return {tau, modes * phases.asDiagonal() * modes.adjoint()};
}

Propagator propagator(const SingleExcitationHamiltonian& h, double tau) {
    return ChainDynamics(h).at(tau);
}

} // namespace spinrestore
