#pragma once

#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace spinrestore {

/// Raised for layouts or run settings that cannot describe a valid experiment.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Node layout of the communication line: sender on nodes 1..n_s, receiver on
/// the last n_r nodes, extended receiver on the last n_er nodes.
struct Layout {
    int n = 0;
    int n_s = 0;
    int n_r = 0;
    int n_er = 0;

    int n_tl() const { return n - n_s - n_r; }
    int control_dim() const { return n_er * (n_er - 1); }
    int equation_count() const { return 2 * n_s * (n_s - 1); }

    /// Throws ConfigError naming the violated constraint.
    void validate() const;
};

/// Dipole couplings of an equally spaced chain in units of the nearest-neighbour
/// coupling: D(i,j) = |i-j|^-3, zero diagonal.
struct CouplingMatrix {
    Eigen::MatrixXd d;
};

/// XX Hamiltonian restricted to the single-excitation sector, in units of D(1,2).
struct SingleExcitationHamiltonian {
    Eigen::MatrixXd h1;
};

struct Propagator {
    double tau = 0.0;
    Eigen::MatrixXcd v1;
};

CouplingMatrix build_couplings(int n);
inline CouplingMatrix build_couplings(const Layout& layout) { return build_couplings(layout.n); }

SingleExcitationHamiltonian single_excitation_hamiltonian(const CouplingMatrix& couplings);

/// exp(-i H1 tau) through the spectral decomposition of H1.
Propagator propagator(const SingleExcitationHamiltonian& h, double tau);

/// Caches the eigendecomposition of H1 so propagators for many times are cheap.
class ChainDynamics {
public:
    explicit ChainDynamics(const SingleExcitationHamiltonian& h);
    explicit ChainDynamics(int n);

    int size() const { return static_cast<int>(energies_.size()); }
    Propagator at(double tau) const;
    const Eigen::MatrixXd& hamiltonian() const { return h1_; }

private:
    Eigen::MatrixXd h1_;
    Eigen::VectorXd energies_;
    Eigen::MatrixXd modes_;
};

} // namespace spinrestore
