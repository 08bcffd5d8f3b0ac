#include "spinrestore/excitation.hpp"

#include <stdexcept>
#include <string>

#include <fmt/format.h>

namespace spinrestore {

namespace {

void validate_density(const Eigen::MatrixXcd& m) {
    if (m.rows() != m.cols() || m.rows() < 2)
        throw std::invalid_argument(fmt::format("excitation state must be square with size >= 2, got {}x{}", m.rows(), m.cols()));
    const double herm = (m - m.adjoint()).cwiseAbs().maxCoeff();
    if (herm > hermiticity_tol)
        throw std::invalid_argument(fmt::format("excitation state is not Hermitian (deviation {:.3e})", herm));
    const cplx tr = m.trace();
    if (std::abs(tr - 1.0) > trace_tol)
        throw std::invalid_argument(fmt::format("excitation state trace {:.15g}{:+.3e}i is not 1", tr.real(), tr.imag()));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m, Eigen::EigenvaluesOnly);
    const double lo = es.eigenvalues().minCoeff();
    if (lo < -psd_tol)
        throw std::invalid_argument(fmt::format("excitation state is not positive semidefinite (eigenvalue {:.3e})", lo));
}

} // namespace

ExcitationState::ExcitationState(Eigen::MatrixXcd matrix) : m_(std::move(matrix)) {
    validate_density(m_);
}

ExcitationState ExcitationState::vacuum(int n) {
    if (n < 1) throw std::invalid_argument("vacuum needs at least one spin");
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n + 1, n + 1);
    m(0, 0) = 1.0;
    return ExcitationState(std::move(m));
}

ExcitationState ExcitationState::pure(const Eigen::VectorXcd& amplitudes) {
    return ExcitationState(amplitudes * amplitudes.adjoint());
}

double ExcitationState::excitation_probability() const {
    return m_.diagonal().real().tail(dim()).sum();
}

CoherenceBlock coherence_block(const ExcitationState& state, int order) {
    const int n = state.dim();
    const auto& m = state.matrix();
    CoherenceBlock block{order, Eigen::MatrixXcd::Zero(n + 1, n + 1)};
    switch (order) {
    case 1:
        block.entries.row(0).tail(n) = m.row(0).tail(n);
        break;
    case -1:
        block.entries.col(0).tail(n) = m.col(0).tail(n);
        break;
    case 0:
        block.entries(0, 0) = m(0, 0);
        block.entries.bottomRightCorner(n, n) = m.bottomRightCorner(n, n);
        break;
    default:
        throw std::invalid_argument(fmt::format("coherence order must be -1, 0 or +1, got {}", order));
    }
    return block;
}

Eigen::MatrixXcd assemble(std::span<const CoherenceBlock> blocks) {
    if (blocks.empty()) throw std::invalid_argument("no coherence blocks to assemble");
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(blocks.front().entries.rows(), blocks.front().entries.cols());
    for (const auto& b : blocks) {
        if (b.entries.rows() != out.rows() || b.entries.cols() != out.cols())
            throw std::invalid_argument("coherence blocks differ in size");
        out += b.entries;
    }
    return out;
}

Eigen::MatrixXcd embed_computational(const ExcitationState& state, int qubit_count) {
    if (qubit_count != state.dim())
        throw std::invalid_argument(fmt::format("qubit count {} does not match state over {} spins", qubit_count, state.dim()));
    if (qubit_count > 20) throw std::invalid_argument("embedding limited to 20 qubits");
    const std::size_t full = std::size_t{1} << qubit_count;
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(full, full);
    for (int a = 0; a <= qubit_count; ++a)
        for (int b = 0; b <= qubit_count; ++b)
            out(computational_index(a), computational_index(b)) = state(a, b);
    return out;
}

Eigen::MatrixXcd restrict_to_excitation_sector(const Eigen::MatrixXcd& full, int qubit_count) {
    const auto size = static_cast<Eigen::Index>(std::size_t{1} << qubit_count);
    if (full.rows() != size || full.cols() != size)
        throw std::invalid_argument(fmt::format("expected a {0}x{0} matrix", size));
    Eigen::MatrixXcd out(qubit_count + 1, qubit_count + 1);
    for (int a = 0; a <= qubit_count; ++a)
        for (int b = 0; b <= qubit_count; ++b)
            out(a, b) = full(computational_index(a), computational_index(b));
    return out;
}

ExcitationState partial_trace(const ExcitationState& state, std::span<const int> keep) {
    const int n = state.dim();
    if (keep.empty()) throw std::invalid_argument("partial trace needs at least one kept spin");
    std::vector<bool> kept(n + 1, false);
    for (int k : keep) {
        if (k < 1 || k > n) throw std::invalid_argument(fmt::format("spin index {} out of range 1..{}", k, n));
        if (kept[k]) throw std::invalid_argument(fmt::format("spin index {} listed twice", k));
        kept[k] = true;
    }
    const auto& m = state.matrix();
    const auto m_keep = static_cast<int>(keep.size());
    Eigen::MatrixXcd out(m_keep + 1, m_keep + 1);
    // Excitations on discarded spins fold into the reduced vacuum.
    cplx vac = m(0, 0);
    for (int j = 1; j <= n; ++j)
        if (!kept[j]) vac += m(j, j);
    out(0, 0) = vac;
    for (int a = 0; a < m_keep; ++a) {
        out(0, a + 1) = m(0, keep[a]);
        out(a + 1, 0) = m(keep[a], 0);
        for (int b = 0; b < m_keep; ++b) out(a + 1, b + 1) = m(keep[a], keep[b]);
    }
    return ExcitationState(std::move(out));
}

ExcitationState sender_embed(const ExcitationState& sender, int n) {
    if (n < sender.dim())
        throw std::invalid_argument(fmt::format("chain of {} nodes cannot hold a {}-spin sender", n, sender.dim()));
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n + 1, n + 1);
    m.topLeftCorner(sender.dim() + 1, sender.dim() + 1) = sender.matrix();
    return ExcitationState(std::move(m));
}

ExcitationState evolve(const ExcitationState& state, const Eigen::MatrixXcd& w1) {
    const int n = state.dim();
    if (w1.rows() != n || w1.cols() != n)
        throw std::invalid_argument(fmt::format("evolution block is {}x{}, state covers {} spins", w1.rows(), w1.cols(), n));
    Eigen::MatrixXcd w = Eigen::MatrixXcd::Identity(n + 1, n + 1);
    w.bottomRightCorner(n, n) = w1;
    Eigen::MatrixXcd out = w * state.matrix() * w.adjoint();
    out = (0.5 * (out + out.adjoint())).eval();
    return ExcitationState(std::move(out));
}

} // namespace spinrestore
