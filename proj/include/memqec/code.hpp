#pragma once

#include <bit>
#include <cmath>
#include <stdexcept>

#include "memqec/channel.hpp"
#include "memqec/pauli.hpp"

namespace memqec {

enum class CodeFamily { rc, dfs };

// Two orthonormal codewords plus the codespace projector.  `basis` names
// the channel flavor the code protects against: bit-basis repetition uses
// computational codewords, its phase variant (and the bit-flip DFS) uses
// |+>^n / |->^n.
struct Code {
  int n = 2;
  CodeFamily family = CodeFamily::rc;
  FlipType basis = FlipType::bit;
  StateVector zero_logical;
  StateVector one_logical;
  DenseOperator projector;
};

namespace detail {

inline StateVector all_plus(int n) {
  StateVector s = StateVector::zeros(n);
  const double amp = 1.0 / std::sqrt(static_cast<double>(dimension(n)));
  s.amps.setConstant(amp);
  return s;
}

inline StateVector all_minus(int n) {
  StateVector s = StateVector::zeros(n);
  const double amp = 1.0 / std::sqrt(static_cast<double>(dimension(n)));
  for (std::uint32_t b = 0; b < dimension(n); ++b) {
    s.amps[b] = (std::popcount(b) & 1) ? -amp : amp;
  }
  return s;
}

inline DenseOperator codespace_projector(const StateVector& zero, const StateVector& one) {
  DenseOperator p = DenseOperator::zeros(zero.n);
  p.mat = zero.amps * zero.amps.adjoint() + one.amps * one.amps.adjoint();
  return p;
}

inline Code assemble(int n, CodeFamily family, FlipType basis, StateVector zero, StateVector one) {
  Code code;
  code.n = n;
  code.family = family;
  code.basis = basis;
  code.projector = codespace_projector(zero, one);
  code.zero_logical = std::move(zero);
  code.one_logical = std::move(one);
  return code;
}

}  // namespace detail

inline Code repetition_code(int n, FlipType basis = FlipType::bit) {
  check_qubit_count(n);
  if (n < 2) throw std::invalid_argument("repetition_code: n must be at least 2");
  if (basis == FlipType::bit) {
    return detail::assemble(n, CodeFamily::rc, basis, StateVector::basis(n, 0),
                            StateVector::basis(n, dimension(n) - 1));
  }
  return detail::assemble(n, CodeFamily::rc, basis, detail::all_plus(n), detail::all_minus(n));
}

inline Code dfs_code(int n, FlipType basis = FlipType::bit) {
  check_qubit_count(n);
  if (n < 2) throw std::invalid_argument("dfs_code: n must be at least 2");
  if (basis == FlipType::bit) {
    return detail::assemble(n, CodeFamily::dfs, basis, detail::all_plus(n),
                            detail::all_minus(n));
  }
  return detail::assemble(n, CodeFamily::dfs, basis, StateVector::basis(n, 0),
                          StateVector::basis(n, dimension(n) - 1));
}

// CNOT fan-out from qubit 1 to qubits 2..n, optionally followed by H^{(x)n}
// when the codewords live in the |+/-> basis.  Maps |b 0...0> to |b_L>.
inline DenseOperator encoding_unitary(const Code& code) {
  DenseOperator u = cnot_unitary(1, 2, code.n);
  for (int j = 3; j <= code.n; ++j) {
    DenseOperator next = cnot_unitary(1, j, code.n);
    u.mat = next.mat * u.mat;
  }
  const bool plus_basis = (code.family == CodeFamily::rc) == (code.basis == FlipType::phase);
  if (plus_basis) {
    DenseOperator h = hadamard_all(code.n);
    u.mat = h.mat * u.mat;
  }
  return u;
}

inline Eigen::Matrix2cd restricted_matrix(const DenseOperator& m, const Code& code) {
  return restricted_matrix(m, code.zero_logical, code.one_logical);
}

}  // namespace memqec
