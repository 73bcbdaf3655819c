#pragma once

#include <Eigen/Dense>

#include <bit>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace memqec {

// Dense representations are capped here; every instance in scope needs n <= 8.
inline constexpr int kMaxQubits = 10;

inline void check_qubit_count(int n) {
  if (n < 1 || n > kMaxQubits) {
    throw std::invalid_argument("qubit count must be in 1.." + std::to_string(kMaxQubits));
  }
}

inline std::uint32_t dimension(int n) { return 1u << n; }

// n-qubit Pauli string restricted to pure X-type, pure Z-type or identity.
// Convention used throughout: qubit k lives on mask/basis-index bit k-1,
// so the paper's ket |i_1 i_2 ... i_n> (qubit 1 leftmost) has index
// sum_k i_k 2^(k-1).
struct PauliString {
  int n = 1;
  std::uint32_t x_mask = 0;
  std::uint32_t z_mask = 0;

  static PauliString identity(int n) { return make(n, 0, 0); }
  static PauliString x_string(int n, std::uint32_t mask) { return make(n, mask, 0); }
  static PauliString z_string(int n, std::uint32_t mask) { return make(n, 0, mask); }

  bool is_identity() const { return x_mask == 0 && z_mask == 0; }
  int weight() const { return std::popcount(x_mask | z_mask); }

 private:
  static PauliString make(int n, std::uint32_t x, std::uint32_t z) {
    check_qubit_count(n);
    std::uint32_t valid = dimension(n) - 1;
    if ((x & ~valid) || (z & ~valid)) {
      throw std::invalid_argument("PauliString: mask uses bits beyond qubit count");
    }
    if (x != 0 && z != 0) {
      throw std::invalid_argument("PauliString: mixed XZ strings are out of scope");
    }
    return PauliString{n, x, z};
  }
};

struct PauliAction {
  std::uint32_t index;
  int phase;  // +1 or -1
};

// Action on a computational basis ket: X part flips bits, Z part counts
// sign against the incoming index.
inline PauliAction pauli_apply(const PauliString& op, std::uint32_t basis_index) {
  if (basis_index >= dimension(op.n)) {
    throw std::out_of_range("pauli_apply: basis index out of range");
  }
  int phase = (std::popcount(op.z_mask & basis_index) & 1) ? -1 : 1;
  return PauliAction{basis_index ^ op.x_mask, phase};
}

struct StateVector {
  int n = 1;
  Eigen::VectorXcd amps;

  static StateVector zeros(int n) {
    check_qubit_count(n);
    StateVector s{n, Eigen::VectorXcd::Zero(dimension(n))};
    return s;
  }
  static StateVector basis(int n, std::uint32_t index) {
    StateVector s = zeros(n);
    if (index >= dimension(n)) throw std::out_of_range("StateVector::basis: index out of range");
    s.amps[index] = 1.0;
    return s;
  }
};

inline std::complex<double> inner(const StateVector& a, const StateVector& b) {
  if (a.n != b.n) throw std::invalid_argument("inner: qubit count mismatch");
  return a.amps.dot(b.amps);  // conjugates the left argument
}

inline StateVector apply(const PauliString& op, const StateVector& state) {
  if (op.n != state.n) throw std::invalid_argument("apply: qubit count mismatch");
  StateVector out = StateVector::zeros(state.n);
  for (std::uint32_t b = 0; b < dimension(state.n); ++b) {
    if (state.amps[b] == std::complex<double>{}) continue;
    PauliAction act = pauli_apply(op, b);
    out.amps[act.index] += static_cast<double>(act.phase) * state.amps[b];
  }
  return out;
}

struct DenseOperator {
  int n = 1;
  Eigen::MatrixXcd mat;

  static DenseOperator zeros(int n) {
    check_qubit_count(n);
    return DenseOperator{n, Eigen::MatrixXcd::Zero(dimension(n), dimension(n))};
  }
  static DenseOperator identity(int n) {
    check_qubit_count(n);
    return DenseOperator{n, Eigen::MatrixXcd::Identity(dimension(n), dimension(n))};
  }
};

inline DenseOperator dense(const PauliString& op) {
  DenseOperator out = DenseOperator::zeros(op.n);
  for (std::uint32_t b = 0; b < dimension(op.n); ++b) {
    PauliAction act = pauli_apply(op, b);
    out.mat(act.index, b) = static_cast<double>(act.phase);
  }
  return out;
}

// CNOT from qubit `control` to qubit `target` (1-based), extended by
// identity to n qubits.
inline DenseOperator cnot_unitary(int control, int target, int n) {
  check_qubit_count(n);
  if (control < 1 || control > n || target < 1 || target > n || control == target) {
    throw std::invalid_argument("cnot_unitary: invalid gate qubits");
  }
  DenseOperator out = DenseOperator::zeros(n);
  std::uint32_t cbit = 1u << (control - 1);
  std::uint32_t tbit = 1u << (target - 1);
  for (std::uint32_t b = 0; b < dimension(n); ++b) {
    out.mat((b & cbit) ? (b ^ tbit) : b, b) = 1.0;
  }
  return out;
}

// H^{(x)n}: entries 2^(-n/2) (-1)^popcount(a & b). Self-inverse.
inline DenseOperator hadamard_all(int n) {
  check_qubit_count(n);
  DenseOperator out = DenseOperator::zeros(n);
  const double norm = 1.0 / std::sqrt(static_cast<double>(dimension(n)));
  for (std::uint32_t a = 0; a < dimension(n); ++a) {
    for (std::uint32_t b = 0; b < dimension(n); ++b) {
      out.mat(a, b) = (std::popcount(a & b) & 1) ? -norm : norm;
    }
  }
  return out;
}

// 2x2 restriction of M to the span of two logical states.
inline Eigen::Matrix2cd restricted_matrix(const DenseOperator& m, const StateVector& zero_logical,
                                          const StateVector& one_logical) {
  if (m.n != zero_logical.n || m.n != one_logical.n) {
    throw std::invalid_argument("restricted_matrix: dimension mismatch");
  }
  Eigen::Matrix2cd out;
  Eigen::VectorXcd m0 = m.mat * zero_logical.amps;
  Eigen::VectorXcd m1 = m.mat * one_logical.amps;
  out(0, 0) = zero_logical.amps.dot(m0);
  out(0, 1) = zero_logical.amps.dot(m1);
  out(1, 0) = one_logical.amps.dot(m0);
  out(1, 1) = one_logical.amps.dot(m1);
  return out;
}

}  // namespace memqec
