#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "memqec/bipoly.hpp"
#include "memqec/pauli.hpp"

namespace memqec {

enum class FlipType { bit, phase };

inline FlipType conjugate(FlipType t) { return t == FlipType::bit ? FlipType::phase : FlipType::bit; }

struct NoisePoint {
  double mu;
  double p;
};

inline void check_noise_point(const NoisePoint& pt) {
  if (!(pt.mu >= 0.0 && pt.mu <= 1.0) || !(pt.p >= 0.0 && pt.p <= 1.0)) {
    throw std::invalid_argument("NoisePoint: mu and p must lie in [0,1]");
  }
}

// One Kraus term A'_k = sqrt(weight) * op; `pattern` bit k-1 set means
// qubit k carries the flip.
struct KrausTerm {
  std::uint32_t pattern;
  PauliString op;
  BiPoly weight;
};

// Markov-correlated bit-flip (or phase-flip) channel on n qubits.  Weights
// are always carried exactly; a numeric channel additionally fixes (mu, p).
struct MarkovChannel {
  int n = 1;
  FlipType flip = FlipType::bit;
  std::optional<NoisePoint> point;
  std::vector<KrausTerm> terms;  // ascending pattern order

  bool numeric() const { return point.has_value(); }

  double weight_value(std::size_t k) const {
    require_numeric("MarkovChannel::weight_value");
    return terms.at(k).weight.eval(point->mu, point->p);
  }

  void require_numeric(const char* what) const {
    if (!point) throw std::logic_error(std::string(what) + ": unsupported in symbolic mode");
  }
};

inline std::string pattern_to_string(std::uint32_t pattern, int n) {
  std::string s;
  s.reserve(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) s += ((pattern >> k) & 1u) ? '1' : '0';  // qubit 1 leftmost
  return s;
}

// Kraus decomposition of the length-n Markov chain: for pattern bits
// (i_1,...,i_n) the weight is p_{i_1} * prod_{l=2..n} p_{i_l | i_{l-1}}.
inline std::vector<KrausTerm> enumerate_kraus(int n, FlipType flip) {
  check_qubit_count(n);
  std::vector<KrausTerm> terms;
  terms.reserve(dimension(n));
  for (std::uint32_t pattern = 0; pattern < dimension(n); ++pattern) {
    BiPoly w = marginal_factor(static_cast<int>(pattern & 1u));
    for (int l = 2; l <= n; ++l) {
      int prev = static_cast<int>((pattern >> (l - 2)) & 1u);
      int cur = static_cast<int>((pattern >> (l - 1)) & 1u);
      w = w * transition_factor(prev, cur);
    }
    PauliString op = flip == FlipType::bit ? PauliString::x_string(n, pattern)
                                           : PauliString::z_string(n, pattern);
    terms.push_back(KrausTerm{pattern, op, std::move(w)});
  }
  return terms;
}

inline MarkovChannel make_channel(int n, FlipType flip, std::optional<NoisePoint> point = {}) {
  if (point) check_noise_point(*point);
  MarkovChannel ch;
  ch.n = n;
  ch.flip = flip;
  ch.point = point;
  ch.terms = enumerate_kraus(n, flip);
  return ch;
}

// The paper labels error operators by weight class: popcount ascending,
// ties broken by the pattern read with qubit 1 as the most significant
// bit, descending (A'_5 = X1X2 before A'_6 = X1X3 at n=4).
inline std::uint32_t reverse_pattern(std::uint32_t pattern, int n) {
  std::uint32_t r = 0;
  for (int k = 0; k < n; ++k) {
    if ((pattern >> k) & 1u) r |= 1u << (n - 1 - k);
  }
  return r;
}

inline std::vector<std::uint32_t> paper_pattern_order(int n) {
  check_qubit_count(n);
  std::vector<std::uint32_t> patterns(dimension(n));
  for (std::uint32_t i = 0; i < dimension(n); ++i) patterns[i] = i;
  std::sort(patterns.begin(), patterns.end(), [n](std::uint32_t a, std::uint32_t b) {
    int wa = std::popcount(a);
    int wb = std::popcount(b);
    if (wa != wb) return wa < wb;
    return reverse_pattern(a, n) > reverse_pattern(b, n);
  });
  return patterns;
}

// pattern -> paper index k
inline std::vector<std::size_t> paper_index_map(int n) {
  std::vector<std::uint32_t> order = paper_pattern_order(n);
  std::vector<std::size_t> index(order.size());
  for (std::size_t k = 0; k < order.size(); ++k) index[order[k]] = k;
  return index;
}

// Entanglement fidelity of the raw channel, (1/N^2) sum_k |tr A'_k|^2.
// The trace is taken honestly over the diagonal action of each string.
inline BiPoly unencoded_fidelity(const MarkovChannel& channel) {
  BiPoly out;
  const std::uint32_t dim = dimension(channel.n);
  for (const KrausTerm& term : channel.terms) {
    std::int64_t trace = 0;
    for (std::uint32_t b = 0; b < dim; ++b) {
      PauliAction act = pauli_apply(term.op, b);
      if (act.index == b) trace += act.phase;
    }
    if (trace == 0) continue;
    std::int64_t scaled = (trace * trace) / (static_cast<std::int64_t>(dim) * dim);
    out += term.weight * BiPoly::constant(scaled);
  }
  return out;
}

inline double unencoded_fidelity_value(const MarkovChannel& channel) {
  channel.require_numeric("unencoded_fidelity_value");
  return unencoded_fidelity(channel).eval(channel.point->mu, channel.point->p);
}

// rho -> sum_k A'_k rho A'_k^dagger, numeric channels only.  Pauli terms
// act by index permutation and sign, so no per-term dense matrices are
// formed.
inline DenseOperator apply_channel(const MarkovChannel& channel, const DenseOperator& rho) {
  channel.require_numeric("apply_channel");
  if (rho.n != channel.n) throw std::invalid_argument("apply_channel: dimension mismatch");
  const std::uint32_t dim = dimension(channel.n);
  DenseOperator out = DenseOperator::zeros(channel.n);
  for (std::size_t k = 0; k < channel.terms.size(); ++k) {
    const KrausTerm& term = channel.terms[k];
    const double w = channel.weight_value(k);
    if (w == 0.0) continue;
    if (channel.flip == FlipType::bit) {
      const std::uint32_t x = term.op.x_mask;
      for (std::uint32_t a = 0; a < dim; ++a) {
        for (std::uint32_t b = 0; b < dim; ++b) {
          out.mat(a ^ x, b ^ x) += w * rho.mat(a, b);
        }
      }
    } else {
      const std::uint32_t z = term.op.z_mask;
      for (std::uint32_t a = 0; a < dim; ++a) {
        const int sa = (std::popcount(z & a) & 1) ? -1 : 1;
        for (std::uint32_t b = 0; b < dim; ++b) {
          const int sb = (std::popcount(z & b) & 1) ? -1 : 1;
          out.mat(a, b) += w * static_cast<double>(sa * sb) * rho.mat(a, b);
        }
      }
    }
  }
  return out;
}

// Hadamard conjugation swaps X-type and Z-type strings; weights are
// untouched.
inline MarkovChannel conjugate_channel(const MarkovChannel& channel) {
  MarkovChannel out = channel;
  out.flip = conjugate(channel.flip);
  for (KrausTerm& term : out.terms) {
    std::swap(term.op.x_mask, term.op.z_mask);
  }
  return out;
}

// Max-norm residual of the completeness sum  sum_k A'_k^dagger A'_k - I,
// accumulated from explicit dense operators.
inline double channel_completeness_residual(const MarkovChannel& channel) {
  channel.require_numeric("channel_completeness_residual");
  const std::uint32_t dim = dimension(channel.n);
  Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(dim, dim);
  for (std::size_t k = 0; k < channel.terms.size(); ++k) {
    DenseOperator a = dense(channel.terms[k].op);
    a.mat *= std::sqrt(channel.weight_value(k));
    acc += a.mat.adjoint() * a.mat;
  }
  acc -= Eigen::MatrixXcd::Identity(dim, dim);
  return acc.cwiseAbs().maxCoeff();
}

}  // namespace memqec
