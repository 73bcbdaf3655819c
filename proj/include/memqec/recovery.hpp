#pragma once

#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "memqec/channel.hpp"
#include "memqec/code.hpp"
#include "memqec/pauli.hpp"

namespace memqec {

// Detectability is structural for these channels (it depends only on the
// pattern), so a single generic probe point suffices.
inline constexpr double kDetectProbeMu = 0.3;
inline constexpr double kDetectProbeP = 0.2;
inline constexpr double kDetectTol = 1e-10;

// Tests P_C A P_C = lambda P_C for A = sqrt(weight(probe)) * op and returns
// lambda when the restriction is proportional to the identity.
inline std::optional<double> is_detectable(const KrausTerm& term, const Code& code,
                                           double probe_mu = kDetectProbeMu,
                                           double probe_p = kDetectProbeP,
                                           double tol = kDetectTol) {
  if (term.op.n != code.n) throw std::invalid_argument("is_detectable: dimension mismatch");
  DenseOperator a = dense(term.op);
  a.mat *= std::sqrt(term.weight.eval(probe_mu, probe_p));
  Eigen::Matrix2cd rm = restricted_matrix(a, code);
  if (std::abs(rm(0, 1)) > tol || std::abs(rm(1, 0)) > tol) return std::nullopt;
  if (std::abs(rm(0, 0) - rm(1, 1)) > tol) return std::nullopt;
  std::complex<double> lambda = 0.5 * (rm(0, 0) + rm(1, 1));
  if (std::abs(lambda.imag()) > tol) return std::nullopt;
  return lambda.real();
}

namespace detail {

inline void check_channel_code(const MarkovChannel& channel, const Code& code, const char* what) {
  if (channel.n != code.n) throw std::invalid_argument(std::string(what) + ": qubit count mismatch");
  if (channel.flip != code.basis) {
    throw std::invalid_argument(std::string(what) + ": channel flavor does not match code basis");
  }
}

inline bool correctable_pattern(std::uint32_t pattern, int n, CodeFamily family) {
  const int w = std::popcount(pattern);
  if (family == CodeFamily::dfs) return (w & 1) == 0;
  if (2 * w < n) return true;
  // Even-length repetition: keep one of each complementary weight-n/2 pair,
  // choosing the representative whose qubit-1 bit is set.
  return n % 2 == 0 && 2 * w == n && (pattern & 1u);
}

}  // namespace detail

// Indices (in the paper's labeling) of the detectable error operators.
inline std::vector<std::size_t> detectable_paper_indices(const MarkovChannel& channel,
                                                         const Code& code) {
  detail::check_channel_code(channel, code, "detectable_paper_indices");
  std::vector<std::size_t> out;
  std::vector<std::uint32_t> order = paper_pattern_order(channel.n);
  for (std::size_t k = 0; k < order.size(); ++k) {
    if (is_detectable(channel.terms[order[k]], code)) out.push_back(k);
  }
  return out;
}

// The correctable error operators in the paper's index order.
inline std::vector<KrausTerm> correctable_set(const MarkovChannel& channel, const Code& code) {
  detail::check_channel_code(channel, code, "correctable_set");
  std::vector<KrausTerm> out;
  for (std::uint32_t pattern : paper_pattern_order(channel.n)) {
    if (detail::correctable_pattern(pattern, channel.n, code.family)) {
      out.push_back(channel.terms[pattern]);
    }
  }
  return out;
}

inline std::vector<std::size_t> correctable_paper_indices(const MarkovChannel& channel,
                                                          const Code& code) {
  detail::check_channel_code(channel, code, "correctable_paper_indices");
  std::vector<std::size_t> out;
  std::vector<std::uint32_t> order = paper_pattern_order(channel.n);
  for (std::size_t k = 0; k < order.size(); ++k) {
    if (detail::correctable_pattern(order[k], channel.n, code.family)) out.push_back(k);
  }
  return out;
}

// Ordered bases of V^{0_L} and V^{1_L}; entry l pairs |v_l^{0_L}> with
// |v_l^{1_L}>.
struct SyndromeSubspaces {
  std::vector<StateVector> v0;
  std::vector<StateVector> v1;
};

// Spans of the correctable images of the codewords, in correctable-set
// order.  Images that coincide with an already-collected direction (the
// DFS case, where every correctable string acts as a scalar) are folded
// into it; an image neither parallel nor orthogonal to the collected
// basis means the correctable set is wrong.
inline SyndromeSubspaces syndrome_subspaces(const std::vector<KrausTerm>& correctable,
                                            const Code& code, double tol = 1e-10) {
  SyndromeSubspaces out;
  for (const KrausTerm& term : correctable) {
    StateVector img0 = apply(term.op, code.zero_logical);
    StateVector img1 = apply(term.op, code.one_logical);
    img0.amps.normalize();
    img1.amps.normalize();
    bool duplicate = false;
    for (std::size_t l = 0; l < out.v0.size(); ++l) {
      std::complex<double> d0 = inner(out.v0[l], img0);
      std::complex<double> d1 = inner(out.v1[l], img1);
      bool parallel0 = std::abs(d0) > 1.0 - tol;
      bool parallel1 = std::abs(d1) > 1.0 - tol;
      bool orthogonal0 = std::abs(d0) < tol;
      bool orthogonal1 = std::abs(d1) < tol;
      if (parallel0 && parallel1) {
        if (std::abs(d0 - 1.0) > tol || std::abs(d1 - 1.0) > tol) {
          throw std::runtime_error(
              "syndrome_subspaces: image coincides with an existing direction up to a "
              "non-trivial phase; correctable set is inconsistent");
        }
        duplicate = true;
        break;
      }
      if (!(orthogonal0 && orthogonal1)) {
        throw std::runtime_error(
            "syndrome_subspaces: generated vectors are neither parallel nor orthogonal; "
            "correctable set is inconsistent");
      }
    }
    if (!duplicate) {
      out.v0.push_back(std::move(img0));
      out.v1.push_back(std::move(img1));
    }
  }
  // cross-orthogonality between the two subspaces
  for (const StateVector& a : out.v0) {
    for (const StateVector& b : out.v1) {
      if (std::abs(inner(a, b)) > tol) {
        throw std::runtime_error("syndrome_subspaces: V^{0_L} and V^{1_L} are not orthogonal");
      }
    }
  }
  return out;
}

// Trace-preserving recovery {R_l} with R_l = |0_L><v_l^0| + |1_L><v_l^1|,
// plus the projector onto the unreached complement when the syndrome
// subspaces do not fill the Hilbert space (the DFS case).
struct RecoverySet {
  int n = 2;
  StateVector zero_logical;
  StateVector one_logical;
  std::vector<std::pair<StateVector, StateVector>> sources;
  std::optional<DenseOperator> orthogonal_projector;

  bool includes_orthogonal_projector() const { return orthogonal_projector.has_value(); }
  std::size_t size() const { return sources.size() + (orthogonal_projector ? 1 : 0); }

  // Dense R_l; the complement projector, when present, is the last operator.
  DenseOperator op(std::size_t l) const {
    if (l < sources.size()) {
      DenseOperator r = DenseOperator::zeros(n);
      r.mat = zero_logical.amps * sources[l].first.amps.adjoint() +
              one_logical.amps * sources[l].second.amps.adjoint();
      return r;
    }
    if (orthogonal_projector && l == sources.size()) return *orthogonal_projector;
    throw std::out_of_range("RecoverySet::op: index out of range");
  }

  // sum_l R_l rho R_l^dagger.  The pair operators land in the logical
  // block, so their contributions reduce to four accumulated scalars.
  DenseOperator apply(const DenseOperator& rho) const {
    if (rho.n != n) throw std::invalid_argument("RecoverySet::apply: dimension mismatch");
    std::complex<double> m00 = 0, m01 = 0, m10 = 0, m11 = 0;
    for (const auto& [v0, v1] : sources) {
      Eigen::VectorXcd r0 = rho.mat * v0.amps;
      Eigen::VectorXcd r1 = rho.mat * v1.amps;
      m00 += v0.amps.dot(r0);
      m01 += v0.amps.dot(r1);
      m10 += v1.amps.dot(r0);
      m11 += v1.amps.dot(r1);
    }
    DenseOperator out = DenseOperator::zeros(n);
    const auto& z = zero_logical.amps;
    const auto& o = one_logical.amps;
    out.mat = m00 * (z * z.adjoint()) + m01 * (z * o.adjoint()) + m10 * (o * z.adjoint()) +
              m11 * (o * o.adjoint());
    if (orthogonal_projector) {
      out.mat += orthogonal_projector->mat * rho.mat * orthogonal_projector->mat;
    }
    return out;
  }

  // ||sum_l R_l^dagger R_l - I||_max from explicit dense operators.
  double completeness_residual() const {
    const std::uint32_t dim = dimension(n);
    Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(dim, dim);
    for (std::size_t l = 0; l < size(); ++l) {
      DenseOperator r = op(l);
      acc += r.mat.adjoint() * r.mat;
    }
    acc -= Eigen::MatrixXcd::Identity(dim, dim);
    return acc.cwiseAbs().maxCoeff();
  }
};

inline RecoverySet build_recovery(const SyndromeSubspaces& subspaces, const Code& code) {
  RecoverySet rec;
  rec.n = code.n;
  rec.zero_logical = code.zero_logical;
  rec.one_logical = code.one_logical;
  for (std::size_t l = 0; l < subspaces.v0.size(); ++l) {
    rec.sources.emplace_back(subspaces.v0[l], subspaces.v1[l]);
  }
  const std::uint32_t dim = dimension(code.n);
  const std::size_t spanned = 2 * rec.sources.size();
  if (spanned > dim) throw std::runtime_error("build_recovery: syndrome subspaces overfill space");
  if (spanned < dim) {
    // Gram-Schmidt over computational kets projected off the syndrome span.
    std::vector<Eigen::VectorXcd> span;
    span.reserve(dim);
    for (const auto& [v0, v1] : rec.sources) {
      span.push_back(v0.amps);
      span.push_back(v1.amps);
    }
    std::vector<Eigen::VectorXcd> complement;
    for (std::uint32_t b = 0; b < dim && spanned + complement.size() < dim; ++b) {
      Eigen::VectorXcd w = Eigen::VectorXcd::Zero(dim);
      w[b] = 1.0;
      for (const auto& u : span) w -= u.dot(w) * u;
      for (const auto& u : complement) w -= u.dot(w) * u;
      double norm = w.norm();
      if (norm > 1e-6) complement.push_back(w / norm);
    }
    if (spanned + complement.size() != dim) {
      throw std::runtime_error("build_recovery: complement construction failed");
    }
    DenseOperator proj = DenseOperator::zeros(code.n);
    for (const auto& u : complement) proj.mat += u * u.adjoint();
    rec.orthogonal_projector = std::move(proj);
  }
  return rec;
}

// Dense composed Kraus operators R_l A'_k for a numeric channel, ordered
// l major, k minor.
inline std::vector<DenseOperator> composed_channel(const MarkovChannel& channel,
                                                   const RecoverySet& recovery) {
  channel.require_numeric("composed_channel");
  if (channel.n != recovery.n) throw std::invalid_argument("composed_channel: dimension mismatch");
  std::vector<DenseOperator> out;
  out.reserve(recovery.size() * channel.terms.size());
  for (std::size_t l = 0; l < recovery.size(); ++l) {
    DenseOperator r = recovery.op(l);
    for (std::size_t k = 0; k < channel.terms.size(); ++k) {
      DenseOperator composed = DenseOperator::zeros(channel.n);
      composed.mat = r.mat * dense(channel.terms[k].op).mat;
      composed.mat *= std::sqrt(channel.weight_value(k));
      out.push_back(std::move(composed));
    }
  }
  return out;
}

// (R o Lambda)(rho) without materializing the composed operator list.
inline DenseOperator apply_composed(const MarkovChannel& channel, const RecoverySet& recovery,
                                    const DenseOperator& rho) {
  return recovery.apply(apply_channel(channel, rho));
}

}  // namespace memqec
