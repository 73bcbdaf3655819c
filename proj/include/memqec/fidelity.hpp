#pragma once

#include <cstdint>
#include <initializer_list>
#include <stdexcept>
#include <utility>
#include <vector>

#include "memqec/bipoly.hpp"
#include "memqec/channel.hpp"
#include "memqec/code.hpp"
#include "memqec/recovery.hpp"

namespace memqec {

// Entanglement fidelity of the recovered channel, carried two independent
// ways: `poly` sums the correctable weights exactly, while `numeric`
// evaluates the full double sum over restricted traces of R_l A'_k.  The
// (mu,p)-independent trace geometry is computed once per pattern.
struct FidelityResult {
  CodeFamily family = CodeFamily::rc;
  int n = 2;
  BiPoly poly;
  std::vector<BiPoly> weights;    // per pattern, ascending
  std::vector<double> geometry;   // sum_l |tr([R_l P_k]|_C)|^2 per pattern

  double numeric(double mu, double p) const {
    double acc = 0.0;
    for (std::size_t k = 0; k < weights.size(); ++k) {
      if (geometry[k] == 0.0) continue;
      acc += geometry[k] * weights[k].eval(mu, p);
    }
    return 0.25 * acc;
  }
};

inline FidelityResult entanglement_fidelity(const Code& code, const MarkovChannel& channel,
                                            const RecoverySet& recovery) {
  detail::check_channel_code(channel, code, "entanglement_fidelity");
  if (recovery.n != code.n) throw std::invalid_argument("entanglement_fidelity: dimension mismatch");
  FidelityResult out;
  out.family = code.family;
  out.n = code.n;

  // symbolic route: each correctable string is inverted exactly by its
  // recovery operator and contributes |tr|^2 / 4 = p~_k
  for (const KrausTerm& term : correctable_set(channel, code)) out.poly += term.weight;

  // numeric route geometry: tr([R_l P_k]|_C) for every pair (l, k)
  out.weights.reserve(channel.terms.size());
  out.geometry.assign(channel.terms.size(), 0.0);
  for (std::size_t k = 0; k < channel.terms.size(); ++k) {
    const KrausTerm& term = channel.terms[k];
    out.weights.push_back(term.weight);
    StateVector img0 = apply(term.op, code.zero_logical);
    StateVector img1 = apply(term.op, code.one_logical);
    double acc = 0.0;
    for (const auto& [v0, v1] : recovery.sources) {
      std::complex<double> t = inner(v0, img0) + inner(v1, img1);
      acc += std::norm(t);
    }
    if (recovery.orthogonal_projector) {
      const Eigen::MatrixXcd& q = recovery.orthogonal_projector->mat;
      std::complex<double> t =
          code.zero_logical.amps.dot(q * img0.amps) + code.one_logical.amps.dot(q * img1.amps);
      acc += std::norm(t);
    }
    out.geometry[k] = acc;
  }
  return out;
}

// Everything needed to go from (family, n, flavor) to a fidelity result.
struct CodePipeline {
  Code code;
  MarkovChannel channel;
  std::vector<KrausTerm> correctable;
  SyndromeSubspaces subspaces;
  RecoverySet recovery;
};

inline CodePipeline build_pipeline(CodeFamily family, int n, FlipType flip = FlipType::bit,
                                   std::optional<NoisePoint> point = {}) {
  CodePipeline pl;
  pl.code = family == CodeFamily::rc ? repetition_code(n, flip) : dfs_code(n, flip);
  pl.channel = make_channel(n, flip, point);
  pl.correctable = correctable_set(pl.channel, pl.code);
  pl.subspaces = syndrome_subspaces(pl.correctable, pl.code);
  pl.recovery = build_recovery(pl.subspaces, pl.code);
  return pl;
}

inline FidelityResult derive_fidelity(CodeFamily family, int n, FlipType flip = FlipType::bit) {
  CodePipeline pl = build_pipeline(family, n, flip);
  return entanglement_fidelity(pl.code, pl.channel, pl.recovery);
}

inline BiPoly memoryless_slice(const FidelityResult& result) { return result.poly.substitute_mu(0); }

namespace detail {

inline BiPoly p_poly(std::initializer_list<std::pair<int, std::int64_t>> terms) {
  BiPoly out;
  for (const auto& [deg, c] : terms) out += BiPoly::monomial(0, deg, c);
  return out;
}

inline BiPoly mu_pow(int i) { return BiPoly::monomial(i, 0, 1); }

}  // namespace detail

// The published closed forms, transcribed row by row from the displays.
// Even-length repetition codes share the preceding odd polynomial.
inline BiPoly paper_fixture(CodeFamily family, int n) {
  using detail::mu_pow;
  using detail::p_poly;
  if (family == CodeFamily::rc) {
    switch (n) {
      case 4:
      case 3:
        return mu_pow(2) * p_poly({{3, 2}, {2, -3}, {1, 1}}) +
               mu_pow(1) * p_poly({{3, -4}, {2, 6}, {1, -2}}) + p_poly({{3, 2}, {2, -3}, {0, 1}});
      case 6:
      case 5:
        return mu_pow(4) * p_poly({{5, -6}, {4, 15}, {3, -12}, {2, 3}}) +
               mu_pow(3) * p_poly({{5, 24}, {4, -60}, {3, 52}, {2, -18}, {1, 2}}) +
               mu_pow(2) * p_poly({{5, -36}, {4, 90}, {3, -78}, {2, 27}, {1, -3}}) +
               mu_pow(1) * p_poly({{5, 24}, {4, -60}, {3, 48}, {2, -12}}) +
               p_poly({{5, -6}, {4, 15}, {3, -10}, {0, 1}});
      case 8:
      case 7:
        return mu_pow(6) * p_poly({{7, 20}, {6, -70}, {5, 90}, {4, -50}, {3, 10}}) +
               mu_pow(5) * p_poly({{7, -120}, {6, 420}, {5, -564}, {4, 360}, {3, -108}, {2, 12}}) +
               mu_pow(4) *
                   p_poly({{7, 300}, {6, -1050}, {5, 1440}, {4, -975}, {3, 336}, {2, -54}, {1, 3}}) +
               mu_pow(3) * p_poly({{7, -400},
                                   {6, 1400},
                                   {5, -1920},
                                   {4, 1300},
                                   {3, -448},
                                   {2, 72},
                                   {1, -4}}) +
               mu_pow(2) * p_poly({{7, 300}, {6, -1050}, {5, 1410}, {4, -900}, {3, 270}, {2, -30}}) +
               mu_pow(1) * p_poly({{7, -120}, {6, 420}, {5, -540}, {4, 300}, {3, -60}}) +
               p_poly({{7, 20}, {6, -70}, {5, 84}, {4, -35}, {0, 1}});
      default:
        throw std::invalid_argument("paper_fixture: repetition code fixtures cover n = 3..8");
    }
  }
  switch (n) {
    case 3:
      return mu_pow(2) * p_poly({{3, -4}, {2, 6}, {1, -2}}) +
             mu_pow(1) * p_poly({{3, 8}, {2, -12}, {1, 4}}) +
             p_poly({{3, -4}, {2, 6}, {1, -3}, {0, 1}});
    case 4:
      return mu_pow(3) * p_poly({{4, -8}, {3, 16}, {2, -10}, {1, 2}}) +
             mu_pow(2) * p_poly({{4, 24}, {3, -48}, {2, 28}, {1, -4}}) +
             mu_pow(1) * p_poly({{4, -24}, {3, 48}, {2, -30}, {1, 6}}) +
             p_poly({{4, 8}, {3, -16}, {2, 12}, {1, -4}, {0, 1}});
    case 5:
      return mu_pow(4) * p_poly({{5, -16}, {4, 40}, {3, -36}, {2, 14}, {1, -2}}) +
             mu_pow(3) * p_poly({{5, 64}, {4, -160}, {3, 136}, {2, -44}, {1, 4}}) +
             mu_pow(2) * p_poly({{5, -96}, {4, 240}, {3, -204}, {2, 66}, {1, -6}}) +
             mu_pow(1) * p_poly({{5, 64}, {4, -160}, {3, 144}, {2, -56}, {1, 8}}) +
             p_poly({{5, -16}, {4, 40}, {3, -40}, {2, 20}, {1, -5}, {0, 1}});
    case 6:
      return mu_pow(5) * p_poly({{6, -32}, {5, 97}, {4, -115}, {3, 67}, {2, -19}, {1, 2}}) +
             mu_pow(4) * p_poly({{6, 160}, {5, -484}, {4, 546}, {3, -280}, {2, 62}, {1, -4}}) +
             mu_pow(3) * p_poly({{6, -320}, {5, 966}, {4, -1068}, {3, 519}, {2, -103}, {1, 6}}) +
             mu_pow(2) * p_poly({{6, 320}, {5, -964}, {4, 1078}, {3, -546}, {2, 120}, {1, -8}}) +
             mu_pow(1) * p_poly({{6, -160}, {5, 481}, {4, -561}, {3, 320}, {2, -90}, {1, 10}}) +
             p_poly({{6, 32}, {5, -96}, {4, 120}, {3, -80}, {2, 30}, {1, -6}, {0, 1}});
    default:
      throw std::invalid_argument("paper_fixture: DFS fixtures cover n = 3..6");
  }
}

}  // namespace memqec
