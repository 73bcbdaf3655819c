#include "memqec/recovery.hpp"

#include <gtest/gtest.h>

#include <bit>

#include "memqec/fidelity.hpp"
#include "oracles.hpp"

namespace memqec {
namespace {

constexpr double kTol = 1e-12;

std::vector<std::size_t> range(std::size_t lo, std::size_t hi) {
  std::vector<std::size_t> out;
  for (std::size_t i = lo; i <= hi; ++i) out.push_back(i);
  return out;
}

TEST(Detectability, PublishedSets) {
  MarkovChannel ch3 = make_channel(3, FlipType::bit);
  EXPECT_EQ(detectable_paper_indices(ch3, repetition_code(3)), range(0, 6));
  EXPECT_EQ(detectable_paper_indices(ch3, dfs_code(3)), (std::vector<std::size_t>{0, 4, 5, 6}));

  MarkovChannel ch4 = make_channel(4, FlipType::bit);
  EXPECT_EQ(detectable_paper_indices(ch4, repetition_code(4)), range(0, 14));
  EXPECT_EQ(detectable_paper_indices(ch4, dfs_code(4)),
            (std::vector<std::size_t>{0, 5, 6, 7, 8, 9, 10, 15}));
}

TEST(Detectability, StructuralCrossCheck) {
  // For the repetition code only the all-ones pattern is non-detectable;
  // for the DFS code detectability is exactly even parity.
  for (int n = 2; n <= 6; ++n) {
    MarkovChannel ch = make_channel(n, FlipType::bit);
    Code rc = repetition_code(n);
    Code dfs = dfs_code(n);
    for (const KrausTerm& term : ch.terms) {
      EXPECT_EQ(is_detectable(term, rc).has_value(), term.pattern != dimension(n) - 1);
      EXPECT_EQ(is_detectable(term, dfs).has_value(), (std::popcount(term.pattern) & 1) == 0);
    }
  }
}

TEST(Detectability, LambdaValues) {
  MarkovChannel ch = make_channel(3, FlipType::bit);
  Code rc = repetition_code(3);
  auto lambda0 = is_detectable(ch.terms[0], rc);
  ASSERT_TRUE(lambda0.has_value());
  EXPECT_NEAR(*lambda0, std::sqrt(ch.terms[0].weight.eval(0.3, 0.2)), 1e-10);
  auto lambda1 = is_detectable(ch.terms[1], rc);
  ASSERT_TRUE(lambda1.has_value());
  EXPECT_NEAR(*lambda1, 0.0, 1e-10);

  Code dfs = dfs_code(3);
  auto lambda_dfs = is_detectable(ch.terms[0b011], dfs);  // X^1 X^2, scalar action
  ASSERT_TRUE(lambda_dfs.has_value());
  EXPECT_NEAR(*lambda_dfs, std::sqrt(ch.terms[0b011].weight.eval(0.3, 0.2)), 1e-10);
}

TEST(CorrectableSet, PublishedSets) {
  MarkovChannel ch3 = make_channel(3, FlipType::bit);
  EXPECT_EQ(correctable_paper_indices(ch3, repetition_code(3)), range(0, 3));
  EXPECT_EQ(correctable_paper_indices(ch3, dfs_code(3)), (std::vector<std::size_t>{0, 4, 5, 6}));

  MarkovChannel ch4 = make_channel(4, FlipType::bit);
  EXPECT_EQ(correctable_paper_indices(ch4, repetition_code(4)), range(0, 7));
  EXPECT_EQ(correctable_paper_indices(ch4, dfs_code(4)),
            (std::vector<std::size_t>{0, 5, 6, 7, 8, 9, 10, 15}));

  // returned terms follow the paper order: for RC4 the doubles keep qubit 1
  std::vector<KrausTerm> rc4 = correctable_set(ch4, repetition_code(4));
  ASSERT_EQ(rc4.size(), 8u);
  EXPECT_EQ(rc4[5].pattern, 0b0011u);
  EXPECT_EQ(rc4[6].pattern, 0b0101u);
  EXPECT_EQ(rc4[7].pattern, 0b1001u);
}

TEST(CorrectableSet, MismatchedFlavorThrows) {
  MarkovChannel ch = make_channel(3, FlipType::bit);
  EXPECT_THROW(correctable_set(ch, repetition_code(3, FlipType::phase)), std::invalid_argument);
}

TEST(SyndromeSubspaces, RepetitionSpans) {
  MarkovChannel ch3 = make_channel(3, FlipType::bit);
  Code rc3 = repetition_code(3);
  SyndromeSubspaces s3 = syndrome_subspaces(correctable_set(ch3, rc3), rc3);
  ASSERT_EQ(s3.v0.size(), 4u);
  // V^{0_L} = {|000>, |100>, |010>, |001>} in correctable order
  const std::uint32_t expected0[] = {0b000, 0b001, 0b010, 0b100};
  for (int l = 0; l < 4; ++l) {
    EXPECT_NEAR(std::abs(s3.v0[l].amps(expected0[l]) - 1.0), 0.0, kTol);
    EXPECT_NEAR(std::abs(s3.v1[l].amps(0b111 ^ expected0[l]) - 1.0), 0.0, kTol);
  }

  // RC4: V^{1_L} contains |0111>,|1011>,|1101>,|1110>,|0011>,|0101>,|0110>
  // alongside |1111> (paper kets, qubit 1 leftmost)
  MarkovChannel ch4 = make_channel(4, FlipType::bit);
  Code rc4 = repetition_code(4);
  SyndromeSubspaces s4 = syndrome_subspaces(correctable_set(ch4, rc4), rc4);
  ASSERT_EQ(s4.v1.size(), 8u);
  const std::uint32_t expected1[] = {0b1111, 0b1110, 0b1101, 0b1011,
                                     0b0111, 0b1100, 0b1010, 0b0110};
  for (int l = 0; l < 8; ++l) {
    EXPECT_NEAR(std::abs(s4.v1[l].amps(expected1[l]) - 1.0), 0.0, kTol) << "l=" << l;
  }
}

TEST(SyndromeSubspaces, DfsCollapsesToOneDimension) {
  for (int n : {3, 4, 5, 6}) {
    MarkovChannel ch = make_channel(n, FlipType::bit);
    Code dfs = dfs_code(n);
    SyndromeSubspaces s = syndrome_subspaces(correctable_set(ch, dfs), dfs);
    ASSERT_EQ(s.v0.size(), 1u);
    EXPECT_LT((s.v0[0].amps - dfs.zero_logical.amps).cwiseAbs().maxCoeff(), kTol);
    EXPECT_LT((s.v1[0].amps - dfs.one_logical.amps).cwiseAbs().maxCoeff(), kTol);
  }
}

TEST(SyndromeSubspaces, InconsistentSetsFail) {
  MarkovChannel ch = make_channel(3, FlipType::bit);
  Code rc = repetition_code(3);
  // complementary patterns map the two codewords onto each other's images
  std::vector<KrausTerm> clash = {ch.terms[0b001], ch.terms[0b110]};
  EXPECT_THROW(syndrome_subspaces(clash, rc), std::runtime_error);

  // odd-parity string flips the sign on |1_L>, an inconsistent phase
  Code dfs = dfs_code(3);
  std::vector<KrausTerm> odd = {ch.terms[0b000], ch.terms[0b001]};
  EXPECT_THROW(syndrome_subspaces(odd, dfs), std::runtime_error);
}

TEST(BuildRecovery, MatchesPublishedOperatorsN3) {
  CodePipeline pl = build_pipeline(CodeFamily::rc, 3);
  ASSERT_EQ(pl.recovery.size(), 4u);
  EXPECT_FALSE(pl.recovery.includes_orthogonal_projector());
  // R_2 = |0_L><100| + |1_L><011|: entries (0, 1) and (7, 6)
  Eigen::MatrixXcd r2 = pl.recovery.op(1).mat;
  EXPECT_NEAR(std::abs(r2(0, 1) - 1.0), 0.0, kTol);
  EXPECT_NEAR(std::abs(r2(7, 6) - 1.0), 0.0, kTol);
  EXPECT_NEAR(r2.cwiseAbs().sum(), 2.0, kTol);
  // R_1 is the codespace projector restricted to mapping onto itself
  Eigen::MatrixXcd r1 = pl.recovery.op(0).mat;
  EXPECT_NEAR(std::abs(r1(0, 0) - 1.0), 0.0, kTol);
  EXPECT_NEAR(std::abs(r1(7, 7) - 1.0), 0.0, kTol);
}

TEST(BuildRecovery, DfsProjectorStructure) {
  CodePipeline pl = build_pipeline(CodeFamily::dfs, 3);
  ASSERT_EQ(pl.recovery.size(), 2u);
  EXPECT_TRUE(pl.recovery.includes_orthogonal_projector());
  const Eigen::MatrixXcd& perp = pl.recovery.orthogonal_projector->mat;
  EXPECT_NEAR(perp.trace().real(), 6.0, kTol);  // rank 6 complement
  // any orthonormal complement basis gives the same projector: I - P_C
  Eigen::MatrixXcd expected = Eigen::MatrixXcd::Identity(8, 8) - pl.code.projector.mat;
  EXPECT_LT((perp - expected).cwiseAbs().maxCoeff(), kTol);
  // idempotent
  EXPECT_LT((perp * perp - perp).cwiseAbs().maxCoeff(), kTol);
}

TEST(BuildRecovery, CompletenessUpToSixQubits) {
  for (int n = 2; n <= 6; ++n) {
    for (CodeFamily family : {CodeFamily::rc, CodeFamily::dfs}) {
      CodePipeline pl = build_pipeline(family, n);
      EXPECT_LT(pl.recovery.completeness_residual(), kTol)
          << "family=" << (family == CodeFamily::rc ? "rc" : "dfs") << " n=" << n;
    }
  }
}

TEST(BuildRecovery, PhaseBasisCompleteness) {
  for (int n : {3, 4}) {
    for (CodeFamily family : {CodeFamily::rc, CodeFamily::dfs}) {
      CodePipeline pl = build_pipeline(family, n, FlipType::phase);
      EXPECT_LT(pl.recovery.completeness_residual(), kTol);
    }
  }
}

TEST(ComposedChannel, CountsAndOrder) {
  CodePipeline rc3 = build_pipeline(CodeFamily::rc, 3, FlipType::bit, NoisePoint{0.3, 0.2});
  std::vector<DenseOperator> ops = composed_channel(rc3.channel, rc3.recovery);
  EXPECT_EQ(ops.size(), 32u);  // 4 x 8

  CodePipeline dfs4 = build_pipeline(CodeFamily::dfs, 4, FlipType::bit, NoisePoint{0.3, 0.2});
  EXPECT_EQ(composed_channel(dfs4.channel, dfs4.recovery).size(), 32u);  // 2 x 16

  // (l major, k minor): entry k of the first block is R_1 A'_k
  Eigen::MatrixXcd expected =
      rc3.recovery.op(0).mat *
      (std::sqrt(rc3.channel.weight_value(1)) * dense(rc3.channel.terms[1].op).mat);
  EXPECT_LT((ops[1].mat - expected).cwiseAbs().maxCoeff(), kTol);

  MarkovChannel symbolic = make_channel(3, FlipType::bit);
  EXPECT_THROW(composed_channel(symbolic, rc3.recovery), std::logic_error);
}

TEST(ComposedChannel, TracePreservation) {
  std::mt19937 rng(17);
  for (CodeFamily family : {CodeFamily::rc, CodeFamily::dfs}) {
    for (int n = 3; n <= 6; ++n) {
      CodePipeline pl = build_pipeline(family, n, FlipType::bit, NoisePoint{0.35, 0.22});
      for (int trial = 0; trial < 3; ++trial) {
        DenseOperator rho = testing::random_density(n, rng);
        DenseOperator out = apply_composed(pl.channel, pl.recovery, rho);
        EXPECT_NEAR(out.mat.trace().real(), 1.0, kTol);
        EXPECT_NEAR(out.mat.trace().imag(), 0.0, kTol);
      }
    }
  }
}

TEST(ComposedChannel, ApplyMatchesDenseOperatorSum) {
  std::mt19937 rng(41);
  CodePipeline pl = build_pipeline(CodeFamily::dfs, 3, FlipType::bit, NoisePoint{0.3, 0.2});
  DenseOperator rho = testing::random_density(3, rng);
  Eigen::MatrixXcd expected = Eigen::MatrixXcd::Zero(8, 8);
  for (const DenseOperator& op : composed_channel(pl.channel, pl.recovery)) {
    expected += op.mat * rho.mat * op.mat.adjoint();
  }
  DenseOperator fast = apply_composed(pl.channel, pl.recovery, rho);
  EXPECT_LT((fast.mat - expected).cwiseAbs().maxCoeff(), kTol);
}

TEST(ComposedChannel, NoiselessActsAsIdentityOnCodespace) {
  CodePipeline pl = build_pipeline(CodeFamily::rc, 3, FlipType::bit, NoisePoint{0.5, 0.0});
  DenseOperator rho = DenseOperator::zeros(3);
  rho.mat = 0.5 * pl.code.projector.mat;  // maximally mixed logical state
  DenseOperator out = apply_composed(pl.channel, pl.recovery, rho);
  EXPECT_LT((out.mat - rho.mat).cwiseAbs().maxCoeff(), kTol);
}

TEST(Recovery, ExactlyOneRecoveryPerCorrectable) {
  const double mu = 0.3;
  const double p = 0.2;
  for (CodeFamily family : {CodeFamily::rc, CodeFamily::dfs}) {
    CodePipeline pl = build_pipeline(family, 4, FlipType::bit, NoisePoint{mu, p});
    std::vector<KrausTerm> correctable = pl.correctable;
    for (const KrausTerm& term : correctable) {
      int identity_hits = 0;
      for (std::size_t l = 0; l < pl.recovery.size(); ++l) {
        Eigen::MatrixXcd m =
            pl.recovery.op(l).mat * (std::sqrt(term.weight.eval(mu, p)) * dense(term.op).mat);
        Eigen::Matrix2cd rm = restricted_matrix(DenseOperator{4, m}, pl.code);
        std::complex<double> tr = rm(0, 0) + rm(1, 1);
        if (std::abs(tr) < 1e-12) continue;
        ++identity_hits;
        Eigen::Matrix2cd expected =
            std::sqrt(term.weight.eval(mu, p)) * Eigen::Matrix2cd::Identity();
        EXPECT_LT((rm - expected).cwiseAbs().maxCoeff(), 1e-12);
      }
      EXPECT_EQ(identity_hits, 1) << "pattern=" << term.pattern;
    }
  }
}

TEST(Recovery, DfsScalarActionLaw) {
  for (int n : {3, 4, 5}) {
    Code dfs = dfs_code(n);
    MarkovChannel ch = make_channel(n, FlipType::bit);
    for (const KrausTerm& term : ch.terms) {
      StateVector img0 = apply(term.op, dfs.zero_logical);
      StateVector img1 = apply(term.op, dfs.one_logical);
      // X strings permute the uniform |+...+> amplitudes exactly
      EXPECT_EQ((img0.amps - dfs.zero_logical.amps).cwiseAbs().maxCoeff(), 0.0);
      const double sign = (std::popcount(term.pattern) & 1) ? -1.0 : 1.0;
      EXPECT_EQ((img1.amps - sign * dfs.one_logical.amps).cwiseAbs().maxCoeff(), 0.0);
    }
  }
}

// The spec conjectures that any complement swap of a weight-n/2
// representative leaves the fidelity unchanged.  That holds only for the
// reversal-paired choices; the palindromic pair X1X4 <-> X2X3 shifts the
// polynomial by exactly mu p (1-mu)^2 (1-p)(1-2p).
TEST(Recovery, HalfSelectionSwapsN4) {
  MarkovChannel ch = make_channel(4, FlipType::bit);
  Code rc = repetition_code(4);

  auto weight_of = [&](std::uint32_t pattern) { return ch.terms[pattern].weight; };
  // reversal pairs: equal weights, so these swaps preserve the fidelity
  EXPECT_EQ(weight_of(0b0011), weight_of(0b1100));
  EXPECT_EQ(weight_of(0b0101), weight_of(0b1010));

  // palindromic pair: exact difference
  BiPoly one = BiPoly::constant(1);
  BiPoly expected_gap = BiPoly::mu() * (one - BiPoly::mu()) * (one - BiPoly::mu()) * BiPoly::p() *
                        (one - BiPoly::p()) * (one - 2 * BiPoly::p());
  EXPECT_EQ(weight_of(0b0110) - weight_of(0b1001), expected_gap);

  // both selections yield valid trace-preserving recoveries
  std::vector<KrausTerm> standard = correctable_set(ch, rc);
  std::vector<KrausTerm> alternate;
  for (const KrausTerm& term : standard) {
    bool swap = std::popcount(term.pattern) == 2;
    alternate.push_back(swap ? ch.terms[~term.pattern & 0xFu] : term);
  }
  RecoverySet rec_std = build_recovery(syndrome_subspaces(standard, rc), rc);
  RecoverySet rec_alt = build_recovery(syndrome_subspaces(alternate, rc), rc);
  EXPECT_LT(rec_std.completeness_residual(), kTol);
  EXPECT_LT(rec_alt.completeness_residual(), kTol);

  BiPoly f_std;
  for (const KrausTerm& t : standard) f_std += t.weight;
  BiPoly f_alt;
  for (const KrausTerm& t : alternate) f_alt += t.weight;
  EXPECT_EQ(f_alt - f_std, expected_gap);

  // the geometry route agrees with the weight sums for both recoveries
  FidelityResult fid_std = entanglement_fidelity(rc, ch, rec_std);
  FidelityResult fid_alt = entanglement_fidelity(rc, ch, rec_alt);
  for (double mu : {0.0, 0.3, 0.7, 1.0}) {
    for (double p : {0.1, 0.45}) {
      EXPECT_NEAR(fid_std.numeric(mu, p), f_std.eval(mu, p), kTol);
      EXPECT_NEAR(fid_alt.numeric(mu, p), f_alt.eval(mu, p), kTol);
    }
  }
}

}  // namespace
}  // namespace memqec
