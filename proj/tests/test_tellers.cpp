#include <gtest/gtest.h>

#include "electryo/group/p256_group.hpp"
#include "electryo/group/test_group.hpp"
#include "electryo/tellers.hpp"

using namespace electryo;

namespace {

using TG = TestGroup;
const Bytes kEid = to_bytes("teller-election:7");

FsContext dctx() { return decryption_context(kEid); }

std::vector<DecryptShare<TG>> shares_for(const DkgResult<TG>& dk, const Ciphertext<TG>& c,
                                         std::initializer_list<std::uint32_t> ids, RandomSource& rng) {
  std::vector<DecryptShare<TG>> out;
  for (auto k : ids) out.push_back(partial_decrypt<TG>(k, dk.shares[k - 1].secret_share, c, dctx(), rng));
  return out;
}

}  // namespace

TEST(Dkg, AnySubsetReconstructsTheSameKey) {
  SeededRng rng(51);
  auto dk = dkg<TG>(3, 2, rng);
  auto s12 = reconstruct_secret<TG>({dk.shares[0], dk.shares[1]}, 2);
  auto s23 = reconstruct_secret<TG>({dk.shares[1], dk.shares[2]}, 2);
  auto s13 = reconstruct_secret<TG>({dk.shares[0], dk.shares[2]}, 2);
  EXPECT_EQ(s12, s23);
  EXPECT_EQ(s12, s13);
  EXPECT_EQ(gpow<TG>(s12), dk.pk);
  for (std::uint32_t k = 0; k < 3; ++k) EXPECT_EQ(dk.verification_keys[k], gpow<TG>(dk.shares[k].secret_share));
  EXPECT_THROW(reconstruct_secret<TG>({dk.shares[0]}, 2), Error);
}

TEST(Dkg, SingleShareDoesNotDetermineTheKey) {
  SeededRng rng(52);
  auto dk = dkg<TG>(3, 2, rng);
  // With t = 2 a lone share used as if it were the key is wrong.
  EXPECT_NE(gpow<TG>(dk.shares[0].secret_share), dk.pk);
}

TEST(Dkg, SingleTellerDegeneratesToPlainElGamal) {
  SeededRng rng(53);
  auto dk = dkg<TG>(1, 1, rng);
  auto c = eg_encrypt<TG>(dk.pk, exp_encode<TG>(42), rng);
  EXPECT_EQ(eg_decrypt<TG>(dk.shares[0].secret_share, c), exp_encode<TG>(42));
  EXPECT_EQ(combine_decrypt<TG>(c, shares_for(dk, c, {1}, rng), dk.verification_keys, 1, dctx()),
            exp_encode<TG>(42));
}

TEST(Dkg, CorruptedShareFailsFeldmanCheck) {
  SeededRng rng(54);
  std::vector<Dealing<TG>> dealings;
  for (std::uint32_t k = 1; k <= 3; ++k) dealings.push_back(deal<TG>(k, 3, 2, rng));
  for (std::uint32_t l = 1; l <= 3; ++l)
    EXPECT_TRUE(feldman_verify<TG>(dealings[1].shares[l - 1], l, dealings[1].commitments));
  dealings[1].shares[2] = dealings[1].shares[2] + TG::scalar(1);
  EXPECT_FALSE(feldman_verify<TG>(dealings[1].shares[2], 3, dealings[1].commitments));
  try {
    aggregate_dealings<TG>(dealings, 2);
    FAIL() << "bad dealing accepted";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::BadShare);
    EXPECT_EQ(e.index(), 2u);
  }
}

TEST(Dkg, InvalidParameters) {
  SeededRng rng(55);
  EXPECT_THROW(dkg<TG>(2, 3, rng), Error);
  EXPECT_THROW(dkg<TG>(3, 0, rng), Error);
}

TEST(ThresholdDecryption, EverySubsetAgreesWithFullKey) {
  SeededRng rng(56);
  auto dk = dkg<TG>(3, 2, rng);
  auto sk = reconstruct_secret<TG>(dk.shares, 2);
  for (int i = 0; i < 100; ++i) {
    auto m = gpow<TG>(TG::random_scalar(rng));
    auto c = eg_encrypt<TG>(dk.pk, m, rng);
    const auto oracle = eg_decrypt<TG>(sk, c);
    ASSERT_EQ(oracle, m);
    for (auto ids : {std::initializer_list<std::uint32_t>{1, 2}, {2, 3}, {1, 3}, {3, 1}, {1, 2, 3}})
      EXPECT_EQ(combine_decrypt<TG>(c, shares_for(dk, c, ids, rng), dk.verification_keys, 2, dctx()), oracle);
  }
}

TEST(ThresholdDecryption, TamperedShareRejected) {
  SeededRng rng(57);
  auto dk = dkg<TG>(3, 2, rng);
  auto c = eg_encrypt<TG>(dk.pk, exp_encode<TG>(3), rng);
  auto shares = shares_for(dk, c, {1, 2}, rng);
  shares[1].partial = shares[1].partial * TG::generator();
  try {
    combine_decrypt<TG>(c, shares, dk.verification_keys, 2, dctx());
    FAIL() << "tampered partial accepted";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::ShareProofInvalid);
    EXPECT_EQ(e.index(), 2u);
  }
  auto lenient = combine_lenient<TG>(c, shares, dk.verification_keys, 2, dctx());
  EXPECT_FALSE(lenient.plaintext.has_value());
  EXPECT_EQ(lenient.invalid_tellers, std::vector<std::uint32_t>{2});
}

TEST(ThresholdDecryption, DuplicateSharesDoNotCountTwice) {
  SeededRng rng(58);
  auto dk = dkg<TG>(3, 2, rng);
  auto c = eg_encrypt<TG>(dk.pk, exp_encode<TG>(3), rng);
  auto shares = shares_for(dk, c, {1, 1}, rng);
  EXPECT_THROW(combine_decrypt<TG>(c, shares, dk.verification_keys, 2, dctx()), Error);
}

TEST(ThresholdDecryption, LagrangeCoefficientsInterpolateConstants) {
  // Oracle: for f(x) = 5 + 3x the points (1, 8), (3, 14) interpolate f(0) = 5.
  std::vector<std::uint32_t> ids{1, 3};
  auto v = TG::scalar(8) * lagrange_at_zero<TG>(1, ids) + TG::scalar(14) * lagrange_at_zero<TG>(3, ids);
  EXPECT_EQ(v, TG::scalar(5));
}

TEST(ThresholdDecryption, WorksOnP256) {
  SeededRng rng(59);
  auto dk = dkg<P256Group>(3, 2, rng);
  auto c = eg_encrypt<P256Group>(dk.pk, exp_encode<P256Group>(11), rng);
  std::vector<DecryptShare<P256Group>> shares;
  for (std::uint32_t k : {3u, 1u})
    shares.push_back(partial_decrypt<P256Group>(k, dk.shares[k - 1].secret_share, c, dctx(), rng));
  EXPECT_EQ(combine_decrypt<P256Group>(c, shares, dk.verification_keys, 2, dctx()), exp_encode<P256Group>(11));
}

// ---------------------------------------------------------------------------
// Commitment construction

TEST(CommitmentFactors, SingleTellerMatchesDirectFormula) {
  SeededRng rng(60);
  auto dk = dkg<TG>(1, 1, rng);
  auto voter = keygen<TG>(rng);
  auto sig = signing_keygen<TG>(rng);
  auto r = TG::random_scalar(rng), sigma = TG::random_scalar(rng);
  const std::uint64_t n = 17;
  auto enc_tracker = eg_encrypt<TG>(dk.pk, exp_encode<TG>(n), rng);
  auto c = contribute_alpha_factor<TG>(1, 0, dk.pk, voter.pk, r, sigma, kEid, sig, rng);
  auto combined = combine_commitment<TG>(enc_tracker, {c.posted.factor});
  auto C = eg_decrypt<TG>(dk.shares[0].secret_share, combined);
  EXPECT_EQ(C, voter.pk.pow(r) * exp_encode<TG>(n));
  EXPECT_EQ(c.kept.g_exp_share, gpow<TG>(r));
}

TEST(CommitmentFactors, ThreeTellersAddExponents) {
  SeededRng rng(61);
  auto dk = dkg<TG>(3, 2, rng);
  auto sk = reconstruct_secret<TG>(dk.shares, 2);
  auto voter = keygen<TG>(rng);
  const std::uint64_t n = 9;
  auto enc_tracker = eg_encrypt<TG>(dk.pk, exp_encode<TG>(n), rng);
  std::vector<Ciphertext<TG>> factors;
  std::vector<AlphaShareRecord<TG>> kept;
  auto r_sum = TG::scalar(0);
  for (std::uint32_t k = 1; k <= 3; ++k) {
    auto sig = signing_keygen<TG>(rng);
    auto r = TG::random_scalar(rng);
    r_sum += r;
    auto c = contribute_alpha_factor<TG>(k, 0, dk.pk, voter.pk, r, TG::random_scalar(rng), kEid, sig, rng);
    EXPECT_TRUE(verify_commitment_factor<TG>(c.posted, dk.pk, voter.pk, kEid));
    EXPECT_TRUE(verify_alpha_record<TG>(c.kept, voter.pk, sig.vk, kEid));
    factors.push_back(c.posted.factor);
    kept.push_back(c.kept);
  }
  auto C = eg_decrypt<TG>(sk, combine_commitment<TG>(enc_tracker, factors));
  EXPECT_EQ(C, voter.pk.pow(r_sum) * exp_encode<TG>(n));
  // (prod g^{r_k}, C) opens to g^n under the voter's key.
  auto alpha = TG::identity();
  for (const auto& r : kept) alpha = alpha * r.g_exp_share;
  EXPECT_EQ(C / alpha.pow(voter.sk), exp_encode<TG>(n));
}

TEST(CommitmentFactors, ProofsRejectWrongStatements) {
  SeededRng rng(62);
  auto dk = dkg<TG>(3, 2, rng);
  auto voter = keygen<TG>(rng), other = keygen<TG>(rng);
  auto sig = signing_keygen<TG>(rng), other_sig = signing_keygen<TG>(rng);
  auto c = contribute_alpha_factor<TG>(2, 4, dk.pk, voter.pk, kEid, sig, rng);
  EXPECT_FALSE(verify_commitment_factor<TG>(c.posted, dk.pk, other.pk, kEid));
  auto moved = c.posted;
  moved.voter = 5;
  EXPECT_FALSE(verify_commitment_factor<TG>(moved, dk.pk, voter.pk, kEid));
  auto bumped = c.posted;
  bumped.factor.b = bumped.factor.b * TG::generator();
  EXPECT_FALSE(verify_commitment_factor<TG>(bumped, dk.pk, voter.pk, kEid));
  EXPECT_FALSE(verify_commitment_factor<TG>(c.posted, dk.pk, voter.pk, to_bytes("other")));

  EXPECT_FALSE(verify_alpha_record<TG>(c.kept, voter.pk, other_sig.vk, kEid));
  auto forged = c.kept;
  forged.g_exp_share = forged.g_exp_share * TG::generator();
  EXPECT_FALSE(verify_alpha_record<TG>(forged, voter.pk, sig.vk, kEid));
}
