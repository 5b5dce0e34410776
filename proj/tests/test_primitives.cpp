#include <gtest/gtest.h>

#include "electryo/polling.hpp"

using namespace electryo;

namespace {

template <class G>
class Primitives : public ::testing::Test {};

using Backends = ::testing::Types<TestGroup, P256Group>;
TYPED_TEST_SUITE(Primitives, Backends);

const Bytes kEid = to_bytes("unit-election:00");
const Bytes kOtherEid = to_bytes("unit-election:01");

template <class G>
Bytes random_message(RandomSource& rng) {
  Bytes m(rcca_layout<G>().message_bytes());
  rng.fill(m);
  return m;
}

}  // namespace

TYPED_TEST(Primitives, RccaRoundTripAndReencryption) {
  using G = TypeParam;
  SeededRng rng(21);
  auto kp = keygen<G>(rng);
  for (int i = 0; i < 20; ++i) {
    auto m = random_message<G>(rng);
    auto c = rcca_encrypt<G>(kp.pk, m, kEid, rng);
    EXPECT_EQ(rcca_decrypt<G>(kp.sk, c, kEid), m);
    auto c2 = rcca_reencrypt<G>(kp.pk, c, rng);
    for (std::size_t j = 0; j < c.c1.size(); ++j) EXPECT_NE(c.c1[j], c2.c1[j]);
    EXPECT_EQ(rcca_decrypt<G>(kp.sk, c2, kEid), m);
  }
}

TYPED_TEST(Primitives, RccaShortMessagesAreZeroPadded) {
  using G = TypeParam;
  SeededRng rng(22);
  auto kp = keygen<G>(rng);
  auto c = rcca_encrypt<G>(kp.pk, to_bytes("V7"), kEid, rng);
  auto block = rcca_decrypt<G>(kp.sk, c, kEid);
  ASSERT_EQ(block.size(), rcca_layout<G>().message_bytes());
  EXPECT_EQ(block[0], 'V');
  EXPECT_EQ(block[1], '7');
  EXPECT_TRUE(std::all_of(block.begin() + 2, block.end(), [](auto b) { return b == 0; }));
  Bytes too_long(rcca_layout<G>().message_bytes() + 1, 1);
  EXPECT_THROW(rcca_encrypt<G>(kp.pk, too_long, kEid, rng), Error);
}

TYPED_TEST(Primitives, RccaBoundToElection) {
  using G = TypeParam;
  SeededRng rng(23);
  auto kp = keygen<G>(rng);
  auto c = rcca_encrypt<G>(kp.pk, random_message<G>(rng), kEid, rng);
  EXPECT_THROW(rcca_decrypt<G>(kp.sk, c, kOtherEid), Error);
  // Even with the binding rewritten the OAEP rounds are keyed by the id.
  c.binding = rcca_binding(kOtherEid);
  EXPECT_THROW(rcca_decrypt<G>(kp.sk, c, kOtherEid), Error);
}

TYPED_TEST(Primitives, RccaRejectsComponentMutations) {
  using G = TypeParam;
  SeededRng rng(24);
  auto kp = keygen<G>(rng);
  auto c = rcca_encrypt<G>(kp.pk, random_message<G>(rng), kEid, rng);
  const auto pairs = c.pairs();
  for (std::size_t j = 0; j < pairs.size(); ++j)
    for (int which = 0; which < 2; ++which) {
      auto mutated = pairs;
      auto& comp = which == 0 ? mutated[j].a : mutated[j].b;
      comp = comp * G::generator();
      auto m = RccaCiphertext<G>::from_pairs(mutated, c.binding);
      EXPECT_THROW(rcca_decrypt<G>(kp.sk, m, kEid), Error) << "pair " << j << " component " << which;
    }
  // Homomorphic mauling by a known plaintext factor is also caught.
  auto mauled = c;
  mauled.c1[0] = mauled.c1[0] * eg_encrypt<G>(kp.pk, G::embed(Bytes(G::kPayloadBytes, 1)), rng);
  EXPECT_THROW(rcca_decrypt<G>(kp.sk, mauled, kEid), Error);
  auto short_c = c;
  short_c.c2.pop_back();
  EXPECT_FALSE(rcca_well_formed<G>(short_c, kEid));
}

TYPED_TEST(Primitives, SignaturesVerifyAndBindMessage) {
  using G = TypeParam;
  SeededRng rng(25);
  auto key = signing_keygen<G>(rng);
  auto other = signing_keygen<G>(rng);
  const auto msg = to_bytes("ballot id");
  auto sig = sign<G>(key, msg, rng);
  EXPECT_TRUE(verify_sig<G>(key.vk, msg, sig));
  EXPECT_FALSE(verify_sig<G>(other.vk, msg, sig));
  EXPECT_FALSE(verify_sig<G>(key.vk, to_bytes("ballot iD"), sig));
  auto bad = sig;
  bad.response = bad.response + G::scalar(1);
  EXPECT_FALSE(verify_sig<G>(key.vk, msg, bad));

  auto compact = sig.to_compact();
  EXPECT_EQ(compact.size(), Signature<G>::kCompactBytes);
  auto back = Signature<G>::from_compact(compact);
  ASSERT_TRUE(back.has_value());
  EXPECT_TRUE(verify_sig<G>(key.vk, msg, *back));
}

TEST(Signatures, CompactSizeFitsOneBlockOnP256) {
  EXPECT_EQ(Signature<P256Group>::kCompactBytes, 48u);
  EXPECT_EQ(rcca_layout<P256Group>().message_bytes(), 48u);
}

TYPED_TEST(Primitives, IdSignatureBoundToElectionAndExtras) {
  using G = TypeParam;
  SeededRng rng(26);
  auto cred = make_credential<G>("V0001", rng);
  auto m = id_signature_message("V0001", kEid);
  auto sig = sign<G>(cred.signing, m, rng);
  EXPECT_TRUE(verify_sig<G>(cred.signing.vk, m, sig));
  EXPECT_FALSE(verify_sig<G>(cred.signing.vk, id_signature_message("V0001", kOtherEid), sig));
  EXPECT_FALSE(verify_sig<G>(cred.signing.vk, id_signature_message("V0001", kEid, "2024-06-01|p1"), sig));
}

TYPED_TEST(Primitives, PayloadFraming) {
  using G = TypeParam;
  auto framed = frame_payload<G>(to_bytes("V0042"));
  EXPECT_EQ(framed.size(), rcca_layout<G>().message_bytes());
  EXPECT_EQ(unframe_payload(framed), to_bytes("V0042"));
  EXPECT_FALSE(unframe_payload(Bytes(framed.size(), 0)).has_value());

  Bytes sig(Signature<G>::kCompactBytes, 0xab);
  auto padded = signature_payload<G>(sig);
  EXPECT_EQ(signature_from_payload<G>(padded), sig);
  if (padded.size() > sig.size()) {
    padded.back() = 1;
    EXPECT_FALSE(signature_from_payload<G>(padded).has_value());
  }
}

// QR capacities: version 6 (binary, low ECC) holds 1088 bits; the
// full code is sized against version 10 (2192 bits).
TEST(QrBudget, P256BallotCodeFitsVersion6PerComponent) {
  SeededRng rng(27);
  auto kp = keygen<P256Group>(rng);
  auto cred = make_credential<P256Group>("V0001", rng);
  auto code = card_issue<P256Group>(cred, kp.pk, kEid, "", rng);
  auto budget = qr_budget<P256Group>(code);
  EXPECT_EQ(kQrVersion6Bits, 1088u);
  EXPECT_EQ(kQrVersion10Bits, 2192u);
  // two pairs of two compressed 33-byte points per component
  EXPECT_EQ(budget.id_bits, 2u * 2u * 33u * 8u);
  EXPECT_EQ(budget.sig_bits, 1056u);
  EXPECT_TRUE(budget.fits());
}

TEST(QrBudget, TestGroupBallotCodeFits) {
  SeededRng rng(28);
  auto kp = keygen<TestGroup>(rng);
  auto cred = make_credential<TestGroup>("V0001", rng);
  auto budget = qr_budget<TestGroup>(card_issue<TestGroup>(cred, kp.pk, kEid, "", rng));
  EXPECT_EQ(budget.id_bits, 18u * 2u * 3u * 8u);
  EXPECT_TRUE(budget.fits());
}

TEST(Hashing, DomainSeparation) {
  const auto data = to_bytes("x");
  EXPECT_NE(sha256("a", data), sha256("b", data));
  EXPECT_EQ(sha256("a", data), sha256("a", data));
  EXPECT_EQ(shake256("a", data, 40).size(), 40u);
  // Absorbed items are length-framed: ("ab","c") differs from ("a","bc").
  Hasher h1("d"), h2("d");
  h1.absorb(std::string_view("ab")).absorb(std::string_view("c"));
  h2.absorb(std::string_view("a")).absorb(std::string_view("bc"));
  EXPECT_NE(h1.digest(), h2.digest());
}
