#include <gtest/gtest.h>

#include "electryo/elgamal.hpp"
#include "electryo/group/p256_group.hpp"
#include "electryo/group/test_group.hpp"

using namespace electryo;

namespace {

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

template <class G>
class GroupLaws : public ::testing::Test {};

using Backends = ::testing::Types<TestGroup, P256Group>;
TYPED_TEST_SUITE(GroupLaws, Backends);

}  // namespace

TEST(TestGroupParams, SafePrimeAndGeneratorOrder) {
  // Oracle: trial division and direct modular exponentiation.
  EXPECT_TRUE(is_prime(TestGroup::kP));
  EXPECT_TRUE(is_prime(TestGroup::kQ));
  EXPECT_EQ(TestGroup::kP, 2 * TestGroup::kQ + 1);
  EXPECT_EQ(TestGroup::powmod(TestGroup::kG, TestGroup::kQ, TestGroup::kP), 1u);
  EXPECT_NE(TestGroup::kG % TestGroup::kP, 1u);
}

TEST(TestGroupParams, FromValueAcceptsOnlyQuadraticResidues) {
  // Oracle: the table of all squares mod p.
  std::vector<bool> square(TestGroup::kP, false);
  for (std::uint64_t x = 1; x < TestGroup::kP; ++x) square[x * x % TestGroup::kP] = true;
  for (std::uint64_t v = 0; v < 5000; ++v)
    EXPECT_EQ(TestGroup::Element::from_value(v).has_value(), square[v]) << v;
  EXPECT_FALSE(TestGroup::Element::from_value(TestGroup::kP).has_value());
}

TEST(P256Params, StandardGeneratorAndOrder) {
  const auto spec = P256Group::spec();
  EXPECT_EQ(spec.order, "115792089210356248762697446949407573529996955224135760342422259061068512044369");
  EXPECT_EQ(spec.generator, "036b17d1f2e12c4247f8bce6e563a440f277037d812deb33a0f4a13945d898c296");
  EXPECT_EQ(spec.backend, Backend::ProdGroup);
}

TYPED_TEST(GroupLaws, ArithmeticIdentities) {
  using G = TypeParam;
  SeededRng rng(11);
  for (int i = 0; i < 20; ++i) {
    auto a = G::random_scalar(rng), b = G::random_scalar(rng);
    auto x = gpow<G>(a), y = gpow<G>(b);
    EXPECT_EQ(x * y, gpow<G>(a + b));
    EXPECT_EQ(x / y, gpow<G>(a - b));
    EXPECT_EQ(x.pow(b), gpow<G>(a * b));
    EXPECT_EQ(x * x.inverse(), G::identity());
    if (!a.is_zero()) {
      EXPECT_EQ(a * a.inverse(), G::scalar(1));
    }
  }
  EXPECT_EQ(gpow<G>(G::scalar(0)), G::identity());
}

TYPED_TEST(GroupLaws, EncodingRoundTripAndRejection) {
  using G = TypeParam;
  SeededRng rng(12);
  for (int i = 0; i < 20; ++i) {
    auto x = gpow<G>(G::random_scalar(rng));
    auto s = G::random_scalar(rng);
    EXPECT_EQ(decode<Element<G>>(encode(x)), x);
    EXPECT_EQ(decode<Scalar<G>>(encode(s)), s);
  }
  EXPECT_EQ(decode<Element<G>>(encode(G::identity())), G::identity());
  auto bytes = encode(G::generator());
  bytes.push_back(0);
  EXPECT_THROW(decode<Element<G>>(bytes), Error);
}

TYPED_TEST(GroupLaws, EmbedExtractRoundTrip) {
  using G = TypeParam;
  SeededRng rng(13);
  for (int i = 0; i < 50; ++i) {
    Bytes chunk(G::kPayloadBytes);
    rng.fill(chunk);
    auto e = G::embed(chunk);
    auto back = G::extract(e);
    ASSERT_TRUE(back.has_value());
    EXPECT_EQ(*back, chunk);
  }
}

TYPED_TEST(GroupLaws, HashToGroupIsDeterministicAndNonTrivial) {
  using G = TypeParam;
  auto a = G::hash_to_group(to_bytes("alpha"));
  EXPECT_EQ(a, G::hash_to_group(to_bytes("alpha")));
  EXPECT_NE(a, G::hash_to_group(to_bytes("beta")));
  EXPECT_NE(a, G::identity());
}

TYPED_TEST(GroupLaws, ExponentDecodingMatchesLinearScan) {
  using G = TypeParam;
  for (std::uint64_t n : {1u, 2u, 17u, 99u, 250u}) EXPECT_EQ(exp_decode<G>(exp_encode<G>(n), 250), n);
  EXPECT_EQ(exp_decode_bsgs<G>(exp_encode<G>(1234), 5000), 1234u);
  EXPECT_EQ(exp_decode_linear<G>(exp_encode<G>(77), 100), 77u);
  EXPECT_THROW(exp_decode<G>(exp_encode<G>(251), 250), Error);
  EXPECT_THROW(exp_decode<G>(G::identity(), 250), Error);  // range starts at 1
}

TYPED_TEST(GroupLaws, ElGamalRoundTripAndReencryption) {
  using G = TypeParam;
  SeededRng rng(14);
  auto kp = keygen<G>(rng);
  for (int i = 0; i < 10; ++i) {
    auto m = gpow<G>(G::random_scalar(rng));
    auto c = eg_encrypt<G>(kp.pk, m, rng);
    auto c2 = eg_reencrypt<G>(kp.pk, c, rng);
    EXPECT_NE(c, c2);
    EXPECT_EQ(eg_decrypt<G>(kp.sk, c), m);
    EXPECT_EQ(eg_decrypt<G>(kp.sk, c2), m);
    EXPECT_EQ(eg_decrypt<G>(kp.sk, c * c2), m * m);
  }
}

TEST(Codec, SetsRejectDuplicatesAndMapsRoundTrip) {
  std::set<std::string> s{"a", "b"};
  EXPECT_EQ(decode<std::set<std::string>>(encode(s)), s);
  std::map<std::uint32_t, std::string> m{{1, "x"}, {7, "y"}};
  EXPECT_EQ((decode<std::map<std::uint32_t, std::string>>(encode(m))), m);
  std::vector<std::string> dup{"a", "a"};
  EXPECT_THROW(decode<std::set<std::string>>(encode(dup)), Error);
}

TEST(Codec, IntegersAreMinimal) {
  Writer w;
  w.integer(0x1234);
  EXPECT_EQ(to_hex(w.data()), "021234");
  Bytes bad = from_hex("020012");
  Reader r(bad);
  EXPECT_THROW(r.integer(), Error);
}

TEST(Rng, SeededStreamsReplayAndForksDiffer) {
  SeededRng a(5), b(5);
  EXPECT_EQ(a.next_u64(), b.next_u64());
  auto f1 = SeededRng(5).fork("x"), f2 = SeededRng(5).fork("y");
  EXPECT_NE(f1.next_u64(), f2.next_u64());
  SeededRng c(6);
  for (int i = 0; i < 1000; ++i) EXPECT_LT(c.uniform(7), 7u);
}
