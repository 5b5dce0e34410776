#include <gtest/gtest.h>

#include <map>

#include "electryo/group/p256_group.hpp"
#include "electryo/group/test_group.hpp"
#include "electryo/mixnet.hpp"

using namespace electryo;

namespace {

using TG = TestGroup;

FsContext mix_ctx() { return {to_bytes("mix-election"), "unit-mix", {}}; }

struct Fixture {
  std::vector<ElGamalKeyPair<TG>> keys;  // one per slot
  std::vector<Element<TG>> pks;
  MixBatch<TG> batch;
  std::vector<std::vector<Element<TG>>> plain;  // [row][slot]
};

Fixture make_batch(std::size_t rows, std::size_t slots, RandomSource& rng) {
  Fixture f;
  for (std::size_t l = 0; l < slots; ++l) {
    f.keys.push_back(keygen<TG>(rng));
    f.pks.push_back(f.keys.back().pk);
    f.batch.slots.push_back({SlotKind::Plain, 1});
  }
  for (std::size_t i = 0; i < rows; ++i) {
    MixRow<TG> row;
    std::vector<Element<TG>> pt;
    for (std::size_t l = 0; l < slots; ++l) {
      pt.push_back(exp_encode<TG>(1 + 1000 * l + i));
      row.push_back(eg_encrypt<TG>(f.pks[l], pt.back(), rng));
    }
    f.batch.rows.push_back(std::move(row));
    f.plain.push_back(std::move(pt));
  }
  return f;
}

std::vector<std::vector<Element<TG>>> open(const Fixture& f, const MixBatch<TG>& b) {
  std::vector<std::vector<Element<TG>>> out;
  for (const auto& row : b.rows) {
    std::vector<Element<TG>> pt;
    for (std::size_t l = 0; l < row.size(); ++l) pt.push_back(eg_decrypt<TG>(f.keys[l].sk, row[l]));
    out.push_back(std::move(pt));
  }
  return out;
}

}  // namespace

TEST(Shuffle, OutputIsPermutedReencryptionOfInput) {
  SeededRng rng(71);
  auto f = make_batch(100, 5, rng);
  auto res = shuffle<TG>(f.batch, f.pks, mix_ctx(), rng);
  ASSERT_TRUE(verify_shuffle<TG>(f.batch, res.output, res.proof, f.pks, mix_ctx()));

  // Oracle: decrypt both sides. Every output row must be the complete
  // input row psi(i), so each slot moved with the same permutation.
  const auto out = open(f, res.output);
  std::map<std::vector<Element<TG>>, int> in_rows, out_rows;
  for (const auto& r : f.plain) ++in_rows[r];
  for (const auto& r : out) ++out_rows[r];
  EXPECT_EQ(in_rows, out_rows);
  std::size_t moved = 0;
  for (std::size_t i = 0; i < out.size(); ++i) {
    EXPECT_EQ(out[i], f.plain[res.state.permutation[i]]);
    for (std::size_t l = 0; l < 5; ++l) EXPECT_NE(res.output.rows[i][l], f.batch.rows[res.state.permutation[i]][l]);
    moved += res.state.permutation[i] != i;
  }
  EXPECT_GT(moved, 90u);
}

TEST(Shuffle, IdentityPermutationStillProves) {
  SeededRng rng(72);
  auto f = make_batch(6, 2, rng);
  std::vector<std::uint32_t> psi{0, 1, 2, 3, 4, 5};
  std::vector<std::vector<Scalar<TG>>> rerand(6);
  for (auto& r : rerand) r = {TG::random_scalar(rng), TG::random_scalar(rng)};
  auto res = shuffle_with<TG>(f.batch, f.pks, psi, rerand, mix_ctx(), rng);
  EXPECT_TRUE(verify_shuffle<TG>(f.batch, res.output, res.proof, f.pks, mix_ctx()));
  EXPECT_EQ(open(f, res.output), f.plain);
}

TEST(Shuffle, RejectsBadPermutationOrRandomnessShape) {
  SeededRng rng(73);
  auto f = make_batch(3, 1, rng);
  std::vector<std::vector<Scalar<TG>>> rerand(3, {TG::scalar(1)});
  EXPECT_THROW(shuffle_with<TG>(f.batch, f.pks, {0, 0, 2}, rerand, mix_ctx(), rng), Error);
  EXPECT_THROW(shuffle_with<TG>(f.batch, f.pks, {0, 1}, rerand, mix_ctx(), rng), Error);
  rerand.pop_back();
  EXPECT_THROW(shuffle_with<TG>(f.batch, f.pks, {0, 1, 2}, rerand, mix_ctx(), rng), Error);
  auto single = f.batch;
  single.rows.resize(1);
  EXPECT_THROW(shuffle<TG>(single, f.pks, mix_ctx(), rng), Error);
}

TEST(Shuffle, RccaSlotsMixAsUnits) {
  SeededRng rng(74);
  auto kp = keygen<TG>(rng);
  const auto eid = to_bytes("mix-election");
  MixBatch<TG> batch;
  batch.slots = {rcca_slot<TG>(), {SlotKind::Plain, 1}};
  std::vector<Bytes> msgs;
  for (int i = 0; i < 5; ++i) {
    Bytes m(rcca_layout<TG>().message_bytes(), static_cast<std::uint8_t>('a' + i));
    msgs.push_back(m);
    MixRow<TG> row;
    append_rcca(row, rcca_encrypt<TG>(kp.pk, m, eid, rng));
    row.push_back(eg_encrypt<TG>(kp.pk, exp_encode<TG>(i + 1), rng));
    batch.rows.push_back(std::move(row));
  }
  auto res = shuffle<TG>(batch, {kp.pk, kp.pk}, mix_ctx(), rng);
  ASSERT_TRUE(verify_shuffle<TG>(batch, res.output, res.proof, {kp.pk, kp.pk}, mix_ctx()));
  const auto binding = rcca_binding(eid);
  for (std::size_t i = 0; i < 5; ++i) {
    const auto src = res.state.permutation[i];
    EXPECT_EQ(rcca_decrypt<TG>(kp.sk, read_rcca<TG>(res.output.rows[i], 0, binding), eid), msgs[src]);
    EXPECT_EQ(exp_decode<TG>(eg_decrypt<TG>(kp.sk, res.output.rows[i].back()), 10), src + 1);
  }
}

class ShuffleMutation : public ::testing::Test {
 protected:
  void SetUp() override {
    f = make_batch(8, 3, rng);
    res = shuffle<TG>(f.batch, f.pks, mix_ctx(), rng);
    ASSERT_TRUE(verify_shuffle<TG>(f.batch, res.output, res.proof, f.pks, mix_ctx()));
  }
  bool accepts(const MixBatch<TG>& out, const ShuffleProof<TG>& p) {
    return static_cast<bool>(verify_shuffle<TG>(f.batch, out, p, f.pks, mix_ctx()));
  }
  SeededRng rng{75};
  Fixture f;
  ShuffleResult<TG> res;
};

TEST_F(ShuffleMutation, SwappedInRow) {
  auto out = res.output;
  for (std::size_t l = 0; l < 3; ++l) out.rows[4][l] = eg_encrypt<TG>(f.pks[l], exp_encode<TG>(999), rng);
  EXPECT_FALSE(accepts(out, res.proof));
}

TEST_F(ShuffleMutation, DroppedRow) {
  auto out = res.output;
  out.rows.pop_back();
  EXPECT_FALSE(accepts(out, res.proof));
}

TEST_F(ShuffleMutation, DuplicatedRow) {
  auto out = res.output;
  out.rows[2] = out.rows[5];
  EXPECT_FALSE(accepts(out, res.proof));
  // A duplicate that is also re-randomised is still caught.
  for (std::size_t l = 0; l < 3; ++l) out.rows[2][l] = eg_reencrypt<TG>(f.pks[l], res.output.rows[5][l], rng);
  EXPECT_FALSE(accepts(out, res.proof));
}

TEST_F(ShuffleMutation, SlotRepairing) {
  // Same multiset of ciphertexts in every slot, but slot 1 of two rows is
  // exchanged so the rows no longer travel together.
  auto out = res.output;
  std::swap(out.rows[0][1], out.rows[1][1]);
  EXPECT_FALSE(accepts(out, res.proof));
}

TEST_F(ShuffleMutation, ProofFieldMutations) {
  const auto g = TG::generator();
  const auto one = TG::scalar(1);
  std::vector<std::function<void(ShuffleProof<TG>&)>> edits = {
      [&](auto& p) { p.permutation_commitment[3] = p.permutation_commitment[3] * g; },
      [&](auto& p) { std::swap(p.permutation_commitment[0], p.permutation_commitment[1]); },
      [&](auto& p) { p.chain[2] = p.chain[2] * g; },
      [&](auto& p) { p.t1 = p.t1 * g; },
      [&](auto& p) { p.t2 = p.t2 * g; },
      [&](auto& p) { p.t3 = p.t3 * g; },
      [&](auto& p) { p.t4[1].a = p.t4[1].a * g; },
      [&](auto& p) { p.t4[2].b = p.t4[2].b * g; },
      [&](auto& p) { p.t_hat[7] = p.t_hat[7] * g; },
      [&](auto& p) { p.s1 = p.s1 + one; },
      [&](auto& p) { p.s2 = p.s2 + one; },
      [&](auto& p) { p.s3 = p.s3 + one; },
      [&](auto& p) { p.s4[0] = p.s4[0] + one; },
      [&](auto& p) { p.s_hat[4] = p.s_hat[4] + one; },
      [&](auto& p) { p.s_prime[6] = p.s_prime[6] + one; },
      [&](auto& p) { p.s_prime.pop_back(); },
  };
  for (std::size_t k = 0; k < edits.size(); ++k) {
    auto p = res.proof;
    edits[k](p);
    EXPECT_FALSE(accepts(res.output, p)) << "edit " << k;
  }
}

TEST_F(ShuffleMutation, StaleProofFromAnotherShuffle) {
  auto other = shuffle<TG>(f.batch, f.pks, mix_ctx(), rng);
  EXPECT_FALSE(accepts(other.output, res.proof));
  EXPECT_FALSE(accepts(res.output, other.proof));
}

TEST_F(ShuffleMutation, WrongContextOrKeys) {
  auto ctx = mix_ctx();
  ctx.phase_label = "other-mix";
  EXPECT_FALSE(verify_shuffle<TG>(f.batch, res.output, res.proof, f.pks, ctx));
  auto keys = f.pks;
  std::swap(keys[0], keys[1]);
  EXPECT_FALSE(verify_shuffle<TG>(f.batch, res.output, res.proof, keys, mix_ctx()));
}

TEST(Cascade, HonestCascadeVerifiesAndComposes) {
  SeededRng rng(76);
  auto f = make_batch(10, 2, rng);
  auto c = run_cascade<TG>(f.batch, 3, f.pks, mix_ctx(), rng);
  ASSERT_EQ(c.stages.size(), 3u);
  EXPECT_EQ(verify_cascade<TG>(f.batch, c.stages, f.pks, mix_ctx()), 0u);
  // Composed permutation: final row i came from input row p1[p2[p3[i]]].
  const auto out = open(f, c.final_batch());
  for (std::size_t i = 0; i < 10; ++i) {
    auto src = c.states[0].permutation[c.states[1].permutation[c.states[2].permutation[i]]];
    EXPECT_EQ(out[i], f.plain[src]);
  }
}

TEST(Cascade, SingleServer) {
  SeededRng rng(77);
  auto f = make_batch(4, 1, rng);
  auto c = run_cascade<TG>(f.batch, 1, f.pks, mix_ctx(), rng);
  EXPECT_EQ(verify_cascade<TG>(f.batch, c.stages, f.pks, mix_ctx()), 0u);
  EXPECT_THROW(run_cascade<TG>(f.batch, 0, f.pks, mix_ctx(), rng), Error);
}

TEST(Cascade, CorruptStageIsNamed) {
  SeededRng rng(78);
  auto f = make_batch(6, 2, rng);
  StageTamper<TG> drop_at_2 = [&](std::uint32_t server, MixStage<TG>& s) {
    if (server == 2) s.output.rows[3] = s.output.rows[0];
  };
  try {
    run_cascade<TG>(f.batch, 3, f.pks, mix_ctx(), rng, drop_at_2);
    FAIL() << "corrupt stage accepted";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::StageProofInvalid);
    EXPECT_EQ(e.index(), 2u);
  }
  // A driver that skipped the checks leaves the fault for the verifier.
  auto c = run_cascade<TG>(f.batch, 3, f.pks, mix_ctx(), rng, drop_at_2, false);
  std::string why;
  EXPECT_EQ(verify_cascade<TG>(f.batch, c.stages, f.pks, mix_ctx(), &why), 2u);
  EXPECT_FALSE(why.empty());

  auto renumbered = run_cascade<TG>(f.batch, 2, f.pks, mix_ctx(), rng).stages;
  renumbered[1].server = 5;
  EXPECT_EQ(verify_cascade<TG>(f.batch, renumbered, f.pks, mix_ctx()), 2u);
  EXPECT_EQ(verify_cascade<TG>(f.batch, {}, f.pks, mix_ctx()), 1u);
}

TEST(Cascade, P256TwoServers) {
  SeededRng rng(79);
  auto kp = keygen<P256Group>(rng);
  MixBatch<P256Group> b;
  b.slots = {{SlotKind::Plain, 1}};
  for (std::uint64_t i = 1; i <= 4; ++i) b.rows.push_back({eg_encrypt<P256Group>(kp.pk, exp_encode<P256Group>(i), rng)});
  auto c = run_cascade<P256Group>(b, 2, {kp.pk}, mix_ctx(), rng);
  EXPECT_EQ(verify_cascade<P256Group>(b, c.stages, {kp.pk}, mix_ctx()), 0u);
  std::multiset<std::uint64_t> seen;
  for (const auto& row : c.final_batch().rows) seen.insert(exp_decode<P256Group>(eg_decrypt<P256Group>(kp.sk, row[0]), 4));
  EXPECT_EQ(seen, (std::multiset<std::uint64_t>{1, 2, 3, 4}));
}
