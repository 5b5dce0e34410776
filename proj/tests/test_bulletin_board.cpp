#include <gtest/gtest.h>

#include <filesystem>

#include "electryo/bulletin_board.hpp"

using namespace electryo;

namespace {

BulletinBoard small_board() {
  BulletinBoard bb;
  bb.append(Phase::Setup, "authority", to_bytes("params"));
  bb.append(Phase::PreVote, "teller-1", to_bytes("rows"));
  bb.append(Phase::CastBallots, "scanner-1", to_bytes("b0"));
  bb.append(Phase::CastBallots, "scanner-1", to_bytes("b1"));
  bb.append(Phase::MixIdSig, "mix-1", to_bytes("m"));
  bb.append(Phase::EligibleBallots, "authority", to_bytes("e"));
  bb.append(Phase::MixTrackerVote, "mix-1", to_bytes("m2"));
  bb.append(Phase::TallyBoard, "tellers", to_bytes("t"));
  return bb;
}

}  // namespace

TEST(BulletinBoard, FirstEntryLinksToZero) {
  BulletinBoard bb;
  const auto& e = bb.append(Phase::Setup, "authority", to_bytes("x"));
  EXPECT_EQ(e.prev_hash, Digest{});
  EXPECT_EQ(e.seq, 0u);
  EXPECT_EQ(e.entry_hash, BbEntry::compute_hash(Digest{}, 0, Phase::Setup, "authority", to_bytes("x")));
  EXPECT_EQ(bb.snapshot().length, 1u);
  EXPECT_EQ(bb.snapshot().head_hash, e.entry_hash);
  EXPECT_EQ(BulletinBoard().snapshot(), BbSnapshot{});
}

TEST(BulletinBoard, EveryFieldFeedsTheHash) {
  const Digest prev{};
  const auto base = BbEntry::compute_hash(prev, 3, Phase::PreVote, "a", to_bytes("p"));
  Digest other_prev{};
  other_prev[0] = 1;
  EXPECT_NE(base, BbEntry::compute_hash(other_prev, 3, Phase::PreVote, "a", to_bytes("p")));
  EXPECT_NE(base, BbEntry::compute_hash(prev, 4, Phase::PreVote, "a", to_bytes("p")));
  EXPECT_NE(base, BbEntry::compute_hash(prev, 3, Phase::Setup, "a", to_bytes("p")));
  EXPECT_NE(base, BbEntry::compute_hash(prev, 3, Phase::PreVote, "b", to_bytes("p")));
  EXPECT_NE(base, BbEntry::compute_hash(prev, 3, Phase::PreVote, "a", to_bytes("q")));
  // author/payload boundary is framed
  EXPECT_NE(BbEntry::compute_hash(prev, 0, Phase::Setup, "ab", to_bytes("c")),
            BbEntry::compute_hash(prev, 0, Phase::Setup, "a", to_bytes("bc")));
}

TEST(BulletinBoard, PhaseOrderIsEnforced) {
  auto bb = small_board();
  try {
    bb.append(Phase::CastBallots, "scanner-1", to_bytes("late"));
    FAIL() << "late ballot accepted";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::PhaseOrderViolation);
  }
  // Side logs interleave once the tally board is up, and close the main phases.
  bb.append(Phase::PetLog, "tellers", to_bytes("pet"));
  bb.append(Phase::AuditLog, "auditor", to_bytes("audit"));
  bb.append(Phase::PetLog, "tellers", to_bytes("pet2"));
  EXPECT_THROW(bb.append(Phase::TallyBoard, "tellers", to_bytes("t2")), Error);

  BulletinBoard early;
  early.append(Phase::Setup, "authority", {});
  EXPECT_THROW(early.append(Phase::PetLog, "tellers", {}), Error);
  early.open_phase(Phase::CastBallots);
  EXPECT_EQ(early.current_phase(), Phase::CastBallots);
  EXPECT_THROW(early.open_phase(Phase::PreVote), Error);
}

TEST(BulletinBoard, PhasesMaySkipForward) {
  BulletinBoard bb;
  bb.append(Phase::Setup, "authority", {});
  EXPECT_NO_THROW(bb.append(Phase::MixIdSig, "mix-1", {}));
  EXPECT_NO_THROW(bb.append(Phase::MixIdSig, "mix-2", {}));
}

TEST(BulletinBoard, ThousandAppendsKeepAnIntactChain) {
  BulletinBoard bb;
  bb.append(Phase::Setup, "authority", {});
  for (int i = 0; i < 1000; ++i) bb.append(Phase::CastBallots, "scanner-" + std::to_string(i % 4), to_bytes(std::to_string(i)));
  EXPECT_EQ(bb.size(), 1001u);
  EXPECT_TRUE(verify_chain(bb.entries()));
  for (std::size_t i = 1; i < bb.size(); ++i) EXPECT_EQ(bb.entries()[i].prev_hash, bb.entries()[i - 1].entry_hash);
}

TEST(BulletinBoard, MutationIsLocatedAtTheEditedEntry) {
  BulletinBoard bb;
  bb.append(Phase::Setup, "authority", {});
  for (int i = 0; i < 20; ++i) bb.append(Phase::CastBallots, "scanner-1", to_bytes(std::to_string(i)));
  auto entries = bb.entries();
  entries[5].payload.push_back('!');
  EXPECT_EQ(find_chain_break(entries), 5u);
  try {
    verify_chain(entries);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::ChainBroken);
    EXPECT_EQ(e.index(), 5u);
  }
  // Recomputing the edited entry's own hash moves the break to its successor.
  entries[5].entry_hash = entries[5].expected_hash();
  EXPECT_EQ(find_chain_break(entries), 6u);
  EXPECT_THROW(BulletinBoard{entries}, Error);
}

TEST(BulletinBoard, ReorderAndTruncationAreDetected) {
  auto entries = small_board().entries();
  auto swapped = entries;
  std::swap(swapped[2], swapped[3]);
  EXPECT_EQ(find_chain_break(swapped), 2u);
  auto dropped = entries;
  dropped.erase(dropped.begin() + 4);
  EXPECT_EQ(find_chain_break(dropped), 4u);
  // Truncating the tail keeps a valid prefix, which a snapshot exposes.
  auto truncated = entries;
  truncated.pop_back();
  EXPECT_FALSE(find_chain_break(truncated).has_value());
  EXPECT_NE(BulletinBoard(truncated).snapshot(), small_board().snapshot());
}

TEST(BulletinBoard, RechainedLogIsRejectedOnPhaseOrder) {
  auto entries = small_board().entries();
  std::swap(entries[1], entries[2]);  // CastBallots before PreVote
  rechain(entries);
  EXPECT_FALSE(find_chain_break(entries).has_value());
  try {
    BulletinBoard bb(entries);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::PhaseOrderViolation);
  }
}

TEST(BulletinBoard, ReadPhaseAndReload) {
  auto bb = small_board();
  auto casts = bb.read_phase(Phase::CastBallots);
  ASSERT_EQ(casts.size(), 2u);
  EXPECT_EQ(casts[0].payload, to_bytes("b0"));
  EXPECT_EQ(casts[1].payload, to_bytes("b1"));
  EXPECT_TRUE(bb.read_phase(Phase::AuditLog).empty());

  BulletinBoard reloaded(bb.entries());
  EXPECT_EQ(reloaded.snapshot(), bb.snapshot());
  EXPECT_EQ(reloaded.current_phase(), Phase::TallyBoard);
  EXPECT_THROW(reloaded.append(Phase::CastBallots, "scanner-1", {}), Error);
}

TEST(Transcript, FileRoundTrip) {
  auto bb = small_board();
  const auto path = std::filesystem::temp_directory_path() / "electryo-bb-roundtrip.bin";
  save_transcript(path, bb.entries());
  auto back = load_transcript(path);
  EXPECT_EQ(back, bb.entries());
  std::filesystem::remove(path);

  auto bytes = encode_transcript(bb.entries());
  EXPECT_EQ(to_string(ByteView(bytes).first(kTranscriptMagic.size())), kTranscriptMagic);
  auto corrupt = bytes;
  corrupt[0] = 'X';
  EXPECT_THROW(decode_transcript(corrupt), Error);
  auto cut = bytes;
  cut.resize(cut.size() - 3);
  EXPECT_THROW(decode_transcript(cut), Error);
  auto trailing = bytes;
  trailing.push_back(0);
  EXPECT_THROW(decode_transcript(trailing), Error);
  EXPECT_THROW(load_transcript("/nonexistent/electryo.bin"), Error);
}
