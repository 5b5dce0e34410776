#include <gtest/gtest.h>

#include <set>

#include "electryo/group/p256_group.hpp"
#include "electryo/group/test_group.hpp"
#include "electryo/polling.hpp"

using namespace electryo;

namespace {

using TG = TestGroup;
const Bytes kEid = to_bytes("polling-election:3");

struct Station {
  ElGamalKeyPair<TG> election;
  VoterCredential<TG> cred;
  BallotCode<TG> card;
};

Station station(RandomSource& rng, const std::string& id = "V0007") {
  Station s{keygen<TG>(rng), make_credential<TG>(id, rng), {}};
  s.card = card_issue<TG>(s.cred, s.election.pk, kEid, "", rng);
  return s;
}

}  // namespace

TEST(ReceiptCodes, DammCheckDigit) {
  // Published worked example: the check digit of 572 is 4.
  EXPECT_EQ(damm_digit("572"), 4);
  EXPECT_EQ(damm_digit("5724"), 0);
  EXPECT_THROW(damm_digit("57a"), Error);
}

TEST(ReceiptCodes, ParseCatchesTyposAndTranspositions) {
  SeededRng rng(91);
  for (int i = 0; i < 200; ++i) {
    auto rc = ReceiptCode::random(rng);
    const auto text = rc.text();
    ASSERT_EQ(text.size(), 6u);
    EXPECT_EQ(ReceiptCode::parse(text), rc);
    for (std::size_t pos = 0; pos < 6; ++pos) {
      auto typo = text;
      typo[pos] = static_cast<char>('0' + (typo[pos] - '0' + 1 + rng.uniform(9)) % 10);
      EXPECT_THROW(ReceiptCode::parse(typo), Error) << typo;
    }
    for (std::size_t pos = 0; pos + 1 < 6; ++pos) {
      if (text[pos] == text[pos + 1]) continue;
      auto swapped = text;
      std::swap(swapped[pos], swapped[pos + 1]);
      EXPECT_THROW(ReceiptCode::parse(swapped), Error) << swapped;
    }
  }
  EXPECT_THROW(ReceiptCode::parse("12345"), Error);
  EXPECT_THROW(ReceiptCode::parse("1234567"), Error);
}

TEST(ReceiptCodes, MessageAvoidsIdentity) {
  ReceiptCode zero{"00000", '0'};
  EXPECT_EQ(damm_digit(zero.text()), 0);
  EXPECT_NE(rc_message<TG>(zero), TG::identity());
  EXPECT_EQ(rc_message<TG>(zero), exp_encode<TG>(1));
}

TEST(Clerk, RollAndSingleVisit) {
  Clerk clerk({"V0001", "V0002"});
  clerk.register_voter("V0001");
  EXPECT_TRUE(clerk.attended("V0001"));
  EXPECT_FALSE(clerk.attended("V0002"));
  try {
    clerk.register_voter("V0001");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::AlreadyVoted);
  }
  try {
    clerk.register_voter("V0099");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::NotOnRoll);
  }
  clerk.register_voter("V0002");
  EXPECT_EQ(clerk.attendance_log(), (std::vector<std::string>{"V0001", "V0002"}));
}

TEST(Card, OutputDecryptsToIdAndValidSignature) {
  SeededRng rng(92);
  auto s = station(rng);
  auto id_block = rcca_decrypt<TG>(s.election.sk, s.card.enc_id, kEid);
  EXPECT_EQ(unframe_payload(id_block), to_bytes("V0007"));
  auto sig_bytes = signature_from_payload<TG>(rcca_decrypt<TG>(s.election.sk, s.card.enc_sig, kEid));
  ASSERT_TRUE(sig_bytes.has_value());
  auto sig = Signature<TG>::from_compact(*sig_bytes);
  ASSERT_TRUE(sig.has_value());
  EXPECT_TRUE(verify_sig<TG>(s.cred.signing.vk, id_signature_message("V0007", kEid), *sig));
}

TEST(Printer, ReencryptsCardOutputComponentwise) {
  SeededRng rng(93);
  auto s = station(rng);
  auto paper = print_ballot<TG>(s.card, s.election.pk, kEid, rng);
  const auto before = s.card.pairs(), after = paper.code.pairs();
  ASSERT_EQ(before.size(), after.size());
  for (std::size_t j = 0; j < before.size(); ++j) {
    EXPECT_NE(before[j], after[j]);
    EXPECT_EQ(eg_decrypt<TG>(s.election.sk, before[j]), eg_decrypt<TG>(s.election.sk, after[j]));
  }
  EXPECT_FALSE(paper.vote.has_value());
}

TEST(Printer, RejectsMauledCardOutput) {
  SeededRng rng(94);
  auto s = station(rng);
  auto mauled = s.card;
  mauled.enc_sig.c2.pop_back();
  try {
    print_ballot<TG>(mauled, s.election.pk, kEid, rng);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::InvalidCardOutput);
  }
  EXPECT_THROW(print_ballot<TG>(s.card, s.election.pk, to_bytes("other"), rng), Error);
}

TEST(Scanner, TupleProofsVerify) {
  SeededRng rng(95);
  auto s = station(rng);
  auto paper = print_ballot<TG>(s.card, s.election.pk, kEid, rng);
  paper.vote = 2;
  auto scan = scan_ballot<TG>(paper, s.election.pk, kEid, 3, rng);
  const auto& t = scan.tuple;
  EXPECT_TRUE(verify_scanner_tuple<TG>(t, s.election.pk, kEid, 3));
  EXPECT_EQ(exp_decode<TG>(eg_decrypt<TG>(s.election.sk, t.enc_vote), 3), 2u);
  EXPECT_EQ(eg_decrypt<TG>(s.election.sk, t.enc_rc), rc_message<TG>(scan.receipt));
  EXPECT_EQ(rcca_decrypt<TG>(s.election.sk, t.enc_id, kEid), rcca_decrypt<TG>(s.election.sk, s.card.enc_id, kEid));
  // enc_ballot_code encrypts the printed components, two per pair.
  const auto printed = paper.code.pairs();
  ASSERT_EQ(t.enc_ballot_code.size(), 2 * printed.size());
  for (std::size_t j = 0; j < printed.size(); ++j) {
    EXPECT_EQ(eg_decrypt<TG>(s.election.sk, t.enc_ballot_code[2 * j]), printed[j].a);
    EXPECT_EQ(eg_decrypt<TG>(s.election.sk, t.enc_ballot_code[2 * j + 1]), printed[j].b);
  }
  EXPECT_FALSE(verify_scanner_tuple<TG>(t, s.election.pk, kEid, 2));
  EXPECT_FALSE(verify_scanner_tuple<TG>(t, s.election.pk, to_bytes("other"), 3));
}

TEST(Scanner, TupleMutationsRejected) {
  SeededRng rng(96);
  auto s = station(rng);
  auto paper = print_ballot<TG>(s.card, s.election.pk, kEid, rng);
  paper.vote = 1;
  const auto t = scan_ballot<TG>(paper, s.election.pk, kEid, 3, rng).tuple;
  const auto g = TG::generator();
  std::vector<std::function<void(ScannerTuple<TG>&)>> edits = {
      [&](auto& x) { x.enc_vote = eg_encrypt<TG>(s.election.pk, exp_encode<TG>(3), rng); },
      [&](auto& x) { x.enc_vote.b = x.enc_vote.b * g; },
      [&](auto& x) { x.enc_rc = eg_encrypt<TG>(s.election.pk, exp_encode<TG>(5), rng); },
      [&](auto& x) { x.enc_id = rcca_reencrypt<TG>(s.election.pk, x.enc_id, rng); },
      [&](auto& x) { x.enc_sig.c1[0].a = x.enc_sig.c1[0].a * g; },
      [&](auto& x) { x.enc_ballot_code[3].b = x.enc_ballot_code[3].b * g; },
      [&](auto& x) { std::swap(x.enc_ballot_code[0], x.enc_ballot_code[2]); },
  };
  for (std::size_t k = 0; k < edits.size(); ++k) {
    auto m = t;
    edits[k](m);
    EXPECT_FALSE(verify_scanner_tuple<TG>(m, s.election.pk, kEid, 3)) << "edit " << k;
  }
}

TEST(Scanner, UnfilledAndOutOfRangeBallots) {
  SeededRng rng(97);
  auto s = station(rng);
  auto paper = print_ballot<TG>(s.card, s.election.pk, kEid, rng);
  try {
    scan_ballot<TG>(paper, s.election.pk, kEid, 3, rng);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::UnfilledBallot);
  }
  paper.vote = 0;
  EXPECT_THROW(scan_ballot<TG>(paper, s.election.pk, kEid, 3, rng), Error);
  paper.vote = 4;
  EXPECT_THROW(scan_ballot<TG>(paper, s.election.pk, kEid, 3, rng), Error);
}

TEST(Scanner, ReceiptCodeDoesNotDependOnVote) {
  SeededRng rng(98);
  auto s = station(rng);
  auto paper = print_ballot<TG>(s.card, s.election.pk, kEid, rng);
  std::set<std::string> codes;
  for (std::uint32_t v = 1; v <= 3; ++v) {
    paper.vote = v;
    SeededRng scanner_rng(4242);
    codes.insert(scan_ballot<TG>(paper, s.election.pk, kEid, 3, scanner_rng).receipt.text());
  }
  EXPECT_EQ(codes.size(), 1u);
}

TEST(Scanner, PublishedTupleSharesNoElementWithThePaper) {
  // A photograph of the printed code cannot be matched against the board.
  SeededRng rng(99);
  auto s = station(rng);
  auto paper = print_ballot<TG>(s.card, s.election.pk, kEid, rng);
  paper.vote = 3;
  auto t = scan_ballot<TG>(paper, s.election.pk, kEid, 3, rng).tuple;
  std::set<Element<TG>> printed;
  for (const auto& p : paper.code.pairs()) {
    printed.insert(p.a);
    printed.insert(p.b);
  }
  for (const auto& p : t.published_pairs()) {
    EXPECT_FALSE(printed.contains(p.a));
    EXPECT_FALSE(printed.contains(p.b));
  }
  for (const auto& c : t.enc_ballot_code) {
    EXPECT_FALSE(printed.contains(c.a));
    EXPECT_FALSE(printed.contains(c.b));
  }
}

TEST(Scanner, P256TupleVerifies) {
  SeededRng rng(100);
  auto kp = keygen<P256Group>(rng);
  auto cred = make_credential<P256Group>("V0001", rng);
  auto paper = print_ballot<P256Group>(card_issue<P256Group>(cred, kp.pk, kEid, "2024-06-01|p1", rng), kp.pk, kEid, rng);
  paper.vote = 3;
  auto scan = scan_ballot<P256Group>(paper, kp.pk, kEid, 3, rng);
  EXPECT_TRUE(verify_scanner_tuple<P256Group>(scan.tuple, kp.pk, kEid, 3));
}

TEST(Tra, AssemblesAllTellerSharesAndNamesTheMissingOne) {
  SeededRng rng(101);
  auto election = keygen<TG>(rng);
  auto voter = keygen<TG>(rng);
  std::vector<SigningKeyPair<TG>> tellers;
  std::vector<Element<TG>> vks;
  for (int k = 0; k < 3; ++k) {
    tellers.push_back(signing_keygen<TG>(rng));
    vks.push_back(tellers.back().vk);
  }
  std::vector<AlphaShareRecord<TG>> records;
  auto r_sum = TG::scalar(0);
  for (std::uint32_t k = 1; k <= 3; ++k) {
    auto r = TG::random_scalar(rng);
    r_sum += r;
    records.push_back(contribute_alpha_factor<TG>(k, 6, election.pk, voter.pk, r, TG::random_scalar(rng), kEid,
                                                  tellers[k - 1], rng)
                          .kept);
  }
  // Records for other voters are ignored.
  records.push_back(contribute_alpha_factor<TG>(1, 7, election.pk, voter.pk, kEid, tellers[0], rng).kept);
  auto alpha = tra_notify<TG>(6, records, voter.pk, vks, kEid);
  EXPECT_EQ(alpha.voter, 6u);
  EXPECT_EQ(alpha.alpha, gpow<TG>(r_sum));

  auto missing = records;
  missing.erase(missing.begin() + 1);
  try {
    tra_notify<TG>(6, missing, voter.pk, vks, kEid);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::MissingShare);
    EXPECT_EQ(e.index(), 2u);
  }
  auto forged = records;
  forged[2].g_exp_share = forged[2].g_exp_share * TG::generator();
  try {
    tra_notify<TG>(6, forged, voter.pk, vks, kEid);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::ShareInvalid);
    EXPECT_EQ(e.index(), 3u);
  }
}

TEST(Tra, SuppressionIsSticky) {
  TrackerRetrievalAuthority tra;
  EXPECT_FALSE(tra.suppressed(4));
  tra.suppress(4);
  tra.suppress(4);
  EXPECT_TRUE(tra.suppressed(4));
  EXPECT_FALSE(tra.suppressed(5));
}
