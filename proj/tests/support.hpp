#pragma once

// Shared election builders and the tamper fixture suite.

#include <functional>

#include "electryo/electryo.hpp"

namespace electryo::testing {

inline ElectionConfig desk_config(std::uint32_t voters = 25, std::uint64_t seed = 20240601) {
  ElectionConfig cfg;
  cfg.label = "desk-election";
  cfg.candidates = {"Alder", "Birch", "Cedar"};
  cfg.voters = voters;
  cfg.tellers = 3;
  cfg.threshold = 2;
  cfg.mix_servers = 3;
  cfg.seed = seed;
  return cfg;
}

inline std::uint32_t desk_vote(std::uint32_t voter) { return voter % 3 + 1; }

/// Run an election through the tally with voters [0, casting) voting
/// desk_vote(i); the rest abstain.
template <class G>
Election<G> run_election(const ElectionConfig& cfg, std::uint32_t casting, const Faults& faults = {}) {
  Election<G> e(cfg, faults);
  e.setup();
  for (std::uint32_t i = 0; i < casting; ++i) e.cast(i, desk_vote(i));
  e.close_voting();
  e.mix();
  e.tally();
  return e;
}

struct TamperFixture {
  std::string name;
  std::string target;  // the single verifier check expected to fail
  std::vector<BbEntry> entries;
};

/// Index of the first entry holding a record of `kind`.
inline std::size_t find_record(const std::vector<BbEntry>& entries, RecordKind kind) {
  for (std::size_t i = 0; i < entries.size(); ++i)
    if (!entries[i].payload.empty() && payload_kind(entries[i].payload) == kind) return i;
  throw Error(Errc::Malformed, std::string("no record of kind ") + record_name(kind));
}

template <class T>
void edit_record(std::vector<BbEntry>& entries, RecordKind kind, const std::function<void(T&)>& f) {
  auto& e = entries[find_record(entries, kind)];
  auto rec = payload_record<T>(e.payload);
  f(rec);
  e.payload = make_payload(kind, rec);
}

/// The fixture election: 25 voters of whom the last two abstain.
inline constexpr std::uint32_t kFixtureCasting = 23;
inline constexpr std::uint32_t kFixtureAbstainer = 24;

/// Eight mutations of the honest fixture election, each aimed at exactly one
/// verifier check. Misbehaviour that has to happen while the election runs
/// (a scanner swapping a ciphertext, a mix server dropping a row, a
/// pipeline accepting a forged signature) is produced by re-running the
/// seeded election with that fault; the rest are edits of the honest
/// transcript, re-chained so only the targeted check notices.
template <class G>
std::vector<TamperFixture> make_tamper_fixtures(const ElectionConfig& cfg) {
  std::vector<TamperFixture> out;
  const auto honest = run_election<G>(cfg, kFixtureCasting).transcript();

  {
    Faults f;
    f.swap_vote_after_proof = 3;
    f.skip_screening = true;
    out.push_back({"vote ciphertext swap", "ballot-proofs", run_election<G>(cfg, kFixtureCasting, f).transcript()});
  }
  {
    Faults f;
    f.drop_stage2_row_at = 2;
    out.push_back({"mix row drop", "mix-stage2", run_election<G>(cfg, kFixtureCasting, f).transcript()});
  }
  {
    auto t = honest;
    edit_record<std::vector<TallyRow>>(t, RecordKind::TallyBoard, [](auto& board) {
      board[0].vote = board[0].vote % 3 + 1;
    });
    rechain(t);
    out.push_back({"tally row edit", "tally-board", std::move(t)});
  }
  {
    Faults f;
    f.forged_ballot_for = kFixtureAbstainer;
    f.accept_forged_signatures = true;
    out.push_back({"signature forge", "signatures", run_election<G>(cfg, kFixtureCasting, f).transcript()});
  }
  {
    auto t = honest;
    edit_record<std::vector<VoterRow<G>>>(t, RecordKind::PrevoteRows, [](auto& rows) {
      rows[kFixtureAbstainer].enc_tracker = rows[0].enc_tracker;
    });
    rechain(t);
    out.push_back({"tracker row duplicate", "setup-trackers", std::move(t)});
  }
  {
    auto t = honest;
    t[find_record(t, RecordKind::CastBallot)].author = "scanner-9";
    out.push_back({"chain edit", "chain", std::move(t)});
  }
  {
    auto t = honest;
    edit_record<DecryptionRecord<G>>(t, RecordKind::TallyDecryption, [](auto& rec) {
      rec.shares[0][0].proof.response = rec.shares[0][0].proof.response + G::scalar(1);
    });
    rechain(t);
    out.push_back({"decryption proof edit", "decryption-proofs", std::move(t)});
  }
  {
    auto t = honest;
    edit_record<std::vector<VoterRow<G>>>(t, RecordKind::PrevoteRows, [](auto& rows) {
      rows[0].commitment = rows[0].commitment * G::generator();
    });
    rechain(t);
    out.push_back({"commitment edit", "setup-commitments", std::move(t)});
  }
  return out;
}

}  // namespace electryo::testing
