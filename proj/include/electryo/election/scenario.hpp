#pragma once

// Scripted elections: per-voter actions, the notification pause, tracker
// checks, coercion evasion, optional audits and disputes.

#include "electryo/election/audit.hpp"

namespace electryo {

enum class VoterActionKind : std::uint8_t { Abstain = 0, Vote, CoercedVote };

struct VoterAction {
  VoterActionKind kind = VoterActionKind::Abstain;
  std::uint32_t candidate = 0;          // the real vote
  std::uint32_t coercer_candidate = 0;  // what the coercer demands (CoercedVote only)
  bool check = true;                    // retrieve the tracker and look at the board
};

struct Script {
  std::vector<VoterAction> voters;  // indexed by voter; missing entries abstain
  std::optional<std::uint32_t> audit_sample;
  std::vector<DisputeCase> disputes;
};

struct VoterOutcome {
  std::uint32_t voter = 0;
  VoterActionKind action = VoterActionKind::Abstain;
  std::optional<std::string> receipt;
  std::optional<std::uint64_t> tracker;       // what the voter's device displays
  std::optional<std::uint32_t> board_vote;    // board entry under that tracker
  std::optional<std::uint64_t> real_tracker;  // coerced voters: the genuine one
  std::optional<std::uint32_t> real_board_vote;
};

struct ScenarioReport {
  std::vector<BbEntry> transcript;
  VerifyReport verification;
  std::vector<VoterOutcome> voters;
  std::vector<std::uint32_t> notification_order;  // kept off the board
  std::optional<std::pair<std::uint32_t, std::uint32_t>> audit;  // (matches, mismatches)
  std::vector<DisputeOutcome> disputes;
  std::vector<std::string> failures;

  bool ok() const { return failures.empty() && verification.ok(); }
};

/// Tally multiset per candidate (index 0 unused).
inline std::vector<std::uint32_t> tally_counts(const std::vector<TallyRow>& board, std::size_t candidates) {
  std::vector<std::uint32_t> counts(candidates + 1, 0);
  for (const auto& r : board)
    if (r.vote >= 1 && r.vote <= candidates) ++counts[r.vote];
  return counts;
}

inline std::optional<std::uint32_t> board_vote(const std::vector<TallyRow>& board, std::uint64_t tracker) {
  for (const auto& r : board)
    if (r.tracker == tracker) return r.vote;
  return std::nullopt;
}

template <class G>
ScenarioReport run_scenario(const ElectionConfig& cfg, const Script& script, const Faults& faults = {}) {
  ScenarioReport rep;
  auto fail = [&](std::string step, std::optional<std::uint32_t> voter, const std::string& what) {
    rep.failures.push_back("step " + step + (voter ? " voter " + voter_id(*voter) : "") + ": " + what);
  };
  if (script.voters.size() > cfg.voters) throw Error(Errc::InvalidConfig, "script names more voters than the roll");

  Election<G> e(cfg, faults);
  e.setup();
  auto action = [&](std::uint32_t i) {
    return i < script.voters.size() ? script.voters[i] : VoterAction{};
  };

  for (std::uint32_t i = 0; i < cfg.voters; ++i) {
    const auto a = action(i);
    VoterOutcome o{i, a.kind, {}, {}, {}, {}, {}};
    if (a.kind != VoterActionKind::Abstain) o.receipt = e.cast(i, a.candidate).text();
    rep.voters.push_back(o);
  }
  e.close_voting();
  e.mix();
  e.tally();

  // The pause: nothing is released before the tally board is up.
  const auto board = *e.parsed().board;
  std::vector<std::uint32_t> cast;
  for (std::uint32_t i = 0; i < cfg.voters; ++i)
    if (action(i).kind != VoterActionKind::Abstain) cast.push_back(action(i).candidate);
  {
    auto expected = std::vector<std::uint32_t>(cfg.candidates.size() + 1, 0);
    for (auto c : cast) ++expected[c];
    if (tally_counts(board, cfg.candidates.size()) != expected)
      fail("tally", std::nullopt, "board vote multiset differs from the cast votes");
  }

  // Coerced voters ask for suppression before any α goes out.
  std::map<std::uint32_t, CoercionOutcome<G>> fakes;
  for (std::uint32_t i = 0; i < cfg.voters; ++i)
    if (action(i).kind == VoterActionKind::CoercedVote) fakes.emplace(i, e.coerce(i, action(i).coercer_candidate));

  auto order_rng = e.rng_for("notification-order");
  for (std::uint32_t i = 0; i < cfg.voters; ++i) rep.notification_order.push_back(i);
  for (std::size_t i = rep.notification_order.size(); i > 1; --i)
    std::swap(rep.notification_order[i - 1], rep.notification_order[order_rng.uniform(i)]);

  for (auto i : rep.notification_order) {
    const auto a = action(i);
    auto& o = rep.voters[i];
    if (a.kind == VoterActionKind::Abstain) {
      if (!id_absent_from_ballots<G>(e.transcript(), e.credential(i).id))
        fail("abstain-check", i, "abstainer's id appears among decrypted ballot ids");
      continue;
    }
    auto n = e.notify(i, *o.receipt);
    if (!n.gate_passed) {
      fail("notify", i, "receipt code rejected by the retrieval authority");
      continue;
    }
    if (a.kind == VoterActionKind::CoercedVote) {
      if (!n.suppressed) fail("notify", i, "suppression not honoured");
      const auto& f = fakes.at(i);
      const auto& sk = e.credential(i).selene.sk;
      o.tracker = retrieve_tracker<G>(sk, f.fake.alpha, e.commitment(i), cfg.voters);
      o.board_vote = board_vote(board, *o.tracker);
      if (o.tracker != f.fake_tracker || o.board_vote != a.coercer_candidate)
        fail("coerce", i, "fake tracker does not show the coercer's candidate");
      o.real_tracker = retrieve_tracker<G>(sk, e.tra_alpha(i).alpha, e.commitment(i), cfg.voters);
      o.real_board_vote = board_vote(board, *o.real_tracker);
      if (o.real_board_vote != a.candidate) fail("coerce", i, "real vote missing under the real tracker");
      continue;
    }
    if (!a.check) continue;
    o.tracker = n.tracker;
    o.board_vote = n.tracker ? board_vote(board, *n.tracker) : std::nullopt;
    if (o.board_vote != a.candidate) fail("check", i, "board shows a different vote under the voter's tracker");
  }

  if (script.audit_sample) {
    auto rng = e.rng_for("audit");
    auto rec = rla_bb_to_paper(e, *script.audit_sample, rng);
    rep.audit = {rec.matches, rec.mismatches};
  }
  for (std::size_t d = 0; d < script.disputes.size(); ++d) {
    auto rng = e.rng_for("dispute/" + std::to_string(d));
    rep.disputes.push_back(resolve_dispute(e, script.disputes[d], rng));
  }

  rep.transcript = e.transcript();
  rep.verification = universal_verify<G>(rep.transcript);
  return rep;
}

}  // namespace electryo
