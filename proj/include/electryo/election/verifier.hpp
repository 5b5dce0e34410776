#pragma once

// Universal verification of a complete transcript. Every check runs even
// when earlier ones fail, so a report names each broken property.

#include <sstream>

#include "electryo/election/records.hpp"

namespace electryo {

struct CheckResult {
  std::string name;
  std::vector<std::string> failures;
  bool ok() const { return failures.empty(); }

  auto tie() { return std::tie(name, failures); }
  auto tie() const { return std::tie(name, failures); }
};

struct VerifyReport {
  std::vector<CheckResult> checks;
  std::vector<std::string> warnings;

  auto tie() { return std::tie(checks, warnings); }
  auto tie() const { return std::tie(checks, warnings); }

  bool ok() const {
    return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.ok(); });
  }

  std::vector<std::string> failed_checks() const {
    std::vector<std::string> out;
    for (const auto& c : checks)
      if (!c.ok()) out.push_back(c.name);
    return out;
  }

  const CheckResult* find(std::string_view name) const {
    for (const auto& c : checks)
      if (c.name == name) return &c;
    return nullptr;
  }

  std::string render() const {
    std::ostringstream os;
    for (const auto& c : checks) {
      os << (c.ok() ? "PASS " : "FAIL ") << c.name << "\n";
      for (const auto& f : c.failures) os << "     - " << f << "\n";
    }
    for (const auto& w : warnings) os << "WARN " << w << "\n";
    os << (ok() ? "transcript verifies\n" : "transcript does NOT verify\n");
    return os.str();
  }
};

/// Results of the public decryptions, derived while verifying.
template <class G>
struct DecodedBallotRow {
  EligibilityStatus status = EligibilityStatus::InvalidCiphertext;
  std::string id;
  Bytes signature;
  std::optional<std::uint32_t> voter;
};

namespace detail {

/// Combine every teller's shares for each (row, pair) of a batch. Invalid
/// shares are reported; plaintexts come from any t valid ones.
template <class G>
std::vector<std::vector<std::optional<Element<G>>>> open_batch(
    const std::vector<std::vector<Ciphertext<G>>>& cts, const std::vector<DecryptionRecord<G>>& recs,
    const std::vector<Element<G>>& vks, std::uint32_t threshold, ByteView eid,
    std::vector<std::string>* share_failures, std::string_view what) {
  const auto ctx = decryption_context(eid);
  std::vector<std::vector<std::optional<Element<G>>>> out(cts.size());
  for (std::size_t r = 0; r < cts.size(); ++r) {
    out[r].resize(cts[r].size());
    for (std::size_t j = 0; j < cts[r].size(); ++j) {
      std::vector<DecryptShare<G>> shares;
      for (const auto& rec : recs) {
        if (r < rec.shares.size() && j < rec.shares[r].size()) {
          auto s = rec.shares[r][j];
          if (s.teller != rec.teller) {
            if (share_failures)
              share_failures->push_back(std::string(what) + " row " + std::to_string(r) +
                                        ": share labelled for another teller");
            continue;
          }
          shares.push_back(s);
        }
      }
      auto res = combine_lenient<G>(cts[r][j], shares, vks, threshold, ctx);
      if (share_failures)
        for (auto k : res.invalid_tellers)
          share_failures->push_back(std::string(what) + " row " + std::to_string(r) + " pair " +
                                    std::to_string(j) + ": teller " + std::to_string(k) +
                                    " share proof invalid");
      out[r][j] = res.plaintext;
    }
  }
  return out;
}

template <class G>
void check_decryption_shape(const std::vector<DecryptionRecord<G>>& recs, std::size_t rows,
                            std::size_t pairs, std::uint32_t tellers, std::string_view what,
                            std::vector<std::string>& failures) {
  std::set<std::uint32_t> seen;
  for (const auto& rec : recs) {
    if (rec.teller == 0 || rec.teller > tellers || !seen.insert(rec.teller).second)
      failures.push_back(std::string(what) + ": unexpected teller " + std::to_string(rec.teller));
    if (rec.shares.size() != rows) {
      failures.push_back(std::string(what) + ": teller " + std::to_string(rec.teller) + " covers " +
                         std::to_string(rec.shares.size()) + " of " + std::to_string(rows) + " rows");
      continue;
    }
    for (const auto& row : rec.shares)
      if (row.size() != pairs) {
        failures.push_back(std::string(what) + ": teller " + std::to_string(rec.teller) +
                           " row has the wrong number of shares");
        break;
      }
  }
}

}  // namespace detail

/// Recompute the eligibility classification of the stage-one output from
/// the published decryption shares.
template <class G>
std::vector<DecodedBallotRow<G>> decode_ballot_rows(const ParsedTranscript<G>& t,
                                                    std::vector<std::string>* share_failures = nullptr) {
  using L = BallotRowLayout<G>;
  std::vector<DecodedBallotRow<G>> out;
  if (!t.params || !t.roll) return out;
  const auto eid = t.election_id();
  const auto stage1 = t.ballot_output();
  std::vector<std::vector<Ciphertext<G>>> cts;
  for (const auto& row : stage1.rows)
    cts.emplace_back(row.begin() + L::kId, row.begin() + L::kCode);
  auto opened = detail::open_batch<G>(cts, t.idsig_decryption, t.verification_keys(),
                                      t.params->threshold, eid, share_failures, "id-sig");
  std::map<std::string, std::uint32_t> roll_index;
  for (std::uint32_t i = 0; i < t.roll->size(); ++i) roll_index[(*t.roll)[i].id] = i;

  std::map<std::string, int> id_count;
  for (auto& row : opened) {
    DecodedBallotRow<G> d;
    std::vector<Element<G>> els;
    bool complete = true;
    for (const auto& e : row) {
      if (!e) complete = false;
      else els.push_back(*e);
    }
    if (complete) {
      const auto half = L::kRccaPairs;
      std::vector<Element<G>> id_els(els.begin(), els.begin() + half);
      std::vector<Element<G>> sig_els(els.begin() + half, els.end());
      auto id_block = rcca_decode<G>(id_els, eid);
      auto sig_block = rcca_decode<G>(sig_els, eid);
      auto id = id_block ? unframe_payload(*id_block) : std::nullopt;
      auto sig = sig_block ? signature_from_payload<G>(*sig_block) : std::nullopt;
      if (id && sig) {
        d.id = to_string(*id);
        d.signature = *sig;
        auto it = roll_index.find(d.id);
        if (it == roll_index.end()) {
          d.status = EligibilityStatus::UnknownId;
        } else {
          d.voter = it->second;
          auto parsed = Signature<G>::from_compact(d.signature);
          const auto msg = id_signature_message(d.id, eid, t.params->signature_extra);
          d.status = parsed && verify_sig<G>((*t.roll)[it->second].vk, msg, *parsed)
                         ? EligibilityStatus::Eligible
                         : EligibilityStatus::BadSignature;
          ++id_count[d.id];
        }
      }
    }
    out.push_back(std::move(d));
  }
  for (auto& d : out)
    if (d.voter && id_count[d.id] > 1) d.status = EligibilityStatus::DuplicateId;
  return out;
}

/// Universal verifier. Check names:
///   chain, election-key, setup-trackers, setup-commitments, ballot-proofs,
///   mix-stage1, decryption-proofs, signatures, mix-stage2, tally-board,
///   tracker-uniqueness, conservation, pet-log, audit-log
template <class G>
VerifyReport universal_verify(const std::vector<BbEntry>& entries) {
  VerifyReport rep;
  auto add = [&](std::string name) -> std::vector<std::string>& {
    rep.checks.push_back({std::move(name), {}});
    return rep.checks.back().failures;
  };

  // chain ------------------------------------------------------------------
  auto& chain = add("chain");
  if (auto bad = find_chain_break(entries))
    chain.push_back("hash chain broken at entry " + std::to_string(*bad));
  {
    Phase main = Phase::Setup;
    bool side = false;
    for (std::size_t i = 0; i < entries.size(); ++i) {
      const auto p = entries[i].phase;
      if (is_side_log(p)) {
        if (main != Phase::TallyBoard)
          chain.push_back("entry " + std::to_string(i) + ": side log before tally board");
        side = true;
      } else if (side || p < main) {
        chain.push_back("entry " + std::to_string(i) + ": phase " + phase_name(p) + " out of order");
      } else {
        main = p;
      }
    }
  }
  const auto t = parse_transcript<G>(entries);
  for (const auto& p : t.problems) chain.push_back(p);
  if (!t.params) {
    chain.push_back("no election parameters");
    return rep;
  }
  const auto& params = *t.params;
  const auto eid = t.election_id();
  const auto n_tellers = params.tellers;
  const auto threshold = params.threshold;

  // election-key -----------------------------------------------------------
  auto& key = add("election-key");
  {
    std::set<std::uint32_t> dealers;
    for (const auto& k : t.teller_keys) {
      if (k.dealing.dealer == 0 || k.dealing.dealer > n_tellers || !dealers.insert(k.dealing.dealer).second)
        key.push_back("unexpected dealer " + std::to_string(k.dealing.dealer));
      if (k.dealing.commitments.size() != threshold)
        key.push_back("dealer " + std::to_string(k.dealing.dealer) + " commits to the wrong degree");
    }
    if (dealers.size() != n_tellers) key.push_back("not every teller posted key material");
    if (threshold == 0 || threshold > n_tellers) key.push_back("threshold out of range");
  }
  if (!key.empty()) return rep;
  const auto pk = t.election_pk();
  const auto vks = t.verification_keys();
  const auto sig_vks = t.teller_signing_keys();
  const std::size_t voters = t.roll ? t.roll->size() : 0;

  // setup-trackers ---------------------------------------------------------
  auto& trk = add("setup-trackers");
  if (!t.roll || !t.trackers || !t.prevote) {
    trk.push_back("roll, tracker list or pre-vote rows missing");
  } else {
    if (voters != params.voters) trk.push_back("roll size differs from the declared voter count");
    std::set<std::uint64_t> distinct(t.trackers->begin(), t.trackers->end());
    if (distinct.size() != t.trackers->size()) trk.push_back("tracker list has duplicates");
    if (t.trackers->size() < voters) trk.push_back("fewer trackers than voters");
    if (t.tracker_mix.size() != params.mix_servers)
      trk.push_back("tracker mix has " + std::to_string(t.tracker_mix.size()) + " stages");
    std::string why;
    if (auto bad = verify_cascade<G>(tracker_batch<G>(*t.trackers), t.tracker_mix, {pk},
                                     tracker_mix_context(eid), &why))
      trk.push_back("tracker mix stage " + std::to_string(bad) + ": " + why);
    const auto mixed = t.tracker_output();
    if (t.prevote->size() != voters) trk.push_back("pre-vote row count differs from roll");
    std::set<Ciphertext<G>> seen;
    for (std::size_t i = 0; i < t.prevote->size(); ++i) {
      const auto& row = (*t.prevote)[i];
      if (i < voters && (row.id != (*t.roll)[i].id || row.vk != (*t.roll)[i].vk || row.pk != (*t.roll)[i].pk))
        trk.push_back("pre-vote row " + std::to_string(i) + " does not match the roll");
      if (i >= mixed.rows.size() || row.enc_tracker != mixed.rows[i][0])
        trk.push_back("pre-vote row " + std::to_string(i) + " carries a tracker not output by the mix");
      if (!seen.insert(row.enc_tracker).second)
        trk.push_back("pre-vote row " + std::to_string(i) + " duplicates an encrypted tracker");
    }
  }

  // setup-commitments ------------------------------------------------------
  auto& com = add("setup-commitments");
  if (t.roll && t.prevote) {
    const auto mixed = t.tracker_output();
    std::map<std::uint32_t, const CommitmentFactorsRecord<G>*> by_teller;
    for (const auto& f : t.factors)
      if (!by_teller.emplace(f.teller, &f).second)
        com.push_back("teller " + std::to_string(f.teller) + " posted factors twice");
    std::vector<std::vector<Ciphertext<G>>> combined(voters);
    bool shape_ok = mixed.rows.size() >= voters;
    for (std::uint32_t k = 1; k <= n_tellers; ++k) {
      auto it = by_teller.find(k);
      if (it == by_teller.end() || it->second->factors.size() != voters) {
        com.push_back("teller " + std::to_string(k) + " factors missing or incomplete");
        shape_ok = false;
        continue;
      }
      for (std::uint32_t i = 0; i < voters; ++i) {
        const auto& f = it->second->factors[i];
        if (f.teller != k || f.voter != i ||
            !verify_commitment_factor<G>(f, pk, (*t.roll)[i].pk, eid))
          com.push_back("teller " + std::to_string(k) + " factor for voter " + std::to_string(i) +
                        " fails its proof");
      }
    }
    if (shape_ok) {
      for (std::uint32_t i = 0; i < voters; ++i) {
        std::vector<Ciphertext<G>> fs;
        for (std::uint32_t k = 1; k <= n_tellers; ++k) fs.push_back(by_teller[k]->factors[i].factor);
        combined[i] = {combine_commitment<G>(mixed.rows[i][0], fs)};
      }
      detail::check_decryption_shape<G>(t.commitment_decryption, voters, 1, n_tellers,
                                        "commitment decryption", com);
      auto opened = detail::open_batch<G>(combined, t.commitment_decryption, vks, threshold, eid,
                                          &com, "commitment decryption");
      for (std::uint32_t i = 0; i < voters && i < t.prevote->size(); ++i) {
        if (!opened[i][0])
          com.push_back("commitment for voter " + std::to_string(i) + " cannot be opened");
        else if (*opened[i][0] != (*t.prevote)[i].commitment)
          com.push_back("commitment C_" + std::to_string(i) + " differs from the decrypted value");
      }
    }
  }

  // ballot-proofs ----------------------------------------------------------
  auto& bp = add("ballot-proofs");
  const auto excluded = t.excluded();
  if (t.screening)
    for (const auto& e : *t.screening)
      if (e.cast_index >= t.cast.size()) bp.push_back("screening names a missing ballot");
  if (t.screening && excluded.size() != t.screening->size())
    bp.push_back("screening lists a ballot twice");
  for (std::uint32_t i = 0; i < t.cast.size(); ++i) {
    const bool valid = verify_scanner_tuple<G>(t.cast[i], pk, eid, params.candidates.size());
    if (!valid && !excluded.contains(i))
      bp.push_back("ballot " + std::to_string(i) + " (entry " + std::to_string(t.cast_entries[i]) +
                   ") has invalid proofs but was mixed");
    if (valid && excluded.contains(i))
      bp.push_back("ballot " + std::to_string(i) + " was excluded despite valid proofs");
  }

  // mix-stage1 -------------------------------------------------------------
  auto& m1 = add("mix-stage1");
  const auto stage1_in = t.ballot_input();
  if (!t.cast.empty() && !t.screening) m1.push_back("ballots were mixed without a screening record");
  if (stage1_in.rows.size() >= 2) {
    if (t.ballot_mix.size() != params.mix_servers)
      m1.push_back("ballot mix has " + std::to_string(t.ballot_mix.size()) + " stages");
    std::string why;
    if (auto bad = verify_cascade<G>(stage1_in, t.ballot_mix,
                                     std::vector<Element<G>>(stage1_in.slots.size(), pk),
                                     ballot_mix_context(eid), &why))
      m1.push_back("stage " + std::to_string(bad) + ": " + why);
  } else {
    if (!t.ballot_mix.empty()) m1.push_back("mix stages present for a batch below two rows");
    if (!stage1_in.rows.empty())
      rep.warnings.push_back("fewer than two ballots: stage-one mix skipped");
  }
  const auto stage1 = t.ballot_output();

  // decryption-proofs ------------------------------------------------------
  auto& dp = add("decryption-proofs");
  detail::check_decryption_shape<G>(t.idsig_decryption, stage1.rows.size(),
                                    2 * BallotRowLayout<G>::kRccaPairs, n_tellers, "id-sig", dp);
  const auto decoded = decode_ballot_rows<G>(t, &dp);
  const auto stage2 = t.tracker_vote_output();
  detail::check_decryption_shape<G>(t.tally_decryption, stage2.rows.size(), 2, n_tellers, "tally", dp);
  const auto tally_open = detail::open_batch<G>(stage2.rows, t.tally_decryption, vks, threshold, eid,
                                                &dp, "tally");

  // signatures -------------------------------------------------------------
  auto& sg = add("signatures");
  if (!stage1.rows.empty() && !t.eligibility) {
    sg.push_back("no eligibility record");
  } else if (t.eligibility) {
    const auto& el = *t.eligibility;
    if (el.size() == decoded.size()) {
      for (std::size_t r = 0; r < el.size(); ++r) {
        const auto& d = decoded[r];
        const auto& e = el[r];
        if (e.mixed_row != r) sg.push_back("eligibility row " + std::to_string(r) + " out of order");
        if (e.status != d.status)
          sg.push_back("row " + std::to_string(r) + " published as " + eligibility_name(e.status) +
                       " but recomputes as " + eligibility_name(d.status));
        else if (e.id != d.id || e.voter != d.voter || e.signature != d.signature)
          sg.push_back("row " + std::to_string(r) + " published id or signature differs");
      }
    }
  }

  // mix-stage2 -------------------------------------------------------------
  auto& m2 = add("mix-stage2");
  const auto stage2_in = t.tracker_vote_input();
  if (stage2_in.rows.size() >= 2) {
    if (t.tracker_vote_mix.size() != params.mix_servers)
      m2.push_back("tracker/vote mix has " + std::to_string(t.tracker_vote_mix.size()) + " stages");
    std::string why;
    if (auto bad = verify_cascade<G>(stage2_in, t.tracker_vote_mix, {pk, pk},
                                     tracker_vote_mix_context(eid), &why))
      m2.push_back("stage " + std::to_string(bad) + ": " + why);
  } else {
    if (!t.tracker_vote_mix.empty()) m2.push_back("mix stages present for a batch below two rows");
    if (!stage2_in.rows.empty())
      rep.warnings.push_back("fewer than two eligible ballots: stage-two mix skipped");
  }

  // tally-board ------------------------------------------------------------
  auto& tb = add("tally-board");
  const std::uint64_t max_tracker = t.trackers && !t.trackers->empty()
                                        ? *std::max_element(t.trackers->begin(), t.trackers->end())
                                        : 0;
  if (!t.board) {
    if (t.eligibility) tb.push_back("no tally board");
  } else if (t.board->size() == stage2.rows.size()) {
    for (std::size_t r = 0; r < stage2.rows.size(); ++r) {
      const auto& row = (*t.board)[r];
      if (!tally_open[r][0] || !tally_open[r][1]) {
        tb.push_back("row " + std::to_string(r) + " cannot be decrypted");
        continue;
      }
      try {
        const auto tracker = exp_decode<G>(*tally_open[r][0], max_tracker);
        const auto vote = exp_decode<G>(*tally_open[r][1], params.candidates.size());
        if (tracker != row.tracker || vote != row.vote)
          tb.push_back("row " + std::to_string(r) + " differs from its decryption");
      } catch (const Error&) {
        tb.push_back("row " + std::to_string(r) + " decrypts outside the tracker or vote range");
      }
    }
  }

  // tracker-uniqueness -----------------------------------------------------
  auto& tu = add("tracker-uniqueness");
  if (t.board && t.trackers) {
    std::set<std::uint64_t> allowed(t.trackers->begin(), t.trackers->end()), seen;
    for (const auto& row : *t.board) {
      if (!allowed.contains(row.tracker)) tu.push_back("tracker " + std::to_string(row.tracker) + " was never issued");
      if (!seen.insert(row.tracker).second) tu.push_back("tracker " + std::to_string(row.tracker) + " repeated");
    }
  }

  // conservation -----------------------------------------------------------
  auto& cons = add("conservation");
  if (t.eligibility) {
    if (t.cast.size() - std::min(excluded.size(), t.cast.size()) != t.eligibility->size())
      cons.push_back(std::to_string(t.cast.size()) + " cast, " + std::to_string(excluded.size()) +
                     " excluded, but " + std::to_string(t.eligibility->size()) + " rows classified");
  }
  if (t.board && t.board->size() != stage2.rows.size())
    cons.push_back(std::to_string(stage2.rows.size()) + " mixed tracker/vote rows but " +
                   std::to_string(t.board->size()) + " tally rows");

  // pet-log ----------------------------------------------------------------
  auto& pl = add("pet-log");
  for (std::size_t i = 0; i < t.pets.size(); ++i) {
    const auto& p = t.pets[i];
    if (p.mixed_row >= stage1.rows.size() ||
        p.pet.left != stage1.rows[p.mixed_row][BallotRowLayout<G>::kRc])
      pl.push_back("PET " + std::to_string(i) + " does not test a published receipt code");
    else if (!verify_pet_record<G>(p.pet, vks, threshold, pet_context(eid)))
      pl.push_back("PET " + std::to_string(i) + " fails verification");
  }

  // audit-log --------------------------------------------------------------
  auto& al = add("audit-log");
  for (std::size_t i = 0; i < t.audits.size(); ++i) {
    const auto& a = t.audits[i];
    std::set<std::uint32_t> signers;
    const auto msg = a.signed_message(eid);
    for (const auto& s : a.signatures)
      if (s.teller >= 1 && s.teller <= sig_vks.size() && verify_sig<G>(sig_vks[s.teller - 1], msg, s.signature))
        signers.insert(s.teller);
    if (signers.size() < threshold)
      al.push_back("audit record " + std::to_string(i) + " lacks a quorum of teller signatures");
  }
  return rep;
}

/// Voters who did not vote can confirm their id never reached the count.
template <class G>
bool id_absent_from_ballots(const std::vector<BbEntry>& entries, std::string_view id) {
  const auto t = parse_transcript<G>(entries);
  for (const auto& d : decode_ballot_rows<G>(t))
    if (d.id == id) return false;
  return true;
}

}  // namespace electryo
