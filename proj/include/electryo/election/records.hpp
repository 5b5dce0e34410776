#pragma once

// Typed bulletin-board records and the public reading of a transcript.

#include "electryo/bulletin_board.hpp"
#include "electryo/polling.hpp"
#include "electryo/zkp/pet.hpp"

namespace electryo {

enum class RecordKind : std::uint8_t {
  ElectionParams = 1,
  TellerKeys,
  VoterRoll,
  TrackerList,
  TrackerMix,
  CommitmentFactors,
  CommitmentDecryption,
  PrevoteRows,
  CastBallot,
  BallotScreening,
  BallotMix,
  IdSigDecryption,
  Eligibility,
  TrackerVoteMix,
  TallyDecryption,
  TallyBoard,
  Pet,
  Audit,
};

inline const char* record_name(RecordKind k) {
  switch (k) {
    case RecordKind::ElectionParams: return "election-params";
    case RecordKind::TellerKeys: return "teller-keys";
    case RecordKind::VoterRoll: return "voter-roll";
    case RecordKind::TrackerList: return "tracker-list";
    case RecordKind::TrackerMix: return "tracker-mix";
    case RecordKind::CommitmentFactors: return "commitment-factors";
    case RecordKind::CommitmentDecryption: return "commitment-decryption";
    case RecordKind::PrevoteRows: return "prevote-rows";
    case RecordKind::CastBallot: return "cast-ballot";
    case RecordKind::BallotScreening: return "ballot-screening";
    case RecordKind::BallotMix: return "ballot-mix";
    case RecordKind::IdSigDecryption: return "id-sig-decryption";
    case RecordKind::Eligibility: return "eligibility";
    case RecordKind::TrackerVoteMix: return "tracker-vote-mix";
    case RecordKind::TallyDecryption: return "tally-decryption";
    case RecordKind::TallyBoard: return "tally-board";
    case RecordKind::Pet: return "pet";
    case RecordKind::Audit: return "audit";
  }
  return "?";
}

inline Phase record_phase(RecordKind k) {
  switch (k) {
    case RecordKind::ElectionParams:
    case RecordKind::TellerKeys:
    case RecordKind::VoterRoll:
    case RecordKind::TrackerList:
    case RecordKind::TrackerMix: return Phase::Setup;
    case RecordKind::CommitmentFactors:
    case RecordKind::CommitmentDecryption:
    case RecordKind::PrevoteRows: return Phase::PreVote;
    case RecordKind::CastBallot: return Phase::CastBallots;
    case RecordKind::BallotScreening:
    case RecordKind::BallotMix:
    case RecordKind::IdSigDecryption: return Phase::MixIdSig;
    case RecordKind::Eligibility: return Phase::EligibleBallots;
    case RecordKind::TrackerVoteMix:
    case RecordKind::TallyDecryption: return Phase::MixTrackerVote;
    case RecordKind::TallyBoard: return Phase::TallyBoard;
    case RecordKind::Pet: return Phase::PetLog;
    case RecordKind::Audit: return Phase::AuditLog;
  }
  return Phase::Setup;
}

template <class T>
Bytes make_payload(RecordKind kind, const T& record) {
  Writer w;
  w.u8(static_cast<std::uint8_t>(kind));
  put(w, record);
  return std::move(w).take();
}

inline RecordKind payload_kind(ByteView payload) {
  if (payload.empty() || payload[0] < 1 || payload[0] > static_cast<std::uint8_t>(RecordKind::Audit))
    throw Error(Errc::Malformed, "unknown record kind");
  return static_cast<RecordKind>(payload[0]);
}

template <class T>
T payload_record(ByteView payload) {
  return decode<T>(payload.subspan(1));
}

// ---------------------------------------------------------------------------
// Records

struct ElectionParams {
  Bytes election_id;
  std::string group;
  std::vector<std::string> candidates;
  std::uint32_t voters = 0;
  std::uint32_t tellers = 0;
  std::uint32_t threshold = 0;
  std::uint32_t mix_servers = 0;
  std::string signature_extra;  // empty unless date/printer signing is enabled

  auto tie() {
    return std::tie(election_id, group, candidates, voters, tellers, threshold, mix_servers,
                    signature_extra);
  }
  auto tie() const {
    return std::tie(election_id, group, candidates, voters, tellers, threshold, mix_servers,
                    signature_extra);
  }
};

template <class G>
struct TellerKeysRecord {
  DealingCommitments<G> dealing;
  Element<G> signing_vk;

  auto tie() { return std::tie(dealing, signing_vk); }
  auto tie() const { return std::tie(dealing, signing_vk); }
};

template <class G>
struct RollEntry {
  std::string id;
  Element<G> vk;
  Element<G> pk;

  bool operator==(const RollEntry&) const = default;
  auto tie() { return std::tie(id, vk, pk); }
  auto tie() const { return std::tie(id, vk, pk); }
};

template <class G>
struct CommitmentFactorsRecord {
  std::uint32_t teller = 0;
  std::vector<CommitmentFactor<G>> factors;  // one per voter, in roll order

  auto tie() { return std::tie(teller, factors); }
  auto tie() const { return std::tie(teller, factors); }
};

/// One teller's decryption shares for a batch: [row][pair].
template <class G>
struct DecryptionRecord {
  std::uint32_t teller = 0;
  std::vector<std::vector<DecryptShare<G>>> shares;

  auto tie() { return std::tie(teller, shares); }
  auto tie() const { return std::tie(teller, shares); }
};

template <class G>
struct VoterRow {
  std::string id;
  Element<G> vk;
  Element<G> pk;
  Ciphertext<G> enc_tracker;
  Element<G> commitment;

  bool operator==(const VoterRow&) const = default;
  auto tie() { return std::tie(id, vk, pk, enc_tracker, commitment); }
  auto tie() const { return std::tie(id, vk, pk, enc_tracker, commitment); }
};

struct Exclusion {
  std::uint32_t cast_index = 0;
  std::string reason;

  bool operator==(const Exclusion&) const = default;
  auto tie() { return std::tie(cast_index, reason); }
  auto tie() const { return std::tie(cast_index, reason); }
};

enum class EligibilityStatus : std::uint8_t {
  Eligible = 0,
  BadSignature,
  DuplicateId,
  UnknownId,
  InvalidCiphertext,
};

inline const char* eligibility_name(EligibilityStatus s) {
  switch (s) {
    case EligibilityStatus::Eligible: return "eligible";
    case EligibilityStatus::BadSignature: return "bad-signature";
    case EligibilityStatus::DuplicateId: return "duplicate-id";
    case EligibilityStatus::UnknownId: return "unknown-id";
    case EligibilityStatus::InvalidCiphertext: return "invalid-ciphertext";
  }
  return "?";
}

struct EligibilityRow {
  std::uint32_t mixed_row = 0;
  EligibilityStatus status = EligibilityStatus::Eligible;
  std::string id;
  Bytes signature;
  std::optional<std::uint32_t> voter;

  bool operator==(const EligibilityRow&) const = default;
  auto tie() { return std::tie(mixed_row, status, id, signature, voter); }
  auto tie() const { return std::tie(mixed_row, status, id, signature, voter); }
};

struct TallyRow {
  std::uint64_t tracker = 0;
  std::uint32_t vote = 0;  // 1-based candidate number

  bool operator==(const TallyRow&) const = default;
  auto tie() { return std::tie(tracker, vote); }
  auto tie() const { return std::tie(tracker, vote); }
};

template <class G>
struct PetLogRecord {
  std::uint32_t mixed_row = 0;  // stage-one output row holding the receipt code
  PetRecord<G> pet;

  auto tie() { return std::tie(mixed_row, pet); }
  auto tie() const { return std::tie(mixed_row, pet); }
};

enum class AuditKind : std::uint8_t { BbToPaper = 0, PaperToBb, Dispute };

inline const char* audit_name(AuditKind k) {
  switch (k) {
    case AuditKind::BbToPaper: return "bb-to-paper";
    case AuditKind::PaperToBb: return "paper-to-bb";
    case AuditKind::Dispute: return "dispute";
  }
  return "?";
}

template <class G>
struct TellerSignature {
  std::uint32_t teller = 0;
  Signature<G> signature;

  auto tie() { return std::tie(teller, signature); }
  auto tie() const { return std::tie(teller, signature); }
};

/// Public trace of an in-camera audit step: what was examined and the
/// outcome, plus a digest of the (unpublished) decryption evidence signed
/// by the tellers who took part.
template <class G>
struct AuditRecord {
  AuditKind kind = AuditKind::BbToPaper;
  std::vector<std::uint32_t> sampled;
  std::uint32_t matches = 0;
  std::uint32_t mismatches = 0;
  std::string notes;
  Digest evidence{};
  std::vector<TellerSignature<G>> signatures;

  Bytes signed_message(ByteView election_id) const {
    Writer w;
    w.string("electryo/audit");
    w.bytes(election_id);
    w.u8(static_cast<std::uint8_t>(kind));
    put(w, sampled);
    w.integer(matches);
    w.integer(mismatches);
    w.string(notes);
    w.raw(evidence);
    return std::move(w).take();
  }

  auto tie() { return std::tie(kind, sampled, matches, mismatches, notes, evidence, signatures); }
  auto tie() const {
    return std::tie(kind, sampled, matches, mismatches, notes, evidence, signatures);
  }
};

// ---------------------------------------------------------------------------
// Proof contexts shared by the pipeline and the verifier

inline FsContext mix_context(ByteView election_id, std::string label) {
  return {Bytes(election_id.begin(), election_id.end()), std::move(label), {}};
}
inline FsContext tracker_mix_context(ByteView eid) { return mix_context(eid, "tracker-mix"); }
inline FsContext ballot_mix_context(ByteView eid) { return mix_context(eid, "ballot-mix"); }
inline FsContext tracker_vote_mix_context(ByteView eid) { return mix_context(eid, "tracker-vote-mix"); }
inline FsContext pet_context(ByteView eid) { return mix_context(eid, "pet"); }
inline FsContext audit_context(ByteView eid) { return mix_context(eid, "audit"); }

// Layout of a stage-one row: id, signature, encrypted ballot code, vote, RC.
template <class G>
struct BallotRowLayout {
  static constexpr std::size_t kRccaPairs = 2 * rcca_layout<G>().elements_per_half;
  static constexpr std::size_t kId = 0;
  static constexpr std::size_t kSig = kRccaPairs;
  static constexpr std::size_t kCode = 2 * kRccaPairs;
  static constexpr std::size_t kCodeLen = 4 * kRccaPairs;
  static constexpr std::size_t kVote = kCode + kCodeLen;
  static constexpr std::size_t kRc = kVote + 1;
  static constexpr std::size_t kWidth = kRc + 1;

  static std::vector<SlotSpec> slots() {
    return {rcca_slot<G>(), rcca_slot<G>(),
            {SlotKind::Plain, static_cast<std::uint32_t>(kCodeLen)},
            {SlotKind::Plain, 1},
            {SlotKind::Plain, 1}};
  }
};

template <class G>
MixRow<G> ballot_row(const ScannerTuple<G>& t) {
  MixRow<G> row;
  append_rcca<G>(row, t.enc_id);
  append_rcca<G>(row, t.enc_sig);
  row.insert(row.end(), t.enc_ballot_code.begin(), t.enc_ballot_code.end());
  row.push_back(t.enc_vote);
  row.push_back(t.enc_rc);
  return row;
}

template <class G>
MixBatch<G> ballot_batch(const std::vector<ScannerTuple<G>>& cast, const std::set<std::uint32_t>& excluded) {
  MixBatch<G> b;
  b.slots = BallotRowLayout<G>::slots();
  for (std::uint32_t i = 0; i < cast.size(); ++i)
    if (!excluded.contains(i)) b.rows.push_back(ballot_row<G>(cast[i]));
  return b;
}

/// Stage-two rows: (encrypted tracker, encrypted vote).
template <class G>
MixBatch<G> tracker_vote_batch() {
  MixBatch<G> b;
  b.slots = {{SlotKind::Plain, 1}, {SlotKind::Plain, 1}};
  return b;
}

// ---------------------------------------------------------------------------
// Public reading of a transcript

template <class G>
struct ParsedTranscript {
  std::optional<ElectionParams> params;
  std::vector<TellerKeysRecord<G>> teller_keys;
  std::optional<std::vector<RollEntry<G>>> roll;
  std::optional<std::vector<std::uint64_t>> trackers;
  std::vector<MixStage<G>> tracker_mix;
  std::vector<CommitmentFactorsRecord<G>> factors;
  std::vector<DecryptionRecord<G>> commitment_decryption;
  std::optional<std::vector<VoterRow<G>>> prevote;
  std::vector<ScannerTuple<G>> cast;
  std::vector<std::size_t> cast_entries;
  std::optional<std::vector<Exclusion>> screening;
  std::vector<MixStage<G>> ballot_mix;
  std::vector<DecryptionRecord<G>> idsig_decryption;
  std::optional<std::vector<EligibilityRow>> eligibility;
  std::vector<MixStage<G>> tracker_vote_mix;
  std::vector<DecryptionRecord<G>> tally_decryption;
  std::optional<std::vector<TallyRow>> board;
  std::vector<PetLogRecord<G>> pets;
  std::vector<AuditRecord<G>> audits;
  std::vector<std::size_t> audit_entries;
  std::vector<std::string> problems;  // malformed or misplaced records

  Bytes election_id() const { return params ? params->election_id : Bytes{}; }

  std::vector<DealingCommitments<G>> dealings() const {
    std::vector<DealingCommitments<G>> out;
    for (const auto& k : teller_keys) out.push_back(k.dealing);
    return out;
  }

  Element<G> election_pk() const { return joint_public_key<G>(dealings()); }

  std::vector<Element<G>> verification_keys() const {
    return electryo::verification_keys<G>(dealings(), params ? params->tellers : 0);
  }

  std::vector<Element<G>> teller_signing_keys() const {
    std::vector<Element<G>> out(teller_keys.size());
    for (const auto& k : teller_keys)
      if (k.dealing.dealer >= 1 && k.dealing.dealer <= out.size()) out[k.dealing.dealer - 1] = k.signing_vk;
    return out;
  }

  std::set<std::uint32_t> excluded() const {
    std::set<std::uint32_t> out;
    if (screening)
      for (const auto& e : *screening) out.insert(e.cast_index);
    return out;
  }

  /// Input to the first mix stage of each cascade.
  MixBatch<G> ballot_input() const { return ballot_batch<G>(cast, excluded()); }

  MixBatch<G> ballot_output() const {
    return ballot_mix.empty() ? ballot_input() : ballot_mix.back().output;
  }

  MixBatch<G> tracker_vote_input() const {
    auto b = tracker_vote_batch<G>();
    if (!eligibility || !prevote) return b;
    const auto stage1 = ballot_output();
    for (const auto& row : *eligibility) {
      if (row.status != EligibilityStatus::Eligible || !row.voter) continue;
      if (*row.voter >= prevote->size() || row.mixed_row >= stage1.rows.size()) continue;
      b.rows.push_back({(*prevote)[*row.voter].enc_tracker,
                        stage1.rows[row.mixed_row][BallotRowLayout<G>::kVote]});
    }
    return b;
  }

  MixBatch<G> tracker_vote_output() const {
    return tracker_vote_mix.empty() ? tracker_vote_input() : tracker_vote_mix.back().output;
  }

  MixBatch<G> tracker_output() const {
    return tracker_mix.empty() ? MixBatch<G>{} : tracker_mix.back().output;
  }
};

template <class G>
ParsedTranscript<G> parse_transcript(const std::vector<BbEntry>& entries) {
  ParsedTranscript<G> t;
  auto once = [&](auto& slot, auto value, std::size_t i, RecordKind k) {
    if (slot) t.problems.push_back("entry " + std::to_string(i) + ": repeated " + record_name(k));
    else slot = std::move(value);
  };
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const auto& e = entries[i];
    try {
      const auto kind = payload_kind(e.payload);
      if (record_phase(kind) != e.phase) {
        t.problems.push_back("entry " + std::to_string(i) + ": " + record_name(kind) +
                             " posted in phase " + phase_name(e.phase));
        continue;
      }
      const ByteView p = e.payload;
      switch (kind) {
        case RecordKind::ElectionParams: {
          auto params = payload_record<ElectionParams>(p);
          if (params.group != G::spec().name)
            throw Error(Errc::Malformed, "transcript is for group " + params.group);
          once(t.params, std::move(params), i, kind);
          break;
        }
        case RecordKind::TellerKeys: t.teller_keys.push_back(payload_record<TellerKeysRecord<G>>(p)); break;
        case RecordKind::VoterRoll: once(t.roll, payload_record<std::vector<RollEntry<G>>>(p), i, kind); break;
        case RecordKind::TrackerList: once(t.trackers, payload_record<std::vector<std::uint64_t>>(p), i, kind); break;
        case RecordKind::TrackerMix: t.tracker_mix.push_back(payload_record<MixStage<G>>(p)); break;
        case RecordKind::CommitmentFactors: t.factors.push_back(payload_record<CommitmentFactorsRecord<G>>(p)); break;
        case RecordKind::CommitmentDecryption: t.commitment_decryption.push_back(payload_record<DecryptionRecord<G>>(p)); break;
        case RecordKind::PrevoteRows: once(t.prevote, payload_record<std::vector<VoterRow<G>>>(p), i, kind); break;
        case RecordKind::CastBallot:
          t.cast.push_back(payload_record<ScannerTuple<G>>(p));
          t.cast_entries.push_back(i);
          break;
        case RecordKind::BallotScreening: once(t.screening, payload_record<std::vector<Exclusion>>(p), i, kind); break;
        case RecordKind::BallotMix: t.ballot_mix.push_back(payload_record<MixStage<G>>(p)); break;
        case RecordKind::IdSigDecryption: t.idsig_decryption.push_back(payload_record<DecryptionRecord<G>>(p)); break;
        case RecordKind::Eligibility: once(t.eligibility, payload_record<std::vector<EligibilityRow>>(p), i, kind); break;
        case RecordKind::TrackerVoteMix: t.tracker_vote_mix.push_back(payload_record<MixStage<G>>(p)); break;
        case RecordKind::TallyDecryption: t.tally_decryption.push_back(payload_record<DecryptionRecord<G>>(p)); break;
        case RecordKind::TallyBoard: once(t.board, payload_record<std::vector<TallyRow>>(p), i, kind); break;
        case RecordKind::Pet: t.pets.push_back(payload_record<PetLogRecord<G>>(p)); break;
        case RecordKind::Audit:
          t.audits.push_back(payload_record<AuditRecord<G>>(p));
          t.audit_entries.push_back(i);
          break;
      }
    } catch (const Error& err) {
      t.problems.push_back("entry " + std::to_string(i) + ": " + err.what());
    }
  }
  return t;
}

/// Group name recorded in the first entry, without committing to a backend.
inline std::string transcript_group(const std::vector<BbEntry>& entries) {
  if (entries.empty()) throw Error(Errc::Malformed, "empty transcript");
  const auto& p = entries.front().payload;
  if (payload_kind(p) != RecordKind::ElectionParams)
    throw Error(Errc::Malformed, "transcript does not start with election parameters");
  return payload_record<ElectionParams>(p).group;
}

}  // namespace electryo
