#pragma once

// Election simulator: every role runs in-process, public output goes to the
// bulletin board, and private material (teller shares, voter keys, the
// paper ballot box) stays in a separate state object.

#include <filesystem>

#include "electryo/election/verifier.hpp"

namespace electryo {

struct ElectionConfig {
  std::string label = "electryo";
  std::vector<std::string> candidates;
  std::uint32_t voters = 0;
  std::uint32_t tellers = 3;
  std::uint32_t threshold = 2;
  std::uint32_t mix_servers = 3;
  Backend backend = Backend::TestGroup;
  std::uint64_t seed = 1;
  bool sign_date_printer = false;
  std::string date = "election-day";
  std::string printer = "printer-1";

  void validate() const {
    if (candidates.size() < 2) throw Error(Errc::InvalidConfig, "at least two candidates are required");
    if (voters < 2) throw Error(Errc::InvalidConfig, "at least two voters are required");
    if (tellers == 0 || threshold == 0 || threshold > tellers)
      throw Error(Errc::InvalidConfig, "threshold must satisfy 1 <= t <= N");
    if (mix_servers == 0) throw Error(Errc::InvalidConfig, "at least one mix server is required");
  }

  std::string signature_extra() const { return sign_date_printer ? date + "|" + printer : ""; }

  auto tie() {
    return std::tie(label, candidates, voters, tellers, threshold, mix_servers, backend, seed,
                    sign_date_printer, date, printer);
  }
  auto tie() const {
    return std::tie(label, candidates, voters, tellers, threshold, mix_servers, backend, seed,
                    sign_date_printer, date, printer);
  }
};

/// Election identifier: the label plus public randomness. The randomness is
/// derived from the seed so that seeded runs replay exactly.
inline Bytes make_election_id(const ElectionConfig& cfg) {
  auto rng = SeededRng(cfg.seed).fork("election-id/public-randomness");
  Bytes r(16);
  rng.fill(r);
  return to_bytes(cfg.label + ":" + to_hex(r));
}

inline std::string voter_id(std::uint32_t index) {
  auto n = std::to_string(index + 1);
  return "V" + std::string(n.size() < 4 ? 4 - n.size() : 0, '0') + n;
}

/// Deliberate misbehaviour, used to build tamper fixtures and audit trials.
struct Faults {
  std::optional<std::uint32_t> swap_vote_after_proof;  // scanner replaces enc_vote of this voter
  bool skip_screening = false;                         // pipeline mixes without checking proofs
  std::optional<std::uint32_t> scanner_flip;           // scanner encrypts another vote for this voter
  std::optional<std::uint32_t> drop_stage2_row_at;     // mix server that drops a tracker/vote row
  std::optional<std::uint32_t> forged_ballot_for;      // stuffed ballot in this voter's name
  bool accept_forged_signatures = false;               // pipeline marks bad signatures eligible
  std::optional<std::pair<std::uint32_t, std::uint32_t>> copy_code;  // (source, target) voters
};

template <class G>
struct TellerState {
  std::uint32_t id = 0;
  Scalar<G> share;
  SigningKeyPair<G> signing;
  std::vector<AlphaShareRecord<G>> alpha;  // private, released only to the TRA

  auto tie() { return std::tie(id, share, signing, alpha); }
  auto tie() const { return std::tie(id, share, signing, alpha); }
};

template <class G>
struct VoterState {
  VoterCredential<G> credential;
  std::optional<ReceiptCode> receipt;
  std::optional<std::uint32_t> vote;

  auto tie() { return std::tie(credential, receipt, vote); }
  auto tie() const { return std::tie(credential, receipt, vote); }
};

/// Everything that never goes on the board.
template <class G>
struct PrivateState {
  ElectionConfig config;
  std::vector<TellerState<G>> tellers;
  std::vector<VoterState<G>> voters;
  Clerk clerk;
  TrackerRetrievalAuthority tra;
  std::vector<PaperBallot<G>> box;
  std::vector<std::optional<std::uint32_t>> cast_voter;  // simulation bookkeeping only
  std::uint64_t operations = 0;
  Phase board_phase = Phase::Setup;  // phases opened without a posting are not in the log

  auto tie() { return std::tie(config, tellers, voters, clerk, tra, box, cast_voter, operations, board_phase); }
  auto tie() const {
    return std::tie(config, tellers, voters, clerk, tra, box, cast_voter, operations, board_phase);
  }
};

template <class G>
struct NotifyOutcome {
  bool gate_passed = false;
  bool suppressed = false;
  std::optional<AlphaTerm<G>> alpha;
  std::optional<std::uint64_t> tracker;
};

template <class G>
struct CoercionOutcome {
  AlphaTerm<G> fake;
  std::uint64_t fake_tracker = 0;
};

template <class G>
struct InCameraResult {
  std::vector<Element<G>> plaintexts;
  Digest evidence{};
};

template <class G>
class Election {
 public:
  Election(ElectionConfig cfg, Faults faults = {}) : faults_(std::move(faults)) {
    cfg.validate();
    st_.config = std::move(cfg);
    eid_ = make_election_id(st_.config);
  }

  // -------------------------------------------------------------------------
  // Setup and pre-vote

  void setup() {
    if (bb_.size() != 0) throw Error(Errc::PhaseOrderViolation, "election already set up");
    const auto& cfg = st_.config;
    ElectionParams params{eid_,          G::spec().name,  cfg.candidates,    cfg.voters,
                          cfg.tellers,   cfg.threshold,   cfg.mix_servers,   cfg.signature_extra()};
    bb_.append(Phase::Setup, "authority", make_payload(RecordKind::ElectionParams, params));

    std::vector<Dealing<G>> dealings;
    for (std::uint32_t k = 1; k <= cfg.tellers; ++k) {
      auto rng = rng_for("teller/" + std::to_string(k) + "/dkg");
      dealings.push_back(deal<G>(k, cfg.tellers, cfg.threshold, rng));
    }
    auto dk = aggregate_dealings<G>(dealings, cfg.threshold);
    for (std::uint32_t k = 1; k <= cfg.tellers; ++k) {
      auto rng = rng_for("teller/" + std::to_string(k) + "/signing");
      st_.tellers.push_back({k, dk.shares[k - 1].secret_share, signing_keygen<G>(rng), {}});
      bb_.append(Phase::Setup, teller_name(k),
                 make_payload(RecordKind::TellerKeys,
                              TellerKeysRecord<G>{dk.commitments[k - 1], st_.tellers.back().signing.vk}));
    }
    pk_ = dk.pk;
    vks_ = dk.verification_keys;

    std::vector<std::string> ids;
    std::vector<RollEntry<G>> roll;
    for (std::uint32_t i = 0; i < cfg.voters; ++i) {
      auto rng = rng_for("voter/" + std::to_string(i) + "/credential");
      auto cred = make_credential<G>(voter_id(i), rng);
      roll.push_back({cred.id, cred.signing.vk, cred.selene.pk});
      ids.push_back(cred.id);
      st_.voters.push_back({std::move(cred), std::nullopt, std::nullopt});
    }
    st_.clerk = Clerk(ids);
    bb_.append(Phase::Setup, "registrar", make_payload(RecordKind::VoterRoll, roll));

    const auto trackers = setup_trackers<G>(cfg.voters);
    bb_.append(Phase::Setup, "authority", make_payload(RecordKind::TrackerList, trackers.trackers));
    {
      auto rng = rng_for("tracker-mix");
      auto cascade = assign_trackers<G>(trackers, cfg.voters, pk_, cfg.mix_servers,
                                        tracker_mix_context(eid_), rng);
      for (const auto& s : cascade.stages)
        bb_.append(Phase::Setup, mix_name(s.server), make_payload(RecordKind::TrackerMix, s));
      enc_trackers_.clear();
      for (const auto& row : cascade.final_batch().rows) enc_trackers_.push_back(row[0]);
    }

    bb_.open_phase(Phase::PreVote);
    std::vector<std::vector<Ciphertext<G>>> factors(cfg.voters);
    for (auto& teller : st_.tellers) {
      auto rng = rng_for("teller/" + std::to_string(teller.id) + "/factors");
      CommitmentFactorsRecord<G> rec{teller.id, {}};
      for (std::uint32_t i = 0; i < cfg.voters; ++i) {
        auto c = contribute_alpha_factor<G>(teller.id, i, pk_, roll[i].pk, eid_, teller.signing, rng);
        factors[i].push_back(c.posted.factor);
        rec.factors.push_back(std::move(c.posted));
        teller.alpha.push_back(std::move(c.kept));
      }
      bb_.append(Phase::PreVote, teller_name(teller.id), make_payload(RecordKind::CommitmentFactors, rec));
    }
    std::vector<std::vector<Ciphertext<G>>> combined;
    for (std::uint32_t i = 0; i < cfg.voters; ++i)
      combined.push_back({combine_commitment<G>(enc_trackers_[i], factors[i])});
    auto opened = decrypt_publicly(combined, RecordKind::CommitmentDecryption, Phase::PreVote, "commitments");
    std::vector<VoterRow<G>> rows;
    for (std::uint32_t i = 0; i < cfg.voters; ++i)
      rows.push_back({roll[i].id, roll[i].vk, roll[i].pk, enc_trackers_[i], opened[i][0]});
    bb_.append(Phase::PreVote, "authority", make_payload(RecordKind::PrevoteRows, rows));
    bb_.open_phase(Phase::CastBallots);
    invalidate();
  }

  // -------------------------------------------------------------------------
  // Voting

  /// One voter's visit: registration, card, printer, booth, scanner. Returns
  /// the receipt code handed to the voter.
  ReceiptCode cast(std::uint32_t voter, std::uint32_t candidate) {
    require_phase(Phase::CastBallots, "casting");
    const auto& cfg = st_.config;
    if (voter >= cfg.voters) throw Error(Errc::NotOnRoll, "no such voter", voter);
    if (candidate < 1 || candidate > cfg.candidates.size())
      throw Error(Errc::InvalidConfig, "candidate number out of range", candidate);
    auto& vs = st_.voters[voter];
    st_.clerk.register_voter(vs.credential.id);

    auto rng = rng_for("ballot/" + vs.credential.id);
    auto card = card_issue<G>(vs.credential, pk_, eid_, cfg.signature_extra(), rng);
    auto paper = print_ballot<G>(card, pk_, eid_, rng);
    paper.vote = candidate;
    paper.box_serial = st_.box.size();

    auto scanned = paper;
    if (faults_.copy_code && faults_.copy_code->second == voter) {
      for (std::size_t b = 0; b < st_.cast_voter.size(); ++b)
        if (st_.cast_voter[b] == faults_.copy_code->first) scanned.code = st_.box[b].code;
    }
    if (faults_.scanner_flip == voter) scanned.vote = other_candidate(candidate);
    auto scan = scan_ballot<G>(scanned, pk_, eid_, cfg.candidates.size(), rng);
    if (faults_.swap_vote_after_proof == voter)
      scan.tuple.enc_vote = eg_encrypt<G>(pk_, exp_encode<G>(other_candidate(candidate)), rng);

    st_.box.push_back(std::move(paper));
    st_.cast_voter.push_back(voter);
    bb_.append(Phase::CastBallots, "scanner-1", make_payload(RecordKind::CastBallot, scan.tuple));
    vs.receipt = scan.receipt;
    vs.vote = candidate;
    invalidate();
    return scan.receipt;
  }

  void close_voting() {
    require_phase(Phase::CastBallots, "closing");
    if (faults_.forged_ballot_for) inject_forged_ballot(*faults_.forged_ballot_for);
    bb_.open_phase(Phase::MixIdSig);
  }

  // -------------------------------------------------------------------------
  // Stage one: screening, mix, id/signature decryption, eligibility

  void mix() {
    require_phase(Phase::MixIdSig, "mixing");
    const auto& cfg = st_.config;
    auto cast = parsed().cast;
    std::vector<Exclusion> screening;
    for (std::uint32_t i = 0; i < cast.size(); ++i)
      if (!faults_.skip_screening && !verify_scanner_tuple<G>(cast[i], pk_, eid_, cfg.candidates.size()))
        screening.push_back({i, "proof bundle does not verify"});
    bb_.append(Phase::MixIdSig, "authority", make_payload(RecordKind::BallotScreening, screening));
    invalidate();

    auto batch = parsed().ballot_input();
    if (batch.rows.size() >= 2) {
      auto rng = rng_for("ballot-mix");
      auto cascade = run_cascade<G>(batch, cfg.mix_servers,
                                    std::vector<Element<G>>(batch.slots.size(), pk_),
                                    ballot_mix_context(eid_), rng);
      for (const auto& s : cascade.stages)
        bb_.append(Phase::MixIdSig, mix_name(s.server), make_payload(RecordKind::BallotMix, s));
      batch = cascade.final_batch();
    }
    using L = BallotRowLayout<G>;
    std::vector<std::vector<Ciphertext<G>>> idsig;
    for (const auto& row : batch.rows) idsig.emplace_back(row.begin() + L::kId, row.begin() + L::kCode);
    post_decryption_shares(idsig, RecordKind::IdSigDecryption, Phase::MixIdSig, "id-sig");
    invalidate();

    bb_.open_phase(Phase::EligibleBallots);
    std::vector<EligibilityRow> rows;
    auto decoded = decode_ballot_rows<G>(parsed());
    for (std::uint32_t r = 0; r < decoded.size(); ++r) {
      auto status = decoded[r].status;
      if (faults_.accept_forged_signatures && status == EligibilityStatus::BadSignature)
        status = EligibilityStatus::Eligible;
      rows.push_back({r, status, decoded[r].id, decoded[r].signature, decoded[r].voter});
    }
    bb_.append(Phase::EligibleBallots, "authority", make_payload(RecordKind::Eligibility, rows));
    invalidate();
  }

  // -------------------------------------------------------------------------
  // Stage two: tracker/vote mix, decryption, tally board

  void tally() {
    require_phase(Phase::EligibleBallots, "tallying");
    const auto& cfg = st_.config;
    bb_.open_phase(Phase::MixTrackerVote);
    auto batch = parsed().tracker_vote_input();
    if (batch.rows.size() >= 2) {
      auto rng = rng_for("tracker-vote-mix");
      StageTamper<G> tamper;
      if (faults_.drop_stage2_row_at) {
        tamper = [server = *faults_.drop_stage2_row_at](std::uint32_t k, MixStage<G>& s) {
          if (k == server && !s.output.rows.empty()) s.output.rows.pop_back();
        };
      }
      auto cascade = run_cascade<G>(batch, cfg.mix_servers, {pk_, pk_}, tracker_vote_mix_context(eid_),
                                    rng, tamper, !faults_.drop_stage2_row_at.has_value());
      for (const auto& s : cascade.stages)
        bb_.append(Phase::MixTrackerVote, mix_name(s.server), make_payload(RecordKind::TrackerVoteMix, s));
      batch = cascade.final_batch();
    }
    auto opened = decrypt_publicly(batch.rows, RecordKind::TallyDecryption, Phase::MixTrackerVote, "tally");
    std::vector<TallyRow> board;
    for (const auto& row : opened)
      board.push_back({exp_decode<G>(row[0], cfg.voters),
                       static_cast<std::uint32_t>(exp_decode<G>(row[1], cfg.candidates.size()))});
    bb_.append(Phase::TallyBoard, "authority", make_payload(RecordKind::TallyBoard, board));
    invalidate();
  }

  // -------------------------------------------------------------------------
  // Notification

  /// Receipt-code gate at the TRA: a PET between a fresh encryption of the
  /// claimed code and the code on the voter's counted ballot. The test is
  /// logged publicly either way.
  bool tra_gate(std::uint32_t voter, std::string_view claimed) {
    require_phase(Phase::TallyBoard, "tracker notification");
    const auto rc = ReceiptCode::parse(claimed);
    const auto& t = parsed();
    auto row = counted_row(voter);
    if (!row) throw Error(Errc::PetFailed, "no counted ballot for voter", voter);
    const auto left = t.ballot_output().rows[*row][BallotRowLayout<G>::kRc];
    auto rng = rng_for("pet/" + std::to_string(voter) + "/" + std::to_string(st_.operations++));
    const auto right = eg_encrypt<G>(pk_, rc_message<G>(rc), rng);
    const auto ctx = pet_context(eid_);
    PetRecord<G> rec{left, right, {}, {}, false};
    for (const auto& teller : st_.tellers) rec.blinding.push_back(pet_contribute<G>(teller.id, left, right, ctx, rng));
    const auto blinded = pet_blinded_product<G>(left, right, rec.blinding, st_.config.threshold, ctx);
    for (const auto& teller : st_.tellers)
      rec.decryption.push_back(partial_decrypt<G>(teller.id, teller.share, blinded, ctx, rng));
    rec.equal = pet_combine<G>(left, right, rec.blinding, rec.decryption, vks_, st_.config.threshold, ctx);
    bb_.append(Phase::PetLog, "tra", make_payload(RecordKind::Pet, PetLogRecord<G>{*row, rec}));
    invalidate();
    return rec.equal;
  }

  /// Gate, then α assembly and delivery unless the voter asked for
  /// suppression; the voter's device opens the tracker.
  NotifyOutcome<G> notify(std::uint32_t voter, std::string_view claimed) {
    NotifyOutcome<G> out;
    out.gate_passed = tra_gate(voter, claimed);
    if (!out.gate_passed) return out;
    if (st_.tra.suppressed(voter)) {
      out.suppressed = true;
      return out;
    }
    out.alpha = tra_alpha(voter);
    out.tracker = retrieve_tracker<G>(st_.voters[voter].credential.selene.sk, out.alpha->alpha,
                                      commitment(voter), st_.config.voters);
    return out;
  }

  /// The genuine α as assembled by the TRA from the tellers' private shares.
  AlphaTerm<G> tra_alpha(std::uint32_t voter) const {
    std::vector<AlphaShareRecord<G>> recs;
    for (const auto& teller : st_.tellers)
      for (const auto& r : teller.alpha)
        if (r.voter == voter) recs.push_back(r);
    return tra_notify<G>(voter, recs, st_.voters.at(voter).credential.selene.pk, parsed().teller_signing_keys(), eid_);
  }

  /// Coerced voter: suppress the real α and compute a fake one opening to a
  /// tracker whose board row shows the coercer's candidate.
  CoercionOutcome<G> coerce(std::uint32_t voter, std::uint32_t coercer_candidate) {
    require_phase(Phase::TallyBoard, "coercion evasion");
    if (voter >= st_.config.voters) throw Error(Errc::NotOnRoll, "no such voter", voter);
    st_.tra.suppress(voter);
    const auto& board = parsed().board;
    std::vector<std::uint64_t> options;
    if (board)
      for (const auto& row : *board)
        if (row.vote == coercer_candidate) options.push_back(row.tracker);
    if (options.empty())
      throw Error(Errc::ScenarioFailed, "no board row shows the requested candidate", voter);
    auto rng = rng_for("coerce/" + std::to_string(voter));
    const auto target = options[rng.uniform(options.size())];
    auto fake = fake_alpha<G>(voter, st_.voters[voter].credential.selene.sk, commitment(voter), target,
                              st_.config.voters);
    return {fake, target};
  }

  // -------------------------------------------------------------------------
  // In-camera operations for audits and disputes

  /// Threshold decryption by a quorum of tellers, with proofs checked but
  /// not published; the evidence digest covers every share.
  InCameraResult<G> decrypt_in_camera(const std::vector<Ciphertext<G>>& cts, RandomSource& rng) const {
    const auto ctx = audit_context(eid_);
    InCameraResult<G> out;
    Hasher h("electryo/audit/evidence");
    for (const auto& c : cts) {
      std::vector<DecryptShare<G>> shares;
      for (std::uint32_t k = 0; k < st_.config.threshold; ++k)
        shares.push_back(partial_decrypt<G>(st_.tellers[k].id, st_.tellers[k].share, c, ctx, rng));
      out.plaintexts.push_back(combine_decrypt<G>(c, shares, vks_, st_.config.threshold, ctx));
      h.absorb_value(c).absorb_value(shares);
    }
    out.evidence = h.digest();
    return out;
  }

  /// Homomorphic obfuscation: a quorum raises every ciphertext to a joint
  /// secret exponent (each teller proving consistent use of its share of the
  /// exponent), then the blinded values are decrypted.
  InCameraResult<G> blind_in_camera(const std::vector<Ciphertext<G>>& cts, RandomSource& rng) const {
    const auto ctx = audit_context(eid_);
    std::vector<Ciphertext<G>> blinded(cts.size());
    Hasher h("electryo/audit/blinding");
    for (std::uint32_t k = 0; k < st_.config.threshold; ++k) {
      const auto z = random_nonzero_scalar<G>(rng);
      LinearStatement<G> st;
      st.witness_count = 1;
      st.add({{G::generator(), 0}}, gpow<G>(z));
      std::vector<Ciphertext<G>> mine;
      for (const auto& c : cts) {
        mine.push_back(c.pow(z));
        st.add({{c.a, 0}}, mine.back().a);
        st.add({{c.b, 0}}, mine.back().b);
      }
      auto proof = prove_linear<G>(st, {z}, ctx, rng);
      if (!verify_linear<G>(st, proof, ctx)) throw Error(Errc::ProofGenFailure, "blinding proof");
      for (std::size_t j = 0; j < cts.size(); ++j) blinded[j] = blinded[j] * mine[j];
      h.absorb_value(st).absorb_value(proof);
    }
    auto out = decrypt_in_camera(blinded, rng);
    h.absorb(out.evidence);
    out.evidence = h.digest();
    return out;
  }

  /// Sign an audit record by every teller and post it.
  void post_audit(AuditRecord<G> rec, RandomSource& rng) {
    require_phase(Phase::TallyBoard, "auditing");
    const auto msg = rec.signed_message(eid_);
    rec.signatures.clear();
    for (const auto& teller : st_.tellers) rec.signatures.push_back({teller.id, sign<G>(teller.signing, msg, rng)});
    bb_.append(Phase::AuditLog, "auditor", make_payload(RecordKind::Audit, rec));
    invalidate();
  }

  // -------------------------------------------------------------------------
  // Accessors

  const ElectionConfig& config() const { return st_.config; }
  const Faults& faults() const { return faults_; }
  const Bytes& election_id() const { return eid_; }
  const Element<G>& election_pk() const { return pk_; }
  const std::vector<Element<G>>& verification_keys() const { return vks_; }
  const BulletinBoard& board() const { return bb_; }
  const std::vector<BbEntry>& transcript() const { return bb_.entries(); }
  const PrivateState<G>& private_state() const { return st_; }
  const std::vector<PaperBallot<G>>& paper_box() const { return st_.box; }
  const VoterCredential<G>& credential(std::uint32_t voter) const { return st_.voters.at(voter).credential; }
  std::optional<ReceiptCode> receipt(std::uint32_t voter) const { return st_.voters.at(voter).receipt; }
  std::optional<std::uint32_t> cast_vote(std::uint32_t voter) const { return st_.voters.at(voter).vote; }

  const ParsedTranscript<G>& parsed() const {
    if (!parsed_) parsed_ = parse_transcript<G>(bb_.entries());
    return *parsed_;
  }

  Element<G> commitment(std::uint32_t voter) const { return parsed().prevote->at(voter).commitment; }

  /// Stage-one output row of the voter's counted ballot, if any.
  std::optional<std::uint32_t> counted_row(std::uint32_t voter) const {
    const auto& el = parsed().eligibility;
    if (!el) return std::nullopt;
    for (const auto& row : *el)
      if (row.status == EligibilityStatus::Eligible && row.voter == voter) return row.mixed_row;
    return std::nullopt;
  }

  SeededRng rng_for(std::string_view label) const {
    return SeededRng(st_.config.seed).fork(std::string("electryo/sim/") + std::string(label));
  }

  SeededRng next_rng(std::string_view label) { return rng_for(std::string(label) + "/" + std::to_string(st_.operations++)); }

  // -------------------------------------------------------------------------
  // Persistence: transcript plus a private state file

  void save(const std::filesystem::path& transcript, const std::filesystem::path& state) const {
    save_transcript(transcript, bb_.entries());
    auto st = st_;
    st.board_phase = bb_.current_phase();
    write_file(state, encode(st));
  }

  static Election load(const std::filesystem::path& transcript, const std::filesystem::path& state) {
    auto st = decode<PrivateState<G>>(read_file(state));
    Election e(st.config);
    e.st_ = std::move(st);
    e.bb_ = BulletinBoard(load_transcript(transcript));
    if (e.st_.board_phase > e.bb_.current_phase()) e.bb_.open_phase(e.st_.board_phase);
    const auto& t = e.parsed();
    if (!t.params || t.params->election_id != e.eid_)
      throw Error(Errc::Malformed, "state file does not belong to this transcript");
    e.pk_ = t.election_pk();
    e.vks_ = t.verification_keys();
    return e;
  }

 private:
  static std::string teller_name(std::uint32_t k) { return "teller-" + std::to_string(k); }
  static std::string mix_name(std::uint32_t k) { return "mix-" + std::to_string(k); }

  std::uint32_t other_candidate(std::uint32_t c) const {
    return c % static_cast<std::uint32_t>(st_.config.candidates.size()) + 1;
  }

  void require_phase(Phase p, std::string_view what) const {
    if (bb_.current_phase() != p)
      throw Error(Errc::PhaseOrderViolation, std::string(what) + " requires phase " + phase_name(p) +
                                                 ", board is in " + phase_name(bb_.current_phase()));
  }

  void invalidate() { parsed_.reset(); }

  /// Every teller posts shares for every (row, pair); returns the plaintexts.
  std::vector<std::vector<Element<G>>> decrypt_publicly(const std::vector<std::vector<Ciphertext<G>>>& cts,
                                                        RecordKind kind, Phase phase, std::string_view label) {
    auto shares = post_decryption_shares(cts, kind, phase, label);
    const auto ctx = decryption_context(eid_);
    std::vector<std::vector<Element<G>>> out(cts.size());
    for (std::size_t r = 0; r < cts.size(); ++r)
      for (std::size_t j = 0; j < cts[r].size(); ++j) {
        std::vector<DecryptShare<G>> s;
        for (const auto& per_teller : shares) s.push_back(per_teller[r][j]);
        out[r].push_back(combine_decrypt<G>(cts[r][j], s, vks_, st_.config.threshold, ctx));
      }
    return out;
  }

  std::vector<std::vector<std::vector<DecryptShare<G>>>> post_decryption_shares(
      const std::vector<std::vector<Ciphertext<G>>>& cts, RecordKind kind, Phase phase, std::string_view label) {
    const auto ctx = decryption_context(eid_);
    std::vector<std::vector<std::vector<DecryptShare<G>>>> all;
    for (const auto& teller : st_.tellers) {
      auto rng = rng_for(std::string(label) + "/decrypt/" + std::to_string(teller.id));
      DecryptionRecord<G> rec{teller.id, {}};
      for (const auto& row : cts) {
        rec.shares.emplace_back();
        for (const auto& c : row) rec.shares.back().push_back(partial_decrypt<G>(teller.id, teller.share, c, ctx, rng));
      }
      bb_.append(phase, teller_name(teller.id), make_payload(kind, rec));
      all.push_back(std::move(rec.shares));
    }
    invalidate();
    return all;
  }

  /// Ballot stuffing by a corrupt station: a valid-looking ballot in a
  /// registered voter's name whose signature was not made by their card.
  void inject_forged_ballot(std::uint32_t voter) {
    const auto& cfg = st_.config;
    auto rng = rng_for("forged-ballot");
    const auto& id = st_.voters.at(voter).credential.id;
    Bytes fake_sig(Signature<G>::kCompactBytes);
    rng.fill(fake_sig);
    BallotCode<G> code{rcca_encrypt<G>(pk_, frame_payload<G>(to_bytes(id)), eid_, rng),
                       rcca_encrypt<G>(pk_, signature_payload<G>(fake_sig), eid_, rng)};
    auto paper = print_ballot<G>(code, pk_, eid_, rng);
    paper.vote = 1;
    paper.box_serial = st_.box.size();
    auto scan = scan_ballot<G>(paper, pk_, eid_, cfg.candidates.size(), rng);
    st_.box.push_back(std::move(paper));
    st_.cast_voter.push_back(std::nullopt);
    bb_.append(Phase::CastBallots, "scanner-1", make_payload(RecordKind::CastBallot, scan.tuple));
    invalidate();
  }

  PrivateState<G> st_;
  Faults faults_;
  Bytes eid_;
  Element<G> pk_;
  std::vector<Element<G>> vks_;
  std::vector<Ciphertext<G>> enc_trackers_;
  BulletinBoard bb_;
  mutable std::optional<ParsedTranscript<G>> parsed_;
};

}  // namespace electryo
