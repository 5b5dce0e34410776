#pragma once

// Comparison audits between the paper ballot box and the board, and
// dispute resolution. All decryptions happen in camera; only outcomes and an
// evidence digest reach the audit log.

#include "electryo/election/pipeline.hpp"

namespace electryo {

/// Group elements of a printed ballot code in the order the scanner
/// encrypts them: (a, b) of every pair, id pairs first.
template <class G>
std::vector<Element<G>> code_elements(const BallotCode<G>& code) {
  std::vector<Element<G>> out;
  for (const auto& p : code.pairs()) {
    out.push_back(p.a);
    out.push_back(p.b);
  }
  return out;
}

/// Sample m distinct indices from [0, n) without replacement.
inline std::vector<std::uint32_t> sample_indices(std::uint32_t n, std::uint32_t m, RandomSource& rng) {
  if (m > n) throw Error(Errc::InvalidConfig, "sample larger than population");
  std::vector<std::uint32_t> idx(n);
  for (std::uint32_t i = 0; i < n; ++i) idx[i] = i;
  for (std::uint32_t i = 0; i < m; ++i) std::swap(idx[i], idx[i + rng.uniform(n - i)]);
  idx.resize(m);
  std::sort(idx.begin(), idx.end());
  return idx;
}

/// Stage-one rows that were counted.
template <class G>
std::vector<std::uint32_t> counted_rows(const Election<G>& e) {
  std::vector<std::uint32_t> rows;
  const auto& el = e.parsed().eligibility;
  if (el)
    for (const auto& r : *el)
      if (r.status == EligibilityStatus::Eligible) rows.push_back(r.mixed_row);
  return rows;
}

template <class G>
struct RowExamination {
  std::uint32_t mixed_row = 0;
  std::optional<std::size_t> paper;  // index into the ballot box
  std::optional<std::uint32_t> electronic_vote;
  bool match = false;
};

/// Decrypt one stage-one row's ballot code and vote in camera and compare
/// with the paper ballot carrying that code.
template <class G>
RowExamination<G> examine_row(const Election<G>& e, std::uint32_t mixed_row, RandomSource& rng,
                              Hasher& evidence) {
  using L = BallotRowLayout<G>;
  const auto row = e.parsed().ballot_output().rows.at(mixed_row);
  std::vector<Ciphertext<G>> cts(row.begin() + L::kCode, row.begin() + L::kCode + L::kCodeLen);
  cts.push_back(row[L::kVote]);
  auto opened = e.decrypt_in_camera(cts, rng);
  evidence.absorb(opened.evidence);

  RowExamination<G> ex;
  ex.mixed_row = mixed_row;
  const std::vector<Element<G>> code(opened.plaintexts.begin(), opened.plaintexts.end() - 1);
  try {
    ex.electronic_vote = static_cast<std::uint32_t>(
        exp_decode<G>(opened.plaintexts.back(), e.config().candidates.size()));
  } catch (const Error&) {
  }
  const auto& box = e.paper_box();
  for (std::size_t b = 0; b < box.size(); ++b)
    if (code_elements<G>(box[b].code) == code) {
      ex.paper = b;
      break;
    }
  ex.match = ex.paper && ex.electronic_vote && box[*ex.paper].vote == ex.electronic_vote;
  return ex;
}

/// Ballot-comparison audit from the board to the paper: sample m counted
/// tuples, find each one's paper ballot by its decrypted code and compare
/// votes. A missing paper ballot counts as a mismatch.
template <class G>
AuditRecord<G> rla_bb_to_paper(Election<G>& e, std::uint32_t m, RandomSource& rng, bool log = true) {
  const auto rows = counted_rows(e);
  AuditRecord<G> rec;
  rec.kind = AuditKind::BbToPaper;
  Hasher evidence("electryo/audit/bb-to-paper");
  std::uint32_t missing = 0;
  for (auto i : sample_indices(static_cast<std::uint32_t>(rows.size()), m, rng)) {
    rec.sampled.push_back(rows[i]);
    auto ex = examine_row(e, rows[i], rng, evidence);
    if (!ex.paper) ++missing;
    if (ex.match) ++rec.matches;
    else ++rec.mismatches;
  }
  rec.evidence = evidence.digest();
  rec.notes = "sample " + std::to_string(m) + " of " + std::to_string(rows.size()) + " counted ballots";
  if (missing) rec.notes += ", " + std::to_string(missing) + " paper ballot(s) missing";
  if (log) e.post_audit(rec, rng);
  return rec;
}

/// Probability that a sample of m out of n contains at least one of k bad
/// records.
inline double hypergeometric_detection(std::uint32_t n, std::uint32_t k, std::uint32_t m) {
  if (m + k > n) return 1.0;
  double miss = 1.0;
  for (std::uint32_t i = 0; i < m; ++i) miss *= static_cast<double>(n - k - i) / static_cast<double>(n - i);
  return 1.0 - miss;
}

enum class PaperMatchKind : std::uint8_t { Unique = 0, NoMatch, MultiMatch };

inline const char* paper_match_name(PaperMatchKind k) {
  switch (k) {
    case PaperMatchKind::Unique: return "unique";
    case PaperMatchKind::NoMatch: return "no-match";
    case PaperMatchKind::MultiMatch: return "multi-match";
  }
  return "?";
}

template <class G>
struct PaperMatch {
  PaperMatchKind kind = PaperMatchKind::NoMatch;
  std::optional<std::uint32_t> row;         // index into the candidate rows
  std::vector<Element<G>> blinded_paper;    // decrypted blinded values of the paper side
  std::vector<Element<G>> raw_paper;        // the code components that were blinded
};

/// Number of leading code components compared when matching a paper ballot.
inline constexpr std::size_t kPaperMatchComponents = 2;

/// Match a paper ballot to a board tuple without revealing its code: the
/// auditor encrypts the first code components read off the paper, the
/// tellers lift these and the matching components of every candidate
/// tuple to a joint secret power, and only the blinded values are
/// decrypted and compared. `candidates` are stage-one rows.
template <class G>
PaperMatch<G> rla_paper_to_bb(Election<G>& e, const PaperBallot<G>& paper,
                              const std::vector<MixRow<G>>& candidates, RandomSource& rng,
                              bool log = true) {
  using L = BallotRowLayout<G>;
  PaperMatch<G> out;
  const auto raw = code_elements<G>(paper.code);
  out.raw_paper.assign(raw.begin(), raw.begin() + kPaperMatchComponents);
  std::vector<Ciphertext<G>> cts;
  for (const auto& x : out.raw_paper) cts.push_back(eg_encrypt<G>(e.election_pk(), x, rng));
  for (const auto& row : candidates)
    for (std::size_t j = 0; j < kPaperMatchComponents; ++j) cts.push_back(row.at(L::kCode + j));
  auto opened = e.blind_in_camera(cts, rng);
  out.blinded_paper.assign(opened.plaintexts.begin(), opened.plaintexts.begin() + kPaperMatchComponents);

  std::uint32_t hits = 0;
  for (std::uint32_t r = 0; r < candidates.size(); ++r) {
    auto first = opened.plaintexts.begin() + kPaperMatchComponents * (r + 1);
    if (std::equal(out.blinded_paper.begin(), out.blinded_paper.end(), first)) {
      if (!out.row) out.row = r;
      ++hits;
    }
  }
  out.kind = hits == 0 ? PaperMatchKind::NoMatch : hits == 1 ? PaperMatchKind::Unique : PaperMatchKind::MultiMatch;
  if (log) {
    AuditRecord<G> rec;
    rec.kind = AuditKind::PaperToBb;
    rec.sampled.push_back(static_cast<std::uint32_t>(paper.box_serial));
    rec.matches = hits == 1;
    rec.mismatches = hits != 1;
    rec.notes = std::string("paper ballot ") + std::to_string(paper.box_serial) + ": " + paper_match_name(out.kind);
    rec.evidence = opened.evidence;
    e.post_audit(rec, rng);
  }
  return out;
}

template <class G>
PaperMatch<G> rla_paper_to_bb(Election<G>& e, const PaperBallot<G>& paper, RandomSource& rng, bool log = true) {
  return rla_paper_to_bb(e, paper, e.parsed().ballot_output().rows, rng, log);
}

struct DisputeCase {
  std::uint32_t voter = 0;
  std::uint32_t claimed_vote = 0;
};

enum class Verdict : std::uint8_t { SystemFault = 0, ComplaintUnsupported };

inline const char* verdict_name(Verdict v) {
  return v == Verdict::SystemFault ? "system-fault" : "complaint-unsupported";
}

struct DisputeOutcome {
  Verdict verdict = Verdict::ComplaintUnsupported;
  std::string finding;
  std::optional<std::uint32_t> paper_vote;
  std::optional<std::uint32_t> electronic_vote;
};

/// A voter says the board shows the wrong vote for them. Their counted tuple
/// is located by id, its ballot code decrypted in camera, and the paper
/// ballot with that code is checked: its code must carry their id and a valid
/// signature, and its vote must equal the electronic one.
template <class G>
DisputeOutcome resolve_dispute(Election<G>& e, const DisputeCase& c, RandomSource& rng, bool log = true) {
  DisputeOutcome out;
  AuditRecord<G> rec;
  rec.kind = AuditKind::Dispute;
  Hasher evidence("electryo/audit/dispute");
  const auto& id = e.credential(c.voter).id;
  const auto row = e.counted_row(c.voter);

  if (!e.private_state().clerk.attended(id)) {
    out.finding = "attendance log has no visit by " + id;
  } else if (!row) {
    out.verdict = Verdict::SystemFault;
    out.finding = id + " attended but no counted ballot carries the id";
  } else {
    rec.sampled.push_back(*row);
    auto ex = examine_row(e, *row, rng, evidence);
    out.electronic_vote = ex.electronic_vote;
    if (!ex.paper) {
      out.verdict = Verdict::SystemFault;
      out.finding = "no paper ballot carries the decrypted ballot code";
    } else {
      const auto& paper = e.paper_box()[*ex.paper];
      out.paper_vote = paper.vote;
      std::vector<Ciphertext<G>> code_cts;
      for (const auto& p : paper.code.pairs()) code_cts.push_back(p);
      auto opened = e.decrypt_in_camera(code_cts, rng);
      evidence.absorb(opened.evidence);
      const auto half = BallotRowLayout<G>::kRccaPairs;
      std::vector<Element<G>> id_els(opened.plaintexts.begin(), opened.plaintexts.begin() + half);
      std::vector<Element<G>> sig_els(opened.plaintexts.begin() + half, opened.plaintexts.end());
      auto id_block = rcca_decode<G>(id_els, e.election_id());
      auto sig_block = rcca_decode<G>(sig_els, e.election_id());
      auto paper_id = id_block ? unframe_payload(*id_block) : std::nullopt;
      auto sig_bytes = sig_block ? signature_from_payload<G>(*sig_block) : std::nullopt;
      auto sig = sig_bytes ? Signature<G>::from_compact(*sig_bytes) : std::nullopt;
      const bool signed_ok =
          paper_id && to_string(*paper_id) == id && sig &&
          verify_sig<G>(e.credential(c.voter).signing.vk,
                        id_signature_message(id, e.election_id(), e.config().signature_extra()), *sig);
      if (!signed_ok) {
        out.verdict = Verdict::SystemFault;
        out.finding = "paper ballot code does not carry a valid signature for " + id;
      } else if (paper.vote != ex.electronic_vote) {
        out.verdict = Verdict::SystemFault;
        out.finding = "paper vote differs from the electronic record";
      } else {
        out.finding = "paper ballot matches the electronic record";
      }
    }
  }
  rec.matches = out.verdict == Verdict::ComplaintUnsupported;
  rec.mismatches = out.verdict == Verdict::SystemFault;
  rec.notes = std::string(verdict_name(out.verdict)) + ": " + out.finding;
  rec.evidence = evidence.digest();
  if (log) e.post_audit(rec, rng);
  return out;
}

}  // namespace electryo
