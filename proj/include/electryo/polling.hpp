#pragma once

// Polling-station roles: registration clerk, ID card, ballot printer,
// scanner, and the tracker retrieval authority.

#include <map>
#include <set>

#include "electryo/schnorr.hpp"
#include "electryo/selene.hpp"
#include "electryo/zkp/or_proof.hpp"
#include "electryo/zkp/reenc_link.hpp"

namespace electryo {

// ---------------------------------------------------------------------------
// Receipt codes: five random digits and a Damm check digit.

inline int damm_digit(std::string_view digits) {
  static constexpr int kTable[10][10] = {
      {0, 3, 1, 7, 5, 9, 8, 6, 4, 2}, {7, 0, 9, 2, 1, 5, 4, 8, 6, 3},
      {4, 2, 0, 6, 8, 7, 1, 3, 5, 9}, {1, 7, 5, 0, 9, 8, 3, 4, 2, 6},
      {6, 1, 2, 3, 0, 4, 5, 9, 7, 8}, {3, 6, 7, 4, 2, 0, 9, 5, 8, 1},
      {5, 8, 6, 9, 7, 2, 0, 1, 3, 4}, {8, 9, 4, 5, 3, 6, 2, 0, 1, 7},
      {9, 4, 3, 8, 6, 1, 7, 2, 0, 5}, {2, 5, 8, 1, 4, 3, 6, 7, 9, 0}};
  int interim = 0;
  for (char c : digits) {
    if (c < '0' || c > '9') throw Error(Errc::InvalidReceiptCode, "non-digit in receipt code");
    interim = kTable[interim][c - '0'];
  }
  return interim;
}

struct ReceiptCode {
  std::string digits;  // five
  char check = '0';

  std::string text() const { return digits + check; }
  std::uint64_t value() const { return std::stoull(text()); }

  static ReceiptCode random(RandomSource& rng) {
    ReceiptCode rc;
    for (int i = 0; i < 5; ++i) rc.digits.push_back(static_cast<char>('0' + rng.uniform(10)));
    rc.check = static_cast<char>('0' + damm_digit(rc.digits));
    return rc;
  }

  /// Client-side validation of a typed six-character code.
  static ReceiptCode parse(std::string_view text) {
    if (text.size() != 6) throw Error(Errc::InvalidReceiptCode, "receipt code must have 6 digits");
    if (damm_digit(text) != 0) throw Error(Errc::InvalidReceiptCode, "check digit mismatch");
    return {std::string(text.substr(0, 5)), text[5]};
  }

  bool operator==(const ReceiptCode&) const = default;
  void write(Writer& w) const { w.string(text()); }
  static ReceiptCode read(Reader& r) { return parse(r.string()); }
};

/// g^{rc+1}, so the all-zero code is not the identity.
template <class G>
Element<G> rc_message(const ReceiptCode& rc) {
  return exp_encode<G>(rc.value() + 1);
}

// ---------------------------------------------------------------------------
// Voters and registration

template <class G>
struct VoterCredential {
  std::string id;
  SigningKeyPair<G> signing;
  ElGamalKeyPair<G> selene;
  std::string contact;

  auto tie() { return std::tie(id, signing, selene, contact); }
  auto tie() const { return std::tie(id, signing, selene, contact); }
};

template <class G>
VoterCredential<G> make_credential(std::string id, RandomSource& rng) {
  auto contact = "app://" + id;
  return {std::move(id), signing_keygen<G>(rng), keygen<G>(rng), std::move(contact)};
}

class Clerk {
 public:
  Clerk() = default;
  explicit Clerk(std::vector<std::string> roll) : roll_(roll.begin(), roll.end()) {}

  /// Marks attendance; refuses unknown ids and second visits.
  void register_voter(const std::string& id) {
    if (!roll_.contains(id)) throw Error(Errc::NotOnRoll, "'" + id + "' is not on the roll");
    if (attended_.contains(id)) throw Error(Errc::AlreadyVoted, "'" + id + "' already voted");
    attended_.insert(id);
    log_.push_back(id);
  }

  bool attended(const std::string& id) const { return attended_.contains(id); }
  const std::vector<std::string>& attendance_log() const { return log_; }

  auto tie() { return std::tie(roll_, attended_, log_); }
  auto tie() const { return std::tie(roll_, attended_, log_); }

 private:
  std::set<std::string> roll_;
  std::set<std::string> attended_;
  std::vector<std::string> log_;
};

// ---------------------------------------------------------------------------
// Ballot codes

/// ISO/IEC 7816-4 padding into the fixed RCCA message width.
template <class G>
Bytes frame_payload(ByteView data) {
  constexpr auto width = rcca_layout<G>().message_bytes();
  if (data.size() + 1 > width)
    throw Error(Errc::Malformed, "payload of " + std::to_string(data.size()) +
                                     " bytes exceeds the ballot-code width");
  Bytes out(data.begin(), data.end());
  out.push_back(0x80);
  out.resize(width, 0);
  return out;
}

inline std::optional<Bytes> unframe_payload(ByteView block) {
  auto end = block.size();
  while (end > 0 && block[end - 1] == 0) --end;
  if (end == 0 || block[end - 1] != 0x80) return std::nullopt;
  return Bytes(block.begin(), block.begin() + static_cast<std::ptrdiff_t>(end - 1));
}

/// Compact signatures have a fixed size and may fill the whole block, so
/// they are zero-padded rather than framed.
template <class G>
Bytes signature_payload(ByteView sig) {
  constexpr auto width = rcca_layout<G>().message_bytes();
  if (sig.size() != Signature<G>::kCompactBytes || sig.size() > width)
    throw Error(Errc::Malformed, "signature does not fit the ballot-code width");
  Bytes out(sig.begin(), sig.end());
  out.resize(width, 0);
  return out;
}

template <class G>
std::optional<Bytes> signature_from_payload(ByteView block) {
  constexpr auto n = Signature<G>::kCompactBytes;
  if (block.size() < n) return std::nullopt;
  for (auto i = n; i < block.size(); ++i)
    if (block[i] != 0) return std::nullopt;
  return Bytes(block.begin(), block.begin() + n);
}

/// Signed message: id and election identifier, optionally date and printer.
inline Bytes id_signature_message(std::string_view id, ByteView election_id,
                                  std::string_view extra = {}) {
  Writer w;
  w.string("electryo/ballot-id");
  w.string(id);
  w.bytes(election_id);
  w.string(extra);
  return std::move(w).take();
}

template <class G>
struct BallotCode {
  RccaCiphertext<G> enc_id;
  RccaCiphertext<G> enc_sig;

  /// Printed pairs in a fixed order: id pairs then signature pairs.
  std::vector<Ciphertext<G>> pairs() const {
    auto out = enc_id.pairs();
    auto s = enc_sig.pairs();
    out.insert(out.end(), s.begin(), s.end());
    return out;
  }

  bool operator==(const BallotCode&) const = default;
  auto tie() { return std::tie(enc_id, enc_sig); }
  auto tie() const { return std::tie(enc_id, enc_sig); }
};

inline constexpr std::size_t kQrVersion6Bits = 1088;
inline constexpr std::size_t kQrVersion10Bits = 2192;

struct QrBudget {
  std::size_t id_bits = 0;
  std::size_t sig_bits = 0;
  std::size_t total_bits() const { return id_bits + sig_bits; }
  bool fits() const {
    return id_bits <= kQrVersion6Bits && sig_bits <= kQrVersion6Bits &&
           total_bits() <= kQrVersion10Bits;
  }
};

/// Size of the printed payload when each element uses its compressed
/// encoding. The binding digest is fixed per election and not printed.
template <class G>
QrBudget qr_budget(const BallotCode<G>& code) {
  auto bits = [](const RccaCiphertext<G>& c) {
    return (c.c1.size() + c.c2.size()) * 2 * G::kElementBytes * 8;
  };
  return {bits(code.enc_id), bits(code.enc_sig)};
}

/// The card encrypts the voter's id and a fresh signature on it.
template <class G>
BallotCode<G> card_issue(const VoterCredential<G>& cred, const Element<G>& election_pk,
                         ByteView election_id, std::string_view signature_extra,
                         RandomSource& rng) {
  auto sig = sign<G>(cred.signing, id_signature_message(cred.id, election_id, signature_extra), rng);
  BallotCode<G> code{
      rcca_encrypt<G>(election_pk, frame_payload<G>(to_bytes(cred.id)), election_id, rng),
      rcca_encrypt<G>(election_pk, signature_payload<G>(sig.to_compact()), election_id, rng)};
  if (!qr_budget<G>(code).fits()) throw Error(Errc::Malformed, "ballot code exceeds QR capacity");
  return code;
}

template <class G>
struct PaperBallot {
  BallotCode<G> code;
  std::optional<std::uint32_t> vote;  // 1-based candidate number
  std::uint64_t box_serial = 0;

  auto tie() { return std::tie(code, vote, box_serial); }
  auto tie() const { return std::tie(code, vote, box_serial); }
};

/// The printer only re-randomises; it holds no decryption key.
template <class G>
PaperBallot<G> print_ballot(const BallotCode<G>& card_output, const Element<G>& election_pk,
                            ByteView election_id, RandomSource& rng) {
  if (!rcca_well_formed<G>(card_output.enc_id, election_id) ||
      !rcca_well_formed<G>(card_output.enc_sig, election_id))
    throw Error(Errc::InvalidCardOutput, "card output is not a well-formed ballot code");
  return {{rcca_reencrypt<G>(election_pk, card_output.enc_id, rng),
           rcca_reencrypt<G>(election_pk, card_output.enc_sig, rng)},
          std::nullopt,
          0};
}

// ---------------------------------------------------------------------------
// Scanner

template <class G>
struct ScannerTuple {
  RccaCiphertext<G> enc_id;
  RccaCiphertext<G> enc_sig;
  std::vector<Ciphertext<G>> enc_ballot_code;  // two per printed pair
  Ciphertext<G> enc_vote;
  Ciphertext<G> enc_rc;
  MembershipProof<G> vote_proof;
  PokProof<G> rc_proof;
  ReencLinkProof<G> link_proof;

  std::vector<Ciphertext<G>> published_pairs() const {
    auto out = enc_id.pairs();
    auto s = enc_sig.pairs();
    out.insert(out.end(), s.begin(), s.end());
    return out;
  }

  bool operator==(const ScannerTuple&) const = default;
  auto tie() {
    return std::tie(enc_id, enc_sig, enc_ballot_code, enc_vote, enc_rc, vote_proof, rc_proof,
                    link_proof);
  }
  auto tie() const {
    return std::tie(enc_id, enc_sig, enc_ballot_code, enc_vote, enc_rc, vote_proof, rc_proof,
                    link_proof);
  }
};

namespace detail {

/// Every proof of a tuple is bound to all of the tuple's ciphertexts.
template <class G>
FsContext tuple_context(ByteView election_id, std::string label, const ScannerTuple<G>& t) {
  Hasher h("electryo/scanner-tuple");
  h.absorb_value(t.enc_id).absorb_value(t.enc_sig).absorb_value(t.enc_ballot_code);
  h.absorb_value(t.enc_vote).absorb_value(t.enc_rc);
  auto d = h.digest();
  return {Bytes(election_id.begin(), election_id.end()), std::move(label), Bytes(d.begin(), d.end())};
}

}  // namespace detail

template <class G>
struct ScanResult {
  ScannerTuple<G> tuple;
  ReceiptCode receipt;
};

/// The receipt code is drawn before the vote is looked at, so it cannot
/// depend on it.
template <class G>
ScanResult<G> scan_ballot(const PaperBallot<G>& ballot, const Element<G>& election_pk,
                          ByteView election_id, std::size_t candidates, RandomSource& rng) {
  ScanResult<G> out;
  out.receipt = ReceiptCode::random(rng);
  if (!ballot.vote) throw Error(Errc::UnfilledBallot, "ballot has no vote marked");
  const auto vote = *ballot.vote;
  if (vote < 1 || vote > candidates) throw Error(Errc::ProofGenFailure, "vote outside the candidate list");

  auto& t = out.tuple;
  const auto printed = ballot.code.pairs();
  std::vector<ReencLinkWitness<G>> link;
  std::vector<Ciphertext<G>> published;
  for (const auto& p : printed) {
    ReencLinkWitness<G> w{G::random_scalar(rng), G::random_scalar(rng), G::random_scalar(rng)};
    t.enc_ballot_code.push_back(eg_encrypt<G>(election_pk, p.a, w.enc_a));
    t.enc_ballot_code.push_back(eg_encrypt<G>(election_pk, p.b, w.enc_b));
    published.push_back(eg_reencrypt<G>(election_pk, p, w.reenc));
    link.push_back(w);
  }
  const auto half = ballot.code.enc_id.pairs().size();
  t.enc_id = RccaCiphertext<G>::from_pairs(std::span(published).first(half), ballot.code.enc_id.binding);
  t.enc_sig = RccaCiphertext<G>::from_pairs(std::span(published).subspan(half), ballot.code.enc_sig.binding);

  const auto rv = G::random_scalar(rng);
  const auto rr = G::random_scalar(rng);
  t.enc_vote = eg_encrypt<G>(election_pk, exp_encode<G>(vote), rv);
  t.enc_rc = eg_encrypt<G>(election_pk, rc_message<G>(out.receipt), rr);

  t.vote_proof = prove_membership<G>(election_pk, t.enc_vote, candidate_messages<G>(candidates),
                                     vote - 1, rv, detail::tuple_context(election_id, "ballot-vote", t), rng);
  t.rc_proof = prove_pok<G>(election_pk, t.enc_rc, rr, detail::tuple_context(election_id, "ballot-rc", t), rng);
  t.link_proof = prove_reenc_link<G>(election_pk, published, t.enc_ballot_code, link,
                                     detail::tuple_context(election_id, "ballot-link", t), rng);
  return out;
}

/// The proof bundle of a published tuple, checked by the pipeline before
/// mixing and by any verifier.
template <class G>
bool verify_scanner_tuple(const ScannerTuple<G>& t, const Element<G>& election_pk,
                          ByteView election_id, std::size_t candidates) {
  if (!rcca_well_formed<G>(t.enc_id, election_id) || !rcca_well_formed<G>(t.enc_sig, election_id))
    return false;
  return verify_membership<G>(election_pk, t.enc_vote, candidate_messages<G>(candidates),
                              t.vote_proof, detail::tuple_context(election_id, "ballot-vote", t)) &&
         verify_pok<G>(election_pk, t.enc_rc, t.rc_proof,
                       detail::tuple_context(election_id, "ballot-rc", t)) &&
         verify_reenc_link<G>(election_pk, t.published_pairs(), t.enc_ballot_code, t.link_proof,
                              detail::tuple_context(election_id, "ballot-link", t));
}

// ---------------------------------------------------------------------------
// Tracker retrieval authority

class TrackerRetrievalAuthority {
 public:
  /// Authenticated request from a (possibly coerced) voter; honoured for
  /// the rest of the election.
  void suppress(std::uint32_t voter) { suppressed_.insert(voter); }
  bool suppressed(std::uint32_t voter) const { return suppressed_.contains(voter); }

  auto tie() { return std::tie(suppressed_); }
  auto tie() const { return std::tie(suppressed_); }

 private:
  std::set<std::uint32_t> suppressed_;
};

/// Multiply the tellers' authenticated alpha-shares for one voter. Every
/// teller contributes a factor, so every teller's share is required.
template <class G>
AlphaTerm<G> tra_notify(std::uint32_t voter, const std::vector<AlphaShareRecord<G>>& records,
                        const Element<G>& voter_pk, const std::vector<Element<G>>& teller_vks,
                        ByteView election_id) {
  std::map<std::uint32_t, const AlphaShareRecord<G>*> by_teller;
  for (const auto& r : records) {
    if (r.voter != voter) continue;
    if (r.teller == 0 || r.teller > teller_vks.size() ||
        !verify_alpha_record<G>(r, voter_pk, teller_vks[r.teller - 1], election_id))
      throw Error(Errc::ShareInvalid, "alpha share failed authentication", r.teller);
    by_teller[r.teller] = &r;
  }
  std::vector<AlphaShareRecord<G>> used;
  for (std::uint32_t k = 1; k <= teller_vks.size(); ++k) {
    auto it = by_teller.find(k);
    if (it == by_teller.end()) throw Error(Errc::MissingShare, "no alpha share from teller", k);
    used.push_back(*it->second);
  }
  return {voter, assemble_alpha<G>(used)};
}

}  // namespace electryo
