#pragma once

// Tally tellers: joint-Feldman key generation and the distributed
// construction of the Selene commitments C_i = pk_i^{r_i} g^{n}.

#include "electryo/schnorr.hpp"
#include "electryo/threshold.hpp"

namespace electryo {

// ---------------------------------------------------------------------------
// Key generation

/// One teller's dealing: Feldman commitments A_j = g^{a_j} to its random
/// polynomial f(x) = a_0 + a_1 x + ... and the evaluations f(1..N), the
/// latter sent privately to the recipients.
template <class G>
struct Dealing {
  std::uint32_t dealer = 0;
  std::vector<Element<G>> commitments;
  std::vector<Scalar<G>> shares;  // shares[l-1] = f(l)

  auto tie() { return std::tie(dealer, commitments, shares); }
  auto tie() const { return std::tie(dealer, commitments, shares); }
};

/// Public part of a dealing, posted on the board.
template <class G>
struct DealingCommitments {
  std::uint32_t dealer = 0;
  std::vector<Element<G>> commitments;

  bool operator==(const DealingCommitments&) const = default;
  auto tie() { return std::tie(dealer, commitments); }
  auto tie() const { return std::tie(dealer, commitments); }
};

template <class G>
struct TellerShare {
  std::uint32_t teller = 0;
  Scalar<G> secret_share;
  std::vector<DealingCommitments<G>> public_commitments;

  auto tie() { return std::tie(teller, secret_share, public_commitments); }
  auto tie() const { return std::tie(teller, secret_share, public_commitments); }
};

template <class G>
struct DkgResult {
  Element<G> pk;
  std::vector<TellerShare<G>> shares;
  std::vector<DealingCommitments<G>> commitments;
  std::vector<Element<G>> verification_keys;  // [l-1] = g^{x_l}
};

template <class G>
Dealing<G> deal(std::uint32_t dealer, std::uint32_t n, std::uint32_t t, RandomSource& rng) {
  if (t == 0 || t > n) throw Error(Errc::InvalidConfig, "threshold must satisfy 1 <= t <= N");
  std::vector<Scalar<G>> coeffs;
  for (std::uint32_t j = 0; j < t; ++j) coeffs.push_back(G::random_scalar(rng));
  Dealing<G> d{dealer, {}, {}};
  for (const auto& a : coeffs) d.commitments.push_back(gpow<G>(a));
  for (std::uint32_t l = 1; l <= n; ++l) {
    auto x = G::scalar(l), acc = G::scalar(0);
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * x + *it;
    d.shares.push_back(acc);
  }
  return d;
}

/// prod_j A_j^{l^j}
template <class G>
Element<G> feldman_eval(const std::vector<Element<G>>& commitments, std::uint32_t l) {
  auto acc = G::identity();
  auto power = G::scalar(1);
  for (const auto& a : commitments) {
    acc = acc * a.pow(power);
    power = power * G::scalar(l);
  }
  return acc;
}

template <class G>
bool feldman_verify(const Scalar<G>& share, std::uint32_t recipient,
                    const std::vector<Element<G>>& commitments) {
  return gpow<G>(share) == feldman_eval<G>(commitments, recipient);
}

template <class G>
std::vector<Element<G>> verification_keys(const std::vector<DealingCommitments<G>>& dealings,
                                          std::uint32_t n) {
  std::vector<Element<G>> out;
  for (std::uint32_t l = 1; l <= n; ++l) {
    auto acc = G::identity();
    for (const auto& d : dealings) acc = acc * feldman_eval<G>(d.commitments, l);
    out.push_back(acc);
  }
  return out;
}

template <class G>
Element<G> joint_public_key(const std::vector<DealingCommitments<G>>& dealings) {
  auto acc = G::identity();
  for (const auto& d : dealings) {
    if (d.commitments.empty()) throw Error(Errc::Malformed, "empty dealing", d.dealer);
    acc = acc * d.commitments.front();
  }
  return acc;
}

/// Every recipient checks every received share against the dealer's
/// commitments; the first failure aborts with the dealer's index.
template <class G>
DkgResult<G> aggregate_dealings(const std::vector<Dealing<G>>& dealings, std::uint32_t t) {
  const auto n = static_cast<std::uint32_t>(dealings.size());
  DkgResult<G> out;
  for (const auto& d : dealings) {
    if (d.commitments.size() != t || d.shares.size() != n)
      throw Error(Errc::BadShare, "dealing has the wrong shape", d.dealer);
    for (std::uint32_t l = 1; l <= n; ++l)
      if (!feldman_verify<G>(d.shares[l - 1], l, d.commitments))
        throw Error(Errc::BadShare, "share for teller " + std::to_string(l) + " fails Feldman check",
                    d.dealer);
    out.commitments.push_back({d.dealer, d.commitments});
  }
  out.pk = joint_public_key<G>(out.commitments);
  for (std::uint32_t l = 1; l <= n; ++l) {
    auto x = G::scalar(0);
    for (const auto& d : dealings) x += d.shares[l - 1];
    out.shares.push_back({l, x, out.commitments});
  }
  out.verification_keys = verification_keys<G>(out.commitments, n);
  return out;
}

template <class G>
DkgResult<G> dkg(std::uint32_t n, std::uint32_t t, RandomSource& rng) {
  if (n == 0 || t == 0 || t > n) throw Error(Errc::InvalidConfig, "threshold must satisfy 1 <= t <= N");
  std::vector<Dealing<G>> dealings;
  for (std::uint32_t k = 1; k <= n; ++k) dealings.push_back(deal<G>(k, n, t, rng));
  return aggregate_dealings<G>(dealings, t);
}

/// Test oracle: interpolate the joint secret from at least t shares.
template <class G>
Scalar<G> reconstruct_secret(const std::vector<TellerShare<G>>& shares, std::uint32_t t) {
  if (shares.size() < t)
    throw Error(Errc::InsufficientShares,
                std::to_string(shares.size()) + " of " + std::to_string(t) + " shares");
  std::vector<std::uint32_t> ids;
  for (const auto& s : shares) ids.push_back(s.teller);
  auto x = G::scalar(0);
  for (const auto& s : shares) x += s.secret_share * lagrange_at_zero<G>(s.teller, ids);
  return x;
}

// ---------------------------------------------------------------------------
// Commitment construction

/// Public posting by teller k for voter i: F = Enc_PK(pk_i^{r_{i,k}}; sigma)
/// with a proof that F encrypts a power of pk_i.
template <class G>
struct CommitmentFactor {
  std::uint32_t teller = 0;
  std::uint32_t voter = 0;  // 0-based row index
  Ciphertext<G> factor;
  LinearProof<G> proof;

  bool operator==(const CommitmentFactor&) const = default;
  auto tie() { return std::tie(teller, voter, factor, proof); }
  auto tie() const { return std::tie(teller, voter, factor, proof); }
};

/// Private record kept by teller k; released only to the retrieval authority.
template <class G>
struct AlphaShareRecord {
  std::uint32_t teller = 0;
  std::uint32_t voter = 0;
  Element<G> g_exp_share;        // g^{r_{i,k}}
  Element<G> commitment_factor;  // pk_i^{r_{i,k}}
  DleqProof<G> proof;
  Signature<G> signature;        // by the teller's signing key

  auto tie() { return std::tie(teller, voter, g_exp_share, commitment_factor, proof, signature); }
  auto tie() const {
    return std::tie(teller, voter, g_exp_share, commitment_factor, proof, signature);
  }
};

namespace detail {

template <class G>
LinearStatement<G> factor_statement(const Element<G>& election_pk, const Element<G>& voter_pk,
                                    const Ciphertext<G>& f) {
  LinearStatement<G> st;
  st.witness_count = 2;  // r, sigma
  st.add({{G::generator(), 1}}, f.a);
  st.add({{voter_pk, 0}, {election_pk, 1}}, f.b);
  return st;
}

inline FsContext factor_context(ByteView election_id, std::uint32_t teller, std::uint32_t voter) {
  Writer w;
  w.integer(teller);
  w.integer(voter);
  return {Bytes(election_id.begin(), election_id.end()), "commitment-factor", std::move(w).take()};
}

template <class G>
Bytes alpha_record_message(ByteView election_id, const AlphaShareRecord<G>& r) {
  Writer w;
  w.string("alpha-share");
  w.bytes(election_id);
  w.integer(r.teller);
  w.integer(r.voter);
  put(w, r.g_exp_share);
  put(w, r.commitment_factor);
  put(w, r.proof);
  return std::move(w).take();
}

}  // namespace detail

template <class G>
struct FactorContribution {
  CommitmentFactor<G> posted;
  AlphaShareRecord<G> kept;
};

/// Deterministic core, with the teller's exponent and encryption randomness
/// supplied by the caller.
template <class G>
FactorContribution<G> contribute_alpha_factor(std::uint32_t teller, std::uint32_t voter,
                                              const Element<G>& election_pk,
                                              const Element<G>& voter_pk, const Scalar<G>& r,
                                              const Scalar<G>& sigma, ByteView election_id,
                                              const SigningKeyPair<G>& teller_sig,
                                              RandomSource& rng) {
  FactorContribution<G> out;
  const auto pk_r = voter_pk.pow(r);
  out.posted = {teller, voter, eg_encrypt<G>(election_pk, pk_r, sigma), {}};
  out.posted.proof = prove_linear<G>(
      detail::factor_statement<G>(election_pk, voter_pk, out.posted.factor), {r, sigma},
      detail::factor_context(election_id, teller, voter), rng);
  const auto g_r = gpow<G>(r);
  FsContext ctx{Bytes(election_id.begin(), election_id.end()), "alpha-share", {}};
  out.kept = {teller, voter, g_r, pk_r,
              prove_dleq<G>(G::generator(), g_r, voter_pk, pk_r, r, ctx, rng), {}};
  out.kept.signature = sign<G>(teller_sig, detail::alpha_record_message<G>(election_id, out.kept), rng);
  return out;
}

template <class G>
FactorContribution<G> contribute_alpha_factor(std::uint32_t teller, std::uint32_t voter,
                                              const Element<G>& election_pk,
                                              const Element<G>& voter_pk, ByteView election_id,
                                              const SigningKeyPair<G>& teller_sig,
                                              RandomSource& rng) {
  auto r = G::random_scalar(rng);
  auto sigma = G::random_scalar(rng);
  return contribute_alpha_factor<G>(teller, voter, election_pk, voter_pk, r, sigma, election_id,
                                    teller_sig, rng);
}

template <class G>
bool verify_commitment_factor(const CommitmentFactor<G>& f, const Element<G>& election_pk,
                              const Element<G>& voter_pk, ByteView election_id) {
  return verify_linear<G>(detail::factor_statement<G>(election_pk, voter_pk, f.factor), f.proof,
                          detail::factor_context(election_id, f.teller, f.voter));
}

/// Authenticity and internal consistency of a private α-share as seen by
/// the retrieval authority.
template <class G>
bool verify_alpha_record(const AlphaShareRecord<G>& r, const Element<G>& voter_pk,
                         const Element<G>& teller_vk, ByteView election_id) {
  FsContext ctx{Bytes(election_id.begin(), election_id.end()), "alpha-share", {}};
  return verify_dleq<G>(G::generator(), r.g_exp_share, voter_pk, r.commitment_factor, r.proof,
                        ctx) &&
         verify_sig<G>(teller_vk, detail::alpha_record_message<G>(election_id, r), r.signature);
}

/// Enc(g^n) * prod_k Enc(pk_i^{r_{i,k}}) = Enc(C_i)
template <class G>
Ciphertext<G> combine_commitment(const Ciphertext<G>& enc_tracker,
                                 const std::vector<Ciphertext<G>>& factors) {
  auto acc = enc_tracker;
  for (const auto& f : factors) acc = acc * f;
  return acc;
}

}  // namespace electryo
