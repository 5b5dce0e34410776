#pragma once

// Verifiable threshold decryption: partial decryptions a^{x_k} with a
// Chaum-Pedersen proof against the teller's verification key g^{x_k},
// combined by Lagrange interpolation in the exponent.

#include <algorithm>
#include <set>

#include "electryo/zkp/sigma.hpp"

namespace electryo {

template <class G>
struct DecryptShare {
  std::uint32_t teller = 0;  // 1-based
  Element<G> partial;
  DleqProof<G> proof;

  bool operator==(const DecryptShare&) const = default;
  auto tie() { return std::tie(teller, partial, proof); }
  auto tie() const { return std::tie(teller, partial, proof); }
};

/// Lagrange coefficient at zero for `id` over the index set `ids`.
template <class G>
Scalar<G> lagrange_at_zero(std::uint32_t id, std::span<const std::uint32_t> ids) {
  auto num = G::scalar(1), den = G::scalar(1);
  for (auto m : ids) {
    if (m == id) continue;
    num *= G::scalar(m);
    den *= G::scalar(m) - G::scalar(id);
  }
  return num * den.inverse();
}

inline FsContext decryption_context(ByteView election_id) {
  return {Bytes(election_id.begin(), election_id.end()), "verifiable-decryption", {}};
}

template <class G>
DecryptShare<G> partial_decrypt(std::uint32_t teller, const Scalar<G>& share,
                                const Ciphertext<G>& c, const FsContext& ctx, RandomSource& rng) {
  auto partial = c.a.pow(share);
  return {teller, partial,
          prove_dleq<G>(G::generator(), gpow<G>(share), c.a, partial, share, ctx, rng)};
}

/// `verification_keys[k-1]` is g^{x_k} for teller k.
template <class G>
bool verify_decrypt_share(const Ciphertext<G>& c, const DecryptShare<G>& s,
                          const std::vector<Element<G>>& verification_keys,
                          const FsContext& ctx) {
  if (s.teller == 0 || s.teller > verification_keys.size()) return false;
  return verify_dleq<G>(G::generator(), verification_keys[s.teller - 1], c.a, s.partial, s.proof,
                        ctx);
}

/// Combine exactly the given, already verified shares.
template <class G>
Element<G> combine_verified(const Ciphertext<G>& c, std::span<const DecryptShare<G>> shares) {
  std::vector<std::uint32_t> ids;
  for (const auto& s : shares) ids.push_back(s.teller);
  auto acc = G::identity();
  for (const auto& s : shares) acc = acc * s.partial.pow(lagrange_at_zero<G>(s.teller, ids));
  return c.b / acc;
}

/// Strict combination: every supplied share must verify, and at least
/// `threshold` distinct tellers are required.
template <class G>
Element<G> combine_decrypt(const Ciphertext<G>& c, const std::vector<DecryptShare<G>>& shares,
                           const std::vector<Element<G>>& verification_keys,
                           std::uint32_t threshold, const FsContext& ctx) {
  std::set<std::uint32_t> seen;
  std::vector<DecryptShare<G>> used;
  for (const auto& s : shares) {
    if (!verify_decrypt_share<G>(c, s, verification_keys, ctx))
      throw Error(Errc::ShareProofInvalid, "decryption share proof rejected", s.teller);
    if (seen.insert(s.teller).second && used.size() < threshold) used.push_back(s);
  }
  if (used.size() < threshold)
    throw Error(Errc::InsufficientShares,
                std::to_string(used.size()) + " of " + std::to_string(threshold) + " shares");
  return combine_verified<G>(c, used);
}

/// Verifier-side combination: invalid shares are reported and skipped; the
/// plaintext is produced if enough valid shares remain.
template <class G>
struct CombineOutcome {
  std::optional<Element<G>> plaintext;
  std::vector<std::uint32_t> invalid_tellers;
};

template <class G>
CombineOutcome<G> combine_lenient(const Ciphertext<G>& c,
                                  const std::vector<DecryptShare<G>>& shares,
                                  const std::vector<Element<G>>& verification_keys,
                                  std::uint32_t threshold, const FsContext& ctx) {
  CombineOutcome<G> out;
  std::set<std::uint32_t> seen;
  std::vector<DecryptShare<G>> used;
  for (const auto& s : shares) {
    if (!verify_decrypt_share<G>(c, s, verification_keys, ctx)) {
      out.invalid_tellers.push_back(s.teller);
      continue;
    }
    if (seen.insert(s.teller).second && used.size() < threshold) used.push_back(s);
  }
  if (used.size() >= threshold) out.plaintext = combine_verified<G>(c, used);
  return out;
}

}  // namespace electryo
