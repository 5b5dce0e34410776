#pragma once

// Schnorr signatures over the election group, with a short (at most 128-bit)
// challenge so that a signature fits a single RCCA plaintext block.

#include <algorithm>

#include "electryo/group/group.hpp"
#include "electryo/hash.hpp"

namespace electryo {

template <class G>
struct SigningKeyPair {
  Element<G> vk;
  Scalar<G> sigk;

  auto tie() { return std::tie(vk, sigk); }
  auto tie() const { return std::tie(vk, sigk); }
};

template <class G>
struct Signature {
  Scalar<G> challenge;
  Scalar<G> response;

  static constexpr std::size_t kChallengeBytes = std::min<std::size_t>(16, G::kScalarBytes);
  static constexpr std::size_t kCompactBytes = kChallengeBytes + G::kScalarBytes;

  /// Fixed-width form carried inside the ballot code.
  Bytes to_compact() const {
    auto c = challenge.to_fixed_bytes();
    Bytes out(c.end() - kChallengeBytes, c.end());
    auto r = response.to_fixed_bytes();
    out.insert(out.end(), r.begin(), r.end());
    return out;
  }

  static std::optional<Signature> from_compact(ByteView b) {
    if (b.size() < kCompactBytes) return std::nullopt;
    try {
      Bytes c(G::kScalarBytes, 0);
      std::copy(b.begin(), b.begin() + kChallengeBytes, c.end() - kChallengeBytes);
      return Signature{G::scalar_from_fixed(c),
                       G::scalar_from_fixed(b.subspan(kChallengeBytes, G::kScalarBytes))};
    } catch (const Error&) {
      return std::nullopt;
    }
  }

  bool operator==(const Signature&) const = default;

  auto tie() { return std::tie(challenge, response); }
  auto tie() const { return std::tie(challenge, response); }
};

namespace detail {

template <class G>
Scalar<G> signature_challenge(const Element<G>& commitment, const Element<G>& vk, ByteView msg) {
  Hasher h("electryo/schnorr-signature");
  h.absorb_value(commitment).absorb_value(vk).absorb(msg);
  auto d = h.digest();
  return G::reduce(ByteView(d).first(Signature<G>::kChallengeBytes));
}

}  // namespace detail

template <class G>
SigningKeyPair<G> signing_keygen(RandomSource& rng) {
  auto x = random_nonzero_scalar<G>(rng);
  return {gpow<G>(x), x};
}

template <class G>
Signature<G> sign(const SigningKeyPair<G>& key, ByteView msg, RandomSource& rng) {
  auto k = random_nonzero_scalar<G>(rng);
  auto e = detail::signature_challenge<G>(gpow<G>(k), key.vk, msg);
  return {e, k + e * key.sigk};
}

template <class G>
bool verify_sig(const Element<G>& vk, ByteView msg, const Signature<G>& sig) {
  auto commitment = gpow<G>(sig.response) / vk.pow(sig.challenge);
  return detail::signature_challenge<G>(commitment, vk, msg) == sig.challenge;
}

}  // namespace electryo
