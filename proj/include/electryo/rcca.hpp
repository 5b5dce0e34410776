#pragma once

// RCCA-secure ElGamal via the 3-round OAEP transform.
//
//   s = (m || 0^Z) xor F(rho)
//   t = rho xor G(s)
//   u = s xor H(t)
//
// t || u is split into fixed-width chunks, each chunk is embedded as a group
// element, and the elements are ElGamal-encrypted. The first half of the
// elements forms c1, the second half c2. F, G and H are SHAKE256 instances
// keyed by the election identifier. Decryption accepts only if the Z
// redundancy bytes come back as zero, so any mauling other than
// re-encryption of the individual pairs is rejected.

#include <algorithm>
#include <optional>

#include "electryo/elgamal.hpp"
#include "electryo/group/p256_group.hpp"
#include "electryo/group/test_group.hpp"
#include "electryo/hash.hpp"

namespace electryo {

struct RccaLayout {
  std::size_t elements_per_half;
  std::size_t rand_bytes;
  std::size_t redundancy_bytes;
  std::size_t payload_bytes;  // per element

  constexpr std::size_t total_bytes() const { return 2 * elements_per_half * payload_bytes; }
  constexpr std::size_t message_bytes() const {
    return total_bytes() - rand_bytes - redundancy_bytes;
  }
};

template <class G>
constexpr RccaLayout rcca_layout() {
  return {(30 + G::kPayloadBytes - 1) / G::kPayloadBytes, 8, 4, G::kPayloadBytes};
}

// Two elements carry 60 bytes: 48-byte messages, as on a version-6 QR code.
template <>
constexpr RccaLayout rcca_layout<P256Group>() {
  return {1, 8, 4, P256Group::kPayloadBytes};
}

// One byte per element; ten-byte messages hold a short voter id or a
// compact signature.
template <>
constexpr RccaLayout rcca_layout<TestGroup>() {
  return {9, 4, 4, TestGroup::kPayloadBytes};
}

template <class G>
struct RccaCiphertext {
  std::vector<Ciphertext<G>> c1;
  std::vector<Ciphertext<G>> c2;
  Digest binding{};

  /// All pairs, c1 first.
  std::vector<Ciphertext<G>> pairs() const {
    std::vector<Ciphertext<G>> out(c1);
    out.insert(out.end(), c2.begin(), c2.end());
    return out;
  }

  static RccaCiphertext from_pairs(std::span<const Ciphertext<G>> pairs, const Digest& binding) {
    constexpr auto half = rcca_layout<G>().elements_per_half;
    if (pairs.size() != 2 * half) throw Error(Errc::Malformed, "RCCA pair count");
    RccaCiphertext c;
    c.c1.assign(pairs.begin(), pairs.begin() + half);
    c.c2.assign(pairs.begin() + half, pairs.end());
    c.binding = binding;
    return c;
  }

  bool operator==(const RccaCiphertext&) const = default;

  auto tie() { return std::tie(c1, c2, binding); }
  auto tie() const { return std::tie(c1, c2, binding); }
};

inline Digest rcca_binding(ByteView election_id) {
  return sha256("electryo/rcca/binding", election_id);
}

namespace detail {

inline Bytes oaep_round(std::string_view which, ByteView election_id, ByteView in, std::size_t n) {
  Hasher h(std::string("electryo/oaep3/") + std::string(which), Hasher::Kind::Shake256);
  h.absorb(election_id).absorb(in);
  return h.squeeze(n);
}

inline void xor_into(std::span<std::uint8_t> dst, ByteView mask) {
  for (std::size_t i = 0; i < dst.size(); ++i) dst[i] ^= mask[i];
}

}  // namespace detail

/// The padded block t || u for message m (before group embedding).
template <class G>
Bytes oaep3_pad(ByteView m, ByteView election_id, RandomSource& rng) {
  constexpr auto L = rcca_layout<G>();
  if (m.size() > L.message_bytes()) throw Error(Errc::Malformed, "message exceeds RCCA width");
  const auto slen = L.message_bytes() + L.redundancy_bytes;
  Bytes s(slen, 0);
  std::copy(m.begin(), m.end(), s.begin());
  Bytes rho(L.rand_bytes);
  rng.fill(rho);
  detail::xor_into(s, detail::oaep_round("F", election_id, rho, slen));
  Bytes t = rho;
  detail::xor_into(t, detail::oaep_round("G", election_id, s, L.rand_bytes));
  Bytes u = s;
  detail::xor_into(u, detail::oaep_round("H", election_id, t, slen));
  Bytes out = t;
  out.insert(out.end(), u.begin(), u.end());
  return out;
}

/// Inverse of oaep3_pad; nullopt if the redundancy check fails.
template <class G>
std::optional<Bytes> oaep3_unpad(ByteView block, ByteView election_id) {
  constexpr auto L = rcca_layout<G>();
  if (block.size() != L.total_bytes()) return std::nullopt;
  const auto slen = L.message_bytes() + L.redundancy_bytes;
  Bytes t(block.begin(), block.begin() + L.rand_bytes);
  Bytes s(block.begin() + L.rand_bytes, block.end());
  detail::xor_into(s, detail::oaep_round("H", election_id, t, slen));
  Bytes rho = t;
  detail::xor_into(rho, detail::oaep_round("G", election_id, s, L.rand_bytes));
  detail::xor_into(s, detail::oaep_round("F", election_id, rho, slen));
  if (!std::all_of(s.begin() + L.message_bytes(), s.end(), [](auto b) { return b == 0; }))
    return std::nullopt;
  s.resize(L.message_bytes());
  return s;
}

/// Recover the message from decrypted plaintext elements (c1 then c2). Pure
/// and public: used both by key holders and by verifiers working from
/// threshold decryptions.
template <class G>
std::optional<Bytes> rcca_decode(std::span<const Element<G>> elements, ByteView election_id) {
  constexpr auto L = rcca_layout<G>();
  if (elements.size() != 2 * L.elements_per_half) return std::nullopt;
  Bytes block;
  block.reserve(L.total_bytes());
  for (const auto& e : elements) {
    auto chunk = G::extract(e);
    if (!chunk) return std::nullopt;
    block.insert(block.end(), chunk->begin(), chunk->end());
  }
  return oaep3_unpad<G>(block, election_id);
}

/// Encrypt a message of at most `rcca_layout<G>().message_bytes()` bytes;
/// shorter messages are zero-padded to the full width.
template <class G>
RccaCiphertext<G> rcca_encrypt(const Element<G>& pk, ByteView m, ByteView election_id,
                               RandomSource& rng) {
  constexpr auto L = rcca_layout<G>();
  auto block = oaep3_pad<G>(m, election_id, rng);
  std::vector<Ciphertext<G>> pairs;
  pairs.reserve(2 * L.elements_per_half);
  for (std::size_t i = 0; i < 2 * L.elements_per_half; ++i) {
    auto chunk = ByteView(block).subspan(i * L.payload_bytes, L.payload_bytes);
    pairs.push_back(eg_encrypt<G>(pk, G::embed(chunk), rng));
  }
  return RccaCiphertext<G>::from_pairs(pairs, rcca_binding(election_id));
}

template <class G>
RccaCiphertext<G> rcca_reencrypt(const Element<G>& pk, const RccaCiphertext<G>& c,
                                 RandomSource& rng) {
  RccaCiphertext<G> out = c;
  for (auto& p : out.c1) p = eg_reencrypt<G>(pk, p, rng);
  for (auto& p : out.c2) p = eg_reencrypt<G>(pk, p, rng);
  return out;
}

/// Structural validity: pair counts and binding for this election.
template <class G>
bool rcca_well_formed(const RccaCiphertext<G>& c, ByteView election_id) {
  constexpr auto L = rcca_layout<G>();
  return c.c1.size() == L.elements_per_half && c.c2.size() == L.elements_per_half &&
         c.binding == rcca_binding(election_id);
}

/// Returns the full-width message block; throws InvalidCiphertext on any
/// failed check.
template <class G>
Bytes rcca_decrypt(const Scalar<G>& sk, const RccaCiphertext<G>& c, ByteView election_id) {
  if (!rcca_well_formed<G>(c, election_id))
    throw Error(Errc::InvalidCiphertext, "RCCA ciphertext malformed or bound to another election");
  std::vector<Element<G>> elements;
  for (const auto& p : c.pairs()) elements.push_back(eg_decrypt<G>(sk, p));
  auto m = rcca_decode<G>(elements, election_id);
  if (!m) throw Error(Errc::InvalidCiphertext, "OAEP consistency check failed");
  return *m;
}

}  // namespace electryo
