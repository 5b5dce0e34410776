#pragma once

// Plaintext equivalence test. Each participating teller raises the ratio
// c1/c2 to a fresh secret z_k, publishes g^{z_k} and proves the same
// exponent was used on both ratio components. The product of the blinded
// ratios is then threshold-decrypted: it opens to the identity exactly when
// the plaintexts agree, and to a uniformly blinded element otherwise.

#include <set>

#include "electryo/threshold.hpp"

namespace electryo {

template <class G>
struct PetShare {
  std::uint32_t teller = 0;
  Element<G> commitment;         // g^{z_k}
  Ciphertext<G> blinded_ratio;   // (c1/c2)^{z_k}
  LinearProof<G> proof;

  bool operator==(const PetShare&) const = default;
  auto tie() { return std::tie(teller, commitment, blinded_ratio, proof); }
  auto tie() const { return std::tie(teller, commitment, blinded_ratio, proof); }
};

/// Everything a verifier needs to re-check one test.
template <class G>
struct PetRecord {
  Ciphertext<G> left;
  Ciphertext<G> right;
  std::vector<PetShare<G>> blinding;
  std::vector<DecryptShare<G>> decryption;
  bool equal = false;

  auto tie() { return std::tie(left, right, blinding, decryption, equal); }
  auto tie() const { return std::tie(left, right, blinding, decryption, equal); }
};

namespace detail {

template <class G>
LinearStatement<G> pet_statement(const Ciphertext<G>& ratio, const PetShare<G>& s) {
  LinearStatement<G> st;
  st.witness_count = 1;
  st.add({{G::generator(), 0}}, s.commitment);
  st.add({{ratio.a, 0}}, s.blinded_ratio.a);
  st.add({{ratio.b, 0}}, s.blinded_ratio.b);
  return st;
}

template <class G>
FsContext pet_share_context(const FsContext& ctx, std::uint32_t teller) {
  Writer w;
  w.string("pet-blinding");
  w.integer(teller);
  w.bytes(ctx.statement);
  return ctx.with_statement(std::move(w).take());
}

}  // namespace detail

template <class G>
PetShare<G> pet_contribute(std::uint32_t teller, const Ciphertext<G>& c1, const Ciphertext<G>& c2,
                           const FsContext& ctx, RandomSource& rng) {
  const auto ratio = c1 / c2;
  const auto z = random_nonzero_scalar<G>(rng);
  PetShare<G> s{teller, gpow<G>(z), ratio.pow(z), {}};
  s.proof = prove_linear<G>(detail::pet_statement<G>(ratio, s), {z},
                            detail::pet_share_context<G>(ctx, teller), rng);
  return s;
}

template <class G>
bool verify_pet_share(const Ciphertext<G>& c1, const Ciphertext<G>& c2, const PetShare<G>& s,
                      const FsContext& ctx) {
  if (s.commitment.is_identity()) return false;
  return verify_linear<G>(detail::pet_statement<G>(c1 / c2, s), s.proof,
                          detail::pet_share_context<G>(ctx, s.teller));
}

/// Product of the blinded ratios after checking every share and the
/// threshold; this is the ciphertext the tellers decrypt.
template <class G>
Ciphertext<G> pet_blinded_product(const Ciphertext<G>& c1, const Ciphertext<G>& c2,
                                  const std::vector<PetShare<G>>& shares, std::uint32_t threshold,
                                  const FsContext& ctx) {
  std::set<std::uint32_t> seen;
  Ciphertext<G> acc;
  for (const auto& s : shares) {
    if (!verify_pet_share<G>(c1, c2, s, ctx))
      throw Error(Errc::ShareInvalid, "PET blinding proof rejected", s.teller);
    if (!seen.insert(s.teller).second)
      throw Error(Errc::ShareInvalid, "duplicate PET share", s.teller);
    acc = acc * s.blinded_ratio;
  }
  if (seen.size() < threshold)
    throw Error(Errc::InsufficientShares,
                std::to_string(seen.size()) + " of " + std::to_string(threshold) + " PET shares");
  return acc;
}

template <class G>
bool pet_combine(const Ciphertext<G>& c1, const Ciphertext<G>& c2,
                 const std::vector<PetShare<G>>& shares,
                 const std::vector<DecryptShare<G>>& decrypt_shares,
                 const std::vector<Element<G>>& verification_keys, std::uint32_t threshold,
                 const FsContext& ctx) {
  auto blinded = pet_blinded_product<G>(c1, c2, shares, threshold, ctx);
  return combine_decrypt<G>(blinded, decrypt_shares, verification_keys, threshold, ctx)
      .is_identity();
}

/// Re-check a logged test end to end.
template <class G>
bool verify_pet_record(const PetRecord<G>& rec, const std::vector<Element<G>>& verification_keys,
                       std::uint32_t threshold, const FsContext& ctx) {
  try {
    return pet_combine<G>(rec.left, rec.right, rec.blinding, rec.decryption, verification_keys,
                          threshold, ctx) == rec.equal;
  } catch (const Error&) {
    return false;
  }
}

}  // namespace electryo
