#pragma once

// Proof that published pairs P'_j = (a_j g^s, b_j pk^s) re-encrypt a printed
// code whose elements a_j, b_j are separately encrypted in E = Enc(a_j),
// Enc(b_j). The printed elements cancel in the ratios, so the verifier never
// sees them:
//
//   Ea.a          = g^ra
//   Ea.b / a'_j   = pk^ra * (g^-1)^s
//   Eb.a          = g^rb
//   Eb.b / b'_j   = pk^rb * (pk^-1)^s

#include "electryo/zkp/sigma.hpp"

namespace electryo {

template <class G>
using ReencLinkProof = LinearProof<G>;

/// Witness for one printed pair.
template <class G>
struct ReencLinkWitness {
  Scalar<G> enc_a;   // randomness of Enc(a_j)
  Scalar<G> enc_b;   // randomness of Enc(b_j)
  Scalar<G> reenc;   // re-encryption randomness of P'_j
};

template <class G>
LinearStatement<G> reenc_link_statement(const Element<G>& pk,
                                        const std::vector<Ciphertext<G>>& published,
                                        const std::vector<Ciphertext<G>>& encrypted_code) {
  if (encrypted_code.size() != 2 * published.size())
    throw Error(Errc::Malformed, "encrypted code must hold two ciphertexts per pair");
  using St = LinearStatement<G>;
  St st;
  st.witness_count = static_cast<std::uint32_t>(3 * published.size());
  const auto g = G::generator();
  const auto g_inv = g.inverse();
  const auto pk_inv = pk.inverse();
  for (std::uint32_t j = 0; j < published.size(); ++j) {
    const auto& ea = encrypted_code[2 * j];
    const auto& eb = encrypted_code[2 * j + 1];
    const std::uint32_t ra = 3 * j, rb = 3 * j + 1, s = 3 * j + 2;
    st.add({{g, ra}}, ea.a);
    st.add({{pk, ra}, {g_inv, s}}, ea.b / published[j].a);
    st.add({{g, rb}}, eb.a);
    st.add({{pk, rb}, {pk_inv, s}}, eb.b / published[j].b);
  }
  return st;
}

template <class G>
ReencLinkProof<G> prove_reenc_link(const Element<G>& pk,
                                   const std::vector<Ciphertext<G>>& published,
                                   const std::vector<Ciphertext<G>>& encrypted_code,
                                   const std::vector<ReencLinkWitness<G>>& witness,
                                   const FsContext& ctx, RandomSource& rng) {
  if (witness.size() != published.size())
    throw Error(Errc::ProofGenFailure, "one witness per printed pair required");
  std::vector<Scalar<G>> w;
  for (const auto& x : witness) {
    w.push_back(x.enc_a);
    w.push_back(x.enc_b);
    w.push_back(x.reenc);
  }
  return prove_linear<G>(reenc_link_statement<G>(pk, published, encrypted_code), w, ctx, rng);
}

template <class G>
bool verify_reenc_link(const Element<G>& pk, const std::vector<Ciphertext<G>>& published,
                       const std::vector<Ciphertext<G>>& encrypted_code,
                       const ReencLinkProof<G>& proof, const FsContext& ctx) {
  if (encrypted_code.size() != 2 * published.size()) return false;
  return verify_linear<G>(reenc_link_statement<G>(pk, published, encrypted_code), proof, ctx);
}

}  // namespace electryo
