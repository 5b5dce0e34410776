#pragma once

// Sigma-protocol building blocks made non-interactive with strong
// Fiat-Shamir: Schnorr knowledge of encryption randomness, Chaum-Pedersen
// discrete-log equality, and a general prover for conjunctions of linear
// relations between group elements.

#include <cstdint>
#include <utility>
#include <vector>

#include "electryo/elgamal.hpp"
#include "electryo/zkp/fiat_shamir.hpp"

namespace electryo {

// ---------------------------------------------------------------------------
// Knowledge of r with c.a = g^r.

template <class G>
struct PokProof {
  Element<G> commitment;
  Scalar<G> challenge;
  Scalar<G> response;

  bool operator==(const PokProof&) const = default;
  auto tie() { return std::tie(commitment, challenge, response); }
  auto tie() const { return std::tie(commitment, challenge, response); }
};

namespace detail {

template <class G>
Bytes pok_statement(const Element<G>& pk, const Ciphertext<G>& c, ByteView extra) {
  Writer w;
  w.string("pok-randomness");
  put(w, pk);
  put(w, c);
  w.bytes(extra);
  return std::move(w).take();
}

}  // namespace detail

/// `ctx.statement` may carry extra binding data (e.g. the enclosing tuple).
template <class G>
PokProof<G> prove_pok(const Element<G>& pk, const Ciphertext<G>& c, const Scalar<G>& r,
                      const FsContext& ctx, RandomSource& rng) {
  auto full = ctx.with_statement(detail::pok_statement<G>(pk, c, ctx.statement));
  auto w = G::random_scalar(rng);
  auto t = gpow<G>(w);
  auto e = fs_challenge<G>(full, std::span<const Element<G>>(&t, 1));
  return {t, e, w + e * r};
}

template <class G>
bool verify_pok(const Element<G>& pk, const Ciphertext<G>& c, const PokProof<G>& proof,
                const FsContext& ctx) {
  auto full = ctx.with_statement(detail::pok_statement<G>(pk, c, ctx.statement));
  auto e = fs_challenge<G>(full, std::span<const Element<G>>(&proof.commitment, 1));
  if (e != proof.challenge) return false;
  return gpow<G>(proof.response) == proof.commitment * c.a.pow(proof.challenge);
}

// ---------------------------------------------------------------------------
// log_g X = log_h Y

template <class G>
struct DleqProof {
  Element<G> commitment_a;
  Element<G> commitment_b;
  Scalar<G> challenge;
  Scalar<G> response;

  bool operator==(const DleqProof&) const = default;
  auto tie() { return std::tie(commitment_a, commitment_b, challenge, response); }
  auto tie() const { return std::tie(commitment_a, commitment_b, challenge, response); }
};

namespace detail {

template <class G>
Bytes dleq_statement(const Element<G>& g, const Element<G>& x, const Element<G>& h,
                     const Element<G>& y, ByteView extra) {
  Writer w;
  w.string("dleq");
  put(w, g);
  put(w, x);
  put(w, h);
  put(w, y);
  w.bytes(extra);
  return std::move(w).take();
}

}  // namespace detail

template <class G>
DleqProof<G> prove_dleq(const Element<G>& g, const Element<G>& x, const Element<G>& h,
                        const Element<G>& y, const Scalar<G>& secret, const FsContext& ctx,
                        RandomSource& rng) {
  auto full = ctx.with_statement(detail::dleq_statement<G>(g, x, h, y, ctx.statement));
  auto w = G::random_scalar(rng);
  std::vector<Element<G>> t{g.pow(w), h.pow(w)};
  auto e = fs_challenge<G>(full, t);
  return {t[0], t[1], e, w + e * secret};
}

template <class G>
bool verify_dleq(const Element<G>& g, const Element<G>& x, const Element<G>& h,
                 const Element<G>& y, const DleqProof<G>& proof, const FsContext& ctx) {
  auto full = ctx.with_statement(detail::dleq_statement<G>(g, x, h, y, ctx.statement));
  std::vector<Element<G>> t{proof.commitment_a, proof.commitment_b};
  if (fs_challenge<G>(full, t) != proof.challenge) return false;
  return g.pow(proof.response) == proof.commitment_a * x.pow(proof.challenge) &&
         h.pow(proof.response) == proof.commitment_b * y.pow(proof.challenge);
}

// ---------------------------------------------------------------------------
// Conjunction of linear relations: image_e = prod_j base_{e,j}^{w[idx_{e,j}]}

template <class G>
struct LinearStatement {
  struct Term {
    Element<G> base;
    std::uint32_t witness;

    auto tie() { return std::tie(base, witness); }
    auto tie() const { return std::tie(base, witness); }
  };
  struct Equation {
    std::vector<Term> terms;
    Element<G> image;

    auto tie() { return std::tie(terms, image); }
    auto tie() const { return std::tie(terms, image); }
  };

  std::uint32_t witness_count = 0;
  std::vector<Equation> equations;

  void add(std::vector<Term> terms, const Element<G>& image) {
    equations.push_back({std::move(terms), image});
  }

  auto tie() { return std::tie(witness_count, equations); }
  auto tie() const { return std::tie(witness_count, equations); }
};

template <class G>
struct LinearProof {
  std::vector<Element<G>> commitments;
  Scalar<G> challenge;
  std::vector<Scalar<G>> responses;

  bool operator==(const LinearProof&) const = default;
  auto tie() { return std::tie(commitments, challenge, responses); }
  auto tie() const { return std::tie(commitments, challenge, responses); }
};

namespace detail {

template <class G>
Bytes linear_statement(const LinearStatement<G>& st, ByteView extra) {
  Writer w;
  w.string("linear");
  put(w, st);
  w.bytes(extra);
  return std::move(w).take();
}

template <class G>
Element<G> evaluate(const typename LinearStatement<G>::Equation& eq,
                    const std::vector<Scalar<G>>& values) {
  auto acc = G::identity();
  for (const auto& t : eq.terms) acc = acc * t.base.pow(values.at(t.witness));
  return acc;
}

}  // namespace detail

template <class G>
LinearProof<G> prove_linear(const LinearStatement<G>& st, const std::vector<Scalar<G>>& witness,
                            const FsContext& ctx, RandomSource& rng) {
  if (witness.size() != st.witness_count)
    throw Error(Errc::ProofGenFailure, "witness count mismatch");
  std::vector<Scalar<G>> nonces;
  for (std::uint32_t i = 0; i < st.witness_count; ++i) nonces.push_back(G::random_scalar(rng));
  LinearProof<G> proof;
  for (const auto& eq : st.equations) proof.commitments.push_back(detail::evaluate<G>(eq, nonces));
  auto full = ctx.with_statement(detail::linear_statement<G>(st, ctx.statement));
  proof.challenge = fs_challenge<G>(full, proof.commitments);
  for (std::uint32_t i = 0; i < st.witness_count; ++i)
    proof.responses.push_back(nonces[i] + proof.challenge * witness[i]);
  return proof;
}

template <class G>
bool verify_linear(const LinearStatement<G>& st, const LinearProof<G>& proof,
                   const FsContext& ctx) {
  if (proof.commitments.size() != st.equations.size() ||
      proof.responses.size() != st.witness_count)
    return false;
  for (const auto& eq : st.equations)
    for (const auto& t : eq.terms)
      if (t.witness >= st.witness_count) return false;
  auto full = ctx.with_statement(detail::linear_statement<G>(st, ctx.statement));
  if (fs_challenge<G>(full, proof.commitments) != proof.challenge) return false;
  for (std::size_t e = 0; e < st.equations.size(); ++e) {
    const auto& eq = st.equations[e];
    if (detail::evaluate<G>(eq, proof.responses) !=
        proof.commitments[e] * eq.image.pow(proof.challenge))
      return false;
  }
  return true;
}

}  // namespace electryo
