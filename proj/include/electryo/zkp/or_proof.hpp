#pragma once

// Disjunctive Chaum-Pedersen proof that an ElGamal ciphertext encrypts one
// of a public list of messages (the vote message space g^1 .. g^K).

#include "electryo/zkp/sigma.hpp"

namespace electryo {

template <class G>
struct MembershipProof {
  std::vector<Element<G>> commitments_a;
  std::vector<Element<G>> commitments_b;
  std::vector<Scalar<G>> challenges;
  std::vector<Scalar<G>> responses;

  bool operator==(const MembershipProof&) const = default;
  auto tie() { return std::tie(commitments_a, commitments_b, challenges, responses); }
  auto tie() const { return std::tie(commitments_a, commitments_b, challenges, responses); }
};

/// g^1 .. g^count
template <class G>
std::vector<Element<G>> candidate_messages(std::size_t count) {
  std::vector<Element<G>> out;
  for (std::size_t j = 1; j <= count; ++j) out.push_back(exp_encode<G>(j));
  return out;
}

namespace detail {

template <class G>
Bytes membership_statement(const Element<G>& pk, const Ciphertext<G>& c,
                           const std::vector<Element<G>>& messages, ByteView extra) {
  Writer w;
  w.string("membership");
  put(w, pk);
  put(w, c);
  put(w, messages);
  w.bytes(extra);
  return std::move(w).take();
}

template <class G>
std::vector<Element<G>> concat(const std::vector<Element<G>>& a, const std::vector<Element<G>>& b) {
  std::vector<Element<G>> out(a);
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

}  // namespace detail

/// `index` is the position of the encrypted message in `messages`.
template <class G>
MembershipProof<G> prove_membership(const Element<G>& pk, const Ciphertext<G>& c,
                                    const std::vector<Element<G>>& messages, std::size_t index,
                                    const Scalar<G>& r, const FsContext& ctx, RandomSource& rng) {
  const auto n = messages.size();
  if (index >= n) throw Error(Errc::ProofGenFailure, "message index outside the message space");
  const auto g = G::generator();
  MembershipProof<G> p;
  p.commitments_a.resize(n);
  p.commitments_b.resize(n);
  p.challenges.resize(n);
  p.responses.resize(n);
  auto w = G::random_scalar(rng);
  for (std::size_t j = 0; j < n; ++j) {
    if (j == index) {
      p.commitments_a[j] = g.pow(w);
      p.commitments_b[j] = pk.pow(w);
    } else {
      p.challenges[j] = G::random_scalar(rng);
      p.responses[j] = G::random_scalar(rng);
      p.commitments_a[j] = g.pow(p.responses[j]) / c.a.pow(p.challenges[j]);
      p.commitments_b[j] = pk.pow(p.responses[j]) / (c.b / messages[j]).pow(p.challenges[j]);
    }
  }
  auto full = ctx.with_statement(detail::membership_statement<G>(pk, c, messages, ctx.statement));
  auto e = fs_challenge<G>(full, detail::concat<G>(p.commitments_a, p.commitments_b));
  auto rest = G::scalar(0);
  for (std::size_t j = 0; j < n; ++j)
    if (j != index) rest += p.challenges[j];
  p.challenges[index] = e - rest;
  p.responses[index] = w + p.challenges[index] * r;
  return p;
}

template <class G>
bool verify_membership(const Element<G>& pk, const Ciphertext<G>& c,
                       const std::vector<Element<G>>& messages, const MembershipProof<G>& p,
                       const FsContext& ctx) {
  const auto n = messages.size();
  if (n == 0 || p.commitments_a.size() != n || p.commitments_b.size() != n ||
      p.challenges.size() != n || p.responses.size() != n)
    return false;
  auto full = ctx.with_statement(detail::membership_statement<G>(pk, c, messages, ctx.statement));
  auto e = fs_challenge<G>(full, detail::concat<G>(p.commitments_a, p.commitments_b));
  auto sum = G::scalar(0);
  for (const auto& cj : p.challenges) sum += cj;
  if (sum != e) return false;
  const auto g = G::generator();
  for (std::size_t j = 0; j < n; ++j) {
    if (g.pow(p.responses[j]) != p.commitments_a[j] * c.a.pow(p.challenges[j])) return false;
    if (pk.pow(p.responses[j]) != p.commitments_b[j] * (c.b / messages[j]).pow(p.challenges[j]))
      return false;
  }
  return true;
}

}  // namespace electryo
