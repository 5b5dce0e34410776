#pragma once

#include <string>

#include "electryo/group/group.hpp"
#include "electryo/hash.hpp"

namespace electryo {

/// Strong Fiat-Shamir context: the challenge covers the election identifier,
/// the protocol phase, the complete statement and every prover commitment.
struct FsContext {
  Bytes election_id;
  std::string phase_label;
  Bytes statement;

  FsContext with_statement(Bytes s) const { return {election_id, phase_label, std::move(s)}; }

  auto tie() { return std::tie(election_id, phase_label, statement); }
  auto tie() const { return std::tie(election_id, phase_label, statement); }
};

template <class G>
Scalar<G> fs_challenge(const FsContext& ctx, std::span<const Element<G>> commitments) {
  Hasher h("electryo/fiat-shamir", Hasher::Kind::Shake256);
  h.absorb(ctx.election_id).absorb(ctx.phase_label).absorb(ctx.statement);
  h.absorb_value(std::vector<Element<G>>(commitments.begin(), commitments.end()));
  return G::reduce(h.squeeze(G::kScalarBytes + 16));
}

/// Deterministic stream of scalars derived from a seed digest; used for
/// the per-row challenge vector of the shuffle argument.
template <class G>
std::vector<Scalar<G>> fs_scalar_vector(const FsContext& ctx, std::string_view label,
                                        std::size_t n) {
  Hasher h("electryo/fiat-shamir/vector", Hasher::Kind::Shake256);
  h.absorb(ctx.election_id).absorb(ctx.phase_label).absorb(ctx.statement).absorb(label);
  const auto width = G::kScalarBytes + 16;
  auto stream = h.squeeze(width * n);
  std::vector<Scalar<G>> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i)
    out.push_back(G::reduce(ByteView(stream).subspan(i * width, width)));
  return out;
}

}  // namespace electryo
