#pragma once

// Tracker lifecycle: publication, mixing into per-voter encrypted trackers,
// and the voter-side opening of (alpha, C_i) including fake openings.

#include "electryo/mixnet.hpp"
#include "electryo/tellers.hpp"

namespace electryo {

template <class G>
struct TrackerSet {
  std::vector<std::uint64_t> trackers;
  std::vector<Element<G>> encoded;  // g^{n}
};

template <class G>
TrackerSet<G> setup_trackers(std::size_t n) {
  if (n < 2) throw Error(Errc::InvalidConfig, "at least two trackers are needed");
  TrackerSet<G> set;
  for (std::uint64_t i = 1; i <= n; ++i) {
    set.trackers.push_back(i);
    set.encoded.push_back(exp_encode<G>(i));
  }
  return set;
}

/// Publicly recomputable starting batch: trivial encryptions (1, g^{n}).
template <class G>
MixBatch<G> tracker_batch(const std::vector<std::uint64_t>& trackers) {
  MixBatch<G> b;
  b.slots = {SlotSpec{SlotKind::Plain, 1}};
  for (auto n : trackers) b.rows.push_back({Ciphertext<G>{G::identity(), exp_encode<G>(n)}});
  return b;
}

/// Mix the published trackers; row i of the final batch becomes voter i's
/// encrypted tracker.
template <class G>
CascadeResult<G> assign_trackers(const TrackerSet<G>& set, std::size_t voters,
                                 const Element<G>& election_pk, std::uint32_t servers,
                                 const FsContext& ctx, RandomSource& rng) {
  if (set.trackers.size() < voters)
    throw Error(Errc::InvalidConfig, "fewer trackers than voters");
  return run_cascade<G>(tracker_batch<G>(set.trackers), servers, {election_pk}, ctx, rng);
}

template <class G>
struct AlphaTerm {
  std::uint32_t voter = 0;
  Element<G> alpha;

  bool operator==(const AlphaTerm&) const = default;
  auto tie() { return std::tie(voter, alpha); }
  auto tie() const { return std::tie(voter, alpha); }
};

/// Open (alpha, C) with the voter's trapdoor key. Nothing about the origin
/// of alpha is consulted: any alpha opening to a valid tracker is accepted.
template <class G>
std::uint64_t retrieve_tracker(const Scalar<G>& sk, const Element<G>& alpha,
                               const Element<G>& commitment, std::uint64_t max_n) {
  return exp_decode<G>(commitment / alpha.pow(sk), max_n);
}

/// alpha' = (C g^{-n'})^{1/sk}, which opens C to n'.
template <class G>
AlphaTerm<G> fake_alpha(std::uint32_t voter, const Scalar<G>& sk, const Element<G>& commitment,
                        std::uint64_t target, std::uint64_t max_n) {
  if (sk.is_zero()) throw Error(Errc::InvalidConfig, "trapdoor key must be non-zero");
  if (target < 1 || target > max_n) throw Error(Errc::NotInRange, "target tracker out of range");
  return {voter, (commitment / exp_encode<G>(target)).pow(sk.inverse())};
}

/// alpha_i = prod_k g^{r_{i,k}}
template <class G>
Element<G> assemble_alpha(const std::vector<AlphaShareRecord<G>>& records) {
  auto acc = G::identity();
  for (const auto& r : records) acc = acc * r.g_exp_share;
  return acc;
}

}  // namespace electryo
