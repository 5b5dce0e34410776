#pragma once

#include <concepts>
#include <cstdint>
#include <optional>
#include <string>

#include "electryo/codec.hpp"
#include "electryo/random.hpp"

namespace electryo {

enum class Backend : std::uint8_t { TestGroup, ProdGroup };

/// Published description of a prime-order group.
struct GroupSpec {
  std::string name;
  std::string order;      // decimal
  std::string generator;  // hex of the canonical element encoding
  Backend backend;
};

/// Requirements on a group backend. Backends are stateless classes exposing
/// an element type, a scalar type (integers mod the group order) and the
/// encoding hooks used by ElGamal message embedding.
template <class G>
concept PrimeOrderGroup = requires(const typename G::Element& e, const typename G::Scalar& s,
                                   RandomSource& rng, ByteView bytes) {
  typename G::Element;
  typename G::Scalar;
  { G::spec() } -> std::same_as<GroupSpec>;
  { G::generator() } -> std::same_as<typename G::Element>;
  { G::identity() } -> std::same_as<typename G::Element>;
  { e * e } -> std::same_as<typename G::Element>;
  { e / e } -> std::same_as<typename G::Element>;
  { e.pow(s) } -> std::same_as<typename G::Element>;
  { e.inverse() } -> std::same_as<typename G::Element>;
  { s + s } -> std::same_as<typename G::Scalar>;
  { s - s } -> std::same_as<typename G::Scalar>;
  { s * s } -> std::same_as<typename G::Scalar>;
  { s.inverse() } -> std::same_as<typename G::Scalar>;
  { G::scalar(std::uint64_t{}) } -> std::same_as<typename G::Scalar>;
  { G::random_scalar(rng) } -> std::same_as<typename G::Scalar>;
  { G::reduce(bytes) } -> std::same_as<typename G::Scalar>;
  { G::embed(bytes) } -> std::same_as<typename G::Element>;
  { G::extract(e) } -> std::same_as<std::optional<Bytes>>;
  { G::hash_to_group(bytes) } -> std::same_as<typename G::Element>;
  { G::kPayloadBytes } -> std::convertible_to<std::size_t>;
  { G::kScalarBytes } -> std::convertible_to<std::size_t>;
};

template <class G>
using Element = typename G::Element;
template <class G>
using Scalar = typename G::Scalar;

/// g^s
template <class G>
Element<G> gpow(const Scalar<G>& s) {
  return G::generator().pow(s);
}

/// Uniform non-zero scalar.
template <class G>
Scalar<G> random_nonzero_scalar(RandomSource& rng) {
  for (;;) {
    auto s = G::random_scalar(rng);
    if (!s.is_zero()) return s;
  }
}

/// Product of bases[i]^exps[i].
template <class G>
Element<G> multi_pow(std::span<const Element<G>> bases, std::span<const Scalar<G>> exps) {
  if (bases.size() != exps.size()) throw Error(Errc::Malformed, "multi_pow size mismatch");
  auto acc = G::identity();
  for (std::size_t i = 0; i < bases.size(); ++i) acc = acc * bases[i].pow(exps[i]);
  return acc;
}

}  // namespace electryo
