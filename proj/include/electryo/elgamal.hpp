#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <unordered_map>

#include "electryo/group/group.hpp"

namespace electryo {

template <class G>
struct ElGamalKeyPair {
  Element<G> pk;
  Scalar<G> sk;

  auto tie() { return std::tie(pk, sk); }
  auto tie() const { return std::tie(pk, sk); }
};

/// (a, b) = (g^r, m * pk^r)
template <class G>
struct Ciphertext {
  Element<G> a = G::identity();
  Element<G> b = G::identity();

  Ciphertext operator*(const Ciphertext& o) const { return {a * o.a, b * o.b}; }
  Ciphertext operator/(const Ciphertext& o) const { return {a / o.a, b / o.b}; }
  Ciphertext pow(const Scalar<G>& s) const { return {a.pow(s), b.pow(s)}; }
  bool operator==(const Ciphertext&) const = default;
  auto operator<=>(const Ciphertext&) const = default;

  auto tie() { return std::tie(a, b); }
  auto tie() const { return std::tie(a, b); }
};

template <class G>
ElGamalKeyPair<G> keygen(RandomSource& rng) {
  auto sk = random_nonzero_scalar<G>(rng);
  return {gpow<G>(sk), sk};
}

template <class G>
ElGamalKeyPair<G> keypair_from_secret(const Scalar<G>& sk) {
  return {gpow<G>(sk), sk};
}

template <class G>
Ciphertext<G> eg_encrypt(const Element<G>& pk, const Element<G>& m, const Scalar<G>& r) {
  return {gpow<G>(r), m * pk.pow(r)};
}

template <class G>
Ciphertext<G> eg_encrypt(const Element<G>& pk, const Element<G>& m, RandomSource& rng) {
  return eg_encrypt<G>(pk, m, G::random_scalar(rng));
}

template <class G>
Element<G> eg_decrypt(const Scalar<G>& sk, const Ciphertext<G>& c) {
  return c.b / c.a.pow(sk);
}

template <class G>
Ciphertext<G> eg_reencrypt(const Element<G>& pk, const Ciphertext<G>& c, const Scalar<G>& s) {
  return {c.a * gpow<G>(s), c.b * pk.pow(s)};
}

template <class G>
Ciphertext<G> eg_reencrypt(const Element<G>& pk, const Ciphertext<G>& c, RandomSource& rng) {
  return eg_reencrypt<G>(pk, c, G::random_scalar(rng));
}

/// g^n
template <class G>
Element<G> exp_encode(std::uint64_t n) {
  return gpow<G>(G::scalar(n));
}

namespace detail {

template <class G>
std::string element_key(const Element<G>& e) {
  auto b = e.to_bytes();
  return std::string(b.begin(), b.end());
}

}  // namespace detail

/// Bounded discrete log by linear scan over 1..maxN.
template <class G>
std::uint64_t exp_decode_linear(const Element<G>& m, std::uint64_t max_n) {
  const auto g = G::generator();
  auto acc = g;
  for (std::uint64_t n = 1; n <= max_n; ++n, acc = acc * g)
    if (acc == m) return n;
  throw Error(Errc::NotInRange, "no exponent in [1, " + std::to_string(max_n) + "] matches");
}

/// Bounded discrete log by baby-step giant-step over 1..maxN.
template <class G>
std::uint64_t exp_decode_bsgs(const Element<G>& m, std::uint64_t max_n) {
  if (max_n == 0) throw Error(Errc::NotInRange, "empty range");
  const auto step = static_cast<std::uint64_t>(std::ceil(std::sqrt(static_cast<double>(max_n))));
  const auto g = G::generator();
  std::unordered_map<std::string, std::uint64_t> baby;
  baby.reserve(step);
  auto acc = G::identity();
  for (std::uint64_t j = 0; j < step; ++j, acc = acc * g) baby.emplace(detail::element_key<G>(acc), j);
  // m * g^{-i*step} for i = 0.. ; hit at baby j means n = i*step + j.
  const auto giant = gpow<G>(G::scalar(step)).inverse();
  auto cur = m;
  for (std::uint64_t i = 0; i * step <= max_n; ++i, cur = cur * giant) {
    auto it = baby.find(detail::element_key<G>(cur));
    if (it != baby.end()) {
      auto n = i * step + it->second;
      if (n >= 1 && n <= max_n) return n;
    }
  }
  throw Error(Errc::NotInRange, "no exponent in [1, " + std::to_string(max_n) + "] matches");
}

template <class G>
std::uint64_t exp_decode(const Element<G>& m, std::uint64_t max_n) {
  if constexpr (G::kLinearDlog)
    return exp_decode_linear<G>(m, max_n);
  else
    return exp_decode_bsgs<G>(m, max_n);
}

}  // namespace electryo
