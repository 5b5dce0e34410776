#pragma once

#include <openssl/rand.h>

#include <cstdint>
#include <span>
#include <string_view>

#include "electryo/hash.hpp"

namespace electryo {

/// Source of randomness injected into every protocol operation.
class RandomSource {
 public:
  virtual ~RandomSource() = default;
  virtual void fill(std::span<std::uint8_t> out) = 0;

  std::uint64_t next_u64() {
    std::uint8_t b[8];
    fill(b);
    std::uint64_t v = 0;
    for (auto x : b) v = v << 8 | x;
    return v;
  }

  /// Uniform integer in [0, bound).
  std::uint64_t uniform(std::uint64_t bound) {
    if (bound == 0) throw Error(Errc::Malformed, "uniform() with empty range");
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    for (;;) {
      auto v = next_u64();
      if (v < limit) return v % bound;
    }
  }
};

/// Deterministic generator: SHA-256 in counter mode over a seed. Child
/// streams derived with `fork` are independent of the parent's position,
/// so adding draws in one role never shifts another role's stream.
class SeededRng final : public RandomSource {
 public:
  explicit SeededRng(ByteView seed) : key_(sha256("electryo/rng/seed", seed)) {}

  explicit SeededRng(std::uint64_t seed) : SeededRng(encode(seed)) {}

  SeededRng fork(std::string_view label) const {
    Hasher h("electryo/rng/fork");
    h.absorb(key_).absorb(label);
    auto d = h.digest();
    return SeededRng(d, 0);
  }

  void fill(std::span<std::uint8_t> out) override {
    for (auto& b : out) {
      if (used_ == block_.size()) refill();
      b = block_[used_++];
    }
  }

 private:
  SeededRng(const Digest& key, int) : key_(key) {}

  void refill() {
    Hasher h("electryo/rng/block");
    h.absorb(key_).absorb_value(counter_++);
    block_ = h.digest();
    used_ = 0;
  }

  Digest key_;
  Digest block_{};
  std::size_t used_ = block_.size();
  std::uint64_t counter_ = 0;
};

/// Operating-system randomness for interactive use.
class SystemRng final : public RandomSource {
 public:
  void fill(std::span<std::uint8_t> out) override {
    if (RAND_bytes(out.data(), static_cast<int>(out.size())) != 1)
      throw Error(Errc::Malformed, "RAND_bytes failed");
  }
};

}  // namespace electryo
