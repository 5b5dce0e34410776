#pragma once

// NIST P-256 (prime256v1) through OpenSSL. Elements are held as uncompressed
// affine encodings so they are plain values; the EC_POINT form only lives
// for the duration of an operation.

#include <openssl/bn.h>
#include <openssl/ec.h>
#include <openssl/err.h>
#include <openssl/obj_mac.h>

#include <algorithm>
#include <array>
#include <compare>
#include <cstring>
#include <memory>
#include <optional>

#include "electryo/group/group.hpp"
#include "electryo/hash.hpp"

namespace electryo {

namespace detail {

struct BnDeleter {
  void operator()(BIGNUM* b) const { BN_free(b); }
};
struct BnCtxDeleter {
  void operator()(BN_CTX* c) const { BN_CTX_free(c); }
};
struct PointDeleter {
  void operator()(EC_POINT* p) const { EC_POINT_free(p); }
};
struct GroupDeleter {
  void operator()(EC_GROUP* g) const { EC_GROUP_free(g); }
};

using BnPtr = std::unique_ptr<BIGNUM, BnDeleter>;
using PointPtr = std::unique_ptr<EC_POINT, PointDeleter>;

inline BN_CTX* bn_ctx() {
  thread_local std::unique_ptr<BN_CTX, BnCtxDeleter> ctx(BN_CTX_new());
  return ctx.get();
}

inline const EC_GROUP* p256() {
  static const std::unique_ptr<EC_GROUP, GroupDeleter> group(
      EC_GROUP_new_by_curve_name(NID_X9_62_prime256v1));
  return group.get();
}

inline const BIGNUM* p256_order() { return EC_GROUP_get0_order(p256()); }

inline BnPtr bn_from(ByteView be) {
  return BnPtr(BN_bin2bn(be.data(), static_cast<int>(be.size()), nullptr));
}

inline void bn_to(const BIGNUM* bn, std::span<std::uint8_t> out) {
  if (BN_bn2binpad(bn, out.data(), static_cast<int>(out.size())) < 0)
    throw Error(Errc::Malformed, "bignum does not fit");
}

}  // namespace detail

struct P256Group {
  static constexpr std::size_t kScalarBytes = 32;
  static constexpr std::size_t kElementBytes = 33;
  // x = 0x00 || payload(30) || counter
  static constexpr std::size_t kPayloadBytes = 30;
  static constexpr bool kLinearDlog = false;
  static constexpr const char* kName = "p256";

  class Scalar {
   public:
    Scalar() = default;

    bool is_zero() const {
      return std::all_of(v_.begin(), v_.end(), [](auto b) { return b == 0; });
    }

    Scalar operator+(const Scalar& o) const {
      return binop(o, [](BIGNUM* r, const BIGNUM* a, const BIGNUM* b) {
        BN_mod_add(r, a, b, detail::p256_order(), detail::bn_ctx());
      });
    }
    Scalar operator-(const Scalar& o) const {
      return binop(o, [](BIGNUM* r, const BIGNUM* a, const BIGNUM* b) {
        BN_mod_sub(r, a, b, detail::p256_order(), detail::bn_ctx());
      });
    }
    Scalar operator*(const Scalar& o) const {
      return binop(o, [](BIGNUM* r, const BIGNUM* a, const BIGNUM* b) {
        BN_mod_mul(r, a, b, detail::p256_order(), detail::bn_ctx());
      });
    }
    Scalar operator-() const { return Scalar() - *this; }
    Scalar& operator+=(const Scalar& o) { return *this = *this + o; }
    Scalar& operator*=(const Scalar& o) { return *this = *this * o; }

    Scalar inverse() const {
      if (is_zero()) throw Error(Errc::Malformed, "inverse of zero scalar");
      auto a = bn();
      detail::BnPtr r(BN_new());
      BN_mod_inverse(r.get(), a.get(), detail::p256_order(), detail::bn_ctx());
      return from_bn(r.get());
    }

    auto operator<=>(const Scalar&) const = default;

    Bytes to_fixed_bytes() const { return Bytes(v_.begin(), v_.end()); }
    detail::BnPtr bn() const { return detail::bn_from(v_); }

    static Scalar from_bn(const BIGNUM* b) {
      Scalar s;
      detail::bn_to(b, s.v_);
      return s;
    }

    void write(Writer& w) const { w.big_integer(v_); }

    static Scalar read(Reader& r) {
      auto b = r.big_integer();
      if (b.size() > kScalarBytes) throw Error(Errc::Malformed, "scalar too wide");
      auto bn = detail::bn_from(b);
      if (BN_cmp(bn.get(), detail::p256_order()) >= 0)
        throw Error(Errc::Malformed, "scalar not reduced");
      return from_bn(bn.get());
    }

   private:
    template <class Op>
    Scalar binop(const Scalar& o, Op op) const {
      auto a = bn(), b = o.bn();
      detail::BnPtr r(BN_new());
      op(r.get(), a.get(), b.get());
      return from_bn(r.get());
    }

    std::array<std::uint8_t, 32> v_{};
  };

  class Element {
   public:
    Element() { raw_.fill(0); }

    static Element from_point(const EC_POINT* p) {
      Element e;
      if (EC_POINT_is_at_infinity(detail::p256(), p)) return e;
      auto n = EC_POINT_point2oct(detail::p256(), p, POINT_CONVERSION_UNCOMPRESSED, e.raw_.data(),
                                  e.raw_.size(), detail::bn_ctx());
      if (n != e.raw_.size()) throw Error(Errc::Malformed, "point encoding failed");
      return e;
    }

    detail::PointPtr point() const {
      detail::PointPtr p(EC_POINT_new(detail::p256()));
      if (is_identity()) {
        EC_POINT_set_to_infinity(detail::p256(), p.get());
      } else if (EC_POINT_oct2point(detail::p256(), p.get(), raw_.data(), raw_.size(),
                                    detail::bn_ctx()) != 1) {
        throw Error(Errc::Malformed, "invalid point");
      }
      return p;
    }

    bool is_identity() const { return raw_[0] == 0; }

    Element operator*(const Element& o) const {
      auto a = point(), b = o.point();
      detail::PointPtr r(EC_POINT_new(detail::p256()));
      EC_POINT_add(detail::p256(), r.get(), a.get(), b.get(), detail::bn_ctx());
      return from_point(r.get());
    }
    Element operator/(const Element& o) const { return *this * o.inverse(); }
    Element inverse() const {
      auto a = point();
      EC_POINT_invert(detail::p256(), a.get(), detail::bn_ctx());
      return from_point(a.get());
    }
    Element pow(const Scalar& s) const {
      auto a = point();
      auto k = s.bn();
      detail::PointPtr r(EC_POINT_new(detail::p256()));
      EC_POINT_mul(detail::p256(), r.get(), nullptr, a.get(), k.get(), detail::bn_ctx());
      return from_point(r.get());
    }

    auto operator<=>(const Element&) const = default;

    /// Compressed SEC1 encoding; the identity encodes as a single zero byte.
    Bytes to_bytes() const {
      if (is_identity()) return Bytes{0};
      Bytes out(kElementBytes);
      out[0] = static_cast<std::uint8_t>(0x02 | (raw_[64] & 1));
      std::copy(raw_.begin() + 1, raw_.begin() + 33, out.begin() + 1);
      return out;
    }

    std::array<std::uint8_t, 32> x_bytes() const {
      std::array<std::uint8_t, 32> x{};
      std::copy(raw_.begin() + 1, raw_.begin() + 33, x.begin());
      return x;
    }
    bool y_is_odd() const { return (raw_[64] & 1) != 0; }

    void write(Writer& w) const { w.bytes(to_bytes()); }

    static Element read(Reader& r) {
      auto b = r.bytes();
      if (b.size() == 1 && b[0] == 0) return Element();
      if (b.size() != kElementBytes || (b[0] != 0x02 && b[0] != 0x03))
        throw Error(Errc::Malformed, "element encoding");
      detail::PointPtr p(EC_POINT_new(detail::p256()));
      if (EC_POINT_oct2point(detail::p256(), p.get(), b.data(), b.size(), detail::bn_ctx()) != 1)
        throw Error(Errc::Malformed, "point not on curve");
      return from_point(p.get());
    }

   private:
    // raw_[0] == 0 marks the identity; otherwise 0x04 || X || Y.
    std::array<std::uint8_t, 65> raw_;
  };

  static GroupSpec spec() {
    char* dec = BN_bn2dec(detail::p256_order());
    std::string order(dec);
    OPENSSL_free(dec);
    return {kName, order, to_hex(generator().to_bytes()), Backend::ProdGroup};
  }

  static Element generator() {
    static const Element g = Element::from_point(EC_GROUP_get0_generator(detail::p256()));
    return g;
  }
  static Element identity() { return Element(); }

  static Scalar scalar(std::uint64_t v) {
    std::array<std::uint8_t, 8> b{};
    for (int i = 7; i >= 0; --i, v >>= 8) b[i] = static_cast<std::uint8_t>(v & 0xff);
    return reduce(b);
  }

  static Scalar random_scalar(RandomSource& rng) {
    // Rejection sampling over 256-bit strings.
    for (;;) {
      std::array<std::uint8_t, 32> b{};
      rng.fill(b);
      auto bn = detail::bn_from(b);
      if (BN_cmp(bn.get(), detail::p256_order()) < 0) return Scalar::from_bn(bn.get());
    }
  }

  static Scalar reduce(ByteView bytes) {
    auto bn = detail::bn_from(bytes);
    detail::BnPtr r(BN_new());
    BN_nnmod(r.get(), bn.get(), detail::p256_order(), detail::bn_ctx());
    return Scalar::from_bn(r.get());
  }

  static Scalar scalar_from_fixed(ByteView b) {
    if (b.size() != kScalarBytes) throw Error(Errc::Malformed, "scalar width");
    auto bn = detail::bn_from(b);
    if (BN_cmp(bn.get(), detail::p256_order()) >= 0)
      throw Error(Errc::Malformed, "scalar not reduced");
    return Scalar::from_bn(bn.get());
  }

  /// Try-and-increment: the first counter for which 0x00 || chunk || ctr is
  /// the x-coordinate of a curve point; the even-y point is taken.
  static Element embed(ByteView chunk) {
    if (chunk.size() != kPayloadBytes) throw Error(Errc::Malformed, "payload chunk width");
    std::array<std::uint8_t, 32> x{};
    std::copy(chunk.begin(), chunk.end(), x.begin() + 1);
    for (int ctr = 0; ctr < 256; ++ctr) {
      x[31] = static_cast<std::uint8_t>(ctr);
      if (auto e = from_x(x)) return *e;
    }
    throw Error(Errc::Malformed, "no counter value embeds the chunk");
  }

  static std::optional<Bytes> extract(const Element& e) {
    if (e.is_identity() || e.y_is_odd()) return std::nullopt;
    auto x = e.x_bytes();
    if (x[0] != 0) return std::nullopt;
    Bytes chunk(x.begin() + 1, x.begin() + 31);
    if (embed(chunk) != e) return std::nullopt;
    return chunk;
  }

  static Element hash_to_group(ByteView data) {
    for (std::uint64_t ctr = 0;; ++ctr) {
      Hasher h("electryo/p256/h2g");
      h.absorb(data).absorb_value(ctr);
      auto d = h.digest();
      if (auto e = from_x(d)) return *e;
    }
  }

 private:
  static std::optional<Element> from_x(const std::array<std::uint8_t, 32>& x) {
    auto bx = detail::bn_from(x);
    detail::PointPtr p(EC_POINT_new(detail::p256()));
    ERR_set_mark();
    int ok = EC_POINT_set_compressed_coordinates(detail::p256(), p.get(), bx.get(), 0,
                                                 detail::bn_ctx());
    ERR_pop_to_mark();
    if (ok != 1) return std::nullopt;
    return Element::from_point(p.get());
  }
};

}  // namespace electryo
