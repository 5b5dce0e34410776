#pragma once

#include <openssl/evp.h>

#include <array>
#include <cstdint>
#include <memory>
#include <string_view>

#include "electryo/codec.hpp"

namespace electryo {

using Digest = std::array<std::uint8_t, 32>;

namespace detail {

struct MdCtxDeleter {
  void operator()(EVP_MD_CTX* c) const { EVP_MD_CTX_free(c); }
};

}  // namespace detail

/// Incremental hash with a mandatory domain label. Every absorbed item is
/// length-framed so that concatenation ambiguities cannot arise.
class Hasher {
 public:
  enum class Kind { Sha256, Shake256 };

  Hasher(std::string_view domain, Kind kind = Kind::Sha256)
      : ctx_(EVP_MD_CTX_new()), kind_(kind) {
    const EVP_MD* md = kind == Kind::Sha256 ? EVP_sha256() : EVP_shake256();
    if (!ctx_ || EVP_DigestInit_ex(ctx_.get(), md, nullptr) != 1)
      throw Error(Errc::Malformed, "hash initialisation failed");
    Writer w;
    w.string(domain);
    update_raw(w.data());
  }

  Hasher& absorb(ByteView data) {
    Writer w;
    w.bytes(data);
    update_raw(w.data());
    return *this;
  }

  Hasher& absorb(std::string_view s) {
    return absorb(ByteView(reinterpret_cast<const std::uint8_t*>(s.data()), s.size()));
  }

  /// Absorb any canonically encodable value.
  template <class T>
  Hasher& absorb_value(const T& v) {
    return absorb(encode(v));
  }

  Digest digest() {
    if (kind_ != Kind::Sha256) throw Error(Errc::Malformed, "digest() needs a SHA-256 hasher");
    Digest out{};
    unsigned len = 0;
    EVP_DigestFinal_ex(ctx_.get(), out.data(), &len);
    return out;
  }

  Bytes squeeze(std::size_t n) {
    if (kind_ != Kind::Shake256) throw Error(Errc::Malformed, "squeeze() needs a SHAKE hasher");
    Bytes out(n);
    EVP_DigestFinalXOF(ctx_.get(), out.data(), n);
    return out;
  }

 private:
  void update_raw(ByteView b) { EVP_DigestUpdate(ctx_.get(), b.data(), b.size()); }

  std::unique_ptr<EVP_MD_CTX, detail::MdCtxDeleter> ctx_;
  Kind kind_;
};

inline Digest sha256(std::string_view domain, ByteView data) {
  return Hasher(domain).absorb(data).digest();
}

inline Bytes shake256(std::string_view domain, ByteView data, std::size_t n) {
  return Hasher(domain, Hasher::Kind::Shake256).absorb(data).squeeze(n);
}

}  // namespace electryo
