#pragma once

// Canonical byte encoding shared by hashing, the bulletin board and all
// on-disk files.
//
//   integer  : u8 length, then minimal big-endian magnitude (0 -> length 0)
//   bytes    : u32 big-endian length, then the bytes
//   vector   : integer count, then each item
//   optional : u8 presence flag, then the item
//   struct   : fields in `tie()` order
//
// Decoding rejects non-minimal integers and trailing data, so every value
// has exactly one encoding.

#include <array>
#include <concepts>
#include <cstdint>
#include <cstring>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <tuple>
#include <type_traits>
#include <vector>

#include "electryo/error.hpp"

namespace electryo {

using Bytes = std::vector<std::uint8_t>;
using ByteView = std::span<const std::uint8_t>;

inline Bytes to_bytes(std::string_view s) { return Bytes(s.begin(), s.end()); }
inline std::string to_string(ByteView b) { return std::string(b.begin(), b.end()); }

inline std::string to_hex(ByteView b) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  out.reserve(b.size() * 2);
  for (auto v : b) {
    out.push_back(kDigits[v >> 4]);
    out.push_back(kDigits[v & 0xf]);
  }
  return out;
}

inline Bytes from_hex(std::string_view s) {
  auto nibble = [](char c) -> int {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
  };
  if (s.size() % 2 != 0) throw Error(Errc::Malformed, "odd-length hex string");
  Bytes out(s.size() / 2);
  for (std::size_t i = 0; i < out.size(); ++i) {
    int hi = nibble(s[2 * i]), lo = nibble(s[2 * i + 1]);
    if (hi < 0 || lo < 0) throw Error(Errc::Malformed, "invalid hex digit");
    out[i] = static_cast<std::uint8_t>(hi << 4 | lo);
  }
  return out;
}

class Writer {
 public:
  void u8(std::uint8_t v) { buf_.push_back(v); }

  void raw(ByteView b) { buf_.insert(buf_.end(), b.begin(), b.end()); }

  void integer(std::uint64_t v) {
    std::uint8_t tmp[8];
    int n = 0;
    for (; v != 0; v >>= 8) tmp[n++] = static_cast<std::uint8_t>(v & 0xff);
    u8(static_cast<std::uint8_t>(n));
    while (n > 0) u8(tmp[--n]);
  }

  /// Big-endian magnitude of arbitrary width; leading zeros are stripped.
  void big_integer(ByteView be) {
    std::size_t start = 0;
    while (start < be.size() && be[start] == 0) ++start;
    auto len = be.size() - start;
    if (len > 255) throw Error(Errc::Malformed, "integer wider than 255 bytes");
    u8(static_cast<std::uint8_t>(len));
    raw(be.subspan(start));
  }

  void bytes(ByteView b) {
    auto n = static_cast<std::uint32_t>(b.size());
    for (int s = 24; s >= 0; s -= 8) u8(static_cast<std::uint8_t>(n >> s));
    raw(b);
  }

  void string(std::string_view s) {
    bytes(ByteView(reinterpret_cast<const std::uint8_t*>(s.data()), s.size()));
  }

  const Bytes& data() const& { return buf_; }
  Bytes take() && { return std::move(buf_); }

 private:
  Bytes buf_;
};

class Reader {
 public:
  explicit Reader(ByteView data) : data_(data) {}

  std::uint8_t u8() {
    need(1);
    return data_[pos_++];
  }

  ByteView raw(std::size_t n) {
    need(n);
    auto out = data_.subspan(pos_, n);
    pos_ += n;
    return out;
  }

  std::uint64_t integer() {
    auto n = u8();
    if (n > 8) throw Error(Errc::Malformed, "integer too wide");
    auto b = raw(n);
    if (n > 0 && b[0] == 0) throw Error(Errc::Malformed, "non-minimal integer");
    std::uint64_t v = 0;
    for (auto x : b) v = v << 8 | x;
    return v;
  }

  ByteView big_integer() {
    auto n = u8();
    auto b = raw(n);
    if (n > 0 && b[0] == 0) throw Error(Errc::Malformed, "non-minimal integer");
    return b;
  }

  ByteView bytes() {
    std::uint32_t n = 0;
    for (int i = 0; i < 4; ++i) n = n << 8 | u8();
    return raw(n);
  }

  std::string string() { return to_string(bytes()); }

  std::size_t remaining() const { return data_.size() - pos_; }
  bool done() const { return pos_ == data_.size(); }

  void expect_done() const {
    if (!done()) throw Error(Errc::Malformed, "trailing bytes after value");
  }

 private:
  void need(std::size_t n) const {
    if (data_.size() - pos_ < n) throw Error(Errc::Malformed, "truncated input");
  }

  ByteView data_;
  std::size_t pos_ = 0;
};

// ---------------------------------------------------------------------------
// Generic field-wise encoding.

template <class T>
concept SelfEncoding = requires(const T& t, Writer& w, Reader& r) {
  t.write(w);
  { T::read(r) } -> std::same_as<T>;
};

template <class T>
concept Tied = requires(T& t, const T& ct) {
  t.tie();
  ct.tie();
};

template <class T>
struct is_vector : std::false_type {};
template <class T, class A>
struct is_vector<std::vector<T, A>> : std::true_type {};

template <class T>
struct is_optional : std::false_type {};
template <class T>
struct is_optional<std::optional<T>> : std::true_type {};

template <class T>
struct is_set : std::false_type {};
template <class T, class C, class A>
struct is_set<std::set<T, C, A>> : std::true_type {};

template <class T>
struct is_map : std::false_type {};
template <class K, class V, class C, class A>
struct is_map<std::map<K, V, C, A>> : std::true_type {};

template <class T>
struct is_pair : std::false_type {};
template <class A, class B>
struct is_pair<std::pair<A, B>> : std::true_type {};

template <class T>
struct is_byte_array : std::false_type {};
template <std::size_t N>
struct is_byte_array<std::array<std::uint8_t, N>> : std::true_type {};

template <class T>
void put(Writer& w, const T& v);
template <class T>
void get(Reader& r, T& v);

template <class T>
void put(Writer& w, const T& v) {
  if constexpr (SelfEncoding<T>) {
    v.write(w);
  } else if constexpr (std::is_same_v<T, bool>) {
    w.u8(v ? 1 : 0);
  } else if constexpr (std::is_enum_v<T>) {
    w.integer(static_cast<std::uint64_t>(v));
  } else if constexpr (std::is_integral_v<T>) {
    static_assert(std::is_unsigned_v<T>, "only unsigned integers are encodable");
    w.integer(v);
  } else if constexpr (std::is_same_v<T, std::string>) {
    w.string(v);
  } else if constexpr (std::is_same_v<T, Bytes>) {
    w.bytes(v);
  } else if constexpr (is_byte_array<T>::value) {
    w.bytes(v);
  } else if constexpr (is_vector<T>::value) {
    w.integer(v.size());
    for (const auto& x : v) put(w, x);
  } else if constexpr (is_set<T>::value || is_map<T>::value) {
    w.integer(v.size());
    for (const auto& x : v) put(w, x);
  } else if constexpr (is_pair<T>::value) {
    put(w, v.first);
    put(w, v.second);
  } else if constexpr (is_optional<T>::value) {
    w.u8(v.has_value() ? 1 : 0);
    if (v) put(w, *v);
  } else if constexpr (Tied<T>) {
    std::apply([&](const auto&... f) { (put(w, f), ...); }, v.tie());
  } else {
    static_assert(sizeof(T) == 0, "type has no canonical encoding");
  }
}

template <class T>
void get(Reader& r, T& v) {
  if constexpr (SelfEncoding<T>) {
    v = T::read(r);
  } else if constexpr (std::is_same_v<T, bool>) {
    auto b = r.u8();
    if (b > 1) throw Error(Errc::Malformed, "invalid bool");
    v = b == 1;
  } else if constexpr (std::is_enum_v<T>) {
    v = static_cast<T>(r.integer());
  } else if constexpr (std::is_integral_v<T>) {
    auto x = r.integer();
    if (x > std::numeric_limits<T>::max()) throw Error(Errc::Malformed, "integer overflow");
    v = static_cast<T>(x);
  } else if constexpr (std::is_same_v<T, std::string>) {
    v = r.string();
  } else if constexpr (std::is_same_v<T, Bytes>) {
    auto b = r.bytes();
    v.assign(b.begin(), b.end());
  } else if constexpr (is_byte_array<T>::value) {
    auto b = r.bytes();
    if (b.size() != v.size()) throw Error(Errc::Malformed, "fixed-width field size mismatch");
    std::copy(b.begin(), b.end(), v.begin());
  } else if constexpr (is_vector<T>::value) {
    auto n = r.integer();
    if (n > r.remaining()) throw Error(Errc::Malformed, "vector length exceeds input");
    v.clear();
    v.resize(n);
    for (auto& x : v) get(r, x);
  } else if constexpr (is_set<T>::value) {
    auto n = r.integer();
    if (n > r.remaining()) throw Error(Errc::Malformed, "set length exceeds input");
    v.clear();
    for (std::uint64_t i = 0; i < n; ++i) {
      typename T::value_type x{};
      get(r, x);
      if (!v.insert(std::move(x)).second) throw Error(Errc::Malformed, "duplicate set element");
    }
  } else if constexpr (is_map<T>::value) {
    auto n = r.integer();
    if (n > r.remaining()) throw Error(Errc::Malformed, "map length exceeds input");
    v.clear();
    for (std::uint64_t i = 0; i < n; ++i) {
      typename T::key_type k{};
      typename T::mapped_type x{};
      get(r, k);
      get(r, x);
      if (!v.emplace(std::move(k), std::move(x)).second)
        throw Error(Errc::Malformed, "duplicate map key");
    }
  } else if constexpr (is_pair<T>::value) {
    get(r, v.first);
    get(r, v.second);
  } else if constexpr (is_optional<T>::value) {
    auto flag = r.u8();
    if (flag > 1) throw Error(Errc::Malformed, "invalid optional flag");
    if (flag == 1) {
      typename T::value_type x{};
      get(r, x);
      v = std::move(x);
    } else {
      v.reset();
    }
  } else if constexpr (Tied<T>) {
    std::apply([&](auto&... f) { (get(r, f), ...); }, v.tie());
  } else {
    static_assert(sizeof(T) == 0, "type has no canonical decoding");
  }
}

template <class T>
Bytes encode(const T& v) {
  Writer w;
  put(w, v);
  return std::move(w).take();
}

template <class T>
T decode(ByteView data) {
  Reader r(data);
  T v{};
  get(r, v);
  r.expect_done();
  return v;
}

}  // namespace electryo
