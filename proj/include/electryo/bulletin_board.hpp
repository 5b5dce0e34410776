#pragma once

// Append-only, hash-chained bulletin board with a phase state machine.

#include <filesystem>
#include <fstream>

#include "electryo/hash.hpp"

namespace electryo {

enum class Phase : std::uint8_t {
  Setup = 0,
  PreVote,
  CastBallots,
  MixIdSig,
  EligibleBallots,
  MixTrackerVote,
  TallyBoard,
  PetLog,
  AuditLog,
};

inline const char* phase_name(Phase p) {
  switch (p) {
    case Phase::Setup: return "Setup";
    case Phase::PreVote: return "PreVote";
    case Phase::CastBallots: return "CastBallots";
    case Phase::MixIdSig: return "MixIdSig";
    case Phase::EligibleBallots: return "EligibleBallots";
    case Phase::MixTrackerVote: return "MixTrackerVote";
    case Phase::TallyBoard: return "TallyBoard";
    case Phase::PetLog: return "PetLog";
    case Phase::AuditLog: return "AuditLog";
  }
  return "?";
}

/// Side logs are written after the tally board is up and may interleave.
inline bool is_side_log(Phase p) { return p == Phase::PetLog || p == Phase::AuditLog; }

struct BbEntry {
  std::uint64_t seq = 0;
  Phase phase = Phase::Setup;
  std::string author;
  Bytes payload;
  Digest prev_hash{};
  Digest entry_hash{};

  static Digest compute_hash(const Digest& prev, std::uint64_t seq, Phase phase,
                             std::string_view author, ByteView payload) {
    Hasher h("electryo/bb/entry");
    h.absorb(prev).absorb_value(seq).absorb_value(static_cast<std::uint8_t>(phase));
    h.absorb(author).absorb(payload);
    return h.digest();
  }

  Digest expected_hash() const { return compute_hash(prev_hash, seq, phase, author, payload); }

  void write(Writer& w) const {
    w.integer(seq);
    w.u8(static_cast<std::uint8_t>(phase));
    w.string(author);
    w.bytes(payload);
    w.raw(prev_hash);
    w.raw(entry_hash);
  }
  static BbEntry read(Reader& r) {
    BbEntry e;
    e.seq = r.integer();
    auto p = r.u8();
    if (p > static_cast<std::uint8_t>(Phase::AuditLog)) throw Error(Errc::Malformed, "unknown phase");
    e.phase = static_cast<Phase>(p);
    e.author = r.string();
    auto payload = r.bytes();
    e.payload.assign(payload.begin(), payload.end());
    auto prev = r.raw(32);
    std::copy(prev.begin(), prev.end(), e.prev_hash.begin());
    auto own = r.raw(32);
    std::copy(own.begin(), own.end(), e.entry_hash.begin());
    return e;
  }
  bool operator==(const BbEntry&) const = default;
};

struct BbSnapshot {
  Digest head_hash{};
  std::uint64_t length = 0;

  bool operator==(const BbSnapshot&) const = default;
  auto tie() { return std::tie(head_hash, length); }
  auto tie() const { return std::tie(head_hash, length); }
};

/// Index of the first entry whose sequence number, back link or own hash is
/// wrong; nullopt for an intact chain.
inline std::optional<std::size_t> find_chain_break(const std::vector<BbEntry>& entries) {
  Digest prev{};
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const auto& e = entries[i];
    if (e.seq != i || e.prev_hash != prev || e.entry_hash != e.expected_hash()) return i;
    prev = e.entry_hash;
  }
  return std::nullopt;
}

inline bool verify_chain(const std::vector<BbEntry>& entries) {
  if (auto bad = find_chain_break(entries))
    throw Error(Errc::ChainBroken, "chain broken at entry " + std::to_string(*bad), *bad);
  return true;
}

/// Recompute every link after a deliberate edit (used to build tamper
/// fixtures that survive the chain check).
inline void rechain(std::vector<BbEntry>& entries) {
  Digest prev{};
  for (std::size_t i = 0; i < entries.size(); ++i) {
    entries[i].seq = i;
    entries[i].prev_hash = prev;
    entries[i].entry_hash = entries[i].expected_hash();
    prev = entries[i].entry_hash;
  }
}

class BulletinBoard {
 public:
  BulletinBoard() = default;

  /// Adopt an existing log; the chain and phase order must hold.
  explicit BulletinBoard(std::vector<BbEntry> entries) {
    verify_chain(entries);
    for (auto& e : entries) {
      check_order(e.phase);
      advance(e.phase);
    }
    entries_ = std::move(entries);
  }

  const BbEntry& append(Phase phase, std::string author, Bytes payload) {
    check_order(phase);
    BbEntry e;
    e.seq = entries_.size();
    e.phase = phase;
    e.author = std::move(author);
    e.payload = std::move(payload);
    e.prev_hash = entries_.empty() ? Digest{} : entries_.back().entry_hash;
    e.entry_hash = e.expected_hash();
    advance(phase);
    entries_.push_back(std::move(e));
    return entries_.back();
  }

  /// Move the main phase forward without posting (e.g. closing the vote
  /// with no ballots cast).
  void open_phase(Phase phase) {
    check_order(phase);
    advance(phase);
  }

  Phase current_phase() const { return main_; }
  const std::vector<BbEntry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }

  BbSnapshot snapshot() const {
    return {entries_.empty() ? Digest{} : entries_.back().entry_hash, entries_.size()};
  }

  std::vector<BbEntry> read_phase(Phase phase) const {
    std::vector<BbEntry> out;
    for (const auto& e : entries_)
      if (e.phase == phase) out.push_back(e);
    return out;
  }

 private:
  void check_order(Phase phase) const {
    if (is_side_log(phase)) {
      if (main_ != Phase::TallyBoard)
        throw Error(Errc::PhaseOrderViolation,
                    std::string(phase_name(phase)) + " requires the tally board to be published");
      return;
    }
    if (side_started_ || phase < main_)
      throw Error(Errc::PhaseOrderViolation, std::string(phase_name(phase)) + " is closed");
  }

  void advance(Phase phase) {
    if (is_side_log(phase))
      side_started_ = true;
    else
      main_ = phase;
  }

  std::vector<BbEntry> entries_;
  Phase main_ = Phase::Setup;
  bool side_started_ = false;
};

// ---------------------------------------------------------------------------
// Transcript file

inline constexpr std::string_view kTranscriptMagic = "ELECTRYO-BB/1\n";

inline Bytes encode_transcript(const std::vector<BbEntry>& entries) {
  Writer w;
  w.raw(to_bytes(kTranscriptMagic));
  put(w, entries);
  return std::move(w).take();
}

inline std::vector<BbEntry> decode_transcript(ByteView data) {
  if (data.size() < kTranscriptMagic.size() ||
      to_string(data.first(kTranscriptMagic.size())) != kTranscriptMagic)
    throw Error(Errc::Malformed, "not a transcript file");
  return decode<std::vector<BbEntry>>(data.subspan(kTranscriptMagic.size()));
}

inline Bytes read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::Malformed, "cannot open " + path.string());
  return Bytes(std::istreambuf_iterator<char>(in), {});
}

inline void write_file(const std::filesystem::path& path, ByteView data) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::Malformed, "cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(data.data()), static_cast<std::streamsize>(data.size()));
}

inline void save_transcript(const std::filesystem::path& path, const std::vector<BbEntry>& entries) {
  write_file(path, encode_transcript(entries));
}

inline std::vector<BbEntry> load_transcript(const std::filesystem::path& path) {
  return decode_transcript(read_file(path));
}

}  // namespace electryo
