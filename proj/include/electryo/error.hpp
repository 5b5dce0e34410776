#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace electryo {

enum class Errc : std::uint8_t {
  Malformed,
  NotInRange,
  InvalidCiphertext,
  VerifyFailed,
  ShareInvalid,
  InsufficientShares,
  BadShare,
  ShareProofInvalid,
  BatchMalformed,
  StageProofInvalid,
  PhaseOrderViolation,
  ChainBroken,
  NotOnRoll,
  AlreadyVoted,
  InvalidCardOutput,
  UnfilledBallot,
  ProofGenFailure,
  InvalidReceiptCode,
  PetFailed,
  MissingShare,
  PaperBallotMissing,
  NoMatch,
  MultiMatch,
  InvalidConfig,
  ScenarioFailed,
};

constexpr std::string_view errc_name(Errc c) {
  switch (c) {
    case Errc::Malformed: return "Malformed";
    case Errc::NotInRange: return "NotInRange";
    case Errc::InvalidCiphertext: return "InvalidCiphertext";
    case Errc::VerifyFailed: return "VerifyFailed";
    case Errc::ShareInvalid: return "ShareInvalid";
    case Errc::InsufficientShares: return "InsufficientShares";
    case Errc::BadShare: return "BadShare";
    case Errc::ShareProofInvalid: return "ShareProofInvalid";
    case Errc::BatchMalformed: return "BatchMalformed";
    case Errc::StageProofInvalid: return "StageProofInvalid";
    case Errc::PhaseOrderViolation: return "PhaseOrderViolation";
    case Errc::ChainBroken: return "ChainBroken";
    case Errc::NotOnRoll: return "NotOnRoll";
    case Errc::AlreadyVoted: return "AlreadyVoted";
    case Errc::InvalidCardOutput: return "InvalidCardOutput";
    case Errc::UnfilledBallot: return "UnfilledBallot";
    case Errc::ProofGenFailure: return "ProofGenFailure";
    case Errc::InvalidReceiptCode: return "InvalidReceiptCode";
    case Errc::PetFailed: return "PetFailed";
    case Errc::MissingShare: return "MissingShare";
    case Errc::PaperBallotMissing: return "PaperBallotMissing";
    case Errc::NoMatch: return "NoMatch";
    case Errc::MultiMatch: return "MultiMatch";
    case Errc::InvalidConfig: return "InvalidConfig";
    case Errc::ScenarioFailed: return "ScenarioFailed";
  }
  return "Unknown";
}

/// Every failure in the library is reported through this type; `code()`
/// identifies the condition, `index()` carries a stage/entry coordinate
/// where one applies (0 otherwise).
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what, std::uint64_t index = 0)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what),
        code_(code),
        index_(index) {}

  Errc code() const noexcept { return code_; }
  std::uint64_t index() const noexcept { return index_; }

 private:
  Errc code_;
  std::uint64_t index_;
};

}  // namespace electryo
