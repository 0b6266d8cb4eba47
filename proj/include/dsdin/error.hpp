#pragma once

#include <stdexcept>
#include <string>

namespace dsdin {

enum class Errc {
  // encoding / generic
  BadFormat,
  Decode,
  Overflow,
  NotFound,
  // ledger
  BadLink,
  BadHeight,
  BadPow,
  RootMismatch,
  NonZeroBalance,
  NameTaken,
  AddressCollision,
  // transactions
  BadSignature,
  BadCounter,
  InsufficientForFee,
  InsufficientDeposit,
  InsufficientFunds,
  VmFailure,
  SpendToContract,
  NotMiner,
  // channels
  MissingSignature,
  NonMonotonicNonce,
  BalanceSumMismatch,
  WrongChannel,
  NotParty,
  TooLate,
  NotBetter,
  NotYet,
  MissingContract,
  // oracle
  BadWindow,
  NotAsker,
  OutsideWindow,
  NotReady,
  AlreadyVoted,
  // storage
  BadProof,
  WrongIndex,
  NotChallengeHeight,
  // reward pool / AZ
  NotMember,
  AlreadyMember,
  InsufficientEndowment,
  NotEpochBoundary,
  // optimizer
  NotATree,
  NoConvergence,
  // pow / sim
  PowNotFound,
  ScenarioError,
};

const char* errc_name(Errc code) noexcept;

class Error : public std::runtime_error {
 public:
  explicit Error(Errc code) : std::runtime_error(errc_name(code)), code_(code) {}
  Error(Errc code, const std::string& detail)
      : std::runtime_error(std::string(errc_name(code)) + ": " + detail), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace dsdin
