#include "dsdin/error.hpp"

namespace dsdin {

const char* errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::BadFormat: return "BadFormat";
    case Errc::Decode: return "Decode";
    case Errc::Overflow: return "Overflow";
    case Errc::NotFound: return "NotFound";
    case Errc::BadLink: return "BadLink";
    case Errc::BadHeight: return "BadHeight";
    case Errc::BadPow: return "BadPow";
    case Errc::RootMismatch: return "RootMismatch";
    case Errc::NonZeroBalance: return "NonZeroBalance";
    case Errc::NameTaken: return "NameTaken";
    case Errc::AddressCollision: return "AddressCollision";
    case Errc::BadSignature: return "BadSignature";
    case Errc::BadCounter: return "BadCounter";
    case Errc::InsufficientForFee: return "InsufficientForFee";
    case Errc::InsufficientDeposit: return "InsufficientDeposit";
    case Errc::InsufficientFunds: return "InsufficientFunds";
    case Errc::VmFailure: return "VmFailure";
    case Errc::SpendToContract: return "SpendToContract";
    case Errc::NotMiner: return "NotMiner";
    case Errc::MissingSignature: return "MissingSignature";
    case Errc::NonMonotonicNonce: return "NonMonotonicNonce";
    case Errc::BalanceSumMismatch: return "BalanceSumMismatch";
    case Errc::WrongChannel: return "WrongChannel";
    case Errc::NotParty: return "NotParty";
    case Errc::TooLate: return "TooLate";
    case Errc::NotBetter: return "NotBetter";
    case Errc::NotYet: return "NotYet";
    case Errc::MissingContract: return "MissingContract";
    case Errc::BadWindow: return "BadWindow";
    case Errc::NotAsker: return "NotAsker";
    case Errc::OutsideWindow: return "OutsideWindow";
    case Errc::NotReady: return "NotReady";
    case Errc::AlreadyVoted: return "AlreadyVoted";
    case Errc::BadProof: return "BadProof";
    case Errc::WrongIndex: return "WrongIndex";
    case Errc::NotChallengeHeight: return "NotChallengeHeight";
    case Errc::NotMember: return "NotMember";
    case Errc::AlreadyMember: return "AlreadyMember";
    case Errc::InsufficientEndowment: return "InsufficientEndowment";
    case Errc::NotEpochBoundary: return "NotEpochBoundary";
    case Errc::NotATree: return "NotATree";
    case Errc::NoConvergence: return "NoConvergence";
    case Errc::PowNotFound: return "PowNotFound";
    case Errc::ScenarioError: return "ScenarioError";
  }
  return "Unknown";
}

}  // namespace dsdin
