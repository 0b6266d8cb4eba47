#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dsdin/hash.hpp"

namespace dsdin::vm {

enum class Op : std::uint8_t {
  Push, Pop, Dup, Swap, Add, Sub, Mul, Div, Lt, Eq, Not, Select,
  Hash, SigOk, Balance, Store, Load, Stop, Fail,
};

constexpr std::uint32_t kVmVersion = 1;
constexpr std::size_t kMaxProgramLength = 65'536;
constexpr std::int64_t kStoreCells = 1024;

struct Instr {
  Op op = Op::Stop;
  std::int64_t operand = 0;  // PUSH value, STORE/LOAD cell index

  bool operator==(const Instr&) const = default;
};

struct Program {
  std::uint32_t vm_version = kVmVersion;
  std::vector<Instr> code;

  bool operator==(const Program&) const = default;

  /// Throws BadFormat on a wrong version, oversized code or an out-of-range operand.
  void validate() const;
  Bytes encode() const;
  static Program decode(ByteView in);
  Hash256 hash() const;
};

enum class Status { Halted, Failed, OutOfGas, OutOfSpace };

const char* status_name(Status s) noexcept;

struct BalanceEffect {
  Address address;
  std::int64_t delta = 0;
  bool operator==(const BalanceEffect&) const = default;
};

struct VmResult {
  Status status = Status::Failed;
  std::optional<std::int64_t> stack_top;
  std::vector<std::int64_t> stack;  // final stack, bottom first
  std::uint64_t gas_used = 0;
  std::uint64_t space_peak = 0;
  std::vector<BalanceEffect> balance_effects;
};

/// Read-only view given to a running program. BALANCE pops i and pushes
/// balances[i]; SIGOK pops i and pushes 1 iff signatures[i] is set. When `payees` is non-empty and
/// the program halts with exactly one stack value per payee, those values
/// are reported as non-negative payouts (bottom value to payees[0]).
struct Env {
  std::vector<std::int64_t> balances;
  std::vector<bool> signatures;
  std::vector<Address> payees;
};

/// Runs `program` with `call_data` pushed in order. Each instruction costs
/// one gas; space is stack depth plus occupied store cells. Running off the
/// end of the code halts like STOP.
VmResult execute(const Program& program, const std::vector<std::int64_t>& call_data, const Env& env,
                 std::uint64_t gas_limit, std::uint64_t space_limit);

constexpr std::uint64_t kPureGas = 100'000;
constexpr std::uint64_t kPureSpace = 4'096;

/// Channel-contract evaluation: state on the stack, fixed generous meters,
/// no environment. Throws VmFailure when the program does not halt, and
/// BadFormat when it uses BALANCE or SIGOK.
std::vector<std::int64_t> eval_pure(const Program& program, const std::vector<std::int64_t>& state_in);

/// HASH instruction semantics: first eight bytes of SHA-256 over the
/// big-endian word, as a signed integer.
std::int64_t hash_word(std::int64_t x);

std::string disassemble(const Program& program);
/// One instruction per line, ';' starts a comment. Throws BadFormat with
/// the offending line number.
Program assemble(std::string_view text);

}  // namespace dsdin::vm
