#include "dsdin/vm.hpp"

#include <array>
#include <charconv>
#include <map>
#include <sstream>

#include "dsdin/codec.hpp"
#include "dsdin/error.hpp"

namespace dsdin::vm {

namespace {

struct OpInfo {
  Op op;
  const char* name;
  bool has_operand;
};

constexpr std::array<OpInfo, 19> kOps{{
    {Op::Push, "PUSH", true},   {Op::Pop, "POP", false},     {Op::Dup, "DUP", false},
    {Op::Swap, "SWAP", false},  {Op::Add, "ADD", false},     {Op::Sub, "SUB", false},
    {Op::Mul, "MUL", false},    {Op::Div, "DIV", false},     {Op::Lt, "LT", false},
    {Op::Eq, "EQ", false},      {Op::Not, "NOT", false},     {Op::Select, "SELECT", false},
    {Op::Hash, "HASH", false},  {Op::SigOk, "SIGOK", false}, {Op::Balance, "BALANCE", false},
    {Op::Store, "STORE", true}, {Op::Load, "LOAD", true},    {Op::Stop, "STOP", false},
    {Op::Fail, "FAIL", false},
}};

const OpInfo& info(Op op) { return kOps[static_cast<std::size_t>(op)]; }

struct Trap {};

class Machine {
 public:
  explicit Machine(const Env& env) : env_(env) {}

  std::vector<std::int64_t> stack;
  std::map<std::int64_t, std::int64_t> store;

  std::int64_t pop() {
    if (stack.empty()) throw Trap{};
    auto v = stack.back();
    stack.pop_back();
    return v;
  }

  std::uint64_t space() const { return stack.size() + store.size(); }

  // Returns false on STOP.
  bool step(const Instr& ins) {
    switch (ins.op) {
      case Op::Push: stack.push_back(ins.operand); break;
      case Op::Pop: pop(); break;
      case Op::Dup: {
        auto v = pop();
        stack.push_back(v);
        stack.push_back(v);
        break;
      }
      case Op::Swap: {
        auto b = pop(), a = pop();
        stack.push_back(b);
        stack.push_back(a);
        break;
      }
      case Op::Add: {
        auto b = pop(), a = pop();
        std::int64_t r;
        if (__builtin_add_overflow(a, b, &r)) throw Trap{};
        stack.push_back(r);
        break;
      }
      case Op::Sub: {
        auto b = pop(), a = pop();
        std::int64_t r;
        if (__builtin_sub_overflow(a, b, &r)) throw Trap{};
        stack.push_back(r);
        break;
      }
      case Op::Mul: {
        auto b = pop(), a = pop();
        std::int64_t r;
        if (__builtin_mul_overflow(a, b, &r)) throw Trap{};
        stack.push_back(r);
        break;
      }
      case Op::Div: {
        auto b = pop(), a = pop();
        if (b == 0 || (a == INT64_MIN && b == -1)) throw Trap{};
        stack.push_back(a / b);
        break;
      }
      case Op::Lt: {
        auto b = pop(), a = pop();
        stack.push_back(a < b ? 1 : 0);
        break;
      }
      case Op::Eq: {
        auto b = pop(), a = pop();
        stack.push_back(a == b ? 1 : 0);
        break;
      }
      case Op::Not: stack.push_back(pop() == 0 ? 1 : 0); break;
      case Op::Select: {
        // a b cond -> cond ? a : b
        auto cond = pop(), b = pop(), a = pop();
        stack.push_back(cond != 0 ? a : b);
        break;
      }
      case Op::Hash: stack.push_back(hash_word(pop())); break;
      case Op::SigOk: {
        auto i = pop();
        if (i < 0 || static_cast<std::size_t>(i) >= env_.signatures.size()) throw Trap{};
        stack.push_back(env_.signatures[static_cast<std::size_t>(i)] ? 1 : 0);
        break;
      }
      case Op::Balance: {
        auto i = pop();
        if (i < 0 || static_cast<std::size_t>(i) >= env_.balances.size()) throw Trap{};
        stack.push_back(env_.balances[static_cast<std::size_t>(i)]);
        break;
      }
      case Op::Store: store[ins.operand] = pop(); break;
      case Op::Load: {
        auto it = store.find(ins.operand);
        stack.push_back(it == store.end() ? 0 : it->second);
        break;
      }
      case Op::Stop: return false;
      case Op::Fail: throw Trap{};
    }
    return true;
  }

 private:
  const Env& env_;
};

}  // namespace

const char* status_name(Status s) noexcept {
  switch (s) {
    case Status::Halted: return "halted";
    case Status::Failed: return "failed";
    case Status::OutOfGas: return "out_of_gas";
    case Status::OutOfSpace: return "out_of_space";
  }
  return "unknown";
}

void Program::validate() const {
  if (vm_version != kVmVersion) throw Error(Errc::BadFormat, "unsupported vm_version");
  if (code.size() > kMaxProgramLength) throw Error(Errc::BadFormat, "program too long");
  for (const auto& ins : code) {
    if (static_cast<std::size_t>(ins.op) >= kOps.size()) throw Error(Errc::BadFormat, "unknown opcode");
    const bool cell_op = ins.op == Op::Store || ins.op == Op::Load;
    if (cell_op && (ins.operand < 0 || ins.operand >= kStoreCells))
      throw Error(Errc::BadFormat, "store cell out of range");
    if (!info(ins.op).has_operand && ins.operand != 0) throw Error(Errc::BadFormat, "unexpected operand");
  }
}

Bytes Program::encode() const {
  Writer w;
  w.u32(vm_version).u32(static_cast<std::uint32_t>(code.size()));
  for (const auto& ins : code) {
    w.u8(static_cast<std::uint8_t>(ins.op));
    if (info(ins.op).has_operand) w.i64(ins.operand);
  }
  return std::move(w).take();
}

Program Program::decode(ByteView in) {
  Reader r(in);
  Program p;
  p.vm_version = r.u32();
  const auto n = r.count(1);
  p.code.reserve(n);
  for (std::uint32_t i = 0; i < n; ++i) {
    const auto raw = r.u8();
    if (raw >= kOps.size()) throw Error(Errc::Decode, "unknown opcode");
    Instr ins{static_cast<Op>(raw), 0};
    if (info(ins.op).has_operand) ins.operand = r.i64();
    p.code.push_back(ins);
  }
  r.expect_done();
  p.validate();
  return p;
}

Hash256 Program::hash() const { return sha256(encode()); }

std::int64_t hash_word(std::int64_t x) {
  const Hash256 h = Hasher().update_u64(static_cast<std::uint64_t>(x)).finish();
  return static_cast<std::int64_t>(hash_prefix_u64(h));
}

VmResult execute(const Program& program, const std::vector<std::int64_t>& call_data, const Env& env,
                 std::uint64_t gas_limit, std::uint64_t space_limit) {
  program.validate();
  Machine m(env);
  VmResult res;
  m.stack = call_data;
  res.space_peak = m.space();
  if (res.space_peak > space_limit) {
    res.status = Status::OutOfSpace;
    return res;
  }
  std::size_t pc = 0;
  try {
    while (pc < program.code.size()) {
      if (res.gas_used == gas_limit) {
        res.status = Status::OutOfGas;
        return res;
      }
      ++res.gas_used;
      const bool running = m.step(program.code[pc++]);
      res.space_peak = std::max(res.space_peak, m.space());
      if (m.space() > space_limit) {
        res.status = Status::OutOfSpace;
        return res;
      }
      if (!running) break;
    }
  } catch (const Trap&) {
    res.status = Status::Failed;
    return res;
  }
  res.status = Status::Halted;
  if (!m.stack.empty()) res.stack_top = m.stack.back();
  res.stack = m.stack;
  if (!env.payees.empty() && m.stack.size() == env.payees.size()) {
    bool valid = true;
    for (auto v : m.stack) valid = valid && v >= 0;
    if (valid)
      for (std::size_t i = 0; i < m.stack.size(); ++i)
        if (m.stack[i] > 0) res.balance_effects.push_back({env.payees[i], m.stack[i]});
  }
  return res;
}

std::vector<std::int64_t> eval_pure(const Program& program, const std::vector<std::int64_t>& state_in) {
  for (const auto& ins : program.code)
    if (ins.op == Op::Balance || ins.op == Op::SigOk)
      throw Error(Errc::BadFormat, "channel contracts may not read balances or signatures");
  auto res = execute(program, state_in, Env{}, kPureGas, kPureSpace);
  if (res.status != Status::Halted) throw Error(Errc::VmFailure, status_name(res.status));
  return res.stack;
}

std::string disassemble(const Program& program) {
  std::ostringstream out;
  for (const auto& ins : program.code) {
    out << info(ins.op).name;
    if (info(ins.op).has_operand) out << ' ' << ins.operand;
    out << '\n';
  }
  return out.str();
}

Program assemble(std::string_view text) {
  Program p;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (auto c = line.find(';'); c != std::string_view::npos) line = line.substr(0, c);
    std::istringstream words{std::string(line)};
    std::string mnemonic;
    if (!(words >> mnemonic)) {
      if (end == text.size()) break;
      continue;
    }
    for (auto& ch : mnemonic) ch = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
    const OpInfo* found = nullptr;
    for (const auto& oi : kOps)
      if (mnemonic == oi.name) found = &oi;
    auto fail = [&](const std::string& why) {
      throw Error(Errc::BadFormat, "line " + std::to_string(line_no) + ": " + why);
    };
    if (found == nullptr) fail("unknown mnemonic '" + mnemonic + "'");
    Instr ins{found->op, 0};
    std::string operand, extra;
    if (found->has_operand) {
      if (!(words >> operand)) fail("missing operand");
      auto [ptr, ec] = std::from_chars(operand.data(), operand.data() + operand.size(), ins.operand);
      if (ec != std::errc{} || ptr != operand.data() + operand.size()) fail("bad operand '" + operand + "'");
    }
    if (words >> extra) fail("trailing token '" + extra + "'");
    p.code.push_back(ins);
    if (end == text.size()) break;
  }
  try {
    p.validate();
  } catch (const Error& e) {
    throw Error(Errc::BadFormat, std::string("program: ") + e.what());
  }
  return p;
}

}  // namespace dsdin::vm
