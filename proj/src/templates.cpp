#include "dsdin/templates.hpp"

#include <string>

#include "dsdin/error.hpp"

namespace dsdin::vm::templates {

Program payment_split() {
  return assemble(R"(
    STORE 2      ; den
    STORE 1      ; num
    STORE 0      ; total
    LOAD 0
    LOAD 1
    MUL
    LOAD 2
    DIV          ; a = total*num/den
    DUP
    LOAD 0
    SWAP
    SUB          ; b = total - a
    STOP
  )");
}

Program hash_timelock() {
  return assemble(R"(
    HASH         ; [total, hashlock, h(preimage)]
    EQ
    STORE 0      ; matched
    DUP
    PUSH 0
    LOAD 0
    SELECT       ; b = matched ? total : 0
    STORE 1
    LOAD 1
    SUB          ; a = total - b
    LOAD 1
    STOP
  )");
}

namespace {

// [cap, unit, count] -> [cap - min(unit*count, cap), min(unit*count, cap)]
Program capped_product() {
  return assemble(R"(
    MUL
    STORE 1      ; cost
    STORE 0      ; cap
    LOAD 1
    LOAD 0
    LT
    STORE 2
    LOAD 1
    LOAD 0
    LOAD 2
    SELECT       ; paid = cost < cap ? cost : cap
    STORE 3
    LOAD 0
    LOAD 3
    SUB
    LOAD 3
    STOP
  )");
}

}  // namespace

Program metered_api() { return capped_product(); }

Program storage_payout() { return capped_product(); }

Program spot_check_payout() {
  return assemble(R"(
    STORE 0      ; accepted
    DUP
    PUSH 0
    LOAD 0
    SELECT       ; b = accepted ? total : 0
    STORE 1
    LOAD 1
    SUB
    LOAD 1
    STOP
  )");
}

Program by_name(std::string_view name) {
  if (name == "payment_split") return payment_split();
  if (name == "hash_timelock") return hash_timelock();
  if (name == "metered_api") return metered_api();
  if (name == "storage_payout") return storage_payout();
  if (name == "spot_check_payout") return spot_check_payout();
  throw Error(Errc::NotFound, "unknown template '" + std::string(name) + "'");
}

}  // namespace dsdin::vm::templates
