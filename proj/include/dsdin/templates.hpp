#pragma once

// Contract templates shipped with the VM. Each is a pure function over
// channel state producing a two-value split (party A, party B).

#include "dsdin/vm.hpp"

namespace dsdin::vm::templates {

/// state [total, num, den] -> [total*num/den, total - total*num/den]
Program payment_split();

/// state [total, hashlock, preimage] -> [0, total] when
/// hash_word(preimage) == hashlock (B claims), else [total, 0].
Program hash_timelock();

/// state [deposit, price_per_call, calls] -> [deposit - cost, cost] with
/// cost = min(price_per_call * calls, deposit). A pays B per call.
Program metered_api();

/// state [escrow, reward_per_proof, proofs] -> [escrow - paid, paid] with
/// paid = min(reward_per_proof * proofs, escrow). Payer A, provider B.
Program storage_payout();

/// state [total, accepted] -> [0, total] if accepted != 0 else [total, 0].
/// Settles a spot-checked computation in favour of the worker B.
Program spot_check_payout();

/// Lookup by name: payment_split, hash_timelock, metered_api,
/// storage_payout, spot_check_payout. Throws NotFound.
Program by_name(std::string_view name);

}  // namespace dsdin::vm::templates
