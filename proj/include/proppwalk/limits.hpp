#pragma once

#include <cstdint>
#include <optional>
#include <string>

namespace proppwalk {

inline constexpr std::uint64_t kDefaultMemoryBudget = 2ull << 30;  // 2 GiB

/// PROPPWALK_MEM_BUDGET (bytes) when set and valid, otherwise the default.
std::uint64_t memory_budget();

/// Throws ResourceLimitError when `estimate` exceeds the budget (the
/// override if given, else memory_budget()).
void require_budget(std::uint64_t estimate, const std::string& what,
                    std::optional<std::uint64_t> override_budget = {});

}  // namespace proppwalk
