#include "proppwalk/limits.hpp"

#include <cstdlib>

#include "proppwalk/errors.hpp"

namespace proppwalk {

std::uint64_t memory_budget() {
  const char* env = std::getenv("PROPPWALK_MEM_BUDGET");
  if (env == nullptr || *env == '\0') {
    return kDefaultMemoryBudget;
  }
  char* end = nullptr;
  const unsigned long long v = std::strtoull(env, &end, 10);
  if (end == env || *end != '\0') {
    return kDefaultMemoryBudget;
  }
  return v;
}

void require_budget(std::uint64_t estimate, const std::string& what,
                    std::optional<std::uint64_t> override_budget) {
  const std::uint64_t budget = override_budget ? *override_budget : memory_budget();
  if (estimate > budget) {
    throw ResourceLimitError(what + " needs about " + std::to_string(estimate) +
                             " bytes, over the budget of " + std::to_string(budget) +
                             " bytes (set PROPPWALK_MEM_BUDGET to raise it)");
  }
}

}  // namespace proppwalk
