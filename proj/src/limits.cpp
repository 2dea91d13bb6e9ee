#include "epos/limits.hpp"

#include <charconv>
#include <string>

#include "epos/error.hpp"

namespace epos {

namespace {

template <typename T>
T parse_positive(std::string_view key, std::string_view value) {
  T out{};
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc{} || ptr != value.data() + value.size() || out <= 0)
    throw PreconditionError("limit '" + std::string(key) + "' needs a positive integer, got '" +
                            std::string(value) + "'");
  return out;
}

}  // namespace

Limits apply_overrides(Limits base, std::string_view spec) {
  while (!spec.empty()) {
    auto comma = spec.find(',');
    std::string_view item = spec.substr(0, comma);
    spec = comma == std::string_view::npos ? std::string_view{} : spec.substr(comma + 1);
    if (item.empty()) continue;
    auto eq = item.find('=');
    if (eq == std::string_view::npos)
      throw PreconditionError("limit override '" + std::string(item) + "' is not key=value");
    std::string_view key = item.substr(0, eq);
    std::string_view value = item.substr(eq + 1);
    if (key == "max_vars") base.max_vars = parse_positive<int>(key, value);
    else if (key == "max_branches") base.max_branches = parse_positive<std::size_t>(key, value);
    else if (key == "max_conjuncts") base.max_conjuncts = parse_positive<std::size_t>(key, value);
    else if (key == "max_product_arity") base.max_product_arity = parse_positive<int>(key, value);
    else if (key == "max_product_tuples") base.max_product_tuples = parse_positive<std::size_t>(key, value);
    else throw PreconditionError("unknown limit '" + std::string(key) + "'");
  }
  return base;
}

}  // namespace epos
