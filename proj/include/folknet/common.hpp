#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace folknet {

/// Dense per-family identifier, assigned in first-seen order.
using EntityId = std::uint32_t;

enum class EntityKind { user, item, tag };

std::string_view to_string(EntityKind kind);
EntityKind parse_entity_kind(std::string_view text);

/// Raised for problems with input data (malformed records, unknown names,
/// undefined measures). Programming errors use std::invalid_argument.
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace folknet
