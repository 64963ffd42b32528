#pragma once

#include <compare>
#include <cstdint>
#include <functional>

namespace taletorium {

/// Stable per-story entity identifier. Never reused after removal.
struct EntityId {
  std::uint64_t value = 0;

  friend constexpr auto operator<=>(EntityId, EntityId) = default;
};

/// Where a mention sits: fragment index, sentence index within the
/// fragment, token index within the sentence.
struct MentionLocation {
  int fragment = 0;
  int sentence = 0;
  int token = 0;

  friend constexpr auto operator<=>(const MentionLocation&, const MentionLocation&) = default;
};

}  // namespace taletorium

template <>
struct std::hash<taletorium::EntityId> {
  std::size_t operator()(taletorium::EntityId id) const noexcept {
    return std::hash<std::uint64_t>{}(id.value);
  }
};
