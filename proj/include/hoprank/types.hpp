#pragma once

#include <cstdint>
#include <limits>

namespace hoprank {

/// Dense internal node id, 0..N-1.
using NodeId = std::uint32_t;

/// Shortest-path length in hops. Every diameter handled here must stay below kUnreachable.
using HopCount = std::uint16_t;

inline constexpr HopCount kUnreachable = std::numeric_limits<HopCount>::max();
inline constexpr NodeId kNoNode = std::numeric_limits<NodeId>::max();

}  // namespace hoprank
