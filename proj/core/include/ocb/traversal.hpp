#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "ocb/clustering.hpp"
#include "ocb/object_base.hpp"
#include "ocb/prng.hpp"

namespace ocb {

enum class Direction { kForward, kReverse };

// Callbacks fired while walking the graph. `visit` runs once per entry of the
// returned visit sequence; `cross` runs for every edge actually followed and
// always reports the edge as stored (source holds the slot), whatever the
// walking direction.
struct TraversalObserver {
  std::function<void(Oid)> visit;
  std::function<void(const AccessEvent&)> cross;
};

// Breadth-first over every non-NIL reference to `depth` levels; each object
// is visited at most once.
std::vector<Oid> set_access(const ObjectBase& base, Oid root, std::int32_t depth,
                            Direction direction = Direction::kForward,
                            const TraversalObserver* observer = nullptr);

// Depth-first over every reference to `depth` levels. An object may appear on
// several branches but never twice on the same root-to-leaf path.
std::vector<Oid> simple_traversal(const ObjectBase& base, Oid root, std::int32_t depth,
                                  Direction direction = Direction::kForward,
                                  const TraversalObserver* observer = nullptr);

// Depth-first restricted to slots whose declared type is `tref`.
std::vector<Oid> hierarchy_traversal(const ObjectBase& base, Oid root, std::int32_t tref,
                                     std::int32_t depth,
                                     Direction direction = Direction::kForward,
                                     const TraversalObserver* observer = nullptr);

// Random walk of `depth` steps. Slot N (1-based, of M) is chosen with
// probability 2^-N / (1 - 2^-M); a NIL slot uses up the step in place. Stops
// early at an object whose slots are all NIL.
std::vector<Oid> stochastic_traversal(const ObjectBase& base, Oid root, std::int32_t depth,
                                      RandomState& rng,
                                      Direction direction = Direction::kForward,
                                      const TraversalObserver* observer = nullptr);

// Index in [0, slot_count) drawn with the normalized 1/2^N law, from one PRNG word.
std::size_t draw_stochastic_slot(std::size_t slot_count, RandomState& rng);

}  // namespace ocb
