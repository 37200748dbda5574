#pragma once

#include <cstdint>
#include <vector>

#include "ocb/generator.hpp"
#include "ocb/object_base.hpp"

namespace ocb::fixture {

// Empty base with permissive parameters for hand-built graphs.
inline ObjectBase empty_base(std::int32_t nreft = 4) {
  ObjectBase base;
  base.params.nc = 0;
  base.params.no = 0;
  base.params.nreft = nreft;
  base.params.acyclic_types = {0};
  return base;
}

// One class with one slot of type 0 targeting itself; object i -> i + 1.
inline ObjectBase chain(std::int32_t length, std::int64_t size = 100) {
  auto base = empty_base();
  const ClassId c = base.append_class({{0, 0}}, size);
  for (std::int32_t i = 0; i < length; ++i) base.append_object(c, {0});
  for (std::int32_t i = 0; i + 1 < length; ++i) base.link(i, 0, i + 1);
  return base;
}

// Heap-ordered binary tree: object i -> 2i + 1, 2i + 2.
inline ObjectBase binary_tree(std::int32_t count) {
  auto base = empty_base();
  const ClassId c = base.append_class({{0, 0}, {0, 0}}, 100);
  for (std::int32_t i = 0; i < count; ++i) base.append_object(c, {0});
  for (std::int32_t i = 0; i < count; ++i) {
    for (std::uint32_t k = 0; k < 2; ++k) {
      const Oid child = 2 * i + 1 + k;
      if (child < count) base.link(i, k, child);
    }
  }
  return base;
}

// A small generated base for oracle comparisons.
inline ObjectBase small_base(std::int64_t objects = 200, std::uint64_t seed = 7) {
  DatabaseParams p;
  p.nc = 10;
  p.no = objects;
  p.maxnref = 5;
  return generate_base(p, seed);
}

}  // namespace ocb::fixture
