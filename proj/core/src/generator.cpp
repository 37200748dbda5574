#include "ocb/generator.hpp"

#include <algorithm>
#include <vector>

#include "ocb/error.hpp"

namespace ocb {
namespace {

struct ClassWindow {
  ClassId low;
  ClassId high;
};

ClassWindow class_window(const DatabaseParams& p, ClassId id, ClassId max_id) {
  const std::int64_t reach = p.class_locality();
  return {static_cast<ClassId>(std::max<std::int64_t>(0, id - reach)),
          static_cast<ClassId>(std::min<std::int64_t>(max_id, id + reach))};
}

// One dist2 target draw. Returns kNilClass when the draw is unusable
// (outside the window or a dead class), which the caller treats as a failed try.
ClassId draw_target(const ObjectBase& base, ClassId id, std::size_t slot, ClassWindow window,
                    RandomState& rng) {
  const auto& dist = base.params.dist2.at(id, slot);
  const auto value = sample(dist, rng, window.low, window.high, slot);
  if (value < window.low || value > window.high) return kNilClass;
  const auto target = static_cast<ClassId>(value);
  return base.is_live_class(target) ? target : kNilClass;
}

ClassId draw_target_with_retry(const ObjectBase& base, ClassId id, std::size_t slot,
                               ClassWindow window, RandomState& rng) {
  const auto& dist = base.params.dist2.at(id, slot);
  if (dist.is_constant()) {
    // Constant slots are set up a priori: -1 is an explicit NIL.
    const auto value = dist.constant_at(slot);
    if (value == kNilClass) return kNilClass;
    return draw_target(base, id, slot, window, rng);
  }
  if (rng.next_unit() < base.params.pnil) return kNilClass;
  for (std::int32_t attempt = 0; attempt <= base.params.maxretry; ++attempt) {
    const ClassId target = draw_target(base, id, slot, window, rng);
    if (target != kNilClass) return target;
  }
  return kNilClass;
}

std::vector<ClassRef> draw_class_refs(const ObjectBase& base, ClassId id, ClassId max_id,
                                      RandomState& rng) {
  const auto& p = base.params;
  const auto slots = static_cast<std::size_t>(p.maxnref.at(id));
  const auto window = class_window(p, id, max_id);
  std::vector<ClassRef> refs(slots);
  for (std::size_t k = 0; k < slots; ++k) {
    refs[k].tref = static_cast<std::int32_t>(sample(p.dist1.at(id, k), rng, 0, p.nreft - 1, k));
    refs[k].target = draw_target_with_retry(base, id, k, window, rng);
  }
  return refs;
}

void repair_class(ObjectBase& base, ClassId id, RandomState& rng) {
  const auto& p = base.params;
  const auto window = class_window(p, id, base.next_class_id() - 1);
  auto& cls = base.classes[static_cast<std::size_t>(id)];
  for (std::size_t k = 0; k < cls.crefs.size(); ++k) {
    const auto ref = cls.crefs[k];
    if (ref.target == kNilClass || !p.is_acyclic_type(ref.tref)) continue;
    if (!class_reaches(base, ref.target, id, ref.tref)) continue;
    ClassId replacement = kNilClass;
    for (std::int32_t attempt = 0; attempt < p.maxretry; ++attempt) {
      const ClassId candidate = draw_target(base, id, k, window, rng);
      if (candidate != kNilClass && !class_reaches(base, candidate, id, ref.tref)) {
        replacement = candidate;
        break;
      }
    }
    cls.crefs[k].target = replacement;
  }
}

// Fills orefs[slot] of `source` following dist4 inside the object window.
void link_slot(ObjectBase& base, Oid source, std::uint32_t slot, RandomState& rng) {
  const auto& p = base.params;
  const auto& obj = base.objects[static_cast<std::size_t>(source)];
  const ClassId owner = obj.class_id;
  const ClassId target_class = base.classes[static_cast<std::size_t>(owner)].crefs[slot].target;
  if (!base.is_live_class(target_class)) return;

  const auto& candidates = base.classes[static_cast<std::size_t>(target_class)].iterator;
  const std::int64_t reach = p.object_locality();
  const auto first = std::lower_bound(candidates.begin(), candidates.end(), source - reach);
  const auto last = std::upper_bound(candidates.begin(), candidates.end(), source + reach);
  const auto count = static_cast<std::int64_t>(last - first);
  if (count == 0) return;  // every retry would see the same empty window

  const auto& dist = p.dist4.at(owner, slot);
  for (std::int32_t attempt = 0; attempt <= p.maxretry; ++attempt) {
    std::int64_t index;
    if (dist.is_constant()) {
      // Constant references are laid out a priori: consecutive slots sharing a
      // target class form a group, and the k-th object of the owning class
      // takes the k-th block of candidates, shifted by the constant value.
      const auto& own = base.classes[static_cast<std::size_t>(owner)];
      const auto rank = static_cast<std::int64_t>(
          std::lower_bound(own.iterator.begin(), own.iterator.end(), source) -
          own.iterator.begin());
      std::size_t group_begin = slot;
      std::size_t group_end = slot + 1;
      while (group_begin > 0 && own.crefs[group_begin - 1].target == target_class) --group_begin;
      while (group_end < own.crefs.size() && own.crefs[group_end].target == target_class) {
        ++group_end;
      }
      const auto width = static_cast<std::int64_t>(group_end - group_begin);
      const auto offset = dist.constant_at(slot) + rank * width +
                          static_cast<std::int64_t>(slot - group_begin);
      index = (offset % count + count) % count;
    } else {
      index = sample(dist, rng, 0, count - 1, slot);
      if (index < 0 || index >= count) continue;
    }
    base.link(source, slot, *(first + index));
    return;
  }
}

std::vector<std::int32_t> draw_attributes(const DatabaseParams& p, RandomState& rng) {
  std::vector<std::int32_t> attrs(static_cast<std::size_t>(p.attrange));
  for (auto& a : attrs) a = static_cast<std::int32_t>(rng.next_int(0, kAttributeValueRange - 1));
  return attrs;
}

}  // namespace

bool class_reaches(const ObjectBase& base, ClassId from, ClassId to, std::int32_t tref) {
  if (from == to) return true;
  if (!base.is_live_class(from)) return false;
  std::vector<char> seen(base.classes.size(), 0);
  std::vector<ClassId> stack{from};
  seen[static_cast<std::size_t>(from)] = 1;
  while (!stack.empty()) {
    const ClassId current = stack.back();
    stack.pop_back();
    for (const auto& ref : base.classes[static_cast<std::size_t>(current)].crefs) {
      if (ref.tref != tref || !base.is_live_class(ref.target)) continue;
      if (ref.target == to) return true;
      auto& mark = seen[static_cast<std::size_t>(ref.target)];
      if (!mark) {
        mark = 1;
        stack.push_back(ref.target);
      }
    }
  }
  return false;
}

ObjectBase generate_schema(const DatabaseParams& params, RandomState& rng) {
  validate(params);
  ObjectBase base;
  base.params = params;
  base.seed = rng.seed();
  base.classes.reserve(static_cast<std::size_t>(params.nc));
  // Classes exist before any reference is drawn.
  for (ClassId id = 0; id < params.nc; ++id) base.append_class({}, params.basesize.at(id));
  for (ClassId id = 0; id < params.nc; ++id) {
    base.classes[static_cast<std::size_t>(id)].crefs =
        draw_class_refs(base, id, params.nc - 1, rng);
  }
  return base;
}

void enforce_consistency(ObjectBase& schema, RandomState& rng) {
  for (ClassId id = 0; id < schema.next_class_id(); ++id) {
    if (schema.is_live_class(id)) repair_class(schema, id, rng);
  }
}

void compute_instance_sizes(ObjectBase& schema) {
  const auto& p = schema.params;
  std::vector<char> seen(schema.classes.size());
  std::vector<ClassId> stack;
  for (auto& cls : schema.classes) {
    if (!cls.live) continue;
    cls.instance_size = cls.basesize;
    if (!p.inheritance_type) continue;
    std::fill(seen.begin(), seen.end(), 0);
    seen[static_cast<std::size_t>(cls.id)] = 1;
    stack.assign(1, cls.id);
    while (!stack.empty()) {
      const ClassId current = stack.back();
      stack.pop_back();
      for (const auto& ref : schema.classes[static_cast<std::size_t>(current)].crefs) {
        if (ref.tref != *p.inheritance_type || !schema.is_live_class(ref.target)) continue;
        auto& mark = seen[static_cast<std::size_t>(ref.target)];
        if (mark) continue;
        mark = 1;
        cls.instance_size += schema.classes[static_cast<std::size_t>(ref.target)].basesize;
        stack.push_back(ref.target);
      }
    }
  }
}

void populate_objects(ObjectBase& base, RandomState& rng) {
  const auto& p = base.params;
  base.objects.reserve(base.objects.size() + static_cast<std::size_t>(p.no));
  for (std::int64_t i = 0; i < p.no; ++i) {
    const auto cls = static_cast<ClassId>(sample(p.dist3, rng, 0, p.nc - 1, static_cast<std::uint64_t>(i)));
    base.append_object(cls, draw_attributes(p, rng));
  }
  for (auto& obj : base.objects) {
    for (std::uint32_t k = 0; k < obj.orefs.size(); ++k) link_slot(base, obj.oid, k, rng);
  }
}

ObjectBase generate_base(const DatabaseParams& params, std::uint64_t seed) {
  RandomState rng(seed);
  ObjectBase base = generate_schema(params, rng);
  enforce_consistency(base, rng);
  compute_instance_sizes(base);
  populate_objects(base, rng);
  return base;
}

ClassId insert_class(ObjectBase& base, RandomState& rng) {
  const ClassId id = base.append_class({}, base.params.basesize.at(base.next_class_id()));
  base.classes[static_cast<std::size_t>(id)].crefs = draw_class_refs(base, id, id, rng);
  repair_class(base, id, rng);
  compute_instance_sizes(base);
  return id;
}

std::optional<Oid> insert_object(ObjectBase& base, RandomState& rng) {
  const auto& p = base.params;
  ClassId cls = kNilClass;
  if (p.dist3.is_constant()) {
    cls = static_cast<ClassId>(p.dist3.constant_at(static_cast<std::uint64_t>(base.next_oid())));
    if (!base.is_live_class(cls)) return std::nullopt;
  } else {
    const auto live = base.live_class_ids();
    if (live.empty()) return std::nullopt;
    cls = live[static_cast<std::size_t>(rng.next_int(0, static_cast<std::int64_t>(live.size()) - 1))];
  }
  const Oid oid = base.append_object(cls, draw_attributes(p, rng));
  const auto slots = base.objects.back().orefs.size();
  for (std::uint32_t k = 0; k < slots; ++k) link_slot(base, oid, k, rng);
  return oid;
}

}  // namespace ocb
