#include "ocb/traversal.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

namespace ocb {
namespace {

struct Step {
  Oid next;
  AccessEvent edge;
};

constexpr std::int32_t kAnyType = -1;

// Neighbours of `oid` in walking order, optionally restricted to one type.
template <typename Fn>
void for_each_edge(const ObjectBase& base, Oid oid, Direction direction, std::int32_t tref,
                   Fn&& fn) {
  const auto& obj = base.objects[static_cast<std::size_t>(oid)];
  if (direction == Direction::kForward) {
    const auto& crefs = base.classes[static_cast<std::size_t>(obj.class_id)].crefs;
    for (std::uint32_t slot = 0; slot < obj.orefs.size(); ++slot) {
      const Oid target = obj.orefs[slot];
      if (target == kNilOid) continue;
      if (tref != kAnyType && crefs[slot].tref != tref) continue;
      fn(Step{target, {oid, slot, target}});
    }
  } else {
    for (const auto& back : obj.backrefs) {
      if (tref != kAnyType) {
        const auto& src = base.objects[static_cast<std::size_t>(back.source)];
        if (base.classes[static_cast<std::size_t>(src.class_id)].crefs[back.slot].tref != tref) {
          continue;
        }
      }
      fn(Step{back.source, {back.source, back.slot, oid}});
    }
  }
}

void notify_visit(const TraversalObserver* observer, Oid oid) {
  if (observer && observer->visit) observer->visit(oid);
}

void notify_cross(const TraversalObserver* observer, const AccessEvent& e) {
  if (observer && observer->cross) observer->cross(e);
}

class PathWalker {
 public:
  PathWalker(const ObjectBase& base, Direction direction, std::int32_t tref,
             const TraversalObserver* observer)
      : base_(base), direction_(direction), tref_(tref), observer_(observer) {}

  std::vector<Oid> run(Oid root, std::int32_t depth) {
    visits_.clear();
    path_.clear();
    visit(root, depth);
    return std::move(visits_);
  }

 private:
  void visit(Oid oid, std::int32_t remaining) {
    visits_.push_back(oid);
    notify_visit(observer_, oid);
    if (remaining == 0) return;
    path_.push_back(oid);
    for_each_edge(base_, oid, direction_, tref_, [&](const Step& step) {
      if (std::find(path_.begin(), path_.end(), step.next) != path_.end()) return;
      notify_cross(observer_, step.edge);
      visit(step.next, remaining - 1);
    });
    path_.pop_back();
  }

  const ObjectBase& base_;
  Direction direction_;
  std::int32_t tref_;
  const TraversalObserver* observer_;
  std::vector<Oid> visits_;
  std::vector<Oid> path_;
};

}  // namespace

std::vector<Oid> set_access(const ObjectBase& base, Oid root, std::int32_t depth,
                            Direction direction, const TraversalObserver* observer) {
  base.object(root);
  std::vector<Oid> visited{root};
  std::vector<char> seen(base.objects.size(), 0);
  seen[static_cast<std::size_t>(root)] = 1;
  notify_visit(observer, root);
  std::size_t level_begin = 0;
  for (std::int32_t level = 0; level < depth; ++level) {
    const std::size_t level_end = visited.size();
    if (level_begin == level_end) break;
    for (std::size_t i = level_begin; i < level_end; ++i) {
      for_each_edge(base, visited[i], direction, kAnyType, [&](const Step& step) {
        auto& mark = seen[static_cast<std::size_t>(step.next)];
        if (mark) return;
        mark = 1;
        notify_cross(observer, step.edge);
        visited.push_back(step.next);
        notify_visit(observer, step.next);
      });
    }
    level_begin = level_end;
  }
  return visited;
}

std::vector<Oid> simple_traversal(const ObjectBase& base, Oid root, std::int32_t depth,
                                  Direction direction, const TraversalObserver* observer) {
  base.object(root);
  return PathWalker(base, direction, kAnyType, observer).run(root, depth);
}

std::vector<Oid> hierarchy_traversal(const ObjectBase& base, Oid root, std::int32_t tref,
                                     std::int32_t depth, Direction direction,
                                     const TraversalObserver* observer) {
  base.object(root);
  return PathWalker(base, direction, tref, observer).run(root, depth);
}

std::size_t draw_stochastic_slot(std::size_t slot_count, RandomState& rng) {
  const double u = rng.next_unit();
  const double norm = slot_count >= 64 ? 1.0 : 1.0 - std::ldexp(1.0, -static_cast<int>(slot_count));
  double cumulative = 0.0;
  for (std::size_t n = 1; n <= slot_count; ++n) {
    cumulative += std::ldexp(1.0, -static_cast<int>(std::min<std::size_t>(n, 1074))) / norm;
    if (u < cumulative) return n - 1;
  }
  return slot_count - 1;
}

std::vector<Oid> stochastic_traversal(const ObjectBase& base, Oid root, std::int32_t depth,
                                      RandomState& rng, Direction direction,
                                      const TraversalObserver* observer) {
  base.object(root);
  std::vector<Oid> visits{root};
  notify_visit(observer, root);
  Oid current = root;
  for (std::int32_t step = 0; step < depth; ++step) {
    const auto& obj = base.objects[static_cast<std::size_t>(current)];
    if (direction == Direction::kForward) {
      const bool any = std::any_of(obj.orefs.begin(), obj.orefs.end(),
                                   [](Oid r) { return r != kNilOid; });
      if (!any) break;
      const auto slot = static_cast<std::uint32_t>(draw_stochastic_slot(obj.orefs.size(), rng));
      const Oid target = obj.orefs[slot];
      if (target == kNilOid) continue;
      notify_cross(observer, {current, slot, target});
      current = target;
    } else {
      if (obj.backrefs.empty()) break;
      const auto& back = obj.backrefs[draw_stochastic_slot(obj.backrefs.size(), rng)];
      notify_cross(observer, {back.source, back.slot, current});
      current = back.source;
    }
    visits.push_back(current);
    notify_visit(observer, current);
  }
  return visits;
}

}  // namespace ocb
