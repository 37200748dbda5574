#pragma once

// Brute-force reference implementations used to check the library. They share
// no code with it beyond the data types.

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <deque>
#include <map>
#include <set>
#include <tuple>
#include <vector>

#include "ocb/object_base.hpp"

namespace ocb::oracle {

struct Edge {
  Oid from;
  Oid to;
  std::int32_t tref;
};

inline std::int32_t edge_type(const ObjectBase& base, Oid source, std::size_t slot) {
  const auto& obj = base.objects[static_cast<std::size_t>(source)];
  return base.classes[static_cast<std::size_t>(obj.class_id)].crefs[slot].tref;
}

// Adjacency lists in walking order. Reverse lists transpose the forward edge
// set, listing sources by (source, slot): the order a freshly generated base
// keeps its backrefs in.
inline std::vector<std::vector<Edge>> adjacency(const ObjectBase& base, bool reverse) {
  std::vector<std::vector<Edge>> adj(base.objects.size());
  for (const auto& obj : base.objects) {
    if (!obj.live) continue;
    for (std::size_t k = 0; k < obj.orefs.size(); ++k) {
      const Oid t = obj.orefs[k];
      if (t == kNilOid) continue;
      const auto type = edge_type(base, obj.oid, k);
      if (!reverse) {
        adj[static_cast<std::size_t>(obj.oid)].push_back({obj.oid, t, type});
      } else {
        adj[static_cast<std::size_t>(t)].push_back({t, obj.oid, type});
      }
    }
  }
  return adj;
}

// Objects within `depth` hops of root (breadth-first distances).
inline std::set<Oid> bfs_set(const ObjectBase& base, Oid root, std::int32_t depth, bool reverse) {
  const auto adj = adjacency(base, reverse);
  std::map<Oid, std::int32_t> dist{{root, 0}};
  std::deque<Oid> queue{root};
  while (!queue.empty()) {
    const Oid v = queue.front();
    queue.pop_front();
    if (dist[v] == depth) continue;
    for (const auto& e : adj[static_cast<std::size_t>(v)]) {
      if (dist.count(e.to)) continue;
      dist[e.to] = dist[v] + 1;
      queue.push_back(e.to);
    }
  }
  std::set<Oid> out;
  for (const auto& [v, d] : dist) out.insert(v);
  return out;
}

// Endpoints of every simple path from root of at most `depth` edges, in
// lexicographic order of the paths (edge order = adjacency order). `tref` < 0
// means any type.
inline std::vector<Oid> path_enumeration(const ObjectBase& base, Oid root, std::int32_t depth,
                                         std::int32_t tref, bool reverse) {
  const auto adj = adjacency(base, reverse);
  std::vector<Oid> out;
  std::vector<std::vector<Oid>> stack{{root}};
  while (!stack.empty()) {
    auto path = std::move(stack.back());
    stack.pop_back();
    out.push_back(path.back());
    if (static_cast<std::int32_t>(path.size()) - 1 == depth) continue;
    const auto& edges = adj[static_cast<std::size_t>(path.back())];
    for (auto it = edges.rbegin(); it != edges.rend(); ++it) {
      if (tref >= 0 && it->tref != tref) continue;
      if (std::find(path.begin(), path.end(), it->to) != path.end()) continue;
      auto next = path;
      next.push_back(it->to);
      stack.push_back(std::move(next));
    }
  }
  return out;
}

// Kahn's algorithm on the class graph restricted to one reference type.
// True when every live class can be ordered (no cycle, self-loops included).
inline bool class_graph_is_acyclic(const ObjectBase& base, std::int32_t tref) {
  const auto n = base.classes.size();
  std::vector<std::int64_t> indegree(n, 0);
  std::vector<std::vector<std::size_t>> out(n);
  std::size_t live = 0;
  for (const auto& cls : base.classes) {
    if (!cls.live) continue;
    ++live;
    for (const auto& ref : cls.crefs) {
      if (ref.tref != tref || ref.target < 0 || !base.classes[static_cast<std::size_t>(ref.target)].live) {
        continue;
      }
      out[static_cast<std::size_t>(cls.id)].push_back(static_cast<std::size_t>(ref.target));
      ++indegree[static_cast<std::size_t>(ref.target)];
    }
  }
  std::deque<std::size_t> ready;
  for (const auto& cls : base.classes) {
    if (cls.live && indegree[static_cast<std::size_t>(cls.id)] == 0) {
      ready.push_back(static_cast<std::size_t>(cls.id));
    }
  }
  std::size_t ordered = 0;
  while (!ready.empty()) {
    const auto v = ready.front();
    ready.pop_front();
    ++ordered;
    for (auto t : out[v]) {
      if (--indegree[t] == 0) ready.push_back(t);
    }
  }
  return ordered == live;
}

// Every non-NIL oref has exactly one matching backref and vice versa.
inline bool backrefs_symmetric(const ObjectBase& base) {
  std::multiset<std::tuple<Oid, Oid, std::uint32_t>> forward, backward;
  for (const auto& obj : base.objects) {
    if (!obj.live) continue;
    for (std::uint32_t k = 0; k < obj.orefs.size(); ++k) {
      if (obj.orefs[k] != kNilOid) forward.insert({obj.orefs[k], obj.oid, k});
    }
    for (const auto& b : obj.backrefs) backward.insert({obj.oid, b.source, b.slot});
  }
  return forward == backward;
}

// References (object or class level) pointing at dead or missing entities.
inline std::int64_t dangling_references(const ObjectBase& base) {
  std::int64_t bad = 0;
  for (const auto& obj : base.objects) {
    if (!obj.live) continue;
    for (Oid t : obj.orefs) {
      if (t != kNilOid && !base.is_live(t)) ++bad;
    }
    for (const auto& b : obj.backrefs) {
      if (!base.is_live(b.source)) ++bad;
    }
  }
  for (const auto& cls : base.classes) {
    if (!cls.live) continue;
    for (const auto& ref : cls.crefs) {
      if (ref.target != kNilClass && !base.is_live_class(ref.target)) ++bad;
    }
    for (Oid oid : cls.iterator) {
      if (!base.is_live(oid) || base.objects[static_cast<std::size_t>(oid)].class_id != cls.id) ++bad;
    }
  }
  return bad;
}

// Object references outside [oid - olocref, oid + olocref] or to an instance
// of a class other than the declared target; class references outside
// [id - clocref, id + clocref].
inline std::int64_t locality_violations(const ObjectBase& base) {
  const auto& p = base.params;
  std::int64_t bad = 0;
  for (const auto& cls : base.classes) {
    if (!cls.live) continue;
    for (const auto& ref : cls.crefs) {
      if (ref.target == kNilClass) continue;
      if (std::abs(static_cast<std::int64_t>(ref.target) - cls.id) > p.class_locality()) ++bad;
    }
  }
  for (const auto& obj : base.objects) {
    if (!obj.live) continue;
    const auto& crefs = base.classes[static_cast<std::size_t>(obj.class_id)].crefs;
    for (std::size_t k = 0; k < obj.orefs.size(); ++k) {
      const Oid t = obj.orefs[k];
      if (t == kNilOid) continue;
      if (std::abs(t - obj.oid) > p.object_locality()) ++bad;
      if (base.objects[static_cast<std::size_t>(t)].class_id != crefs[k].target) ++bad;
    }
  }
  return bad;
}

// Straightforward list-based LRU with write-back dirty tracking.
class LruModel {
 public:
  explicit LruModel(std::size_t capacity) : capacity_(capacity) {}

  void touch(std::int64_t page, bool dirty) {
    auto it = std::find_if(frames_.begin(), frames_.end(),
                           [page](const auto& f) { return f.first == page; });
    if (it != frames_.end()) {
      ++hits;
      const bool was_dirty = it->second;
      frames_.erase(it);
      frames_.insert(frames_.begin(), {page, was_dirty || dirty});
      return;
    }
    ++reads;
    if (frames_.size() == capacity_) {
      if (frames_.back().second) ++writes;
      frames_.pop_back();
    }
    frames_.insert(frames_.begin(), {page, dirty});
  }

  std::vector<std::int64_t> order() const {
    std::vector<std::int64_t> out;
    for (const auto& f : frames_) out.push_back(f.first);
    return out;
  }

  std::int64_t reads = 0;
  std::int64_t writes = 0;
  std::int64_t hits = 0;

 private:
  std::size_t capacity_;
  std::vector<std::pair<std::int64_t, bool>> frames_;
};

// Two-sided 95% Student-t critical values, df = 1..10.
inline constexpr double kStudentT975[] = {12.706204736174707, 4.302652729749464,
                                          3.182446305284263,  2.7764451051977934,
                                          2.5705818356363146, 2.4469118511449692,
                                          2.3646242515927844, 2.3060041352041662,
                                          2.2621571627982053, 2.2281388519862744};

// Least-squares fit y = a + b x; returns R^2.
inline double r_squared(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const double b = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  const double a = (sy - b * sx) / n;
  double ss_res = 0, ss_tot = 0;
  const double mean = sy / n;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double fit = a + b * x[i];
    ss_res += (y[i] - fit) * (y[i] - fit);
    ss_tot += (y[i] - mean) * (y[i] - mean);
  }
  return ss_tot == 0 ? 1.0 : 1.0 - ss_res / ss_tot;
}

}  // namespace ocb::oracle
