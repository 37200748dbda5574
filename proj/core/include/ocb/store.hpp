#pragma once

#include <cstdint>
#include <list>
#include <optional>
#include <ostream>
#include <unordered_map>
#include <vector>

#include "ocb/object_base.hpp"
#include "ocb/params.hpp"

namespace ocb {

using PageId = std::int64_t;

// Inclusive page range holding an object's bytes. Empty objects still occupy
// the page their offset falls in.
struct PageSpan {
  PageId first = 0;
  PageId last = 0;
  std::int64_t size() const noexcept { return last - first + 1; }
  friend bool operator==(const PageSpan&, const PageSpan&) = default;
};

// Ordered object sequence; objects are packed back to back in this order.
struct PlacementPlan {
  std::vector<Oid> ordering;
};

struct StoreStats {
  std::int64_t transaction_page_reads = 0;
  std::int64_t transaction_page_writes = 0;
  std::int64_t clustering_page_ios = 0;
  std::int64_t buffer_hits = 0;
  std::int64_t page_touches = 0;

  friend bool operator==(const StoreStats&, const StoreStats&) = default;
};

// Page a byte extent [offset, offset + size) covers.
PageSpan page_span(std::int64_t offset, std::int64_t size, std::int64_t page_size);

// Simulated paged object store with a write-back LRU buffer pool.
class Store {
 public:
  explicit Store(StoreConfig config);

  // Default placement: ascending OID order, every page on disk, empty buffer.
  static Store place_initial(const ObjectBase& base, StoreConfig config);

  const StoreConfig& config() const noexcept { return config_; }
  const StoreStats& stats() const noexcept { return stats_; }

  // Pages spanned by the allocated address space (holes included).
  std::int64_t page_count() const noexcept;
  std::int64_t live_bytes() const noexcept { return live_bytes_; }
  std::int64_t live_objects() const noexcept { return live_objects_; }
  bool contains(Oid oid) const noexcept;
  PageSpan pages_of(Oid oid) const;
  std::vector<Oid> live_oids() const;

  // Touch every page of the object. Throw NotFoundError for unknown OIDs.
  void read_object(Oid oid);
  void write_object(Oid oid);

  // Appends at the end of the address space; returns the pages used.
  PageSpan allocate_object(Oid oid, std::int64_t size);
  // Leaves a hole; the space is not reused until the next placement.
  void free_object(Oid oid);

  // Repacks objects in plan order. Charges the pages holding live data in the
  // old layout plus the pages written in the new one to clustering_page_ios,
  // then empties the buffer. Throws InvalidPlanError unless the plan is a
  // permutation of the live OIDs.
  void apply_placement(const PlacementPlan& plan);

  // Drops buffer contents without I/O (cold restart).
  void clear_buffer();
  std::int64_t resident_pages() const noexcept { return static_cast<std::int64_t>(lru_.size()); }
  bool is_resident(PageId page) const { return frames_.count(page) != 0; }
  // Resident pages from most to least recently used.
  std::vector<PageId> lru_order() const { return {lru_.begin(), lru_.end()}; }

  // One line per page I/O: "<read|write> <page> <transaction|clustering>".
  void set_trace(std::ostream* trace) noexcept { trace_ = trace; }

 private:
  struct Extent {
    std::int64_t offset = 0;
    std::int64_t size = 0;
  };
  struct Frame {
    std::list<PageId>::iterator position;
    bool dirty = false;
  };

  const Extent& extent(Oid oid) const;
  void touch_object(Oid oid, bool dirty);
  void touch(PageId page, bool dirty);
  void log(const char* op, PageId page, const char* cause);

  StoreConfig config_;
  StoreStats stats_;
  std::vector<std::optional<Extent>> extents_;
  std::int64_t tail_ = 0;
  std::int64_t live_bytes_ = 0;
  std::int64_t live_objects_ = 0;
  std::list<PageId> lru_;  // front = most recently used
  std::unordered_map<PageId, Frame> frames_;
  std::ostream* trace_ = nullptr;
};

}  // namespace ocb
