#include "ocb/store.hpp"

#include <string>

#include "ocb/error.hpp"

namespace ocb {

PageSpan page_span(std::int64_t offset, std::int64_t size, std::int64_t page_size) {
  const PageId first = offset / page_size;
  const PageId last = size > 0 ? (offset + size - 1) / page_size : first;
  return {first, last};
}

Store::Store(StoreConfig config) : config_(config) { validate(config_); }

Store Store::place_initial(const ObjectBase& base, StoreConfig config) {
  Store store(config);
  for (const auto& obj : base.objects) {
    if (obj.live) store.allocate_object(obj.oid, obj.filler_size);
  }
  return store;
}

std::int64_t Store::page_count() const noexcept {
  return (tail_ + config_.page_size - 1) / config_.page_size;
}

bool Store::contains(Oid oid) const noexcept {
  return oid >= 0 && static_cast<std::size_t>(oid) < extents_.size() &&
         extents_[static_cast<std::size_t>(oid)].has_value();
}

const Store::Extent& Store::extent(Oid oid) const {
  if (!contains(oid)) throw NotFoundError("object " + std::to_string(oid) + " not in store");
  return *extents_[static_cast<std::size_t>(oid)];
}

PageSpan Store::pages_of(Oid oid) const {
  const auto& e = extent(oid);
  return page_span(e.offset, e.size, config_.page_size);
}

std::vector<Oid> Store::live_oids() const {
  std::vector<Oid> out;
  out.reserve(static_cast<std::size_t>(live_objects_));
  for (std::size_t i = 0; i < extents_.size(); ++i) {
    if (extents_[i]) out.push_back(static_cast<Oid>(i));
  }
  return out;
}

void Store::read_object(Oid oid) { touch_object(oid, false); }

void Store::write_object(Oid oid) { touch_object(oid, true); }

void Store::touch_object(Oid oid, bool dirty) {
  const auto span = pages_of(oid);
  for (PageId page = span.first; page <= span.last; ++page) touch(page, dirty);
}

void Store::touch(PageId page, bool dirty) {
  ++stats_.page_touches;
  if (auto it = frames_.find(page); it != frames_.end()) {
    ++stats_.buffer_hits;
    lru_.splice(lru_.begin(), lru_, it->second.position);
    it->second.dirty = it->second.dirty || dirty;
    return;
  }
  ++stats_.transaction_page_reads;
  log("read", page, "transaction");
  if (static_cast<std::int64_t>(lru_.size()) >= config_.buffer_pages) {
    const PageId victim = lru_.back();
    lru_.pop_back();
    auto frame = frames_.find(victim);
    if (frame->second.dirty) {
      ++stats_.transaction_page_writes;
      log("write", victim, "transaction");
    }
    frames_.erase(frame);
  }
  lru_.push_front(page);
  frames_.emplace(page, Frame{lru_.begin(), dirty});
}

PageSpan Store::allocate_object(Oid oid, std::int64_t size) {
  if (oid < 0) throw NotFoundError("negative OID");
  if (contains(oid)) throw Error("object " + std::to_string(oid) + " already allocated");
  if (static_cast<std::size_t>(oid) >= extents_.size()) {
    extents_.resize(static_cast<std::size_t>(oid) + 1);
  }
  extents_[static_cast<std::size_t>(oid)] = Extent{tail_, size};
  tail_ += size;
  live_bytes_ += size;
  ++live_objects_;
  return pages_of(oid);
}

void Store::free_object(Oid oid) {
  const auto size = extent(oid).size;
  extents_[static_cast<std::size_t>(oid)].reset();
  live_bytes_ -= size;
  --live_objects_;
}

void Store::apply_placement(const PlacementPlan& plan) {
  std::vector<char> seen(extents_.size(), 0);
  for (Oid oid : plan.ordering) {
    if (!contains(oid)) {
      throw InvalidPlanError("plan names object " + std::to_string(oid) + " which is not live");
    }
    auto& mark = seen[static_cast<std::size_t>(oid)];
    if (mark) throw InvalidPlanError("plan lists object " + std::to_string(oid) + " twice");
    mark = 1;
  }
  if (static_cast<std::int64_t>(plan.ordering.size()) != live_objects_) {
    throw InvalidPlanError("plan covers " + std::to_string(plan.ordering.size()) + " of " +
                           std::to_string(live_objects_) + " live objects");
  }

  // Read every old page holding live bytes.
  std::vector<char> old_pages(static_cast<std::size_t>(page_count()), 0);
  for (const auto& e : extents_) {
    if (!e || e->size == 0) continue;
    const auto span = page_span(e->offset, e->size, config_.page_size);
    for (PageId p = span.first; p <= span.last; ++p) old_pages[static_cast<std::size_t>(p)] = 1;
  }
  for (std::size_t p = 0; p < old_pages.size(); ++p) {
    if (!old_pages[p]) continue;
    ++stats_.clustering_page_ios;
    log("read", static_cast<PageId>(p), "clustering");
  }

  std::int64_t cursor = 0;
  for (Oid oid : plan.ordering) {
    auto& e = *extents_[static_cast<std::size_t>(oid)];
    e.offset = cursor;
    cursor += e.size;
  }
  tail_ = cursor;
  for (PageId p = 0; p < page_count(); ++p) {
    ++stats_.clustering_page_ios;
    log("write", p, "clustering");
  }
  clear_buffer();
}

void Store::clear_buffer() {
  lru_.clear();
  frames_.clear();
}

void Store::log(const char* op, PageId page, const char* cause) {
  if (trace_) *trace_ << op << ' ' << page << ' ' << cause << '\n';
}

}  // namespace ocb
