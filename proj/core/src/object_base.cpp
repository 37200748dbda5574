#include "ocb/object_base.hpp"

#include <algorithm>
#include <string>

#include "ocb/error.hpp"

namespace ocb {
namespace {

[[noreturn]] void missing_object(Oid oid) {
  throw NotFoundError("object " + std::to_string(oid) + " not found");
}

[[noreturn]] void missing_class(ClassId id) {
  throw NotFoundError("class " + std::to_string(id) + " not found");
}

}  // namespace

const ObjectInstance& ObjectBase::object(Oid oid) const {
  if (!is_live(oid)) missing_object(oid);
  return objects[static_cast<std::size_t>(oid)];
}

ObjectInstance& ObjectBase::object(Oid oid) {
  if (!is_live(oid)) missing_object(oid);
  return objects[static_cast<std::size_t>(oid)];
}

const ClassDescriptor& ObjectBase::class_at(ClassId id) const {
  if (!is_live_class(id)) missing_class(id);
  return classes[static_cast<std::size_t>(id)];
}

ClassDescriptor& ObjectBase::class_at(ClassId id) {
  if (!is_live_class(id)) missing_class(id);
  return classes[static_cast<std::size_t>(id)];
}

std::vector<Oid> ObjectBase::live_oids() const {
  std::vector<Oid> out;
  out.reserve(static_cast<std::size_t>(live_objects_));
  for (const auto& o : objects) {
    if (o.live) out.push_back(o.oid);
  }
  return out;
}

std::vector<ClassId> ObjectBase::live_class_ids() const {
  std::vector<ClassId> out;
  for (const auto& c : classes) {
    if (c.live) out.push_back(c.id);
  }
  return out;
}

std::int64_t ObjectBase::total_bytes() const {
  std::int64_t total = 0;
  for (const auto& o : objects) {
    if (o.live) total += o.filler_size;
  }
  return total;
}

void ObjectBase::link(Oid source, std::uint32_t slot, Oid target) {
  auto& src = object(source);
  if (slot >= src.orefs.size()) throw NotFoundError("slot out of range");
  if (src.orefs[slot] != kNilOid) unlink(source, slot);
  object(target).backrefs.push_back({source, slot});
  src.orefs[slot] = target;
}

void ObjectBase::unlink(Oid source, std::uint32_t slot) {
  auto& src = object(source);
  const Oid target = src.orefs[slot];
  if (target == kNilOid) return;
  auto& backs = object(target).backrefs;
  auto it = std::find(backs.begin(), backs.end(), BackRef{source, slot});
  if (it != backs.end()) backs.erase(it);
  src.orefs[slot] = kNilOid;
}

Oid ObjectBase::append_object(ClassId class_id, std::vector<std::int32_t> attributes) {
  auto& cls = class_at(class_id);
  ObjectInstance obj;
  obj.oid = next_oid();
  obj.class_id = class_id;
  obj.attributes = std::move(attributes);
  obj.filler_size = cls.instance_size;
  obj.orefs.assign(cls.crefs.size(), kNilOid);
  cls.iterator.push_back(obj.oid);  // OIDs only grow, so the iterator stays sorted
  objects.push_back(std::move(obj));
  ++live_objects_;
  return objects.back().oid;
}

std::vector<Oid> ObjectBase::remove_object(Oid oid) {
  auto& obj = object(oid);
  std::vector<Oid> touched;
  // Incoming edges: NIL the referencing slots.
  const auto incoming = obj.backrefs;
  for (const auto& back : incoming) {
    unlink(back.source, back.slot);
    touched.push_back(back.source);
  }
  // Outgoing edges: drop our entries from the targets' backrefs.
  for (std::uint32_t slot = 0; slot < obj.orefs.size(); ++slot) {
    const Oid target = obj.orefs[slot];
    if (target == kNilOid) continue;
    unlink(oid, slot);
    if (target != oid) touched.push_back(target);
  }
  auto& it = classes[static_cast<std::size_t>(obj.class_id)].iterator;
  auto pos = std::lower_bound(it.begin(), it.end(), oid);
  if (pos != it.end() && *pos == oid) it.erase(pos);
  obj.live = false;
  --live_objects_;
  std::sort(touched.begin(), touched.end());
  touched.erase(std::unique(touched.begin(), touched.end()), touched.end());
  touched.erase(std::remove(touched.begin(), touched.end(), oid), touched.end());
  return touched;
}

ClassId ObjectBase::append_class(std::vector<ClassRef> crefs, std::int64_t basesize) {
  ClassDescriptor cls;
  cls.id = next_class_id();
  cls.crefs = std::move(crefs);
  cls.basesize = basesize;
  cls.instance_size = basesize;
  classes.push_back(std::move(cls));
  ++live_classes_;
  return classes.back().id;
}

std::vector<Oid> ObjectBase::remove_class(ClassId id) {
  auto& cls = class_at(id);
  std::vector<Oid> deleted = cls.iterator;
  for (Oid oid : deleted) remove_object(oid);
  for (auto& other : classes) {
    if (!other.live) continue;
    for (auto& ref : other.crefs) {
      if (ref.target == id) ref.target = kNilClass;
    }
  }
  cls.live = false;
  --live_classes_;
  return deleted;
}

void ObjectBase::recount() {
  live_objects_ = std::count_if(objects.begin(), objects.end(),
                                [](const ObjectInstance& o) { return o.live; });
  live_classes_ = std::count_if(classes.begin(), classes.end(),
                                [](const ClassDescriptor& c) { return c.live; });
}

}  // namespace ocb
