#pragma once

#include <compare>
#include <cstdint>
#include <vector>

#include "ocb/params.hpp"

namespace ocb {

// Class-level reference slot (CRef + TRef).
struct ClassRef {
  ClassId target = kNilClass;
  std::int32_t tref = 0;
  friend bool operator==(const ClassRef&, const ClassRef&) = default;
};

struct ClassDescriptor {
  ClassId id = kNilClass;
  bool live = true;
  std::vector<ClassRef> crefs;
  std::int64_t basesize = 0;
  std::int64_t instance_size = 0;
  std::vector<Oid> iterator;  // ascending OIDs of live instances

  friend bool operator==(const ClassDescriptor&, const ClassDescriptor&) = default;
};

// Reverse reference: `source`'s orefs[slot] points at the owner.
struct BackRef {
  Oid source = kNilOid;
  std::uint32_t slot = 0;
  friend auto operator<=>(const BackRef&, const BackRef&) = default;
};

struct ObjectInstance {
  Oid oid = kNilOid;
  ClassId class_id = kNilClass;
  bool live = true;
  std::vector<std::int32_t> attributes;
  std::int64_t filler_size = 0;
  std::vector<Oid> orefs;  // aligned with the owning class' crefs
  std::vector<BackRef> backrefs;

  friend bool operator==(const ObjectInstance&, const ObjectInstance&) = default;
};

inline constexpr std::int32_t kAttributeValueRange = 100;  // attribute values lie in [0, 99]

// The whole generated database. Classes and objects are indexed by id; dead
// entries stay in place so ids are never reused.
struct ObjectBase {
  DatabaseParams params;
  std::uint64_t seed = kDefaultSeed;
  std::vector<ClassDescriptor> classes;
  std::vector<ObjectInstance> objects;

  Oid next_oid() const noexcept { return static_cast<Oid>(objects.size()); }
  ClassId next_class_id() const noexcept { return static_cast<ClassId>(classes.size()); }

  bool is_live(Oid oid) const noexcept {
    return oid >= 0 && oid < next_oid() && objects[static_cast<std::size_t>(oid)].live;
  }
  bool is_live_class(ClassId id) const noexcept {
    return id >= 0 && id < next_class_id() && classes[static_cast<std::size_t>(id)].live;
  }

  // Throw NotFoundError on dead or unknown ids.
  const ObjectInstance& object(Oid oid) const;
  ObjectInstance& object(Oid oid);
  const ClassDescriptor& class_at(ClassId id) const;
  ClassDescriptor& class_at(ClassId id);

  std::int64_t live_object_count() const noexcept { return live_objects_; }
  std::int64_t live_class_count() const noexcept { return live_classes_; }
  std::vector<Oid> live_oids() const;
  std::vector<ClassId> live_class_ids() const;

  // Sum of filler sizes over live objects.
  std::int64_t total_bytes() const;

  // Sets orefs[slot] of `source` to `target` and maintains the target's backrefs.
  void link(Oid source, std::uint32_t slot, Oid target);
  // Clears orefs[slot] and removes the matching backref.
  void unlink(Oid source, std::uint32_t slot);

  // Object creation / removal primitives used by the generator and evolutions.
  Oid append_object(ClassId class_id, std::vector<std::int32_t> attributes);
  // Removes every incoming and outgoing edge, drops it from its class
  // iterator and marks it dead. Returns the OIDs whose orefs changed.
  std::vector<Oid> remove_object(Oid oid);
  ClassId append_class(std::vector<ClassRef> crefs, std::int64_t basesize);
  // Deletes all instances, NILs every class-level slot targeting the class.
  // Returns the deleted OIDs.
  std::vector<Oid> remove_class(ClassId id);

  // Recounts live totals after bulk loads.
  void recount();

  friend bool operator==(const ObjectBase& a, const ObjectBase& b) {
    return a.params == b.params && a.seed == b.seed && a.classes == b.classes &&
           a.objects == b.objects;
  }

 private:
  std::int64_t live_objects_ = 0;
  std::int64_t live_classes_ = 0;
};

}  // namespace ocb
