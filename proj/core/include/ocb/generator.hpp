#pragma once

#include <optional>

#include "ocb/object_base.hpp"
#include "ocb/prng.hpp"

namespace ocb {

// Step 1: instantiate the metaclass into params.nc classes. Reference types
// follow dist1, targets follow dist2 inside the class locality window, and
// uniform targets are NIL with probability params.pnil.
ObjectBase generate_schema(const DatabaseParams& params, RandomState& rng);

// Step 2: make every acyclic-flagged reference type a DAG at class level.
// Classes are scanned in ascending id; a slot whose target can reach its own
// class is redrawn up to maxretry times, then set to NIL.
void enforce_consistency(ObjectBase& schema, RandomState& rng);

// instance_size = basesize + sum of basesize over the distinct transitive
// ancestors along the inheritance reference type.
void compute_instance_sizes(ObjectBase& schema);

// Step 3: create params.no objects (class via dist3) and link them (via dist4)
// inside the object locality window. Backrefs are maintained as links are made.
void populate_objects(ObjectBase& base, RandomState& rng);

// All three steps from a seed.
ObjectBase generate_base(const DatabaseParams& params, std::uint64_t seed);

// True when `to` is reachable from `from` over live class slots of type `tref`
// (a class always reaches itself).
bool class_reaches(const ObjectBase& base, ClassId from, ClassId to, std::int32_t tref);

// Schema evolution: a new class built with the step-1 procedure, no instances.
ClassId insert_class(ObjectBase& base, RandomState& rng);

// Database evolution: one object linked with the step-3 procedure. Returns
// nullopt when no live class is available.
std::optional<Oid> insert_object(ObjectBase& base, RandomState& rng);

}  // namespace ocb
