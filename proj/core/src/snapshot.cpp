#include "ocb/snapshot.hpp"

#include <array>
#include <cstring>
#include <fstream>
#include <iterator>

#include <nlohmann/json.hpp>

#include "ocb/config.hpp"
#include "ocb/error.hpp"

namespace ocb {
namespace {

constexpr std::array<char, 8> kMagic = {'O', 'C', 'B', 'S', 'N', 'A', 'P', '\0'};
constexpr std::array<char, 4> kTrailer = {'O', 'C', 'B', 'E'};

class Writer {
 public:
  template <typename T>
  void put(T value) {
    static_assert(std::is_integral_v<T>);
    using U = std::make_unsigned_t<T>;
    auto bits = static_cast<U>(value);
    for (std::size_t i = 0; i < sizeof(T); ++i) {
      out_.push_back(static_cast<std::uint8_t>(bits & 0xff));
      if constexpr (sizeof(T) > 1) bits >>= 8;
    }
  }

  void bytes(const char* data, std::size_t n) { out_.insert(out_.end(), data, data + n); }

  std::vector<std::uint8_t> take() { return std::move(out_); }

 private:
  std::vector<std::uint8_t> out_;
};

class Reader {
 public:
  explicit Reader(const std::vector<std::uint8_t>& in) : in_(in) {}

  template <typename T>
  T get(const char* what) {
    static_assert(std::is_integral_v<T>);
    need(sizeof(T), what);
    std::make_unsigned_t<T> bits = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i) {
      bits |= static_cast<std::make_unsigned_t<T>>(
          static_cast<std::make_unsigned_t<T>>(in_[pos_ + i]) << (8 * i));
    }
    pos_ += sizeof(T);
    return static_cast<T>(bits);
  }

  std::string text(std::size_t n, const char* what) {
    need(n, what);
    std::string s(reinterpret_cast<const char*>(in_.data() + pos_), n);
    pos_ += n;
    return s;
  }

  // Element counts are bounded by the remaining bytes so corrupt sizes fail
  // cleanly instead of allocating.
  std::size_t count(std::size_t min_element_size, const char* what) {
    const auto start = pos_;
    const auto n = get<std::uint64_t>(what);
    if (n > (in_.size() - pos_) / std::max<std::size_t>(min_element_size, 1)) {
      throw ParseError(std::string("implausible ") + what + " count", start);
    }
    return static_cast<std::size_t>(n);
  }

  std::size_t position() const { return pos_; }
  bool at_end() const { return pos_ == in_.size(); }

  [[noreturn]] void fail(const std::string& what) const { throw ParseError(what, pos_); }

 private:
  void need(std::size_t n, const char* what) const {
    if (in_.size() - pos_ < n) {
      throw ParseError(std::string("truncated snapshot while reading ") + what, pos_);
    }
  }

  const std::vector<std::uint8_t>& in_;
  std::size_t pos_ = 0;
};

}  // namespace

std::vector<std::uint8_t> encode_base(const ObjectBase& base) {
  Writer w;
  w.bytes(kMagic.data(), kMagic.size());
  w.put<std::uint32_t>(kSnapshotVersion);
  w.put<std::uint64_t>(base.seed);
  const std::string params = to_json(base.params).dump();
  w.put<std::uint64_t>(params.size());
  w.bytes(params.data(), params.size());

  w.put<std::uint64_t>(base.classes.size());
  for (const auto& c : base.classes) {
    w.put<std::int32_t>(c.id);
    w.put<std::uint8_t>(c.live ? 1 : 0);
    w.put<std::int64_t>(c.basesize);
    w.put<std::int64_t>(c.instance_size);
    w.put<std::uint64_t>(c.crefs.size());
    for (const auto& r : c.crefs) {
      w.put<std::int32_t>(r.target);
      w.put<std::int32_t>(r.tref);
    }
    w.put<std::uint64_t>(c.iterator.size());
    for (Oid oid : c.iterator) w.put<std::int64_t>(oid);
  }

  w.put<std::uint64_t>(base.objects.size());
  for (const auto& o : base.objects) {
    w.put<std::int64_t>(o.oid);
    w.put<std::int32_t>(o.class_id);
    w.put<std::uint8_t>(o.live ? 1 : 0);
    w.put<std::int64_t>(o.filler_size);
    w.put<std::uint64_t>(o.attributes.size());
    for (auto a : o.attributes) w.put<std::int32_t>(a);
    w.put<std::uint64_t>(o.orefs.size());
    for (Oid r : o.orefs) w.put<std::int64_t>(r);
    w.put<std::uint64_t>(o.backrefs.size());
    for (const auto& b : o.backrefs) {
      w.put<std::int64_t>(b.source);
      w.put<std::uint32_t>(b.slot);
    }
  }
  w.bytes(kTrailer.data(), kTrailer.size());
  return w.take();
}

ObjectBase decode_base(const std::vector<std::uint8_t>& bytes) {
  Reader r(bytes);
  if (r.text(kMagic.size(), "magic") != std::string(kMagic.data(), kMagic.size())) {
    throw ParseError("not an OCB snapshot (bad magic)", 0);
  }
  const auto version = r.get<std::uint32_t>("version");
  if (version != kSnapshotVersion) {
    throw VersionError("snapshot format version " + std::to_string(version) +
                       " is not supported (expected " + std::to_string(kSnapshotVersion) + ")");
  }
  ObjectBase base;
  base.seed = r.get<std::uint64_t>("seed");
  const auto params_at = r.position();
  const auto params_len = r.count(1, "parameter block");
  try {
    base.params = database_from_json(nlohmann::json::parse(r.text(params_len, "parameters")));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("bad parameter block: ") + e.what(), params_at);
  } catch (const ConfigError& e) {
    throw ParseError(std::string("bad parameter block: ") + e.what(), params_at);
  }

  base.classes.resize(r.count(29, "class"));
  for (std::size_t i = 0; i < base.classes.size(); ++i) {
    auto& c = base.classes[i];
    c.id = r.get<std::int32_t>("class id");
    if (c.id != static_cast<ClassId>(i)) r.fail("class ids out of sequence");
    c.live = r.get<std::uint8_t>("class flags") != 0;
    c.basesize = r.get<std::int64_t>("basesize");
    c.instance_size = r.get<std::int64_t>("instance size");
    c.crefs.resize(r.count(8, "class reference"));
    for (auto& ref : c.crefs) {
      ref.target = r.get<std::int32_t>("class reference target");
      ref.tref = r.get<std::int32_t>("class reference type");
    }
    c.iterator.resize(r.count(8, "iterator"));
    for (auto& oid : c.iterator) oid = r.get<std::int64_t>("iterator entry");
  }

  base.objects.resize(r.count(45, "object"));
  for (std::size_t i = 0; i < base.objects.size(); ++i) {
    auto& o = base.objects[i];
    o.oid = r.get<std::int64_t>("oid");
    if (o.oid != static_cast<Oid>(i)) r.fail("object ids out of sequence");
    o.class_id = r.get<std::int32_t>("object class");
    if (o.class_id < 0 || static_cast<std::size_t>(o.class_id) >= base.classes.size()) {
      r.fail("object class out of range");
    }
    o.live = r.get<std::uint8_t>("object flags") != 0;
    o.filler_size = r.get<std::int64_t>("filler size");
    o.attributes.resize(r.count(4, "attribute"));
    for (auto& a : o.attributes) a = r.get<std::int32_t>("attribute");
    o.orefs.resize(r.count(8, "object reference"));
    for (auto& ref : o.orefs) ref = r.get<std::int64_t>("object reference");
    o.backrefs.resize(r.count(12, "backref"));
    for (auto& b : o.backrefs) {
      b.source = r.get<std::int64_t>("backref source");
      b.slot = r.get<std::uint32_t>("backref slot");
    }
  }
  if (r.text(kTrailer.size(), "trailer") != std::string(kTrailer.data(), kTrailer.size())) {
    throw ParseError("bad snapshot trailer", r.position() - kTrailer.size());
  }
  if (!r.at_end()) r.fail("trailing bytes after snapshot");
  base.recount();
  return base;
}

void save_base(const ObjectBase& base, const std::filesystem::path& path) {
  const auto bytes = encode_base(base);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error("failed writing " + path.string());
}

ObjectBase load_base(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open snapshot " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  return decode_base(bytes);
}

}  // namespace ocb
