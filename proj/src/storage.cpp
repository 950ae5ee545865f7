#include "bitprobe/storage.hpp"

#include <algorithm>
#include <fstream>
#include <iterator>
#include <limits>
#include <stdexcept>
#include <string>

namespace bitprobe {

namespace {

using u128 = unsigned __int128;

constexpr std::uint8_t kMagic[4] = {'B', 'P', 'S', '1'};

class Writer {
 public:
  void u8(std::uint8_t v) { out_.push_back(v); }
  void u16(std::uint16_t v) { le(v, 2); }
  void u32(std::uint64_t v) {
    if (v > std::numeric_limits<std::uint32_t>::max()) {
      throw ParamError("value " + std::to_string(v) + " does not fit a 32-bit header field");
    }
    le(v, 4);
  }
  void u64(std::uint64_t v) { le(v, 8); }
  void bytes(std::span<const std::uint8_t> b) { out_.insert(out_.end(), b.begin(), b.end()); }

  void seed(const PolySeed& s) {
    u32(s.indep_k());
    for (auto c : s.coeffs()) {
      le(c, s.field().element_bytes());
    }
  }
  void bitmap(const Bitmap& b) {
    u64(b.size());
    b.append_bytes(out_);
  }

  std::vector<std::uint8_t> take() { return std::move(out_); }

 private:
  void le(std::uint64_t v, unsigned n) {
    for (unsigned i = 0; i < n; ++i) {
      out_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
    }
  }

  std::vector<std::uint8_t> out_;
};

[[noreturn]] void fail(FormatErrorCode code, const std::string& what) {
  throw FormatError(code, what);
}

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> in) : in_(in) {}

  std::uint64_t le(unsigned n, const char* what) {
    need(n, what);
    std::uint64_t v = 0;
    for (unsigned i = 0; i < n; ++i) {
      v |= static_cast<std::uint64_t>(in_[pos_ + i]) << (8 * i);
    }
    pos_ += n;
    return v;
  }
  std::span<const std::uint8_t> take(std::size_t n, const char* what) {
    need(n, what);
    auto s = in_.subspan(pos_, n);
    pos_ += n;
    return s;
  }
  std::size_t remaining() const noexcept { return in_.size() - pos_; }

 private:
  void need(std::size_t n, const char* what) const {
    if (in_.size() - pos_ < n) {
      fail(FormatErrorCode::truncated_section, std::string("truncated ") + what);
    }
  }

  std::span<const std::uint8_t> in_;
  std::size_t pos_ = 0;
};

struct Header {
  SchemeKind kind;
  unsigned universe_bits;
  unsigned log2_s;
  std::uint64_t d;
  Ratio eps;
  std::uint64_t indep_k;
  FieldSpec field = FieldSpec::gf64();
  std::uint64_t master_seed;
};

// A loaded scheme does not know the capacity it was built for; report the
// largest n the stored right side supports under s ≥ 2·d²·n.
std::uint64_t implied_capacity(std::uint64_t m, unsigned log2_s, std::uint64_t d) {
  const u128 per = u128{2} * d * d;
  const u128 cap = (u128{1} << log2_s) / per;
  return static_cast<std::uint64_t>(std::clamp<u128>(cap, 1, m));
}

void check_group(const Header& h, unsigned log2_s, std::uint64_t d, std::uint64_t indep_k) {
  if (log2_s > std::min(63u, h.field.width())) {
    fail(FormatErrorCode::invariant_violation, "log2_s exceeds the field width");
  }
  if (d == 0) {
    fail(FormatErrorCode::invariant_violation, "left degree is zero");
  }
  if (indep_k == 0) {
    fail(FormatErrorCode::invariant_violation, "indep_k is zero");
  }
  const u128 points = (u128{1} << h.universe_bits) * d;
  if (h.field.width() < 64 ? points > (u128{1} << h.field.width()) : points > (u128{1} << 64)) {
    fail(FormatErrorCode::invariant_violation, "m·d does not fit the field");
  }
}

Header read_header(Reader& r) {
  const auto magic = r.take(4, "magic");
  if (!std::equal(magic.begin(), magic.end(), std::begin(kMagic))) {
    fail(FormatErrorCode::bad_magic, "not a scheme file (bad magic)");
  }
  const auto version = r.le(2, "header");
  if (version != kFormatVersion) {
    fail(FormatErrorCode::unsupported_version,
         "unsupported format version " + std::to_string(version));
  }
  Header h;
  const auto kind = r.le(1, "header");
  if (kind < 1 || kind > 3) {
    fail(FormatErrorCode::invariant_violation, "unknown scheme kind " + std::to_string(kind));
  }
  h.kind = static_cast<SchemeKind>(kind);
  h.universe_bits = static_cast<unsigned>(r.le(4, "header"));
  h.log2_s = static_cast<unsigned>(r.le(4, "header"));
  h.d = r.le(4, "header");
  const auto eps_num = r.le(4, "header");
  const auto eps_den = r.le(4, "header");
  h.indep_k = r.le(4, "header");
  const auto width = static_cast<unsigned>(r.le(1, "header"));
  h.master_seed = r.le(8, "header");

  if (h.universe_bits < 1 || h.universe_bits > 63) {
    fail(FormatErrorCode::invariant_violation, "universe_bits outside [1, 63]");
  }
  if (eps_den == 0) {
    fail(FormatErrorCode::invariant_violation, "eps has a zero denominator");
  }
  h.eps = Ratio(eps_num, eps_den);
  if (!h.eps.is_proper()) {
    fail(FormatErrorCode::invariant_violation, "eps outside (0, 1)");
  }
  try {
    h.field = FieldSpec::gf(width);
  } catch (const ParamError&) {
    fail(FormatErrorCode::invariant_violation, "unsupported field width " + std::to_string(width));
  }
  check_group(h, h.log2_s, h.d, h.indep_k);
  return h;
}

PolySeed read_seed(Reader& r, const Header& h, std::uint64_t indep_k) {
  const auto count = r.le(4, "seed section");
  if (count != indep_k) {
    fail(FormatErrorCode::invariant_violation, "seed length differs from indep_k");
  }
  std::vector<FieldElement> coeffs(count);
  for (auto& c : coeffs) {
    c = r.le(h.field.element_bytes(), "seed section");
    if (!h.field.contains(c)) {
      fail(FormatErrorCode::invariant_violation, "seed element does not fit the field");
    }
  }
  return PolySeed(h.field, std::move(coeffs));
}

Bitmap read_bitmap(Reader& r, unsigned log2_s) {
  const auto bits = r.le(8, "bitmap section");
  if (bits != (std::uint64_t{1} << log2_s)) {
    fail(FormatErrorCode::invariant_violation, "bitmap length differs from s");
  }
  const auto bytes = r.take(static_cast<std::size_t>((bits + 7) / 8), "bitmap section");
  try {
    return Bitmap::from_bytes(bytes, bits);
  } catch (const std::invalid_argument& e) {
    fail(FormatErrorCode::invariant_violation, e.what());
  }
}

SeededGraph make_graph(const Header& h, unsigned log2_s, std::uint64_t d, PolySeed seed) {
  GraphParams p;
  p.m = std::uint64_t{1} << h.universe_bits;
  p.log2_s = log2_s;
  p.d = d;
  p.eps = h.eps;
  p.n_cap = implied_capacity(p.m, log2_s, d);
  try {
    return SeededGraph(p, std::move(seed));
  } catch (const ParamError& e) {
    fail(FormatErrorCode::invariant_violation, e.what());
  }
}

void write_header(Writer& w, SchemeKind kind, const SeededGraph& g, std::uint64_t master_seed) {
  const auto& p = g.params();
  w.bytes(kMagic);
  w.u16(kFormatVersion);
  w.u8(static_cast<std::uint8_t>(kind));
  w.u32(p.universe_bits());
  w.u32(p.log2_s);
  w.u32(p.d);
  w.u32(p.eps.num());
  w.u32(p.eps.den());
  w.u32(g.seed().indep_k());
  w.u8(static_cast<std::uint8_t>(g.seed().field().width()));
  w.u64(master_seed);
}

}  // namespace

SchemeKind kind_of(const AnyScheme& scheme) noexcept {
  return static_cast<SchemeKind>(scheme.index() + 1);
}

std::vector<std::uint8_t> save(const OneProbeScheme& scheme) {
  Writer w;
  write_header(w, SchemeKind::one_probe, scheme.graph(), scheme.master_seed());
  w.seed(scheme.seed());
  w.bitmap(scheme.bitmap());
  return w.take();
}

std::vector<std::uint8_t> save(const TwoProbeScheme& scheme) {
  if (!(scheme.g1().seed().field() == scheme.g2().seed().field())) {
    throw ParamError("both stages must use the same field");
  }
  Writer w;
  write_header(w, SchemeKind::two_probe, scheme.g1(), scheme.master_seed());
  w.seed(scheme.g1().seed());
  w.bitmap(scheme.b1());
  w.u32(scheme.g2().params().log2_s);
  w.u32(scheme.g2().params().d);
  w.u32(scheme.g2().seed().indep_k());
  w.u64(scheme.w_size());
  w.seed(scheme.g2().seed());
  w.bitmap(scheme.b2());
  return w.take();
}

std::vector<std::uint8_t> save(const BmrvScheme& scheme) {
  Writer w;
  write_header(w, SchemeKind::bmrv, scheme.graph(), scheme.master_seed());
  w.seed(scheme.graph().seed());
  w.bitmap(scheme.labels());
  return w.take();
}

std::vector<std::uint8_t> save(const AnyScheme& scheme) {
  return std::visit([](const auto& s) { return save(s); }, scheme);
}

AnyScheme load(std::span<const std::uint8_t> bytes) {
  Reader r(bytes);
  const Header h = read_header(r);
  auto seed = read_seed(r, h, h.indep_k);
  auto bitmap = read_bitmap(r, h.log2_s);
  auto graph = make_graph(h, h.log2_s, h.d, std::move(seed));

  auto finish = [&](AnyScheme scheme) {
    if (r.remaining() != 0) {
      fail(FormatErrorCode::invariant_violation, "trailing bytes after the last section");
    }
    return scheme;
  };

  switch (h.kind) {
    case SchemeKind::one_probe:
      return finish(OneProbeScheme(std::move(graph), std::move(bitmap), h.master_seed));
    case SchemeKind::bmrv:
      return finish(BmrvScheme(std::move(graph), std::move(bitmap), h.master_seed));
    case SchemeKind::two_probe: {
      const auto log2_s2 = static_cast<unsigned>(r.le(4, "second group header"));
      const auto d2 = r.le(4, "second group header");
      const auto indep_k2 = r.le(4, "second group header");
      const auto w_size = r.le(8, "second group header");
      check_group(h, log2_s2, d2, indep_k2);
      if (w_size > (std::uint64_t{1} << h.universe_bits)) {
        fail(FormatErrorCode::invariant_violation, "w_size exceeds the universe");
      }
      auto seed2 = read_seed(r, h, indep_k2);
      auto bitmap2 = read_bitmap(r, log2_s2);
      auto graph2 = make_graph(h, log2_s2, d2, std::move(seed2));
      return finish(TwoProbeScheme(std::move(graph), std::move(bitmap), std::move(graph2),
                                   std::move(bitmap2), w_size, h.master_seed));
    }
  }
  fail(FormatErrorCode::invariant_violation, "unknown scheme kind");
}

SectionLayout section_layout(std::span<const std::uint8_t> header) {
  Reader r(header);
  const Header h = read_header(r);
  SectionLayout layout;
  layout.kind = h.kind;
  layout.seed_offset = kHeaderBytes;
  layout.seed_payload_bytes = static_cast<std::size_t>(h.indep_k) * h.field.element_bytes();
  layout.bitmap_offset = layout.seed_offset + 4 + layout.seed_payload_bytes;
  layout.bitmap_payload_bytes = static_cast<std::size_t>(((std::uint64_t{1} << h.log2_s) + 7) / 8);
  return layout;
}

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error("cannot open " + path.string());
  }
  return std::vector<std::uint8_t>(std::istreambuf_iterator<char>(in), {});
}

void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw Error("cannot open " + path.string() + " for writing");
  }
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) {
    throw Error("write to " + path.string() + " failed");
  }
}

}  // namespace bitprobe
