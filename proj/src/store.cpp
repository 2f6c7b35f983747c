#include "dpc/store.hpp"

#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>
#include <iterator>
#include <limits>
#include <system_error>

#include <json.hpp>
#include <zlib.h>

#include "dpc/error.hpp"

namespace dpc {

namespace fs = std::filesystem;

namespace {

constexpr char kMagic[4] = {'D', 'L', 'Z', 'C'};

class ByteWriter {
 public:
  void raw(const void* p, std::size_t n) {
    const auto* b = static_cast<const unsigned char*>(p);
    bytes_.insert(bytes_.end(), b, b + n);
  }
  void u8(std::uint8_t v) { bytes_.push_back(v); }
  void u32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) bytes_.push_back(static_cast<unsigned char>(v >> (8 * i)));
  }
  void u64(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) bytes_.push_back(static_cast<unsigned char>(v >> (8 * i)));
  }
  void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
  std::vector<unsigned char>& bytes() { return bytes_; }

 private:
  std::vector<unsigned char> bytes_;
};

class ByteReader {
 public:
  ByteReader(const std::vector<unsigned char>& b, std::size_t end) : b_(b), end_(end) {}
  void need(std::size_t n) const {
    require(pos_ + n <= end_, "zero cache truncated", Errc::invariant);
  }
  std::uint8_t u8() {
    need(1);
    return b_[pos_++];
  }
  std::uint32_t u32() {
    need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(b_[pos_++]) << (8 * i);
    return v;
  }
  std::uint64_t u64() {
    need(8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b_[pos_++]) << (8 * i);
    return v;
  }
  double f64() { return std::bit_cast<double>(u64()); }
  std::size_t pos() const { return pos_; }

 private:
  const std::vector<unsigned char>& b_;
  std::size_t end_;
  std::size_t pos_ = 0;
};

std::uint32_t crc32_of(const unsigned char* data, std::size_t n) {
  uLong crc = crc32(0L, Z_NULL, 0);
  // zlib takes uInt lengths; feed in chunks.
  while (n > 0) {
    const auto chunk = static_cast<uInt>(std::min<std::size_t>(n, 1u << 30));
    crc = crc32(crc, data, chunk);
    data += chunk;
    n -= chunk;
  }
  return static_cast<std::uint32_t>(crc);
}

std::vector<unsigned char> slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  require(static_cast<bool>(in), "cannot open " + path.string(), Errc::io);
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  require(!in.bad(), "read failed for " + path.string(), Errc::io);
  return bytes;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::string format_real(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

std::uint32_t file_crc32(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  require(static_cast<bool>(in), "cannot open " + path.string(), Errc::io);
  const std::vector<unsigned char> bytes{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  return crc32_of(bytes.data(), bytes.size());
}

std::string height_token(double T) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, T);
  return std::string(buf, res.ptr);
}

void write_zero_cache(const ZeroSet& set, const fs::path& path, bool force) {
  set.validate();
  if (!force && !set.completeness.certified && fs::exists(path)) {
    bool existing_certified = false;
    try {
      existing_certified = read_zero_cache(path, set.branch_tag).completeness.certified;
    } catch (const Error&) {
      existing_certified = false;  // unreadable files may be replaced
    }
    require(!existing_certified, "refusing to replace certified cache " + path.string() + " with an uncertified set",
            Errc::overwrite_refused);
  }

  ByteWriter w;
  w.raw(kMagic, 4);
  w.u32(kZeroCacheVersion);
  w.u64(set.character.modulus);
  w.u64(set.character.index);
  w.u64(set.conductor);
  w.u32(static_cast<std::uint32_t>(set.parity));
  w.f64(set.height);
  w.f64(set.mesh_step);
  w.f64(set.tolerance);
  w.f64(set.completeness.expected);
  w.u32(set.branch_tag);
  w.u8(set.completeness.certified ? 1 : 0);
  w.u64(set.records.size());
  for (const auto& r : set.records) w.f64(r.ordinate);
  auto& bytes = w.bytes();
  const std::uint32_t crc = crc32_of(bytes.data(), bytes.size());
  w.u32(crc);

  std::error_code ec;
  if (path.has_parent_path()) fs::create_directories(path.parent_path(), ec);
  require(!ec, "cannot create directory for " + path.string() + ": " + ec.message(), Errc::io);
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    require(static_cast<bool>(out), "cannot open " + tmp.string(), Errc::io);
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    out.flush();
    require(static_cast<bool>(out), "write failed for " + tmp.string(), Errc::io);
  }
  fs::rename(tmp, path, ec);
  require(!ec, "cannot move cache into place at " + path.string() + ": " + ec.message(), Errc::io);
}

ZeroSet read_zero_cache(const fs::path& path, std::uint32_t expected_branch_tag) {
  const auto bytes = slurp(path);
  const std::string who = path.string();
  require(bytes.size() >= 8 && std::memcmp(bytes.data(), kMagic, 4) == 0, who + " is not a zero cache file",
          Errc::invariant);
  ByteReader head(bytes, bytes.size());
  head.u32();  // magic
  const std::uint32_t version = head.u32();
  require(version == kZeroCacheVersion,
          who + " has format version " + std::to_string(version) + ", this reader understands " +
              std::to_string(kZeroCacheVersion),
          Errc::version);
  require(bytes.size() >= 4 + 4 + 8 * 3 + 4 + 8 * 4 + 4 + 1 + 8 + 4, who + " is truncated", Errc::checksum);

  const std::size_t body = bytes.size() - 4;
  std::uint32_t stored_crc = 0;
  for (int i = 0; i < 4; ++i) stored_crc |= static_cast<std::uint32_t>(bytes[body + i]) << (8 * i);
  require(crc32_of(bytes.data(), body) == stored_crc, who + " failed its checksum", Errc::checksum);

  ByteReader r(bytes, body);
  r.u32();
  r.u32();
  ZeroSet set;
  set.character.modulus = r.u64();
  set.character.index = r.u64();
  set.conductor = r.u64();
  set.parity = static_cast<int>(r.u32());
  set.height = r.f64();
  set.mesh_step = r.f64();
  set.tolerance = r.f64();
  set.completeness.expected = r.f64();
  set.branch_tag = r.u32();
  set.completeness.certified = r.u8() != 0;
  const std::uint64_t count = r.u64();
  require(count == (body - r.pos()) / 8 && (body - r.pos()) % 8 == 0,
          who + ": record count disagrees with payload length", Errc::invariant);
  require(set.branch_tag == expected_branch_tag,
          who + " was written with rotation branch " + std::to_string(set.branch_tag) + ", expected " +
              std::to_string(expected_branch_tag),
          Errc::branch_mismatch);
  set.records.reserve(count);
  for (std::uint64_t i = 0; i < count; ++i) {
    ZeroRecord rec;
    rec.ordinate = r.f64();
    rec.character = set.character;
    rec.lo = rec.hi = rec.ordinate;
    rec.tolerance = set.tolerance;
    rec.residual = std::numeric_limits<double>::quiet_NaN();
    set.records.push_back(rec);
  }
  set.completeness.found = count;
  set.validate();
  if (set.completeness.certified)
    require(std::abs(static_cast<double>(count) - std::round(set.completeness.expected)) <= 2,
            who + ": certified flag contradicts the stored counts", Errc::invariant);
  return set;
}

fs::path ZeroCache::path_for(const CharacterLabel& label, double T) const {
  return root_ / "zeros" / ("q" + std::to_string(label.modulus)) /
         ("chi" + std::to_string(label.index) + "_T" + height_token(T) + ".zc");
}

std::optional<ZeroSet> ZeroCache::load(const CharacterLabel& label, double T) const {
  const fs::path exact = path_for(label, T);
  if (fs::exists(exact)) return read_zero_cache(exact);
  const fs::path dir = exact.parent_path();
  if (!fs::is_directory(dir)) return std::nullopt;
  const std::string prefix = "chi" + std::to_string(label.index) + "_T";
  std::optional<std::pair<double, fs::path>> best;
  for (const auto& entry : fs::directory_iterator(dir)) {
    const std::string name = entry.path().filename().string();
    if (name.rfind(prefix, 0) != 0 || entry.path().extension() != ".zc") continue;
    const std::string token = name.substr(prefix.size(), name.size() - prefix.size() - 3);
    double height = 0;
    const auto res = std::from_chars(token.data(), token.data() + token.size(), height);
    if (res.ec != std::errc{} || res.ptr != token.data() + token.size() || height < T) continue;
    if (!best || height < best->first) best = {height, entry.path()};
  }
  if (!best) return std::nullopt;
  return read_zero_cache(best->second).restricted(T);
}

fs::path ZeroCache::save(const ZeroSet& set, bool force) const {
  const fs::path path = path_for(set.character, set.height);
  write_zero_cache(set, path, force);
  return path;
}

TableFormat parse_table_format(const std::string& name) {
  if (name == "csv") return TableFormat::csv;
  if (name == "json") return TableFormat::json;
  throw Error(Errc::invalid_argument, "unknown table format '" + name + "' (expected csv or json)");
}

TableWriter::TableWriter(const fs::path& path, TableFormat format, std::vector<std::string> columns)
    : path_(path), format_(format), columns_(std::move(columns)) {
  std::error_code ec;
  if (path.has_parent_path()) fs::create_directories(path.parent_path(), ec);
  file_.open(path, std::ios::binary | std::ios::trunc);
  require(static_cast<bool>(file_), "cannot open " + path.string(), Errc::io);
  out_ = &file_;
  begin();
}

TableWriter::TableWriter(std::ostream& out, TableFormat format, std::vector<std::string> columns)
    : path_("<stream>"), out_(&out), format_(format), columns_(std::move(columns)) {
  begin();
}

void TableWriter::begin() {
  if (format_ == TableFormat::csv) {
    for (std::size_t i = 0; i < columns_.size(); ++i) *out_ << (i ? "," : "") << csv_field(columns_[i]);
    *out_ << '\n';
  } else {
    *out_ << '[';
  }
}

TableWriter::~TableWriter() {
  if (!closed_) {
    try {
      close();
    } catch (...) {
    }
  }
}

void TableWriter::row(const std::vector<Cell>& cells) {
  require(!closed_, "table " + path_.string() + " already closed");
  require(cells.size() == columns_.size(),
          "row has " + std::to_string(cells.size()) + " cells, table has " + std::to_string(columns_.size()) +
              " columns");
  if (format_ == TableFormat::csv) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) *out_ << ',';
      std::visit(
          [&](const auto& v) {
            using V = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<V, double>)
              *out_ << format_real(v);
            else if constexpr (std::is_same_v<V, std::int64_t>)
              *out_ << v;
            else
              *out_ << csv_field(v);
          },
          cells[i]);
    }
    *out_ << '\n';
  } else {
    *out_ << (rows_ ? ",\n" : "\n") << '{';
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) *out_ << ',';
      *out_ << nlohmann::json(columns_[i]).dump() << ':';
      std::visit(
          [&](const auto& v) {
            using V = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<V, double>)
              *out_ << (std::isfinite(v) ? format_real(v) : "null");
            else if constexpr (std::is_same_v<V, std::int64_t>)
              *out_ << v;
            else
              *out_ << nlohmann::json(v).dump();
          },
          cells[i]);
    }
    *out_ << '}';
  }
  ++rows_;
}

void TableWriter::close() {
  if (closed_) return;
  closed_ = true;
  if (format_ == TableFormat::json) *out_ << (rows_ ? "\n]\n" : "]\n");
  out_->flush();
  require(static_cast<bool>(*out_), "write failed for " + path_.string(), Errc::io);
  if (file_.is_open()) file_.close();
}

void emit_table(const Table& table, TableFormat format, const fs::path& path) {
  TableWriter w(path, format, table.columns);
  for (const auto& row : table.rows) w.row(row);
  w.close();
}

}  // namespace dpc
