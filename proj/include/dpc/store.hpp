#pragma once

// Binary zero-cache files and streamed CSV/JSON tables.
//
// Zero cache layout, all integers and reals little-endian:
//   "DLZC" | u32 version | u64 q | u64 index | u64 conductor | u32 parity |
//   f64 T | f64 mesh | f64 tolerance | f64 expected count | u32 branch tag |
//   u8 certified | u64 count | count x f64 ordinates | u32 CRC-32 of all
//   preceding bytes.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "dpc/lfunc.hpp"
#include "dpc/zeros.hpp"

namespace dpc {

inline constexpr std::uint32_t kZeroCacheVersion = 1;

/// Atomically writes `set` (temp file + rename). Refuses to replace a
/// certified file with an uncertified set unless `force`.
void write_zero_cache(const ZeroSet& set, const std::filesystem::path& path, bool force = false);

/// Reads and re-validates a cache file. Brackets are collapsed onto the
/// stored ordinates and residuals are NaN (not persisted).
ZeroSet read_zero_cache(const std::filesystem::path& path,
                        std::uint32_t expected_branch_tag = kRotationBranchTag);

/// zlib CRC-32 of a whole file.
std::uint32_t file_crc32(const std::filesystem::path& path);

/// Shortest round-trip decimal form of T used in cache file names.
std::string height_token(double T);

/// Directory of zero-cache files: <root>/zeros/q{Q}/chi{INDEX}_T{T}.zc, keyed
/// by primitive character.
class ZeroCache {
 public:
  explicit ZeroCache(std::filesystem::path root) : root_(std::move(root)) {}

  const std::filesystem::path& root() const noexcept { return root_; }
  std::filesystem::path path_for(const CharacterLabel& label, double T) const;
  /// A stored set for `label` at height >= T, restricted to T.
  std::optional<ZeroSet> load(const CharacterLabel& label, double T) const;
  /// Writes the set at its own height; returns the file path.
  std::filesystem::path save(const ZeroSet& set, bool force = false) const;

 private:
  std::filesystem::path root_;
};

enum class TableFormat { csv, json };
TableFormat parse_table_format(const std::string& name);

using Cell = std::variant<std::int64_t, double, std::string>;

/// Real formatted with 17 significant digits, independent of locale.
std::string format_real(double v);

/// Streams rows to disk as they arrive. JSON output is an array of objects
/// keyed by column name; non-finite reals become null.
class TableWriter {
 public:
  TableWriter(const std::filesystem::path& path, TableFormat format, std::vector<std::string> columns);
  /// Writes to a caller-owned stream, which must outlive the writer.
  TableWriter(std::ostream& out, TableFormat format, std::vector<std::string> columns);
  TableWriter(const TableWriter&) = delete;
  TableWriter& operator=(const TableWriter&) = delete;
  ~TableWriter();

  void row(const std::vector<Cell>& cells);
  /// Finishes the document and checks the stream; called by the destructor
  /// if needed, but only an explicit call reports IO errors.
  void close();
  std::size_t rows_written() const noexcept { return rows_; }

 private:
  void begin();

  std::filesystem::path path_;
  std::ofstream file_;
  std::ostream* out_ = nullptr;
  TableFormat format_;
  std::vector<std::string> columns_;
  std::size_t rows_ = 0;
  bool closed_ = false;
};

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

void emit_table(const Table& table, TableFormat format, const std::filesystem::path& path);

}  // namespace dpc
