#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "doctest.h"
#include "dpc/error.hpp"
#include "dpc/store.hpp"

using namespace dpc;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "dpc_test_store";
  fs::create_directories(dir);
  const fs::path p = dir / name;
  fs::remove_all(p);
  return p;
}

std::vector<unsigned char> read_bytes(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_bytes(const fs::path& p, const std::vector<unsigned char>& b) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  out.write(reinterpret_cast<const char*>(b.data()), static_cast<std::streamsize>(b.size()));
}

std::string slurp_text(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const ZeroSet& mod5_set() {
  static const ZeroSet set = [] {
    for (const auto& chi : enumerate_characters(5))
      if (chi.order() == 4) return scan_zeros(chi, 25);
    throw Error(Errc::invariant, "no quartic character mod 5");
  }();
  return set;
}

}  // namespace

TEST_CASE("zero cache round trip is bit-identical") {
  const auto& set = mod5_set();
  const auto path = scratch("roundtrip.zc");
  write_zero_cache(set, path);
  const auto back = read_zero_cache(path);
  CHECK(back.character == set.character);
  CHECK(back.conductor == set.conductor);
  CHECK(back.parity == set.parity);
  CHECK(back.height == set.height);
  CHECK(back.mesh_step == set.mesh_step);
  CHECK(back.tolerance == set.tolerance);
  CHECK(back.branch_tag == set.branch_tag);
  CHECK(back.completeness.certified == set.completeness.certified);
  CHECK(back.completeness.expected == set.completeness.expected);
  REQUIRE(back.records.size() == set.records.size());
  for (std::size_t i = 0; i < set.records.size(); ++i)
    CHECK(std::memcmp(&back.records[i].ordinate, &set.records[i].ordinate, sizeof(double)) == 0);

  // Rewriting the loaded set reproduces the file byte for byte.
  const auto again = scratch("roundtrip2.zc");
  write_zero_cache(back, again);
  CHECK(read_bytes(path) == read_bytes(again));
}

TEST_CASE("every single-byte corruption is rejected") {
  const auto& set = mod5_set();
  const auto path = scratch("corrupt.zc");
  write_zero_cache(set, path);
  const auto good = read_bytes(path);
  for (std::size_t i = 0; i < good.size(); ++i) {
    auto bad = good;
    bad[i] ^= 0x5a;
    write_bytes(path, bad);
    CAPTURE(i);
    CHECK_THROWS_AS(read_zero_cache(path), Error);
  }
  // A payload byte specifically reports a checksum failure.
  auto bad = good;
  bad[good.size() - 10] ^= 1;
  write_bytes(path, bad);
  try {
    read_zero_cache(path);
    FAIL("corrupt payload accepted");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::checksum);
  }
}

TEST_CASE("distinct error kinds") {
  const auto& set = mod5_set();
  const auto path = scratch("kinds.zc");
  write_zero_cache(set, path);
  const auto good = read_bytes(path);

  auto future = good;
  future[4] = static_cast<unsigned char>(kZeroCacheVersion + 1);
  write_bytes(path, future);
  try {
    read_zero_cache(path);
    FAIL("future version accepted");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::version);
  }

  write_bytes(path, good);
  try {
    read_zero_cache(path, kRotationBranchTag + 1);
    FAIL("branch mismatch accepted");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::branch_mismatch);
  }

  CHECK_THROWS_AS(read_zero_cache(scratch("missing.zc")), Error);
  try {
    read_zero_cache(scratch("missing.zc"));
  } catch (const Error& e) {
    CHECK(e.code() == Errc::io);
  }

  // An unsorted set cannot be written.
  ZeroSet unsorted = set;
  std::swap(unsorted.records.front(), unsorted.records.back());
  CHECK_THROWS_AS(write_zero_cache(unsorted, scratch("unsorted.zc")), Error);
}

TEST_CASE("an uncertified set does not replace a certified file unless forced") {
  const auto& set = mod5_set();
  REQUIRE(set.completeness.certified);
  const auto path = scratch("overwrite.zc");
  write_zero_cache(set, path);
  ZeroSet weaker = set;
  weaker.completeness.certified = false;
  try {
    write_zero_cache(weaker, path);
    FAIL("overwrite accepted");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::overwrite_refused);
  }
  CHECK(read_zero_cache(path).completeness.certified);
  write_zero_cache(weaker, path, true);
  CHECK_FALSE(read_zero_cache(path).completeness.certified);
  // A certified set may replace anything.
  write_zero_cache(set, path);
  CHECK(read_zero_cache(path).completeness.certified);
}

TEST_CASE("ZeroCache layout and reuse from a taller file") {
  const auto root = scratch("cache_root");
  const ZeroCache cache(root);
  CHECK(cache.path_for({4, 3}, 15) == root / "zeros" / "q4" / "chi3_T15.zc");
  CHECK(cache.path_for({4, 3}, 0.5) == root / "zeros" / "q4" / "chi3_T0.5.zc");
  CHECK_FALSE(cache.load({4, 3}, 15).has_value());

  const auto first = zeros_for_modulus(4, 30, {}, &cache);
  CHECK(fs::exists(cache.path_for({4, 3}, 30)));
  CHECK(fs::exists(cache.path_for({1, 1}, 30)));
  const auto lower = cache.load({4, 3}, 15);
  REQUIRE(lower.has_value());
  CHECK(lower->height == 15);
  CHECK(lower->records.size() == 6);

  const auto second = zeros_for_modulus(4, 15, {}, &cache);
  CHECK(second.at({4, 3})->ordinates() == first.at({4, 3})->ordinates(15));
  CHECK_FALSE(fs::exists(cache.path_for({4, 3}, 15)));
}

TEST_CASE("format_real") {
  CHECK(format_real(0.1) == "0.10000000000000001");
  CHECK(format_real(1.0) == "1");
  CHECK(format_real(-2.5e-300) == "-2.5e-300");
  for (double v : {M_PI, 1.0 / 3, 1e22, 6.02214076e23, -0.0, 5e-324}) {
    const double back = std::strtod(format_real(v).c_str(), nullptr);
    CHECK(std::memcmp(&back, &v, sizeof v) == 0);
  }
}

TEST_CASE("emit_table: CSV") {
  const auto path = scratch("empty.csv");
  emit_table({{"x", "y"}, {}}, TableFormat::csv, path);
  CHECK(slurp_text(path) == "x,y\n");

  const auto p2 = scratch("rows.csv");
  emit_table({{"label", "value", "n"}, {{std::string("4:3"), 0.5, std::int64_t{7}}, {std::string("a,b"), 1e-20, std::int64_t{-1}}}},
             TableFormat::csv, p2);
  CHECK(slurp_text(p2) == "label,value,n\n4:3,0.5,7\n\"a,b\",9.9999999999999995e-21,-1\n");

  CHECK_THROWS_AS(emit_table({{"x"}, {{1.0, 2.0}}}, TableFormat::csv, scratch("bad.csv")), Error);
}

TEST_CASE("emit_table: JSON round trip is exact") {
  const auto path = scratch("rows.json");
  Table t{{"gamma", "label", "missing"}, {}};
  std::vector<double> values;
  for (const auto& r : mod5_set().records) {
    values.push_back(r.ordinate);
    t.rows.push_back({r.ordinate, std::string("5:2 \"quoted\""), std::numeric_limits<double>::quiet_NaN()});
  }
  emit_table(t, TableFormat::json, path);
  const auto parsed = nlohmann::json::parse(slurp_text(path));
  REQUIRE(parsed.size() == values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    CHECK(parsed[i]["gamma"].get<double>() == values[i]);
    CHECK(parsed[i]["label"].get<std::string>() == "5:2 \"quoted\"");
    CHECK(parsed[i]["missing"].is_null());
  }

  const auto empty = scratch("empty.json");
  emit_table({{"x"}, {}}, TableFormat::json, empty);
  CHECK(nlohmann::json::parse(slurp_text(empty)).empty());
}

TEST_CASE("TableWriter streams 1e5 rows") {
  const auto path = scratch("big.csv");
  {
    TableWriter w(path, TableFormat::csv, {"i", "sqrt"});
    for (std::int64_t i = 0; i < 100000; ++i) w.row({i, std::sqrt(static_cast<double>(i))});
    // Data reaches the file before close.
    CHECK(fs::file_size(path) > 1000);
    CHECK(w.rows_written() == 100000);
    w.close();
  }
  std::ifstream in(path);
  std::string line;
  std::size_t lines = 0;
  while (std::getline(in, line)) ++lines;
  CHECK(lines == 100001);
}

TEST_CASE("parse_table_format") {
  CHECK(parse_table_format("csv") == TableFormat::csv);
  CHECK(parse_table_format("json") == TableFormat::json);
  CHECK_THROWS_AS(parse_table_format("xml"), Error);
}
