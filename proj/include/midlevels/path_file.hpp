#ifndef MIDLEVELS_PATH_FILE_HPP
#define MIDLEVELS_PATH_FILE_HPP

#include <cstdint>
#include <filesystem>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "midlevels/assembly.hpp"
#include "midlevels/byte_io.hpp"
#include "midlevels/ham_search.hpp"
#include "midlevels/part.hpp"

namespace midlevels {

// Binary path file, all integers little-endian:
//   "MLPATH1" | u16 version | u32 k | u8 part | u8 scope | u64 count |
//   count x u32 rank | u64 FNV-1a of every preceding byte
inline constexpr std::string_view kPathMagic = "MLPATH1";
inline constexpr std::uint16_t kPathVersion = 1;

inline std::vector<std::uint8_t> encode_path(const ReducedPath& path) {
  if (path.reversed) throw std::invalid_argument("reversed paths are not stored");
  ByteWriter w;
  w.raw(kPathMagic);
  w.u16(kPathVersion);
  w.u32(static_cast<std::uint32_t>(path.k));
  w.u8(static_cast<std::uint8_t>(path.part));
  w.u8(static_cast<std::uint8_t>(path.scope));
  w.u64(path.ranks.size());
  for (ClassRank r : path.ranks) w.u32(r);
  w.checksum();
  return w.bytes();
}

inline ReducedPath decode_path(std::span<const std::uint8_t> bytes) {
  ByteReader r(bytes);
  r.expect_magic(kPathMagic);
  if (const auto v = r.u16(); v != kPathVersion) {
    throw FormatError("unsupported path file version " + std::to_string(v));
  }
  ReducedPath p;
  const std::uint32_t k = r.u32();
  if (k < 1 || k > 31) throw FormatError("path file k out of range: " + std::to_string(k));
  p.k = static_cast<int>(k);
  const auto tag = part_tag_from_byte(r.u8());
  if (!tag) throw FormatError("bad part tag in path file");
  p.part = *tag;
  const std::uint8_t scope = r.u8();
  if (scope > 1) throw FormatError("bad rank scope in path file");
  p.scope = static_cast<RankScope>(scope);
  const std::uint64_t count = r.u64();
  if (count > r.remaining() / 4) throw FormatError("path count exceeds file size");
  p.ranks.resize(count);
  for (auto& x : p.ranks) x = r.u32();
  r.verify_checksum();
  r.expect_end();
  return p;
}

inline void write_path_file(const std::filesystem::path& file, const ReducedPath& path) {
  write_file_atomic(file, encode_path(path));
}

inline ReducedPath read_path_file(const std::filesystem::path& file) {
  return decode_path(read_file_bytes(file));
}

// Cycle text: "MLCYCLE k=<k> len=<len>" then one n-bit string per line.
inline void write_cycle_text(std::ostream& out, const LiftedCycle& cycle) {
  out << "MLCYCLE k=" << cycle.k << " len=" << cycle.size() << '\n';
  for (std::size_t i = 0; i < cycle.size(); ++i) out << cycle.vertex(i).str() << '\n';
}

inline LiftedCycle read_cycle_text(std::istream& in) {
  std::string magic;
  std::string kfield;
  std::string lenfield;
  if (!(in >> magic >> kfield >> lenfield) || magic != "MLCYCLE" ||
      kfield.rfind("k=", 0) != 0 || lenfield.rfind("len=", 0) != 0) {
    throw FormatError("bad cycle header; expected 'MLCYCLE k=<k> len=<len>'");
  }
  LiftedCycle c;
  std::uint64_t len = 0;
  try {
    c.k = std::stoi(kfield.substr(2));
    len = std::stoull(lenfield.substr(4));
  } catch (const std::exception&) {
    throw FormatError("bad number in cycle header");
  }
  if (c.k < 1 || c.k > 31) throw FormatError("cycle k out of range");
  std::string line;
  while (in >> line) {
    if (static_cast<int>(line.size()) != c.n()) {
      throw FormatError("cycle line " + std::to_string(c.vertices.size() + 1) +
                        " has length " + std::to_string(line.size()));
    }
    try {
      c.vertices.push_back(BitString::parse(line).bits());
    } catch (const std::invalid_argument& e) {
      throw FormatError(e.what());
    }
  }
  if (c.vertices.size() != len) {
    throw FormatError("cycle header announces " + std::to_string(len) + " vertices, file has " +
                      std::to_string(c.vertices.size()));
  }
  c.closed = true;
  return c;
}

inline void write_cycle_file(const std::filesystem::path& file, const LiftedCycle& cycle) {
  std::ostringstream os;
  write_cycle_text(os, cycle);
  write_file_atomic(file, os.str());
}

inline LiftedCycle read_cycle_file(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw std::runtime_error("cannot open " + file.string());
  return read_cycle_text(in);
}

}  // namespace midlevels

#endif  // MIDLEVELS_PATH_FILE_HPP
