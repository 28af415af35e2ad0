#include "actx/snapshot.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace actx {

namespace {

constexpr char kMagic[] = "AFLD";

std::uint64_t to_little_endian(std::uint64_t v) {
  if constexpr (std::endian::native == std::endian::big) {
    v = ((v & 0x00000000000000FFull) << 56) | ((v & 0x000000000000FF00ull) << 40) |
        ((v & 0x0000000000FF0000ull) << 24) | ((v & 0x00000000FF000000ull) << 8) |
        ((v & 0x000000FF00000000ull) >> 8) | ((v & 0x0000FF0000000000ull) >> 24) |
        ((v & 0x00FF000000000000ull) >> 40) | ((v & 0xFF00000000000000ull) >> 56);
  }
  return v;
}

void expect_word(std::istringstream& hs, const char* word) {
  std::string w;
  if (!(hs >> w) || w != word) {
    throw std::runtime_error(std::string("snapshot header: expected '") + word + "'");
  }
}

}  // namespace

void write_snapshot(std::ostream& os, const ScalarField& f, double time) {
  const GridSpec& s = f.spec;
  std::ostringstream hs;
  hs.precision(17);
  hs << "dim " << s.dim() << " cells";
  for (int k = 0; k < s.dim(); ++k) hs << ' ' << s.cells(k);
  hs << " lo";
  for (int k = 0; k < s.dim(); ++k) hs << ' ' << s.lo()[k];
  hs << " hi";
  for (int k = 0; k < s.dim(); ++k) hs << ' ' << s.hi()[k];
  hs << " time " << time;
  os << kMagic << '\n' << hs.str() << '\n';
  std::vector<std::uint64_t> raw(static_cast<std::size_t>(f.size()));
  for (Index n = 0; n < f.size(); ++n) {
    raw[n] = to_little_endian(std::bit_cast<std::uint64_t>(f.values[n]));
  }
  os.write(reinterpret_cast<const char*>(raw.data()),
           static_cast<std::streamsize>(raw.size() * sizeof(std::uint64_t)));
  if (!os) throw std::runtime_error("snapshot: write failed");
}

void write_snapshot(const std::filesystem::path& path, const ScalarField& f, double time) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("snapshot: cannot open " + path.string());
  write_snapshot(os, f, time);
}

Snapshot read_snapshot(std::istream& is) {
  std::string magic;
  if (!std::getline(is, magic) || magic != kMagic) {
    throw std::runtime_error("snapshot: missing AFLD magic");
  }
  std::string header;
  if (!std::getline(is, header)) throw std::runtime_error("snapshot: missing header line");
  std::istringstream hs(header);
  int dim = 0;
  expect_word(hs, "dim");
  if (!(hs >> dim) || (dim != 2 && dim != 3)) throw std::runtime_error("snapshot header: bad dim");
  std::array<int, 3> cells{0, 0, 0};
  Point lo = Point::Zero();
  Point hi = Point::Zero();
  double time = 0.0;
  expect_word(hs, "cells");
  for (int k = 0; k < dim; ++k) {
    if (!(hs >> cells[k])) throw std::runtime_error("snapshot header: bad cells");
  }
  expect_word(hs, "lo");
  for (int k = 0; k < dim; ++k) {
    if (!(hs >> lo[k])) throw std::runtime_error("snapshot header: bad lo");
  }
  expect_word(hs, "hi");
  for (int k = 0; k < dim; ++k) {
    if (!(hs >> hi[k])) throw std::runtime_error("snapshot header: bad hi");
  }
  expect_word(hs, "time");
  if (!(hs >> time)) throw std::runtime_error("snapshot header: bad time");

  GridSpec spec(dim, lo, hi, cells);
  std::vector<std::uint64_t> raw(static_cast<std::size_t>(spec.node_count()));
  is.read(reinterpret_cast<char*>(raw.data()),
          static_cast<std::streamsize>(raw.size() * sizeof(std::uint64_t)));
  if (is.gcount() != static_cast<std::streamsize>(raw.size() * sizeof(std::uint64_t))) {
    throw std::runtime_error("snapshot: payload shorter than node count");
  }
  Eigen::ArrayXd values(spec.node_count());
  for (Index n = 0; n < values.size(); ++n) {
    values[n] = std::bit_cast<double>(to_little_endian(raw[n]));
  }
  return Snapshot{ScalarField(spec, std::move(values)), time};
}

Snapshot read_snapshot(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("snapshot: cannot open " + path.string());
  return read_snapshot(is);
}

}  // namespace actx
