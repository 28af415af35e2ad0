// AFLD field snapshot files.
//
// Layout: the magic line "AFLD", one ASCII header line
//   dim <n> cells <c1> <c2> [<c3>] lo <...> hi <...> time <t>
// and then node_count little-endian IEEE-754 doubles in row-major order.
#pragma once

#include <filesystem>
#include <iosfwd>

#include "actx/grid.hpp"

namespace actx {

struct Snapshot {
  ScalarField field;
  double time = 0.0;
};

void write_snapshot(std::ostream& os, const ScalarField& f, double time);
void write_snapshot(const std::filesystem::path& path, const ScalarField& f, double time);

/// Throws std::runtime_error on a bad magic, malformed header or short payload.
Snapshot read_snapshot(std::istream& is);
Snapshot read_snapshot(const std::filesystem::path& path);

}  // namespace actx
