#pragma once

#include <cstdint>
#include <string>

#include "toposeg/grid.hpp"

namespace toposeg {

// Synthetic masks with known topology (4-connected foreground):
//   Ring        solid annulus, beta = (1, 1)
//   BrokenRing  ring with a 3-row notch cut through its east side, beta = (1, 0)
//   Line        1-pixel horizontal line, beta = (1, 0)
//   BrokenLine  line with its middle 3 columns removed, beta = (2, 0)
//   Grid        4 + 4 full-span 1-pixel lines fencing 3x3 cells, beta = (1, 9)
//   RandomBlobs seeded disks of radius >= 2, topology varies with the seed
enum class FixtureKind { Ring, BrokenRing, Line, BrokenLine, Grid, RandomBlobs };

std::string to_string(FixtureKind kind);
FixtureKind fixture_kind_from_string(const std::string& name); // ValidationError on unknown names

// size >= 8; seed only affects RandomBlobs. Deterministic.
BinaryMask gen_fixture(FixtureKind kind, int size, std::uint64_t seed = 0);

} // namespace toposeg
