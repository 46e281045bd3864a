#include "toposeg/fixtures.hpp"

#include <cmath>
#include <cstdlib>
#include <random>

#include "toposeg/error.hpp"

namespace toposeg {

namespace {

BinaryMask ring_mask(int size, bool broken) {
    BinaryMask mask(size, size, 0);
    const double center = (size - 1) / 2.0;
    const double r_out = 0.375 * size;
    const double r_in = 0.5 * r_out;
    // Gap rows are centered on the integer midline so the notch is exactly
    // three pixels tall at every size.
    const int gap_mid = size / 2;
    for (int r = 0; r < size; ++r)
        for (int c = 0; c < size; ++c) {
            const double d = std::hypot(r - center, c - center);
            if (d < r_in || d > r_out) continue;
            if (broken && std::abs(r - gap_mid) <= 1 && c >= size / 2) continue;
            mask.at(r, c) = 1;
        }
    return mask;
}

BinaryMask line_mask(int size, bool broken) {
    BinaryMask mask(size, size, 0);
    const int row = size / 2;
    const int mid = size / 2;
    for (int c = 1; c < size - 1; ++c) {
        if (broken && std::abs(c - mid) <= 1) continue;
        mask.at(row, c) = 1;
    }
    return mask;
}

BinaryMask grid_mask(int size) {
    BinaryMask mask(size, size, 0);
    for (int k = 0; k <= 3; ++k) {
        const int pos = static_cast<int>(std::lround(k * (size - 1) / 3.0));
        for (int i = 0; i < size; ++i) {
            mask.at(pos, i) = 1;
            mask.at(i, pos) = 1;
        }
    }
    return mask;
}

BinaryMask blob_mask(int size, std::uint64_t seed) {
    BinaryMask mask(size, size, 0);
    std::mt19937_64 rng(seed);
    // Modulo draws are slightly biased but identical on every platform;
    // distribution shape does not matter for fixtures.
    auto draw = [&rng](int lo, int hi) { // inclusive range
        return lo + static_cast<int>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
    };
    const int n_blobs = draw(3, 5);
    const int max_radius = std::max(2, size / 8);
    for (int b = 0; b < n_blobs; ++b) {
        const int radius = draw(2, max_radius);
        const int cr = draw(radius, size - 1 - radius);
        const int cc = draw(radius, size - 1 - radius);
        for (int r = cr - radius; r <= cr + radius; ++r)
            for (int c = cc - radius; c <= cc + radius; ++c)
                if ((r - cr) * (r - cr) + (c - cc) * (c - cc) <= radius * radius)
                    mask.at(r, c) = 1;
    }
    return mask;
}

} // namespace

std::string to_string(FixtureKind kind) {
    switch (kind) {
        case FixtureKind::Ring: return "ring";
        case FixtureKind::BrokenRing: return "broken-ring";
        case FixtureKind::Line: return "line";
        case FixtureKind::BrokenLine: return "broken-line";
        case FixtureKind::Grid: return "grid";
        case FixtureKind::RandomBlobs: return "random-blobs";
    }
    throw ValidationError("unknown fixture kind");
}

FixtureKind fixture_kind_from_string(const std::string& name) {
    if (name == "ring") return FixtureKind::Ring;
    if (name == "broken-ring") return FixtureKind::BrokenRing;
    if (name == "line") return FixtureKind::Line;
    if (name == "broken-line") return FixtureKind::BrokenLine;
    if (name == "grid") return FixtureKind::Grid;
    if (name == "random-blobs") return FixtureKind::RandomBlobs;
    throw ValidationError("unknown fixture kind: " + name);
}

BinaryMask gen_fixture(FixtureKind kind, int size, std::uint64_t seed) {
    if (size < 8) throw ValidationError("fixture size must be at least 8");
    switch (kind) {
        case FixtureKind::Ring: return ring_mask(size, false);
        case FixtureKind::BrokenRing: return ring_mask(size, true);
        case FixtureKind::Line: return line_mask(size, false);
        case FixtureKind::BrokenLine: return line_mask(size, true);
        case FixtureKind::Grid: return grid_mask(size);
        case FixtureKind::RandomBlobs: return blob_mask(size, seed);
    }
    throw ValidationError("unknown fixture kind");
}

} // namespace toposeg
