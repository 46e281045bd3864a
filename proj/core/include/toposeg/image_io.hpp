#pragma once

#include <string>

#include "toposeg/grid.hpp"

namespace toposeg {

// 8-bit grayscale PGM (P5) and PNG. The format is chosen by sniffing magic
// bytes on load and by file extension on save (.pgm / .png). Anything else
// raises IoError. Pixel data round-trips exactly: save followed by load
// returns the same grid.

// Raw pixel values, 0..255.
Image2D load_grayscale(const std::string& path);

// Requires every pixel to be 0 or maxval; nonzero maps to 1.
BinaryMask load_mask(const std::string& path);

// Pixel values scaled by 1/maxval into [0, 1].
LikelihoodMap load_likelihood(const std::string& path);

// Values must already be integers in 0..255.
void save_grayscale(const std::string& path, const Image2D& image);

// Foreground saved as maxval (255), background as 0.
void save_mask(const std::string& path, const BinaryMask& mask);

// Values quantized as round(v * 255).
void save_likelihood(const std::string& path, const LikelihoodMap& map);

// Distance fields use a small raw format: a text header "SDF1\n<width>
// <height>\n" followed by width*height little-endian float32 values in
// row-major order. float32 is exact for the integer-root values produced by
// the transforms here.
RealGrid read_sdf(const std::string& path);
void write_sdf(const std::string& path, const RealGrid& field);

} // namespace toposeg
