#pragma once

#include <cstdint>
#include <string>

#include "texmix/grid.hpp"

namespace texmix {

// Maps [0,1] to a byte: round-half-away-from-zero of 255 * clamp(v, 0, 1).
uint8_t quantize_unit(double v);

// Loads an 8-bit RGB PNG as a 3-channel map with values in [0, 1] (v = byte/255).
// Grayscale and palette images are promoted to RGB; 16-bit depth is reduced;
// any alpha channel (including palette transparency) is rejected.
FeatureMap load_png(const std::string& path);

// Writes a 3-channel map as an 8-bit RGB PNG, quantizing with quantize_unit.
// The write is atomic: a temp file in the same directory is renamed over the
// destination.
void save_png(const FeatureMap& image, const std::string& path);

// Atomic text/binary file write (temp + rename), shared by all outputs.
void write_file_atomic(const std::string& path, const std::string& bytes);

}  // namespace texmix
