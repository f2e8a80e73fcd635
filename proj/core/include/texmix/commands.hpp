#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "texmix/config.hpp"

namespace texmix {

// Command entry points behind the CLI. Each one validates its inputs (throwing
// ConfigError / InvalidInput for user mistakes, IoError / NumericError for
// runtime failures), runs the job, and writes outputs atomically together with
// the resolved config.

// Statistics report: raw-pixel and extractor-tap statistics of one image plus
// the stationary-Gaussian identity deviations, as JSON. Empty out = stdout.
void run_stats(const RunConfig& cfg);

// Ordinary synthesis from one exemplar. Writes <out>.png, <out>_trace.csv and
// <out>_config.json (out's .png extension is optional).
void run_synth(const RunConfig& cfg);

// Texture mixing: single rho or a full grid, optionally incremental. Writes
// mix_<index>.png / _trace.csv per job, jobs.json with per-job provenance,
// and config.json into out_dir.
void run_mix(const RunConfig& cfg);

// Style morphing between two styles anchored to a content image; same output
// layout as run_mix with the morph_ prefix.
void run_morph(const RunConfig& cfg);

// Pixel-level Gaussian texture sampling / mixing (no extractor).
struct GaussOptions {
    std::string sample;    // exemplar path (sample mode)
    std::string mix_a, mix_b;  // exemplar paths (mix mode)
    double rho = 0.5;
    uint64_t seed = 0;
    std::string out;
};
void run_gauss(const GaussOptions& opts);

// Embedded invariant suite; prints one line per check. Returns true when all
// checks pass.
bool run_check();

}  // namespace texmix
