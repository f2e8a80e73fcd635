#pragma once

#include <optional>
#include <string>
#include <vector>

#include "texmix/net.hpp"
#include "texmix/synthesis.hpp"

namespace texmix {

enum class ExtractorSource { BuiltinDesk, WeightsFile, RandomInit };

// Where the feature extractor comes from and optional tap overrides
// (layer indices into the loaded stack).
struct ExtractorConfig {
    ExtractorSource source = ExtractorSource::BuiltinDesk;
    std::string weights_path;  // source == WeightsFile
    uint64_t seed = kDeskSeed;  // source == RandomInit
    std::optional<std::vector<int>> taps;
    std::optional<int> content_tap;
};

// Image paths a config may carry; command-line flags override these.
struct PathsConfig {
    std::string exemplar;  // synth
    std::string a, b;      // mix / gauss --mix
    std::string content, style_a, style_b;  // morph
    std::string init;      // starting image when init kind == image
    std::string out;       // single-output commands
    std::string out_dir;   // sequence commands
};

// One run, fully determined: synthesis hyperparameters, extractor source,
// job shape (rho / grid / incremental), and file locations.
struct RunConfig {
    SynthesisConfig synth;
    ExtractorConfig extractor;
    PathsConfig paths;
    std::optional<double> rho;
    std::optional<int> grid;
    bool incremental = false;
};

// Parses a config document against the documented schema. Unknown keys and
// type mismatches raise ConfigError whose message carries the JSON pointer
// path of the offending element.
RunConfig parse_config(const std::string& json_text);
RunConfig load_config(const std::string& path);

// The complete effective config as a JSON document (every field explicit),
// ready to be written next to a run's outputs. `command` and `extra_json`
// (an optional JSON object) are included for provenance.
std::string resolved_config(const RunConfig& cfg, const std::string& command,
                            const std::string& extra_json = "");

// Instantiates the configured extractor (builtin desk stack, TXW1 file, or
// seeded random desk-architecture init), applying tap overrides.
FeatureExtractor build_extractor(const ExtractorConfig& cfg);

}  // namespace texmix
