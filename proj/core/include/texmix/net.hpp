#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "texmix/grid.hpp"

namespace texmix {

// Wire-format tags; the numeric values are part of the TXW1 file format.
enum class LayerKind : uint8_t { Conv = 0, Relu = 1, AvgPool = 2, MaxPool = 3 };

// One layer of the extractor. Conv kernels are odd-sized, stride 1, applied
// with circular padding; pools are fixed 2x2 windows with stride 2. Conv
// weights are stored (out, in, row, col) row-major as 32-bit floats, matching
// the weight file layout bit for bit.
struct LayerSpec {
    LayerKind kind = LayerKind::Relu;
    int kernel_rows = 0;
    int kernel_cols = 0;
    int in_channels = 0;
    int out_channels = 0;
    int stride = 1;
    bool has_bias = false;
    std::vector<float> weights;
    std::vector<float> bias;

    static LayerSpec conv(int kernel_rows, int kernel_cols, int in_channels, int out_channels,
                          bool with_bias = true);
    static LayerSpec plain(LayerKind kind) {
        LayerSpec spec;
        spec.kind = kind;
        return spec;
    }
    static LayerSpec relu() { return plain(LayerKind::Relu); }
    static LayerSpec avg_pool() { return plain(LayerKind::AvgPool); }
    static LayerSpec max_pool() { return plain(LayerKind::MaxPool); }

    float weight(int out, int in, int r, int c) const {
        return weights[((static_cast<size_t>(out) * in_channels + in) * kernel_rows + r) *
                           kernel_cols +
                       c];
    }
};

// Activations of every layer for one input image, kept for the reverse pass.
struct ForwardTrace {
    std::vector<FeatureMap> activations;  // activations[i] = output of layer i
};

// An immutable stack of layers with designated tap points whose outputs feed
// the statistics, and an optional content tap for style morphing.
class FeatureExtractor {
public:
    FeatureExtractor() = default;
    FeatureExtractor(std::vector<LayerSpec> layers, std::vector<int> taps, int content_tap = -1);

    const std::vector<LayerSpec>& layers() const { return layers_; }
    const std::vector<int>& taps() const { return taps_; }
    int content_tap() const { return content_tap_; }
    int tap_count() const { return static_cast<int>(taps_.size()); }

    int input_channels() const { return input_channels_; }
    int pool_count() const;
    int channels_at(int layer) const;
    // Spatial dims of the output of `layer` for an image of the given size.
    std::pair<long, long> dims_at(int layer, long rows, long cols) const;

    // Deterministic forward pass; returns the tap outputs in tap order.
    std::vector<FeatureMap> forward(const FeatureMap& image) const;

    // Forward pass keeping every intermediate activation.
    ForwardTrace forward_trace(const FeatureMap& image) const;

    // Output of a single layer.
    FeatureMap forward_at(const FeatureMap& image, int layer) const;

    // Runs layers [first_layer, last_layer] on an arbitrary feature map, e.g.
    // to push statistics targets from one tap to a deeper one.
    FeatureMap forward_range(const FeatureMap& input, int first_layer, int last_layer) const;

    // Exact reverse-mode accumulation of the given tap cotangents down to the
    // image: d/d(image) of sum_taps <tap_grad, tap_output>.
    FeatureMap backward(const FeatureMap& image, const std::vector<FeatureMap>& tap_grads) const;

    // General form: cotangents injected at arbitrary (layer, grad) points.
    // Reuses a forward trace of the same image.
    FeatureMap backward_from(const ForwardTrace& trace, const FeatureMap& image,
                             const std::vector<std::pair<int, FeatureMap>>& cotangents) const;

    // Same layers and weights, different tap points.
    FeatureExtractor with_taps(std::vector<int> taps, int content_tap = -1) const;

private:
    std::vector<LayerSpec> layers_;
    std::vector<int> taps_;
    int content_tap_ = -1;
    int input_channels_ = 0;
};

// Architecture description without weights, the input to random_init.
struct ArchLayer {
    LayerKind kind = LayerKind::Relu;
    int kernel_rows = 0;
    int kernel_cols = 0;
    int in_channels = 0;
    int out_channels = 0;
    bool with_bias = true;
};

struct Architecture {
    std::vector<ArchLayer> layers;
    std::vector<int> taps;
    int content_tap = -1;
};

// Three-scale default stack:
//   Conv3x3(3->16), ReLU [tap], AvgPool, Conv3x3(16->32), ReLU [tap], AvgPool,
//   Conv3x3(32->64), ReLU [tap]
// with the deepest tap doubling as the content tap.
Architecture desk_architecture();

// Seed behind the builtin desk extractor; recorded in resolved run configs.
inline constexpr uint64_t kDeskSeed = 7077;

// He-initialized extractor: conv weights ~ N(0, 2 / fan_in), biases zero,
// drawn from the documented deterministic stream and rounded to f32.
FeatureExtractor random_init(const Architecture& arch, uint64_t seed);

FeatureExtractor desk_extractor();

// TXW1 weight file:
//   'T' 'X' 'W' '1', u32 layer count; per layer a u8 kind tag; Conv adds
//   u32 kernel_rows, kernel_cols, in_channels, out_channels, stride, u8 bias
//   flag, f32 weights (out, in, row, col) row-major, then f32 biases when
//   flagged. All integers and floats little-endian.
// Taps are not part of the file; load defaults them to every ReLU output with
// the last ReLU as content tap (override via with_taps).
void save_weights(const FeatureExtractor& net, const std::string& path);
FeatureExtractor load_weights(const std::string& path);

}  // namespace texmix
