#include "texmix/net.hpp"

#include <bit>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <limits>

#include "texmix/errors.hpp"
#include "texmix/image_io.hpp"
#include "texmix/rng.hpp"

namespace texmix {

namespace {

std::string layer_tag(int idx) { return "layer " + std::to_string(idx); }

// dst(r, c) += w * src((r + row_off) mod rows, (c + col_off) mod cols).
// The column wrap splits each row into two contiguous runs so the inner loops
// stay vectorizable.
void accumulate_shifted(double* dst, const double* src, long rows, long cols, long row_off,
                        long col_off, double w) {
    row_off = FeatureMap::wrap(row_off, rows);
    col_off = FeatureMap::wrap(col_off, cols);
    const long head = cols - col_off;  // run where src column = c + col_off
    for (long r = 0; r < rows; ++r) {
        const long sr = r + row_off < rows ? r + row_off : r + row_off - rows;
        const double* srow = src + sr * cols;
        double* drow = dst + r * cols;
        for (long c = 0; c < head; ++c) drow[c] += w * srow[c + col_off];
        for (long c = head; c < cols; ++c) drow[c] += w * srow[c + col_off - cols];
    }
}

FeatureMap conv_forward(const LayerSpec& L, const FeatureMap& in) {
    FeatureMap out(in.rows(), in.cols(), L.out_channels);
    const long rows = in.rows(), cols = in.cols();
    const long ch = L.kernel_rows / 2, cw = L.kernel_cols / 2;
    for (int o = 0; o < L.out_channels; ++o) {
        double* op = out.plane(o);
        if (L.has_bias) {
            const double b = L.bias[o];
            for (long p = 0; p < rows * cols; ++p) op[p] = b;
        }
        for (int i = 0; i < L.in_channels; ++i) {
            const double* ip = in.plane(i);
            for (int dr = 0; dr < L.kernel_rows; ++dr)
                for (int dc = 0; dc < L.kernel_cols; ++dc)
                    accumulate_shifted(op, ip, rows, cols, dr - ch, dc - cw,
                                       L.weight(o, i, dr, dc));
        }
    }
    return out;
}

// Cotangent through the conv: d_in(q, i) = sum_{o,dr,dc} W(o,i,dr,dc) *
// d_out(q - (dr - ch, dc - cw)), i.e. correlation with the flipped kernel.
FeatureMap conv_backward(const LayerSpec& L, const FeatureMap& d_out) {
    FeatureMap d_in(d_out.rows(), d_out.cols(), L.in_channels);
    const long rows = d_out.rows(), cols = d_out.cols();
    const long ch = L.kernel_rows / 2, cw = L.kernel_cols / 2;
    for (int i = 0; i < L.in_channels; ++i) {
        double* dp = d_in.plane(i);
        for (int o = 0; o < L.out_channels; ++o) {
            const double* gp = d_out.plane(o);
            for (int dr = 0; dr < L.kernel_rows; ++dr)
                for (int dc = 0; dc < L.kernel_cols; ++dc)
                    accumulate_shifted(dp, gp, rows, cols, ch - dr, cw - dc,
                                       L.weight(o, i, dr, dc));
        }
    }
    return d_in;
}

FeatureMap relu_forward(const FeatureMap& in) {
    FeatureMap out(in.rows(), in.cols(), in.channels());
    const double* s = in.values().data();
    double* d = out.values().data();
    for (size_t p = 0; p < in.size(); ++p) d[p] = s[p] > 0.0 ? s[p] : 0.0;
    return out;
}

FeatureMap relu_backward(const FeatureMap& in, const FeatureMap& d_out) {
    FeatureMap d_in(in.rows(), in.cols(), in.channels());
    const double* s = in.values().data();
    const double* g = d_out.values().data();
    double* d = d_in.values().data();
    for (size_t p = 0; p < in.size(); ++p) d[p] = s[p] > 0.0 ? g[p] : 0.0;
    return d_in;
}

void require_poolable(const FeatureMap& in, int layer_idx) {
    if (in.rows() % 2 != 0 || in.cols() % 2 != 0)
        throw InvalidInput(layer_tag(layer_idx) + ": pool input dims " +
                           std::to_string(in.rows()) + "x" + std::to_string(in.cols()) +
                           " are not even");
}

FeatureMap avg_pool_forward(const FeatureMap& in) {
    FeatureMap out(in.rows() / 2, in.cols() / 2, in.channels());
    for (int ch = 0; ch < in.channels(); ++ch) {
        const double* ip = in.plane(ch);
        double* op = out.plane(ch);
        for (long r = 0; r < out.rows(); ++r)
            for (long c = 0; c < out.cols(); ++c) {
                const double* w = ip + 2 * r * in.cols() + 2 * c;
                op[r * out.cols() + c] = 0.25 * (w[0] + w[1] + w[in.cols()] + w[in.cols() + 1]);
            }
    }
    return out;
}

FeatureMap avg_pool_backward(const FeatureMap& in, const FeatureMap& d_out) {
    FeatureMap d_in(in.rows(), in.cols(), in.channels());
    for (int ch = 0; ch < in.channels(); ++ch) {
        const double* gp = d_out.plane(ch);
        double* dp = d_in.plane(ch);
        for (long r = 0; r < d_out.rows(); ++r)
            for (long c = 0; c < d_out.cols(); ++c) {
                const double g = 0.25 * gp[r * d_out.cols() + c];
                double* w = dp + 2 * r * in.cols() + 2 * c;
                w[0] += g;
                w[1] += g;
                w[in.cols()] += g;
                w[in.cols() + 1] += g;
            }
    }
    return d_in;
}

// Argmax over each 2x2 window in row-major order; ties keep the first hit, so
// the routing below must scan in the same order.
FeatureMap max_pool_forward(const FeatureMap& in) {
    FeatureMap out(in.rows() / 2, in.cols() / 2, in.channels());
    for (int ch = 0; ch < in.channels(); ++ch) {
        const double* ip = in.plane(ch);
        double* op = out.plane(ch);
        for (long r = 0; r < out.rows(); ++r)
            for (long c = 0; c < out.cols(); ++c) {
                const double* w = ip + 2 * r * in.cols() + 2 * c;
                double m = w[0];
                if (w[1] > m) m = w[1];
                if (w[in.cols()] > m) m = w[in.cols()];
                if (w[in.cols() + 1] > m) m = w[in.cols() + 1];
                op[r * out.cols() + c] = m;
            }
    }
    return out;
}

FeatureMap max_pool_backward(const FeatureMap& in, const FeatureMap& d_out) {
    FeatureMap d_in(in.rows(), in.cols(), in.channels());
    for (int ch = 0; ch < in.channels(); ++ch) {
        const double* ip = in.plane(ch);
        const double* gp = d_out.plane(ch);
        double* dp = d_in.plane(ch);
        for (long r = 0; r < d_out.rows(); ++r)
            for (long c = 0; c < d_out.cols(); ++c) {
                const long base = 2 * r * in.cols() + 2 * c;
                const long idx[4] = {base, base + 1, base + in.cols(), base + in.cols() + 1};
                long best = idx[0];
                for (int k = 1; k < 4; ++k)
                    if (ip[idx[k]] > ip[best]) best = idx[k];
                dp[best] += gp[r * d_out.cols() + c];
            }
    }
    return d_in;
}

FeatureMap apply_layer(const LayerSpec& L, const FeatureMap& in, int layer_idx) {
    switch (L.kind) {
        case LayerKind::Conv:
            if (in.channels() != L.in_channels)
                throw InvalidInput(layer_tag(layer_idx) + ": expected " +
                                   std::to_string(L.in_channels) + " input channels, got " +
                                   std::to_string(in.channels()));
            return conv_forward(L, in);
        case LayerKind::Relu:
            return relu_forward(in);
        case LayerKind::AvgPool:
            require_poolable(in, layer_idx);
            return avg_pool_forward(in);
        case LayerKind::MaxPool:
            require_poolable(in, layer_idx);
            return max_pool_forward(in);
    }
    throw InvalidInput(layer_tag(layer_idx) + ": unknown layer kind");
}

FeatureMap apply_layer_backward(const LayerSpec& L, const FeatureMap& in,
                                const FeatureMap& d_out) {
    switch (L.kind) {
        case LayerKind::Conv:
            return conv_backward(L, d_out);
        case LayerKind::Relu:
            return relu_backward(in, d_out);
        case LayerKind::AvgPool:
            return avg_pool_backward(in, d_out);
        case LayerKind::MaxPool:
            return max_pool_backward(in, d_out);
    }
    throw InvalidInput("unknown layer kind");
}

}  // namespace

LayerSpec LayerSpec::conv(int kernel_rows, int kernel_cols, int in_channels, int out_channels,
                          bool with_bias) {
    LayerSpec L;
    L.kind = LayerKind::Conv;
    L.kernel_rows = kernel_rows;
    L.kernel_cols = kernel_cols;
    L.in_channels = in_channels;
    L.out_channels = out_channels;
    L.has_bias = with_bias;
    L.weights.assign(static_cast<size_t>(kernel_rows) * kernel_cols * in_channels * out_channels,
                     0.0f);
    if (with_bias) L.bias.assign(out_channels, 0.0f);
    return L;
}

FeatureExtractor::FeatureExtractor(std::vector<LayerSpec> layers, std::vector<int> taps,
                                   int content_tap)
    : layers_(std::move(layers)), taps_(std::move(taps)), content_tap_(content_tap) {
    int channels = 0;  // unknown until the first conv
    for (size_t i = 0; i < layers_.size(); ++i) {
        const LayerSpec& L = layers_[i];
        if (L.kind == LayerKind::Conv) {
            if (L.kernel_rows <= 0 || L.kernel_cols <= 0 || L.kernel_rows % 2 == 0 ||
                L.kernel_cols % 2 == 0)
                throw InvalidInput(layer_tag(static_cast<int>(i)) + ": kernel dims must be odd, got " +
                                   std::to_string(L.kernel_rows) + "x" +
                                   std::to_string(L.kernel_cols));
            if (L.in_channels <= 0 || L.out_channels <= 0)
                throw InvalidInput(layer_tag(static_cast<int>(i)) + ": channel counts must be positive");
            if (L.stride != 1)
                throw InvalidInput(layer_tag(static_cast<int>(i)) + ": conv stride must be 1, got " +
                                   std::to_string(L.stride));
            if (channels != 0 && L.in_channels != channels)
                throw InvalidInput(layer_tag(static_cast<int>(i)) + ": expects " +
                                   std::to_string(L.in_channels) + " channels but receives " +
                                   std::to_string(channels));
            const size_t want = static_cast<size_t>(L.kernel_rows) * L.kernel_cols *
                                L.in_channels * L.out_channels;
            if (L.weights.size() != want)
                throw InvalidInput(layer_tag(static_cast<int>(i)) + ": weight count " +
                                   std::to_string(L.weights.size()) + " does not match shape");
            if (L.bias.size() != static_cast<size_t>(L.has_bias ? L.out_channels : 0))
                throw InvalidInput(layer_tag(static_cast<int>(i)) + ": bias count does not match");
            for (float w : L.weights)
                if (!std::isfinite(w))
                    throw InvalidInput(layer_tag(static_cast<int>(i)) + ": non-finite weight");
            for (float b : L.bias)
                if (!std::isfinite(b))
                    throw InvalidInput(layer_tag(static_cast<int>(i)) + ": non-finite bias");
            if (channels == 0) input_channels_ = L.in_channels;
            channels = L.out_channels;
        } else if (L.kind != LayerKind::Relu && L.kind != LayerKind::AvgPool &&
                   L.kind != LayerKind::MaxPool) {
            throw InvalidInput(layer_tag(static_cast<int>(i)) + ": unknown layer kind");
        }
    }
    int prev = -1;
    for (int t : taps_) {
        if (t < 0 || t >= static_cast<int>(layers_.size()))
            throw InvalidInput("tap " + std::to_string(t) + " is out of range");
        if (t <= prev) throw InvalidInput("taps must be strictly increasing");
        prev = t;
    }
    if (content_tap_ != -1 &&
        (content_tap_ < 0 || content_tap_ >= static_cast<int>(layers_.size())))
        throw InvalidInput("content tap " + std::to_string(content_tap_) + " is out of range");
}

int FeatureExtractor::pool_count() const {
    int n = 0;
    for (const LayerSpec& L : layers_)
        if (L.kind == LayerKind::AvgPool || L.kind == LayerKind::MaxPool) ++n;
    return n;
}

int FeatureExtractor::channels_at(int layer) const {
    if (layer < 0 || layer >= static_cast<int>(layers_.size()))
        throw InvalidInput("layer index " + std::to_string(layer) + " is out of range");
    int channels = input_channels_;
    for (int i = 0; i <= layer; ++i)
        if (layers_[i].kind == LayerKind::Conv) channels = layers_[i].out_channels;
    return channels;
}

std::pair<long, long> FeatureExtractor::dims_at(int layer, long rows, long cols) const {
    if (layer < 0 || layer >= static_cast<int>(layers_.size()))
        throw InvalidInput("layer index " + std::to_string(layer) + " is out of range");
    for (int i = 0; i <= layer; ++i)
        if (layers_[i].kind == LayerKind::AvgPool || layers_[i].kind == LayerKind::MaxPool) {
            rows /= 2;
            cols /= 2;
        }
    return {rows, cols};
}

ForwardTrace FeatureExtractor::forward_trace(const FeatureMap& image) const {
    if (input_channels_ != 0 && image.channels() != input_channels_)
        throw InvalidInput("extractor expects " + std::to_string(input_channels_) +
                           " image channels, got " + std::to_string(image.channels()));
    ForwardTrace trace;
    trace.activations.reserve(layers_.size());
    const FeatureMap* cur = &image;
    for (size_t i = 0; i < layers_.size(); ++i) {
        trace.activations.push_back(apply_layer(layers_[i], *cur, static_cast<int>(i)));
        cur = &trace.activations.back();
    }
    return trace;
}

std::vector<FeatureMap> FeatureExtractor::forward(const FeatureMap& image) const {
    ForwardTrace trace = forward_trace(image);
    std::vector<FeatureMap> out;
    out.reserve(taps_.size());
    for (int t : taps_) out.push_back(std::move(trace.activations[t]));
    return out;
}

FeatureMap FeatureExtractor::forward_at(const FeatureMap& image, int layer) const {
    if (layer < 0 || layer >= static_cast<int>(layers_.size()))
        throw InvalidInput("layer index " + std::to_string(layer) + " is out of range");
    ForwardTrace trace = forward_trace(image);
    return std::move(trace.activations[layer]);
}

FeatureMap FeatureExtractor::forward_range(const FeatureMap& input, int first_layer,
                                           int last_layer) const {
    if (first_layer < 0 || last_layer >= static_cast<int>(layers_.size()) ||
        first_layer > last_layer)
        throw InvalidInput("layer range [" + std::to_string(first_layer) + ", " +
                           std::to_string(last_layer) + "] is invalid");
    FeatureMap cur = input;
    for (int i = first_layer; i <= last_layer; ++i) cur = apply_layer(layers_[i], cur, i);
    return cur;
}

FeatureMap FeatureExtractor::backward(const FeatureMap& image,
                                      const std::vector<FeatureMap>& tap_grads) const {
    if (tap_grads.size() != taps_.size())
        throw InvalidInput("expected " + std::to_string(taps_.size()) + " tap gradients, got " +
                           std::to_string(tap_grads.size()));
    ForwardTrace trace = forward_trace(image);
    std::vector<std::pair<int, FeatureMap>> cots;
    cots.reserve(taps_.size());
    for (size_t k = 0; k < taps_.size(); ++k) cots.emplace_back(taps_[k], tap_grads[k]);
    return backward_from(trace, image, cots);
}

FeatureMap FeatureExtractor::backward_from(
    const ForwardTrace& trace, const FeatureMap& image,
    const std::vector<std::pair<int, FeatureMap>>& cotangents) const {
    if (trace.activations.size() != layers_.size())
        throw InvalidInput("forward trace does not match the layer stack");
    if (cotangents.empty()) return FeatureMap(image.rows(), image.cols(), image.channels());

    int last = 0;
    for (const auto& [layer, grad] : cotangents) {
        if (layer < 0 || layer >= static_cast<int>(layers_.size()))
            throw InvalidInput("cotangent layer " + std::to_string(layer) + " is out of range");
        if (!grad.same_shape(trace.activations[layer]))
            throw InvalidInput("cotangent shape does not match " + layer_tag(layer) + " output");
        if (layer > last) last = layer;
    }

    FeatureMap g(trace.activations[last].rows(), trace.activations[last].cols(),
                 trace.activations[last].channels());
    for (int idx = last; idx >= 0; --idx) {
        for (const auto& [layer, grad] : cotangents)
            if (layer == idx) {
                double* d = g.values().data();
                const double* s = grad.values().data();
                for (size_t p = 0; p < g.size(); ++p) d[p] += s[p];
            }
        const FeatureMap& in = idx == 0 ? image : trace.activations[idx - 1];
        g = apply_layer_backward(layers_[idx], in, g);
    }
    return g;
}

FeatureExtractor FeatureExtractor::with_taps(std::vector<int> taps, int content_tap) const {
    return FeatureExtractor(layers_, std::move(taps), content_tap);
}

Architecture desk_architecture() {
    Architecture arch;
    arch.layers = {
        {LayerKind::Conv, 3, 3, 3, 16, true}, {LayerKind::Relu}, {LayerKind::AvgPool},
        {LayerKind::Conv, 3, 3, 16, 32, true}, {LayerKind::Relu}, {LayerKind::AvgPool},
        {LayerKind::Conv, 3, 3, 32, 64, true}, {LayerKind::Relu},
    };
    arch.taps = {1, 4, 7};
    arch.content_tap = 7;
    return arch;
}

FeatureExtractor random_init(const Architecture& arch, uint64_t seed) {
    NormalSampler sampler(seed);
    std::vector<LayerSpec> layers;
    layers.reserve(arch.layers.size());
    for (const ArchLayer& a : arch.layers) {
        switch (a.kind) {
            case LayerKind::Conv: {
                LayerSpec L = LayerSpec::conv(a.kernel_rows, a.kernel_cols, a.in_channels,
                                              a.out_channels, a.with_bias);
                const double fan_in =
                    static_cast<double>(a.kernel_rows) * a.kernel_cols * a.in_channels;
                const double stddev = std::sqrt(2.0 / fan_in);
                for (float& w : L.weights) w = static_cast<float>(stddev * sampler.next());
                layers.push_back(std::move(L));
                break;
            }
            case LayerKind::Relu:
                layers.push_back(LayerSpec::relu());
                break;
            case LayerKind::AvgPool:
                layers.push_back(LayerSpec::avg_pool());
                break;
            case LayerKind::MaxPool:
                layers.push_back(LayerSpec::max_pool());
                break;
        }
    }
    return FeatureExtractor(std::move(layers), arch.taps, arch.content_tap);
}

FeatureExtractor desk_extractor() { return random_init(desk_architecture(), kDeskSeed); }

namespace {

void put_u32(std::string& out, uint32_t v) {
    out.push_back(static_cast<char>(v & 0xff));
    out.push_back(static_cast<char>((v >> 8) & 0xff));
    out.push_back(static_cast<char>((v >> 16) & 0xff));
    out.push_back(static_cast<char>((v >> 24) & 0xff));
}

void put_f32(std::string& out, float v) { put_u32(out, std::bit_cast<uint32_t>(v)); }

class Reader {
public:
    Reader(const std::string& buf, size_t start) : buf_(buf), pos_(start) {}

    uint8_t u8(const char* what) {
        need(1, what);
        return static_cast<uint8_t>(buf_[pos_++]);
    }
    uint32_t u32(const char* what) {
        need(4, what);
        uint32_t v = 0;
        for (int k = 0; k < 4; ++k)
            v |= static_cast<uint32_t>(static_cast<uint8_t>(buf_[pos_ + k])) << (8 * k);
        pos_ += 4;
        return v;
    }
    float f32(const char* what) { return std::bit_cast<float>(u32(what)); }
    size_t remaining() const { return buf_.size() - pos_; }

private:
    void need(size_t n, const char* what) {
        if (buf_.size() - pos_ < n)
            throw WeightsError(WeightsError::Kind::Truncated,
                               std::string("weight file truncated reading ") + what);
    }
    const std::string& buf_;
    size_t pos_ = 0;
};

}  // namespace

void save_weights(const FeatureExtractor& net, const std::string& path) {
    std::string out;
    out += "TXW1";
    put_u32(out, static_cast<uint32_t>(net.layers().size()));
    for (const LayerSpec& L : net.layers()) {
        out.push_back(static_cast<char>(L.kind));
        if (L.kind != LayerKind::Conv) continue;
        put_u32(out, static_cast<uint32_t>(L.kernel_rows));
        put_u32(out, static_cast<uint32_t>(L.kernel_cols));
        put_u32(out, static_cast<uint32_t>(L.in_channels));
        put_u32(out, static_cast<uint32_t>(L.out_channels));
        put_u32(out, static_cast<uint32_t>(L.stride));
        out.push_back(L.has_bias ? 1 : 0);
        for (float w : L.weights) put_f32(out, w);
        for (float b : L.bias) put_f32(out, b);
    }
    write_file_atomic(path, out);
}

FeatureExtractor load_weights(const std::string& path) {
    std::string buf;
    {
        std::ifstream in(path, std::ios::binary);
        if (!in) throw IoError("cannot open weight file " + path);
        buf.assign(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
    }
    if (buf.size() < 4 || buf.compare(0, 4, "TXW1") != 0)
        throw WeightsError(WeightsError::Kind::BadMagic, "weight file " + path +
                                                             " does not start with TXW1");

    Reader r(buf, 4);
    const uint32_t count = r.u32("layer count");
    std::vector<LayerSpec> layers;
    layers.reserve(count);
    for (uint32_t i = 0; i < count; ++i) {
        const std::string tag = layer_tag(static_cast<int>(i));
        const uint8_t kind = r.u8("layer kind");
        if (kind > static_cast<uint8_t>(LayerKind::MaxPool))
            throw WeightsError(WeightsError::Kind::BadLayout,
                               tag + ": unknown layer kind " + std::to_string(kind));
        if (kind != static_cast<uint8_t>(LayerKind::Conv)) {
            LayerSpec L;
            L.kind = static_cast<LayerKind>(kind);
            layers.push_back(std::move(L));
            continue;
        }
        LayerSpec L;
        L.kind = LayerKind::Conv;
        L.kernel_rows = static_cast<int>(r.u32("kernel rows"));
        L.kernel_cols = static_cast<int>(r.u32("kernel cols"));
        L.in_channels = static_cast<int>(r.u32("in channels"));
        L.out_channels = static_cast<int>(r.u32("out channels"));
        L.stride = static_cast<int>(r.u32("stride"));
        L.has_bias = r.u8("bias flag") != 0;
        if (L.kernel_rows <= 0 || L.kernel_cols <= 0 || L.kernel_rows % 2 == 0 ||
            L.kernel_cols % 2 == 0)
            throw WeightsError(WeightsError::Kind::BadLayout,
                               tag + ": kernel dims must be odd and positive");
        if (L.in_channels <= 0 || L.out_channels <= 0 || L.in_channels > (1 << 16) ||
            L.out_channels > (1 << 16) || L.kernel_rows > 1024 || L.kernel_cols > 1024)
            throw WeightsError(WeightsError::Kind::BadLayout, tag + ": implausible conv shape");
        if (L.stride != 1)
            throw WeightsError(WeightsError::Kind::BadLayout, tag + ": stride must be 1");
        const size_t n = static_cast<size_t>(L.kernel_rows) * L.kernel_cols * L.in_channels *
                         L.out_channels;
        L.weights.resize(n);
        for (size_t k = 0; k < n; ++k) L.weights[k] = r.f32("conv weights");
        if (L.has_bias) {
            L.bias.resize(L.out_channels);
            for (int k = 0; k < L.out_channels; ++k) L.bias[k] = r.f32("conv biases");
        }
        for (float w : L.weights)
            if (!std::isfinite(w))
                throw WeightsError(WeightsError::Kind::BadLayout, tag + ": non-finite weight");
        for (float b : L.bias)
            if (!std::isfinite(b))
                throw WeightsError(WeightsError::Kind::BadLayout, tag + ": non-finite bias");
        layers.push_back(std::move(L));
    }
    if (r.remaining() != 0)
        throw WeightsError(WeightsError::Kind::BadLayout,
                           "weight file has " + std::to_string(r.remaining()) + " trailing bytes");

    // Channel-chain consistency, reported as a layout error with the layer index.
    int channels = 0;
    std::vector<int> taps;
    int content_tap = -1;
    for (size_t i = 0; i < layers.size(); ++i) {
        const LayerSpec& L = layers[i];
        if (L.kind == LayerKind::Conv) {
            if (channels != 0 && L.in_channels != channels)
                throw WeightsError(WeightsError::Kind::BadLayout,
                                   layer_tag(static_cast<int>(i)) + ": expects " +
                                       std::to_string(L.in_channels) +
                                       " channels but receives " + std::to_string(channels));
            channels = L.out_channels;
        } else if (L.kind == LayerKind::Relu) {
            taps.push_back(static_cast<int>(i));
            content_tap = static_cast<int>(i);
        }
    }
    return FeatureExtractor(std::move(layers), std::move(taps), content_tap);
}

}  // namespace texmix
