#include "texmix/mixing.hpp"

#include <cmath>

#include "texmix/rng.hpp"

namespace texmix {

GaussianModel estimate_model(const FeatureMap& f) { return {mean(f), covariance(f)}; }

FeatureMap ot_interpolate(const FeatureMap& f0, const FeatureMap& f1, MixWeight rho,
                          double* max_imag_out) {
    if (!f0.same_shape(f1))
        throw InvalidInput("ot_interpolate: feature maps must share dimensions and channels");
    const double t = rho.value();
    const int k = f0.channels();

    SpectrumGrid s0 = fft_forward(f0);
    SpectrumGrid s1 = fft_forward(f1);
    SpectrumGrid mixed(f0.rows(), f0.cols(), k);

    for (long i = 0; i < f0.pixel_count(); ++i) {
        std::complex<double> inner{0.0, 0.0};
        double norm0 = 0.0, norm1 = 0.0;
        for (int ch = 0; ch < k; ++ch) {
            const std::complex<double> a = s0.plane(ch)[i];
            const std::complex<double> b = s1.plane(ch)[i];
            inner += std::conj(b) * a;
            norm0 += std::norm(a);
            norm1 += std::norm(b);
        }
        // Unit-modulus alignment, or 1 where the inner product vanishes.
        std::complex<double> align{1.0, 0.0};
        const double mag = std::abs(inner);
        if (mag >= 1e-12 * (std::sqrt(norm0) * std::sqrt(norm1) + 1e-300)) align = inner / mag;

        for (int ch = 0; ch < k; ++ch)
            mixed.plane(ch)[i] = (1.0 - t) * s0.plane(ch)[i] + t * (s1.plane(ch)[i] * align);
    }
    return fft_inverse(mixed, /*require_real=*/true, max_imag_out);
}

GramMatrix mixed_gram(const FeatureMap& f0, const FeatureMap& f1, MixWeight rho) {
    return gram(ot_interpolate(f0, f1, rho));
}

CorrelationField mixed_correlation(const FeatureMap& f0, const FeatureMap& f1, MixWeight rho) {
    return correlation(ot_interpolate(f0, f1, rho));
}

GramMatrix lia_gram(const GramMatrix& g0, const GramMatrix& g1, MixWeight rho) {
    if (g0.channels() != g1.channels()) throw InvalidInput("lia_gram: channel count mismatch");
    const double t = rho.value();
    GramMatrix out(g0.channels());
    for (size_t i = 0; i < out.values().size(); ++i)
        out.values()[i] = (1.0 - t) * g0.values()[i] + t * g1.values()[i];
    return out;
}

FeatureMap sample_gaussian_texture(const FeatureMap& exemplar, uint64_t seed) {
    exemplar.check_finite();
    const std::vector<double> m = mean(exemplar);
    const double inv_sqrt_u = 1.0 / std::sqrt(static_cast<double>(exemplar.pixel_count()));

    // One white field drives all channels; convolution is circular via FFT.
    const FeatureMap noise = normal_field(exemplar.rows(), exemplar.cols(), 1, seed);
    const SpectrumGrid noise_hat = fft_forward(noise);

    FeatureMap texton(exemplar.rows(), exemplar.cols(), exemplar.channels());
    for (int ch = 0; ch < exemplar.channels(); ++ch) {
        const double* src = exemplar.plane(ch);
        double* dst = texton.plane(ch);
        for (long i = 0; i < exemplar.pixel_count(); ++i) dst[i] = (src[i] - m[ch]) * inv_sqrt_u;
    }

    SpectrumGrid conv = fft_forward(texton);
    for (int ch = 0; ch < exemplar.channels(); ++ch) {
        const std::complex<double>* w = noise_hat.plane(0);
        std::complex<double>* t = conv.plane(ch);
        for (long i = 0; i < exemplar.pixel_count(); ++i) t[i] *= w[i];
    }

    FeatureMap out = fft_inverse(conv, /*require_real=*/true);
    for (int ch = 0; ch < exemplar.channels(); ++ch) {
        double* dst = out.plane(ch);
        for (long i = 0; i < exemplar.pixel_count(); ++i) dst[i] += m[ch];
    }
    return out;
}

FeatureMap pixel_mix(const FeatureMap& i0, const FeatureMap& i1, MixWeight rho, uint64_t seed) {
    if (!i0.same_shape(i1)) throw InvalidInput("pixel_mix: images must share dimensions");
    const double t = rho.value();
    const std::vector<double> m0 = mean(i0);
    const std::vector<double> m1 = mean(i1);

    FeatureMap c0(i0.rows(), i0.cols(), i0.channels());
    FeatureMap c1(i0.rows(), i0.cols(), i0.channels());
    for (int ch = 0; ch < i0.channels(); ++ch)
        for (long i = 0; i < i0.pixel_count(); ++i) {
            c0.plane(ch)[i] = i0.plane(ch)[i] - m0[ch];
            c1.plane(ch)[i] = i1.plane(ch)[i] - m1[ch];
        }

    FeatureMap mixed = ot_interpolate(c0, c1, rho);
    for (int ch = 0; ch < i0.channels(); ++ch) {
        const double blended = (1.0 - t) * m0[ch] + t * m1[ch];
        for (long i = 0; i < i0.pixel_count(); ++i) mixed.plane(ch)[i] += blended;
    }
    return sample_gaussian_texture(mixed, seed);
}

}  // namespace texmix
