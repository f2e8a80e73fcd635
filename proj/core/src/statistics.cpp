#include "texmix/statistics.hpp"

#include <algorithm>
#include <cmath>

namespace texmix {

double GramMatrix::frobenius_distance(const GramMatrix& o) const {
    if (channels_ != o.channels_) throw InvalidInput("GramMatrix size mismatch");
    double acc = 0.0;
    for (size_t i = 0; i < v_.size(); ++i) {
        const double d = v_[i] - o.v_[i];
        acc += d * d;
    }
    return std::sqrt(acc);
}

GramMatrix CovarianceField::at_origin() const {
    GramMatrix g(channels_);
    for (int i = 0; i < channels_; ++i)
        for (int j = 0; j < channels_; ++j) g.at(i, j) = at(0, 0, i, j);
    return g;
}

std::vector<double> mean(const FeatureMap& f) {
    f.check_finite();
    std::vector<double> m(f.channels(), 0.0);
    for (int ch = 0; ch < f.channels(); ++ch) {
        const double* p = f.plane(ch);
        double acc = 0.0;
        for (long i = 0; i < f.pixel_count(); ++i) acc += p[i];
        m[ch] = acc / static_cast<double>(f.pixel_count());
    }
    return m;
}

GramMatrix gram(const FeatureMap& f) {
    f.check_finite();
    const int k = f.channels();
    GramMatrix g(k);
    for (int i = 0; i < k; ++i) {
        const double* a = f.plane(i);
        for (int j = i; j < k; ++j) {
            const double* b = f.plane(j);
            double acc = 0.0;
            for (long p = 0; p < f.pixel_count(); ++p) acc += a[p] * b[p];
            acc /= static_cast<double>(f.pixel_count());
            g.at(i, j) = acc;
            g.at(j, i) = acc;
        }
    }
    return g;
}

namespace {

FeatureMap centered(const FeatureMap& f) {
    const std::vector<double> m = mean(f);
    FeatureMap out(f.rows(), f.cols(), f.channels());
    for (int ch = 0; ch < f.channels(); ++ch) {
        const double* src = f.plane(ch);
        double* dst = out.plane(ch);
        for (long i = 0; i < f.pixel_count(); ++i) dst[i] = src[i] - m[ch];
    }
    return out;
}

}  // namespace

GramMatrix centered_gram(const FeatureMap& f) { return gram(centered(f)); }

CorrelationField correlation(const FeatureMap& f) {
    // S_hat(w) = (1/|U|) |F_hat(w)|^2, so S is one inverse transform away.
    SpectrumGrid spec = fft_forward(f);
    const double scale = 1.0 / static_cast<double>(f.pixel_count());
    for (auto& z : spec.values()) z = {std::norm(z) * scale, 0.0};
    return fft_inverse(spec, /*require_real=*/true);
}

CovarianceField covariance(const FeatureMap& f) {
    const int k = f.channels();
    SpectrumGrid spec = fft_forward(centered(f));
    const double scale = 1.0 / static_cast<double>(f.pixel_count());

    CovarianceField cov(f.rows(), f.cols(), k);
    SpectrumGrid cross(f.rows(), f.cols(), 1);
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) {
            const std::complex<double>* a = spec.plane(i);
            const std::complex<double>* b = spec.plane(j);
            std::complex<double>* c = cross.plane(0);
            for (long p = 0; p < f.pixel_count(); ++p) c[p] = std::conj(a[p]) * b[p] * scale;
            FeatureMap plane = fft_inverse(cross, /*require_real=*/false);
            std::copy(plane.plane(0), plane.plane(0) + f.pixel_count(), cov.plane(i, j));
        }
    return cov;
}

SpectrumStat spectrum(const FeatureMap& f) {
    SpectrumGrid spec = fft_forward(f);
    SpectrumStat out(f.rows(), f.cols(), f.channels());
    for (int ch = 0; ch < f.channels(); ++ch) {
        const std::complex<double>* src = spec.plane(ch);
        double* dst = out.plane(ch);
        for (long i = 0; i < f.pixel_count(); ++i) dst[i] = std::abs(src[i]);
    }
    return out;
}

double GaussianIdentityReport::max_dev() const {
    return std::max({gram_dev, centered_gram_dev, correlation_dev, spectrum_dev});
}

GaussianIdentityReport verify_gaussian_identities(const FeatureMap& f) {
    const int k = f.channels();
    const std::vector<double> m = mean(f);
    const GramMatrix g = gram(f);
    const GramMatrix gc = centered_gram(f);
    const CorrelationField s = correlation(f);
    const SpectrumStat spec = spectrum(f);
    const CovarianceField cov = covariance(f);

    GaussianIdentityReport report;
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) {
            const double c0 = cov.at(0, 0, i, j);
            report.gram_dev = std::max(report.gram_dev, std::abs(g.at(i, j) - (c0 + m[i] * m[j])));
            report.centered_gram_dev =
                std::max(report.centered_gram_dev, std::abs(gc.at(i, j) - c0));
        }

    for (long r = 0; r < f.rows(); ++r)
        for (long c = 0; c < f.cols(); ++c)
            for (int n = 0; n < k; ++n) {
                const double expected = cov.at(r, c, n, n) + m[n] * m[n];
                report.correlation_dev =
                    std::max(report.correlation_dev, std::abs(s.at(r, c, n) - expected));
            }

    // spectrum(w)^2 against |U| * |S_hat(w)|, channel by channel.
    const SpectrumGrid s_hat = fft_forward(s);
    const double u = static_cast<double>(f.pixel_count());
    for (int ch = 0; ch < k; ++ch) {
        const std::complex<double>* sh = s_hat.plane(ch);
        const double* sp = spec.plane(ch);
        for (long i = 0; i < f.pixel_count(); ++i) {
            const double dev = std::abs(sp[i] * sp[i] - u * std::abs(sh[i]));
            report.spectrum_dev = std::max(report.spectrum_dev, dev);
        }
    }
    return report;
}

}  // namespace texmix
