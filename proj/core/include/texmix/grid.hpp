#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "texmix/errors.hpp"

namespace texmix {

// Integer spatial offset (row, col) on a periodic grid.
struct Offset {
    long row = 0;
    long col = 0;
};

// Real-valued multi-channel grid on the periodic lattice {0..rows-1} x {0..cols-1}.
//
// Storage is channel-major (planar): value(r, c, ch) lives at
// ch * rows * cols + r * cols + c. All indexing that consumes offsets wraps
// modulo (rows, cols).
class FeatureMap {
public:
    FeatureMap() = default;

    FeatureMap(long rows, long cols, int channels, double fill = 0.0)
        : rows_(rows), cols_(cols), channels_(channels) {
        if (rows < 1 || cols < 1 || channels < 1)
            throw InvalidInput("FeatureMap dimensions must be positive: " + shape_string(rows, cols, channels));
        v_.assign(static_cast<size_t>(rows) * cols * channels, fill);
    }

    long rows() const { return rows_; }
    long cols() const { return cols_; }
    int channels() const { return channels_; }
    long pixel_count() const { return rows_ * cols_; }  // |U|
    size_t size() const { return v_.size(); }
    bool same_shape(const FeatureMap& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && channels_ == o.channels_;
    }

    double& at(long r, long c, int ch) { return v_[plane_offset(ch) + r * cols_ + c]; }
    double at(long r, long c, int ch) const { return v_[plane_offset(ch) + r * cols_ + c]; }

    // Wrap-around access; any integer coordinates are valid.
    double at_wrapped(long r, long c, int ch) const {
        return v_[plane_offset(ch) + wrap(r, rows_) * cols_ + wrap(c, cols_)];
    }

    double* plane(int ch) { return v_.data() + plane_offset(ch); }
    const double* plane(int ch) const { return v_.data() + plane_offset(ch); }

    std::vector<double>& values() { return v_; }
    const std::vector<double>& values() const { return v_; }

    // Throws unless every value is finite.
    void check_finite() const;

    static long wrap(long i, long n) {
        long m = i % n;
        return m < 0 ? m + n : m;
    }

private:
    size_t plane_offset(int ch) const { return static_cast<size_t>(ch) * rows_ * cols_; }
    static std::string shape_string(long r, long c, int k);

    long rows_ = 0;
    long cols_ = 0;
    int channels_ = 0;
    std::vector<double> v_;
};

// Complex-valued grid of DFT bins, same layout as the FeatureMap it came from.
class SpectrumGrid {
public:
    SpectrumGrid() = default;

    SpectrumGrid(long rows, long cols, int channels)
        : rows_(rows), cols_(cols), channels_(channels) {
        if (rows < 1 || cols < 1 || channels < 1)
            throw InvalidInput("SpectrumGrid dimensions must be positive");
        v_.assign(static_cast<size_t>(rows) * cols * channels, {0.0, 0.0});
    }

    long rows() const { return rows_; }
    long cols() const { return cols_; }
    int channels() const { return channels_; }
    long pixel_count() const { return rows_ * cols_; }
    bool same_shape(const SpectrumGrid& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && channels_ == o.channels_;
    }

    std::complex<double>& at(long r, long c, int ch) { return v_[plane_offset(ch) + r * cols_ + c]; }
    const std::complex<double>& at(long r, long c, int ch) const {
        return v_[plane_offset(ch) + r * cols_ + c];
    }

    std::complex<double>* plane(int ch) { return v_.data() + plane_offset(ch); }
    const std::complex<double>* plane(int ch) const { return v_.data() + plane_offset(ch); }

    std::vector<std::complex<double>>& values() { return v_; }
    const std::vector<std::complex<double>>& values() const { return v_; }

private:
    size_t plane_offset(int ch) const { return static_cast<size_t>(ch) * rows_ * cols_; }

    long rows_ = 0;
    long cols_ = 0;
    int channels_ = 0;
    std::vector<std::complex<double>> v_;
};

// Unnormalized forward DFT per channel:
//   S(w, ch) = sum_p F(p, ch) * exp(-2*pi*i * <w / (rows, cols), p>).
SpectrumGrid fft_forward(const FeatureMap& f);

// Inverse DFT with 1/|U| normalization. The imaginary part is discarded; when
// `require_real` is set and the largest |imag| exceeds 1e-9, throws NonRealResult
// (a broken Hermitian symmetry upstream). `max_imag_out`, if given, receives the
// residue before truncation.
FeatureMap fft_inverse(const SpectrumGrid& s, bool require_real = false,
                       double* max_imag_out = nullptr);

// Largest tolerated |imag| residue in fft_inverse(..., require_real = true).
inline constexpr double kRealResidueTolerance = 1e-9;

// F'(p, ch) = F((p - offset) mod (rows, cols), ch).
FeatureMap circular_shift(const FeatureMap& f, Offset offset);

}  // namespace texmix
