#include "texmix/image_io.hpp"

#include <png.h>

#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <vector>

#include "texmix/errors.hpp"

namespace texmix {

uint8_t quantize_unit(double v) {
    if (std::isnan(v)) throw NumericError("cannot quantize NaN pixel value");
    const double clamped = v < 0.0 ? 0.0 : (v > 1.0 ? 1.0 : v);
    return static_cast<uint8_t>(std::floor(255.0 * clamped + 0.5));
}

void write_file_atomic(const std::string& path, const std::string& bytes) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot open " + tmp + " for writing");
        out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
        if (!out) throw IoError("short write to " + tmp);
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0) {
        std::remove(tmp.c_str());
        throw IoError("cannot rename " + tmp + " to " + path);
    }
}

FeatureMap load_png(const std::string& path) {
    std::string file;
    {
        std::ifstream in(path, std::ios::binary);
        if (!in) throw IoError("cannot open image " + path);
        file.assign(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
    }

    png_image image;
    std::memset(&image, 0, sizeof(image));
    image.version = PNG_IMAGE_VERSION;
    if (!png_image_begin_read_from_memory(&image, file.data(), file.size()))
        throw IoError("cannot decode " + path + ": " + image.message);
    if (image.format & PNG_FORMAT_FLAG_ALPHA) {
        png_image_free(&image);
        throw IoError(path + " has an alpha channel; only opaque RGB or grayscale is supported");
    }

    image.format = PNG_FORMAT_RGB;
    std::vector<uint8_t> pixels(PNG_IMAGE_SIZE(image));
    if (!png_image_finish_read(&image, nullptr, pixels.data(), 0, nullptr)) {
        const std::string message = image.message;
        png_image_free(&image);
        throw IoError("cannot decode " + path + ": " + message);
    }

    const long rows = image.height, cols = image.width;
    FeatureMap out(rows, cols, 3);
    for (int ch = 0; ch < 3; ++ch) {
        double* plane = out.plane(ch);
        for (long p = 0; p < rows * cols; ++p)
            plane[p] = static_cast<double>(pixels[3 * p + ch]) / 255.0;
    }
    return out;
}

void save_png(const FeatureMap& img, const std::string& path) {
    if (img.channels() != 3)
        throw InvalidInput("PNG output needs a 3-channel image, got " +
                           std::to_string(img.channels()) + " channels");

    const long rows = img.rows(), cols = img.cols();
    std::vector<uint8_t> pixels(static_cast<size_t>(rows) * cols * 3);
    for (int ch = 0; ch < 3; ++ch) {
        const double* plane = img.plane(ch);
        for (long p = 0; p < rows * cols; ++p) pixels[3 * p + ch] = quantize_unit(plane[p]);
    }

    png_image image;
    std::memset(&image, 0, sizeof(image));
    image.version = PNG_IMAGE_VERSION;
    image.width = static_cast<png_uint_32>(cols);
    image.height = static_cast<png_uint_32>(rows);
    image.format = PNG_FORMAT_RGB;

    png_alloc_size_t size = 0;
    if (!png_image_write_to_memory(&image, nullptr, &size, 0, pixels.data(), 0, nullptr))
        throw IoError("cannot encode " + path + ": " + image.message);
    std::string encoded(size, '\0');
    if (!png_image_write_to_memory(&image, encoded.data(), &size, 0, pixels.data(), 0, nullptr))
        throw IoError("cannot encode " + path + ": " + image.message);
    encoded.resize(size);

    write_file_atomic(path, encoded);
}

}  // namespace texmix
