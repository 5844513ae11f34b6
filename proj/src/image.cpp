#include "roverlay/image.hpp"

#include <png.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <memory>

#include "roverlay/errors.hpp"

namespace roverlay {

namespace {

std::uint8_t to_byte(float v) {
    return static_cast<std::uint8_t>(std::lround(std::clamp(v, 0.0f, 1.0f) * 255.0f));
}

struct FileCloser {
    void operator()(std::FILE* f) const {
        if (f) std::fclose(f);
    }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

FilePtr open_file(const std::filesystem::path& path, const char* mode) {
    FilePtr f(std::fopen(path.string().c_str(), mode));
    if (!f) throw IoError("cannot open " + path.string());
    return f;
}

// libpng writer with setjmp-based error propagation.
class PngWriter {
  public:
    explicit PngWriter(const std::filesystem::path& path) : file_(open_file(path, "wb")) {
        png_ = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
        if (png_) info_ = png_create_info_struct(png_);
        if (!png_ || !info_) {
            png_destroy_write_struct(&png_, &info_);
            throw IoError("libpng init failed");
        }
        png_init_io(png_, file_.get());
        png_set_compression_level(png_, 6);
    }
    ~PngWriter() { png_destroy_write_struct(&png_, &info_); }

    void write(int width, int height, int bit_depth, int color_type,
               const std::vector<png_bytep>& rows, bool swap16) {
        if (setjmp(png_jmpbuf(png_))) throw IoError("libpng write failed");
        png_set_IHDR(png_, info_, static_cast<png_uint_32>(width),
                     static_cast<png_uint_32>(height), bit_depth, color_type,
                     PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
        png_write_info(png_, info_);
        if (swap16) png_set_swap(png_);
        png_write_image(png_, const_cast<png_bytepp>(rows.data()));
        png_write_end(png_, nullptr);
    }

  private:
    FilePtr file_;
    png_structp png_ = nullptr;
    png_infop info_ = nullptr;
};

bool host_is_little_endian() {
    const std::uint16_t probe = 1;
    return *reinterpret_cast<const std::uint8_t*>(&probe) == 1;
}

}  // namespace

void write_ppm(const std::filesystem::path& path, const RgbImage& img) {
    FilePtr f = open_file(path, "wb");
    std::fprintf(f.get(), "P6\n%d %d\n255\n", img.width, img.height);
    std::vector<std::uint8_t> row(static_cast<std::size_t>(img.width) * 3);
    for (int y = 0; y < img.height; ++y) {
        const float* src = img.at(0, y);
        for (std::size_t i = 0; i < row.size(); ++i) row[i] = to_byte(src[i]);
        if (std::fwrite(row.data(), 1, row.size(), f.get()) != row.size())
            throw IoError("short write: " + path.string());
    }
}

void write_png_rgb8(const std::filesystem::path& path, const RgbImage& img) {
    std::vector<std::uint8_t> bytes(static_cast<std::size_t>(img.width) * img.height * 3);
    for (std::size_t i = 0; i < bytes.size(); ++i) bytes[i] = to_byte(img.px[i]);
    std::vector<png_bytep> rows(static_cast<std::size_t>(img.height));
    for (int y = 0; y < img.height; ++y)
        rows[y] = bytes.data() + static_cast<std::size_t>(y) * img.width * 3;
    PngWriter writer(path);
    writer.write(img.width, img.height, 8, PNG_COLOR_TYPE_RGB, rows, false);
}

void write_png_rgba8(const std::filesystem::path& path, const RgbaImage8& img) {
    std::vector<png_bytep> rows(static_cast<std::size_t>(img.height));
    for (int y = 0; y < img.height; ++y)
        rows[y] = const_cast<png_bytep>(img.px.data() + static_cast<std::size_t>(y) * img.width * 4);
    PngWriter writer(path);
    writer.write(img.width, img.height, 8, PNG_COLOR_TYPE_RGBA, rows, false);
}

void write_png_gray16(const std::filesystem::path& path, const Gray16Image& img) {
    std::vector<png_bytep> rows(static_cast<std::size_t>(img.height));
    for (int y = 0; y < img.height; ++y)
        rows[y] = const_cast<png_bytep>(
            reinterpret_cast<const png_byte*>(img.px.data() + static_cast<std::size_t>(y) * img.width));
    PngWriter writer(path);
    writer.write(img.width, img.height, 16, PNG_COLOR_TYPE_GRAY, rows, host_is_little_endian());
}

Gray16Image read_png_gray16(const std::filesystem::path& path) {
    FilePtr f = open_file(path, "rb");
    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png ? png_create_info_struct(png) : nullptr;
    if (!png || !info) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw IoError("libpng init failed");
    }
    Gray16Image img;
    std::vector<png_bytep> rows;
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw IoError("libpng read failed: " + path.string());
    }
    png_init_io(png, f.get());
    png_read_info(png, info);
    img.width = static_cast<int>(png_get_image_width(png, info));
    img.height = static_cast<int>(png_get_image_height(png, info));
    const int color_type = png_get_color_type(png, info);
    const int bit_depth = png_get_bit_depth(png, info);
    if (color_type != PNG_COLOR_TYPE_GRAY) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw IoError("expected grayscale PNG: " + path.string());
    }
    if (bit_depth < 16) png_set_expand_16(png);
    if (host_is_little_endian()) png_set_swap(png);
    png_read_update_info(png, info);
    img.px.resize(static_cast<std::size_t>(img.width) * img.height);
    rows.resize(static_cast<std::size_t>(img.height));
    for (int y = 0; y < img.height; ++y)
        rows[y] = reinterpret_cast<png_byte*>(img.px.data() + static_cast<std::size_t>(y) * img.width);
    png_read_image(png, rows.data());
    png_read_end(png, nullptr);
    png_destroy_read_struct(&png, &info, nullptr);
    return img;
}

}  // namespace roverlay
