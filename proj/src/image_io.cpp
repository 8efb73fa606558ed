#include "holo/image_io.hpp"

#include <png.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <functional>
#include <memory>
#include <vector>

namespace holo {

namespace {

constexpr double kPi = 3.14159265358979323846;

struct FileCloser {
    void operator()(std::FILE* f) const {
        if (f) std::fclose(f);
    }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

Image read_png(const std::string& path) {
    FilePtr fp(std::fopen(path.c_str(), "rb"));
    if (!fp) fail("read_image: cannot open '" + path + "'");

    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png ? png_create_info_struct(png) : nullptr;
    if (!png || !info) {
        png_destroy_read_struct(&png, &info, nullptr);
        fail("read_image: libpng init failed");
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        fail("read_image: '" + path + "' is not a valid PNG");
    }
    png_init_io(png, fp.get());
    png_read_info(png, info);

    const int color = png_get_color_type(png, info);
    if (color == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
    if (color & PNG_COLOR_MASK_COLOR || color == PNG_COLOR_TYPE_PALETTE)
        png_set_rgb_to_gray(png, 1, -1, -1);
    if (png_get_bit_depth(png, info) < 8) png_set_expand_gray_1_2_4_to_8(png);
    png_set_strip_alpha(png);
    png_read_update_info(png, info);

    const int h = static_cast<int>(png_get_image_height(png, info));
    const int w = static_cast<int>(png_get_image_width(png, info));
    const int depth = png_get_bit_depth(png, info);
    const double maxval = depth == 16 ? 65535.0 : 255.0;
    const size_t rowbytes = png_get_rowbytes(png, info);

    std::vector<unsigned char> row(rowbytes);
    Image im = Image::zeros(h, w);
    for (int i = 0; i < h; ++i) {
        png_read_row(png, row.data(), nullptr);
        for (int j = 0; j < w; ++j) {
            unsigned v;
            if (depth == 16)
                v = (static_cast<unsigned>(row[2 * j]) << 8) | row[2 * j + 1];  // big-endian
            else
                v = row[j];
            im.at(i, j) = v / maxval;
        }
    }
    png_destroy_read_struct(&png, &info, nullptr);
    return im;
}

Image read_pgm(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail("read_image: cannot open '" + path + "'");
    std::string magic;
    in >> magic;
    if (magic != "P2" && magic != "P5") fail("read_image: '" + path + "' is not a PGM file");
    auto next_token = [&in, &path]() {
        std::string tok;
        for (;;) {
            if (!(in >> tok)) fail("read_image: truncated PGM '" + path + "'");
            if (tok[0] == '#') {
                std::string rest;
                std::getline(in, rest);
                continue;
            }
            return tok;
        }
    };
    const int w = std::stoi(next_token());
    const int h = std::stoi(next_token());
    const int maxval = std::stoi(next_token());
    if (w < 1 || h < 1 || maxval < 1 || maxval > 65535)
        fail("read_image: bad PGM header in '" + path + "'");
    Image im = Image::zeros(h, w);
    if (magic == "P2") {
        for (auto& v : im.data) {
            int x;
            if (!(in >> x)) fail("read_image: truncated PGM '" + path + "'");
            v = static_cast<double>(x) / maxval;
        }
    } else {
        in.get();  // single whitespace after maxval
        const int bytes = maxval > 255 ? 2 : 1;
        std::vector<unsigned char> buf(im.data.size() * bytes);
        in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
        if (in.gcount() != static_cast<std::streamsize>(buf.size()))
            fail("read_image: truncated PGM '" + path + "'");
        for (size_t i = 0; i < im.data.size(); ++i) {
            const unsigned v = bytes == 2
                                   ? (static_cast<unsigned>(buf[2 * i]) << 8) | buf[2 * i + 1]
                                   : buf[i];
            im.data[i] = static_cast<double>(v) / maxval;
        }
    }
    return im;
}

void write_png16_raw(const std::string& path, const Image& image,
                     const std::function<uint16_t(double)>& quantize) {
    if (image.height < 1 || image.width < 1) fail("write_png16: empty image");
    FilePtr fp(std::fopen(path.c_str(), "wb"));
    if (!fp) fail("write_png16: cannot open '" + path + "' for writing");

    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png ? png_create_info_struct(png) : nullptr;
    if (!png || !info) {
        png_destroy_write_struct(&png, &info);
        fail("write_png16: libpng init failed");
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        fail("write_png16: failed writing '" + path + "'");
    }
    png_init_io(png, fp.get());
    png_set_IHDR(png, info, image.width, image.height, 16, PNG_COLOR_TYPE_GRAY,
                 PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);

    std::vector<unsigned char> row(static_cast<size_t>(image.width) * 2);
    for (int i = 0; i < image.height; ++i) {
        for (int j = 0; j < image.width; ++j) {
            const uint16_t v = quantize(image.at(i, j));
            row[2 * j] = static_cast<unsigned char>(v >> 8);  // network byte order
            row[2 * j + 1] = static_cast<unsigned char>(v & 0xff);
        }
        png_write_row(png, row.data());
    }
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
}

}  // namespace

Image read_image(const std::string& path) {
    std::ifstream probe(path, std::ios::binary);
    if (!probe) fail("read_image: cannot open '" + path + "'");
    char head[2] = {0, 0};
    probe.read(head, 2);
    probe.close();
    if (head[0] == 'P' && (head[1] == '2' || head[1] == '5')) return read_pgm(path);
    return read_png(path);
}

void write_png16(const std::string& path, const Image& image) {
    write_png16_raw(path, image, [](double v) {
        return static_cast<uint16_t>(std::lround(std::clamp(v, 0.0, 1.0) * 65535.0));
    });
}

void write_phase_png16(const std::string& path, const Image& phase) {
    write_png16_raw(path, phase, [](double v) {
        const double t = (std::clamp(v, -kPi, kPi) + kPi) / (2.0 * kPi);
        return static_cast<uint16_t>(std::lround(t * 65535.0));
    });
}

}  // namespace holo
