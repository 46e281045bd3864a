#include "toposeg/image_io.hpp"

#include <png.h>

#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <vector>

namespace toposeg {

namespace {

struct Raster {
    int width = 0;
    int height = 0;
    int maxval = 255;
    std::vector<std::uint8_t> pixels; // row-major, top row first
};

[[noreturn]] void io_fail(const std::string& path, const std::string& what) {
    throw IoError(path + ": " + what);
}

// ---- PGM (P5) ----

int pgm_token(std::istream& in) {
    // Skips whitespace and '#' comments, then reads one decimal token.
    int c = in.get();
    while (c != EOF) {
        if (c == '#') {
            while (c != EOF && c != '\n') c = in.get();
        } else if (!std::isspace(c)) {
            break;
        }
        c = in.get();
    }
    if (c == EOF || !std::isdigit(c)) return -1;
    long value = 0;
    while (c != EOF && std::isdigit(c)) {
        value = value * 10 + (c - '0');
        if (value > 1 << 30) return -1;
        c = in.get();
    }
    if (c != EOF) in.unget();
    return static_cast<int>(value);
}

Raster load_pgm(const std::string& path, std::ifstream& in) {
    char magic[2];
    if (!in.read(magic, 2) || magic[0] != 'P' || magic[1] != '5')
        io_fail(path, "not a P5 PGM file");
    Raster r;
    r.width = pgm_token(in);
    r.height = pgm_token(in);
    r.maxval = pgm_token(in);
    if (r.width <= 0 || r.height <= 0)
        io_fail(path, "invalid PGM dimensions");
    if (r.maxval <= 0 || r.maxval > 255)
        io_fail(path, "unsupported PGM maxval (8-bit only)");
    in.get(); // single whitespace byte before the raster
    r.pixels.resize(static_cast<std::size_t>(r.width) * r.height);
    if (!in.read(reinterpret_cast<char*>(r.pixels.data()),
                 static_cast<std::streamsize>(r.pixels.size())))
        io_fail(path, "truncated PGM raster");
    return r;
}

void save_pgm(const std::string& path, const Raster& r) {
    std::ofstream out(path, std::ios::binary);
    if (!out) io_fail(path, "cannot open for writing");
    out << "P5\n" << r.width << " " << r.height << "\n255\n";
    out.write(reinterpret_cast<const char*>(r.pixels.data()),
              static_cast<std::streamsize>(r.pixels.size()));
    if (!out) io_fail(path, "write failed");
}

// ---- PNG (8-bit grayscale) ----

Raster load_png(const std::string& path) {
    std::FILE* fp = std::fopen(path.c_str(), "rb");
    if (!fp) io_fail(path, "cannot open");
    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png ? png_create_info_struct(png) : nullptr;
    if (!png || !info) {
        if (png) png_destroy_read_struct(&png, &info, nullptr);
        std::fclose(fp);
        io_fail(path, "libpng init failed");
    }
    std::vector<std::uint8_t> pixels;
    int width = 0, height = 0;
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        std::fclose(fp);
        io_fail(path, "corrupt PNG stream");
    }
    png_init_io(png, fp);
    png_read_info(png, info);
    width = static_cast<int>(png_get_image_width(png, info));
    height = static_cast<int>(png_get_image_height(png, info));
    int color = png_get_color_type(png, info);
    int depth = png_get_bit_depth(png, info);
    if (color != PNG_COLOR_TYPE_GRAY || depth != 8) {
        png_destroy_read_struct(&png, &info, nullptr);
        std::fclose(fp);
        io_fail(path, "unsupported PNG encoding (8-bit grayscale only)");
    }
    pixels.resize(static_cast<std::size_t>(width) * height);
    std::vector<png_bytep> rows(height);
    for (int r = 0; r < height; ++r)
        rows[r] = pixels.data() + static_cast<std::size_t>(r) * width;
    png_read_image(png, rows.data());
    png_read_end(png, nullptr);
    png_destroy_read_struct(&png, &info, nullptr);
    std::fclose(fp);
    Raster out;
    out.width = width;
    out.height = height;
    out.maxval = 255;
    out.pixels = std::move(pixels);
    return out;
}

void save_png(const std::string& path, const Raster& r) {
    std::FILE* fp = std::fopen(path.c_str(), "wb");
    if (!fp) io_fail(path, "cannot open for writing");
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png ? png_create_info_struct(png) : nullptr;
    if (!png || !info) {
        if (png) png_destroy_write_struct(&png, &info);
        std::fclose(fp);
        io_fail(path, "libpng init failed");
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        std::fclose(fp);
        io_fail(path, "PNG write failed");
    }
    png_init_io(png, fp);
    png_set_IHDR(png, info, r.width, r.height, 8, PNG_COLOR_TYPE_GRAY,
                 PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    std::vector<png_bytep> rows(r.height);
    for (int row = 0; row < r.height; ++row)
        rows[row] = const_cast<png_bytep>(r.pixels.data() + static_cast<std::size_t>(row) * r.width);
    png_write_image(png, rows.data());
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
    std::fclose(fp);
}

// ---- dispatch ----

Raster load_raster(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) io_fail(path, "cannot open");
    char magic[2] = {0, 0};
    in.read(magic, 2);
    in.seekg(0);
    if (magic[0] == 'P' && magic[1] == '5') return load_pgm(path, in);
    if (static_cast<unsigned char>(magic[0]) == 0x89 && magic[1] == 'P') {
        in.close();
        return load_png(path);
    }
    io_fail(path, "unrecognized image format");
}

void save_raster(const std::string& path, const Raster& r) {
    auto dot = path.find_last_of('.');
    std::string ext = dot == std::string::npos ? "" : path.substr(dot);
    if (ext == ".pgm") { save_pgm(path, r); return; }
    if (ext == ".png") { save_png(path, r); return; }
    io_fail(path, "unsupported output extension (.pgm or .png)");
}

} // namespace

Image2D load_grayscale(const std::string& path) {
    Raster r = load_raster(path);
    std::vector<double> values(r.pixels.begin(), r.pixels.end());
    return Image2D(r.width, r.height, std::move(values));
}

BinaryMask load_mask(const std::string& path) {
    Raster r = load_raster(path);
    std::vector<std::uint8_t> bits(r.pixels.size());
    for (std::size_t i = 0; i < r.pixels.size(); ++i) {
        if (r.pixels[i] != 0 && r.pixels[i] != r.maxval)
            throw ValidationError(path + ": non-binary pixel value " + std::to_string(r.pixels[i]));
        bits[i] = r.pixels[i] != 0 ? 1 : 0;
    }
    return BinaryMask(r.width, r.height, std::move(bits));
}

LikelihoodMap load_likelihood(const std::string& path) {
    Raster r = load_raster(path);
    std::vector<double> values(r.pixels.size());
    for (std::size_t i = 0; i < r.pixels.size(); ++i)
        values[i] = static_cast<double>(r.pixels[i]) / r.maxval;
    return LikelihoodMap(r.width, r.height, std::move(values));
}

void save_grayscale(const std::string& path, const Image2D& image) {
    Raster r;
    r.width = image.width();
    r.height = image.height();
    r.pixels.resize(static_cast<std::size_t>(r.width) * r.height);
    for (int row = 0; row < r.height; ++row)
        for (int col = 0; col < r.width; ++col) {
            double v = image.at(row, col);
            if (v < 0 || v > 255 || v != std::floor(v))
                throw ValidationError(path + ": pixel not an integer in 0..255");
            r.pixels[static_cast<std::size_t>(row) * r.width + col] = static_cast<std::uint8_t>(v);
        }
    save_raster(path, r);
}

void save_mask(const std::string& path, const BinaryMask& mask) {
    Raster r;
    r.width = mask.width();
    r.height = mask.height();
    r.pixels.resize(static_cast<std::size_t>(r.width) * r.height);
    for (int row = 0; row < r.height; ++row)
        for (int col = 0; col < r.width; ++col)
            r.pixels[static_cast<std::size_t>(row) * r.width + col] = mask.at(row, col) ? 255 : 0;
    save_raster(path, r);
}

void save_likelihood(const std::string& path, const LikelihoodMap& map) {
    Raster r;
    r.width = map.width();
    r.height = map.height();
    r.pixels.resize(static_cast<std::size_t>(r.width) * r.height);
    for (int row = 0; row < r.height; ++row)
        for (int col = 0; col < r.width; ++col)
            r.pixels[static_cast<std::size_t>(row) * r.width + col] =
                static_cast<std::uint8_t>(std::lround(map.at(row, col) * 255.0));
    save_raster(path, r);
}

RealGrid read_sdf(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) io_fail(path, "cannot open");
    std::string magic;
    in >> magic;
    if (magic != "SDF1") io_fail(path, "not an SDF1 file");
    int width = 0, height = 0;
    in >> width >> height;
    if (!in || width <= 0 || height <= 0) io_fail(path, "invalid SDF1 header");
    in.get(); // newline terminating the header
    std::vector<float> raw(static_cast<std::size_t>(width) * height);
    if (!in.read(reinterpret_cast<char*>(raw.data()),
                 static_cast<std::streamsize>(raw.size() * sizeof(float))))
        io_fail(path, "truncated SDF1 payload");
    std::vector<double> values(raw.begin(), raw.end());
    return RealGrid(width, height, std::move(values));
}

void write_sdf(const std::string& path, const RealGrid& field) {
    std::ofstream out(path, std::ios::binary);
    if (!out) io_fail(path, "cannot open for writing");
    out << "SDF1\n" << field.width() << " " << field.height() << "\n";
    std::vector<float> raw(field.data().begin(), field.data().end());
    out.write(reinterpret_cast<const char*>(raw.data()),
              static_cast<std::streamsize>(raw.size() * sizeof(float)));
    if (!out) io_fail(path, "write failed");
}

} // namespace toposeg
