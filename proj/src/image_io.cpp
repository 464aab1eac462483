#include "ibf/image_io.hpp"

#include <algorithm>
#include <cmath>
#include <csetjmp>
#include <cstdio>
#include <filesystem>
#include <memory>

#include <png.h>

namespace fs = std::filesystem;

namespace ibf {

namespace {

struct FileCloser {
    void operator()(std::FILE* f) const { if (f) std::fclose(f); }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

// Records the message and returns; libpng then longjmps to our setjmp point.
void png_record_error(png_structp png, png_const_charp msg) {
    *static_cast<std::string*>(png_get_error_ptr(png)) = msg;
}

void png_warn(png_structp, png_const_charp) {}

struct ReadCtx {
    png_structp png = nullptr;
    png_infop info = nullptr;
    std::string err;
    ~ReadCtx() {
        if (png) png_destroy_read_struct(&png, info ? &info : nullptr, nullptr);
    }
};

struct WriteCtx {
    png_structp png = nullptr;
    png_infop info = nullptr;
    std::string err;
    ~WriteCtx() {
        if (png) png_destroy_write_struct(&png, info ? &info : nullptr);
    }
};

// All libpng calls live in these helpers so the setjmp region contains no
// locals with destructors; the caller owns every buffer.
bool read_rgba(ReadCtx& ctx, std::FILE* f, std::vector<std::uint8_t>& rgba,
               std::vector<png_bytep>& rows, int& w, int& h) {
    if (setjmp(png_jmpbuf(ctx.png))) return false;
    png_init_io(ctx.png, f);
    png_read_info(ctx.png, ctx.info);

    png_set_strip_16(ctx.png);
    png_set_packing(ctx.png);
    png_set_palette_to_rgb(ctx.png);
    png_set_expand_gray_1_2_4_to_8(ctx.png);
    if (png_get_valid(ctx.png, ctx.info, PNG_INFO_tRNS))
        png_set_tRNS_to_alpha(ctx.png);
    png_set_gray_to_rgb(ctx.png);
    png_set_add_alpha(ctx.png, 0xffff, PNG_FILLER_AFTER);
    png_set_interlace_handling(ctx.png);
    png_read_update_info(ctx.png, ctx.info);

    w = static_cast<int>(png_get_image_width(ctx.png, ctx.info));
    h = static_cast<int>(png_get_image_height(ctx.png, ctx.info));
    if (png_get_rowbytes(ctx.png, ctx.info) != static_cast<std::size_t>(w) * 4) {
        ctx.err = "unexpected decoded row size";
        return false;
    }
    rgba.resize(static_cast<std::size_t>(w) * h * 4);
    rows.resize(h);
    for (int v = 0; v < h; ++v)
        rows[v] = rgba.data() + static_cast<std::size_t>(v) * w * 4;
    png_read_image(ctx.png, rows.data());
    png_read_end(ctx.png, nullptr);
    return true;
}

bool write_rows(WriteCtx& ctx, std::FILE* f, int w, int h, int color_type,
                const std::uint8_t* pixels, std::size_t row_bytes) {
    if (setjmp(png_jmpbuf(ctx.png))) return false;
    png_init_io(ctx.png, f);
    png_set_IHDR(ctx.png, ctx.info, w, h, 8, color_type, PNG_INTERLACE_NONE,
                 PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(ctx.png, ctx.info);
    for (int v = 0; v < h; ++v)
        png_write_row(ctx.png, const_cast<png_bytep>(pixels + v * row_bytes));
    png_write_end(ctx.png, ctx.info);
    return true;
}

void write_png(const std::string& path, int w, int h, int color_type,
               const std::uint8_t* pixels, std::size_t row_bytes) {
    FilePtr fp(std::fopen(path.c_str(), "wb"));
    if (!fp) throw RunError("cannot open for writing: " + path);
    WriteCtx ctx;
    ctx.png = png_create_write_struct(PNG_LIBPNG_VER_STRING, &ctx.err,
                                      png_record_error, png_warn);
    if (!ctx.png) throw RunError("png_create_write_struct failed");
    ctx.info = png_create_info_struct(ctx.png);
    if (!ctx.info) throw RunError("png_create_info_struct failed");
    if (!write_rows(ctx, fp.get(), w, h, color_type, pixels, row_bytes))
        throw RunError("PNG encode failed for " + path + ": " + ctx.err);
}

} // namespace

Tensor<float> load_png(const std::string& path) {
    FilePtr fp(std::fopen(path.c_str(), "rb"));
    if (!fp) throw ConfigError("cannot open image: " + path);

    ReadCtx ctx;
    ctx.png = png_create_read_struct(PNG_LIBPNG_VER_STRING, &ctx.err,
                                     png_record_error, png_warn);
    if (!ctx.png) throw RunError("png_create_read_struct failed");
    ctx.info = png_create_info_struct(ctx.png);
    if (!ctx.info) throw RunError("png_create_info_struct failed");

    std::vector<std::uint8_t> rgba;
    std::vector<png_bytep> rows;
    int w = 0, h = 0;
    if (!read_rgba(ctx, fp.get(), rgba, rows, w, h))
        throw ConfigError("PNG decode failed for " + path + ": " + ctx.err);

    Tensor<float> out(1, 3, h, w);
    float* r = out.plane(0, 0);
    float* g = out.plane(0, 1);
    float* b = out.plane(0, 2);
    for (std::size_t i = 0; i < static_cast<std::size_t>(w) * h; ++i) {
        const float a = rgba[i * 4 + 3] / 255.0f;
        // composite over white
        r[i] = a * (rgba[i * 4 + 0] / 255.0f) + (1.0f - a);
        g[i] = a * (rgba[i * 4 + 1] / 255.0f) + (1.0f - a);
        b[i] = a * (rgba[i * 4 + 2] / 255.0f) + (1.0f - a);
    }
    return out;
}

void save_frame(const Tensor<float>& t, const std::string& path, int b) {
    if (t.nc != 3 || b < 0 || b >= t.nb)
        throw ConfigError("save_frame: need a 3-channel tensor and a valid batch index");
    const int w = t.nu, h = t.nv;
    std::vector<std::uint8_t> rgb(static_cast<std::size_t>(w) * h * 3);
    for (int c = 0; c < 3; ++c) {
        const float* src = t.plane(b, c);
        for (std::size_t i = 0; i < static_cast<std::size_t>(w) * h; ++i) {
            const float v = std::clamp(src[i], 0.0f, 1.0f);
            rgb[i * 3 + c] = static_cast<std::uint8_t>(std::floor(v * 255.0f + 0.5f));
        }
    }
    write_png(path, w, h, PNG_COLOR_TYPE_RGB, rgb.data(),
              static_cast<std::size_t>(w) * 3);
}

void save_png_gray(const std::string& path, const std::vector<std::uint8_t>& pixels,
                   int width, int height) {
    if (pixels.size() != static_cast<std::size_t>(width) * height)
        throw ConfigError("save_png_gray: pixel count mismatch");
    write_png(path, width, height, PNG_COLOR_TYPE_GRAY, pixels.data(),
              static_cast<std::size_t>(width));
}

Cut load_cut(const std::string& dir) {
    if (!fs::is_directory(dir))
        throw ConfigError("not a directory: " + dir);
    Cut cut;
    cut.dir = dir;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (!entry.is_regular_file()) continue;
        std::string ext = entry.path().extension().string();
        std::transform(ext.begin(), ext.end(), ext.begin(),
                       [](unsigned char c) { return std::tolower(c); });
        if (ext == ".png") cut.files.push_back(entry.path().filename().string());
    }
    std::sort(cut.files.begin(), cut.files.end());
    if (cut.files.size() < 2)
        throw ConfigError("cut " + dir + " has " + std::to_string(cut.files.size()) +
                          " PNG frames; need at least 2");

    std::string offenders;
    for (const std::string& name : cut.files) {
        Tensor<float> frame = load_png((fs::path(dir) / name).string());
        if (cut.frames.empty()) {
            cut.height = frame.nv;
            cut.width = frame.nu;
        } else if (frame.nv != cut.height || frame.nu != cut.width) {
            offenders += "\n  " + name + " is " + std::to_string(frame.nu) + "x" +
                         std::to_string(frame.nv);
        }
        cut.frames.push_back(std::move(frame));
    }
    if (!offenders.empty())
        throw ConfigError("cut " + dir + " mixes frame dimensions (first frame is " +
                          std::to_string(cut.width) + "x" + std::to_string(cut.height) +
                          "):" + offenders);
    cut.nf = static_cast<int>(cut.frames.size());
    return cut;
}

} // namespace ibf
