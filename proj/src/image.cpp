#include "qbench/image.hpp"

#include <zlib.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

#include "qbench/errors.hpp"

namespace qbench {

GrayImage image_from_grid(const std::vector<double>& values, int resolution, int scale) {
    GrayImage img;
    img.width = resolution * scale;
    img.height = resolution * scale;
    img.pixels.assign(size_t(img.width) * size_t(img.height), 255);
    for (int r = 0; r < resolution; ++r)
        for (int c = 0; c < resolution; ++c) {
            const double v = std::clamp(values[size_t(r * resolution + c)], 0.0, 1.0);
            const uint8_t px = uint8_t(std::lround(255.0 * (1.0 - v)));
            for (int dr = 0; dr < scale; ++dr)
                for (int dc = 0; dc < scale; ++dc)
                    img.at(r * scale + dr, c * scale + dc) = px;
        }
    return img;
}

std::vector<uint8_t> encode_pgm(const GrayImage& img) {
    std::ostringstream head;
    head << "P5\n" << img.width << " " << img.height << "\n255\n";
    const std::string h = head.str();
    std::vector<uint8_t> out(h.begin(), h.end());
    out.insert(out.end(), img.pixels.begin(), img.pixels.end());
    return out;
}

namespace {

void put_u32(std::vector<uint8_t>& v, uint32_t x) {
    v.push_back(uint8_t(x >> 24));
    v.push_back(uint8_t(x >> 16));
    v.push_back(uint8_t(x >> 8));
    v.push_back(uint8_t(x));
}

void put_chunk(std::vector<uint8_t>& out, const char type[4], const std::vector<uint8_t>& data) {
    put_u32(out, uint32_t(data.size()));
    const size_t start = out.size();
    out.insert(out.end(), type, type + 4);
    out.insert(out.end(), data.begin(), data.end());
    const uint32_t crc =
        uint32_t(crc32(0L, out.data() + start, uInt(out.size() - start)));
    put_u32(out, crc);
}

}  // namespace

std::vector<uint8_t> encode_png(const GrayImage& img) {
    std::vector<uint8_t> out = {0x89, 'P', 'N', 'G', 0x0d, 0x0a, 0x1a, 0x0a};

    std::vector<uint8_t> ihdr;
    put_u32(ihdr, uint32_t(img.width));
    put_u32(ihdr, uint32_t(img.height));
    ihdr.push_back(8);  // bit depth
    ihdr.push_back(0);  // grayscale
    ihdr.push_back(0);
    ihdr.push_back(0);
    ihdr.push_back(0);
    put_chunk(out, "IHDR", ihdr);

    // Raw scanlines with filter byte 0.
    std::vector<uint8_t> raw;
    raw.reserve(size_t(img.height) * (size_t(img.width) + 1));
    for (int r = 0; r < img.height; ++r) {
        raw.push_back(0);
        const uint8_t* row = img.pixels.data() + size_t(r) * size_t(img.width);
        raw.insert(raw.end(), row, row + img.width);
    }
    uLongf bound = compressBound(uLong(raw.size()));
    std::vector<uint8_t> compressed(bound);
    if (compress2(compressed.data(), &bound, raw.data(), uLong(raw.size()), 9) != Z_OK)
        throw Error("png compression failed");
    compressed.resize(bound);
    put_chunk(out, "IDAT", compressed);
    put_chunk(out, "IEND", {});
    return out;
}

void write_file(const std::string& path, const std::vector<uint8_t>& bytes) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error("cannot open for writing: " + path);
    f.write(reinterpret_cast<const char*>(bytes.data()), long(bytes.size()));
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error("cannot open for writing: " + path);
    f << text;
}

SvgBuilder::SvgBuilder(double width, double height) : width_(width), height_(height) {}

void SvgBuilder::polyline(const std::vector<std::pair<double, double>>& pts,
                          const std::string& color, double stroke_width, bool close) {
    std::ostringstream s;
    s << (close ? "<polygon" : "<polyline") << " fill=\"none\" stroke=\"" << color
      << "\" stroke-width=\"" << stroke_width << "\" points=\"";
    for (const auto& [x, y] : pts) s << x << "," << y << " ";
    s << "\"/>\n";
    body_ += s.str();
}

void SvgBuilder::line(double x1, double y1, double x2, double y2, const std::string& color,
                      double stroke_width) {
    std::ostringstream s;
    s << "<line x1=\"" << x1 << "\" y1=\"" << y1 << "\" x2=\"" << x2 << "\" y2=\"" << y2
      << "\" stroke=\"" << color << "\" stroke-width=\"" << stroke_width << "\"/>\n";
    body_ += s.str();
}

void SvgBuilder::circle(double x, double y, double r, const std::string& color) {
    std::ostringstream s;
    s << "<circle cx=\"" << x << "\" cy=\"" << y << "\" r=\"" << r << "\" fill=\"" << color
      << "\"/>\n";
    body_ += s.str();
}

void SvgBuilder::rect(double x, double y, double w, double h, const std::string& color) {
    std::ostringstream s;
    s << "<rect x=\"" << x << "\" y=\"" << y << "\" width=\"" << w << "\" height=\"" << h
      << "\" fill=\"" << color << "\"/>\n";
    body_ += s.str();
}

void SvgBuilder::text(double x, double y, const std::string& t, double size) {
    std::ostringstream s;
    s << "<text x=\"" << x << "\" y=\"" << y << "\" font-size=\"" << size
      << "\" font-family=\"sans-serif\">" << t << "</text>\n";
    body_ += s.str();
}

std::string SvgBuilder::finish() const {
    std::ostringstream s;
    s << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width_ << "\" height=\""
      << height_ << "\" viewBox=\"0 0 " << width_ << " " << height_ << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << body_ << "</svg>\n";
    return s.str();
}

}  // namespace qbench
