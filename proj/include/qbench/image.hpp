#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace qbench {

struct GrayImage {
    int width = 0, height = 0;
    std::vector<uint8_t> pixels;  // row-major, 255 = white

    uint8_t& at(int row, int col) { return pixels[size_t(row) * size_t(width) + size_t(col)]; }
};

// Probability grid to image: value 1 -> black; optional integer upscale.
GrayImage image_from_grid(const std::vector<double>& values, int resolution, int scale = 1);

std::vector<uint8_t> encode_pgm(const GrayImage& img);
std::vector<uint8_t> encode_png(const GrayImage& img);

void write_file(const std::string& path, const std::vector<uint8_t>& bytes);
void write_text_file(const std::string& path, const std::string& text);

// Simple SVG polyline plot helpers used for line drawings, L-systems and
// bar charts.
struct SvgBuilder {
    SvgBuilder(double width, double height);
    void polyline(const std::vector<std::pair<double, double>>& pts, const std::string& color,
                  double stroke_width, bool close = false);
    void line(double x1, double y1, double x2, double y2, const std::string& color,
              double stroke_width);
    void circle(double x, double y, double r, const std::string& color);
    void rect(double x, double y, double w, double h, const std::string& color);
    void text(double x, double y, const std::string& s, double size = 12.0);
    std::string finish() const;

private:
    double width_, height_;
    std::string body_;
};

}  // namespace qbench
