#include "plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

namespace lipsing::plot {

namespace {

constexpr int kWidth = 640, kHeight = 420;
constexpr int kLeft = 70, kRight = 20, kTop = 40, kBottom = 50;
const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"};

std::string escape(const std::string& s)
{
    std::string out;
    for (char c : s) {
        switch (c) {
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '&': out += "&amp;"; break;
        default: out += c;
        }
    }
    return out;
}

std::string num(double x)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", x);
    return buf;
}

std::string label(double x)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", x);
    return buf;
}

std::string header(int w, int h)
{
    return "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(w) +
           "\" height=\"" + std::to_string(h) + "\" font-family=\"sans-serif\" font-size=\"12\">\n" +
           "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
}

}   // namespace

std::string loglog(const std::string& title, const std::string& xlabel, const std::string& ylabel,
                   const std::vector<Series>& series)
{
    double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
    for (const Series& s : series)
        for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i)
            if (s.x[i] > 0 && s.y[i] > 0) {
                x0 = std::min(x0, std::log10(s.x[i]));
                x1 = std::max(x1, std::log10(s.x[i]));
                y0 = std::min(y0, std::log10(s.y[i]));
                y1 = std::max(y1, std::log10(s.y[i]));
            }
    if (!(x0 <= x1)) {
        x0 = y0 = 0.0;
        x1 = y1 = 1.0;
    }
    if (x1 - x0 < 1e-9) {
        x0 -= 0.5;
        x1 += 0.5;
    }
    const double pad = std::max(0.05, 0.1 * (y1 - y0));
    y0 -= pad;
    y1 += pad;
    const double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;
    auto px = [&](double lx) { return kLeft + (lx - x0) / (x1 - x0) * pw; };
    auto py = [&](double ly) { return kTop + (y1 - ly) / (y1 - y0) * ph; };

    std::string svg = header(kWidth, kHeight);
    svg += "<text x=\"" + std::to_string(kWidth / 2) + "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" +
           escape(title) + "</text>\n";
    svg += "<rect x=\"" + std::to_string(kLeft) + "\" y=\"" + std::to_string(kTop) + "\" width=\"" +
           num(pw) + "\" height=\"" + num(ph) + "\" fill=\"none\" stroke=\"black\"/>\n";
    for (int i = 0; i <= 4; ++i) {
        const double lx = x0 + (x1 - x0) * i / 4, ly = y0 + (y1 - y0) * i / 4;
        svg += "<text x=\"" + num(px(lx)) + "\" y=\"" + std::to_string(kHeight - kBottom + 16) +
               "\" text-anchor=\"middle\">" + label(std::pow(10.0, lx)) + "</text>\n";
        svg += "<text x=\"" + std::to_string(kLeft - 6) + "\" y=\"" + num(py(ly) + 4) +
               "\" text-anchor=\"end\">" + label(std::pow(10.0, ly)) + "</text>\n";
    }
    svg += "<text x=\"" + std::to_string(kWidth / 2) + "\" y=\"" + std::to_string(kHeight - 10) +
           "\" text-anchor=\"middle\">" + escape(xlabel) + "</text>\n";
    svg += "<text x=\"16\" y=\"" + std::to_string(kHeight / 2) + "\" text-anchor=\"middle\" transform=\"rotate(-90 16 " +
           std::to_string(kHeight / 2) + ")\">" + escape(ylabel) + "</text>\n";

    for (std::size_t k = 0; k < series.size(); ++k) {
        const Series& s = series[k];
        const char* color = kColors[k % 5];
        std::string path;
        for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
            if (!(s.x[i] > 0 && s.y[i] > 0))
                continue;
            const double cx = px(std::log10(s.x[i])), cy = py(std::log10(s.y[i]));
            path += (path.empty() ? "M" : " L") + num(cx) + " " + num(cy);
            svg += "<circle cx=\"" + num(cx) + "\" cy=\"" + num(cy) + "\" r=\"3\" fill=\"" + color + "\"/>\n";
        }
        if (!path.empty())
            svg += "<path d=\"" + path + "\" fill=\"none\" stroke=\"" + color + "\"/>\n";
        svg += "<text x=\"" + std::to_string(kLeft + 10) + "\" y=\"" + std::to_string(kTop + 16 + 16 * k) +
               "\" fill=\"" + color + "\">" + escape(s.label) + "</text>\n";
    }
    return svg + "</svg>\n";
}

std::string table(const std::string& title, const std::vector<std::string>& header_row,
                  const std::vector<std::vector<std::string>>& rows)
{
    const int cw = 110, rh = 22;
    const int cols = static_cast<int>(header_row.size());
    const int w = std::max(240, 20 + cw * cols), h = 60 + rh * static_cast<int>(rows.size() + 1);
    std::string svg = header(w, h);
    svg += "<text x=\"10\" y=\"22\" font-size=\"14\">" + escape(title) + "</text>\n";
    auto row = [&](const std::vector<std::string>& cells, int r, bool bold) {
        for (int c = 0; c < cols && c < static_cast<int>(cells.size()); ++c)
            svg += "<text x=\"" + std::to_string(10 + cw * c) + "\" y=\"" + std::to_string(50 + rh * r) + "\"" +
                   (bold ? " font-weight=\"bold\"" : "") + ">" + escape(cells[c]) + "</text>\n";
    };
    row(header_row, 0, true);
    svg += "<line x1=\"10\" x2=\"" + std::to_string(w - 10) + "\" y1=\"56\" y2=\"56\" stroke=\"black\"/>\n";
    for (std::size_t r = 0; r < rows.size(); ++r)
        row(rows[r], static_cast<int>(r) + 1, false);
    return svg + "</svg>\n";
}

}   // namespace lipsing::plot
