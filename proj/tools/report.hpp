#ifndef TRADESHOCK_TOOLS_REPORT_HPP
#define TRADESHOCK_TOOLS_REPORT_HPP

// Deterministic CSV and SVG emission for the CLI. All floating-point output
// goes through fixed-precision formatting so repeated runs produce
// byte-identical files regardless of thread count.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace report {

inline std::string fmt(double value, int decimals) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, value);
    return buf;
}

inline std::string csv_quote(const std::string& field) {
    if (field.find_first_of(",\"\n\r") == std::string::npos) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += "\"\"";
        else out.push_back(c);
    }
    out.push_back('"');
    return out;
}

class CsvWriter {
public:
    CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header)
        : out_(path, std::ios::binary) {
        if (!out_) throw std::runtime_error("cannot write " + path.string());
        for (std::size_t i = 0; i < header.size(); ++i) {
            if (i) out_ << ',';
            out_ << csv_quote(header[i]);
        }
        out_ << '\n';
    }

    void row(const std::vector<std::string>& fields) {
        for (std::size_t i = 0; i < fields.size(); ++i) {
            if (i) out_ << ',';
            out_ << csv_quote(fields[i]);
        }
        out_ << '\n';
    }

private:
    std::ofstream out_;
};

inline std::uint64_t fnv1a64_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot hash " + path.string());
    std::uint64_t h = 1469598103934665603ULL;
    char buf[8192];
    while (in.read(buf, sizeof buf) || in.gcount() > 0) {
        for (std::streamsize i = 0; i < in.gcount(); ++i) {
            h ^= static_cast<unsigned char>(buf[i]);
            h *= 1099511628211ULL;
        }
    }
    return h;
}

inline std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

// ---- minimal line charts ---------------------------------------------------

struct SvgSeries {
    std::string name;
    std::string color = "#1f5fa8";
    bool dashed = false;
    bool markers = false;
    std::vector<double> x;
    std::vector<double> y;
    std::vector<bool> filled; // marker fill per point; empty = all filled
};

struct SvgChart {
    std::string title;
    std::string y_label;
    std::vector<SvgSeries> series;
};

inline void write_svg(const std::filesystem::path& path, const std::vector<SvgChart>& charts) {
    const int width = 900, height = 420;
    const int left = 70, right = 30, top = 40, bottom = 45;

    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height * charts.size() << "\" font-family=\"sans-serif\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

    for (std::size_t ci = 0; ci < charts.size(); ++ci) {
        const SvgChart& chart = charts[ci];
        const double oy = static_cast<double>(ci * height);
        double x_min = NAN, x_max = NAN, y_min = NAN, y_max = NAN;
        for (const auto& s : chart.series)
            for (std::size_t i = 0; i < s.x.size(); ++i) {
                if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
                if (!std::isfinite(x_min) || s.x[i] < x_min) x_min = s.x[i];
                if (!std::isfinite(x_max) || s.x[i] > x_max) x_max = s.x[i];
                if (!std::isfinite(y_min) || s.y[i] < y_min) y_min = s.y[i];
                if (!std::isfinite(y_max) || s.y[i] > y_max) y_max = s.y[i];
            }
        if (!std::isfinite(x_min)) { x_min = 0; x_max = 1; y_min = 0; y_max = 1; }
        if (x_max == x_min) x_max = x_min + 1;
        if (y_max == y_min) y_max = y_min + 1;
        const double pad = 0.05 * (y_max - y_min);
        y_min -= pad;
        y_max += pad;

        const double plot_w = width - left - right;
        const double plot_h = height - top - bottom;
        auto px = [&](double x) { return left + (x - x_min) / (x_max - x_min) * plot_w; };
        auto py = [&](double y) { return oy + top + plot_h - (y - y_min) / (y_max - y_min) * plot_h; };

        out << "<text x=\"" << left << "\" y=\"" << fmt(oy + 20, 2)
            << "\" font-size=\"15\" fill=\"#222\">" << chart.title << "</text>\n";
        // axes
        out << "<line x1=\"" << left << "\" y1=\"" << fmt(oy + top, 2) << "\" x2=\"" << left
            << "\" y2=\"" << fmt(oy + top + plot_h, 2) << "\" stroke=\"#444\"/>\n";
        out << "<line x1=\"" << left << "\" y1=\"" << fmt(oy + top + plot_h, 2) << "\" x2=\""
            << left + plot_w << "\" y2=\"" << fmt(oy + top + plot_h, 2)
            << "\" stroke=\"#444\"/>\n";
        for (int t = 0; t <= 4; ++t) {
            const double yv = y_min + (y_max - y_min) * t / 4.0;
            const double xv = x_min + (x_max - x_min) * t / 4.0;
            out << "<text x=\"" << left - 6 << "\" y=\"" << fmt(py(yv) + 4, 2)
                << "\" font-size=\"11\" fill=\"#444\" text-anchor=\"end\">" << fmt(yv, 3)
                << "</text>\n";
            out << "<text x=\"" << fmt(px(xv), 2) << "\" y=\"" << fmt(oy + top + plot_h + 16, 2)
                << "\" font-size=\"11\" fill=\"#444\" text-anchor=\"middle\">" << fmt(xv, 0)
                << "</text>\n";
        }
        out << "<text x=\"16\" y=\"" << fmt(oy + top + plot_h / 2, 2)
            << "\" font-size=\"12\" fill=\"#222\" transform=\"rotate(-90 16 "
            << fmt(oy + top + plot_h / 2, 2) << ")\" text-anchor=\"middle\">" << chart.y_label
            << "</text>\n";

        double legend_y = oy + top + 6;
        for (const auto& s : chart.series) {
            std::string points;
            for (std::size_t i = 0; i < s.x.size(); ++i) {
                if (!std::isfinite(s.y[i])) continue;
                points += fmt(px(s.x[i]), 2) + "," + fmt(py(s.y[i]), 2) + " ";
            }
            out << "<polyline fill=\"none\" stroke=\"" << s.color << "\""
                << (s.dashed ? " stroke-dasharray=\"5,4\"" : "") << " stroke-width=\"1.5\" points=\""
                << points << "\"/>\n";
            if (s.markers)
                for (std::size_t i = 0; i < s.x.size(); ++i) {
                    if (!std::isfinite(s.y[i])) continue;
                    const bool fill = s.filled.empty() || s.filled[i];
                    out << "<circle cx=\"" << fmt(px(s.x[i]), 2) << "\" cy=\"" << fmt(py(s.y[i]), 2)
                        << "\" r=\"3\" stroke=\"" << s.color << "\" fill=\""
                        << (fill ? s.color : std::string("white")) << "\"/>\n";
                }
            out << "<text x=\"" << left + plot_w - 180 << "\" y=\"" << fmt(legend_y, 2)
                << "\" font-size=\"11\" fill=\"" << s.color << "\">"
                << (s.dashed ? "- - " : "&#8212; ") << s.name << "</text>\n";
            legend_y += 14;
        }
    }
    out << "</svg>\n";
}

} // namespace report

#endif
