#include "dhm/svg.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>

namespace dhm::svg {

namespace {

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '&': out += "&amp;"; break;
        case '"': out += "&quot;"; break;
        default: out += c;
        }
    }
    return out;
}

std::string fmt(double v) {
    std::ostringstream os;
    os.imbue(std::locale::classic());
    os.precision(6);
    os << v;
    return os.str();
}

} // namespace

Document::Document(double width, double height) : width_(width), height_(height) {
    body_.imbue(std::locale::classic());
    body_.precision(6);
}

void Document::rect(double x, double y, double w, double h, const std::string& fill, const std::string& stroke) {
    body_ << "<rect x=\"" << x << "\" y=\"" << y << "\" width=\"" << w << "\" height=\"" << h << "\" fill=\"" << fill
          << "\" stroke=\"" << stroke << "\"/>\n";
}

void Document::circle(double cx, double cy, double r, const std::string& fill, double opacity) {
    body_ << "<circle cx=\"" << cx << "\" cy=\"" << cy << "\" r=\"" << r << "\" fill=\"" << fill
          << "\" fill-opacity=\"" << opacity << "\"/>\n";
}

void Document::line(double x1, double y1, double x2, double y2, const std::string& stroke, double width,
                    double opacity) {
    body_ << "<line x1=\"" << x1 << "\" y1=\"" << y1 << "\" x2=\"" << x2 << "\" y2=\"" << y2 << "\" stroke=\""
          << stroke << "\" stroke-width=\"" << width << "\" stroke-opacity=\"" << opacity
          << "\" stroke-linecap=\"round\"/>\n";
}

void Document::polyline(const std::vector<double>& xs, const std::vector<double>& ys, const std::string& stroke,
                        double width) {
    body_ << "<polyline fill=\"none\" stroke=\"" << stroke << "\" stroke-width=\"" << width << "\" points=\"";
    for (std::size_t i = 0; i < xs.size() && i < ys.size(); ++i) body_ << xs[i] << ',' << ys[i] << ' ';
    body_ << "\"/>\n";
}

void Document::text(double x, double y, const std::string& s, double size, const std::string& anchor) {
    body_ << "<text x=\"" << x << "\" y=\"" << y << "\" font-family=\"sans-serif\" font-size=\"" << size
          << "\" text-anchor=\"" << anchor << "\">" << escape(s) << "</text>\n";
}

std::string Document::str() const {
    return "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt(width_) + "\" height=\"" + fmt(height_) +
           "\" viewBox=\"0 0 " + fmt(width_) + " " + fmt(height_) + "\">\n" + body_.str() + "</svg>\n";
}

void Document::save(const std::filesystem::path& path) const {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot write " + path.string());
    f << str();
}

Document line_chart(const std::string& title, const std::string& x_label, const std::string& y_label,
                    const std::vector<Series>& series) {
    constexpr double W = 640, H = 420, L = 70, R = 150, T = 40, B = 60;
    double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
    for (const auto& s : series)
        for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
            if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
            x0 = std::min(x0, s.x[i]);
            x1 = std::max(x1, s.x[i]);
            y0 = std::min(y0, s.y[i]);
            y1 = std::max(y1, s.y[i]);
        }
    if (!std::isfinite(x0)) x0 = 0, x1 = 1, y0 = 0, y1 = 1;
    y0 = std::min(y0, 0.0);
    if (x1 <= x0) x1 = x0 + 1;
    if (y1 <= y0) y1 = y0 + 1;

    const double pw = W - L - R, ph = H - T - B;
    auto px = [&](double x) { return L + (x - x0) / (x1 - x0) * pw; };
    auto py = [&](double y) { return T + ph - (y - y0) / (y1 - y0) * ph; };

    Document d(W, H);
    d.rect(0, 0, W, H, "white");
    d.text(W / 2 - R / 2, 24, title, 15, "middle");
    d.line(L, T + ph, L + pw, T + ph, "black");
    d.line(L, T, L, T + ph, "black");
    for (int k = 0; k <= 4; ++k) {
        const double xv = x0 + (x1 - x0) * k / 4.0, yv = y0 + (y1 - y0) * k / 4.0;
        d.line(px(xv), T + ph, px(xv), T + ph + 5, "black");
        d.text(px(xv), T + ph + 18, fmt(xv), 11, "middle");
        d.line(L - 5, py(yv), L, py(yv), "black");
        d.line(L, py(yv), L + pw, py(yv), "#dddddd");
        d.text(L - 8, py(yv) + 4, fmt(yv), 11, "end");
    }
    d.text(L + pw / 2, H - 15, x_label, 12, "middle");
    d.text(16, T + ph / 2, y_label, 12, "start");

    for (std::size_t k = 0; k < series.size(); ++k) {
        const auto& s = series[k];
        std::vector<double> xs, ys;
        for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
            if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
            xs.push_back(px(s.x[i]));
            ys.push_back(py(s.y[i]));
        }
        d.polyline(xs, ys, s.color);
        const double ly = T + 10 + 18.0 * static_cast<double>(k);
        d.line(L + pw + 12, ly, L + pw + 32, ly, s.color, 2);
        d.text(L + pw + 38, ly + 4, s.label, 11);
    }
    return d;
}

} // namespace dhm::svg
