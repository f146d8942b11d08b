#pragma once

// Minimal SVG writer for scene frames and line charts.

#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

namespace dhm::svg {

class Document {
public:
    Document(double width, double height);

    void rect(double x, double y, double w, double h, const std::string& fill, const std::string& stroke = "none");
    void circle(double cx, double cy, double r, const std::string& fill, double opacity = 1.0);
    void line(double x1, double y1, double x2, double y2, const std::string& stroke, double width = 1.0,
              double opacity = 1.0);
    void polyline(const std::vector<double>& xs, const std::vector<double>& ys, const std::string& stroke,
                  double width = 1.5);
    void text(double x, double y, const std::string& s, double size = 12.0, const std::string& anchor = "start");

    std::string str() const;
    void save(const std::filesystem::path& path) const;

private:
    double width_;
    double height_;
    std::ostringstream body_;
};

struct Series {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
    std::string color;
};

/// Line chart with axes, tick labels and a legend. Non-finite points are skipped.
Document line_chart(const std::string& title, const std::string& x_label, const std::string& y_label,
                    const std::vector<Series>& series);

} // namespace dhm::svg
