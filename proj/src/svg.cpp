#include "lqgwalk/svg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "lqgwalk/numfmt.hpp"

namespace lqgwalk {

namespace {

constexpr double kWidth = 800.0;
constexpr double kHeight = 400.0;
constexpr double kMargin = 50.0;
constexpr double kLegend = 110.0; // right-hand gutter of line charts

struct Range {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();

    void add(double v) {
        if (!std::isfinite(v)) return;
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    void pad() {
        if (!std::isfinite(lo)) lo = 0.0, hi = 1.0;
        const double span = hi - lo;
        const double p = span > 0.0 ? 0.05 * span : 0.5 * std::max(1e-3, std::abs(lo));
        lo -= p;
        hi += p;
    }
};

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

std::string header(double w, double h) {
    return "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt(w) + "\" height=\"" + fmt(h) +
           "\" viewBox=\"0 0 " + fmt(w) + " " + fmt(h) + "\" font-family=\"sans-serif\" font-size=\"12\">\n" +
           "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
}

} // namespace

std::string line_chart_svg(const std::string& title, const std::string& x_label, const std::string& y_label,
                           const std::vector<Series>& series) {
    Range rx, ry;
    for (const auto& s : series) {
        for (double v : s.x) rx.add(v);
        for (double v : s.y) ry.add(v);
    }
    rx.pad();
    ry.pad();
    const double pw = kWidth - 2 * kMargin - kLegend, ph = kHeight - 2 * kMargin;
    auto px = [&](double v) { return kMargin + (v - rx.lo) / (rx.hi - rx.lo) * pw; };
    auto py = [&](double v) { return kHeight - kMargin - (v - ry.lo) / (ry.hi - ry.lo) * ph; };

    std::ostringstream o;
    o << header(kWidth, kHeight);
    o << "<text x=\"" << fmt(kWidth / 2) << "\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">" << title
      << "</text>\n";
    o << "<rect x=\"" << fmt(kMargin) << "\" y=\"" << fmt(kMargin) << "\" width=\"" << fmt(pw) << "\" height=\""
      << fmt(ph) << "\" fill=\"none\" stroke=\"#444\"/>\n";
    for (int k = 0; k <= 4; ++k) {
        const double vx = rx.lo + (rx.hi - rx.lo) * k / 4.0;
        const double vy = ry.lo + (ry.hi - ry.lo) * k / 4.0;
        o << "<text x=\"" << fmt(px(vx)) << "\" y=\"" << fmt(kHeight - kMargin + 15)
          << "\" text-anchor=\"middle\">" << format_number(std::round(vx * 1e3) / 1e3) << "</text>\n";
        o << "<text x=\"" << fmt(kMargin - 5) << "\" y=\"" << fmt(py(vy) + 4) << "\" text-anchor=\"end\">"
          << format_number(std::round(vy * 1e3) / 1e3) << "</text>\n";
    }
    o << "<text x=\"" << fmt(kWidth / 2) << "\" y=\"" << fmt(kHeight - 10) << "\" text-anchor=\"middle\">" << x_label
      << "</text>\n";
    o << "<text x=\"15\" y=\"" << fmt(kHeight / 2) << "\" text-anchor=\"middle\" transform=\"rotate(-90 15 "
      << fmt(kHeight / 2) << ")\">" << y_label << "</text>\n";

    double legend_y = kMargin + 15;
    for (const auto& s : series) {
        o << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.5\""
          << (s.dashed ? " stroke-dasharray=\"6 3\"" : "") << " points=\"";
        const std::size_t n = std::min(s.x.size(), s.y.size());
        for (std::size_t i = 0; i < n; ++i) {
            if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
            o << fmt(px(s.x[i])) << ',' << fmt(py(s.y[i])) << ' ';
        }
        o << "\"/>\n";
        const double lx = kWidth - kLegend - kMargin + 10;
        o << "<line x1=\"" << fmt(lx) << "\" y1=\"" << fmt(legend_y - 4) << "\" x2=\"" << fmt(lx + 20) << "\" y2=\""
          << fmt(legend_y - 4) << "\" stroke=\"" << s.color << "\" stroke-width=\"2\""
          << (s.dashed ? " stroke-dasharray=\"6 3\"" : "") << "/>\n";
        o << "<text x=\"" << fmt(lx + 25) << "\" y=\"" << fmt(legend_y) << "\">" << s.label
          << "</text>\n";
        legend_y += 15;
    }
    o << "</svg>\n";
    return o.str();
}

std::string reference_svg(const ReferenceTrajectory& ref, int axis) {
    Series zmp{"ZMP", "#d62728", {}, {}}, com{"COM", "#1f77b4", {}, {}}, dcm{"DCM", "#2ca02c", {}, {}, true};
    for (const auto& s : ref.samples) {
        for (Series* se : {&zmp, &com, &dcm}) se->x.push_back(s.t);
        zmp.y.push_back(s.zmp[axis]);
        com.y.push_back(s.com[axis]);
        dcm.y.push_back(s.dcm[axis]);
    }
    const std::string name = axis == 0 ? "sagittal (x)" : "frontal (y)";
    return line_chart_svg("Reference, " + name, "t [s]", "position [m]", {zmp, com, dcm});
}

std::string tracking_svg(const SimulationResult& result, int axis) {
    Series zmp_ref{"ZMP ref", "#ff9896", {}, {}, true}, zmp{"ZMP applied", "#d62728", {}, {}};
    Series com_ref{"COM ref", "#aec7e8", {}, {}, true}, com{"COM true", "#1f77b4", {}, {}};
    Series dcm_ref{"DCM ref", "#98df8a", {}, {}, true}, dcm{"DCM true", "#2ca02c", {}, {}};
    Series dcm_est{"DCM est", "#9467bd", {}, {}};
    for (const auto& r : result.log) {
        for (Series* s : {&zmp_ref, &zmp, &com_ref, &com, &dcm_ref, &dcm, &dcm_est}) s->x.push_back(r.t);
        zmp_ref.y.push_back(r.zmp_ref[axis]);
        zmp.y.push_back(r.zmp_sat[axis]);
        com_ref.y.push_back(r.com_ref[axis]);
        com.y.push_back(r.com_true[axis]);
        dcm_ref.y.push_back(r.dcm_ref[axis]);
        dcm.y.push_back(r.dcm_true[axis]);
        dcm_est.y.push_back(r.dcm_est[axis]);
    }
    const std::string name = axis == 0 ? "sagittal (x)" : "frontal (y)";
    return line_chart_svg(result.id + ": " + name, "t [s]", "position [m]",
                          {zmp_ref, zmp, com_ref, com, dcm_ref, dcm, dcm_est});
}

std::string footsteps_svg(const SimulationResult& result, const RobotParams& robot) {
    Range rx, ry;
    auto add_plan = [&](const FootstepPlan& plan) {
        if (plan.steps.empty()) return;
        for (int i = -1; i <= plan.size(); ++i) {
            const auto& p = plan.placement(i).pos;
            rx.add(p.x() - robot.foot_length / 2);
            rx.add(p.x() + robot.foot_length / 2);
            ry.add(p.y() - robot.foot_width / 2);
            ry.add(p.y() + robot.foot_width / 2);
        }
    };
    add_plan(result.planned);
    add_plan(result.executed);
    for (const auto& r : result.log) {
        rx.add(r.com_true.x());
        ry.add(r.com_true.y());
    }
    rx.pad();
    ry.pad();
    const double pw = kWidth - 2 * kMargin, ph = kHeight - 2 * kMargin;
    const double scale = std::min(pw / (rx.hi - rx.lo), ph / (ry.hi - ry.lo));
    const double ox = 0.5 * (pw - (rx.hi - rx.lo) * scale);
    const double oy = 0.5 * (ph - (ry.hi - ry.lo) * scale);
    auto px = [&](double v) { return kMargin + ox + (v - rx.lo) * scale; };
    auto py = [&](double v) { return kHeight - kMargin - oy - (v - ry.lo) * scale; };

    std::ostringstream o;
    o << header(kWidth, kHeight);
    o << "<text x=\"" << fmt(kWidth / 2) << "\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">" << result.id
      << ": top view</text>\n";
    auto foot = [&](const Eigen::Vector2d& p, const std::string& stroke, double opacity, bool dashed) {
        o << "<rect x=\"" << fmt(px(p.x() - robot.foot_length / 2)) << "\" y=\""
          << fmt(py(p.y() + robot.foot_width / 2)) << "\" width=\"" << fmt(robot.foot_length * scale)
          << "\" height=\"" << fmt(robot.foot_width * scale) << "\" fill=\"" << stroke << "\" fill-opacity=\"" << fmt(opacity) << "\" stroke=\"" << stroke
          << "\"" << (dashed ? " stroke-dasharray=\"4 2\"" : "") << "/>\n";
    };
    const bool has_exec = !result.executed.steps.empty();
    for (int i = -1; !result.planned.steps.empty() && i <= result.planned.size(); ++i) {
        foot(result.planned.placement(i).pos, "#888888", 0.0, true);
    }
    for (int i = -1; has_exec && i <= result.executed.size(); ++i) {
        const auto& p = result.executed.placement(i).pos;
        const bool moved = (p - result.planned.placement(i).pos).norm() > 1e-12;
        foot(p, moved ? "#d62728" : "#1f77b4", moved ? 0.3 : 0.08, false);
    }
    o << "<polyline fill=\"none\" stroke=\"#2ca02c\" stroke-width=\"1.5\" points=\"";
    for (const auto& r : result.log) o << fmt(px(r.com_true.x())) << ',' << fmt(py(r.com_true.y())) << ' ';
    o << "\"/>\n";
    o << "<text x=\"" << fmt(kMargin) << "\" y=\"" << fmt(kHeight - 15)
      << "\">dashed: planned, blue: executed, red: adjusted, green: COM</text>\n";
    o << "</svg>\n";
    return o.str();
}

} // namespace lqgwalk
