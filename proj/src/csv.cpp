#include "lqgwalk/csv.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "lqgwalk/numfmt.hpp"

namespace lqgwalk {

std::size_t CsvTable::column(const std::string& name) const {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw std::out_of_range("csv: no column '" + name + "'");
    return static_cast<std::size_t>(it - header.begin());
}

void write_csv(std::ostream& out, const CsvTable& table) {
    for (std::size_t c = 0; c < table.header.size(); ++c) out << (c ? "," : "") << table.header[c];
    out << '\n';
    for (const auto& row : table.rows) {
        if (row.size() != table.header.size()) throw std::invalid_argument("csv: row width does not match header");
        for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << format_number(row[c]);
        out << '\n';
    }
}

namespace {

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    return cells;
}

} // namespace

CsvTable read_csv(std::istream& in) {
    CsvTable table;
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("csv: missing header");
    table.header = split(line);
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const auto cells = split(line);
        if (cells.size() != table.header.size())
            throw std::runtime_error("csv: line " + std::to_string(line_no) + " has " + std::to_string(cells.size()) +
                                     " cells, expected " + std::to_string(table.header.size()));
        std::vector<double> row;
        row.reserve(cells.size());
        for (const auto& cell : cells) {
            char* end = nullptr;
            const double v = std::strtod(cell.c_str(), &end);
            if (cell.empty() || end != cell.c_str() + cell.size())
                throw std::runtime_error("csv: line " + std::to_string(line_no) + ": bad number '" + cell + "'");
            row.push_back(v);
        }
        table.rows.push_back(std::move(row));
    }
    return table;
}

CsvTable reference_table(const ReferenceTrajectory& ref) {
    CsvTable t;
    t.header = {"t",        "zmp_x",   "zmp_y",   "com_x",   "com_y",   "comvel_x",   "comvel_y",
                "dcm_x",    "dcm_y",   "swing_x", "swing_y", "swing_z", "support_idx"};
    t.rows.reserve(ref.size());
    for (const auto& s : ref.samples) {
        t.rows.push_back({s.t, s.zmp.x(), s.zmp.y(), s.com.x(), s.com.y(), s.com_vel.x(), s.com_vel.y(), s.dcm.x(),
                          s.dcm.y(), s.swing.x(), s.swing.y(), s.swing.z(), static_cast<double>(s.support)});
    }
    return t;
}

CsvTable footstep_table(const FootstepPlan& plan) {
    CsvTable t;
    t.header = {"i", "x", "y", "side", "t_start"};
    for (int i = -1; i <= plan.size(); ++i) {
        const Footstep& f = plan.placement(i);
        t.rows.push_back({static_cast<double>(i), f.pos.x(), f.pos.y(), lateral_sign(f.side), f.t_start});
    }
    return t;
}

namespace {

const std::vector<std::string> kLogHeader = {
    "t",          "support",    "com_true_x", "com_true_y", "dcm_true_x", "dcm_true_y", "com_est_x",
    "com_est_y",  "dcm_est_x",  "dcm_est_y",  "com_ref_x",  "com_ref_y",  "dcm_ref_x",  "dcm_ref_y",
    "zmp_ref_x",  "zmp_ref_y",  "zmp_cmd_x",  "zmp_cmd_y",  "zmp_sat_x",  "zmp_sat_y",  "support_lo_x",
    "support_lo_y", "support_hi_x", "support_hi_y", "dcm_pred_x", "dcm_pred_y", "offset_x", "offset_y"};

} // namespace

CsvTable log_table(std::span<const LogRow> log) {
    CsvTable t;
    t.header = kLogHeader;
    t.rows.reserve(log.size());
    for (const auto& r : log) {
        std::vector<double> row{r.t, static_cast<double>(r.support)};
        for (const Eigen::Vector2d* v : {&r.com_true, &r.dcm_true, &r.com_est, &r.dcm_est, &r.com_ref, &r.dcm_ref,
                                         &r.zmp_ref, &r.zmp_cmd, &r.zmp_sat, &r.support_lo, &r.support_hi,
                                         &r.dcm_pred, &r.offset}) {
            row.push_back(v->x());
            row.push_back(v->y());
        }
        t.rows.push_back(std::move(row));
    }
    return t;
}

std::vector<LogRow> log_from_table(const CsvTable& table) {
    if (table.header != kLogHeader) throw std::runtime_error("csv: not a simulation log");
    std::vector<LogRow> log;
    log.reserve(table.rows.size());
    for (const auto& row : table.rows) {
        LogRow r;
        r.t = row[0];
        r.support = static_cast<int>(row[1]);
        std::size_t c = 2;
        for (Eigen::Vector2d* v : {&r.com_true, &r.dcm_true, &r.com_est, &r.dcm_est, &r.com_ref, &r.dcm_ref,
                                   &r.zmp_ref, &r.zmp_cmd, &r.zmp_sat, &r.support_lo, &r.support_hi, &r.dcm_pred,
                                   &r.offset}) {
            *v = Eigen::Vector2d(row[c], row[c + 1]);
            c += 2;
        }
        log.push_back(r);
    }
    return log;
}

std::vector<ReferenceSample> reference_from_table(const CsvTable& table) {
    const std::size_t c_t = table.column("t");
    const std::size_t c_zx = table.column("zmp_x"), c_zy = table.column("zmp_y");
    const std::size_t c_cx = table.column("com_x"), c_cy = table.column("com_y");
    const std::size_t c_vx = table.column("comvel_x"), c_vy = table.column("comvel_y");
    const std::size_t c_dx = table.column("dcm_x"), c_dy = table.column("dcm_y");
    const std::size_t c_sx = table.column("swing_x"), c_sy = table.column("swing_y"), c_sz = table.column("swing_z");
    const std::size_t c_i = table.column("support_idx");
    std::vector<ReferenceSample> out;
    out.reserve(table.rows.size());
    for (const auto& row : table.rows) {
        ReferenceSample s;
        s.t = row[c_t];
        s.zmp = {row[c_zx], row[c_zy]};
        s.com = {row[c_cx], row[c_cy]};
        s.com_vel = {row[c_vx], row[c_vy]};
        s.dcm = {row[c_dx], row[c_dy]};
        s.swing = {row[c_sx], row[c_sy], row[c_sz]};
        s.support = static_cast<int>(row[c_i]);
        out.push_back(s);
    }
    return out;
}

CsvTable survival_table(std::span<const SweepPoint> points, std::span<const SimulationResult> results) {
    if (points.size() != results.size()) throw std::invalid_argument("survival_table: size mismatch");
    CsvTable t;
    t.header = {"axis", "force", "t_start", "survived", "fall_time", "max_dcm_error", "steps_completed"};
    for (std::size_t i = 0; i < points.size(); ++i) {
        const auto& r = results[i];
        t.rows.push_back({points[i].axis == 'x' ? 0.0 : 1.0, points[i].force, points[i].t_start, r.fell ? 0.0 : 1.0,
                          r.fall_time, r.metrics.max_dcm_error,
                          static_cast<double>(r.metrics.steps_completed)});
    }
    return t;
}

} // namespace lqgwalk
