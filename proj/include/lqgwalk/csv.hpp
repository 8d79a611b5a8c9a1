#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "lqgwalk/planner.hpp"
#include "lqgwalk/sim.hpp"

namespace lqgwalk {

/// Header plus numeric rows, every value rendered with format_number.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;

    [[nodiscard]] std::size_t column(const std::string& name) const; // throws std::out_of_range
};

void write_csv(std::ostream& out, const CsvTable& table);
CsvTable read_csv(std::istream& in); // throws std::runtime_error on malformed input

CsvTable reference_table(const ReferenceTrajectory& ref);
CsvTable footstep_table(const FootstepPlan& plan); // side: +1 left, -1 right
CsvTable log_table(std::span<const LogRow> log);
CsvTable survival_table(std::span<const SweepPoint> points, std::span<const SimulationResult> results);

std::vector<ReferenceSample> reference_from_table(const CsvTable& table);
std::vector<LogRow> log_from_table(const CsvTable& table);

} // namespace lqgwalk
