#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "qaf/dynamics.hpp"
#include "qaf/encoder.hpp"
#include "qaf/hardness.hpp"
#include "qaf/schedule.hpp"

namespace qaf {

/// Instance export: {J, N, W, h, n, normConstant, offset, split,
/// variables} with exact integers and alphabetically ordered fields
/// (nlohmann's canonical object order).
nlohmann::json instance_to_json(const Instance& inst, double norm_constant);
Instance instance_from_json(const nlohmann::json& j);

/// Flat coupler list, one entry per line: `i j value`, fields as `i i value`.
std::string instance_to_coupler_text(const Instance& inst);

nlohmann::json size_class_to_json(const SizeClass& cls);
SizeClass size_class_from_json(const nlohmann::json& j);

nlohmann::json schedule_to_json(const Schedule& sched);
Schedule schedule_from_json(const nlohmann::json& j);

nlohmann::json split_report_to_json(const SplitReport& report);
SplitReport split_report_from_json(const nlohmann::json& j);

nlohmann::json calibration_to_json(int qubits, const CalibrationResult& result,
                                   const std::vector<long long>& members);

nlohmann::json hardness_summary_to_json(const std::vector<HardnessReport>& reports,
                                        const std::vector<long long>& ranking);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);
void write_json_file(const std::string& path, const nlohmann::json& j);
nlohmann::json read_json_file(const std::string& path);

/// Minimal CSV writer: quotes nothing, joins fields with commas. Rows
/// must already be text.
class CsvWriter {
  public:
    explicit CsvWriter(std::vector<std::string> header);
    void add_row(std::vector<std::string> row);
    std::string str() const;
    void save(const std::string& path) const;

  private:
    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
};

std::string format_double(double v);

}  // namespace qaf
