#pragma once

#include <ostream>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

namespace hoeffding::io {

inline constexpr const char* kSchema = "hoeffding-lab/1";

/// 17 significant digits with '.' as decimal separator, whatever the global locale.
std::string format_double(double x);

void write_csv_row(std::ostream& out, std::span<const double> values);
void write_csv_header(std::ostream& out, std::span<const std::string> names);
void write_csv_matrix(std::ostream& out, const Eigen::MatrixXd& m);

/// JSON object carrying the schema tag and the command name.
nlohmann::ordered_json report(const std::string& command);

nlohmann::ordered_json to_json(const Eigen::VectorXd& v);
nlohmann::ordered_json to_json(const Eigen::MatrixXd& m);

}  // namespace hoeffding::io
