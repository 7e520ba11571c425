#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace fpsa::cli {

/// Output checks run on the serialized bytes before anything is written.
/// Each throws ContractError naming the first violation.

/// Header must equal `header`; every row has the same number of fields and
/// every field outside `text_columns` parses as a finite number (empty allowed
/// only in `optional_columns`).
void check_csv(std::string_view text, const std::vector<std::string>& header,
               const std::vector<std::string>& text_columns = {}, const std::vector<std::string>& optional_columns = {});

void check_weights_json(const nlohmann::json& j);
void check_evaluation_json(const nlohmann::json& j);
void check_repro_json(const nlohmann::json& j);
void check_demo_json(const nlohmann::json& j);
void check_calibration_json(const nlohmann::json& j);
void check_training_log(std::string_view jsonl);

}  // namespace fpsa::cli
