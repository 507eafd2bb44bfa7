#pragma once
#include <nlohmann/json.hpp>
#include <string>

#include "cvk/svm.hpp"

namespace cvk {

// Writes content to a sibling temporary file and renames it over the target,
// so readers never observe a partial file. Throws std::runtime_error when the
// path is unwritable.
void save_text_atomic(const std::string& path, const std::string& content);

std::string read_text(const std::string& path);

// KernelSpec <-> JSON. All five hyperparameter fields are always written so
// the round-trip is field-exact; parsing rejects unknown keys and requires
// "family".
nlohmann::json kernel_spec_to_json(const KernelSpec& spec);
KernelSpec kernel_spec_from_json(const nlohmann::json& j);

// SVMModel <-> JSON, versioned ("version": 1). Doubles are emitted in
// shortest-round-trip form, so save -> load -> save is byte-identical and the
// loaded model is bit-exact. The objective trace is transient and excluded.
nlohmann::json model_to_json(const SVMModel& model);
SVMModel model_from_json(const nlohmann::json& j);

void save_model(const std::string& path, const SVMModel& model);
SVMModel load_model(const std::string& path);

}  // namespace cvk
