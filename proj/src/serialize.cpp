#include "cvk/serialize.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace cvk {

namespace {

using nlohmann::json;

void require_object(const json& j, const char* what) {
  if (!j.is_object()) {
    throw std::invalid_argument(std::string(what) + " must be a JSON object");
  }
}

void reject_unknown_keys(const json& j, std::initializer_list<const char*> allowed,
                         const char* what) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (const char* k : allowed) {
      if (it.key() == k) { ok = true; break; }
    }
    if (!ok) {
      throw std::invalid_argument(std::string("unknown key in ") + what + ": " + it.key());
    }
  }
}

// Re-raise nlohmann type/access errors as config errors.
template <typename F>
auto as_config_error(const char* what, F&& f) {
  try {
    return f();
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string(what) + ": " + e.what());
  }
}

}  // namespace

void save_text_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write file: " + tmp);
    out << content;
    out.flush();
    if (!out) {
      std::remove(tmp.c_str());
      throw std::runtime_error("write failed: " + tmp);
    }
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) {
    std::remove(tmp.c_str());
    throw std::runtime_error("cannot move temporary file onto: " + path);
  }
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

nlohmann::json kernel_spec_to_json(const KernelSpec& spec) {
  json j;
  j["family"] = to_string(spec.family);
  j["c"] = spec.c;
  j["l"] = spec.l;
  j["p"] = spec.p;
  j["rescale"] = spec.rescale;
  return j;
}

KernelSpec kernel_spec_from_json(const nlohmann::json& j) {
  require_object(j, "kernel spec");
  reject_unknown_keys(j, {"family", "c", "l", "p", "rescale"}, "kernel spec");
  if (!j.contains("family")) {
    throw std::invalid_argument("kernel spec needs a \"family\" key");
  }
  return as_config_error("kernel spec", [&j] {
    KernelSpec spec;
    spec.family = kernel_family_from_string(j.at("family").get<std::string>());
    if (j.contains("c")) spec.c = j.at("c").get<double>();
    if (j.contains("l")) spec.l = j.at("l").get<double>();
    if (j.contains("p")) spec.p = j.at("p").get<double>();
    if (j.contains("rescale")) spec.rescale = j.at("rescale").get<double>();
    spec.validate();
    return spec;
  });
}

nlohmann::json model_to_json(const SVMModel& model) {
  json j;
  j["version"] = 1;
  j["alpha"] = model.alpha;
  j["bias"] = model.bias;
  j["support_indices"] = model.support_indices;
  j["train_points"] = model.train_points;
  j["train_labels"] = model.train_labels;
  j["kernel"] = kernel_spec_to_json(model.spec);
  j["C"] = model.C;
  j["tol"] = model.tol;
  j["support_threshold"] = model.support_threshold;
  j["ridge"] = model.ridge;
  j["converged"] = model.converged;
  j["iterations"] = model.iterations;
  return j;
}

SVMModel model_from_json(const nlohmann::json& j) {
  require_object(j, "model");
  reject_unknown_keys(j,
                      {"version", "alpha", "bias", "support_indices", "train_points",
                       "train_labels", "kernel", "C", "tol", "support_threshold",
                       "ridge", "converged", "iterations"},
                      "model");
  return as_config_error("model", [&j] {
    if (!j.contains("version") || j.at("version").get<int>() != 1) {
      throw std::invalid_argument("model version must be 1");
    }
    SVMModel m;
    m.alpha = j.at("alpha").get<std::vector<double>>();
    m.bias = j.at("bias").get<double>();
    m.support_indices = j.at("support_indices").get<std::vector<int>>();
    m.train_points = j.at("train_points").get<std::vector<std::vector<double>>>();
    m.train_labels = j.at("train_labels").get<std::vector<int>>();
    m.spec = kernel_spec_from_json(j.at("kernel"));
    m.C = j.at("C").get<double>();
    m.tol = j.at("tol").get<double>();
    m.support_threshold = j.at("support_threshold").get<double>();
    m.ridge = j.at("ridge").get<double>();
    m.converged = j.at("converged").get<bool>();
    m.iterations = j.at("iterations").get<std::int64_t>();
    const size_t n = m.alpha.size();
    if (m.train_labels.size() != n ||
        (!m.train_points.empty() && m.train_points.size() != n)) {
      throw std::invalid_argument("model arrays disagree in length");
    }
    for (int y : m.train_labels) {
      if (y != 1 && y != -1) throw std::invalid_argument("model labels must be -1/+1");
    }
    for (int s : m.support_indices) {
      if (s < 0 || static_cast<size_t>(s) >= n) {
        throw std::invalid_argument("support index out of range");
      }
    }
    return m;
  });
}

void save_model(const std::string& path, const SVMModel& model) {
  save_text_atomic(path, model_to_json(model).dump(2) + "\n");
}

SVMModel load_model(const std::string& path) {
  json j;
  try {
    j = json::parse(read_text(path));
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("model file is not valid JSON: ") + e.what());
  }
  return model_from_json(j);
}

}  // namespace cvk
