#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "polarrep/sympair.hpp"

namespace polarrep {

using json = nlohmann::json;

enum class LoadStage { Parse = 2, Schema = 3, Validation = 4 };

/// Model loading failure; the stage value is the CLI exit code.
class LoadError : public std::runtime_error {
public:
  LoadError(LoadStage stage, const std::string& what) : std::runtime_error(what), stage_(stage) {}
  LoadStage stage() const { return stage_; }
  int exit_code() const { return static_cast<int>(stage_); }

private:
  LoadStage stage_;
};

struct LoadedModel {
  std::string source;
  RepresentationModel rep;
  TolerancePolicy pol;
  std::optional<std::uint64_t> seed;  ///< from the model file, if present
};

/// `name` or `name:k=v,...` from the builtin catalog.
LoadedModel load_builtin(const std::string& spec, std::uint64_t seed = 0);

/// Parses a model document. Parse errors report line and column.
LoadedModel load_model_text(const std::string& text, const std::string& source = "<text>");
LoadedModel load_model_file(const std::string& path);

/// Model document for a pair in its rebased coordinates; loads back to an
/// equivalent pair.
json export_model(const SymmetricPairModel& pair, std::optional<std::uint64_t> seed = std::nullopt);

/// Complex scalars as [re, im]; matrices as arrays of rows.
json complex_to_json(cd z);
json matrix_to_json(const Mat& m);
json vector_to_json(const Vec& v);
/// Accepts numbers or [re, im] pairs. Throws LoadError(Schema) on bad shape.
cd complex_from_json(const json& j, const std::string& where);
Mat matrix_from_json(const json& j, const std::string& where);

}  // namespace polarrep
