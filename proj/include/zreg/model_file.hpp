#ifndef ZREG_MODEL_FILE_HPP
#define ZREG_MODEL_FILE_HPP

#include <zreg/engine.hpp>

#include <string>

namespace zreg
{

/// The model is well formed but violates the reducibility hypotheses.
class ValidationError : public Error
{
public:
    using Error::Error;
};

/// Parses a model definition. `fallback_name` names the model when the file
/// has no [model] section.
ModelSpec parse_model(const std::string &text, const std::string &fallback_name = "custom");
ModelSpec parse_model_file(const std::string &path);

/// Canonical text of a scalar model; parse_model(render_model(m)) == m.
std::string render_model(const ModelSpec &m);

} // namespace zreg

#endif
