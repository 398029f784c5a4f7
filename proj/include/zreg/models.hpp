#ifndef ZREG_MODELS_HPP
#define ZREG_MODELS_HPP

#include <zreg/engine.hpp>

#include <optional>
#include <string>
#include <vector>

namespace zreg
{

class UnknownModel : public Error
{
public:
    using Error::Error;
};

ModelSpec harmonic_oscillator_1d();
/// N independent oscillators; `grouped` gauges all momenta with z1 and all
/// positions with z2, otherwise every axis has its own regulator.
ModelSpec harmonic_oscillator_nd(int N, bool grouped = true);
ModelSpec topological_oscillator();
ModelSpec schwinger_free();
/// Free fermion in N spatial dimensions (N = 1, 2, 3).
ModelSpec dirac_fermion(int N);
ModelSpec schwinger_boson_mass();
ModelSpec phi4();

struct RunOptions {
    BranchPolicy policy = BranchPolicy::paper;
    int series_order = default_series_order;
    /// Parameter values for numeric evaluation.
    Bindings bindings;
    /// Also solve the effective potential numerically at the bindings.
    bool numeric = false;
};

struct Outcome {
    std::string quantity;
    bool divergent = false;
    std::string diagnostic;
    ParamPoly value;
    std::optional<ParamPoly> expected;
    /// Several values, e.g. the critical points of a potential.
    std::vector<ParamPoly> values;
    std::vector<ParamPoly> expected_values;
    std::optional<complex> numeric_value;
    std::vector<double> numeric_values;
    bool pass = true;
    std::vector<DerivationStep> trace;
};

struct ModelRun {
    std::string model;
    BranchPolicy policy = BranchPolicy::paper;
    int series_order = default_series_order;
    std::vector<Outcome> outcomes;

    bool passed() const;
};

/// Exact match after canonicalization, else agreement at 10 random positive
/// bindings to 1e-9 relative.
bool matches_expected(const ParamPoly &value, const ParamPoly &expected, const std::vector<Param> &params);

ModelRun run_model(const ModelSpec &model, const RunOptions &opt = {});

struct RegistryEntry {
    std::string name;
    std::string description;
    std::vector<std::pair<std::string, std::string>> expected;
};

class Registry
{
public:
    /// The bundled models.
    Registry();

    void add(ModelSpec m);
    const ModelSpec &find(const std::string &name) const;
    std::vector<RegistryEntry> list() const;
    const std::vector<ModelSpec> &models() const { return models_; }

private:
    std::vector<ModelSpec> models_;
};

ModelRun run_model(const std::string &name, const RunOptions &opt = {}, const Registry &registry = Registry());

} // namespace zreg

#endif
