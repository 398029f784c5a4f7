#ifndef ZREG_ENGINE_HPP
#define ZREG_ENGINE_HPP

#include <zreg/asymptotic.hpp>
#include <zreg/symbol.hpp>
#include <zreg/tables.hpp>

#include <optional>
#include <string>
#include <vector>

namespace zreg
{

class UncoveredAxis : public Error
{
public:
    using Error::Error;
};

class ZeroQuadraticCoefficient : public Error
{
public:
    using Error::Error;
};

class CriticalDegree : public Error
{
public:
    using Error::Error;
};

class LogOfNonmonomial : public Error
{
public:
    using Error::Error;
};

class UnsolvablePotential : public Error
{
public:
    using Error::Error;
};

struct DerivationStep {
    std::string stage;
    std::string detail;
};

struct NamedObservable {
    std::string name;
    Observable observable;
    std::optional<ParamPoly> expected;
};

/// A result obtained from another observable by a constant factor.
struct DerivedObservable {
    std::string name;
    std::string source;
    ParamPoly factor;
    std::optional<ParamPoly> expected;
};

struct ModelSpec {
    std::string name;
    std::string description;
    std::vector<Param> params;
    std::vector<Axis> axes;
    /// Gauge groups in elimination order; empty means order of appearance.
    std::vector<std::string> regulator_order;
    /// Evolution factor e^{-i T phase_scale H}.
    ParamPoly phase_scale = ParamPoly(1.0);
    AxisPoly hamiltonian;
    std::optional<MatrixSymbol> matrix;
    ParamPoly measure = ParamPoly(1.0);
    /// Opaque factors shared by numerator and denominator.
    std::vector<CancellingFactor> tokens;
    std::vector<NamedObservable> observables;
    std::vector<DerivedObservable> derived;

    /// Non-empty for effective-potential models: the field axis.
    std::string field;
    std::vector<ParamPoly> expected_critical_points;
    std::vector<ParamPoly> expected_minima;
    std::optional<ParamPoly> expected_mass;

    ExprContext context() const;
    /// Numeric defaults of the parameters.
    Bindings default_bindings() const;
    std::vector<std::string> regulators() const;
};

/// Integrand term: coeff * prod u_a^{powers} * angular * e^{-i T scale sigma}.
struct IntegrandTerm {
    ParamPoly coeff = ParamPoly(1.0);
    std::map<std::string, int> powers;
    AngularPoly angular = AngularPoly(1, ParamPoly(1.0));
    PhaseDecomposition phase;
    std::vector<CancellingFactor> tokens;
};

struct AxisGauge {
    std::string regulator;
    Rational share;
};

struct GaugedTraceIntegrand {
    std::vector<Axis> axes;
    std::map<std::string, AxisGauge> gauge;
    std::vector<std::string> regulators;
    std::vector<IntegrandTerm> terms;
    std::vector<CancellingFactor> tokens;
    ParamPoly measure = ParamPoly(1.0);
    std::vector<DerivationStep> trace;
};

/// Trace integrand of the model for one composed symbol (ungauged).
GaugedTraceIntegrand build_integrand(const ModelSpec &model, const std::vector<TraceTerm> &terms);

/// Inserts |u|^{z/k} per axis for a group of k axes under regulator z.
GaugedTraceIntegrand apply_gauge(GaugedTraceIntegrand g, const std::vector<std::string> &regulator_order);

/// Shifts the axis so its phase is purely quadratic. The constant phase
/// becomes a cancelling factor and the gauge is kept as |v|^{z/k} in the
/// shifted variable.
GaugedTraceIntegrand complete_square(GaugedTraceIntegrand g, const std::string &axis);

/// Closed-form reduction to a term sum.
ZetaTermSum reduce(const GaugedTraceIntegrand &g, BranchPolicy policy);

struct ExpectationResult {
    std::string model;
    std::string observable;
    bool divergent = false;
    ParamPoly value;
    std::string diagnostic;
    TAsymptote finite_T;
    std::vector<LimitDiagnostic> diagnostics;
    BranchPolicy branch = BranchPolicy::paper;
    int series_order = default_series_order;
    std::vector<DerivationStep> trace;
};

/// Numerator and denominator sums of an expectation, same gauge.
struct ExpectationSums {
    ZetaTermSum numerator;
    ZetaTermSum denominator;
    GaugedTraceIntegrand numerator_integrand;
    GaugedTraceIntegrand denominator_integrand;
};

ExpectationSums expectation_sums(const ModelSpec &model, const Observable &obs, BranchPolicy policy);

ExpectationResult expectation(const ModelSpec &model, const NamedObservable &obs, BranchPolicy policy,
                              int K = default_series_order);

struct KVAmplitudeSpec {
    int N = 1;
    PolyhomAmplitude amplitude;
    /// Constant phase on the diagonal.
    double theta = 0.0;
    ParamPoly volume = ParamPoly(1.0);
};

/// Value at zero of the gauged trace of a polyhomogeneous amplitude whose
/// homogeneous terms live on ||xi|| >= 1.
ParamPoly kv_trace_at_zero(const KVAmplitudeSpec &spec);

struct CriticalPoint {
    ParamPoly location;
    ParamPoly curvature;
    bool minimum = false;
};

struct EffectivePotential {
    ParamPoly potential;
    ParamPoly residual;
    std::vector<CriticalPoint> critical_points;
    std::vector<ParamPoly> minima;
    std::vector<ParamPoly> masses;
    std::vector<DerivationStep> trace;
};

EffectivePotential effective_potential(const ModelSpec &model, BranchPolicy policy, int K = default_series_order);

/// Critical points of a potential in `field` from the stationary polynomial.
EffectivePotential solve_potential(const ParamPoly &potential, const std::string &field,
                                   const Bindings &classify_at = {});

struct NumericPotential {
    std::vector<double> critical_points;
    std::vector<double> minima;
    std::vector<double> masses;
};

/// Root finding on the bound potential.
NumericPotential solve_potential_numeric(const ParamPoly &potential, const std::string &field,
                                         const Bindings &bindings);

ParamPoly derivative(const ParamPoly &p, const std::string &name);
ParamPoly substitute(const ParamPoly &p, const std::string &name, const ParamPoly &value);

} // namespace zreg

#endif
