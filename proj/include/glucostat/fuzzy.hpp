#pragma once

// Sector-nonlinearity Takagi-Sugeno construction for the two glucose
// models, membership evaluation with out-of-range clamping, defuzzified
// dynamics and the PDC control law.
//
// A model with P premise variables has 2^P rules ordered so that premise 0
// is the most significant bit: rule index 0 pairs every premise with its
// lower sector bound, the last rule with every upper bound.

#include <Eigen/Dense>

#include <functional>
#include <optional>
#include <vector>

#include "glucostat/models.hpp"

namespace glucostat::fuzzy {

/// One vertex rule of a TS model: dx = A x + B u + E v, y = C x + D v.
struct TsRule {
    Eigen::MatrixXd a;
    Eigen::MatrixXd b;
    Eigen::MatrixXd e;
    Eigen::MatrixXd c;
    Eigen::MatrixXd d;
};

/// A scalar premise nonlinearity together with its sector bounds.
struct Premise {
    std::function<double(const Eigen::VectorXd&)> value;
    double lo = 0.0;
    double hi = 0.0;
};

struct TsModel {
    std::vector<TsRule> rules;
    std::vector<Premise> premises;

    int state_dim() const { return rules.empty() ? 0 : static_cast<int>(rules[0].a.rows()); }
    int input_dim() const { return rules.empty() ? 0 : static_cast<int>(rules[0].b.cols()); }
    int dist_dim() const { return rules.empty() ? 0 : static_cast<int>(rules[0].e.cols()); }
    int output_dim() const { return rules.empty() ? 0 : static_cast<int>(rules[0].c.rows()); }
    int rule_count() const { return static_cast<int>(rules.size()); }
};

enum class SectorKind { kLinear, kQuadratic };

struct SectorBounds {
    double lo = 0.0;
    double hi = 0.0;
};

/// Exact extremes of a premise nonlinearity over [lo, hi].
///   kLinear:     z(x) = c0 * x                (endpoints)
///   kQuadratic:  z(x) = c0 * x + c1 * x^2     (endpoints + interior vertex)
/// A point range (lo == hi) collapses both bounds to the single value; an
/// inverted range is rejected.
SectorBounds derive_sector_bounds(SectorKind kind, const std::vector<double>& coeffs,
                                  double lo, double hi);

/// Two-rule TS model of the Bergman dynamics. The rules differ only in the
/// glucose-row/x-column entry (-a1 vs -a2); the blend is exact wherever
/// a1 <= g + g_b <= a2. Output is the glucose deviation.
TsModel bergman_ts_model(const models::BergmanParams& p);

struct TolicBounds {
    double m11 = 0.0;
    double m12 = 0.0;
    double m21 = 0.0;
    double m22 = 0.0;
};

/// Sector bounds of the two Tolic premise nonlinearities over the validity
/// box: g*g' over [-g_range, g_range] and l*x3 + n*x3^2 over
/// [-x3_range, x3_range].
TolicBounds derived_tolic_bounds(const models::TolicParams& p);

/// The bound set published alongside the model. M11/M12 correspond to a
/// +-60 mg/dl glucose range rather than the stated +-30; kept available as
/// an explicit override.
TolicBounds printed_tolic_bounds();

/// Four-rule TS model of the shifted Tolic dynamics. Bounds default to
/// derive_sector_bounds output.
TsModel tolic_ts_model(const models::TolicParams& p,
                       std::optional<TolicBounds> bounds_override = std::nullopt);

/// Rule weights at a state. Premise variables are clamped to their sector
/// bounds, so the result is a partition of unity for any state.
Eigen::VectorXd memberships(const TsModel& model, const Eigen::VectorXd& x);

/// Defuzzified dynamics sum_i h_i (A_i x + B_i u + E_i v).
Eigen::VectorXd blend_dynamics(const TsModel& model, const Eigen::VectorXd& x,
                               const Eigen::VectorXd& u, const Eigen::VectorXd& v);

/// Per-rule state-feedback gains sharing the model's memberships.
struct PdcController {
    std::vector<Eigen::MatrixXd> gains;
};

/// u = sum_i h_i K_i x.
Eigen::VectorXd pdc_control(const PdcController& ctrl, const Eigen::VectorXd& h,
                            const Eigen::VectorXd& x);

} // namespace glucostat::fuzzy
