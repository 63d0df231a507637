#pragma once

// Nonlinear glucose-insulin plant dynamics: the minimal Bergman model and
// the simplified Tolic model, both written in shifted coordinates so that
// the regulated glucose deviation is a state. Parameter defaults follow the
// standard published tables; everything is overridable through the config
// layer.

#include <Eigen/Dense>

#include <functional>
#include <string>

namespace glucostat::models {

/// Minimal Bergman model parameters. Units: rates in 1/min, volumes in L,
/// concentrations in mg/dl (glucose) and mU/L (insulin).
///
/// g_b defaults to 81 mg/dl (4.5 mmol/L converted) so that it lives on the
/// same scale as the premise bounds a1/a2.
struct BergmanParams {
    double p1 = 0.0;
    double p2 = 0.025;
    double p3 = 0.000013;
    double v1 = 12.0;
    double n = 0.0926;
    double g_b = 81.0;
    double i_b = 15.0;
    double a1 = 60.0;  // lower bound of admissible plasma glucose, mg/dl
    double a2 = 120.0; // upper bound, mg/dl

    /// Throws std::invalid_argument if any structural invariant is violated.
    void validate() const;
};

/// Bergman state in deviation coordinates: glucose above basal, insulin
/// above basal, remote-compartment insulin action.
struct BergmanState {
    double g = 0.0; // mg/dl
    double i = 0.0; // mU/L
    double x = 0.0; // 1/min

    Eigen::Vector3d vec() const { return {g, i, x}; }
    static BergmanState from(const Eigen::Vector3d& v) { return {v[0], v[1], v[2]}; }
};

/// Simplified Tolic model coefficients (a..r) plus the operating-point
/// shift and validity box used by the fuzzy construction.
///
/// b_u scales the physical pump rate into the transformed input channel.
/// It is not part of the published parameter table; the default of 1 is a
/// placeholder and should be calibrated before interpreting pump rates
/// physically (see README).
struct TolicParams {
    double a = -0.233;
    double b = 0.0182;
    double c = 4.79e-3;
    double d = -43.9;
    double e = 0.0667;
    double f = -0.0282;
    double g = -9.44e-5;
    double h = 2.64e-3;
    double k = 17.5;
    double l = -0.315;
    double n = 1.48e-3;
    double p = 80.5;
    double r = 0.0833;
    double g_op = 80.0;    // operating glucose level, mg/dl
    double b_u = 1.0;      // pump-to-input scaling (unspecified upstream)
    double g_range = 30.0; // |g'| validity half-width, mg/dl
    double x3_range = 10.0; // |x3| validity half-width, mU

    void validate() const;
};

/// Tolic state: plasma insulin, interstitial insulin, shifted glucose and
/// the three delay-chain auxiliaries.
struct TolicState {
    double i_p = 0.0;
    double i_i = 0.0;
    double g_prime = 0.0;
    double x1 = 0.0;
    double x2 = 0.0;
    double x3 = 0.0;

    Eigen::Matrix<double, 6, 1> vec() const;
    static TolicState from(const Eigen::Matrix<double, 6, 1>& v);
};

/// Exponential meal disturbance alpha * exp(-decay * t).
struct MealDisturbance {
    double alpha = 1.0; // dimensionless amplitude
    double decay = 0.05; // 1/min

    void validate() const;
};

/// Right-hand side of the Bergman model in deviation coordinates with the
/// transformed input u* (so that u* = 0 holds the basal equilibrium).
BergmanState bergman_derivative(const BergmanState& s, double u_star, double v,
                                const BergmanParams& p);

/// Right-hand side of the shifted Tolic model. u_star enters the plasma
/// insulin row, v_star the glucose row.
TolicState tolic_derivative(const TolicState& s, double u_star, double v_star,
                            const TolicParams& p);

/// Meal disturbance value at time t >= 0 (minutes).
double meal_disturbance(double t, const MealDisturbance& m);

/// Generic plant facade used by the equilibrium finder and the simulator:
/// an autonomous-in-time RHS with one input and one disturbance channel.
struct Plant {
    int dim = 0;
    std::string name;
    std::function<Eigen::VectorXd(const Eigen::VectorXd& x, double u, double v)> rhs;
};

Plant bergman_plant(const BergmanParams& p);
Plant tolic_plant(const TolicParams& p);

struct EquilibriumResult {
    Eigen::VectorXd x;
    double residual = 0.0; // final ||f||_inf
    int iterations = 0;
    bool converged = false;
};

/// Damped Newton search for f(x, u, v) = 0 with a central-difference
/// Jacobian. Never throws on non-convergence; the result carries the last
/// residual instead.
EquilibriumResult find_equilibrium(const Plant& plant, double u_fixed, double v_fixed,
                                   const Eigen::VectorXd& guess, double tol = 1e-10,
                                   int max_iter = 100);

} // namespace glucostat::models
