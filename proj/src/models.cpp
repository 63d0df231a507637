#include "glucostat/models.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace glucostat::models {

namespace {

void require(bool ok, const char* what) {
    if (!ok) throw std::invalid_argument(std::string("models: ") + what);
}

bool all_finite(const Eigen::VectorXd& v) { return v.allFinite(); }

} // namespace

void BergmanParams::validate() const {
    require(p2 > 0.0, "p2 must be positive");
    require(n > 0.0, "n must be positive");
    require(v1 > 0.0, "v1 must be positive");
    require(a1 > 0.0, "a1 must be positive");
    require(a1 < a2, "a1 must be below a2");
    require(std::isfinite(p1) && std::isfinite(p3) && std::isfinite(g_b) && std::isfinite(i_b),
            "parameters must be finite");
}

void TolicParams::validate() const {
    require(r > 0.0, "r must be positive");
    require(g_range > 0.0, "g_range must be positive");
    require(x3_range > 0.0, "x3_range must be positive");
    require(b_u != 0.0, "b_u must be nonzero");
    for (double v : {a, b, c, d, e, f, g, h, k, l, n, p, g_op})
        require(std::isfinite(v), "parameters must be finite");
}

void MealDisturbance::validate() const {
    require(alpha >= 0.0, "alpha must be nonnegative");
    require(decay > 0.0, "decay must be positive");
}

Eigen::Matrix<double, 6, 1> TolicState::vec() const {
    Eigen::Matrix<double, 6, 1> v;
    v << i_p, i_i, g_prime, x1, x2, x3;
    return v;
}

TolicState TolicState::from(const Eigen::Matrix<double, 6, 1>& v) {
    return {v[0], v[1], v[2], v[3], v[4], v[5]};
}

BergmanState bergman_derivative(const BergmanState& s, double u_star, double v,
                                const BergmanParams& p) {
    if (!s.vec().allFinite() || !std::isfinite(u_star) || !std::isfinite(v))
        throw std::invalid_argument("bergman_derivative: non-finite input");
    BergmanState dot;
    dot.g = -p.p1 * s.g - s.x * (s.g + p.g_b) + v;
    dot.i = -p.n * s.i + u_star;
    dot.x = -p.p2 * s.x + p.p3 * s.i;
    return dot;
}

TolicState tolic_derivative(const TolicState& s, double u_star, double v_star,
                            const TolicParams& p) {
    if (!s.vec().allFinite() || !std::isfinite(u_star) || !std::isfinite(v_star))
        throw std::invalid_argument("tolic_derivative: non-finite input");
    TolicState dot;
    dot.i_p = p.a * s.i_p + p.b * s.i_i + p.c * s.g_prime + u_star;
    dot.i_i = p.e * s.i_p + p.f * s.i_i;
    // k*x3 + l*x3^2 + n*x3^3 evaluated in factored form (k + l*x3 + n*x3^2)*x3
    dot.g_prime = (p.g * s.g_prime + p.g * p.g_op) * s.i_i + p.h * s.g_prime +
                  (p.k + p.l * s.x3 + p.n * s.x3 * s.x3) * s.x3 + v_star;
    dot.x1 = p.r * s.i_p - p.r * s.x1;
    dot.x2 = p.r * s.x1 - p.r * s.x2;
    dot.x3 = p.r * s.x2 - p.r * s.x3;
    return dot;
}

double meal_disturbance(double t, const MealDisturbance& m) {
    if (t < 0.0) throw std::invalid_argument("meal_disturbance: t must be nonnegative");
    m.validate();
    return m.alpha * std::exp(-m.decay * t);
}

Plant bergman_plant(const BergmanParams& p) {
    p.validate();
    Plant plant;
    plant.dim = 3;
    plant.name = "bergman";
    plant.rhs = [p](const Eigen::VectorXd& x, double u, double v) -> Eigen::VectorXd {
        BergmanState s = BergmanState::from(x.head<3>());
        return bergman_derivative(s, u, v, p).vec();
    };
    return plant;
}

Plant tolic_plant(const TolicParams& p) {
    p.validate();
    Plant plant;
    plant.dim = 6;
    plant.name = "tolic";
    plant.rhs = [p](const Eigen::VectorXd& x, double u, double v) -> Eigen::VectorXd {
        TolicState s = TolicState::from(x.head<6>());
        return tolic_derivative(s, u, v, p).vec();
    };
    return plant;
}

EquilibriumResult find_equilibrium(const Plant& plant, double u_fixed, double v_fixed,
                                   const Eigen::VectorXd& guess, double tol, int max_iter) {
    if (tol <= 0.0) throw std::invalid_argument("find_equilibrium: tol must be positive");
    if (guess.size() != plant.dim)
        throw std::invalid_argument("find_equilibrium: guess dimension mismatch");

    const int n = plant.dim;
    auto f = [&](const Eigen::VectorXd& x) { return plant.rhs(x, u_fixed, v_fixed); };

    EquilibriumResult res;
    res.x = guess;
    Eigen::VectorXd fx = f(res.x);
    res.residual = fx.lpNorm<Eigen::Infinity>();

    for (int it = 0; it < max_iter; ++it) {
        res.iterations = it;
        if (!all_finite(fx)) break;
        if (res.residual <= tol) {
            res.converged = true;
            return res;
        }
        // central-difference Jacobian
        Eigen::MatrixXd jac(n, n);
        for (int j = 0; j < n; ++j) {
            const double h = 1e-6 * std::max(1.0, std::abs(res.x[j]));
            Eigen::VectorXd xp = res.x, xm = res.x;
            xp[j] += h;
            xm[j] -= h;
            jac.col(j) = (f(xp) - f(xm)) / (2.0 * h);
        }
        Eigen::VectorXd step = jac.fullPivLu().solve(-fx);
        if (!all_finite(step)) break;

        // damping: halve until the residual does not increase
        double lambda = 1.0;
        bool accepted = false;
        for (int k = 0; k < 40; ++k) {
            Eigen::VectorXd xn = res.x + lambda * step;
            Eigen::VectorXd fn = f(xn);
            if (all_finite(fn) && fn.lpNorm<Eigen::Infinity>() < res.residual) {
                res.x = xn;
                fx = fn;
                res.residual = fn.lpNorm<Eigen::Infinity>();
                accepted = true;
                break;
            }
            lambda *= 0.5;
        }
        if (!accepted) break; // stalled; report last residual
    }
    res.converged = res.residual <= tol;
    return res;
}

} // namespace glucostat::models
