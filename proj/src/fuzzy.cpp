#include "glucostat/fuzzy.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace glucostat::fuzzy {

using Eigen::MatrixXd;
using Eigen::VectorXd;

SectorBounds derive_sector_bounds(SectorKind kind, const std::vector<double>& coeffs,
                                  double lo, double hi) {
    if (!(lo <= hi) || !std::isfinite(lo) || !std::isfinite(hi))
        throw std::invalid_argument("derive_sector_bounds: degenerate range");

    auto eval = [&](double x) {
        switch (kind) {
            case SectorKind::kLinear:
                return coeffs.at(0) * x;
            case SectorKind::kQuadratic:
                return coeffs.at(0) * x + coeffs.at(1) * x * x;
        }
        throw std::logic_error("derive_sector_bounds: bad kind");
    };

    double zmin = std::min(eval(lo), eval(hi));
    double zmax = std::max(eval(lo), eval(hi));
    if (kind == SectorKind::kQuadratic && coeffs.at(1) != 0.0) {
        const double vertex = -coeffs.at(0) / (2.0 * coeffs.at(1));
        if (vertex > lo && vertex < hi) {
            const double zv = eval(vertex);
            zmin = std::min(zmin, zv);
            zmax = std::max(zmax, zv);
        }
    }
    return {zmin, zmax};
}

namespace {

// Builds the 2^P rule list from per-premise vertex injectors. vertex(p, hi)
// patches the shared template matrix with premise p at its lower or upper
// bound; premise 0 is the most significant index bit.
TsModel assemble(const MatrixXd& a_template,
                 const std::vector<std::function<void(MatrixXd&, bool)>>& inject,
                 const std::vector<Premise>& premises, const MatrixXd& b,
                 const MatrixXd& e, const MatrixXd& c, const MatrixXd& d) {
    TsModel model;
    model.premises = premises;
    const int pcount = static_cast<int>(premises.size());
    const int rules = 1 << pcount;
    for (int idx = 0; idx < rules; ++idx) {
        TsRule rule;
        rule.a = a_template;
        for (int pi = 0; pi < pcount; ++pi) {
            const bool hi = ((idx >> (pcount - 1 - pi)) & 1) != 0;
            inject[pi](rule.a, hi);
        }
        rule.b = b;
        rule.e = e;
        rule.c = c;
        rule.d = d;
        model.rules.push_back(std::move(rule));
    }
    return model;
}

} // namespace

TsModel bergman_ts_model(const models::BergmanParams& p) {
    p.validate();

    MatrixXd a(3, 3);
    a << -p.p1, 0.0, 0.0,
         0.0, -p.n, 0.0,
         0.0, p.p3, -p.p2;

    MatrixXd b = MatrixXd::Zero(3, 1);
    b(1, 0) = 1.0; // u* enters the insulin row
    MatrixXd e = MatrixXd::Zero(3, 1);
    e(0, 0) = 1.0; // disturbance enters the glucose row
    MatrixXd c = MatrixXd::Zero(1, 3);
    c(0, 0) = 1.0; // regulated output: glucose deviation
    MatrixXd d = MatrixXd::Zero(1, 1);

    Premise glucose;
    glucose.lo = p.a1;
    glucose.hi = p.a2;
    const double g_b = p.g_b;
    glucose.value = [g_b](const VectorXd& x) { return x[0] + g_b; };

    const double a1 = p.a1, a2 = p.a2;
    std::vector<std::function<void(MatrixXd&, bool)>> inject = {
        [a1, a2](MatrixXd& m, bool hi) { m(0, 2) = hi ? -a2 : -a1; },
    };
    return assemble(a, inject, {glucose}, b, e, c, d);
}

TolicBounds derived_tolic_bounds(const models::TolicParams& p) {
    const SectorBounds z1 =
        derive_sector_bounds(SectorKind::kLinear, {p.g}, -p.g_range, p.g_range);
    const SectorBounds z2 =
        derive_sector_bounds(SectorKind::kQuadratic, {p.l, p.n}, -p.x3_range, p.x3_range);
    return {z1.lo, z1.hi, z2.lo, z2.hi};
}

TolicBounds printed_tolic_bounds() { return {-0.0057, 0.0057, -3.01, 3.29}; }

TsModel tolic_ts_model(const models::TolicParams& p,
                       std::optional<TolicBounds> bounds_override) {
    p.validate();
    const TolicBounds bounds = bounds_override.value_or(derived_tolic_bounds(p));
    if (!(bounds.m11 < bounds.m12) || !(bounds.m21 < bounds.m22))
        throw std::invalid_argument("tolic_ts_model: bounds must satisfy m11<m12 and m21<m22");

    MatrixXd a(6, 6);
    a << p.a, p.b, p.c, 0.0, 0.0, 0.0,
         p.e, p.f, 0.0, 0.0, 0.0, 0.0,
         0.0, 0.0, p.h, 0.0, 0.0, 0.0,
         p.r, 0.0, 0.0, -p.r, 0.0, 0.0,
         0.0, 0.0, 0.0, p.r, -p.r, 0.0,
         0.0, 0.0, 0.0, 0.0, p.r, -p.r;

    MatrixXd b = MatrixXd::Zero(6, 1);
    b(0, 0) = 1.0; // u* enters the plasma-insulin row
    MatrixXd e = MatrixXd::Zero(6, 1);
    e(2, 0) = 1.0; // v* enters the glucose row
    MatrixXd c = MatrixXd::Zero(1, 6);
    c(0, 2) = 1.0; // regulated output: shifted glucose
    MatrixXd d = MatrixXd::Zero(1, 1);

    Premise z1; // g * g'
    z1.lo = bounds.m11;
    z1.hi = bounds.m12;
    const double g_coeff = p.g;
    z1.value = [g_coeff](const VectorXd& x) { return g_coeff * x[2]; };

    Premise z2; // l*x3 + n*x3^2
    z2.lo = bounds.m21;
    z2.hi = bounds.m22;
    const double l = p.l, n = p.n;
    z2.value = [l, n](const VectorXd& x) { return l * x[5] + n * x[5] * x[5]; };

    const double gg_op = p.g * p.g_op;
    const double k = p.k;
    std::vector<std::function<void(MatrixXd&, bool)>> inject = {
        [&bounds, gg_op](MatrixXd& m, bool hi) {
            m(2, 1) = (hi ? bounds.m12 : bounds.m11) + gg_op;
        },
        [&bounds, k](MatrixXd& m, bool hi) {
            m(2, 5) = k + (hi ? bounds.m22 : bounds.m21);
        },
    };
    return assemble(a, inject, {z1, z2}, b, e, c, d);
}

Eigen::VectorXd memberships(const TsModel& model, const Eigen::VectorXd& x) {
    const int pcount = static_cast<int>(model.premises.size());
    const int rules = model.rule_count();
    if (rules != (1 << pcount))
        throw std::invalid_argument("memberships: rule count does not match premises");
    if (x.size() != model.state_dim())
        throw std::invalid_argument("memberships: state dimension mismatch");

    // per-premise upper-bound weight, clamped to [0, 1]
    std::vector<double> w_hi(pcount);
    for (int pi = 0; pi < pcount; ++pi) {
        const Premise& pr = model.premises[pi];
        const double z = pr.value(x);
        const double t = (z - pr.lo) / (pr.hi - pr.lo);
        w_hi[pi] = std::clamp(t, 0.0, 1.0);
    }

    VectorXd h(rules);
    for (int idx = 0; idx < rules; ++idx) {
        double w = 1.0;
        for (int pi = 0; pi < pcount; ++pi) {
            const bool hi = ((idx >> (pcount - 1 - pi)) & 1) != 0;
            w *= hi ? w_hi[pi] : 1.0 - w_hi[pi];
        }
        h[idx] = w;
    }
    return h;
}

Eigen::VectorXd blend_dynamics(const TsModel& model, const Eigen::VectorXd& x,
                               const Eigen::VectorXd& u, const Eigen::VectorXd& v) {
    if (x.size() != model.state_dim() || u.size() != model.input_dim() ||
        v.size() != model.dist_dim())
        throw std::invalid_argument("blend_dynamics: dimension mismatch");
    const VectorXd h = memberships(model, x);
    VectorXd dot = VectorXd::Zero(model.state_dim());
    for (int i = 0; i < model.rule_count(); ++i) {
        const TsRule& r = model.rules[i];
        dot += h[i] * (r.a * x + r.b * u + r.e * v);
    }
    return dot;
}

Eigen::VectorXd pdc_control(const PdcController& ctrl, const Eigen::VectorXd& h,
                            const Eigen::VectorXd& x) {
    if (ctrl.gains.empty() || static_cast<int>(ctrl.gains.size()) != h.size())
        throw std::invalid_argument("pdc_control: gain/membership length mismatch");
    VectorXd u = VectorXd::Zero(ctrl.gains[0].rows());
    for (size_t i = 0; i < ctrl.gains.size(); ++i) {
        if (ctrl.gains[i].cols() != x.size())
            throw std::invalid_argument("pdc_control: gain/state dimension mismatch");
        u += h[static_cast<int>(i)] * (ctrl.gains[i] * x);
    }
    return u;
}

} // namespace glucostat::fuzzy
