#include "anslab/analytic_weight.hpp"

#include <cmath>
#include <string>

namespace anslab {
namespace {

void check_guard(const Grid& g, Real radius) {
    const Real worst = std::abs(radius) * g.max_vertical_frequency();
    if (worst > kWeightExponentCap)
        throw WeightGuardError("apply_weight: |radius| * max|xi_n| = " + std::to_string(worst) +
                               " exceeds the overflow cap " +
                               std::to_string(kWeightExponentCap) + " (mode |xi_n| = " +
                               std::to_string(g.max_vertical_frequency()) + ")");
}

}  // namespace

SpectralField apply_weight(const SpectralField& f, Real radius) {
    const Grid& g = f.grid();
    check_guard(g, radius);
    const int nv = g.size(g.dim() - 1);
    ArrayXr w(nv);
    for (int i = 0; i < nv; ++i)
        w[i] = std::exp(radius * std::abs(g.frequency(g.dim() - 1, i)));
    ArrayXc out(g.total());
    for (std::int64_t i = 0; i < g.total(); ++i)
        out[i] = f.at(i) * w[static_cast<int>(i % nv)];
    return SpectralField(f.grid_ptr(), std::move(out));
}

VectorField apply_weight(const VectorField& v, Real radius) {
    VectorField out(v.grid_ptr());
    for (int c = 0; c < v.dim(); ++c) out[c] = apply_weight(v[c], radius);
    return out;
}

ArrayXr vertical_weight_sq(const Grid& g, Real radius) {
    check_guard(g, radius);
    const int nv = g.size(g.dim() - 1);
    ArrayXr w(nv);
    for (int i = 0; i < nv; ++i)
        w[i] = std::exp(2.0 * radius * std::abs(g.frequency(g.dim() - 1, i)));
    return w;
}

AnalyticityState theta_step(const AnalyticityState& state, Real vn_weighted_norm, Real dt) {
    if (vn_weighted_norm < 0 || !(dt > 0))
        throw std::invalid_argument("theta_step: need norm >= 0 and dt > 0");
    AnalyticityState next = state;
    next.theta += vn_weighted_norm * dt;
    next.t += dt;
    if (next.radius() < 0.5 * state.alpha)
        throw RadiusGuardError("continuation guard violated: radius " +
                               std::to_string(next.radius()) + " < alpha/2 at t = " +
                               std::to_string(next.t));
    return next;
}

Real duhamel_weighted_step_factor(int k, int j, Real dt, Real s, Real eps, Real lambda,
                                  Real theta_increment) {
    if (dt < 0 || s < 0 || eps < 0 || lambda < 0 || theta_increment < 0)
        throw std::invalid_argument("duhamel_weighted_step_factor: arguments must be nonnegative");
    const Real dissipation = std::exp2(k * s) + std::pow(eps, s) * std::exp2(j * s);
    return std::exp(-dissipation * dt) * std::exp(-lambda * std::exp2(j) * theta_increment);
}

}  // namespace anslab
