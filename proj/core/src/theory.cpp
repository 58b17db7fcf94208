#include "csflock/theory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <utility>

#include "csflock/errors.hpp"

namespace csflock::theory {

namespace {

constexpr double kSqrt2 = std::numbers::sqrt2;

double algebraic(double z, double r, double s, double c1, double c2) {
    return std::pow(z, r) - c1 * std::pow(z, s) - c2;
}

// Returns {lo, hi} with F(lo) <= 0 < F(hi) and hi the next representable
// double above lo (or as close as 200 halvings get).
std::pair<double, double> bracket_positive_zero(double r, double s, double c1, double c2) {
    if (!(c1 > 0.0) || !(c2 > 0.0) || !(s > 0.0) || !(r > s) || !std::isfinite(r) ||
        !std::isfinite(c1) || !std::isfinite(c2)) {
        std::ostringstream msg;
        msg << "unique_positive_zero needs c1, c2 > 0 and r > s > 0 (got r=" << r << ", s=" << s
            << ", c1=" << c1 << ", c2=" << c2 << ")";
        throw ParameterError(msg.str());
    }
    const double bound = positive_zero_bound(r, s, c1, c2);
    if (!std::isfinite(bound)) throw ParameterError("positive zero may exceed the double range");
    double lo = 0.0;
    double hi = bound * (1.0 + 1e-6);
    for (int k = 0; k < 2000 && algebraic(hi, r, s, c1, c2) <= 0.0; ++k) {
        lo = hi;
        hi *= 2.0;
    }
    if (!(algebraic(hi, r, s, c1, c2) > 0.0)) throw ParameterError("failed to bracket the positive zero");

    for (int iter = 0; iter < 200; ++iter) {
        const double mid = lo + 0.5 * (hi - lo);
        if (mid <= lo || mid >= hi) break;
        if (algebraic(mid, r, s, c1, c2) <= 0.0)
            lo = mid;
        else
            hi = mid;
    }
    return {lo, hi};
}

}  // namespace

double norm_equivalence_lambda(std::size_t n, std::size_t d) {
    if (n < 2) throw InvariantError("norm equivalence needs N >= 2");
    if (d < 1) throw InvariantError("norm equivalence needs d >= 1");
    return std::sqrt(static_cast<double>(d) * static_cast<double>(n - 1));
}

std::uint64_t block_length(std::size_t n) {
    const std::uint64_t m = n > 0 ? n - 1 : 0;
    return m * m;
}

double product_decay_bound(std::uint64_t t, double h, double R, std::size_t n) {
    const double hr = h * R;
    if (!(hr > 0.0) || !(hr < 1.0)) {
        std::ostringstream msg;
        msg << "product decay bound needs 0 < hR < 1 (h=" << h << ", R=" << R << ")";
        throw ParameterError(msg.str());
    }
    const std::uint64_t block = std::max<std::uint64_t>(block_length(n), 1);
    const double base = 1.0 - std::pow(hr, static_cast<double>(block));
    const std::uint64_t exponent = (t + 1) / block;
    return std::pow(base, static_cast<double>(exponent));
}

CertificateInputs inputs_from_state(const FlockState& state, const FlockParams& params,
                                    std::optional<double> lambda) {
    CertificateInputs in;
    in.params = params;
    in.x0_hat_norm = dynamics::reference(state).xhat.norm();
    in.v0_norm = state.v.norm();
    in.v0_inf_norm = state.v.size() ? state.v.cwiseAbs().maxCoeff() : 0.0;
    in.lambda = lambda ? *lambda : norm_equivalence_lambda(params.n, params.d);
    return in;
}

double vhat_envelope(std::uint64_t t, const CertificateInputs& inputs, double R) {
    return 2.0 * product_decay_bound(t, inputs.params.h, R, inputs.params.n) * inputs.v0_inf_norm;
}

double positive_zero_bound(double r, double s, double c1, double c2) {
    return std::max(std::pow(2.0 * c1, 1.0 / (r - s)), std::pow(2.0 * c2, 1.0 / r));
}

double unique_positive_zero(double r, double s, double c1, double c2) {
    return bracket_positive_zero(r, s, c1, c2).first;
}

std::string to_string(CertificateCase c) {
    switch (c) {
        case CertificateCase::Subcritical: return "subcritical";
        case CertificateCase::Critical: return "critical";
        case CertificateCase::Supercritical: return "supercritical";
    }
    return "unknown";
}

CertificateReport certify(const CertificateInputs& inputs) {
    const auto& p = inputs.params;
    dynamics::validate(p);
    if (p.n < 2) throw ParameterError("certificates need at least two agents");
    if (!p.certifiable_step()) {
        std::ostringstream msg;
        msg << "certificate refused: h=" << p.h << " is not below 1/(N+1)="
            << 1.0 / (static_cast<double>(p.n) + 1.0);
        throw ParameterError(msg.str());
    }
    if (!(inputs.lambda >= 1.0)) throw ParameterError("lambda must be at least 1");
    if (inputs.x0_hat_norm < 0.0 || inputs.v0_norm < 0.0 || inputs.v0_inf_norm < 0.0)
        throw ParameterError("norms must be nonnegative");

    CertificateReport rep;
    rep.block = block_length(p.n);
    const double block = static_cast<double>(rep.block);
    const double n = static_cast<double>(p.n);
    const double v0 = inputs.v0_norm;
    rep.lambda = inputs.lambda;
    rep.s = 2.0 * p.beta * block;
    rep.a = 2.0 * kSqrt2 * inputs.lambda * std::pow(p.h, 1.0 - block) * block * v0;
    rep.b = 1.0 + kSqrt2 * inputs.x0_hat_norm;

    if (std::abs(rep.s - 1.0) <= 1e-12)
        rep.which = CertificateCase::Critical;
    else if (rep.s < 1.0)
        rep.which = CertificateCase::Subcritical;
    else
        rep.which = CertificateCase::Supercritical;

    // Upper bound on Z = (1 + 2 |xhat|^2)^(1/2) along the trajectory.
    std::optional<double> z_bound;
    std::optional<double> b0_direct;

    switch (rep.which) {
        case CertificateCase::Subcritical: {
            rep.hypothesis_holds = true;
            if (rep.a == 0.0)
                z_bound = rep.b;
            else if (rep.s == 0.0)
                z_bound = rep.a + rep.b;
            else if (!std::isfinite(positive_zero_bound(1.0, rep.s, rep.a, rep.b)))
                z_bound = std::numeric_limits<double>::infinity();
            else
                z_bound = bracket_positive_zero(1.0, rep.s, rep.a, rep.b).second;
            break;
        }
        case CertificateCase::Critical: {
            rep.hypothesis_lhs = std::pow(p.h, block - 1.0) / (2.0 * kSqrt2 * block * inputs.lambda);
            rep.hypothesis_rhs = v0;
            rep.hypothesis_holds = rep.hypothesis_lhs > rep.hypothesis_rhs;
            if (rep.hypothesis_holds) {
                const double ratio = rep.b / (1.0 - rep.a);
                b0_direct = 0.5 * kSqrt2 * std::sqrt(std::max(ratio * ratio - 1.0, 0.0));
            }
            break;
        }
        case CertificateCase::Supercritical: {
            if (rep.a == 0.0) {
                rep.hypothesis_holds = true;
                z_bound = rep.b;
                break;
            }
            const double e = 1.0 / (rep.s - 1.0);
            const double inv_s = 1.0 / rep.s;
            rep.hypothesis_lhs =
                std::pow(1.0 / rep.a, e) * (std::pow(inv_s, e) - std::pow(inv_s, rep.s * e)) - rep.b;
            rep.hypothesis_rhs = 8.0 * inputs.lambda * inputs.lambda * v0 * v0 *
                                     std::pow(rep.s, e) * std::pow(rep.a, e) / (n * n) +
                                 4.0 * kSqrt2 * inputs.lambda * v0 / n;
            rep.hypothesis_holds = rep.hypothesis_lhs > rep.hypothesis_rhs;
            if (rep.hypothesis_holds) z_bound = std::pow(1.0 / (rep.s * rep.a), e);
            break;
        }
    }

    if (!rep.hypothesis_holds) return rep;
    if (z_bound) b0_direct = std::sqrt(std::max((*z_bound * *z_bound - 1.0) / 2.0, 0.0));
    rep.B0 = *b0_direct;
    rep.R = std::pow(1.0 + 2.0 * *rep.B0 * *rep.B0, -p.beta);
    rep.decay_base = 1.0 - std::pow(p.h * *rep.R, block);
    return rep;
}

DecayMeasurement measured_decay(std::span<const ReferenceState> trajectory) {
    if (trajectory.size() < 2) throw InvariantError("decay measurement needs at least two states");
    DecayMeasurement m;
    m.vhat_inf_series.reserve(trajectory.size());
    std::vector<std::size_t> live;
    for (std::size_t t = 0; t < trajectory.size(); ++t) {
        const auto& ref = trajectory[t];
        m.sup_xhat = std::max(m.sup_xhat, ref.xhat.norm());
        const double vinf = ref.vhat.size() ? ref.vhat.cwiseAbs().maxCoeff() : 0.0;
        m.vhat_inf_series.push_back(vinf);
        if (vinf > kRateFloor) live.push_back(t);
    }
    m.exact_consensus = std::all_of(m.vhat_inf_series.begin(), m.vhat_inf_series.end(),
                                    [](double x) { return x == 0.0; });

    const std::size_t first = live.size() / 2;
    const std::size_t count = live.size() - first;
    if (count < 2) return m;
    m.rate_available = true;

    double mt = 0.0, my = 0.0;
    for (std::size_t k = first; k < live.size(); ++k) {
        mt += static_cast<double>(live[k]);
        my += std::log(m.vhat_inf_series[live[k]]);
    }
    mt /= static_cast<double>(count);
    my /= static_cast<double>(count);
    double sty = 0.0, stt = 0.0;
    for (std::size_t k = first; k < live.size(); ++k) {
        const double dt = static_cast<double>(live[k]) - mt;
        sty += dt * (std::log(m.vhat_inf_series[live[k]]) - my);
        stt += dt * dt;
    }
    m.fitted_rate = stt > 0.0 ? sty / stt : 0.0;
    return m;
}

}  // namespace csflock::theory
